//! Executable claims over families of loops.
//!
//! Each registered [`Claim`] is a hypothesis chain followed by a set of
//! conclusions. A scan feeds it instances (a loop, a principal isotope of a
//! loop, or an isomorphic pair of loops, depending on the claim), counts how
//! many instances survive each hypothesis stage, and records a reproducible
//! [`Witness`] whenever a conclusion fails on an instance that met every
//! hypothesis. Instances that fail a hypothesis are counted as vacuous and
//! never as confirmation.

mod claims;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use claims::{claim, claims, Claim};
use claims::ClaimKind;

use crate::enumeration::{random_loop, EnumerationCursor, EnumerationMode, ISO_ORDER_CAP};
use crate::error::{LoopError, Result};
use crate::isomorphy::{canonical_form, find_isomorphism};
use crate::isotopy::IsotopismTriple;
use crate::loops::FiniteLoop;
use crate::perm::Permutation;

/// Largest order scanned exhaustively without `allow_large`.
pub const HARNESS_ORDER_CAP: usize = ISO_ORDER_CAP;

/// Witnesses kept per report.
pub const WITNESS_CAP: usize = 8;
const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    ConfirmedExhaustive,
    ConfirmedSampled,
    Counterexample,
    Vacuous,
}

impl ClaimStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimStatus::ConfirmedExhaustive => "confirmed-exhaustive",
            ClaimStatus::ConfirmedSampled => "confirmed-sampled",
            ClaimStatus::Counterexample => "counterexample",
            ClaimStatus::Vacuous => "vacuous",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScopeMode {
    Exhaustive,
    Sampled,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scope {
    pub mode: ScopeMode,
    pub orders: Vec<usize>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

/// Everything needed to reproduce a failed conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Name of the conclusion that failed.
    pub check: String,
    pub table: Vec<Vec<usize>>,
    /// Second loop of the instance: the isotope or the isomorphic partner.
    pub partner: Option<Vec<Vec<usize>>>,
    pub isomorphism: Option<Permutation>,
    pub f: Option<usize>,
    pub g: Option<usize>,
    pub triple: Option<IsotopismTriple>,
    /// Offending elements or permutations indices, claim-specific.
    pub elements: Vec<usize>,
}

/// Instance data attached to a witness.
#[derive(Debug, Clone, Default)]
pub(crate) struct WitnessContext {
    pub table: Vec<Vec<usize>>,
    pub partner: Option<Vec<Vec<usize>>>,
    pub isomorphism: Option<Permutation>,
    pub f: Option<usize>,
    pub g: Option<usize>,
    pub triple: Option<IsotopismTriple>,
}

#[derive(Debug, Clone)]
pub(crate) struct Failure {
    pub check: String,
    pub elements: Vec<usize>,
}

impl Failure {
    pub fn new(check: impl Into<String>, elements: Vec<usize>) -> Self {
        Self {
            check: check.into(),
            elements,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCount {
    pub stage: String,
    pub passed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSummary {
    pub order: usize,
    pub loops: u64,
    pub instances: u64,
    pub satisfied: u64,
    pub violations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub statement: String,
    pub scope: Scope,
    pub instances_checked: u64,
    /// Instances surviving each hypothesis stage, cumulatively.
    pub hypothesis_stages: Vec<StageCount>,
    /// Instances meeting every hypothesis.
    pub satisfied: u64,
    /// Instances rejected by some hypothesis.
    pub vacuous: u64,
    /// Instances whose conclusions failed.
    pub violations: u64,
    pub status: ClaimStatus,
    pub witnesses: Vec<Witness>,
    pub per_order: Vec<OrderSummary>,
    pub observations: BTreeMap<String, u64>,
    pub warnings: Vec<String>,
}

impl VerificationReport {
    pub fn is_counterexample(&self) -> bool {
        self.status == ClaimStatus::Counterexample
    }

    /// Human-readable summary.
    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "claim      {}", self.claim).unwrap();
        writeln!(s, "statement  {}", self.statement).unwrap();
        let orders = self.scope.orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(",");
        write!(s, "scope      {:?} orders [{}]", self.scope.mode, orders).unwrap();
        if let Some(n) = self.scope.samples {
            write!(s, " samples {n}").unwrap();
        }
        if let Some(seed) = self.scope.seed {
            write!(s, " seed {seed}").unwrap();
        }
        s.push('\n');
        writeln!(s, "status     {}", self.status.as_str()).unwrap();
        writeln!(
            s,
            "instances  {} checked, {} met hypotheses, {} vacuous, {} violations",
            self.instances_checked, self.satisfied, self.vacuous, self.violations
        )
        .unwrap();
        if !self.hypothesis_stages.is_empty() {
            writeln!(s, "stages").unwrap();
            for st in &self.hypothesis_stages {
                writeln!(s, "  {:>10}  {}", st.passed, st.stage).unwrap();
            }
        }
        writeln!(s, "  order     loops  instances  satisfied  violations").unwrap();
        for o in &self.per_order {
            writeln!(
                s,
                "  {:>5} {:>9} {:>10} {:>10} {:>11}",
                o.order, o.loops, o.instances, o.satisfied, o.violations
            )
            .unwrap();
        }
        if !self.observations.is_empty() {
            writeln!(s, "observations").unwrap();
            for (k, v) in &self.observations {
                writeln!(s, "  {v:>10}  {k}").unwrap();
            }
        }
        for w in &self.witnesses {
            write!(s, "witness    {} at {:?}", w.check, w.elements).unwrap();
            if let (Some(f), Some(g)) = (w.f, w.g) {
                write!(s, " f={f} g={g}").unwrap();
            }
            writeln!(s, " table {:?}", w.table).unwrap();
        }
        for w in &self.warnings {
            writeln!(s, "WARNING    {w}").unwrap();
        }
        s
    }
}

/// Per-scan accumulator; merged in stream order so results do not depend on
/// the number of worker threads.
#[derive(Debug, Clone)]
pub(crate) struct Recorder {
    stages: Vec<u64>,
    instances: u64,
    satisfied: u64,
    violations: u64,
    witnesses: Vec<Witness>,
    witness_cap: usize,
    observations: BTreeMap<String, u64>,
}

impl Recorder {
    fn new(stage_count: usize, witness_cap: usize) -> Self {
        Self {
            stages: vec![0; stage_count],
            instances: 0,
            satisfied: 0,
            violations: 0,
            witnesses: Vec::new(),
            witness_cap,
            observations: BTreeMap::new(),
        }
    }

    /// Records one instance that passed the first `passed` hypothesis
    /// stages. Conclusions run only when every stage passed.
    pub fn record(
        &mut self,
        passed: usize,
        context: impl FnOnce() -> WitnessContext,
        conclusions: impl FnOnce(&mut Vec<Failure>),
    ) {
        self.instances += 1;
        let passed = passed.min(self.stages.len());
        for s in &mut self.stages[..passed] {
            *s += 1;
        }
        if passed < self.stages.len() {
            return;
        }
        self.satisfied += 1;
        let mut failures = Vec::new();
        conclusions(&mut failures);
        if failures.is_empty() {
            return;
        }
        self.violations += 1;
        let ctx = context();
        for f in failures {
            if self.witnesses.len() >= self.witness_cap {
                break;
            }
            self.witnesses.push(Witness {
                check: f.check,
                table: ctx.table.clone(),
                partner: ctx.partner.clone(),
                isomorphism: ctx.isomorphism.clone(),
                f: ctx.f,
                g: ctx.g,
                triple: ctx.triple.clone(),
                elements: f.elements,
            });
        }
    }

    pub fn observe(&mut self, key: impl Into<String>) {
        *self.observations.entry(key.into()).or_default() += 1;
    }

    fn merge(&mut self, other: Recorder) {
        for (a, b) in self.stages.iter_mut().zip(other.stages) {
            *a += b;
        }
        self.instances += other.instances;
        self.satisfied += other.satisfied;
        self.violations += other.violations;
        let room = self.witness_cap.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
        for (k, v) in other.observations {
            *self.observations.entry(k).or_default() += v;
        }
    }
}

/// An ordered pair of isomorphic loops with an isomorphism `a : g → h`.
pub(crate) struct IsoPair<'a> {
    pub g: &'a FiniteLoop,
    pub h: &'a FiniteLoop,
    pub a: Permutation,
}

impl IsoPair<'_> {
    pub fn context(&self) -> WitnessContext {
        WitnessContext {
            table: self.g.rows(),
            partner: Some(self.h.rows()),
            isomorphism: Some(self.a.clone()),
            ..Default::default()
        }
    }
}

fn run_on_loop(claim: &Claim, l: &FiniteLoop, cap: usize) -> Recorder {
    let mut rec = Recorder::new(claim.stages.len(), cap);
    if let ClaimKind::Loop(check) = claim.kind {
        check(l, &mut rec);
    }
    rec
}

fn scan_stream(claim: &Claim, loops: impl Iterator<Item = FiniteLoop>, cap: usize) -> (Recorder, u64) {
    let mut total = Recorder::new(claim.stages.len(), cap);
    let mut count = 0u64;
    let mut loops = loops.peekable();
    while loops.peek().is_some() {
        let chunk: Vec<FiniteLoop> = loops.by_ref().take(CHUNK).collect();
        count += chunk.len() as u64;
        let parts: Vec<Recorder> = chunk.par_iter().map(|l| run_on_loop(claim, l, cap)).collect();
        for p in parts {
            total.merge(p);
        }
    }
    (total, count)
}

/// Runs a pair claim on every ordered pair of isomorphic loops among `loops`
/// that pass the claim's filter.
fn scan_pairs(claim: &Claim, loops: &[FiniteLoop], cap: usize) -> (Recorder, u64) {
    let ClaimKind::Pair { filter, check } = claim.kind else {
        unreachable!("scan_pairs on a loop claim");
    };
    let kept: Vec<&FiniteLoop> = loops.par_iter().filter(|l| filter(l)).collect();
    let keys: Vec<Vec<usize>> = kept.par_iter().map(|l| canonical_form(l).canonical.table().to_vec()).collect();
    let mut classes: BTreeMap<&[usize], Vec<&FiniteLoop>> = BTreeMap::new();
    for (l, k) in kept.iter().zip(&keys) {
        classes.entry(k.as_slice()).or_default().push(l);
    }
    let pairs: Vec<(&FiniteLoop, &FiniteLoop)> = classes
        .values()
        .flat_map(|class| class.iter().flat_map(move |g| class.iter().map(move |h| (*g, *h))))
        .collect();
    let mut total = Recorder::new(claim.stages.len(), cap);
    for chunk in pairs.chunks(CHUNK) {
        let parts: Vec<Recorder> = chunk
            .par_iter()
            .map(|(g, h)| {
                let mut rec = Recorder::new(claim.stages.len(), cap);
                match find_isomorphism(g, h) {
                    Some(a) => check(&IsoPair { g, h, a }, &mut rec),
                    None => rec.observe("canonical forms agree but no isomorphism found"),
                }
                rec
            })
            .collect();
        for p in parts {
            total.merge(p);
        }
    }
    (total, kept.len() as u64)
}

fn finish(claim: &Claim, scope: Scope, rec: Recorder, per_order: Vec<OrderSummary>) -> VerificationReport {
    let status = if rec.violations > 0 {
        ClaimStatus::Counterexample
    } else if rec.satisfied == 0 {
        ClaimStatus::Vacuous
    } else if scope.mode == ScopeMode::Sampled {
        ClaimStatus::ConfirmedSampled
    } else {
        ClaimStatus::ConfirmedExhaustive
    };
    let mut warnings = Vec::new();
    if status == ClaimStatus::Vacuous {
        let top = scope.orders.iter().max().copied().unwrap_or(0);
        warnings.push(format!(
            "hypotheses never held in scope (orders up to {top}); nothing was confirmed"
        ));
    }
    if let Some(bad) = rec.observations.get("canonical forms agree but no isomorphism found") {
        warnings.push(format!("{bad} pairs with equal canonical forms had no isomorphism"));
    }
    VerificationReport {
        claim: claim.id.to_string(),
        statement: claim.statement.to_string(),
        scope,
        instances_checked: rec.instances,
        hypothesis_stages: claim
            .stages
            .iter()
            .zip(&rec.stages)
            .map(|(s, &n)| StageCount {
                stage: s.to_string(),
                passed: n,
            })
            .collect(),
        satisfied: rec.satisfied,
        vacuous: rec.instances - rec.satisfied,
        violations: rec.violations,
        status,
        witnesses: rec.witnesses,
        per_order,
        observations: rec.observations,
        warnings,
    }
}

fn summary(order: usize, loops: u64, rec: &Recorder, before: (u64, u64, u64)) -> OrderSummary {
    OrderSummary {
        order,
        loops,
        instances: rec.instances - before.0,
        satisfied: rec.satisfied - before.1,
        violations: rec.violations - before.2,
    }
}

/// Options for an exhaustive scan.
#[derive(Debug, Clone, Copy)]
pub struct ExhaustiveScope {
    pub min_order: usize,
    pub max_order: usize,
    /// Lift the desk-scale order caps.
    pub allow_large: bool,
}

impl ExhaustiveScope {
    pub fn up_to(max_order: usize) -> Self {
        Self {
            min_order: 1,
            max_order,
            allow_large: false,
        }
    }

    pub fn exactly(order: usize) -> Self {
        Self {
            min_order: order,
            max_order: order,
            allow_large: false,
        }
    }
}

/// Checks `claim_id` on every reduced loop with order in the scope.
pub fn verify(claim_id: &str, scope: ExhaustiveScope) -> Result<VerificationReport> {
    let claim = claim(claim_id)?;
    let pair = matches!(claim.kind, ClaimKind::Pair { .. });
    let cap = HARNESS_ORDER_CAP;
    if !scope.allow_large && scope.max_order > cap {
        return Err(LoopError::OrderTooLarge {
            order: scope.max_order,
            cap,
        });
    }
    let mut total = Recorder::new(claim.stages.len(), WITNESS_CAP);
    let mut per_order = Vec::new();
    let orders: Vec<usize> = (scope.min_order.max(1)..=scope.max_order).collect();
    for &n in &orders {
        let before = (total.instances, total.satisfied, total.violations);
        let cursor = EnumerationCursor::new_unbounded(n, EnumerationMode::Reduced)?;
        let (rec, loops) = if pair {
            let all: Vec<FiniteLoop> = cursor.stream()?.collect();
            scan_pairs(claim, &all, WITNESS_CAP)
        } else {
            scan_stream(claim, cursor.stream()?, WITNESS_CAP)
        };
        total.merge(rec);
        per_order.push(summary(n, loops, &total, before));
    }
    let scope = Scope {
        mode: ScopeMode::Exhaustive,
        orders,
        samples: None,
        seed: None,
    };
    Ok(finish(claim, scope, total, per_order))
}

/// Checks `claim_id` on an explicit list of loops. Pair claims use every
/// ordered isomorphic pair among them.
pub fn verify_on(claim_id: &str, loops: &[FiniteLoop]) -> Result<VerificationReport> {
    let claim = claim(claim_id)?;
    let (rec, count) = match claim.kind {
        ClaimKind::Loop(_) => scan_stream(claim, loops.iter().cloned(), WITNESS_CAP),
        ClaimKind::Pair { .. } => scan_pairs(claim, loops, WITNESS_CAP),
    };
    let mut orders: Vec<usize> = loops.iter().map(FiniteLoop::order).collect();
    orders.sort_unstable();
    orders.dedup();
    let per_order = vec![OrderSummary {
        order: orders.last().copied().unwrap_or(0),
        loops: count,
        instances: rec.instances,
        satisfied: rec.satisfied,
        violations: rec.violations,
    }];
    let scope = Scope {
        mode: ScopeMode::Explicit,
        orders,
        samples: None,
        seed: None,
    };
    Ok(finish(claim, scope, rec, per_order))
}

/// Random sampling options. The budget counts sampled loops.
#[derive(Debug, Clone, Copy)]
pub struct SampleScope {
    pub budget: u64,
    pub seed: u64,
    pub min_order: usize,
    pub max_order: usize,
}

fn sample_instances(claim: &Claim, l: &FiniteLoop, rng: &mut ChaCha8Rng, cap: usize) -> Recorder {
    match claim.kind {
        ClaimKind::Loop(_) => run_on_loop(claim, l, cap),
        ClaimKind::Pair { filter, check } => {
            let mut rec = Recorder::new(claim.stages.len(), cap);
            if filter(l) {
                let mut images: Vec<usize> = (0..l.order()).collect();
                rand::seq::SliceRandom::shuffle(images.as_mut_slice(), rng);
                let sigma = Permutation::from_images_unchecked(images);
                let h = l.relabel(&sigma).expect("degree matches");
                let a = find_isomorphism(l, &h).expect("relabelled copy is isomorphic");
                check(&IsoPair { g: l, h: &h, a }, &mut rec);
            }
            rec
        }
    }
}

fn sampled_loops(scope: &SampleScope) -> Result<Vec<(FiniteLoop, ChaCha8Rng)>> {
    if scope.min_order == 0 || scope.min_order > scope.max_order {
        return Err(LoopError::OrderTooSmall);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(scope.seed);
    (0..scope.budget)
        .map(|_| {
            let n = rng.random_range(scope.min_order..=scope.max_order);
            let l = random_loop(n, rng.random())?;
            Ok((l, ChaCha8Rng::seed_from_u64(rng.random())))
        })
        .collect()
}

/// Scans `budget` random loops and reports like [`verify`].
pub fn verify_sampled(claim_id: &str, scope: SampleScope) -> Result<VerificationReport> {
    let claim = claim(claim_id)?;
    let samples = sampled_loops(&scope)?;
    let parts: Vec<(usize, Recorder)> = samples
        .into_par_iter()
        .map(|(l, mut rng)| (l.order(), sample_instances(claim, &l, &mut rng, WITNESS_CAP)))
        .collect();
    let mut total = Recorder::new(claim.stages.len(), WITNESS_CAP);
    let mut per_order: BTreeMap<usize, OrderSummary> = BTreeMap::new();
    for (n, rec) in parts {
        let entry = per_order.entry(n).or_insert(OrderSummary {
            order: n,
            loops: 0,
            instances: 0,
            satisfied: 0,
            violations: 0,
        });
        entry.loops += 1;
        entry.instances += rec.instances;
        entry.satisfied += rec.satisfied;
        entry.violations += rec.violations;
        total.merge(rec);
    }
    let s = Scope {
        mode: ScopeMode::Sampled,
        orders: (scope.min_order..=scope.max_order).collect(),
        samples: Some(scope.budget),
        seed: Some(scope.seed),
    };
    Ok(finish(claim, s, total, per_order.into_values().collect()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleSearch {
    pub witness: Option<Witness>,
    pub loops_sampled: u64,
    pub instances_checked: u64,
}

/// Samples random loops until a conclusion fails or the budget runs out.
pub fn find_counterexample(claim_id: &str, scope: SampleScope) -> Result<CounterexampleSearch> {
    let claim = claim(claim_id)?;
    let mut out = CounterexampleSearch {
        witness: None,
        loops_sampled: 0,
        instances_checked: 0,
    };
    for (l, mut rng) in sampled_loops(&scope)? {
        let rec = sample_instances(claim, &l, &mut rng, 1);
        out.loops_sampled += 1;
        out.instances_checked += rec.instances;
        if let Some(w) = rec.witnesses.into_iter().next() {
            out.witness = Some(w);
            break;
        }
    }
    Ok(out)
}

/// Re-runs the claim on the witness's instance and reports whether the
/// same conclusion fails again at the same place.
pub fn replay(claim_id: &str, w: &Witness) -> Result<bool> {
    let claim = claim(claim_id)?;
    let g = FiniteLoop::from_rows(&w.table)?;
    let rec = match claim.kind {
        ClaimKind::Loop(check) => {
            let mut rec = Recorder::new(claim.stages.len(), usize::MAX);
            check(&g, &mut rec);
            rec
        }
        ClaimKind::Pair { check, .. } => {
            let (Some(partner), Some(a)) = (&w.partner, &w.isomorphism) else {
                return Ok(false);
            };
            let h = FiniteLoop::from_rows(partner)?;
            let mut rec = Recorder::new(claim.stages.len(), usize::MAX);
            check(&IsoPair { g: &g, h: &h, a: a.clone() }, &mut rec);
            rec
        }
    };
    Ok(rec.witnesses.iter().any(|r| {
        r.check == w.check && r.elements == w.elements && r.f == w.f && r.g == w.g && r.partner == w.partner
    }))
}
