//! The ten acceptance criteria. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use loopforge::harness::{verify, ExhaustiveScope, VerificationReport};
use loopforge::properties::{has_lip, has_rip};
use loopforge::{
    canonical_form, enumerate_loops, find_isomorphism, find_t_witnesses, has_cip, has_wip, is_cip, is_wip,
    m_inverse_check, principal_isotope, weak_t21, ClaimStatus, FiniteLoop, Permutation, Property, WipForm, WipMethod,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn loops_up_to(n: usize) -> Vec<FiniteLoop> {
    (1..=n).flat_map(|k| enumerate_loops(k).unwrap()).collect()
}

fn clean(r: &VerificationReport) -> Result<(), String> {
    ensure(
        r.violations == 0 && r.status == ClaimStatus::ConfirmedExhaustive,
        format!("{}: status {} with {} violations", r.claim, r.status.as_str(), r.violations),
    )
}

fn stages(r: &VerificationReport) -> String {
    r.hypothesis_stages
        .iter()
        .map(|s| format!("{}={}", s.stage, s.passed))
        .collect::<Vec<_>>()
        .join(", ")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let counts: Vec<usize> = (1..=5).map(|n| enumerate_loops(n).unwrap().count()).collect();
    let small = start.elapsed();
    let oracle: Vec<usize> = (1..=5).map(|n| reduced_latin_squares(n).len()).collect();
    ensure(counts == oracle, format!("library {counts:?} vs oracle {oracle:?}"))?;
    ensure(counts == [1, 1, 1, 4, 56], format!("counts {counts:?}"))?;
    ensure(small < Duration::from_secs(1), format!("n <= 5 took {small:?}"))?;
    let start = Instant::now();
    let six = enumerate_loops(6).unwrap().count();
    let big = start.elapsed();
    ensure(six == 9408, format!("n = 6 count {six}"))?;
    ensure(big < Duration::from_secs(60), format!("n = 6 took {big:?}"))?;
    Ok(format!("counts {counts:?} and 9408; n<=5 in {small:?}, n=6 in {big:?}"))
}

fn criterion_2() -> Outcome {
    let r = verify("thm3.1a", ExhaustiveScope::up_to(6)).map_err(|e| e.to_string())?;
    clean(&r)?;
    let at3 = r.per_order.iter().find(|o| o.order == 3).map_or(0, |o| o.satisfied);
    ensure(at3 > 0, "vacuous at order 3")?;
    let per: Vec<String> = r.per_order.iter().map(|o| format!("n{}:{}", o.order, o.satisfied)).collect();
    Ok(format!(
        "{} isotopes, {} with T, {} vacuous, 0 violations; T instances per order {}",
        r.instances_checked,
        r.satisfied,
        r.vacuous,
        per.join(" ")
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0u64;
    for l in loops_up_to(6) {
        if !is_wip(&l) {
            continue;
        }
        for w in find_t_witnesses(&l) {
            let h = principal_isotope(&l, w.f, w.g).unwrap();
            if !is_wip(&h) {
                continue;
            }
            pairs += 1;
            ensure(find_isomorphism(&l, &h).is_some(), format!("no isomorphism for {:?} f={} g={}", l.rows(), w.f, w.g))?;
        }
    }
    let r = verify("thm3.2", ExhaustiveScope::up_to(6)).map_err(|e| e.to_string())?;
    clean(&r)?;
    ensure(r.satisfied == pairs, format!("harness saw {} pairs, direct scan {}", r.satisfied, pairs))?;
    ensure(pairs > 0, "no WIP T-pairs")?;
    Ok(format!("{pairs} WIP T-pairs, all isomorphic, in {:?}", start.elapsed()))
}

fn criterion_4() -> Outcome {
    let loops = loops_up_to(5);
    for l in &loops {
        let d = has_wip(l, WipMethod::Definitional).holds;
        let t = has_wip(l, WipMethod::Translational).holds;
        let right = Property::Wip(WipForm::RightInverse).holds(l);
        let left = Property::Wip(WipForm::LeftInverse).holds(l);
        let imp = Property::Wip(WipForm::Implication).holds(l);
        ensure(d == t && t == right && right == left && left == imp, format!("disagreement on {:?}", l.rows()))?;
        ensure(imp == naive_wip(l), format!("oracle disagreement on {:?}", l.rows()))?;
    }
    ensure(loops.len() == 63, format!("{} loops", loops.len()))?;
    Ok(format!("{} loops, all five WIP checks agree with each other and the oracle", loops.len()))
}

fn criterion_5() -> Outcome {
    let loops = loops_up_to(5);
    let mut wip = 0;
    let mut cip = 0;
    for l in &loops {
        let w = has_wip(l, WipMethod::Definitional).holds;
        let c = has_cip(l).holds;
        ensure(m_inverse_check(l, -1).holds == w, format!("m = -1 on {:?}", l.rows()))?;
        ensure(m_inverse_check(l, 0).holds == c, format!("m = 0 on {:?}", l.rows()))?;
        wip += usize::from(w);
        cip += usize::from(c);
    }
    Ok(format!("{} loops ({wip} WIP, {cip} CIP), exact agreement", loops.len()))
}

fn criterion_6() -> Outcome {
    let mut hyp = 0;
    for l in loops_up_to(6) {
        let (lip, rip, wip) = (has_lip(&l).holds, has_rip(&l).holds, is_wip(&l));
        ensure((lip && wip) == (lip && rip), format!("LIP form fails on {:?}", l.rows()))?;
        ensure((rip && wip) == (rip && lip), format!("RIP form fails on {:?}", l.rows()))?;
        hyp += usize::from(lip || rip);
    }
    let r = verify("lem3.5", ExhaustiveScope::up_to(6)).map_err(|e| e.to_string())?;
    clean(&r)?;
    ensure(r.satisfied as usize == hyp, "harness and direct scan disagree")?;
    Ok(format!("{} loops, {hyp} LIP or RIP, 0 violations", r.instances_checked))
}

fn criterion_7() -> Outcome {
    let mut lines = Vec::new();
    for id in ["lem3.4", "lem3.4a", "lem3.4b", "lem3.4c", "lem3.4d", "lem3.4e"] {
        let r = verify(id, ExhaustiveScope::up_to(6)).map_err(|e| e.to_string())?;
        clean(&r)?;
        if id == "lem3.4" {
            lines.push(format!("stages [{}]", stages(&r)));
            let routes: Vec<String> = r.observations.iter().map(|(k, v)| format!("{k}={v}")).collect();
            lines.push(format!("routes [{}]", routes.join(", ")));
        }
    }
    Ok(format!("(a)-(e) hold; {}", lines.join("; ")))
}

fn criterion_8() -> Outcome {
    let mut pairs = 0;
    for n in 1..=5 {
        let loops: Vec<FiniteLoop> = enumerate_loops(n).unwrap().collect();
        let keys: Vec<Vec<usize>> = loops.iter().map(|l| canonical_form(l).canonical.table().to_vec()).collect();
        for (i, g) in loops.iter().enumerate() {
            for (j, h) in loops.iter().enumerate() {
                let fast = find_isomorphism(g, h).is_some();
                let brute = brute_isomorphic(g, h);
                ensure(fast == brute, format!("order {n} pair ({i},{j}): search {fast}, brute {brute}"))?;
                ensure((keys[i] == keys[j]) == brute, format!("order {n} pair ({i},{j}): canonical partition differs"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs, search = brute force = canonical partition"))
}

fn criterion_9() -> Outcome {
    let got = |n: usize| -> Vec<(usize, usize)> {
        find_t_witnesses(&FiniteLoop::cyclic(n)).iter().map(|w| (w.f, w.g)).collect()
    };
    // f = g with 3f ≡ 0 (mod n)
    let expected = |n: usize| -> Vec<(usize, usize)> { (0..n).filter(|f| 3 * f % n == 0).map(|f| (f, f)).collect() };
    let z3 = got(3);
    let z4 = got(4);
    ensure(z3 == [(0, 0), (1, 1), (2, 2)], format!("Z3 {z3:?}"))?;
    ensure(z4 == [(0, 0)], format!("Z4 {z4:?}"))?;
    for n in 1..=9 {
        ensure(got(n) == expected(n), format!("Z{n} {:?}", got(n)))?;
    }
    Ok(format!("Z3 {z3:?}, Z4 {z4:?}; congruence rule holds for Z1..Z9"))
}

fn criterion_10() -> Outcome {
    let mut pairs = 0;
    for n in 1..=6 {
        let mut classes: BTreeMap<Vec<usize>, Vec<FiniteLoop>> = BTreeMap::new();
        for l in enumerate_loops(n).unwrap().filter(is_cip) {
            classes.entry(canonical_form(&l).canonical.table().to_vec()).or_default().push(l);
        }
        for class in classes.values() {
            for g in class {
                for h in class {
                    let a = find_isomorphism(g, h).ok_or("canonical class without isomorphism")?;
                    ensure(weak_t21(g, h, &a).unwrap(), format!("weak T21 fails for {:?}", g.rows()))?;
                    let c: Permutation = g.j_lambda().then(&a);
                    ensure(c.then(h.j_rho()) == g.j_rho().then(&c), format!("C J'_rho != J_rho C for {:?}", g.rows()))?;
                    pairs += 1;
                }
            }
        }
    }
    let mut harness_pairs = BTreeSet::new();
    for id in ["cor3.7", "thm3.5"] {
        let r = verify(id, ExhaustiveScope::up_to(6)).map_err(|e| e.to_string())?;
        clean(&r)?;
        harness_pairs.insert(r.satisfied);
    }
    ensure(harness_pairs == BTreeSet::from([pairs]), format!("harness {harness_pairs:?} vs direct {pairs}"))?;
    Ok(format!("{pairs} isomorphic CIP pairs, weak T21 and C J'_rho = J_rho C hold"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("enumeration counts", criterion_1),
        ("isotopes with T preserve WIP", criterion_2),
        ("WIP T-pairs are isomorphic", criterion_3),
        ("WIP characterizations agree", criterion_4),
        ("m-inverse cross-check", criterion_5),
        ("LIP/RIP and WIP", criterion_6),
        ("principal isotope consequences", criterion_7),
        ("isomorphism correctness", criterion_8),
        ("T witnesses of cyclic groups", criterion_9),
        ("isomorphic CIP pairs", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} ({name}) [{took:.2?}]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} ({name}) [{took:.2?}]: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
