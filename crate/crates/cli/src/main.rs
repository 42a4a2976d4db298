use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use loopforge::enumeration::{EnumerationCursor, EnumerationMode, ISO_ORDER_CAP, REDUCED_ORDER_CAP};
use loopforge::harness::{self, ExhaustiveScope, SampleScope, VerificationReport};
use loopforge::io::{read_structure, write_loop_json, write_loop_text};
use loopforge::properties::{centrum, element_traits, nuclei, Property};
use loopforge::{
    canonical_form, find_isomorphism, find_t_witnesses, principal_isotope, t_conditions, ClaimStatus, FiniteLoop,
    IsotopismTriple, LoopError,
};

#[derive(Parser)]
#[command(name = "loopforge", version, about = "Finite loops, isotopes and weak inverse property checks")]
struct Cli {
    /// Emit JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for scans.
    #[arg(long, global = true, env = "LOOPFORGE_THREADS")]
    threads: Option<usize>,
    /// Permit orders above the desk-scale caps.
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream every reduced loop of order N.
    Enumerate {
        #[arg(short = 'n')]
        order: usize,
        /// Keep one representative per isomorphism class.
        #[arg(long)]
        up_to_iso: bool,
        /// Write one `.loop` file per loop into DIR.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        /// Print only the number of loops.
        #[arg(long)]
        count: bool,
        /// Stop after this many loops.
        #[arg(long)]
        limit: Option<u64>,
        /// Continue from a saved cursor.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Save the cursor here when the stream stops.
        #[arg(long)]
        cursor_out: Option<PathBuf>,
    },
    /// Check properties: wip, cip, lip, rip, ip, aip, m-inverse:M, centrum, nuclei, traits:X.
    Check {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        props: Vec<String>,
    },
    /// Build the f,g-principal isotope.
    Isotope {
        file: PathBuf,
        #[arg(short = 'f')]
        f: usize,
        #[arg(short = 'g')]
        g: usize,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Evaluate the T conditions for an isotopism between two loops.
    Tcheck {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        triple: PathBuf,
    },
    /// List the (f, g) whose principal isotope satisfies T.
    Twitness { file: PathBuf },
    /// Search for an isomorphism.
    Iso { file1: PathBuf, file2: PathBuf },
    /// Canonical form and the relabelling that produces it.
    Canon { file: PathBuf },
    /// Run a registered claim, or `all`.
    Verify {
        claim: String,
        #[arg(long, default_value_t = 5)]
        max_order: usize,
        #[arg(long, default_value_t = 1)]
        min_order: usize,
        /// Sample this many random loops instead of enumerating.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List registered claim ids.
    Claims,
}

/// Exit status for a successful run whose answer is yes or no.
enum Outcome {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_loop(path: &Path) -> Result<FiniteLoop> {
    let s = read_structure(path).with_context(|| format!("reading {}", path.display()))?;
    s.into_loop().with_context(|| format!("{} has no identity element", path.display()))
}

fn emit(cli: &Cli, value: &Value, text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    if cli.json {
        writeln!(out, "{}", serde_json::to_string(value)?)?;
    } else {
        write!(out, "{text}")?;
    }
    Ok(())
}

fn yes_if(b: bool) -> Outcome {
    if b {
        Outcome::Yes
    } else {
        Outcome::No
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Enumerate {
            order,
            up_to_iso,
            out,
            count,
            limit,
            resume,
            cursor_out,
        } => enumerate(cli, *order, *up_to_iso, out.as_deref(), *count, *limit, resume.as_deref(), cursor_out.as_deref()),
        Command::Check { file, props } => check(cli, file, props),
        Command::Isotope { file, f, g, out } => {
            let l = read_loop(file)?;
            let n = l.order();
            for x in [*f, *g] {
                if x >= n {
                    bail!(LoopError::Index { element: x, order: n });
                }
            }
            let h = principal_isotope(&l, *f, *g)?;
            let body = if out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "json")) {
                write_loop_json(&h.rows()) + "\n"
            } else {
                write_loop_text(&h.rows())
            };
            match out {
                Some(p) => fs::write(p, &body).with_context(|| format!("writing {}", p.display()))?,
                None => emit(cli, &json!({"n": n, "table": h.rows(), "identity": h.identity()}), &body)?,
            }
            Ok(Outcome::Yes)
        }
        Command::Tcheck { file1, file2, triple } => {
            let g = read_loop(file1)?;
            let h = read_loop(file2)?;
            let text = fs::read_to_string(triple).with_context(|| format!("reading {}", triple.display()))?;
            let t: IsotopismTriple = serde_json::from_str(&text).context("parsing triple")?;
            if t.degree()? != g.order() || h.order() != g.order() {
                bail!("orders of the loops and the triple differ");
            }
            let r = t_conditions(&g, &h, &t)?;
            let flags = [
                ("t1", r.t1),
                ("t21", r.t21),
                ("t22", r.t22),
                ("t31", r.t31),
                ("t32", r.t32),
                ("t2", r.t2),
                ("t3", r.t3),
                ("t", r.t),
            ];
            let text: String = flags.iter().map(|(k, v)| format!("{k:<4} {v}\n")).collect();
            emit(cli, &serde_json::to_value(r)?, &text)?;
            Ok(yes_if(r.t))
        }
        Command::Twitness { file } => {
            let l = read_loop(file)?;
            let w = find_t_witnesses(&l);
            let text: String = w.iter().map(|w| format!("f={} g={}\n", w.f, w.g)).collect();
            emit(cli, &serde_json::to_value(&w)?, &text)?;
            Ok(Outcome::Yes)
        }
        Command::Iso { file1, file2 } => {
            let g = read_loop(file1)?;
            let h = read_loop(file2)?;
            let a = find_isomorphism(&g, &h);
            let text = match &a {
                Some(a) => format!("isomorphic via {:?}\n", a.images()),
                None => "not isomorphic\n".to_string(),
            };
            emit(cli, &json!({"isomorphic": a.is_some(), "map": a}), &text)?;
            Ok(yes_if(a.is_some()))
        }
        Command::Canon { file } => {
            let l = read_loop(file)?;
            let c = canonical_form(&l);
            let text = format!(
                "{}relabelling {:?}\n",
                write_loop_text(&c.canonical.rows()),
                c.relabeling.images()
            );
            emit(cli, &serde_json::to_value(&c)?, &text)?;
            Ok(Outcome::Yes)
        }
        Command::Verify {
            claim,
            max_order,
            min_order,
            budget,
            seed,
        } => verify(cli, claim, *min_order, *max_order, *budget, *seed),
        Command::Claims => {
            let list: Vec<Value> = harness::claims()
                .iter()
                .map(|c| json!({"id": c.id, "statement": c.statement, "stages": c.stages, "pairs": c.is_pair()}))
                .collect();
            let text: String = harness::claims()
                .iter()
                .map(|c| format!("{:<10} {}\n", c.id, c.statement))
                .collect();
            emit(cli, &Value::Array(list), &text)?;
            Ok(Outcome::Yes)
        }
    }
}

/// Known reduced loop counts, used for the cost estimate.
const REDUCED_COUNTS: [u64; 8] = [0, 1, 1, 1, 4, 56, 9408, 16_942_080];

fn print_cost_model(max_order: usize, what: &str) {
    eprintln!("cost model for {what}:");
    for n in 1..=max_order {
        match REDUCED_COUNTS.get(n) {
            Some(c) => eprintln!("  order {n}: {c} reduced loops, {} principal isotopes", c * (n * n) as u64),
            None => eprintln!("  order {n}: reduced loop count unknown, expect far beyond desk scale"),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    cli: &Cli,
    order: usize,
    up_to_iso: bool,
    out: Option<&Path>,
    count_only: bool,
    limit: Option<u64>,
    resume: Option<&Path>,
    cursor_out: Option<&Path>,
) -> Result<Outcome> {
    let mode = if up_to_iso {
        EnumerationMode::UpToIsomorphism
    } else {
        EnumerationMode::Reduced
    };
    let cursor = match resume {
        Some(p) => {
            let c: EnumerationCursor = serde_json::from_str(&fs::read_to_string(p)?).context("parsing cursor")?;
            if c.order != order || c.mode != mode {
                bail!("cursor was saved for a different order or mode");
            }
            c
        }
        None if cli.allow_large => {
            let cap = if up_to_iso { ISO_ORDER_CAP } else { REDUCED_ORDER_CAP };
            if order > cap {
                print_cost_model(order, "enumeration");
            }
            EnumerationCursor::new_unbounded(order, mode)?
        }
        None => EnumerationCursor::new(order, mode)?,
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut stream = cursor.stream()?;
    let mut stdout = io::stdout().lock();
    let mut seen = 0u64;
    while limit.is_none_or(|lim| seen < lim) {
        let Some(l) = stream.next() else { break };
        seen += 1;
        if count_only {
            continue;
        }
        let index = stream.cursor().emitted;
        if let Some(dir) = out {
            let path = dir.join(format!("n{order}_{index:08}.loop"));
            fs::write(&path, write_loop_text(&l.rows()))?;
        } else if cli.json {
            writeln!(stdout, "{}", write_loop_json(&l.rows()))?;
        } else {
            if index > 1 || seen > 1 {
                writeln!(stdout)?;
            }
            write!(stdout, "{}", write_loop_text(&l.rows()))?;
        }
    }
    if let Some(p) = cursor_out {
        fs::write(p, serde_json::to_string(&stream.cursor())?)?;
    }
    if count_only || out.is_some() {
        if cli.json {
            writeln!(stdout, "{}", json!({"order": order, "mode": mode, "count": seen}))?;
        } else {
            writeln!(stdout, "{seen}")?;
        }
    }
    Ok(Outcome::Yes)
}

fn check(cli: &Cli, file: &Path, props: &[String]) -> Result<Outcome> {
    let l = read_loop(file)?;
    let mut values = Vec::new();
    let mut text = String::new();
    let mut all_hold = true;
    for p in props {
        let p = p.trim();
        if p == "centrum" {
            let c = centrum(&l);
            text += &format!("centrum {c:?}\n");
            values.push(json!({"property": "centrum", "elements": c}));
        } else if p == "nuclei" {
            let nu = nuclei(&l);
            text += &format!("nuclei left {:?} middle {:?} right {:?}\n", nu.left, nu.middle, nu.right);
            values.push(json!({"property": "nuclei", "left": nu.left, "middle": nu.middle, "right": nu.right}));
        } else if let Some(x) = p.strip_prefix("traits:") {
            let x: usize = x.parse().with_context(|| format!("bad element in `{p}`"))?;
            let tr = element_traits(&l, x)?;
            text += &format!("traits {}\n", serde_json::to_string(&tr)?);
            let mut v = serde_json::to_value(&tr)?;
            v["property"] = json!(p);
            values.push(v);
        } else {
            let prop: Property = p.parse()?;
            let r = prop.check(&l);
            all_hold &= r.holds;
            text += &match &r.witness {
                Some(w) => format!("{} false, witness {:?}\n", r.property, w),
                None => format!("{} true\n", r.property),
            };
            values.push(serde_json::to_value(&r)?);
        }
    }
    let value = if values.len() == 1 {
        values.pop().unwrap()
    } else {
        Value::Array(values)
    };
    emit(cli, &value, &text)?;
    Ok(yes_if(all_hold))
}

fn verify(cli: &Cli, claim: &str, min_order: usize, max_order: usize, budget: Option<u64>, seed: u64) -> Result<Outcome> {
    let ids: Vec<&str> = if claim == "all" {
        harness::claims().iter().map(|c| c.id).collect()
    } else {
        vec![harness::claim(claim)?.id]
    };
    if budget.is_none() && cli.allow_large && max_order > ISO_ORDER_CAP {
        print_cost_model(max_order, "exhaustive verification");
    }
    let mut reports: Vec<VerificationReport> = Vec::new();
    for id in &ids {
        let r = match budget {
            Some(b) => harness::verify_sampled(
                id,
                SampleScope {
                    budget: b,
                    seed,
                    min_order,
                    max_order,
                },
            )?,
            None => harness::verify(
                id,
                ExhaustiveScope {
                    min_order,
                    max_order,
                    allow_large: cli.allow_large,
                },
            )?,
        };
        for w in &r.warnings {
            eprintln!("warning: {}: {w}", r.claim);
        }
        reports.push(r);
    }
    let any_counterexample = reports.iter().any(|r| r.status == ClaimStatus::Counterexample);
    if cli.json {
        let value = if reports.len() == 1 {
            serde_json::to_value(&reports[0])?
        } else {
            serde_json::to_value(&reports)?
        };
        emit(cli, &value, "")?;
    } else if reports.len() == 1 {
        print!("{}", reports[0].render());
    } else {
        println!("{:<10} {:<21} {:>12} {:>10} {:>10}", "claim", "status", "instances", "satisfied", "violations");
        for r in &reports {
            println!(
                "{:<10} {:<21} {:>12} {:>10} {:>10}",
                r.claim,
                r.status.as_str(),
                r.instances_checked,
                r.satisfied,
                r.violations
            );
        }
    }
    Ok(yes_if(!any_counterexample))
}
