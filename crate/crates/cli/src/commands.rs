use gronwall::ga::{self, GAStatus};
use gronwall::gronwall::{truncated_enclosure, Tri};
use gronwall::harmonic::{lagarias_check, lagarias_rhs, lagarias_scan, LagariasVariant};
use gronwall::robin::{compute_r, robin_bound_scan, robin_bound_value, robin_check, scan_range};
use gronwall::superabundant::{sa_check_ae, sa_enumerate};
use gronwall::table::{self, COLUMNS};
use gronwall::{abundancy, divisor_sigma, factorize, g_value, BoundedReal, Error, Ladder, Result, Round};
use serde_json::{json, Value};

use crate::output::Output;
use crate::{Command, Method, RunConfig, Status, Variant};

type Outcome = Result<(Output, Status)>;

pub fn execute(cmd: &Command, cfg: &RunConfig, notes: &mut Vec<String>) -> Outcome {
    match cmd {
        Command::Sigma { n } => sigma(*n, cfg),
        Command::G { n } => g(*n, cfg, notes),
        Command::Robin { n } => robin(*n, cfg),
        Command::Table1 { golden } => table1(golden.as_deref(), cfg, notes),
        Command::Scan { lo, hi } => scan(*lo, *hi, cfg),
        Command::Bound { n, range } => bound(*n, range.as_deref(), cfg),
        Command::Sa { limit } => sa(*limit, cfg),
        Command::Ga1 { n, range, method } => ga1(*n, range.as_deref(), *method, cfg),
        Command::Probe { n, amax } => probe(*n, *amax, cfg),
        Command::Certify4 => certify4(cfg),
        Command::Props { two_p, pq } => props(*two_p, *pq, cfg),
        Command::Lagarias { n, range, variant } => lagarias(*n, range.as_deref(), *variant, cfg),
    }
}

fn usage(msg: &str) -> Error {
    Error::Domain(msg.into())
}

fn tri_text(t: Tri) -> &'static str {
    match t {
        Tri::True => "true",
        Tri::False => "false",
        Tri::Indeterminate { .. } => "indeterminate",
    }
}

fn tri_status(t: Tri) -> Status {
    match t {
        Tri::True => Status::Pass,
        Tri::False => Status::Violation,
        Tri::Indeterminate { .. } => Status::Indeterminate,
    }
}

fn g_text(n: u64, ladder: &Ladder) -> Result<String> {
    Ok(truncated_enclosure(ladder, |p| g_value(n, p))?.1)
}

fn interval(x: &BoundedReal) -> String {
    format!("[{}, {}]", x.lo().to_decimal(20, Round::Down), x.hi().to_decimal(20, Round::Up))
}

enum Target {
    One(u64),
    Range(u64, u64),
}

fn single_or_range(n: Option<u64>, range: Option<&[u64]>, what: &str) -> Result<Target> {
    match (n, range) {
        (Some(n), None) => Ok(Target::One(n)),
        (None, Some(&[lo, hi])) => Ok(Target::Range(lo, hi)),
        _ => Err(usage(&format!("{what} needs either N or --range LO HI"))),
    }
}

fn sigma(n: u64, cfg: &RunConfig) -> Outcome {
    if n == 0 {
        return Err(usage("sigma needs n >= 1"));
    }
    let f = factorize(n);
    let a = abundancy(&f);
    let g = if n >= 2 { json!(g_text(n, &cfg.ladder())?) } else { Value::Null };
    let mut o = Output::new("gronwall.sigma.v1", &["n", "factorization", "sigma", "abundancy", "abundancy_trunc", "g"]);
    o.push(vec![json!(n), json!(f.to_string()), json!(divisor_sigma(&f).to_string()), json!(a.to_string()), json!(a.truncate3()), g]);
    Ok((o, Status::Pass))
}

fn g(n: u64, cfg: &RunConfig, notes: &mut Vec<String>) -> Outcome {
    if n < 2 {
        return Err(usage("G(n) is defined for n >= 2"));
    }
    let (x, s) = truncated_enclosure(&cfg.ladder(), |p| g_value(n, p))?;
    if x.hi().is_negative() {
        notes.push(format!("warning: G({n}) is negative because log log {n} < 0"));
    }
    let mut o = Output::new("gronwall.g.v1", &["n", "g", "enclosure"]);
    o.push(vec![json!(n), json!(s), json!(interval(&x))]);
    Ok((o, Status::Pass))
}

fn robin(n: u64, cfg: &RunConfig) -> Outcome {
    let ladder = cfg.ladder();
    let t = robin_check(n, &ladder)?;
    let mut o = Output::new("gronwall.robin.v1", &["n", "g", "below_e_gamma"]);
    o.push(vec![json!(n), json!(g_text(n, &ladder)?), json!(tri_text(t))]);
    Ok((o, tri_status(t)))
}

fn table1(golden: Option<&std::path::Path>, cfg: &RunConfig, notes: &mut Vec<String>) -> Outcome {
    let expected = match golden {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(&format!("cannot read {}: {e}", path.display())))?;
            table::parse_csv(&text)?
        }
        None => table::golden_rows()?,
    };
    let rows = table::render_rows(&compute_r(&cfg.ladder())?)?;
    let diffs = table::diff(&expected, &rows);
    for d in &diffs {
        notes.push(format!("mismatch r={} column {}: expected {:?}, computed {:?}", d.row, d.column, d.expected, d.actual));
    }
    if !diffs.is_empty() {
        notes.push(format!("table1: {} cell(s) differ from the reference table", diffs.len()));
    }
    let mut o = Output::new("gronwall.table1.v1", &COLUMNS);
    for r in &rows {
        o.push(r.cells().iter().map(|c| json!(c)).collect());
    }
    Ok((o, if diffs.is_empty() { Status::Pass } else { Status::Violation }))
}

fn scan(lo: u64, hi: u64, cfg: &RunConfig) -> Outcome {
    let ladder = cfg.ladder();
    let rep = scan_range(lo, hi, &ladder, cfg.memory_budget)?;
    let (max_n, max_g) = match &rep.max_g {
        Some((n, _)) => (json!(n), json!(g_text(*n, &ladder)?)),
        None => (Value::Null, Value::Null),
    };
    let violations: Vec<u64> = rep.violations.iter().map(|v| v.0).collect();
    let mut o = Output::new(
        "gronwall.scan.v1",
        &["lo", "hi", "violations", "indeterminates", "max_n", "max_g", "argmax_certified"],
    );
    o.push(vec![json!(lo), json!(hi), json!(violations), json!(rep.indeterminates), max_n, max_g, json!(rep.argmax_certified)]);
    let status = if !violations.is_empty() {
        Status::Violation
    } else if !rep.indeterminates.is_empty() || !rep.argmax_certified {
        Status::Indeterminate
    } else {
        Status::Pass
    };
    Ok((o, status))
}

fn bound(n: Option<u64>, range: Option<&[u64]>, cfg: &RunConfig) -> Outcome {
    let ladder = cfg.ladder();
    match single_or_range(n, range, "bound")? {
        Target::One(n) => {
            let (_, bs) = truncated_enclosure(&ladder, |p| robin_bound_value(n, p))?;
            let margin = Tri::from_result(ladder.run(|p| {
                let m = robin_bound_value(n, p)?.sub(&g_value(n, p)?);
                Ok(m.sign().filter(|s| s.is_ne()).map(|s| s.is_gt()))
            }))?;
            let mut o = Output::new("gronwall.bound.v1", &["n", "bound", "g", "margin_positive"]);
            o.push(vec![json!(n), json!(bs), json!(g_text(n, &ladder)?), json!(tri_text(margin))]);
            Ok((o, tri_status(margin)))
        }
        Target::Range(lo, hi) => {
            let rep = robin_bound_scan(lo, hi, &ladder, cfg.memory_budget)?;
            let mut o = Output::new("gronwall.bound_scan.v1", &["lo", "hi", "failures", "indeterminates"]);
            o.push(vec![json!(lo), json!(hi), json!(rep.failures), json!(rep.indeterminates)]);
            let status = if !rep.failures.is_empty() {
                Status::Violation
            } else if !rep.indeterminates.is_empty() {
                Status::Indeterminate
            } else {
                Status::Pass
            };
            Ok((o, status))
        }
    }
}

fn sa(limit: u64, cfg: &RunConfig) -> Outcome {
    let ladder = cfg.ladder();
    let list = sa_enumerate(limit, cfg.memory_budget)?;
    let mut o = Output::new(
        "gronwall.sa.v1",
        &["s", "factorization", "abundancy", "g", "ae1", "ae2_violations", "ae3_violations"],
    );
    let mut status = Status::Pass;
    for e in &list {
        let (g, ae1, ae2, ae3) = if e.factorization.is_one() {
            (Value::Null, Value::Null, Value::Null, Value::Null)
        } else {
            let s = e.s.to_string().parse::<u64>().expect("sieved values fit in u64");
            let r = sa_check_ae(&e.factorization, &ladder)?;
            if !r.holds() {
                status = Status::Violation;
            }
            let ae2: Vec<String> = r.ae2_violations.iter().map(|(q, r)| format!("{q}:{r}")).collect();
            (json!(g_text(s, &ladder)?), json!(r.ae1), json!(ae2), json!(r.ae3_violations))
        };
        o.push(vec![json!(e.s.to_string()), json!(e.factorization.to_string()), json!(e.abundancy.to_string()), g, ae1, ae2, ae3]);
    }
    Ok((o, status))
}

fn status_fields(s: &GAStatus) -> (Value, Value, Value) {
    match s {
        GAStatus::Ga1 => (json!("ga1"), Value::Null, json!([])),
        GAStatus::NotGa1 { witness } => (json!("not_ga1"), json!(witness), json!([])),
        GAStatus::NotComposite => (json!("not_composite"), Value::Null, json!([])),
        GAStatus::Indeterminate { undecided } => (json!("indeterminate"), Value::Null, json!(undecided)),
    }
}

fn ga1(n: Option<u64>, range: Option<&[u64]>, method: Method, cfg: &RunConfig) -> Outcome {
    let ladder = cfg.ladder();
    let (lo, hi) = match single_or_range(n, range, "ga1")? {
        Target::One(n) => (n, n),
        Target::Range(lo, hi) => (lo, hi),
    };
    if lo < 2 || lo > hi {
        return Err(usage("ga1 needs 2 <= LO <= HI"));
    }
    let mut o = Output::new("gronwall.ga1.v1", &["n", "method", "verdict", "witness", "undecided"]);
    let mut status = Status::Pass;
    for n in lo..=hi {
        let mut verdicts = Vec::new();
        if method != Method::Criterion {
            verdicts.push(("direct", ga::ga1_check_direct(n, &ladder, cfg.mode())?));
        }
        if method != Method::Direct {
            verdicts.push(("criterion", ga::ga1_check_criterion(n, &ladder, cfg.mode())?));
        }
        if verdicts.windows(2).any(|w| w[0].1 != w[1].1) {
            status = status.max(Status::Violation);
        }
        for (m, v) in verdicts {
            if matches!(v, GAStatus::Indeterminate { .. }) {
                status = status.max(Status::Indeterminate);
            }
            let (verdict, witness, undecided) = status_fields(&v);
            o.push(vec![json!(n), json!(m), verdict, witness, undecided]);
        }
    }
    Ok((o, status))
}

fn probe(n: u64, amax: u64, cfg: &RunConfig) -> Outcome {
    let r = ga::extraordinary_probe(n, amax, &cfg.ladder(), cfg.mode())?;
    let (ci, ci_witness, _) = status_fields(&r.condition_i.status);
    let mut o = Output::new(
        "gronwall.probe.v1",
        &[
            "n",
            "condition_i",
            "condition_i_witness",
            "condition_i_label",
            "a_max",
            "witness",
            "witnesses",
            "undecided",
            "condition_ii",
            "condition_ii_label",
            "gronwall_flag",
            "gronwall_label",
            "caveat",
        ],
    );
    let c2 = serde_json::to_value(&r.condition_ii.verdict).expect("serializable")["status"].clone();
    o.push(vec![
        json!(n),
        ci,
        ci_witness,
        json!(r.condition_i.label),
        json!(amax),
        json!(r.condition_ii.witness),
        json!(r.condition_ii.witnesses),
        json!(r.condition_ii.undecided),
        c2,
        json!(r.condition_ii.label),
        json!(r.gronwall_flag.value),
        json!(r.gronwall_flag.label),
        json!(r.gronwall_flag.caveat),
    ]);
    let indeterminate = matches!(r.condition_i.status, GAStatus::Indeterminate { .. })
        || !r.condition_ii.undecided.is_empty()
        || matches!(r.gronwall_flag.status, Tri::Indeterminate { .. });
    let o = o.with_json(vec![serde_json::to_value(&r).expect("serializable")]);
    Ok((o, if indeterminate { Status::Indeterminate } else { Status::Pass }))
}

fn certify4(cfg: &RunConfig) -> Outcome {
    let t = ga::certify_four(&cfg.ladder())?;
    let mut o = Output::new("gronwall.certify4.v1", &["step", "claim", "value", "status", "label"]);
    let mut status = Status::Pass;
    for (i, s) in t.steps.iter().enumerate() {
        status = status.max(tri_status(s.status));
        o.push(vec![json!(i + 1), json!(s.claim), json!(s.value), json!(tri_text(s.status)), json!(s.label)]);
    }
    Ok((o, status))
}

fn props(two_p: Option<u64>, pq: Option<u64>, cfg: &RunConfig) -> Outcome {
    let ladder = cfg.ladder();
    match (two_p, pq) {
        (Some(p_max), None) => {
            let entries = ga::prop_2p_scan(p_max, &ladder, cfg.mode())?;
            let mut o = Output::new("gronwall.props_2p.v1", &["p", "verdict", "witness", "predicted_ga1", "matches"]);
            let mut status = Status::Pass;
            for e in &entries {
                let (verdict, witness, _) = status_fields(&e.status);
                let s = match e.status {
                    GAStatus::Indeterminate { .. } => Status::Indeterminate,
                    _ if !e.matches() => Status::Violation,
                    _ => Status::Pass,
                };
                status = status.max(s);
                o.push(vec![json!(e.p), verdict, witness, json!(e.predicted), json!(e.matches())]);
            }
            Ok((o, status))
        }
        (None, Some(bound)) => {
            let rep = ga::prop_pq_scan(bound, &ladder, cfg.mode())?;
            let fmt = |v: &[(u64, u64)]| -> Vec<String> { v.iter().map(|(p, q)| format!("{p}*{q}")).collect() };
            let mut o = Output::new("gronwall.props_pq.v1", &["bound", "checked", "violations", "indeterminates"]);
            o.push(vec![json!(bound), json!(rep.checked), json!(fmt(&rep.violations)), json!(fmt(&rep.indeterminates))]);
            let status = if !rep.violations.is_empty() {
                Status::Violation
            } else if !rep.indeterminates.is_empty() {
                Status::Indeterminate
            } else {
                Status::Pass
            };
            Ok((o, status))
        }
        _ => Err(usage("props needs exactly one of --2p PMAX or --pq BOUND")),
    }
}

fn lagarias(n: Option<u64>, range: Option<&[u64]>, variant: Variant, cfg: &RunConfig) -> Outcome {
    let ladder = cfg.ladder();
    let v = match variant {
        Variant::Strict => LagariasVariant::Strict,
        Variant::Doubled => LagariasVariant::Doubled,
    };
    let name = match variant {
        Variant::Strict => "strict",
        Variant::Doubled => "doubled",
    };
    match single_or_range(n, range, "lagarias")? {
        Target::One(n) => {
            let t = lagarias_check(n, v, &ladder)?;
            let rhs = lagarias_rhs(n, v, ladder.start)?;
            let mut o = Output::new("gronwall.lagarias.v1", &["n", "variant", "sigma", "rhs", "holds"]);
            o.push(vec![json!(n), json!(name), json!(divisor_sigma(&factorize(n)).to_string()), json!(interval(&rhs)), json!(tri_text(t))]);
            Ok((o, tri_status(t)))
        }
        Target::Range(lo, hi) => {
            let rep = lagarias_scan(lo, hi, v, &ladder, cfg.memory_budget)?;
            let mut o = Output::new("gronwall.lagarias_scan.v1", &["lo", "hi", "variant", "failures", "indeterminates"]);
            o.push(vec![json!(lo), json!(hi), json!(name), json!(rep.failures), json!(rep.indeterminates)]);
            let status = if !rep.failures.is_empty() {
                Status::Violation
            } else if !rep.indeterminates.is_empty() {
                Status::Indeterminate
            } else {
                Status::Pass
            };
            Ok((o, status))
        }
    }
}
