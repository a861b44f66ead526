//! GA1 numbers (composite n with G(n) >= G(n/p) for every prime p | n) and
//! extraordinary numbers (GA1 and G(n) >= G(an) for every a >= 1).

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::Serialize;

use crate::ball::Ladder;
use crate::consts::e_gamma;
use crate::error::{Error, Result};
use crate::factor::{factorize, primes_below, Factorization};
use crate::gronwall::{g_compare_args, g_value, log_log_big, truncated_enclosure, GArg, Tri};
use crate::robin::robin_bound_value;

/// Which inequality condition (i) uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionI {
    /// G(n) >= G(n/p)
    #[default]
    NonStrict,
    /// G(n) > G(n/p)
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GAStatus {
    Ga1,
    /// `witness` is the smallest prime with certified G(n/p) > G(n)
    NotGa1 { witness: u64 },
    NotComposite,
    /// primes whose comparison did not separate at the cap
    Indeterminate { undecided: Vec<u64> },
}

impl GAStatus {
    pub fn is_ga1(&self) -> bool {
        matches!(self, GAStatus::Ga1)
    }

    pub fn label(&self) -> &'static str {
        match self {
            GAStatus::Indeterminate { .. } => "indeterminate",
            _ => "certified",
        }
    }
}

fn quotient(f: &Factorization, p: u64) -> Result<GArg> {
    let q = f.div_prime(p).ok_or_else(|| Error::Domain(format!("{p} does not divide {f}")))?;
    if q.is_one() {
        return Err(Error::Domain(format!("G({f}/{p}) = G(1) is undefined")));
    }
    GArg::new(q)
}

/// Run `fails` over the prime factors of `f` in increasing order.
/// `fails(p)` is `Some(true)` when p certifiably breaks condition (i).
fn classify(f: &Factorization, mut fails: impl FnMut(u64) -> Result<Option<bool>>) -> Result<GAStatus> {
    if f.is_one() {
        return Err(Error::Domain("GA1 is defined for n >= 2".into()));
    }
    if f.is_prime() {
        return Ok(GAStatus::NotComposite);
    }
    let mut undecided = Vec::new();
    for p in f.primes() {
        match fails(p)? {
            Some(true) => return Ok(GAStatus::NotGa1 { witness: p }),
            Some(false) => {}
            None => undecided.push(p),
        }
    }
    Ok(if undecided.is_empty() { GAStatus::Ga1 } else { GAStatus::Indeterminate { undecided } })
}

fn indeterminate_as_none(r: Result<bool>) -> Result<Option<bool>> {
    match r {
        Ok(b) => Ok(Some(b)),
        Err(Error::Indeterminate { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Condition (i) by comparing G(n) with G(n/p) directly.
///
/// G(n) and G(n/p) are never certified equal, so both variants of
/// condition (i) yield the same verdicts; `mode` is kept for reporting.
pub fn ga1_check_direct_factored(f: &Factorization, ladder: &Ladder, _mode: ConditionI) -> Result<GAStatus> {
    let n = if f.is_composite() { Some(GArg::new(f.clone())?) } else { None };
    classify(f, |p| {
        let n = n.as_ref().expect("composite");
        let q = quotient(f, p)?;
        indeterminate_as_none(g_compare_args(&q, n, ladder).map(|o| o == Ordering::Greater))
    })
}

pub fn ga1_check_direct(n: u64, ladder: &Ladder, mode: ConditionI) -> Result<GAStatus> {
    if n < 2 {
        return Err(Error::Domain(format!("GA1 is defined for n >= 2, got {n}")));
    }
    ga1_check_direct_factored(&factorize(n), ladder, mode)
}

/// `(p^{k+1} - 1) / (p^{k+1} - p)` as (numerator, denominator).
fn criterion_rhs(p: u64, k: u32) -> (BigInt, BigInt) {
    let pk1 = BigInt::from(p).pow(k + 1);
    (&pk1 - 1, &pk1 - p)
}

/// Condition (i) via `log log n / log log(n/p) <= (p^{k+1}-1)/(p^{k+1}-p)`.
///
/// The ratio is never formed: with `L = log log n`, `M = log log(n/p)` and
/// right side `a/b`, the test is `b L <= a M` when `M > 0` and
/// `b L >= a M` when `M < 0`.
pub fn ga1_check_criterion_factored(f: &Factorization, ladder: &Ladder, _mode: ConditionI) -> Result<GAStatus> {
    let value = f.value();
    classify(f, |p| {
        let q = quotient(f, p)?;
        let (a, b) = criterion_rhs(p, f.exponent_of(p));
        indeterminate_as_none(ladder.run(|prec| {
            let l = log_log_big(&value, prec)?.mul_int(&b);
            let m = log_log_big(&q.value, prec)?;
            let Some(sign) = m.sign().filter(|s| *s != Ordering::Equal) else { return Ok(None) };
            let am = m.mul_int(&a);
            Ok(match (sign, l.certified_cmp(&am)) {
                (_, None) | (_, Some(Ordering::Equal)) => None,
                (Ordering::Greater, Some(o)) => Some(o == Ordering::Greater),
                (_, Some(o)) => Some(o == Ordering::Less),
            })
        }))
    })
}

pub fn ga1_check_criterion(n: u64, ladder: &Ladder, mode: ConditionI) -> Result<GAStatus> {
    if n < 2 {
        return Err(Error::Domain(format!("GA1 is defined for n >= 2, got {n}")));
    }
    ga1_check_criterion_factored(&factorize(n), ladder, mode)
}

/// What a finite scan says about condition (ii).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConditionII {
    /// some a <= a_max has certified G(an) > G(n)
    RefutedWithWitness,
    /// no a <= a_max refutes it; nothing is claimed beyond a_max
    UnrefutedUpToAmax,
    /// no finite witness found, but G(n) < e^gamma, so condition (ii)
    /// fails for some larger multiple by the limsup theorem
    TheoremFlagged,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionIIScan {
    pub a_max: u64,
    /// smallest witness
    pub witness: Option<u64>,
    /// every a in `2..=a_max` with certified G(an) > G(n)
    pub witnesses: Vec<u64>,
    pub undecided: Vec<u64>,
    pub verdict: ConditionII,
    pub label: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct GronwallFlag {
    /// certified G(n) < e^gamma
    pub value: bool,
    pub status: Tri,
    pub label: &'static str,
    pub caveat: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionIReport {
    pub mode: ConditionI,
    pub status: GAStatus,
    pub label: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    #[serde(serialize_with = "crate::ser::display")]
    pub n: BigUint,
    pub condition_i: ConditionIReport,
    pub condition_ii: ConditionIIScan,
    pub gronwall_flag: GronwallFlag,
}

pub const GRONWALL_CAVEAT: &str = "G(n) < e^gamma together with limsup G = e^gamma (Gronwall) forces G(an) > G(n) \
for some multiple an; this follows from the theorem and is not a finite certification";

/// Certified `G(n) < e^gamma`.
pub fn below_e_gamma(n: &GArg, ladder: &Ladder) -> Result<Tri> {
    Tri::from_result(ladder.run(|p| {
        Ok(match n.g(p)?.certified_cmp(&e_gamma(p)?) {
            Some(Ordering::Less) => Some(true),
            Some(Ordering::Greater) => Some(false),
            _ => None,
        })
    }))
}

/// Condition (i) in full and condition (ii) for `2 <= a <= a_max`.
pub fn extraordinary_probe(n: u64, a_max: u64, ladder: &Ladder, mode: ConditionI) -> Result<ProbeReport> {
    if n < 2 {
        return Err(Error::Domain(format!("probe needs n >= 2, got {n}")));
    }
    if a_max < 2 {
        return Err(Error::Domain(format!("probe needs a_max >= 2, got {a_max}")));
    }
    let f = factorize(n);
    let status = ga1_check_direct_factored(&f, ladder, mode)?;
    let base = GArg::new(f.clone())?;
    let results: Vec<Result<Option<bool>>> = (2..=a_max)
        .into_par_iter()
        .map(|a| {
            let an = GArg::new(f.mul(&factorize(a)))?;
            indeterminate_as_none(g_compare_args(&an, &base, ladder).map(|o| o == Ordering::Greater))
        })
        .collect();
    let mut witnesses = Vec::new();
    let mut undecided = Vec::new();
    for (a, r) in (2..=a_max).zip(results) {
        match r? {
            Some(true) => witnesses.push(a),
            Some(false) => {}
            None => undecided.push(a),
        }
    }
    let flag_status = below_e_gamma(&base, ladder)?;
    let flag = flag_status == Tri::True;
    let (verdict, label) = if !witnesses.is_empty() {
        (ConditionII::RefutedWithWitness, "certified")
    } else if flag {
        (ConditionII::TheoremFlagged, "theorem-conditional")
    } else if undecided.is_empty() {
        (ConditionII::UnrefutedUpToAmax, "certified")
    } else {
        (ConditionII::UnrefutedUpToAmax, "indeterminate")
    };
    Ok(ProbeReport {
        n: base.value.clone(),
        condition_i: ConditionIReport { mode, label: status.label(), status },
        condition_ii: ConditionIIScan { a_max, witness: witnesses.first().copied(), witnesses, undecided, verdict, label },
        gronwall_flag: GronwallFlag {
            value: flag,
            label: if matches!(flag_status, Tri::Indeterminate { .. }) { "indeterminate" } else { "theorem-conditional" },
            status: flag_status,
            caveat: GRONWALL_CAVEAT,
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub claim: String,
    pub value: Option<String>,
    pub status: Tri,
    pub label: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct FourTrace {
    pub steps: Vec<TraceStep>,
    /// every computed step certified true
    pub certified: bool,
}

fn step(claim: &str, value: Option<String>, status: Tri) -> TraceStep {
    let label = if matches!(status, Tri::Indeterminate { .. }) { "indeterminate" } else { "certified" };
    TraceStep { claim: claim.into(), value, status, label }
}

fn tri_of(r: Result<bool>) -> Result<Tri> {
    Tri::from_result(r)
}

/// The numeric facts showing 4 is extraordinary.
pub fn certify_four(ladder: &Ladder) -> Result<FourTrace> {
    let mut steps = Vec::new();

    let g2 = tri_of(ladder.run(|p| Ok(g_value(2, p)?.sign().filter(|s| *s != Ordering::Equal).map(|s| s == Ordering::Less))))?;
    let g2_text = truncated_enclosure(ladder, |p| g_value(2, p)).map(|x| x.1).ok();
    steps.push(step("G(2) < 0, so condition (i) holds for 4", g2_text, g2));

    let bound = truncated_enclosure(ladder, |p| robin_bound_value(5, p));
    let (bound_status, bound_text) = match bound {
        Ok((_, s)) => (Tri::from_bool(s == "4.643"), Some(s)),
        Err(Error::Indeterminate { cap }) => (Tri::Indeterminate { cap }, None),
        Err(e) => return Err(e),
    };
    steps.push(step("e^gamma + 0.6483/(log log 5)^2 truncates to 4.643", bound_text, bound_status));

    let g4 = truncated_enclosure(ladder, |p| g_value(4, p));
    let (g4_status, g4_text) = match g4 {
        Ok((_, s)) => (Tri::from_bool(s == "5.357"), Some(s)),
        Err(Error::Indeterminate { cap }) => (Tri::Indeterminate { cap }, None),
        Err(e) => return Err(e),
    };
    steps.push(step("G(4) truncates to 5.357", g4_text, g4_status));

    let above = tri_of(ladder.run(|p| {
        Ok(g_value(4, p)?.cmp_ratio(&BigInt::from(4644), &BigInt::from(1000)).filter(|o| *o != Ordering::Equal).map(|o| o == Ordering::Greater))
    }))?;
    steps.push(step("G(4) > 4.644", None, above));

    let bound_below = tri_of(ladder.run(|p| {
        Ok(robin_bound_value(5, p)?
            .cmp_ratio(&BigInt::from(4644), &BigInt::from(1000))
            .filter(|o| *o != Ordering::Equal)
            .map(|o| o == Ordering::Less))
    }))?;
    steps.push(step("e^gamma + 0.6483/(log log 5)^2 < 4.644", None, bound_below));

    let certified = steps.iter().all(|s| s.status == Tri::True);
    steps.push(TraceStep {
        claim: "G(n) < e^gamma + 0.6483/(log log n)^2 for n >= 3 (Robin, unconditional) and the right side decreases \
                in n, so G(4a) < 4.644 < G(4) for every a >= 2: condition (ii) holds"
            .into(),
        value: None,
        status: Tri::True,
        label: "theorem",
    });
    Ok(FourTrace { steps, certified })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop2pEntry {
    pub p: u64,
    pub status: GAStatus,
    /// p = 2 or p > 5
    pub predicted: bool,
}

impl Prop2pEntry {
    pub fn matches(&self) -> bool {
        match self.status {
            GAStatus::Indeterminate { .. } => false,
            ref s => s.is_ga1() == self.predicted,
        }
    }
}

/// GA1 verdict of 2p for every prime p up to `p_max`.
pub fn prop_2p_scan(p_max: u64, ladder: &Ladder, mode: ConditionI) -> Result<Vec<Prop2pEntry>> {
    if p_max < 2 {
        return Err(Error::Domain(format!("prop_2p_scan needs p_max >= 2, got {p_max}")));
    }
    let limit = u32::try_from(p_max + 1).map_err(|_| Error::Domain("p_max too large".into()))?;
    primes_below(limit)
        .into_par_iter()
        .map(|p| {
            let p = p as u64;
            Ok(Prop2pEntry { p, status: ga1_check_direct(2 * p, ladder, mode)?, predicted: p == 2 || p > 5 })
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PqScanReport {
    pub bound: u64,
    pub checked: u64,
    /// (p, q) with p >= q odd primes and pq found to be GA1
    pub violations: Vec<(u64, u64)>,
    pub indeterminates: Vec<(u64, u64)>,
}

/// Check that no product of odd primes `p >= q` up to `bound` is GA1.
pub fn prop_pq_scan(bound: u64, ladder: &Ladder, mode: ConditionI) -> Result<PqScanReport> {
    if bound < 9 {
        return Err(Error::Domain(format!("prop_pq_scan needs bound >= 9, got {bound}")));
    }
    let limit = u32::try_from(bound / 3 + 1).map_err(|_| Error::Domain("bound too large".into()))?;
    let primes: Vec<u64> = primes_below(limit).into_iter().skip(1).map(u64::from).collect();
    let mut pairs = Vec::new();
    for (i, &q) in primes.iter().enumerate() {
        if q * q > bound {
            break;
        }
        for &p in &primes[i..] {
            if p * q > bound {
                break;
            }
            pairs.push((p, q));
        }
    }
    let verdicts: Vec<Result<GAStatus>> = pairs
        .par_iter()
        .map(|&(p, q)| {
            let pairs = if p == q { vec![(p, 2)] } else { vec![(q, 1), (p, 1)] };
            ga1_check_direct_factored(&Factorization::from_pairs(pairs)?, ladder, mode)
        })
        .collect();
    let mut report = PqScanReport { bound, checked: pairs.len() as u64, ..Default::default() };
    for (&pq, v) in pairs.iter().zip(verdicts) {
        match v? {
            GAStatus::Ga1 => report.violations.push(pq),
            GAStatus::Indeterminate { .. } => report.indeterminates.push(pq),
            _ => {}
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NU: u64 = 183_783_600;

    #[test]
    fn direct_examples() {
        let l = Ladder::default();
        let m = ConditionI::NonStrict;
        assert_eq!(ga1_check_direct(4, &l, m).unwrap(), GAStatus::Ga1);
        assert_eq!(ga1_check_direct(NU, &l, m).unwrap(), GAStatus::Ga1);
        assert_eq!(ga1_check_direct(9, &l, m).unwrap(), GAStatus::NotGa1 { witness: 3 });
        assert_eq!(ga1_check_direct(7, &l, m).unwrap(), GAStatus::NotComposite);
        assert!(ga1_check_direct(1, &l, m).is_err());
    }

    #[test]
    fn criterion_examples() {
        let l = Ladder::default();
        let m = ConditionI::NonStrict;
        assert_eq!(ga1_check_criterion(4, &l, m).unwrap(), GAStatus::Ga1);
        assert_eq!(ga1_check_criterion(14, &l, m).unwrap(), GAStatus::Ga1);
        assert!(matches!(ga1_check_criterion(15, &l, m).unwrap(), GAStatus::NotGa1 { .. }));
        assert_eq!(ga1_check_criterion(NU, &l, m).unwrap(), GAStatus::Ga1);
    }

    #[test]
    fn methods_agree_on_small_composites() {
        let l = Ladder::default();
        for n in 4..3000u64 {
            let a = ga1_check_direct(n, &l, ConditionI::NonStrict).unwrap();
            let b = ga1_check_criterion(n, &l, ConditionI::NonStrict).unwrap();
            assert_eq!(a, b, "n = {n}");
        }
    }

    #[test]
    fn probe_near_miss() {
        let r = extraordinary_probe(NU, 19, &Ladder::default(), ConditionI::NonStrict).unwrap();
        assert_eq!(r.condition_i.status, GAStatus::Ga1);
        assert_eq!(r.condition_ii.witnesses, vec![2, 4, 19]);
        assert_eq!(r.condition_ii.witness, Some(2));
        assert_eq!(r.condition_ii.verdict, ConditionII::RefutedWithWitness);
        assert!(r.gronwall_flag.value);
    }

    #[test]
    fn probe_four_and_six() {
        let l = Ladder::default();
        let r = extraordinary_probe(4, 1000, &l, ConditionI::NonStrict).unwrap();
        assert_eq!(r.condition_i.status, GAStatus::Ga1);
        assert!(r.condition_ii.witness.is_none() && r.condition_ii.undecided.is_empty());
        assert_eq!(r.condition_ii.verdict, ConditionII::UnrefutedUpToAmax);
        assert!(!r.gronwall_flag.value);
        let r = extraordinary_probe(6, 2, &l, ConditionI::NonStrict).unwrap();
        assert_eq!(r.condition_i.status, GAStatus::NotGa1 { witness: 2 });
        assert!(extraordinary_probe(6, 1, &l, ConditionI::NonStrict).is_err());
    }

    #[test]
    fn four_trace() {
        let t = certify_four(&Ladder::default()).unwrap();
        assert!(t.certified);
        assert_eq!(t.steps[0].value.as_deref(), Some("-4.093"));
        assert_eq!(t.steps[1].value.as_deref(), Some("4.643"));
        assert_eq!(t.steps[2].value.as_deref(), Some("5.357"));
        let tiny = certify_four(&Ladder::new(4, 4)).unwrap();
        assert!(!tiny.certified);
    }

    #[test]
    fn two_p_small() {
        let v = prop_2p_scan(100, &Ladder::default(), ConditionI::NonStrict).unwrap();
        assert!(v.iter().all(Prop2pEntry::matches));
        assert!(!v.iter().find(|e| e.p == 3).unwrap().status.is_ga1());
        assert!(!v.iter().find(|e| e.p == 5).unwrap().status.is_ga1());
        assert!(v.iter().find(|e| e.p == 7).unwrap().status.is_ga1());
    }

    #[test]
    fn pq_small() {
        let r = prop_pq_scan(100, &Ladder::default(), ConditionI::NonStrict).unwrap();
        assert!(r.violations.is_empty() && r.indeterminates.is_empty());
        assert!(r.checked > 0);
        assert!(prop_pq_scan(8, &Ladder::default(), ConditionI::NonStrict).is_err());
    }
}
