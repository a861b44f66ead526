//! Robin's inequality `G(n) < e^gamma`: pointwise checks, sieved range
//! scans, the exceptional set below 5040, and the unconditional bound
//! `G(n) < e^gamma + 0.6483 / (log log n)^2`.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::ball::{BoundedReal, Ladder};
use crate::consts::e_gamma;
use crate::error::{Error, Result};
use crate::factor::{factorize, Factorization};
use crate::gronwall::{g_compare, g_compare_args, log_log, truncated_enclosure, GArg, Tri};
use crate::ratio::ExactRatio;
use crate::sigma::{abundancy, divisor_sigma, sieve_bytes, sigma_sieve, DEFAULT_MEMORY_BUDGET};
use crate::superabundant::sa_enumerate;

/// Number of integers r <= 5040 with G(r) >= e^gamma.
pub const R_SIZE: usize = 26;

/// Largest n for which Robin's inequality is known to fail.
pub const ROBIN_LIMIT: u64 = 5040;

const SCAN_BLOCK: u64 = 1 << 20;

/// Below this, runs are too short for a shared threshold to pay off.
const FILTER_START: u64 = 64;

/// `floor(x * 2^64)` for the lower endpoint of `x`, when it is non-negative.
pub(crate) fn fixed64_lower(x: &BoundedReal) -> Option<u128> {
    let lo = x.lo();
    if lo.is_negative() {
        return None;
    }
    let shift = lo.exponent() + 64;
    let v = if shift >= 0 { lo.mantissa() << shift as u64 } else { lo.mantissa() >> (-shift) as u64 };
    v.to_u128()
}

/// `sigma / n < t / 2^64`, decided exactly.
pub(crate) fn ratio_below(sigma: u64, n: u64, t: u128) -> bool {
    match t.checked_mul(n as u128) {
        Some(rhs) => ((sigma as u128) << 64) < rhs,
        None => true,
    }
}

/// Length of the runs sharing one threshold.
pub(crate) fn run_length(x: u64) -> u64 {
    (x / 64).clamp(1, 4096)
}

/// Sieve `[lo, hi]` block by block and hand each run `[x, y]` with its sigma
/// values to `f`. Results come back in increasing order of `x`.
pub(crate) fn for_each_run<T: Send>(
    lo: u64,
    hi: u64,
    budget: u64,
    f: impl Fn(u64, u64, &[u64]) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let block = SCAN_BLOCK.min(budget / sieve_bytes(1));
    if block == 0 {
        return Err(Error::BudgetExceeded { needed: sieve_bytes(1), budget });
    }
    let mut out = Vec::new();
    let mut b = lo;
    while b <= hi {
        let bhi = hi.min(b + block - 1);
        let sigmas = sigma_sieve(b, bhi, budget)?;
        let mut runs = Vec::new();
        let mut x = b;
        while x <= bhi {
            let y = bhi.min(x + run_length(x) - 1);
            runs.push((x, y));
            x = y + 1;
        }
        let part: Vec<Result<T>> =
            runs.par_iter().map(|&(x, y)| f(x, y, &sigmas[(x - b) as usize..=(y - b) as usize])).collect();
        for r in part {
            out.push(r?);
        }
        b = bhi + 1;
    }
    Ok(out)
}

/// Certified `G(n) < e^gamma` given sigma(n).
fn below_e_gamma(n: u64, sigma: &BigUint, ladder: &Ladder) -> Result<Tri> {
    let a = ExactRatio::new(BigInt::from(sigma.clone()), n);
    Tri::from_result(ladder.run(|p| {
        let g = a.enclosure(p).div(&log_log(n, p)?)?;
        Ok(match g.certified_cmp(&e_gamma(p)?) {
            Some(Ordering::Less) => Some(true),
            Some(Ordering::Greater) => Some(false),
            _ => None,
        })
    }))
}

/// Robin's inequality at a single `n > 5040`.
pub fn robin_check(n: u64, ladder: &Ladder) -> Result<Tri> {
    if n <= ROBIN_LIMIT {
        return Err(Error::Domain(format!("robin_check needs n > {ROBIN_LIMIT}, got {n}; see compute_r")));
    }
    below_e_gamma(n, &divisor_sigma(&factorize(n)), ladder)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub lo: u64,
    pub hi: u64,
    /// n with certified G(n) >= e^gamma
    pub violations: Vec<(u64, BoundedReal)>,
    /// n that could not be separated from e^gamma
    pub indeterminates: Vec<u64>,
    pub max_g: Option<(u64, BoundedReal)>,
    /// every other n in range was certified strictly below the maximum
    pub argmax_certified: bool,
}

#[derive(Default)]
struct RunOutcome {
    violations: Vec<u64>,
    indeterminates: Vec<u64>,
    best: Option<(f64, u64)>,
}

fn g_estimate(sigma: u64, n: u64) -> f64 {
    sigma as f64 / (n as f64 * (n as f64).ln().ln())
}

fn better(a: Option<(f64, u64)>, b: Option<(f64, u64)>) -> Option<(f64, u64)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.0 > x.0 { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Classify every n in `[lo, hi]` against e^gamma and find the maximum of G.
pub fn scan_range(lo: u64, hi: u64, ladder: &Ladder, budget: u64) -> Result<ScanReport> {
    if lo < 2 || lo > hi {
        return Err(Error::Domain(format!("scan_range needs 2 <= lo <= hi, got [{lo}, {hi}]")));
    }
    let eg = e_gamma(ladder.start)?;
    let runs = for_each_run(lo, hi, budget, |x, _y, sigmas| {
        let t = if x >= FILTER_START { fixed64_lower(&eg.mul(&log_log(x, ladder.start)?)) } else { None };
        let mut out = RunOutcome::default();
        for (i, &s) in sigmas.iter().enumerate() {
            let n = x + i as u64;
            out.best = better(out.best, Some((g_estimate(s, n), n)));
            if t.is_some_and(|t| ratio_below(s, n, t)) {
                continue;
            }
            match below_e_gamma(n, &BigUint::from(s), ladder)? {
                Tri::True => {}
                Tri::False => out.violations.push(n),
                Tri::Indeterminate { .. } => out.indeterminates.push(n),
            }
        }
        Ok(out)
    })?;
    let mut report =
        ScanReport { lo, hi, violations: Vec::new(), indeterminates: Vec::new(), max_g: None, argmax_certified: false };
    let mut best = None;
    for r in runs {
        for n in r.violations {
            report.violations.push((n, crate::gronwall::g_value(n, ladder.start)?));
        }
        report.indeterminates.extend(r.indeterminates);
        best = better(best, r.best);
    }
    if let Some((_, n)) = best {
        let (argmax, certified) = certify_argmax(lo, hi, n, ladder, budget)?;
        report.max_g = Some((argmax, crate::gronwall::g_value(argmax, ladder.start)?));
        report.argmax_certified = certified;
    }
    Ok(report)
}

/// Confirm `G(m) < G(best)` for every other m in range, switching to any
/// m found to be larger.
fn certify_argmax(lo: u64, hi: u64, mut best: u64, ladder: &Ladder, budget: u64) -> Result<(u64, bool)> {
    'restart: loop {
        let garg = GArg::from_u64(best)?;
        let gb = garg.g(ladder.start)?;
        let runs = for_each_run(lo, hi, budget, |x, _y, sigmas| {
            let t = if x >= FILTER_START && gb.lo().is_positive() {
                fixed64_lower(&gb.mul(&log_log(x, ladder.start)?))
            } else {
                None
            };
            let mut larger = None;
            let mut undecided = false;
            for (i, &s) in sigmas.iter().enumerate() {
                let n = x + i as u64;
                if n == best || t.is_some_and(|t| ratio_below(s, n, t)) {
                    continue;
                }
                let other = GArg { factorization: factorize(n), value: BigUint::from(n), sigma: BigUint::from(s) };
                match g_compare_args(&other, &garg, ladder) {
                    Ok(Ordering::Greater) => {
                        larger = Some(n);
                        break;
                    }
                    Ok(_) => {}
                    Err(Error::Indeterminate { .. }) => undecided = true,
                    Err(e) => return Err(e),
                }
            }
            Ok((larger, undecided))
        })?;
        let mut certified = true;
        for (larger, undecided) in runs {
            if let Some(n) = larger {
                best = n;
                continue 'restart;
            }
            certified &= !undecided;
        }
        return Ok((best, certified));
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RobinRecord {
    pub r: u64,
    pub factorization: Factorization,
    #[serde(serialize_with = "crate::ser::display")]
    pub sigma: BigUint,
    pub abundancy: ExactRatio,
    /// fine enough that its three-decimal truncation is determined
    pub g: BoundedReal,
    pub is_sa: bool,
    pub p_witness: Option<u64>,
    pub g_11r: BoundedReal,
}

/// Prime factors p of r, in increasing order, with certified G(r/p) > G(r).
/// Quotients equal to 1 are skipped.
pub fn p_witnesses(r: u64, ladder: &Ladder) -> Result<Vec<u64>> {
    p_witness_scan(r, ladder, false)
}

/// The smallest prime p dividing r with certified G(r/p) > G(r).
pub fn p_witness(r: u64, ladder: &Ladder) -> Result<Option<u64>> {
    Ok(p_witness_scan(r, ladder, true)?.first().copied())
}

fn p_witness_scan(r: u64, ladder: &Ladder, first_only: bool) -> Result<Vec<u64>> {
    if r < 2 {
        return Err(Error::Domain(format!("p_witness needs r >= 2, got {r}")));
    }
    let mut out = Vec::new();
    for p in factorize(r).primes() {
        if r / p < 2 {
            continue;
        }
        if g_compare(r / p, r, ladder)? == Ordering::Greater {
            out.push(p);
            if first_only {
                break;
            }
        }
    }
    Ok(out)
}

/// The record for `r`, with truncation-ready enclosures.
pub fn robin_record(r: u64, is_sa: bool, ladder: &Ladder) -> Result<RobinRecord> {
    let factorization = factorize(r);
    let (g, _) = truncated_enclosure(ladder, |p| crate::gronwall::g_value(r, p))?;
    let r11 = r.checked_mul(11).ok_or_else(|| Error::Domain(format!("11 * {r} overflows")))?;
    let (g_11r, _) = truncated_enclosure(ladder, |p| crate::gronwall::g_value(r11, p))?;
    Ok(RobinRecord {
        r,
        sigma: divisor_sigma(&factorization),
        abundancy: abundancy(&factorization),
        g,
        is_sa,
        p_witness: p_witness(r, ladder)?,
        g_11r,
        factorization,
    })
}

/// All `2 <= r <= 5040` with G(r) >= e^gamma, ordered by r.
pub fn compute_r(ladder: &Ladder) -> Result<Vec<RobinRecord>> {
    let scan = scan_range(2, ROBIN_LIMIT, ladder, DEFAULT_MEMORY_BUDGET)?;
    if !scan.indeterminates.is_empty() {
        return Err(Error::Indeterminate { cap: ladder.cap });
    }
    let sa: HashSet<u64> = sa_enumerate(ROBIN_LIMIT, DEFAULT_MEMORY_BUDGET)?
        .iter()
        .filter_map(|e| e.s.to_u64())
        .collect();
    scan.violations.iter().map(|&(r, _)| robin_record(r, sa.contains(&r), ladder)).collect()
}

/// Enclosure of `e^gamma + 0.6483 / (log log n)^2 - G(n)`, for n >= 3.
pub fn robin_bound_margin(n: u64, prec: u32) -> Result<BoundedReal> {
    Ok(robin_bound_value(n, prec)?.sub(&crate::gronwall::g_value(n, prec)?))
}

/// Enclosure of the bound `e^gamma + 0.6483 / (log log n)^2`, for n >= 3.
pub fn robin_bound_value(n: u64, prec: u32) -> Result<BoundedReal> {
    if n < 3 {
        return Err(Error::Domain(format!("the unconditional bound needs log log n > 0, so n >= 3; got {n}")));
    }
    let ll = log_log(n, prec)?;
    let c = BoundedReal::from_ratio(&BigInt::from(6483), &BigInt::from(10000), prec);
    Ok(e_gamma(prec)?.add(&c.div(&ll.square())?))
}

fn bound_holds(n: u64, sigma: u64, ladder: &Ladder) -> Result<Tri> {
    let a = ExactRatio::new(sigma, n);
    Tri::from_result(ladder.run(|p| {
        let margin = robin_bound_value(n, p)?.sub(&a.enclosure(p).div(&log_log(n, p)?)?);
        Ok(margin.sign().filter(|o| *o != Ordering::Equal).map(|o| o == Ordering::Greater))
    }))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundScanReport {
    pub lo: u64,
    pub hi: u64,
    /// n with a certified non-positive margin; any entry is a bug
    pub failures: Vec<u64>,
    pub indeterminates: Vec<u64>,
}

/// Certify a positive margin for every n in `[lo, hi]`.
///
/// With `L = log log n`, the margin is positive iff
/// `sigma(n)/n < e^gamma L + 0.6483 / L`, whose right side increases in n
/// once `n >= 7`.
pub fn robin_bound_scan(lo: u64, hi: u64, ladder: &Ladder, budget: u64) -> Result<BoundScanReport> {
    if lo < 3 || lo > hi {
        return Err(Error::Domain(format!("robin_bound_scan needs 3 <= lo <= hi, got [{lo}, {hi}]")));
    }
    let prec = ladder.start;
    let eg = e_gamma(prec)?;
    let c = BoundedReal::from_ratio(&BigInt::from(6483), &BigInt::from(10000), prec);
    let runs = for_each_run(lo, hi, budget, |x, _y, sigmas| {
        let t = if x >= FILTER_START {
            let ll = log_log(x, prec)?;
            fixed64_lower(&eg.mul(&ll).add(&c.div(&ll)?))
        } else {
            None
        };
        let mut fail = Vec::new();
        let mut undecided = Vec::new();
        for (i, &s) in sigmas.iter().enumerate() {
            let n = x + i as u64;
            if t.is_some_and(|t| ratio_below(s, n, t)) {
                continue;
            }
            match bound_holds(n, s, ladder)? {
                Tri::True => {}
                Tri::False => fail.push(n),
                Tri::Indeterminate { .. } => undecided.push(n),
            }
        }
        Ok((fail, undecided))
    })?;
    let mut report = BoundScanReport { lo, hi, ..Default::default() };
    for (f, u) in runs {
        report.failures.extend(f);
        report.indeterminates.extend(u);
    }
    Ok(report)
}

/// n up to `limit` where sigma(n)/n exceeds every earlier value, found by
/// factoring each n rather than sieving.
pub fn abundancy_records(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut best: Option<(BigUint, BigUint)> = None;
    for n in 1..=limit {
        let f = factorize(n);
        let (s, v) = (divisor_sigma(&f), BigUint::from(n));
        if best.as_ref().is_none_or(|(bs, bn)| &s * bn > bs * &v) {
            out.push(n);
            best = Some((s, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gronwall::truncate3;

    const R: [u64; 26] = [
        3, 4, 5, 6, 8, 9, 10, 12, 16, 18, 20, 24, 30, 36, 48, 60, 72, 84, 120, 180, 240, 360, 720, 840, 2520, 5040,
    ];

    #[test]
    fn fixed_point_threshold() {
        let x = BoundedReal::from_ratio(&BigInt::from(3), &BigInt::from(2), 128);
        let t = fixed64_lower(&x).unwrap();
        assert_eq!(t, 3u128 << 63);
        assert!(ratio_below(14, 10, t));
        assert!(!ratio_below(15, 10, t));
        assert!(fixed64_lower(&BoundedReal::from_int(-1, 64)).is_none());
    }

    #[test]
    fn robin_examples() {
        let l = Ladder::default();
        assert_eq!(robin_check(5041, &l).unwrap(), Tri::True);
        assert_eq!(robin_check(10080, &l).unwrap(), Tri::True);
        assert_eq!(robin_check(183_783_600, &l).unwrap(), Tri::True);
        assert!(robin_check(5040, &l).is_err());
    }

    #[test]
    fn scan_below_5040_finds_r() {
        let rep = scan_range(2, 5040, &Ladder::default(), DEFAULT_MEMORY_BUDGET).unwrap();
        let v: Vec<u64> = rep.violations.iter().map(|x| x.0).collect();
        assert_eq!(v, R.to_vec());
        assert!(rep.indeterminates.is_empty());
        assert_eq!(rep.max_g.unwrap().0, 3);
        assert!(rep.argmax_certified);
    }

    #[test]
    fn scan_small_ranges() {
        let l = Ladder::default();
        let rep = scan_range(5041, 5050, &l, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(rep.violations.is_empty() && rep.indeterminates.is_empty());
        let rep = scan_range(2, 2, &l, DEFAULT_MEMORY_BUDGET).unwrap();
        assert_eq!(rep.max_g.unwrap().0, 2);
        assert!(scan_range(1, 5, &l, DEFAULT_MEMORY_BUDGET).is_err());
        assert!(matches!(scan_range(5041, 5050, &l, 4), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn scan_with_tiny_blocks_agrees() {
        let l = Ladder::default();
        let a = scan_range(2, 3000, &l, DEFAULT_MEMORY_BUDGET).unwrap();
        let b = scan_range(2, 3000, &l, 8 * 37).unwrap();
        assert_eq!(a.violations, b.violations);
        assert_eq!(a.max_g.unwrap().0, b.max_g.unwrap().0);
    }

    #[test]
    fn argmax_above_5040() {
        let rep = scan_range(5041, 12000, &Ladder::default(), DEFAULT_MEMORY_BUDGET).unwrap();
        assert_eq!(rep.max_g.as_ref().unwrap().0, 10080);
        assert!(rep.argmax_certified);
    }

    #[test]
    fn witnesses() {
        let l = Ladder::default();
        assert_eq!(p_witness(6, &l).unwrap(), Some(2));
        assert_eq!(p_witness(4, &l).unwrap(), None);
        assert_eq!(p_witness(3, &l).unwrap(), None);
        // G(360) = 1.833 > G(720) = 1.782, so 2 already works
        assert_eq!(p_witness(720, &l).unwrap(), Some(2));
        assert_eq!(p_witnesses(720, &l).unwrap(), vec![2, 3]);
        assert_eq!(p_witnesses(48, &l).unwrap(), vec![2]);
        assert_eq!(p_witnesses(360, &l).unwrap(), vec![2, 3, 5]);
    }

    #[test]
    fn records_for_r() {
        let recs = compute_r(&Ladder::default()).unwrap();
        assert_eq!(recs.len(), 26);
        assert_eq!(recs[0].r, 3);
        assert_eq!(recs[25].r, 5040);
        let four = &recs[1];
        assert_eq!(truncate3(&four.g).unwrap(), "5.357");
        assert!(four.p_witness.is_none() && four.is_sa);
        assert_eq!(recs.iter().find(|r| r.r == 36).unwrap().p_witness, Some(2));
        for rec in &recs {
            assert_eq!(rec.sigma, divisor_sigma(&rec.factorization));
            assert!(truncate3(&rec.g_11r).unwrap().as_str() < "1.760");
        }
    }

    #[test]
    fn bound_examples() {
        let b5 = robin_bound_value(5, 128).unwrap();
        assert_eq!(truncate3(&b5).unwrap(), "4.643");
        assert_eq!(robin_bound_margin(3, 256).unwrap().sign(), Some(Ordering::Greater));
        assert_eq!(robin_bound_margin(5040, 256).unwrap().sign(), Some(Ordering::Greater));
        assert!(robin_bound_margin(2, 128).is_err());
        let rep = robin_bound_scan(3, 20_000, &Ladder::default(), DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(rep.failures.is_empty() && rep.indeterminates.is_empty());
    }

    #[test]
    fn records_are_superabundant() {
        let recs = abundancy_records(5040);
        let sa: Vec<u64> = sa_enumerate(5040, DEFAULT_MEMORY_BUDGET).unwrap().iter().map(|e| e.s.to_u64().unwrap()).collect();
        assert_eq!(recs, sa);
    }
}
