//! Superabundant numbers: enumeration by definition, by exponent structure,
//! and the Alaoglu-Erdős properties AE1-AE3.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::ball::{BoundedReal, Ladder};
use crate::error::{Error, Result};
use crate::factor::{factorize, first_primes, Factorization};
use crate::gronwall::{g_compare_factored, g_value_of};
use crate::ratio::ExactRatio;
use crate::sigma::{abundancy, divisor_sigma, sieve_bytes, sigma_sieve};

const ENUM_BLOCK: u64 = 1 << 20;

/// Precision of the G enclosure attached to each entry.
pub const ENTRY_PRECISION: u32 = 128;

#[derive(Clone, Debug, Serialize)]
pub struct SAEntry {
    #[serde(serialize_with = "crate::ser::display")]
    pub s: BigUint,
    pub factorization: Factorization,
    pub abundancy: ExactRatio,
    /// absent for s = 1
    pub g: Option<BoundedReal>,
}

impl SAEntry {
    pub fn new(factorization: Factorization) -> Result<Self> {
        let s = factorization.value();
        let g = if s > BigUint::one() { Some(g_value_of(&factorization, ENTRY_PRECISION)?) } else { None };
        Ok(SAEntry { abundancy: abundancy(&factorization), s, factorization, g })
    }
}

/// All superabundant numbers up to `limit`, including 1.
///
/// One sieved pass keeps the running maximum of sigma(n)/n; a tie does not
/// set a new record.
pub fn sa_enumerate(limit: u64, budget: u64) -> Result<Vec<SAEntry>> {
    if limit == 0 {
        return Err(Error::Domain("sa_enumerate needs limit >= 1".into()));
    }
    let block = ENUM_BLOCK.min(budget / sieve_bytes(1));
    if block == 0 {
        return Err(Error::BudgetExceeded { needed: sieve_bytes(1), budget });
    }
    let mut out = Vec::new();
    let (mut best_sigma, mut best_n) = (0u128, 1u128);
    let mut lo = 1;
    while lo <= limit {
        let hi = limit.min(lo + block - 1);
        for (i, &s) in sigma_sieve(lo, hi, budget)?.iter().enumerate() {
            let n = lo + i as u64;
            if s as u128 * best_n > best_sigma * n as u128 {
                best_sigma = s as u128;
                best_n = n as u128;
                out.push(SAEntry::new(factorize(n))?);
            }
        }
        lo = hi + 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AEReport {
    pub ae1: bool,
    /// pairs of prime factors q < r with |floor(k_q log q / log r) - k_r| > 1
    pub ae2_violations: Vec<(u64, u64)>,
    /// prime factors q with q^{k_q} >= 2^{k_2 + 2}
    pub ae3_violations: Vec<u64>,
}

impl AEReport {
    pub fn holds(&self) -> bool {
        self.ae1 && self.ae2_violations.is_empty() && self.ae3_violations.is_empty()
    }
}

/// Exponents non-increasing over all primes up to the largest factor.
pub fn ae1(f: &Factorization) -> bool {
    let pairs = f.pairs();
    let primes = first_primes(pairs.len());
    pairs.iter().zip(&primes).all(|(&(p, _), &q)| p == q) && pairs.windows(2).all(|w| w[0].1 >= w[1].1)
}

/// `floor(k log q / log r)` from enclosures, escalating while it straddles an integer.
fn floor_log_ratio(k: u32, q: u64, r: u64, ladder: &Ladder) -> Result<i64> {
    ladder.run(|p| {
        let num = BoundedReal::from_int(q, p).ln()?.mul_int(&BigInt::from(k));
        let x = num.div(&BoundedReal::from_int(r, p).ln()?)?;
        let (a, b) = (x.lo().floor(), x.hi().floor());
        Ok(if a == b { a.to_i64() } else { None })
    })
}

/// AE1-AE3 for the number with factorization `f`.
pub fn sa_check_ae(f: &Factorization, ladder: &Ladder) -> Result<AEReport> {
    if f.is_one() {
        return Err(Error::Domain("AE properties need a factorization with at least one prime".into()));
    }
    let pairs = f.pairs();
    let mut report = AEReport { ae1: ae1(f), ..Default::default() };
    for (i, &(q, kq)) in pairs.iter().enumerate() {
        for &(r, kr) in &pairs[i + 1..] {
            let fl = floor_log_ratio(kq, q, r, ladder)?;
            if (fl - kr as i64).abs() > 1 {
                report.ae2_violations.push((q, r));
            }
        }
    }
    let k2 = f.exponent_of(2);
    let cap = BigUint::one() << (k2 as u64 + 2);
    for &(q, kq) in pairs {
        if BigUint::from(q).pow(kq) >= cap {
            report.ae3_violations.push(q);
        }
    }
    Ok(report)
}

/// All `2^{k_2} 3^{k_3} ...` with `k_2 >= k_3 >= ... >= 1`, exponents at
/// most `exponent_cap`, primes among the first `prime_budget`, and value at
/// most `bound`; sorted by value. 1 is not included.
pub fn sa_candidates(prime_budget: usize, exponent_cap: u32, bound: &BigUint) -> Vec<Factorization> {
    fn descend(
        primes: &[u64],
        max_exp: u32,
        value: &BigUint,
        pairs: &mut Vec<(u64, u32)>,
        bound: &BigUint,
        out: &mut Vec<(BigUint, Factorization)>,
    ) {
        let Some((&p, rest)) = primes.split_first() else { return };
        let mut v = value.clone();
        for e in 1..=max_exp {
            v *= p;
            if v > *bound {
                break;
            }
            pairs.push((p, e));
            out.push((v.clone(), Factorization::from_pairs(pairs.clone()).expect("valid exponents")));
            descend(rest, e, &v, pairs, bound, out);
            pairs.pop();
        }
    }
    let primes = first_primes(prime_budget);
    let mut out = Vec::new();
    descend(&primes, exponent_cap, &BigUint::one(), &mut Vec::new(), bound, &mut out);
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, f)| f).collect()
}

/// Candidates whose abundancy strictly exceeds that of every smaller
/// candidate. Over a complete AE1 candidate set this is exactly the set
/// of superabundant numbers above 1 in range.
pub fn sa_filter_records(candidates: &[Factorization]) -> Result<Vec<SAEntry>> {
    let mut out = Vec::new();
    let mut best: Option<(BigUint, BigUint)> = None;
    for f in candidates {
        let (s, n) = (divisor_sigma(f), f.value());
        let record = match &best {
            None => true,
            Some((bs, bn)) => &s * bn > bs * &n,
        };
        if record {
            out.push(SAEntry::new(f.clone())?);
            best = Some((s, n));
        }
    }
    Ok(out)
}

/// Finite view of "every large SA number is a multiple of n0".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sa2Proxy {
    pub n0: u64,
    #[serde(serialize_with = "crate::ser::display_opt")]
    pub largest_non_multiple: Option<BigUint>,
    /// index of the first entry after which every listed entry is a multiple
    pub index: usize,
    /// at least one listed multiple follows the last non-multiple
    pub stabilized: bool,
}

pub fn sa2_proxy(n0: u64, sa_list: &[SAEntry]) -> Result<Sa2Proxy> {
    if n0 < 2 {
        return Err(Error::Domain(format!("sa2_proxy needs n0 > 1, got {n0}")));
    }
    let m = BigUint::from(n0);
    let last = sa_list.iter().rposition(|e| &e.s % &m != BigUint::ZERO);
    let index = last.map_or(0, |i| i + 1);
    Ok(Sa2Proxy {
        n0,
        largest_non_multiple: last.map(|i| sa_list[i].s.clone()),
        index,
        stabilized: index < sa_list.len(),
    })
}

/// Certified maximum of G over the listed SA numbers greater than `above`.
pub fn sa1_proxy(sa_list: &[SAEntry], above: &BigUint, ladder: &Ladder) -> Result<Option<SAEntry>> {
    let mut best: Option<&SAEntry> = None;
    for e in sa_list.iter().filter(|e| &e.s > above && e.s > BigUint::one()) {
        best = match best {
            Some(b) if g_compare_factored(&e.factorization, &b.factorization, ladder)? != Ordering::Greater => Some(b),
            _ => Some(e),
        };
    }
    Ok(best.cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::DEFAULT_MEMORY_BUDGET;

    fn values(list: &[SAEntry]) -> Vec<u64> {
        list.iter().map(|e| e.s.to_u64().unwrap()).collect()
    }

    const SA_5040: [u64; 19] = [1, 2, 4, 6, 12, 24, 36, 48, 60, 120, 180, 240, 360, 720, 840, 1260, 1680, 2520, 5040];

    #[test]
    fn enumerate_small() {
        assert_eq!(values(&sa_enumerate(5, DEFAULT_MEMORY_BUDGET).unwrap()), vec![1, 2, 4]);
        assert_eq!(values(&sa_enumerate(1, DEFAULT_MEMORY_BUDGET).unwrap()), vec![1]);
        assert_eq!(values(&sa_enumerate(5040, DEFAULT_MEMORY_BUDGET).unwrap()), SA_5040.to_vec());
        assert!(sa_enumerate(0, DEFAULT_MEMORY_BUDGET).is_err());
        assert!(matches!(sa_enumerate(10, 4), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn enumerate_in_small_blocks_matches() {
        assert_eq!(values(&sa_enumerate(5040, 8 * 100).unwrap()), SA_5040.to_vec());
    }

    #[test]
    fn ae_examples() {
        let l = Ladder::default();
        let r = sa_check_ae(&factorize(5040), &l).unwrap();
        assert!(r.holds());
        assert!(!sa_check_ae(&factorize(18), &l).unwrap().ae1);
        assert!(!ae1(&factorize(10)));
        assert!(ae1(&factorize(2)));
        assert!(sa_check_ae(&Factorization::one(), &l).is_err());
        // 2 * 3^3 breaks AE2 for (2, 3) and AE3 at 3
        let bad = sa_check_ae(&factorize(54), &l).unwrap();
        assert_eq!(bad.ae2_violations, vec![(2, 3)]);
        assert_eq!(bad.ae3_violations, vec![3]);
    }

    #[test]
    fn floor_matches_integer_powers() {
        let l = Ladder::default();
        for (k, q, r) in [(4u32, 2u64, 3u64), (10, 2, 7), (3, 3, 5), (7, 5, 7), (1, 2, 3)] {
            // largest m with r^m <= q^k
            let qk = BigUint::from(q).pow(k);
            let mut m = 0u32;
            while BigUint::from(r).pow(m + 1) <= qk {
                m += 1;
            }
            assert_eq!(floor_log_ratio(k, q, r, &l).unwrap(), m as i64);
        }
    }

    #[test]
    fn candidates_small() {
        let vals = |b: u64| -> Vec<u64> {
            sa_candidates(10, 64, &BigUint::from(b)).iter().map(|f| f.value_u64().unwrap()).collect()
        };
        assert_eq!(vals(10), vec![2, 4, 6, 8]);
        assert_eq!(vals(2), vec![2]);
        assert!(vals(1).is_empty());
        let f5040 = factorize(5040);
        assert!(sa_candidates(10, 64, &BigUint::from(5040u32)).contains(&f5040));
        assert!(sa_candidates(1, 3, &BigUint::from(1000u32)).iter().all(|f| f.largest_exponent() <= 3));
    }

    #[test]
    fn filter_matches_enumeration() {
        let c = sa_candidates(10, 64, &BigUint::from(5040u32));
        assert_eq!(values(&sa_filter_records(&c).unwrap()), SA_5040[1..].to_vec());
        let single = sa_filter_records(&c[..1]).unwrap();
        assert_eq!(values(&single), vec![2]);
    }

    #[test]
    fn sa2_examples() {
        let list = sa_enumerate(5040, DEFAULT_MEMORY_BUDGET).unwrap();
        let p = sa2_proxy(4, &list).unwrap();
        assert_eq!(p.largest_non_multiple, Some(BigUint::from(6u32)));
        assert!(p.stabilized);
        assert_eq!(sa2_proxy(2, &list).unwrap().largest_non_multiple, Some(BigUint::one()));
        assert!(sa2_proxy(1, &list).is_err());
    }

    #[test]
    fn sa1_max_above_5040_small() {
        let list = sa_enumerate(30_000, DEFAULT_MEMORY_BUDGET).unwrap();
        let best = sa1_proxy(&list, &BigUint::from(5040u32), &Ladder::default()).unwrap().unwrap();
        assert_eq!(best.s, BigUint::from(10080u32));
    }
}
