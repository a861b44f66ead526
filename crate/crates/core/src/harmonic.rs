//! Harmonic numbers and the Lagarias criterion
//! `sigma(n) < H_n + exp(H_n) ln(H_n)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::ball::{BoundedReal, Ladder};
use crate::consts::euler_gamma;
use crate::error::{Error, Result};
use crate::factor::factorize;
use crate::gronwall::Tri;
use crate::ratio::ExactRatio;
use crate::sigma::{divisor_sigma, sigma_sieve};

/// Largest n for which H_n is summed exactly.
pub const EXACT_HARMONIC_LIMIT: u64 = 10_000;

/// `sum_{j=a}^{b-1} 1/j` as an unreduced fraction (binary splitting).
fn harmonic_split(a: u64, b: u64) -> (BigInt, BigInt) {
    if b - a == 1 {
        return (BigInt::one(), BigInt::from(a));
    }
    let mid = a + (b - a) / 2;
    let (p1, q1) = harmonic_split(a, mid);
    let (p2, q2) = harmonic_split(mid, b);
    (&p1 * &q2 + &p2 * &q1, q1 * q2)
}

/// H_n exactly, for `1 <= n <= EXACT_HARMONIC_LIMIT`.
pub fn harmonic_exact(n: u64) -> Option<ExactRatio> {
    if n == 0 || n > EXACT_HARMONIC_LIMIT {
        return None;
    }
    let (p, q) = harmonic_split(1, n + 1);
    Some(ExactRatio::new(p, q))
}

/// Enclosure of H_n.
///
/// Up to [`EXACT_HARMONIC_LIMIT`] the exact sum is rounded outward. Beyond
/// it, `H_n = ln n + gamma + 1/(2n) - 1/(12 n^2) + e` with `0 < e < 1/(120 n^4)`.
pub fn harmonic(n: u64, prec: u32) -> Result<BoundedReal> {
    if n == 0 {
        return Err(Error::Domain("H_0 is not defined here; n must be positive".into()));
    }
    if n <= EXACT_HARMONIC_LIMIT {
        let (p, q) = harmonic_split(1, n + 1);
        return Ok(BoundedReal::from_ratio(&p, &q, prec));
    }
    let nb = BigInt::from(n);
    let n2 = &nb * &nb;
    let ln_n = BoundedReal::from_int(nb.clone(), prec).ln()?;
    let base = ln_n
        .add(&euler_gamma(prec)?)
        .add(&BoundedReal::from_ratio(&BigInt::one(), &(BigInt::from(2) * &nb), prec))
        .sub(&BoundedReal::from_ratio(&BigInt::one(), &(BigInt::from(12) * &n2), prec));
    let rem = BoundedReal::from_ratio(&BigInt::one(), &(BigInt::from(120) * &n2 * &n2), prec);
    Ok(BoundedReal::from_bounds(base.lo().clone(), base.hi().add(rem.hi()), prec))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LagariasVariant {
    /// `sigma(n) < H_n + exp(H_n) ln(H_n)`, equivalent to RH
    Strict,
    /// `sigma(n) < H_n + 2 exp(H_n) ln(H_n)`, unconditional
    Doubled,
}

impl LagariasVariant {
    fn factor(self) -> i64 {
        match self {
            LagariasVariant::Strict => 1,
            LagariasVariant::Doubled => 2,
        }
    }
}

fn rhs_from_h(h: &BoundedReal, variant: LagariasVariant) -> Result<BoundedReal> {
    Ok(h.add(&h.exp().mul(&h.ln()?).mul_int(&BigInt::from(variant.factor()))))
}

/// Enclosure of the right-hand side `H_n + c exp(H_n) ln(H_n)`.
pub fn lagarias_rhs(n: u64, variant: LagariasVariant, prec: u32) -> Result<BoundedReal> {
    rhs_from_h(&harmonic(n, prec)?, variant)
}

/// Certified truth of the selected Lagarias inequality at `n > 1`.
pub fn lagarias_check(n: u64, variant: LagariasVariant, ladder: &Ladder) -> Result<Tri> {
    if n < 2 {
        return Err(Error::Domain(format!("the Lagarias inequality needs n > 1, got {n}")));
    }
    let sigma = BigInt::from(divisor_sigma(&factorize(n)));
    lagarias_check_with_sigma(n, &sigma, variant, ladder)
}

fn lagarias_check_with_sigma(n: u64, sigma: &BigInt, variant: LagariasVariant, ladder: &Ladder) -> Result<Tri> {
    Tri::from_result(ladder.run(|p| {
        let rhs = lagarias_rhs(n, variant, p)?;
        Ok(match rhs.cmp_ratio(sigma, &BigInt::one()) {
            Some(Ordering::Greater) => Some(true),
            Some(Ordering::Less) => Some(false),
            _ => None,
        })
    }))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LagariasScanReport {
    pub lo: u64,
    pub hi: u64,
    pub variant: Option<LagariasVariant>,
    /// n where the inequality certifiably fails
    pub failures: Vec<u64>,
    pub indeterminates: Vec<u64>,
}

/// Check every `n` in `[lo, hi]`.
///
/// The right-hand side increases with n, so within a short run `[x, y]` the
/// lower endpoint at `x` bounds it from below for every member; only values
/// of sigma that reach that bound get an individual check.
pub fn lagarias_scan(lo: u64, hi: u64, variant: LagariasVariant, ladder: &Ladder, budget: u64) -> Result<LagariasScanReport> {
    if lo < 2 || lo > hi {
        return Err(Error::Domain(format!("lagarias_scan needs 2 <= lo <= hi, got [{lo}, {hi}]")));
    }
    let prec = ladder.start;
    let sigmas = sigma_sieve(lo, hi, budget)?;
    let mut report = LagariasScanReport { lo, hi, variant: Some(variant), ..Default::default() };
    // running enclosure of H_n, started from the exact value at lo
    let mut h = harmonic(lo, prec)?;
    let mut x = lo;
    while x <= hi {
        let y = (x + (x / 64).clamp(1, 1024) - 1).min(hi);
        let bound = rhs_from_h(&h, variant)?.lo().floor();
        for n in x..=y {
            let s = BigInt::from(sigmas[(n - lo) as usize]);
            if s < bound {
                continue;
            }
            match lagarias_check_with_sigma(n, &s, variant, ladder)? {
                Tri::True => {}
                Tri::False => report.failures.push(n),
                Tri::Indeterminate { .. } => report.indeterminates.push(n),
            }
        }
        for j in x + 1..=y + 1 {
            h = h.add(&BoundedReal::from_ratio(&BigInt::one(), &BigInt::from(j), prec));
        }
        x = y + 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::DEFAULT_MEMORY_BUDGET;

    #[test]
    fn exact_small_values() {
        assert_eq!(harmonic_exact(1).unwrap(), ExactRatio::new(1, 1));
        assert_eq!(harmonic_exact(2).unwrap(), ExactRatio::new(3, 2));
        assert_eq!(harmonic_exact(4).unwrap(), ExactRatio::new(25, 12));
        assert!(harmonic_exact(0).is_none());
        assert!(harmonic_exact(EXACT_HARMONIC_LIMIT + 1).is_none());
    }

    #[test]
    fn exact_matches_naive_sum() {
        let mut acc = ExactRatio::new(0, 1).as_rational().clone();
        for j in 1..=200u64 {
            acc += num_rational::BigRational::new(BigInt::one(), BigInt::from(j));
            assert_eq!(harmonic_exact(j).unwrap().as_rational(), &acc);
        }
    }

    #[test]
    fn asymptotic_enclosure_contains_exact_sum() {
        // the exact sum is still computable just past the switch-over point
        for n in [EXACT_HARMONIC_LIMIT + 1, 12_345, 20_000] {
            let (p, q) = harmonic_split(1, n + 1);
            let h = harmonic(n, 192).unwrap();
            assert_eq!(h.lo().cmp_ratio(&p, &q), Ordering::Less, "n = {n}");
            assert_eq!(h.hi().cmp_ratio(&p, &q), Ordering::Greater, "n = {n}");
            assert!(h.radius().magnitude_bits() < -60);
        }
    }

    #[test]
    fn lagarias_examples() {
        let l = Ladder::default();
        assert_eq!(lagarias_check(2, LagariasVariant::Strict, &l).unwrap(), Tri::True);
        assert_eq!(lagarias_check(5040, LagariasVariant::Strict, &l).unwrap(), Tri::True);
        assert_eq!(lagarias_check(3, LagariasVariant::Doubled, &l).unwrap(), Tri::True);
        assert!(lagarias_check(1, LagariasVariant::Strict, &l).is_err());
    }

    #[test]
    fn rhs_at_two() {
        // 3/2 + e^{3/2} ln(3/2) = 3.31716...
        let r = lagarias_rhs(2, LagariasVariant::Strict, 128).unwrap();
        assert_eq!(r.lo().to_decimal(4, crate::dyadic::Round::Down), "3.3171");
    }

    #[test]
    fn scan_agrees_with_pointwise_checks() {
        let l = Ladder::default();
        let rep = lagarias_scan(2, 3000, LagariasVariant::Strict, &l, DEFAULT_MEMORY_BUDGET).unwrap();
        assert!(rep.failures.is_empty() && rep.indeterminates.is_empty());
        for n in [2u64, 12, 60, 120, 2520] {
            assert_eq!(lagarias_check(n, LagariasVariant::Strict, &l).unwrap(), Tri::True);
        }
    }
}
