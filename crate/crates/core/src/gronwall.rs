//! Gronwall's function G(n) = sigma(n) / (n log log n).

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::ball::{BoundedReal, Ladder};
use crate::dyadic::format_scaled;
use crate::error::{Error, Result};
use crate::factor::{factorize, Factorization};
use crate::ratio::ExactRatio;
use crate::sigma::{abundancy, divisor_sigma};

/// Outcome of a certified yes/no question.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Tri {
    True,
    False,
    /// No separation at the precision cap (in bits).
    Indeterminate { cap: u32 },
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn from_result(r: Result<bool>) -> Result<Tri> {
        match r {
            Ok(b) => Ok(Tri::from_bool(b)),
            Err(Error::Indeterminate { cap }) => Ok(Tri::Indeterminate { cap }),
            Err(e) => Err(e),
        }
    }
}

/// Enclosure of ln(ln n) for an integer n >= 2.
pub fn log_log_big(n: &BigUint, prec: u32) -> Result<BoundedReal> {
    if *n < BigUint::from(2u32) {
        return Err(Error::Domain(format!("log log {n} is undefined for n < 2")));
    }
    BoundedReal::from_int(BigInt::from(n.clone()), prec).ln()?.ln()
}

pub fn log_log(n: u64, prec: u32) -> Result<BoundedReal> {
    log_log_big(&BigUint::from(n), prec)
}

/// Enclosure of G(n) for the integer represented by `f` (at least 2).
pub fn g_value_of(f: &Factorization, prec: u32) -> Result<BoundedReal> {
    let n = f.value();
    let ll = log_log_big(&n, prec)?;
    abundancy(f).enclosure(prec).div(&ll)
}

pub fn g_value(n: u64, prec: u32) -> Result<BoundedReal> {
    if n < 2 {
        return Err(Error::Domain(format!("G({n}) is undefined")));
    }
    g_value_of(&factorize(n), prec)
}

/// Everything needed to compare G at one argument.
#[derive(Clone, Debug)]
pub struct GArg {
    pub factorization: Factorization,
    pub value: BigUint,
    pub sigma: BigUint,
}

impl GArg {
    pub fn new(f: Factorization) -> Result<Self> {
        let value = f.value();
        if value < BigUint::from(2u32) {
            return Err(Error::Domain("G(1) is undefined".into()));
        }
        let sigma = divisor_sigma(&f);
        Ok(GArg { factorization: f, value, sigma })
    }

    pub fn from_u64(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("G({n}) is undefined")));
        }
        GArg::new(factorize(n))
    }

    pub fn abundancy(&self) -> ExactRatio {
        ExactRatio::new(BigInt::from(self.sigma.clone()), BigInt::from(self.value.clone()))
    }

    pub fn log_log(&self, prec: u32) -> Result<BoundedReal> {
        log_log_big(&self.value, prec)
    }

    pub fn g(&self, prec: u32) -> Result<BoundedReal> {
        self.abundancy().enclosure(prec).div(&self.log_log(prec)?)
    }
}

/// One comparison attempt at a fixed precision; `None` if not separated.
fn g_compare_at(a: &GArg, b: &GArg, prec: u32) -> Result<Option<Ordering>> {
    let la = a.log_log(prec)?;
    let lb = b.log_log(prec)?;
    let (Some(sa), Some(sb)) = (la.sign(), lb.sign()) else {
        return Ok(None);
    };
    use Ordering::*;
    Ok(match (sa, sb) {
        // sigma > 0, so the sign of G is the sign of log log
        (Less, Greater) => Some(Less),
        (Greater, Less) => Some(Greater),
        (Greater, Greater) => {
            // G(a) < G(b)  <=>  sigma(a) b LL(b) < sigma(b) a LL(a)
            let x = lb.mul_int(&BigInt::from(&a.sigma * &b.value));
            let y = la.mul_int(&BigInt::from(&b.sigma * &a.value));
            x.certified_cmp(&y).filter(|o| *o != Equal)
        }
        (Less, Less) => {
            // both negative: G(a) < G(b)  <=>  sigma(a) b |LL(b)| > sigma(b) a |LL(a)|
            let x = lb.neg().mul_int(&BigInt::from(&a.sigma * &b.value));
            let y = la.neg().mul_int(&BigInt::from(&b.sigma * &a.value));
            x.certified_cmp(&y).filter(|o| *o != Equal).map(Ordering::reverse)
        }
        _ => None,
    })
}

/// Certified ordering of G(a) against G(b).
///
/// `Equal` is only ever returned for identical arguments; distinct arguments
/// either separate within the ladder or yield [`Error::Indeterminate`].
pub fn g_compare_args(a: &GArg, b: &GArg, ladder: &Ladder) -> Result<Ordering> {
    if a.value == b.value {
        return Ok(Ordering::Equal);
    }
    ladder.run(|p| g_compare_at(a, b, p))
}

pub fn g_compare_factored(a: &Factorization, b: &Factorization, ladder: &Ladder) -> Result<Ordering> {
    g_compare_args(&GArg::new(a.clone())?, &GArg::new(b.clone())?, ladder)
}

pub fn g_compare(a: u64, b: u64, ladder: &Ladder) -> Result<Ordering> {
    if a == b {
        if a < 2 {
            return Err(Error::Domain(format!("G({a}) is undefined")));
        }
        return Ok(Ordering::Equal);
    }
    g_compare_args(&GArg::from_u64(a)?, &GArg::from_u64(b)?, ladder)
}

/// `floor(x * 1000) / 1000` with three fractional digits, provided the whole
/// enclosure lies in one truncation cell.
pub fn truncate3(x: &BoundedReal) -> Result<String> {
    Ok(format_scaled(&x.truncated_scaled(3)?, 3))
}

/// Evaluate `f` up the ladder until its value truncates unambiguously.
pub fn certified_truncate3(ladder: &Ladder, f: impl FnMut(u32) -> Result<BoundedReal>) -> Result<String> {
    Ok(truncated_enclosure(ladder, f)?.1)
}

/// Like [`certified_truncate3`], also returning the enclosure that decided it.
pub fn truncated_enclosure(ladder: &Ladder, mut f: impl FnMut(u32) -> Result<BoundedReal>) -> Result<(BoundedReal, String)> {
    ladder.run(|p| match f(p) {
        Ok(x) => match truncate3(&x) {
            Ok(s) => Ok(Some((x, s))),
            Err(Error::StraddlesBoundary) => Ok(None),
            Err(e) => Err(e),
        },
        Err(Error::DivisionByZero) => Ok(None),
        Err(e) => Err(e),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// |x - reference| < 10^-35 for every point of the enclosure.
    fn agrees_with(x: &BoundedReal, reference: &str) -> bool {
        let neg = reference.starts_with('-');
        let digits = reference.trim_start_matches('-').replace('.', "");
        let places = reference.split('.').nth(1).unwrap().len() as u32;
        let mut num: BigInt = digits.parse().unwrap();
        if neg {
            num = -num;
        }
        let scale = BigInt::from(10u32).pow(places);
        let tol = BigInt::from(10u32).pow(places - 35);
        x.lo().cmp_ratio(&(&num - &tol), &scale) == Ordering::Greater
            && x.hi().cmp_ratio(&(&num + &tol), &scale) == Ordering::Less
    }

    #[test]
    fn log_log_reference_values() {
        // reference digits from an independent 80-digit evaluation
        let cases = [
            (2u64, "-0.366512920581664327012439158232669469454"),
            (3, "0.094047827616699016174334332084493992785"),
            (16, "1.019781440538226291822025084683683666696"),
        ];
        for (n, reference) in cases {
            let ll = log_log(n, 128).unwrap();
            assert!(agrees_with(&ll, reference), "n = {n}: {ll}");
        }
        assert_eq!(log_log(2, 128).unwrap().sign(), Some(Ordering::Less));
        assert_eq!(log_log(3, 128).unwrap().sign(), Some(Ordering::Greater));
    }

    #[test]
    fn log_log_rejects_small() {
        assert!(log_log(1, 64).is_err());
        assert!(log_log(0, 64).is_err());
        assert!(g_value(1, 64).is_err());
    }

    #[test]
    fn g_table_values() {
        assert_eq!(truncate3(&g_value(4, 128).unwrap()).unwrap(), "5.357");
        assert_eq!(truncate3(&g_value(3, 128).unwrap()).unwrap(), "14.177");
        assert_eq!(truncate3(&g_value(6, 128).unwrap()).unwrap(), "3.429");
        assert_eq!(g_value(2, 128).unwrap().sign(), Some(Ordering::Less));
    }

    #[test]
    fn compare_examples() {
        let l = Ladder::default();
        assert_eq!(g_compare(6, 3, &l).unwrap(), Ordering::Less);
        assert_eq!(g_compare(7, 7, &l).unwrap(), Ordering::Equal);
        assert_eq!(g_compare(5040, 2520, &l).unwrap(), Ordering::Less);
        assert_eq!(g_compare(2, 4, &l).unwrap(), Ordering::Less);
        assert_eq!(g_compare(4, 2, &l).unwrap(), Ordering::Greater);
        assert_eq!(g_compare(2, 2, &l).unwrap(), Ordering::Equal);
    }

    #[test]
    fn compare_hits_cap() {
        // G(720) and G(840) agree to about 2^-6 relative; four bits cannot split them
        let tiny = Ladder::new(4, 4);
        assert!(matches!(g_compare(720, 840, &tiny), Err(Error::Indeterminate { cap: 4 })));
    }

    #[test]
    fn negative_truncation_floors() {
        // G(2) = 1.5 / ln ln 2 = -4.0926...
        assert_eq!(truncate3(&g_value(2, 128).unwrap()).unwrap(), "-4.093");
    }
}
