//! Certified real enclosures.
//!
//! A [`BoundedReal`] is a closed interval with dyadic endpoints. Every
//! operation rounds its lower endpoint down and its upper endpoint up, so
//! the exact result of the same operation on any reals inside the operands
//! lies inside the output. `precision` is the number of significant bits
//! kept on each endpoint.
//!
//! `ln` and `exp` are evaluated in fixed point with `precision + 32` bits
//! and an explicit bound, in units of the last place, on the accumulated
//! truncation error.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

const GUARD_BITS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl BoundedReal {
    /// Interval `[lo, hi]`, rounded outward to `prec` bits.
    pub fn from_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        BoundedReal { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up), prec }
    }

    pub fn exact(v: Dyadic, prec: u32) -> Self {
        BoundedReal::from_bounds(v.clone(), v, prec)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> Self {
        BoundedReal::exact(Dyadic::from_int(v), prec)
    }

    /// Enclosure of `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        BoundedReal {
            lo: Dyadic::div_int(num, den, prec, Round::Down),
            hi: Dyadic::div_int(num, den, prec, Round::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn center(&self) -> Dyadic {
        self.lo.add(&self.hi).shl(-1)
    }

    pub fn radius(&self) -> Dyadic {
        self.hi.sub(&self.lo).shl(-1)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// True if `other` lies inside `self`.
    pub fn encloses(&self, other: &BoundedReal) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn to_f64(&self) -> f64 {
        self.center().to_f64()
    }

    /// Certified ordering, or `None` when the enclosures overlap.
    pub fn certified_cmp(&self, other: &BoundedReal) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified sign, or `None` when the enclosure contains zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified ordering against the exact rational `num / den`, `den > 0`.
    pub fn cmp_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Ordering> {
        match (self.lo.cmp_ratio(num, den), self.hi.cmp_ratio(num, den)) {
            (_, Ordering::Less) => Some(Ordering::Less),
            (Ordering::Greater, _) => Some(Ordering::Greater),
            (Ordering::Equal, Ordering::Equal) => Some(Ordering::Equal),
            _ => None,
        }
    }

    fn out_prec(&self, other: &BoundedReal) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &BoundedReal) -> BoundedReal {
        let prec = self.out_prec(other);
        BoundedReal {
            lo: self.lo.add(&other.lo).round(prec, Round::Down),
            hi: self.hi.add(&other.hi).round(prec, Round::Up),
            prec,
        }
    }

    pub fn neg(&self) -> BoundedReal {
        BoundedReal { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn sub(&self, other: &BoundedReal) -> BoundedReal {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BoundedReal) -> BoundedReal {
        let prec = self.out_prec(other);
        let (lo, hi) = if !self.lo.is_negative() && !other.lo.is_negative() {
            (self.lo.mul(&other.lo), self.hi.mul(&other.hi))
        } else {
            let c = [
                self.lo.mul(&other.lo),
                self.lo.mul(&other.hi),
                self.hi.mul(&other.lo),
                self.hi.mul(&other.hi),
            ];
            let lo = c.iter().min().unwrap().clone();
            let hi = c.iter().max().unwrap().clone();
            (lo, hi)
        };
        BoundedReal { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up), prec }
    }

    /// Product with an exact integer.
    pub fn mul_int(&self, k: &BigInt) -> BoundedReal {
        let (a, b) = (self.lo.mul_int(k), self.hi.mul_int(k));
        let (lo, hi) = if k.is_negative() { (b, a) } else { (a, b) };
        BoundedReal { lo: lo.round(self.prec, Round::Down), hi: hi.round(self.prec, Round::Up), prec: self.prec }
    }

    pub fn square(&self) -> BoundedReal {
        if !self.lo.is_negative() {
            self.mul(self)
        } else if !self.hi.is_positive() {
            self.neg().mul(&self.neg())
        } else {
            let m = self.lo.abs().max(self.hi.abs());
            BoundedReal { lo: Dyadic::zero(), hi: m.mul(&m).round(self.prec, Round::Up), prec: self.prec }
        }
    }

    pub fn recip(&self) -> Result<BoundedReal> {
        if self.sign().is_none() || self.lo.is_zero() || self.hi.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let one = Dyadic::from_int(1);
        Ok(BoundedReal {
            lo: one.div(&self.hi, self.prec, Round::Down),
            hi: one.div(&self.lo, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn div(&self, other: &BoundedReal) -> Result<BoundedReal> {
        let prec = self.out_prec(other);
        if other.sign().is_none() || other.lo.is_zero() || other.hi.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = c.iter().map(|(a, b)| a.div(b, prec, Round::Down)).min().unwrap();
        let hi = c.iter().map(|(a, b)| a.div(b, prec, Round::Up)).max().unwrap();
        Ok(BoundedReal { lo, hi, prec })
    }

    /// Natural logarithm; the enclosure must be strictly positive.
    pub fn ln(&self) -> Result<BoundedReal> {
        if !self.lo.is_positive() {
            return Err(Error::Domain("logarithm of a non-positive enclosure".into()));
        }
        let w = self.prec + GUARD_BITS;
        let at = |x: &Dyadic| {
            let (a, e) = ln_fixed(x, w);
            (Dyadic::new(&a - &e, -(w as i64)), Dyadic::new(a + e, -(w as i64)))
        };
        let (lo, mut hi) = at(&self.lo);
        if self.lo != self.hi {
            hi = at(&self.hi).1;
        }
        Ok(BoundedReal::from_bounds(lo, hi, self.prec))
    }

    pub fn exp(&self) -> BoundedReal {
        let low = exp_point(&self.lo, self.prec);
        if self.lo == self.hi {
            return low;
        }
        BoundedReal::from_bounds(low.lo, exp_point(&self.hi, self.prec).hi, self.prec)
    }

    /// `floor(x * 10^digits)` when it is the same integer across the enclosure.
    pub fn truncated_scaled(&self, digits: u32) -> Result<BigInt> {
        let scale = BigInt::from(10u32).pow(digits);
        let a = self.lo.mul_int(&scale).floor();
        let b = self.hi.mul_int(&scale).floor();
        if a == b {
            Ok(a)
        } else {
            Err(Error::StraddlesBoundary)
        }
    }
}

impl fmt::Display for BoundedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_decimal(24, Round::Down), self.hi.to_decimal(24, Round::Up))
    }
}

impl Serialize for BoundedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BoundedReal", 3)?;
        s.serialize_field("lo", &self.lo.to_decimal(30, Round::Down))?;
        s.serialize_field("hi", &self.hi.to_decimal(30, Round::Up))?;
        s.serialize_field("bits", &self.prec)?;
        s.end()
    }
}

/// `atanh(num/den) * 2^w` for `|num/den| <= 1/3`, with an error bound in ulps.
///
/// Each term `z^(2j+1)` is carried with error below 1.8 ulp and each
/// quotient by `2j+1` adds at most one more; the tail after the first zero
/// term is below 2.1 ulp.
fn atanh_fixed(num: &BigInt, den: &BigInt, w: u32) -> (BigInt, BigInt) {
    debug_assert!(BigInt::from(3) * num.abs() <= den.abs());
    let one = BigInt::one() << w;
    let z = (num << w) / den;
    let z2 = (&z * &z) / &one;
    let mut term = z;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !term.is_zero() {
        sum += &term / BigInt::from(2 * j + 1);
        term = (&term * &z2) / &one;
        j += 1;
    }
    (sum, BigInt::from(3 * j + 3))
}

fn ln2_fixed(w: u32) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&w) {
        return v.clone();
    }
    let (a, e) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    let v = (a * 2, e * 2);
    cache.lock().unwrap().insert(w, v.clone());
    v
}

/// `ln(x) * 2^w` for `x > 0`, with an error bound in ulps.
fn ln_fixed(x: &Dyadic, w: u32) -> (BigInt, BigInt) {
    let m = x.mantissa();
    let b = m.bits();
    // x = (m / 2^(b-1)) * 2^k with the leading factor in [1, 2)
    let mut k = x.exponent() + b as i64 - 1;
    let mut d = BigInt::one() << (b - 1);
    if BigInt::from(2) * m >= BigInt::from(3) * &d {
        d <<= 1;
        k += 1;
    }
    // leading factor now in [0.75, 1.5], so |z| <= 1/5
    let (a, e) = atanh_fixed(&(m - &d), &(m + &d), w);
    let (mut a, mut e) = (a * 2, e * 2);
    if k != 0 {
        let (l2, el2) = ln2_fixed(w);
        a += &l2 * k;
        e += el2 * k.abs();
    }
    (a, e)
}

/// `exp(r) * 2^w` for `|r| <= 2^-8`, with an error bound in ulps.
fn exp_fixed_small(r: &Dyadic, w: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << w;
    let shift = r.exponent() + w as i64;
    let rr = if shift >= 0 {
        r.mantissa() << shift as u64
    } else {
        r.mantissa() / (BigInt::one() << (-shift) as u64)
    };
    let mut sum = one.clone();
    let mut term = one.clone();
    let mut j: u64 = 1;
    loop {
        term = (&term * &rr) / (&one * BigInt::from(j));
        if term.is_zero() {
            break;
        }
        sum += &term;
        j += 1;
    }
    (sum, BigInt::from(3 * j + 3))
}

/// Enclosure of `exp(x)` for an exact dyadic `x`.
fn exp_point(x: &Dyadic, prec: u32) -> BoundedReal {
    if x.is_zero() {
        return BoundedReal::from_int(1, prec);
    }
    // exp(x) = exp(x / 2^s)^(2^s) with |x / 2^s| <= 2^-8
    let s = (x.magnitude_bits() + 8).max(0) as u32;
    let r = x.shl(-(s as i64));
    let w = prec + GUARD_BITS + s;
    let (a, e) = exp_fixed_small(&r, w);
    let mut y = BoundedReal::from_bounds(Dyadic::new(&a - &e, -(w as i64)), Dyadic::new(&a + &e, -(w as i64)), w);
    for _ in 0..s {
        y = y.mul(&y);
    }
    BoundedReal::from_bounds(y.lo, y.hi, prec)
}

/// Precision ladder: start, doubling, up to and including the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ladder {
    pub start: u32,
    pub cap: u32,
}

impl Default for Ladder {
    fn default() -> Self {
        Ladder { start: 128, cap: 4096 }
    }
}

impl Ladder {
    pub fn new(start: u32, cap: u32) -> Self {
        Ladder { start: start.min(cap).max(2), cap: cap.max(2) }
    }

    pub fn steps(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap;
        let mut next = Some(self.start);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= cap { None } else { Some((cur * 2).min(cap)) };
            Some(cur)
        })
    }

    /// Run `f` at increasing precision until it yields an answer.
    pub fn run<T>(&self, mut f: impl FnMut(u32) -> Result<Option<T>>) -> Result<T> {
        for p in self.steps() {
            match f(p) {
                Ok(Some(v)) => return Ok(v),
                Ok(None) | Err(Error::StraddlesBoundary) | Err(Error::DivisionByZero) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::Indeterminate { cap: self.cap })
    }
}
