//! Exact binary floating-point numbers `mant * 2^exp` with directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Rounding direction for inexact operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// `floor(m / 2^s)` or `ceil(m / 2^s)`.
fn shift_round(m: &BigInt, s: u64, dir: Round) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let mag = m.magnitude();
    let trunc = BigInt::from_biguint(Sign::Plus, mag >> s);
    let exact = (&trunc << s) == BigInt::from_biguint(Sign::Plus, mag.clone());
    let positive = m.sign() != Sign::Minus;
    match (positive, dir, exact) {
        (_, _, true) => {
            if positive {
                trunc
            } else {
                -trunc
            }
        }
        (true, Round::Down, false) => trunc,
        (true, Round::Up, false) => trunc + BigInt::from(1),
        (false, Round::Down, false) => -(trunc + BigInt::from(1)),
        (false, Round::Up, false) => -trunc,
    }
}

/// Directed integer division, `den != 0`.
pub(crate) fn div_round(num: &BigInt, den: &BigInt, dir: Round) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    match dir {
        Round::Down => q,
        Round::Up if r.is_zero() => q,
        Round::Up => q + 1,
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
        } else {
            Dyadic { mant, exp }
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        match self.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Upper bound on log2 |x|: |x| < 2^magnitude_bits.
    pub fn magnitude_bits(&self) -> i64 {
        self.mant.bits() as i64 + self.exp
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Dyadic::new(shift_round(&self.mant, s, dir), self.exp + s as i64)
    }

    /// Round to a multiple of `2^exp` in direction `dir`.
    pub fn round_to_exp(&self, exp: i64, dir: Round) -> Dyadic {
        if self.exp >= exp {
            return self.clone();
        }
        let s = (exp - self.exp) as u64;
        Dyadic::new(shift_round(&self.mant, s, dir), exp)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.mant * k, self.exp)
    }

    /// `self * 2^k`, exact.
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Quotient `num / den` of two integers rounded to `prec` bits.
    pub fn div_int(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Dyadic {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Dyadic::zero();
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        // scale so that the quotient carries at least prec + 2 bits
        let shift = (prec as i64 + 2 + den.bits() as i64 - num.bits() as i64).max(0) as u64;
        let q = div_round(&(num << shift), &den, dir);
        Dyadic::new(q, -(shift as i64)).round(prec, dir)
    }

    /// `self / other` rounded to `prec` bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        let q = Dyadic::div_int(&self.mant, &other.mant, prec, dir);
        q.shl(self.exp - other.exp)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shift_round(&self.mant, (-self.exp) as u64, Round::Down)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shift_round(&self.mant, (-self.exp) as u64, Round::Up)
        }
    }

    /// Exact comparison against the rational `num / den` with `den > 0`.
    pub fn cmp_ratio(&self, num: &BigInt, den: &BigInt) -> Ordering {
        debug_assert!(den.is_positive());
        if self.exp >= 0 {
            ((&self.mant << self.exp as u64) * den).cmp(num)
        } else {
            (&self.mant * den).cmp(&(num << (-self.exp) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        // keep 64 leading bits so the conversion cannot overflow the mantissa
        let r = self.round(64, Round::Down);
        let m = r.mant.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(r.exp.clamp(-2000, 2000) as i32)
    }

    /// Decimal rendering with `digits` fractional digits, rounded in direction `dir`.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = self.mul_int(&scale);
        let v = match dir {
            Round::Down => scaled.floor(),
            Round::Up => scaled.ceil(),
        };
        format_scaled(&v, digits)
    }
}

/// Render the integer `v` as `v / 10^digits`.
pub(crate) fn format_scaled(v: &BigInt, digits: u32) -> String {
    let neg = v.is_negative();
    let s = v.magnitude().to_string();
    let d = digits as usize;
    let s = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
    let (int, frac) = s.split_at(s.len() - d);
    let sign = if neg { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Ordering::Equal {
            return Ordering::Equal;
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20, Round::Down))
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}
