use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Serialize, Serializer};

use crate::ball::BoundedReal;
use crate::dyadic::format_scaled;

/// Exact rational in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactRatio(BigRational);

impl ExactRatio {
    /// Panics on a zero denominator.
    pub fn new<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> Self {
        ExactRatio(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer<N: Into<BigInt>>(n: N) -> Self {
        ExactRatio(BigRational::from_integer(n.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn enclosure(&self, prec: u32) -> BoundedReal {
        BoundedReal::from_ratio(self.numer(), self.denom(), prec)
    }

    /// `floor(x * 1000) / 1000` with exactly three fractional digits.
    pub fn truncate3(&self) -> String {
        let v = (self.numer() * BigInt::from(1000)).div_floor(self.denom());
        format_scaled(&v, 3)
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(64).to_f64()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }
}

impl From<BigRational> for ExactRatio {
    fn from(r: BigRational) -> Self {
        ExactRatio(r)
    }
}

impl Ord for ExactRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for ExactRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
