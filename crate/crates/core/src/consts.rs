//! The Euler-Mascheroni constant and e^gamma.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;

use crate::ball::BoundedReal;
use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

const GAMMA_ASSET: &str = include_str!("../assets/euler_gamma.txt");

struct GammaDigits {
    /// gamma truncated to `digits` decimals, scaled by 10^digits
    scaled: BigInt,
    digits: u32,
}

fn parse_gamma() -> Result<GammaDigits> {
    let text = GAMMA_ASSET.trim();
    let frac = text
        .strip_prefix("0.")
        .ok_or_else(|| Error::CorruptConstant("gamma asset must start with \"0.\"".into()))?;
    if !frac.starts_with("57721") {
        return Err(Error::CorruptConstant(format!("gamma asset begins 0.{}", &frac[..frac.len().min(5)])));
    }
    if !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::CorruptConstant("gamma asset contains non-digits".into()));
    }
    Ok(GammaDigits { scaled: frac.parse().expect("digits"), digits: frac.len() as u32 })
}

fn gamma_digits() -> Result<&'static GammaDigits> {
    static DIGITS: OnceLock<std::result::Result<GammaDigits, Error>> = OnceLock::new();
    DIGITS.get_or_init(parse_gamma).as_ref().map_err(Clone::clone)
}

/// Number of embedded decimal digits of gamma.
pub fn gamma_digit_count() -> u32 {
    gamma_digits().map(|g| g.digits).unwrap_or(0)
}

/// Largest precision, in bits, that the embedded digits support.
pub fn max_constant_precision() -> u32 {
    // 10^-d < 2^-(3.32 d); keep a few bits of slack
    (gamma_digit_count() as u64 * 3321 / 1000).saturating_sub(8) as u32
}

fn check_precision(prec: u32) -> Result<()> {
    let supported = max_constant_precision();
    if prec > supported {
        return Err(Error::PrecisionUnsupported { requested: prec, supported });
    }
    Ok(())
}

/// Enclosure of the Euler-Mascheroni constant.
pub fn euler_gamma(prec: u32) -> Result<BoundedReal> {
    check_precision(prec)?;
    let g = gamma_digits()?;
    let den = BigInt::from(10u32).pow(g.digits);
    let lo = Dyadic::div_int(&g.scaled, &den, prec, Round::Down);
    let hi = Dyadic::div_int(&(&g.scaled + BigInt::one()), &den, prec, Round::Up);
    Ok(BoundedReal::from_bounds(lo, hi, prec))
}

/// Enclosure of e^gamma.
pub fn e_gamma(prec: u32) -> Result<BoundedReal> {
    Ok(euler_gamma(prec)?.exp())
}
