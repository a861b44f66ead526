//! The sum-of-divisors function.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::Factorization;
use crate::ratio::ExactRatio;

/// Default memory budget for sieved ranges, in bytes.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

/// sigma(n) as the product of `(p^(k+1) - 1) / (p - 1)` over `p^k || n`.
pub fn divisor_sigma(f: &Factorization) -> BigUint {
    f.pairs().iter().fold(BigUint::one(), |acc, &(p, k)| {
        let p = BigUint::from(p);
        acc * ((p.pow(k + 1) - 1u32) / (p - 1u32))
    })
}

/// sigma(n) / n in lowest terms.
pub fn abundancy(f: &Factorization) -> ExactRatio {
    ExactRatio::new(BigInt::from(divisor_sigma(f)), BigInt::from(f.value()))
}

/// sigma(p^k) as a machine integer.
pub fn sigma_prime_power(p: u64, k: u32) -> u128 {
    let mut term = 1u128;
    let mut sum = 1u128;
    for _ in 0..k {
        term *= p as u128;
        sum += term;
    }
    sum
}

/// Bytes a sieve over `len` values needs.
pub fn sieve_bytes(len: u64) -> u64 {
    len.saturating_mul(std::mem::size_of::<u64>() as u64)
}

const PAR_CHUNK: u64 = 1 << 16;

fn sieve_chunk(lo: u64, hi: u64) -> Vec<u64> {
    let len = (hi - lo + 1) as usize;
    let mut out = vec![0u64; len];
    // every divisor pair (d, n/d) with d <= sqrt(n) is added once
    let mut d = 1u64;
    while d * d <= hi {
        let first = lo.div_ceil(d).max(d) * d;
        let mut m = first;
        while m <= hi {
            let e = m / d;
            out[(m - lo) as usize] += if e == d { d } else { d + e };
            m += d;
        }
        d += 1;
    }
    out
}

/// `[sigma(lo), ..., sigma(hi)]`, refusing ranges over `budget` bytes.
pub fn sigma_sieve(lo: u64, hi: u64, budget: u64) -> Result<Vec<u64>> {
    if lo == 0 || lo > hi {
        return Err(Error::Domain(format!("sigma_sieve needs 1 <= lo <= hi, got [{lo}, {hi}]")));
    }
    if hi > u32::MAX as u64 {
        return Err(Error::Domain("sigma_sieve supports hi < 2^32".into()));
    }
    let needed = sieve_bytes(hi - lo + 1);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let starts: Vec<u64> = (lo..=hi).step_by(PAR_CHUNK as usize).collect();
    let parts: Vec<Vec<u64>> = starts.par_iter().map(|&a| sieve_chunk(a, (a + PAR_CHUNK - 1).min(hi))).collect();
    Ok(parts.concat())
}
