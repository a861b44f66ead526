//! Prime factorization of machine integers.
//!
//! Trial division by the primes below 10^6, a deterministic Miller-Rabin
//! test for 64-bit inputs, and Brent's variant of Pollard rho for whatever
//! composite cofactor survives trial division.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

pub const TRIAL_LIMIT: u32 = 1_000_000;

/// Canonical prime-power decomposition: primes strictly increasing, exponents >= 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { pairs: Vec::new() }
    }

    /// Build from prime-power pairs, validating the canonical form.
    pub fn from_pairs(mut pairs: Vec<(u64, u32)>) -> Result<Self> {
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Domain(format!("repeated prime {}", w[0].0)));
            }
        }
        for &(p, k) in &pairs {
            if k == 0 {
                return Err(Error::Domain(format!("zero exponent on {p}")));
            }
            if !is_prime(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
        }
        Ok(Factorization { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.pairs.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, k)| k)
    }

    pub fn is_one(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_prime(&self) -> bool {
        self.pairs.len() == 1 && self.pairs[0].1 == 1
    }

    pub fn is_composite(&self) -> bool {
        self.pairs.iter().map(|&(_, k)| k).sum::<u32>() >= 2
    }

    /// Largest prime factor.
    pub fn largest_prime(&self) -> Option<u64> {
        self.pairs.last().map(|&(p, _)| p)
    }

    /// Largest exponent.
    pub fn largest_exponent(&self) -> u32 {
        self.pairs.iter().map(|&(_, k)| k).max().unwrap_or(0)
    }

    pub fn value(&self) -> BigUint {
        self.pairs.iter().fold(BigUint::one(), |acc, &(p, k)| acc * BigUint::from(p).pow(k))
    }

    /// The value if it fits in 64 bits.
    pub fn value_u64(&self) -> Option<u64> {
        let mut v: u64 = 1;
        for &(p, k) in &self.pairs {
            for _ in 0..k {
                v = v.checked_mul(p)?;
            }
        }
        Some(v)
    }

    pub fn mul(&self, other: &Factorization) -> Factorization {
        let mut pairs = Vec::with_capacity(self.pairs.len() + other.pairs.len());
        let (mut i, mut j) = (0, 0);
        while i < self.pairs.len() || j < other.pairs.len() {
            match (self.pairs.get(i), other.pairs.get(j)) {
                (Some(&(p, a)), Some(&(q, b))) if p == q => {
                    pairs.push((p, a + b));
                    i += 1;
                    j += 1;
                }
                (Some(&(p, a)), Some(&(q, _))) if p < q => {
                    pairs.push((p, a));
                    i += 1;
                }
                (Some(_), Some(&(q, b))) => {
                    pairs.push((q, b));
                    j += 1;
                }
                (Some(&pa), None) => {
                    pairs.push(pa);
                    i += 1;
                }
                (None, Some(&qb)) => {
                    pairs.push(qb);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Factorization { pairs }
    }

    /// `self / p` for a prime `p` dividing the represented integer.
    pub fn div_prime(&self, p: u64) -> Option<Factorization> {
        let idx = self.pairs.iter().position(|&(q, _)| q == p)?;
        let mut pairs = self.pairs.clone();
        if pairs[idx].1 == 1 {
            pairs.remove(idx);
        } else {
            pairs[idx].1 -= 1;
        }
        Some(Factorization { pairs })
    }
}

impl fmt::Display for Factorization {
    /// `2^4*3^2*5*7`; the empty factorization prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, k)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if k == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{k}")?;
            }
        }
        Ok(())
    }
}

/// All primes below `limit` by the sieve of Eratosthenes.
pub fn primes_below(limit: u32) -> Vec<u32> {
    let n = limit as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(TRIAL_LIMIT))
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let ps = small_primes();
    if count <= ps.len() {
        return ps[..count].iter().map(|&p| p as u64).collect();
    }
    let mut out: Vec<u64> = ps.iter().map(|&p| p as u64).collect();
    let mut c = *out.last().unwrap() + 2;
    while out.len() < count {
        if is_prime(c) {
            out.push(c);
        }
        c += 2;
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A nontrivial factor of the odd composite `n` (Brent's cycle detection).
fn rho_split(n: u64) -> u64 {
    // retry with a new polynomial constant on failure
    for c in 1u64.. {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
        let (mut x, mut ys);
        let mut g;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho_split(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorization of `n >= 1`; `factorize(1)` is empty.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut pairs = Vec::new();
    let mut m = n;
    for &p in small_primes() {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            pairs.push((p, k));
        }
    }
    if m > 1 {
        let last_trial = *small_primes().last().unwrap() as u64;
        if m <= last_trial * last_trial || is_prime(m) {
            pairs.push((m, 1));
        } else {
            let mut big = Vec::new();
            split_into(m, &mut big);
            big.sort_unstable();
            for p in big {
                match pairs.last_mut() {
                    Some((q, k)) if *q == p => *k += 1,
                    _ => pairs.push((p, 1)),
                }
            }
        }
    }
    Factorization { pairs }
}
