//! Certified computations around Gronwall's function
//! `G(n) = sigma(n) / (n log log n)`: Robin's inequality, the Lagarias
//! criterion, superabundant numbers, and GA1 / extraordinary numbers.
//!
//! Integer and rational quantities are exact. Real quantities are carried
//! as [`BoundedReal`] enclosures, and every comparison either separates
//! the enclosures or reports that the precision cap was reached.

pub mod ball;
pub mod consts;
pub mod dyadic;
pub mod error;
pub mod ga;
pub mod factor;
pub mod gronwall;
pub mod harmonic;
pub mod ratio;
pub mod robin;
pub mod sigma;
pub mod superabundant;
pub mod table;

pub(crate) mod ser {
    use std::fmt::Display;

    use serde::Serializer;

    pub fn display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn display_opt<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }
}

pub use ball::{BoundedReal, Ladder};
pub use dyadic::{Dyadic, Round};
pub use error::{Error, Result};
pub use factor::{factorize, Factorization};
pub use gronwall::{g_compare, g_value, log_log, truncate3, Tri};
pub use ratio::ExactRatio;
pub use sigma::{abundancy, divisor_sigma, sigma_sieve};
