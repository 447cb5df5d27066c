//! Dyadic numbers, certified enclosures and the fixed-point kernels behind
//! them.

mod decimal;
mod dyadic;
pub(crate) mod elementary;
mod enclosure;
pub(crate) mod fixed;

pub use decimal::{significant_digits, to_scientific};
pub use dyadic::{Dyadic, Rounding};
pub use enclosure::{Enclosure, GUARD_BITS};
