//! Certified computation of Kempner-like series.
//!
//! The sums studied here are harmonic series restricted to integers whose
//! digits satisfy a statistic constraint:
//!
//! * `Σ 1/n` over `n ≥ 1` with base-`b` digit sum `s_b(n) = k`, whose limit as
//!   `k → ∞` is `2 log b / (b - 1)`;
//! * `Σ 1/n` over `n ≥ 1` whose binary expansion contains exactly `k`
//!   (possibly overlapping) occurrences of a word `w`, with limit
//!   `2^|w| log 2`.
//!
//! The crate is split into
//!
//! * [`digitstat`]: words and digit statistics;
//! * [`oracle`]: exact rational ground truth and identity checks;
//! * [`numeric`]: dyadic enclosures with outward rounding and certified
//!   logarithms;
//! * [`qw`]: the signed log-affine expression for `log b_w(n)`;
//! * [`engine`]: certified, accelerated summation with rigorous tails;
//! * [`transfer`]: the finite-difference filter, its polynomial and certified
//!   root moduli.
//!
//! Without the `std` feature the crate is `no_std` and only needs `alloc`.
//! The `parallel` feature distributes long summations over a rayon pool; the
//! results are bit-identical for every thread count because all partial sums
//! are exact integers in a fixed-point scale.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod digitstat;
pub mod engine;
mod error;
pub mod numeric;
pub mod oracle;
pub mod qw;
pub mod transfer;

pub use digitstat::{StatisticSpec, Word};
pub use engine::{Engine, SeriesResult};
pub use error::{Error, Result};
pub use numeric::{Dyadic, Enclosure, Rounding};
pub use oracle::{ClassQuery, IdentityCheck, Rational};
pub use qw::{LogAffineTerm, QwExpression};
pub use transfer::Polynomial;
