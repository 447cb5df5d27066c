//! Fixed-point reciprocal accumulation on machine words.
//!
//! The hot loops of the engine add up millions of reciprocals. Each term is
//! represented as `floor(2^F / m)` in `F / 64` fractional limbs plus one
//! integer limb, and the accumulator remembers how many of the floors were
//! inexact. The true sum `S` then satisfies
//! `floor_sum ≤ 2^F · S ≤ floor_sum + inexact`.
//!
//! Sums are exact integers, so combining partial sums in any grouping gives
//! the same bits.

use alloc::vec;
use alloc::vec::Vec;

use dashu_int::{IBig, UBig};

/// Fractional bits used for a target precision: at least 64 guard bits,
/// rounded up to whole limbs.
pub(crate) fn frac_bits_for(prec: usize) -> usize {
    (prec + 64).div_ceil(64) * 64
}

/// A non-negative fixed-point number `floor(value · 2^F)` being refined by
/// successive exact-floor divisions.
#[derive(Clone, Debug)]
pub(crate) struct Recip {
    /// Little-endian limbs; the last one is the integer part.
    limbs: Vec<u64>,
    inexact: bool,
}

impl Recip {
    pub(crate) fn new(frac_bits: usize) -> Self {
        debug_assert!(frac_bits.is_multiple_of(64));
        Recip { limbs: vec![0; frac_bits / 64 + 1], inexact: false }
    }

    /// Sets the value to `floor(2^F / m)`.
    pub(crate) fn set_recip(&mut self, m: u64) {
        assert!(m > 0, "reciprocal of zero");
        let top = self.limbs.len() - 1;
        self.limbs[top] = u64::from(m == 1);
        let mut rem: u64 = if m == 1 { 0 } else { 1 };
        for i in (0..top).rev() {
            let cur = (rem as u128) << 64;
            self.limbs[i] = (cur / m as u128) as u64;
            rem = (cur % m as u128) as u64;
        }
        self.inexact = rem != 0;
    }

    /// Replaces the value `x` by `floor(x / m)`.
    ///
    /// Because `floor(floor(a) / m) = floor(a / m)` for integer `m`, chained
    /// divisions yield the exact floor of the combined quotient.
    pub(crate) fn div(&mut self, m: u64) {
        assert!(m > 0, "division by zero");
        let m = m as u128;
        let mut rem: u128 = 0;
        for limb in self.limbs.iter_mut().rev() {
            let cur = (rem << 64) | *limb as u128;
            *limb = (cur / m) as u64;
            rem = cur % m;
        }
        self.inexact |= rem != 0;
    }

    #[cfg(test)]
    pub(crate) fn inexact(&self) -> bool {
        self.inexact
    }
}

/// Running sum of [`Recip`] values with an inexactness counter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FixedSum {
    limbs: Vec<u64>,
    inexact: u64,
    terms: u64,
}

impl FixedSum {
    pub(crate) fn new(frac_bits: usize) -> Self {
        // One extra integer limb absorbs carries; the sums here stay far below 2^64.
        FixedSum { limbs: vec![0; frac_bits / 64 + 2], inexact: 0, terms: 0 }
    }

    pub(crate) fn add(&mut self, r: &Recip) {
        debug_assert_eq!(r.limbs.len() + 1, self.limbs.len());
        let mut carry = false;
        for (acc, &x) in self.limbs.iter_mut().zip(r.limbs.iter()) {
            let (s1, c1) = acc.overflowing_add(x);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            *acc = s2;
            carry = c1 || c2;
        }
        let last = self.limbs.len() - 1;
        self.limbs[last] = self.limbs[last].wrapping_add(carry as u64);
        self.inexact += r.inexact as u64;
        self.terms += 1;
    }

    /// Adds `floor(2^F / m)`.
    pub(crate) fn add_recip(&mut self, m: u64, scratch: &mut Recip) {
        scratch.set_recip(m);
        self.add(scratch);
    }

    pub(crate) fn merge(&mut self, other: &FixedSum) {
        let mut carry = false;
        for (acc, &x) in self.limbs.iter_mut().zip(other.limbs.iter()) {
            let (s1, c1) = acc.overflowing_add(x);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            *acc = s2;
            carry = c1 || c2;
        }
        self.inexact += other.inexact;
        self.terms += other.terms;
    }

    #[cfg(test)]
    pub(crate) fn terms(&self) -> u64 {
        self.terms
    }

    /// Integer bounds `(lo, hi)` with `lo ≤ 2^F · S ≤ hi`.
    pub(crate) fn bounds(&self) -> (IBig, IBig) {
        let mut v = UBig::ZERO;
        for &l in self.limbs.iter().rev() {
            v = (v << 64) + UBig::from(l);
        }
        let hi = &v + UBig::from(self.inexact);
        (IBig::from(v), IBig::from(hi))
    }
}
