//! Certified logarithms in fixed point.
//!
//! Every routine returns a pair `(lo, hi)` of integers with
//! `lo ≤ 2^F · f(x) ≤ hi`, where `F` is the requested number of fractional
//! bits. Only monotone operations on floors (for `lo`) and ceilings (for `hi`)
//! are used, so the bounds hold unconditionally.

use dashu_base::BitTest;
use dashu_int::{IBig, UBig};

fn div_floor(n: &UBig, d: &UBig) -> UBig {
    n / d
}

fn div_ceil(n: &UBig, d: &UBig) -> UBig {
    let q = n / d;
    if &q * d == *n {
        q
    } else {
        q + UBig::ONE
    }
}

fn shr_ceil(n: &UBig, s: usize) -> UBig {
    let q = n >> s;
    if &q << s == *n {
        q
    } else {
        q + UBig::ONE
    }
}

/// Bounds on `2^F · atanh(p/q)` for `0 ≤ p/q ≤ 1/3`.
pub(crate) fn atanh_scaled(p: &UBig, q: &UBig, frac_bits: usize) -> (UBig, UBig) {
    debug_assert!(UBig::from(3u8) * p <= *q);
    let scaled = p << frac_bits;
    let s_lo = div_floor(&scaled, q);
    let s_hi = div_ceil(&scaled, q);
    let sq_lo = s_lo.sqr() >> frac_bits;
    let sq_hi = shr_ceil(&s_hi.sqr(), frac_bits);

    let mut pow_lo = s_lo;
    let mut pow_hi = s_hi;
    let mut sum_lo = UBig::ZERO;
    let mut sum_hi = UBig::ZERO;
    let mut j: u64 = 0;
    loop {
        let odd = UBig::from(2 * j + 1);
        sum_lo += div_floor(&pow_lo, &odd);
        sum_hi += div_ceil(&pow_hi, &odd);
        j += 1;
        pow_lo = (&pow_lo * &sq_lo) >> frac_bits;
        pow_hi = shr_ceil(&(&pow_hi * &sq_hi), frac_bits);
        if pow_hi <= UBig::ONE {
            break;
        }
    }
    // Remaining terms: sum_{i >= j} s^(2i+1)/(2i+1) <= s^(2j+1) / ((2j+1)(1 - s^2)),
    // and 1/(1 - s^2) <= 9/8 for s <= 1/3.
    sum_hi += &pow_hi * UBig::from(2u8) + UBig::ONE;
    (sum_lo, sum_hi)
}

/// Bounds on `2^F · log 2`.
pub(crate) fn ln2_scaled(frac_bits: usize) -> (IBig, IBig) {
    let (lo, hi) = atanh_scaled(&UBig::ONE, &UBig::from(3u8), frac_bits);
    (IBig::from(lo << 1), IBig::from(hi << 1))
}

/// Bounds on `2^F · log(num/den)` for positive `num`, `den`.
pub(crate) fn ln_scaled(num: &UBig, den: &UBig, frac_bits: usize) -> (IBig, IBig) {
    assert!(*num != UBig::ZERO && *den != UBig::ZERO, "logarithm of zero");
    // num/den = 2^k · a/c with c ≤ a < 2c
    let mut k = num.bit_len() as isize - den.bit_len() as isize;
    let (mut a, c) = if k >= 0 {
        (num.clone(), den << k as usize)
    } else {
        (num << (-k) as usize, den.clone())
    };
    if a < c {
        a <<= 1;
        k -= 1;
    }
    debug_assert!(c <= a && a < (&c << 1));
    // log(a/c) = 2 atanh((a-c)/(a+c)), with (a-c)/(a+c) in [0, 1/3)
    let (t_lo, t_hi) = atanh_scaled(&(&a - &c), &(&a + &c), frac_bits);
    let (y_lo, y_hi) = (IBig::from(t_lo << 1), IBig::from(t_hi << 1));
    if k == 0 {
        return (y_lo, y_hi);
    }
    let (l2_lo, l2_hi) = ln2_scaled(frac_bits);
    let kk = IBig::from(k as i64);
    if k > 0 {
        (&kk * l2_lo + y_lo, &kk * l2_hi + y_hi)
    } else {
        (&kk * l2_hi + y_lo, &kk * l2_lo + y_hi)
    }
}
