use alloc::format;
use alloc::string::{String, ToString};

use dashu_int::{IBig, UBig};

use super::dyadic::{Dyadic, Rounding};

/// Number of significant decimal digits that faithfully represents
/// `prec` bits: `ceil(prec · log10 2) + 2`.
pub fn significant_digits(prec: usize) -> usize {
    // log10(2) < 30103/100000, and the product is never an integer for prec > 0
    (prec * 30103).div_ceil(100_000) + 2
}

/// Scientific-notation rendering of `x` with `digits` significant digits,
/// rounded in direction `dir` (so the printed value is `≤ x` for `Down` and
/// `≥ x` for `Up`).
pub fn to_scientific(x: &Dyadic, digits: usize, dir: Rounding) -> String {
    assert!(digits >= 1);
    if x.is_zero() {
        return "0".to_string();
    }
    let negative = x.is_negative();
    // magnitude rounding direction
    let mag_dir = if negative { dir.reverse() } else { dir };
    let (num, den) = magnitude_parts(x);

    // decimal exponent estimate from the binary one, corrected below
    let bin_exp = num.bit_len() as isize - den.bit_len() as isize;
    let mut e10 = (bin_exp * 30103).div_euclid(100_000) - 1;
    let (mut n, mut d) = scale(&num, &den, digits as isize - 1 - e10);
    // ensure 10^(digits-1) ≤ n/d < 10^digits
    let lower = UBig::from(10u8).pow(digits - 1);
    while n < (&lower * &d) {
        e10 -= 1;
        (n, d) = scale(&num, &den, digits as isize - 1 - e10);
    }
    while n >= (&lower * UBig::from(10u8) * &d) {
        e10 += 1;
        (n, d) = scale(&num, &den, digits as isize - 1 - e10);
    }
    let q = &n / &d;
    let exact = &q * &d == n;
    let mut m = q;
    if mag_dir == Rounding::Up && !exact {
        m += UBig::ONE;
        if m == &lower * UBig::from(10u8) {
            m = lower.clone();
            e10 += 1;
        }
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let sign = if negative { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e10}")
    } else {
        format!("{sign}{head}.{tail}e{e10}")
    }
}

use dashu_base::BitTest;

fn magnitude_parts(x: &Dyadic) -> (UBig, UBig) {
    let m = x.mantissa().unsigned_abs_ref();
    let e = x.exponent();
    if e >= 0 {
        (m << e as usize, UBig::ONE)
    } else {
        (m, UBig::ONE << (-e) as usize)
    }
}

/// `(num · 10^s, den)` or `(num, den · 10^-s)`.
fn scale(num: &UBig, den: &UBig, s: isize) -> (UBig, UBig) {
    if s >= 0 {
        (num * UBig::from(10u8).pow(s as usize), den.clone())
    } else {
        (num.clone(), den * UBig::from(10u8).pow((-s) as usize))
    }
}

trait UnsignedAbsRef {
    fn unsigned_abs_ref(&self) -> UBig;
}

impl UnsignedAbsRef for IBig {
    fn unsigned_abs_ref(&self) -> UBig {
        use dashu_base::UnsignedAbs;
        self.clone().unsigned_abs()
    }
}
