use core::cmp::Ordering;
use core::fmt;

use dashu_base::{BitTest, DivEuclid, PowerOfTwo, Signed, SquareRoot, UnsignedAbs};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

/// Direction of a directed rounding step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rounding {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Rounding {
    pub fn reverse(self) -> Self {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// An exact binary fraction `mantissa · 2^exponent`.
///
/// Values are kept canonical (odd mantissa, or the zero value with exponent
/// zero), so derived equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: IBig,
    exp: isize,
}

/// `floor(m / 2^s)`.
pub(crate) fn shr_floor(m: &IBig, s: usize) -> IBig {
    m >> s
}

/// `ceil(m / 2^s)`.
pub(crate) fn shr_ceil(m: &IBig, s: usize) -> IBig {
    -((-m) >> s)
}

/// `floor(n / d)` or `ceil(n / d)` for `d > 0`.
pub(crate) fn div_round(n: &IBig, d: &UBig, dir: Rounding) -> IBig {
    let d = IBig::from(d.clone());
    match dir {
        Rounding::Down => n.div_euclid(&d),
        Rounding::Up => -((-n).div_euclid(&d)),
    }
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { mant: IBig::ZERO, exp: 0 };
    pub const ONE: Dyadic = Dyadic { mant: IBig::ONE, exp: 0 };

    pub fn new(mant: IBig, exp: isize) -> Self {
        match mant.trailing_zeros() {
            None => Self::ZERO,
            Some(0) => Dyadic { mant, exp },
            Some(tz) => Dyadic { mant: mant >> tz, exp: exp + tz as isize },
        }
    }

    pub fn from_int(value: impl Into<IBig>) -> Self {
        Self::new(value.into(), 0)
    }

    /// `2^exp`.
    pub fn pow2(exp: isize) -> Self {
        Dyadic { mant: IBig::ONE, exp }
    }

    pub fn mantissa(&self) -> &IBig {
        &self.mant
    }

    pub fn exponent(&self) -> isize {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant == IBig::ZERO
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> usize {
        self.mant.clone().unsigned_abs().bit_len()
    }

    /// `floor(log2 |x|)` for nonzero `x`.
    pub fn floor_log2(&self) -> Option<isize> {
        if self.is_zero() {
            None
        } else {
            Some(self.bits() as isize - 1 + self.exp)
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: IBig::from(self.mant.clone().unsigned_abs()), exp: self.exp }
    }

    pub fn mul_pow2(&self, k: isize) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Mantissa rescaled to exponent `exp`, which must not exceed `self.exp`.
    fn mant_at(&self, exp: isize) -> IBig {
        debug_assert!(exp <= self.exp || self.is_zero());
        if self.is_zero() {
            IBig::ZERO
        } else {
            &self.mant << (self.exp - exp) as usize
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        Dyadic::new(self.mant_at(e) + other.mant_at(e), e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: usize, dir: Rounding) -> Dyadic {
        let prec = prec.max(1);
        let bits = self.bits();
        if bits <= prec {
            return self.clone();
        }
        let s = bits - prec;
        let m = match dir {
            Rounding::Down => shr_floor(&self.mant, s),
            Rounding::Up => shr_ceil(&self.mant, s),
        };
        Dyadic::new(m, self.exp + s as isize)
    }

    /// Directed rounding of `num / den` to `prec` bits, `den > 0`.
    pub fn from_ratio(num: &IBig, den: &UBig, prec: usize, dir: Rounding) -> Dyadic {
        assert!(*den != UBig::ZERO, "zero denominator");
        if *num == IBig::ZERO {
            return Self::ZERO;
        }
        let nb = num.unsigned_abs().bit_len() as isize;
        let db = den.bit_len() as isize;
        let shift = (prec as isize + 2 + db - nb).max(0) as usize;
        let q = div_round(&(num << shift), den, dir);
        Dyadic::new(q, -(shift as isize)).round(prec, dir)
    }

    pub fn from_rational(r: &RBig, prec: usize, dir: Rounding) -> Dyadic {
        Self::from_ratio(r.numerator(), r.denominator(), prec, dir)
    }

    /// Exact conversion if the rational is dyadic.
    pub fn try_from_rational(r: &RBig) -> Option<Dyadic> {
        let den = r.denominator();
        if !den.is_power_of_two() {
            return None;
        }
        let k = den.bit_len() - 1;
        Some(Dyadic::new(r.numerator().clone(), -(k as isize)))
    }

    /// Directed rounding of `self / other`.
    pub fn div(&self, other: &Dyadic, prec: usize, dir: Rounding) -> Dyadic {
        assert!(!other.is_zero(), "division by zero");
        let (num, den) = if other.is_negative() {
            (-&self.mant, other.mant.clone().unsigned_abs())
        } else {
            (self.mant.clone(), other.mant.clone().unsigned_abs())
        };
        let q = Self::from_ratio(&num, &den, prec, dir);
        q.mul_pow2(self.exp - other.exp)
    }

    /// Directed square root of a non-negative value.
    pub fn sqrt(&self, prec: usize, dir: Rounding) -> Dyadic {
        assert!(!self.is_negative(), "square root of a negative value");
        if self.is_zero() {
            return Self::ZERO;
        }
        let m = self.mant.clone().unsigned_abs();
        let mut shift = (2 * prec + 4).saturating_sub(m.bit_len());
        if (self.exp - shift as isize).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled = m << shift;
        let mut r = scaled.sqrt();
        if dir == Rounding::Up && &r * &r != scaled {
            r += UBig::ONE;
        }
        Dyadic::new(IBig::from(r), (self.exp - shift as isize) / 2).round(prec, dir)
    }

    pub fn to_rational(&self) -> RBig {
        if self.exp >= 0 {
            RBig::from(&self.mant << self.exp as usize)
        } else {
            RBig::from_parts(self.mant.clone(), UBig::ONE << (-self.exp) as usize)
        }
    }

    pub fn cmp_rational(&self, r: &RBig) -> Ordering {
        // m 2^e  vs  p / q   <=>  m q 2^e  vs  p
        let lhs = &self.mant * IBig::from(r.denominator().clone());
        let rhs = r.numerator().clone();
        if self.exp >= 0 {
            (lhs << self.exp as usize).cmp(&rhs)
        } else {
            lhs.cmp(&(rhs << (-self.exp) as usize))
        }
    }

    /// Nearest-ish `f64`, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60, Rounding::Down);
        let m = r.mant.to_f64().value();
        let mut e = r.exp;
        let mut v = m;
        while e > 0 {
            let step = e.min(1000);
            v *= pow2_f64(step as i32);
            e -= step;
        }
        while e < 0 {
            let step = (-e).min(1000);
            v /= pow2_f64(step as i32);
            e += step;
        }
        v
    }
}

fn pow2_f64(k: i32) -> f64 {
    // exact for the ranges used above
    let mut v = 1.0f64;
    let mut b = 2.0f64;
    let mut k = k as u32;
    while k > 0 {
        if k & 1 == 1 {
            v *= b;
        }
        b *= b;
        k >>= 1;
    }
    v
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.min(other.exp);
        self.mant_at(e).cmp(&other.mant_at(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} (~{:e})", self.mant, self.exp, self.to_f64())
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}
