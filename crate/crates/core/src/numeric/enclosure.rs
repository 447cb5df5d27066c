use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use super::dyadic::{Dyadic, Rounding};
use super::elementary;
use crate::error::{Error, Result};

/// Guard bits carried by fixed-point evaluations beyond the target precision.
pub const GUARD_BITS: usize = 64;

/// A certified interval `[lo, hi]` whose endpoints carry at most
/// `precision` significant bits.
///
/// Every operation rounds `lo` toward −∞ and `hi` toward +∞, so the result
/// contains every value obtainable from points of the operands.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
    prec: usize,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: usize) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain("enclosure with lo > hi"));
        }
        Ok(Self::outward(lo, hi, prec))
    }

    fn outward(lo: Dyadic, hi: Dyadic, prec: usize) -> Self {
        debug_assert!(lo <= hi);
        Enclosure {
            lo: lo.round(prec, Rounding::Down),
            hi: hi.round(prec, Rounding::Up),
            prec,
        }
    }

    /// The degenerate interval at `x`, widened only if `x` has more than
    /// `prec` bits.
    pub fn point(x: Dyadic, prec: usize) -> Self {
        Self::outward(x.clone(), x, prec)
    }

    pub fn from_int(v: i64, prec: usize) -> Self {
        Self::point(Dyadic::from_int(v), prec)
    }

    pub fn from_rational(r: &RBig, prec: usize) -> Self {
        Enclosure {
            lo: Dyadic::from_rational(r, prec, Rounding::Down),
            hi: Dyadic::from_rational(r, prec, Rounding::Up),
            prec,
        }
    }

    /// `[lo, hi] · 2^-frac_bits` for integer bounds produced by fixed-point
    /// accumulation.
    pub fn from_scaled(lo: &IBig, hi: &IBig, frac_bits: usize, prec: usize) -> Self {
        assert!(lo <= hi, "scaled bounds out of order");
        let e = -(frac_bits as isize);
        Self::outward(Dyadic::new(lo.clone(), e), Dyadic::new(hi.clone(), e), prec)
    }

    /// The interval `[a, b]` between two rationals (in either order).
    pub fn between(a: &RBig, b: &RBig, prec: usize) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Enclosure {
            lo: Dyadic::from_rational(a, prec, Rounding::Down),
            hi: Dyadic::from_rational(b, prec, Rounding::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        Self::outward(self.lo.clone(), self.hi.clone(), prec)
    }

    /// Exact width `hi - lo`.
    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid_f64(&self) -> f64 {
        self.lo.add(&self.hi).mul_pow2(-1).to_f64()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, r: &RBig) -> bool {
        self.lo.cmp_rational(r) != Ordering::Greater && self.hi.cmp_rational(r) != Ordering::Less
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `true` if every point of `self` is strictly below every point of `other`.
    pub fn strictly_below(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            Enclosure {
                lo: Dyadic::ZERO,
                hi: self.hi.clone().max(self.lo.neg()),
                prec: self.prec,
            }
        }
    }

    /// Interval maximum: encloses `max(x, y)` for `x ∈ self`, `y ∈ other`.
    pub fn max(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn mul_pow2(&self, k: isize) -> Enclosure {
        Enclosure { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }

    pub fn add_rational(&self, r: &RBig) -> Enclosure {
        self + &Enclosure::from_rational(r, self.prec.max(GUARD_BITS))
    }

    pub fn mul_rational(&self, r: &RBig) -> Enclosure {
        if let Some(d) = Dyadic::try_from_rational(r) {
            let a = self.lo.mul(&d);
            let b = self.hi.mul(&d);
            let (lo, hi) = if d.is_negative() { (b, a) } else { (a, b) };
            return Self::outward(lo, hi, self.prec);
        }
        let lo_r = self.lo.to_rational() * r;
        let hi_r = self.hi.to_rational() * r;
        let (lo_r, hi_r) = if lo_r <= hi_r { (lo_r, hi_r) } else { (hi_r, lo_r) };
        Enclosure {
            lo: Dyadic::from_rational(&lo_r, self.prec, Rounding::Down),
            hi: Dyadic::from_rational(&hi_r, self.prec, Rounding::Up),
            prec: self.prec,
        }
    }

    /// Division by an enclosure that excludes zero.
    pub fn div(&self, other: &Enclosure) -> Result<Enclosure> {
        if other.contains_zero() {
            return Err(Error::domain("division by an enclosure containing zero"));
        }
        let prec = self.prec.max(other.prec);
        let cands_lo = [
            self.lo.div(&other.lo, prec, Rounding::Down),
            self.lo.div(&other.hi, prec, Rounding::Down),
            self.hi.div(&other.lo, prec, Rounding::Down),
            self.hi.div(&other.hi, prec, Rounding::Down),
        ];
        let cands_hi = [
            self.lo.div(&other.lo, prec, Rounding::Up),
            self.lo.div(&other.hi, prec, Rounding::Up),
            self.hi.div(&other.lo, prec, Rounding::Up),
            self.hi.div(&other.hi, prec, Rounding::Up),
        ];
        let lo = cands_lo.iter().min().cloned().unwrap();
        let hi = cands_hi.iter().max().cloned().unwrap();
        Ok(Enclosure { lo, hi, prec })
    }

    pub fn sqr(&self) -> Enclosure {
        let a = self.abs();
        Self::outward(a.lo.mul(&a.lo), a.hi.mul(&a.hi), self.prec)
    }

    pub fn sqrt(&self) -> Result<Enclosure> {
        if self.hi.is_negative() {
            return Err(Error::domain("square root of a negative enclosure"));
        }
        let lo = if self.lo.is_negative() { Dyadic::ZERO } else { self.lo.clone() };
        Ok(Enclosure {
            lo: lo.sqrt(self.prec, Rounding::Down),
            hi: self.hi.sqrt(self.prec, Rounding::Up),
            prec: self.prec,
        })
    }

    /// Certified natural logarithm of a positive enclosure.
    pub fn ln(&self) -> Result<Enclosure> {
        if !self.lo.is_positive() {
            return Err(Error::domain("logarithm of an enclosure reaching zero"));
        }
        let f = self.prec + GUARD_BITS;
        let (lo, _) = ln_dyadic(&self.lo, f);
        let (_, hi) = ln_dyadic(&self.hi, f);
        Ok(Enclosure::from_scaled(&lo, &hi, f, self.prec))
    }

    /// `log 2`.
    pub fn ln2(prec: usize) -> Enclosure {
        let f = prec + GUARD_BITS;
        let (lo, hi) = elementary::ln2_scaled(f);
        Enclosure::from_scaled(&lo, &hi, f, prec)
    }

    /// `log(num/den)` for positive integers.
    pub fn ln_ratio(num: &UBig, den: &UBig, prec: usize) -> Result<Enclosure> {
        if *num == UBig::ZERO || *den == UBig::ZERO {
            return Err(Error::domain("logarithm of zero"));
        }
        let f = prec + GUARD_BITS;
        let (lo, hi) = elementary::ln_scaled(num, den, f);
        Ok(Enclosure::from_scaled(&lo, &hi, f, prec))
    }

    pub fn ln_rational(r: &RBig, prec: usize) -> Result<Enclosure> {
        if r <= &RBig::ZERO {
            return Err(Error::domain("logarithm of a non-positive rational"));
        }
        let num = UBig::try_from(r.numerator().clone()).expect("positive numerator");
        Self::ln_ratio(&num, r.denominator(), prec)
    }

    fn combine(&self, other: &Enclosure, lo: Dyadic, hi: Dyadic) -> Enclosure {
        Self::outward(lo, hi, self.prec.max(other.prec))
    }
}

fn ln_dyadic(x: &Dyadic, frac_bits: usize) -> (IBig, IBig) {
    let m = UBig::try_from(x.mantissa().clone()).expect("positive dyadic");
    let e = x.exponent();
    let (num, den) = if e >= 0 {
        (m << e as usize, UBig::ONE)
    } else {
        (m, UBig::ONE << (-e) as usize)
    };
    elementary::ln_scaled(&num, &den, frac_bits)
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: &Enclosure) -> Enclosure {
        self.combine(rhs, self.lo.add(&rhs.lo), self.hi.add(&rhs.hi))
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: &Enclosure) -> Enclosure {
        self.combine(rhs, self.lo.sub(&rhs.hi), self.hi.sub(&rhs.lo))
    }
}

impl Mul for &Enclosure {
    type Output = Enclosure;
    fn mul(self, rhs: &Enclosure) -> Enclosure {
        let c = [
            self.lo.mul(&rhs.lo),
            self.lo.mul(&rhs.hi),
            self.hi.mul(&rhs.lo),
            self.hi.mul(&rhs.hi),
        ];
        let lo = c.iter().min().cloned().unwrap();
        let hi = c.iter().max().cloned().unwrap();
        self.combine(rhs, lo, hi)
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Enclosure {
            type Output = Enclosure;
            fn $m(self, rhs: Enclosure) -> Enclosure {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Enclosure> for Enclosure {
            type Output = Enclosure;
            fn $m(self, rhs: &Enclosure) -> Enclosure {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        -&self
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:e}, {:e}] (width {:e}, {} bits)",
            self.lo.to_f64(),
            self.hi.to_f64(),
            self.width().to_f64(),
            self.prec
        )
    }
}
