//! The finite-difference filter `u ↦ u^{(P)}`, `u^{(P)}_n = Σ_k a_k u_{n-k}`,
//! for `P(X) = Σ_{0 ≤ k ≤ d} a_k X^{d-k}`.
//!
//! When every root of `P` has modulus below one, `u^{(P)} → 0` forces
//! `u → 0`. The digit-sum limits use `P(X) = (b-1) X^{b-2} + … + 2X + 1`,
//! whose roots all lie in the open unit disc. Roots are located by Aberth
//! iteration and certified with Weierstrass inclusion discs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::error::{Error, Result};
use crate::numeric::{Dyadic, Enclosure, Rounding};
use crate::oracle::Rational;

/// `P(X) = Σ_{0 ≤ k ≤ d} a_k X^{d-k}` with exact rational coefficients and
/// `a_0 ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    /// Coefficients from the leading one down to the constant term.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        match coeffs.first() {
            None => Err(Error::domain("a polynomial needs at least one coefficient")),
            Some(a0) if *a0 == RBig::ZERO => Err(Error::domain("leading coefficient must be nonzero")),
            Some(_) => Ok(Polynomial { coeffs }),
        }
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| RBig::from(IBig::from(c))).collect())
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient_sum(&self) -> Rational {
        self.coeffs.iter().fold(RBig::ZERO, |acc, c| acc + c)
    }

    /// Exact product.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![RBig::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial { coeffs: out }
    }

    /// All roots, each as a certified disc.
    pub fn roots(&self, precision_bits: usize) -> Result<Vec<RootDisc>> {
        if self.degree() == 0 {
            return Err(Error::domain("a constant polynomial has no roots"));
        }
        if precision_bits < 32 {
            return Err(Error::domain("precision must be at least 32 bits"));
        }
        let approx = aberth(self, precision_bits + 32)?;
        certify(self, &approx, precision_bits)
    }

    /// Enclosure of `max |z|` over the roots.
    pub fn max_root_modulus(&self, precision_bits: usize) -> Result<Enclosure> {
        let roots = self.roots(precision_bits)?;
        let mut it = roots.iter().map(RootDisc::modulus);
        let first = it.next().expect("degree >= 1");
        Ok(it.fold(first, |m, x| m.max(&x)))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate() {
            if *a == RBig::ZERO {
                continue;
            }
            let p = d - k;
            let neg = *a < RBig::ZERO;
            let mag = if neg { -a.clone() } else { a.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let one = mag == RBig::ONE;
            match (p, one) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("X")?,
                (1, false) => write!(f, "{mag}X")?,
                (_, true) => write!(f, "X^{p}")?,
                (_, false) => write!(f, "{mag}X^{p}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `(b-1) X^{b-2} + (b-2) X^{b-3} + … + 2X + 1`; the constant `1` for `b = 2`.
pub fn corollary_polynomial(b: u64) -> Result<Polynomial> {
    if b < 2 {
        return Err(Error::domain("base must be at least 2"));
    }
    Polynomial::new((1..b).rev().map(|c| RBig::from(UBig::from(c))).collect())
}

/// A complex interval `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexEnclosure {
    pub re: Enclosure,
    pub im: Enclosure,
}

impl ComplexEnclosure {
    pub fn new(re: Enclosure, im: Enclosure) -> Self {
        ComplexEnclosure { re, im }
    }

    pub fn real(re: Enclosure) -> Self {
        let p = re.precision();
        ComplexEnclosure { re, im: Enclosure::from_int(0, p) }
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexEnclosure { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexEnclosure { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexEnclosure {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn scale(&self, a: &Rational) -> Self {
        ComplexEnclosure { re: self.re.mul_rational(a), im: self.im.mul_rational(a) }
    }

    pub fn abs(&self) -> Enclosure {
        (&self.re.sqr() + &self.im.sqr()).sqrt().expect("sum of squares is non-negative")
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }
}

/// A root `z` certified to lie within `radius` of `center`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDisc {
    pub center_re: Dyadic,
    pub center_im: Dyadic,
    pub radius: Dyadic,
    precision: usize,
}

impl RootDisc {
    /// Enclosure of `|z|`.
    pub fn modulus(&self) -> Enclosure {
        let c = self.center(self.precision).abs();
        let r = Enclosure::point(self.radius.clone(), self.precision);
        let lo = c.lo().sub(r.hi());
        let lo = if lo.is_negative() { Dyadic::ZERO } else { lo };
        Enclosure::new(lo, c.hi().add(r.hi()), self.precision).expect("ordered bounds")
    }

    /// The axis-aligned box around the disc.
    pub fn as_complex(&self) -> ComplexEnclosure {
        let p = self.precision;
        let widen = |c: &Dyadic| {
            Enclosure::new(c.sub(&self.radius), c.add(&self.radius), p).expect("ordered bounds")
        };
        ComplexEnclosure::new(widen(&self.center_re), widen(&self.center_im))
    }

    fn center(&self, p: usize) -> ComplexEnclosure {
        ComplexEnclosure::new(
            Enclosure::point(self.center_re.clone(), p),
            Enclosure::point(self.center_im.clone(), p),
        )
    }
}

/// Approximate complex number with dyadic parts rounded to `prec` bits.
#[derive(Clone, Debug)]
struct Approx {
    re: Dyadic,
    im: Dyadic,
}

impl Approx {
    fn r(x: Dyadic, p: usize) -> Dyadic {
        x.round(p, Rounding::Down)
    }
    fn add(&self, o: &Approx) -> Approx {
        Approx { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
    fn sub(&self, o: &Approx) -> Approx {
        Approx { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
    fn mul(&self, o: &Approx, p: usize) -> Approx {
        Approx {
            re: Self::r(self.re.mul(&o.re).sub(&self.im.mul(&o.im)), p),
            im: Self::r(self.re.mul(&o.im).add(&self.im.mul(&o.re)), p),
        }
    }
    fn norm2(&self, p: usize) -> Dyadic {
        Self::r(self.re.mul(&self.re).add(&self.im.mul(&self.im)), p)
    }
    fn div(&self, o: &Approx, p: usize) -> Option<Approx> {
        let n = o.norm2(p);
        if n.is_zero() {
            return None;
        }
        let num = self.mul(&Approx { re: o.re.clone(), im: o.im.neg() }, p);
        Some(Approx { re: num.re.div(&n, p, Rounding::Down), im: num.im.div(&n, p, Rounding::Down) })
    }
    fn small(&self, bits: usize) -> bool {
        let t = Dyadic::pow2(-(bits as isize));
        self.re.abs() < t && self.im.abs() < t
    }
}

/// `(p(z), p'(z))` by Horner's rule.
fn horner(coeffs: &[Dyadic], z: &Approx, p: usize) -> (Approx, Approx) {
    let zero = Approx { re: Dyadic::ZERO, im: Dyadic::ZERO };
    let mut v = zero.clone();
    let mut dv = zero;
    for a in coeffs {
        dv = dv.mul(z, p).add(&v);
        v = v.mul(z, p);
        v.re = v.re.add(a);
    }
    (v, dv)
}

fn aberth(poly: &Polynomial, p: usize) -> Result<Vec<Approx>> {
    let d = poly.degree();
    let coeffs: Vec<Dyadic> = poly
        .coeffs
        .iter()
        .map(|c| Dyadic::from_rational(c, p, Rounding::Down))
        .collect();
    // Cauchy radius 1 + max |a_k / a_0| as the scale of the starting points
    let a0 = poly.coeffs[0].clone();
    let mut bound = RBig::ZERO;
    for c in &poly.coeffs[1..] {
        let q = c / &a0;
        let q = if q < RBig::ZERO { -q } else { q };
        if q > bound {
            bound = q;
        }
    }
    let radius = Dyadic::from_rational(&(bound + RBig::ONE), 32, Rounding::Up).mul_pow2(-1);
    // powers of 0.4 + 0.9i spread the starting points over distinct angles
    let omega = Approx {
        re: Dyadic::from_ratio(&IBig::from(2), &UBig::from(5u8), p, Rounding::Down),
        im: Dyadic::from_ratio(&IBig::from(9), &UBig::from(10u8), p, Rounding::Down),
    };
    let mut z: Vec<Approx> = Vec::with_capacity(d);
    let mut cur = Approx { re: radius.clone(), im: Dyadic::ZERO }.mul(&omega, p);
    for _ in 0..d {
        z.push(cur.clone());
        cur = cur.mul(&omega, p);
    }

    const MAX_ITER: usize = 1000;
    for _ in 0..MAX_ITER {
        let mut done = true;
        for i in 0..d {
            let (v, dv) = horner(&coeffs, &z[i], p);
            if v.re.is_zero() && v.im.is_zero() {
                continue;
            }
            let Some(ratio) = v.div(&dv, p) else {
                // stationary point: nudge
                z[i] = z[i].add(&Approx { re: Dyadic::pow2(-20), im: Dyadic::pow2(-21) });
                done = false;
                continue;
            };
            let mut s = Approx { re: Dyadic::ZERO, im: Dyadic::ZERO };
            for j in 0..d {
                if j != i {
                    let diff = z[i].sub(&z[j]);
                    let one = Approx { re: Dyadic::ONE, im: Dyadic::ZERO };
                    if let Some(inv) = one.div(&diff, p) {
                        s = s.add(&inv);
                    }
                }
            }
            let one = Approx { re: Dyadic::ONE, im: Dyadic::ZERO };
            let denom = one.sub(&ratio.mul(&s, p));
            let step = ratio.div(&denom, p).unwrap_or(ratio);
            if !step.small(p - 16) {
                done = false;
            }
            z[i] = z[i].sub(&step);
            z[i].re = Approx::r(z[i].re.clone(), p);
            z[i].im = Approx::r(z[i].im.clone(), p);
        }
        if done {
            return Ok(z);
        }
    }
    Err(Error::RootFinder { iterations: MAX_ITER, detail: alloc::format!("no convergence for {poly}") })
}

/// Smith's bound: each disc `|z - z_i| ≤ d |p(z_i)| / |a_0 Π_{j≠i} (z_i - z_j)|`
/// holds a root, and pairwise disjoint discs hold exactly one each.
fn certify(poly: &Polynomial, approx: &[Approx], prec: usize) -> Result<Vec<RootDisc>> {
    let d = poly.degree();
    let wp = prec + 32;
    let centers: Vec<ComplexEnclosure> = approx
        .iter()
        .map(|z| {
            ComplexEnclosure::new(
                Enclosure::point(z.re.round(wp, Rounding::Down), wp),
                Enclosure::point(z.im.round(wp, Rounding::Down), wp),
            )
        })
        .collect();
    let a0 = Enclosure::from_rational(&poly.coeffs[0], wp).abs();
    let mut radii = Vec::with_capacity(d);
    for (i, zi) in centers.iter().enumerate() {
        let mut v = ComplexEnclosure::real(Enclosure::from_int(0, wp));
        for a in &poly.coeffs {
            v = v.mul(zi).add(&ComplexEnclosure::real(Enclosure::from_rational(a, wp)));
        }
        let mut den = a0.clone();
        for (j, zj) in centers.iter().enumerate() {
            if j != i {
                den = &den * &zi.sub(zj).abs();
            }
        }
        let fail = |detail: &str| Error::RootFinder { iterations: 0, detail: alloc::format!("{detail} for {poly}") };
        let rad = (&v.abs() * &Enclosure::from_int(d as i64, wp))
            .div(&den)
            .map_err(|_| fail("coincident root approximations"))?;
        radii.push(rad.hi().clone());
    }
    for i in 0..d {
        for j in i + 1..d {
            let dist = centers[i].sub(&centers[j]).abs();
            if dist.lo() <= &radii[i].add(&radii[j]) {
                return Err(Error::RootFinder {
                    iterations: 0,
                    detail: alloc::format!("inclusion discs overlap for {poly}"),
                });
            }
        }
    }
    Ok(approx
        .iter()
        .zip(radii)
        .map(|(z, radius)| RootDisc {
            center_re: z.re.round(wp, Rounding::Down),
            center_im: z.im.round(wp, Rounding::Down),
            radius,
            precision: prec,
        })
        .collect())
}

/// Values that can be run through the filter: exact rationals, real
/// enclosures and complex enclosures.
pub trait FilterScalar: Clone {
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, a: &Rational) -> Self;
}

impl FilterScalar for Rational {
    fn zero_like(&self) -> Self {
        RBig::ZERO
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, a: &Rational) -> Self {
        self * a
    }
}

impl FilterScalar for Enclosure {
    fn zero_like(&self) -> Self {
        Enclosure::from_int(0, self.precision())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, a: &Rational) -> Self {
        self.mul_rational(a)
    }
}

impl FilterScalar for ComplexEnclosure {
    fn zero_like(&self) -> Self {
        let z = self.re.zero_like();
        ComplexEnclosure::new(z.clone(), z)
    }
    fn add(&self, other: &Self) -> Self {
        ComplexEnclosure::add(self, other)
    }
    fn scale(&self, a: &Rational) -> Self {
        ComplexEnclosure::scale(self, a)
    }
}

/// `u^{(P)}_n = Σ_{0 ≤ k ≤ d} a_k u_{n-k}` for `n = d, …, |u| - 1`.
pub fn filter_sequence<T: FilterScalar>(p: &Polynomial, u: &[T]) -> Result<Vec<T>> {
    let d = p.degree();
    if u.len() <= d {
        return Err(Error::domain("sequence must be longer than the polynomial degree"));
    }
    Ok((d..u.len())
        .map(|n| {
            p.coeffs
                .iter()
                .enumerate()
                .fold(u[n].zero_like(), |acc, (k, a)| acc.add(&u[n - k].scale(a)))
        })
        .collect())
}

/// `v_n = u_n - z u_{n-1}` for `n = 1, …, |u| - 1`.
pub fn filter_order1(z: &ComplexEnclosure, u: &[ComplexEnclosure]) -> Result<Vec<ComplexEnclosure>> {
    if u.len() < 2 {
        return Err(Error::domain("sequence must have at least two terms"));
    }
    Ok((1..u.len()).map(|n| u[n].sub(&z.mul(&u[n - 1]))).collect())
}

/// `a_0 · φ_{z_d} ∘ … ∘ φ_{z_1} (u)` with `φ_z(u)_n = u_n - z u_{n-1}`, which
/// equals `u^{(P)}` when the `z_j` are the roots of `P`.
pub fn filter_by_roots(
    leading: &Rational,
    roots: &[ComplexEnclosure],
    u: &[ComplexEnclosure],
) -> Result<Vec<ComplexEnclosure>> {
    let mut v = u.to_vec();
    for z in roots {
        v = filter_order1(z, &v)?;
    }
    Ok(v.iter().map(|x| x.scale(leading)).collect())
}

/// Perturbations added to the limit in [`corollary_demo`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecayProfile {
    /// `r^n` with `|r| < 1`.
    Geometric(Rational),
    /// `1/(n + 1)`.
    Harmonic,
}

impl DecayProfile {
    fn term(&self, n: usize) -> Rational {
        match self {
            DecayProfile::Geometric(r) => {
                let num = r.numerator().pow(n);
                let den = r.denominator().pow(n);
                RBig::from_parts(num, den)
            }
            DecayProfile::Harmonic => RBig::from_parts(IBig::ONE, UBig::from(n as u64 + 1)),
        }
    }
}

/// Result of [`corollary_demo`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemoReport {
    /// `ℓ`, the value the filtered sequence should approach.
    pub target: Rational,
    /// `2ℓ / (b(b-1))`, the limit of the unfiltered sequence.
    pub sequence_limit: Rational,
    /// `max |u^{(P)}_n - ℓ|` over the last tenth of the filtered indices.
    pub final_deviation: Rational,
    /// `|u^{(P)}_n - ℓ|` at the last index.
    pub last_deviation: Rational,
    pub filtered_len: usize,
}

/// Builds `u_n = 2ℓ/(b(b-1)) + decay(n)` for `0 ≤ n < n_max`, applies the
/// corollary filter exactly, and measures how close the output is to `ℓ`.
pub fn corollary_demo(b: u64, ell: &Rational, decay: &DecayProfile, n_max: usize) -> Result<DemoReport> {
    if b < 3 {
        return Err(Error::domain("the demonstration needs b >= 3"));
    }
    if let DecayProfile::Geometric(r) = decay {
        let mag = if *r < RBig::ZERO { -r.clone() } else { r.clone() };
        if mag >= RBig::ONE {
            return Err(Error::domain("geometric decay needs |r| < 1"));
        }
    }
    let p = corollary_polynomial(b)?;
    if n_max <= p.degree() + 1 {
        return Err(Error::domain("n_max must exceed the filter order"));
    }
    let limit = ell * RBig::from_parts(IBig::from(2), UBig::from(b * (b - 1)));
    let u: Vec<Rational> = (0..n_max).map(|n| &limit + decay.term(n)).collect();
    let v = filter_sequence(&p, &u)?;
    let dev = |x: &Rational| {
        let d = x - ell;
        if d < RBig::ZERO { -d } else { d }
    };
    let tail_len = v.len().div_ceil(10);
    let final_deviation = v[v.len() - tail_len..].iter().map(dev).max().expect("nonempty");
    Ok(DemoReport {
        target: ell.clone(),
        sequence_limit: limit,
        last_deviation: dev(v.last().expect("nonempty")),
        final_deviation,
        filtered_len: v.len(),
    })
}
