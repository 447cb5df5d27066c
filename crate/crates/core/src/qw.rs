//! The log-affine expression for `log b_w(n)`.
//!
//! For a binary word `w`, `log b_w(n)` is a signed sum of terms
//! `± log(2^ℓ n + c)` produced by a four-case recursion on a pair of words
//! `(z, t)`, seeded with `z = w_1 … w_{m-1}`, `t = w_m`:
//!
//! * `|z| = 0`: `log(2^{|t|} n + ν(t)) - log(2^{|t|} n + ν(t) + 1)`;
//! * `|z| = 1`, `z` a suffix of `w`: `Q(ε, t) - Q(ε, z̄_r t)`;
//! * `|z| ≥ 2`, `z` a suffix of `w`: `Q(z_2 … z_r, t) - Q(z̄_1 z_2 … z_{r-1}, z_r t)`;
//! * otherwise: `Q(z_1 … z_{r-1}, z_r t)`.
//!
//! The expression is flattened to its base-case terms. Its coefficients obey
//! `Σ sign = 0`, `Σ sign·ℓ = 0` and `Σ sign·c/2^ℓ = -2^{-|w|}`, so that
//! `e_w(n) = 1/n + 2^{|w|} log b_w(n)` is `O(1/n²)`; [`QwExpression::remainder_constant`]
//! makes the constant explicit.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Neg;

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::digitstat::{is_suffix, word_value_digits, Word};
use crate::error::{Error, Result};
use crate::numeric::{elementary, Enclosure, GUARD_BITS};
use crate::oracle::{for_each_in_class, Rational};
use crate::StatisticSpec;

/// `sign · log(2^ℓ n + c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogAffineTerm {
    pub sign: i8,
    pub ell: u32,
    pub c: u64,
}

impl LogAffineTerm {
    /// `c / 2^ℓ` as an exact rational.
    pub fn ratio(&self) -> Rational {
        RBig::from_parts(IBig::from(self.c), UBig::ONE << self.ell as usize)
    }

    fn affine(&self) -> String {
        affine_text(self.ell, self.c)
    }
}

fn affine_text(ell: u32, c: u64) -> String {
    let scale = 1u128 << ell;
    if c == 0 {
        format!("{scale}n")
    } else {
        format!("{scale}n+{c}")
    }
}

/// A word together with the flattened terms of `log b_w(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QwExpression {
    word: Word,
    terms: Vec<LogAffineTerm>,
}

/// Longest word accepted by [`build`]; keeps every offset within 64 bits.
pub const MAX_WORD_LEN: usize = 62;

/// Builds the flattened expression of `log b_w(n)`.
pub fn build(w: &Word) -> Result<QwExpression> {
    if !w.is_binary() {
        return Err(Error::domain("the log-affine expansion needs a binary word"));
    }
    if w.len() > MAX_WORD_LEN {
        return Err(Error::domain(format!("words longer than {MAX_WORD_LEN} symbols are not supported")));
    }
    let s = w.symbols();
    let mut terms = Vec::new();
    expand(s, &s[..s.len() - 1], &s[s.len() - 1..], 1, &mut terms)?;
    Ok(QwExpression { word: w.clone(), terms })
}

fn expand(w: &[u8], z: &[u8], t: &[u8], sign: i8, out: &mut Vec<LogAffineTerm>) -> Result<()> {
    let r = z.len();
    if r == 0 {
        let ell = t.len() as u32;
        let v = word_value_digits(t)?;
        out.push(LogAffineTerm { sign, ell, c: v });
        out.push(LogAffineTerm { sign: -sign, ell, c: v + 1 });
        return Ok(());
    }
    if is_suffix(z, w) {
        if r == 1 {
            expand(w, &[], t, sign, out)?;
            let mut t2 = Vec::with_capacity(t.len() + 1);
            t2.push(1 - z[0]);
            t2.extend_from_slice(t);
            expand(w, &[], &t2, -sign, out)
        } else {
            expand(w, &z[1..], t, sign, out)?;
            let mut z2 = Vec::with_capacity(r - 1);
            z2.push(1 - z[0]);
            z2.extend_from_slice(&z[1..r - 1]);
            let mut t2 = Vec::with_capacity(t.len() + 1);
            t2.push(z[r - 1]);
            t2.extend_from_slice(t);
            expand(w, &z2, &t2, -sign, out)
        }
    } else {
        let mut t2 = Vec::with_capacity(t.len() + 1);
        t2.push(z[r - 1]);
        t2.extend_from_slice(t);
        expand(w, &z[..r - 1], &t2, sign, out)
    }
}

impl QwExpression {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn terms(&self) -> &[LogAffineTerm] {
        &self.terms
    }

    /// `(Σ sign, Σ sign·ℓ, Σ sign·c/2^ℓ)`.
    pub fn asymptotic_coefficients(&self) -> (i64, i64, Rational) {
        let s0 = self.terms.iter().map(|t| i64::from(t.sign)).sum();
        let s1 = self.terms.iter().map(|t| i64::from(t.sign) * i64::from(t.ell)).sum();
        (s0, s1, self.moment(1))
    }

    /// `K_m = Σ sign · (c/2^ℓ)^m`.
    pub fn moment(&self, m: u32) -> Rational {
        let mut acc = RBig::ZERO;
        for t in &self.terms {
            let num = IBig::from(t.c).pow(m as usize);
            let den = UBig::ONE << (t.ell as usize * m as usize);
            let x = RBig::from_parts(num, den);
            if t.sign > 0 {
                acc += x;
            } else {
                acc -= x;
            }
        }
        acc
    }

    /// `C_w = 2^{r-1} Σ (c/2^ℓ)²`, so that `|1/n + 2^r log b_w(n)| ≤ C_w/n²` for
    /// every `n ≥ 1`.
    pub fn remainder_constant(&self) -> Rational {
        let mut acc = RBig::ZERO;
        for t in &self.terms {
            let x = t.ratio();
            acc += &x * &x;
        }
        acc * pow2_rational(self.word.len() as i64 - 1)
    }

    /// `2^F · log b_w(n)` bounds.
    ///
    /// For `n ≥ 1` the `ℓ log 2 + log n` parts cancel, so only the small
    /// logarithms `log(1 + c/(2^ℓ n))` are evaluated. For `n = 0` the value is
    /// `Σ sign · log c`.
    pub(crate) fn log_scaled(&self, n: u64, frac_bits: usize) -> Result<(IBig, IBig)> {
        let mut lo = IBig::ZERO;
        let mut hi = IBig::ZERO;
        for t in &self.terms {
            let (a, b) = if n == 0 {
                if t.c == 0 {
                    return Err(Error::domain("log b_w(0) involves log 0"));
                }
                elementary::ln_scaled(&UBig::from(t.c), &UBig::ONE, frac_bits)
            } else {
                let base = UBig::from(n) << t.ell as usize;
                elementary::ln_scaled(&(&base + UBig::from(t.c)), &base, frac_bits)
            };
            if t.sign > 0 {
                lo += a;
                hi += b;
            } else {
                lo -= b;
                hi -= a;
            }
        }
        Ok((lo, hi))
    }

    /// Certified enclosure of `log b_w(n) = Σ sign · log(2^ℓ n + c)`.
    pub fn evaluate(&self, n: u64, precision_bits: usize) -> Result<Enclosure> {
        if precision_bits < 32 {
            return Err(Error::domain("precision must be at least 32 bits"));
        }
        let f = precision_bits + GUARD_BITS;
        let (lo, hi) = self.log_scaled(n, f)?;
        Ok(Enclosure::from_scaled(&lo, &hi, f, precision_bits))
    }

    /// `Σ_{1 ≤ n ≤ N, a_w(n) = k} log b_w(n)`, with no tail.
    pub fn identity_partial_sum(&self, k: u64, n_max: u64, precision_bits: usize) -> Result<Enclosure> {
        let spec = StatisticSpec::block_count(self.word.clone())?;
        let f = precision_bits + GUARD_BITS + 16;
        let mut lo = IBig::ZERO;
        let mut hi = IBig::ZERO;
        let mut failure = None;
        for_each_in_class(&spec, k, n_max, |n| {
            if failure.is_some() {
                return;
            }
            match self.log_scaled(n, f) {
                Ok((a, b)) => {
                    lo += a;
                    hi += b;
                }
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(Enclosure::from_scaled(&lo, &hi, f, precision_bits))
    }

    /// `b_w(n)` as a product of affine factors, e.g. `(2n+1)/(2n+2)`.
    pub fn rational_function(&self) -> String {
        let mut num: Vec<(u32, u64)> = Vec::new();
        let mut den: Vec<(u32, u64)> = Vec::new();
        for t in &self.terms {
            if t.sign > 0 {
                num.push((t.ell, t.c));
            } else {
                den.push((t.ell, t.c));
            }
        }
        num.sort_unstable();
        den.sort_unstable();
        let product = |fs: &[(u32, u64)]| -> String {
            fs.iter().map(|&(l, c)| format!("({})", affine_text(l, c))).collect::<Vec<_>>().join("")
        };
        let n = if num.is_empty() { String::from("1") } else { product(&num) };
        match den.len() {
            0 => n,
            1 => format!("{n}/{}", product(&den)),
            _ => format!("{n}/({})", product(&den)),
        }
    }

    /// Canonical text: signed factors sorted by `(ℓ, c, sign)`.
    pub fn canonical_text(&self) -> String {
        let mut ts = self.terms.clone();
        ts.sort_unstable_by_key(|t| (t.ell, t.c, t.sign));
        ts.iter()
            .map(|t| format!("{}log({})", if t.sign > 0 { '+' } else { '-' }, t.affine()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn pow2_rational(e: i64) -> Rational {
    if e >= 0 {
        RBig::from(UBig::ONE << e as usize)
    } else {
        RBig::from_parts(IBig::ONE, UBig::ONE << (-e) as usize)
    }
}

impl Neg for QwExpression {
    type Output = QwExpression;
    fn neg(mut self) -> QwExpression {
        for t in &mut self.terms {
            t.sign = -t.sign;
        }
        self
    }
}

impl Neg for &QwExpression {
    type Output = QwExpression;
    fn neg(self) -> QwExpression {
        -self.clone()
    }
}

impl fmt::Display for QwExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}
