//! Exact rational ground truth.
//!
//! Everything here is computed without rounding: class enumeration, truncated
//! restricted harmonic sums, harmonic numbers and the exact identities that
//! drive the certified algorithms (the residue split of digit-sum classes,
//! the telescoping `v_n` sum, the partition of `[1, b^J - 1]` into digit-sum
//! classes, and the binomial block bound).

use alloc::vec::Vec;

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::digitstat::{digit_count, BlockCounter, OccurrenceAutomaton, StatisticSpec};
use crate::error::{Error, Result};

/// Exact reduced fraction with positive denominator.
pub type Rational = RBig;

/// Which class and how far: the integers `n ∈ [1, N]` whose statistic equals
/// `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassQuery {
    pub spec: StatisticSpec,
    pub k: u64,
    pub n_max: u64,
}

impl ClassQuery {
    pub fn new(spec: StatisticSpec, k: u64, n_max: u64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::domain("class query needs N >= 1"));
        }
        Ok(ClassQuery { spec, k, n_max })
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && n <= self.n_max && self.spec.eval(n) == self.k
    }
}

/// Outcome of an exact identity check; both sides are kept for diagnosis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl IdentityCheck {
    fn compare(lhs: Rational, rhs: Rational) -> Self {
        IdentityCheck { holds: lhs == rhs, lhs, rhs }
    }
}

/// `p/q = Σ 1/m` over `terms`, by binary splitting so that the intermediate
/// numbers stay balanced.
fn reciprocal_sum_parts<T: Copy>(terms: &[T], den: &impl Fn(T) -> UBig) -> (UBig, UBig) {
    match terms.len() {
        0 => (UBig::ZERO, UBig::ONE),
        1 => (UBig::ONE, den(terms[0])),
        len => {
            let (a, b) = terms.split_at(len / 2);
            let (pa, qa) = reciprocal_sum_parts(a, den);
            let (pb, qb) = reciprocal_sum_parts(b, den);
            (pa * &qb + pb * &qa, qa * qb)
        }
    }
}

/// `Σ 1/d(t)` for `t` in `terms`, exactly.
pub fn reciprocal_sum<T: Copy>(terms: &[T], den: impl Fn(T) -> UBig) -> Rational {
    let (p, q) = reciprocal_sum_parts(terms, &den);
    RBig::from_parts(IBig::from(p), q)
}

fn harmonic_range(a: u64, b: u64) -> (UBig, UBig) {
    // Σ_{a ≤ m < b} 1/m
    match b - a {
        0 => (UBig::ZERO, UBig::ONE),
        1 => (UBig::ONE, UBig::from(a)),
        len => {
            let mid = a + len / 2;
            let (p1, q1) = harmonic_range(a, mid);
            let (p2, q2) = harmonic_range(mid, b);
            (p1 * &q2 + p2 * &q1, q1 * q2)
        }
    }
}

/// `H_n = Σ_{m ≤ n} 1/m`, with `H_0 = 0`.
pub fn harmonic(n: u64) -> Rational {
    let (p, q) = harmonic_range(1, n + 1);
    RBig::from_parts(IBig::from(p), q)
}

/// Calls `visit` on every `n ∈ [1, n_max]` with statistic `k`, ascending.
///
/// Digit-sum classes and block-count classes are walked digit by digit
/// (most significant first) with pruning, so the cost is proportional to the
/// class size times the digit length rather than to `n_max`.
pub fn for_each_in_class(spec: &StatisticSpec, k: u64, n_max: u64, mut visit: impl FnMut(u64)) {
    if n_max == 0 {
        return;
    }
    match spec {
        StatisticSpec::DigitSum { base } => {
            let b = *base;
            let len = digit_count(n_max, b);
            let top = digits_msb(n_max, b);
            for l in 1..=len {
                let bound = if l == len { Some(top.as_slice()) } else { None };
                digit_sum_walk(b, l, k, bound, &mut visit);
            }
        }
        StatisticSpec::BlockCount(w) => {
            let dfa = OccurrenceAutomaton::new(w);
            let len = digit_count(n_max, 2);
            let top = digits_msb(n_max, 2);
            for l in 1..=len {
                let bound = if l == len { Some(top.as_slice()) } else { None };
                block_walk(&dfa, l, k, bound, &mut visit);
            }
        }
    }
}

fn digits_msb(mut n: u64, b: u64) -> Vec<u8> {
    let mut d = Vec::new();
    while n > 0 {
        d.push((n % b) as u8);
        n /= b;
    }
    d.reverse();
    d
}

/// All `l`-digit numbers (leading digit nonzero) with digit sum `k`, not
/// exceeding `bound` digit-wise when given.
fn digit_sum_walk(b: u64, l: u32, k: u64, bound: Option<&[u8]>, visit: &mut impl FnMut(u64)) {
    struct Walk<'a, F> {
        b: u64,
        l: usize,
        bound: Option<&'a [u8]>,
        visit: &'a mut F,
    }
    impl<F: FnMut(u64)> Walk<'_, F> {
        fn go(&mut self, pos: usize, value: u64, left: u64, tight: bool) {
            let remaining = (self.l - pos) as u64;
            if left > remaining * (self.b - 1) {
                return;
            }
            if pos == self.l {
                (self.visit)(value);
                return;
            }
            let lo = u64::from(pos == 0);
            let mut hi = (self.b - 1).min(left);
            if tight {
                hi = hi.min(u64::from(self.bound.unwrap()[pos]));
            }
            for d in lo..=hi {
                let t = tight && d == u64::from(self.bound.unwrap()[pos]);
                self.go(pos + 1, value * self.b + d, left - d, t);
            }
        }
    }
    let mut w = Walk { b, l: l as usize, bound, visit };
    w.go(0, 0, k, bound.is_some());
}

/// All `l`-bit numbers with exactly `k` occurrences of the automaton's word.
fn block_walk(
    dfa: &OccurrenceAutomaton,
    l: u32,
    k: u64,
    bound: Option<&[u8]>,
    visit: &mut impl FnMut(u64),
) {
    fn go(
        dfa: &OccurrenceAutomaton,
        l: usize,
        bound: Option<&[u8]>,
        pos: usize,
        state: usize,
        value: u64,
        left: u64,
        tight: bool,
        visit: &mut impl FnMut(u64),
    ) {
        if pos == l {
            if left == 0 {
                visit(value);
            }
            return;
        }
        let lo = u8::from(pos == 0);
        let hi = if tight { bound.unwrap()[pos] } else { 1 };
        for bit in lo..=hi {
            let s = dfa.step(state, bit);
            let hit = u64::from(dfa.is_accepting(s));
            if hit > left {
                continue;
            }
            let t = tight && bit == hi;
            go(dfa, l, bound, pos + 1, s, (value << 1) | u64::from(bit), left - hit, t, visit);
        }
    }
    go(dfa, l as usize, bound, 0, dfa.start_state(), 0, k, bound.is_some(), visit);
}

/// `{n ∈ [1, N] : statistic(n) = k}` in ascending order.
pub fn enumerate_class(q: &ClassQuery) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_in_class(&q.spec, q.k, q.n_max, |n| out.push(n));
    out
}

/// Reference enumeration by scanning every `n ≤ N`.
pub fn enumerate_class_scan(q: &ClassQuery) -> Vec<u64> {
    match &q.spec {
        StatisticSpec::BlockCount(w) => {
            let c = BlockCounter::new(w);
            (1..=q.n_max).filter(|&n| u64::from(c.count(n)) == q.k).collect()
        }
        spec => (1..=q.n_max).filter(|&n| spec.eval(n) == q.k).collect(),
    }
}

/// `Σ 1/n` over the class, exactly.
pub fn partial_sum_exact(q: &ClassQuery) -> Rational {
    reciprocal_sum(&enumerate_class(q), UBig::from)
}

/// Checks the residue split of a digit-sum class:
///
/// `Σ_{m < b^{J+1}, s_b(m) = k} 1/m
///   = (1/b) Σ_{n < b^J, s_b(n) = k} 1/n
///   + Σ_{j=1}^{b-1} Σ_{0 ≤ n < b^J, s_b(n) = k - j} 1/(bn + j)`.
pub fn split_identity_check(b: u64, k: u64, j: u32) -> Result<IdentityCheck> {
    if b < 2 || k < 1 || j < 1 {
        return Err(Error::domain("split identity needs b >= 2, k >= 1, J >= 1"));
    }
    let spec = StatisticSpec::digit_sum(b)?;
    let bj = checked_pow(b, j)?;
    let big = bj.checked_mul(b).ok_or_else(|| Error::domain("b^(J+1) overflows"))? - 1;
    let lhs = partial_sum_exact(&ClassQuery::new(spec.clone(), k, big)?);

    let same = partial_sum_exact(&ClassQuery::new(spec.clone(), k, bj - 1)?);
    let mut rhs = same / RBig::from(b);
    for d in 1..b.min(k + 1) {
        // n = 0 belongs to the class s_b = 0
        let mut members = Vec::new();
        if k == d {
            members.push(0u64);
        }
        for_each_in_class(&spec, k - d, bj - 1, |n| members.push(n));
        rhs += reciprocal_sum(&members, |n| UBig::from(b * n + d));
    }
    Ok(IdentityCheck::compare(lhs, rhs))
}

/// Checks `Σ_{n ≤ N} v_n = H_{bN+b-1} - H_{b-1} - H_N` with
/// `v_n = Σ_{0 ≤ j < b} 1/(bn + j) - 1/n`.
pub fn vsum_identity_check(b: u64, n: u64) -> Result<IdentityCheck> {
    if b < 2 || n < 1 {
        return Err(Error::domain("v_n identity needs b >= 2, N >= 1"));
    }
    let top = b.checked_mul(n).and_then(|x| x.checked_add(b - 1));
    let top = top.ok_or_else(|| Error::domain("bN + b - 1 overflows"))?;
    let lhs = vsum_direct(b, n);
    let rhs = harmonic(top) - harmonic(b - 1) - harmonic(n);
    Ok(IdentityCheck::compare(lhs, rhs))
}

fn harmonic_range_rational(a: u64, b: u64) -> Rational {
    let (p, q) = harmonic_range(a, b);
    RBig::from_parts(IBig::from(p), q)
}

fn vsum_direct(b: u64, n: u64) -> Rational {
    let mut acc = RBig::ZERO;
    for m in 1..=n {
        acc += v_term(b, m);
    }
    acc
}

fn v_term(b: u64, m: u64) -> Rational {
    let block: Vec<u64> = (0..b).map(|j| b * m + j).collect();
    reciprocal_sum(&block, UBig::from) - RBig::from_parts(IBig::ONE, UBig::from(m))
}

/// Runs the `v_n` identity for every `N ∈ [1, n_max]` incrementally. Returns
/// the first failing `N` with both sides, or `None` when all hold.
pub fn vsum_identity_sweep(b: u64, n_max: u64) -> Result<Option<(u64, IdentityCheck)>> {
    if b < 2 {
        return Err(Error::domain("v_n identity needs b >= 2"));
    }
    let base = harmonic(b - 1);
    let mut lhs = RBig::ZERO;
    // h_top = H_{bN+b-1}, h_n = H_N, updated as N grows
    let mut h_top = harmonic(b - 1);
    let mut h_n = RBig::ZERO;
    for n in 1..=n_max {
        lhs += v_term(b, n);
        h_top += harmonic_range_rational(b * n, b * n + b);
        h_n += RBig::from_parts(IBig::ONE, UBig::from(n));
        let rhs = &h_top - &base - &h_n;
        if lhs != rhs {
            return Ok(Some((n, IdentityCheck::compare(lhs, rhs))));
        }
    }
    Ok(None)
}

/// Checks that the digit-sum classes partition `[1, b^J - 1]`:
/// `Σ_k Σ_{n < b^J, s_b(n) = k} 1/n = H_{b^J - 1}`.
pub fn class_partition_check(b: u64, j: u32) -> Result<IdentityCheck> {
    let spec = StatisticSpec::digit_sum(b)?;
    let n_max = checked_pow(b, j)? - 1;
    let mut lhs = RBig::ZERO;
    for k in 0..=(b - 1) * u64::from(j) {
        lhs += partial_sum_exact(&ClassQuery::new(spec.clone(), k, n_max)?);
    }
    Ok(IdentityCheck::compare(lhs, harmonic(n_max)))
}

/// `C(j + k - 1, k) / b^{j-1}`: the number of `j`-digit candidates with digit
/// sum `k` times the largest reciprocal `1/b^{j-1}`, an upper bound for
/// `Σ {1/n : b^{j-1} ≤ n < b^j, s_b(n) = k}`.
pub fn tail_count_bound(b: u64, k: u64, j: u32) -> Result<Rational> {
    if b < 2 || j < 1 {
        return Err(Error::domain("tail bound needs b >= 2, j >= 1"));
    }
    let c = binomial(u64::from(j) + k - 1, k);
    Ok(RBig::from_parts(IBig::from(c), UBig::from(b).pow(j as usize - 1)))
}

/// `C(n, r)` exactly.
pub fn binomial(n: u64, r: u64) -> UBig {
    if r > n {
        return UBig::ZERO;
    }
    let r = r.min(n - r);
    let mut acc = UBig::ONE;
    for i in 0..r {
        acc = acc * UBig::from(n - i) / UBig::from(i + 1);
    }
    acc
}

pub(crate) fn checked_pow(b: u64, j: u32) -> Result<u64> {
    b.checked_pow(j).ok_or_else(|| Error::domain("b^J overflows 64 bits"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digitstat::Word;

    fn q(n: i64, d: u64) -> Rational {
        RBig::from_parts(IBig::from(n), UBig::from(d))
    }

    fn s2() -> StatisticSpec {
        StatisticSpec::digit_sum(2).unwrap()
    }

    fn a11() -> StatisticSpec {
        StatisticSpec::block_count(Word::binary("11").unwrap()).unwrap()
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(1), q(1, 1));
        assert_eq!(harmonic(4), q(25, 12));
        assert_eq!(harmonic(9), q(7129, 2520));
        assert_eq!(harmonic(0), RBig::ZERO);
    }

    #[test]
    fn class_examples() {
        let c = |spec, k, n| enumerate_class(&ClassQuery::new(spec, k, n).unwrap());
        assert_eq!(c(s2(), 1, 8), [1, 2, 4, 8]);
        assert_eq!(c(s2(), 2, 7), [3, 5, 6]);
        assert_eq!(c(a11(), 1, 7), [3, 6]);
        let p = |spec, k, n| partial_sum_exact(&ClassQuery::new(spec, k, n).unwrap());
        assert_eq!(p(s2(), 1, 8), q(15, 8));
        assert_eq!(p(s2(), 2, 7), q(7, 10));
        assert_eq!(p(a11(), 1, 7), q(1, 2));
        assert!(ClassQuery::new(s2(), 1, 0).is_err());
    }

    #[test]
    fn walks_match_scans() {
        let specs = [
            s2(),
            StatisticSpec::digit_sum(3).unwrap(),
            StatisticSpec::digit_sum(10).unwrap(),
            a11(),
            StatisticSpec::block_count(Word::binary("010").unwrap()).unwrap(),
            StatisticSpec::block_count(Word::binary("00").unwrap()).unwrap(),
        ];
        for spec in &specs {
            for n_max in [1u64, 2, 9, 100, 1000, 4095, 5000] {
                for k in 0..6 {
                    let qq = ClassQuery::new(spec.clone(), k, n_max).unwrap();
                    assert_eq!(enumerate_class(&qq), enumerate_class_scan(&qq), "{spec} k={k} N={n_max}");
                }
            }
        }
    }

    #[test]
    fn identity_examples() {
        let c = split_identity_check(2, 2, 3).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, q(179, 180));
        assert!(split_identity_check(2, 1, 4).unwrap().holds);
        assert!(split_identity_check(3, 2, 2).unwrap().holds);
        let v = vsum_identity_check(2, 1).unwrap();
        assert!(v.holds && v.lhs == q(-1, 6));
        let v = vsum_identity_check(3, 1).unwrap();
        assert!(v.holds && v.lhs == q(-13, 60));
        assert!(vsum_identity_check(10, 100).unwrap().holds);
        assert!(vsum_identity_sweep(4, 60).unwrap().is_none());
        assert!(class_partition_check(2, 6).unwrap().holds);
        assert!(class_partition_check(3, 4).unwrap().holds);
    }

    #[test]
    fn tail_bounds() {
        assert_eq!(tail_count_bound(2, 0, 5).unwrap(), q(1, 16));
        assert_eq!(tail_count_bound(2, 2, 3).unwrap(), q(3, 2));
        for b in [2u64, 3] {
            for k in 0..=5 {
                for j in 1..=12u32 {
                    let lo = b.pow(j - 1);
                    let hi = b.pow(j) - 1;
                    let spec = StatisticSpec::digit_sum(b).unwrap();
                    let block: Vec<u64> = (lo..=hi).filter(|&n| spec.eval(n) == k).collect();
                    let exact = reciprocal_sum(&block, UBig::from);
                    assert!(exact <= tail_count_bound(b, k, j).unwrap(), "b={b} k={k} j={j}");
                }
            }
        }
    }
}
