//! Certified summation of the restricted harmonic sums.
//!
//! Three algorithms, one per statistic:
//!
//! * base-2 digit sum, `A_k = Σ_{s_2(n) = k} 1/n`: the telescoping form
//!   `A_k = 2 - 2 Σ_{1 ≤ s_2(n) ≤ k-1} 1/(2n(2n+1))`. The summation set is
//!   dense, and the omitted terms for `n > N` are negative with total at
//!   most `1/(2N + 1)`.
//! * base-`b` digit sum, `u_k`: the class is summed directly up to
//!   `N = b^J - 1` and the rest is bounded by the binomial block counts.
//! * binary block count, `d_k = Σ_{a_w(n) = k} 1/n`: the sum is rewritten
//!   with `e_w(n) = 1/n + 2^r log b_w(n) = O(1/n²)` and the identity
//!   `Σ_{a_w(n) = k} log b_w(n) = -log 2`, giving
//!   `d_k = 2^r log 2 + Σ e_w(n)` whose tail is at most `C_w/N`.
//!
//! The inner loops accumulate reciprocals in fixed point
//! ([`crate::numeric::fixed`]) over fixed-size blocks of integers. Every
//! partial sum is an exact integer, so the result does not depend on how the
//! blocks are distributed over threads.

use alloc::vec;
use alloc::vec::Vec;

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::digitstat::{BlockCounter, StatisticSpec, Word};
use crate::error::{Error, Result};
use crate::numeric::fixed::{frac_bits_for, FixedSum, Recip};
use crate::numeric::{Enclosure, GUARD_BITS};
use crate::oracle::{checked_pow, for_each_in_class, Rational};
use crate::qw::{self, QwExpression};

/// Integers per work unit. Fixed, so partitioning never depends on the
/// thread count.
const BLOCK: u64 = 1 << 16;

/// Below this `n`, `e_w(n)` is evaluated from logarithms; from here on by
/// its power series in `1/n`.
const SERIES_START: u64 = 64;

/// One row of a convergence report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesResult {
    pub spec: StatisticSpec,
    pub k: u64,
    /// Summation was carried out exactly (up to rounding) for `n ≤ N`.
    pub n_max: u64,
    /// Certified enclosure of the full infinite sum; includes the tail.
    pub value: Enclosure,
    /// Magnitude bound on the omitted terms, already folded into `value`.
    pub tail_bound: Rational,
    pub limit: Enclosure,
    /// `value - limit`.
    pub gap: Enclosure,
}

/// Summation settings: working precision and worker threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Engine {
    precision_bits: usize,
    threads: Option<usize>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine { precision_bits: 128, threads: None }
    }
}

impl Engine {
    pub fn new(precision_bits: usize) -> Result<Self> {
        if precision_bits < 32 {
            return Err(Error::domain("precision must be at least 32 bits"));
        }
        Ok(Engine { precision_bits, threads: None })
    }

    /// Number of worker threads; `None` uses the global pool and `Some(1)`
    /// runs on the calling thread. Results are identical either way.
    pub fn with_threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads.filter(|&t| t > 0);
        self
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    pub fn threads(&self) -> Option<usize> {
        self.threads
    }

    fn frac_bits(&self) -> usize {
        frac_bits_for(self.precision_bits)
    }

    /// The closed-form limit as `k → ∞`: `2 log 2`, `2 log b / (b - 1)` or
    /// `2^|w| log 2`.
    pub fn limit_value(&self, spec: &StatisticSpec) -> Enclosure {
        let p = self.precision_bits;
        match spec {
            StatisticSpec::DigitSum { base } => {
                let ln_b = Enclosure::ln_ratio(&UBig::from(*base), &UBig::ONE, p + 8)
                    .expect("base is at least 2");
                ln_b.mul_rational(&RBig::from_parts(IBig::from(2), UBig::from(base - 1)))
                    .with_precision(p)
            }
            StatisticSpec::BlockCount(w) => {
                let r = w.len();
                Enclosure::ln2(p + r + 8).mul_pow2(r as isize).with_precision(p + r)
            }
        }
    }

    fn finish(&self, spec: StatisticSpec, k: u64, n_max: u64, value: Enclosure, tail: Rational) -> SeriesResult {
        let limit = self.limit_value(&spec);
        let gap = &value - &limit;
        SeriesResult { spec, k, n_max, value, tail_bound: tail, limit, gap }
    }

    /// `A_k = Σ_{n ≥ 1, s_2(n) = k} 1/n`.
    pub fn a_k_base2(&self, k: u64, n_max: u64) -> Result<SeriesResult> {
        if k < 1 {
            return Err(Error::domain("A_k needs k >= 1"));
        }
        if n_max < 1 {
            return Err(Error::domain("N must be at least 1"));
        }
        let bins = self.popcount_bins(n_max, k.saturating_sub(1).min(64) as u32)?;
        Ok(self.a_k_from_bins(k, n_max, &bins))
    }

    /// `bins[j]` is `Σ_{n ≤ N, s_2(n) = j} 1/(2n(2n+1))` for `1 ≤ j ≤ max_class`.
    fn popcount_bins(&self, n_max: u64, max_class: u32) -> Result<Vec<FixedSum>> {
        let f = self.frac_bits();
        let nb = max_class as usize + 1;
        let blocks = self.map_blocks(block_count(n_max), |i| {
            let (lo, hi) = block_range(i, n_max);
            let mut bins = vec![FixedSum::new(f); nb];
            let mut r = Recip::new(f);
            for n in lo..=hi {
                let j = n.count_ones();
                if j <= max_class {
                    r.set_recip(2 * n);
                    r.div(2 * n + 1);
                    bins[j as usize].add(&r);
                }
            }
            bins
        })?;
        Ok(fold_bins(blocks, nb, f))
    }

    fn a_k_from_bins(&self, k: u64, n_max: u64, bins: &[FixedSum]) -> SeriesResult {
        let p = self.precision_bits;
        let f = self.frac_bits();
        let mut total = FixedSum::new(f);
        for bin in bins.iter().take(k as usize).skip(1) {
            total.merge(bin);
        }
        let (lo, hi) = total.bounds();
        let correction = Enclosure::from_scaled(&lo, &hi, f, p + GUARD_BITS);
        let tail = RBig::from_parts(IBig::ONE, UBig::from(2 * n_max + 1));
        let tail_enc = Enclosure::between(&-tail.clone(), &RBig::ZERO, p + GUARD_BITS);
        let value = (Enclosure::from_int(2, p + GUARD_BITS) - correction.mul_pow2(1) + tail_enc)
            .with_precision(p);
        self.finish(StatisticSpec::DigitSum { base: 2 }, k, n_max, value, tail)
    }

    /// `u_k = Σ_{n ≥ 1, s_b(n) = k} 1/n`, summed directly up to
    /// `N = b^J - 1` with the binomial block bound on the rest.
    pub fn u_k_base_b(&self, b: u64, k: u64, n_max: u64) -> Result<SeriesResult> {
        if b < 2 || k < 1 {
            return Err(Error::domain("u_k needs b >= 2 and k >= 1"));
        }
        let j = digits_of_block_end(b, n_max)
            .ok_or_else(|| Error::domain("N must have the form b^J - 1"))?;
        let tail = uk_tail_bound(b, k, j)?;
        let spec = StatisticSpec::DigitSum { base: b };
        let mut members = Vec::new();
        for_each_in_class(&spec, k, n_max, |n| members.push(n));
        let f = self.frac_bits();
        let chunks = members.len().div_ceil(BLOCK as usize);
        let parts = self.map_blocks(chunks, |i| {
            let lo = i * BLOCK as usize;
            let hi = (lo + BLOCK as usize).min(members.len());
            let mut acc = FixedSum::new(f);
            let mut r = Recip::new(f);
            for &n in &members[lo..hi] {
                acc.add_recip(n, &mut r);
            }
            acc
        })?;
        let mut sum = FixedSum::new(f);
        for part in &parts {
            sum.merge(part);
        }
        let p = self.precision_bits;
        let (lo, hi) = sum.bounds();
        let direct = Enclosure::from_scaled(&lo, &hi, f, p + GUARD_BITS);
        let value = (direct + Enclosure::between(&RBig::ZERO, &tail, p + GUARD_BITS)).with_precision(p);
        Ok(self.finish(spec, k, n_max, value, tail))
    }

    /// `d_k = Σ_{n ≥ 1, a_w(n) = k} 1/n`, accelerated by `e_w(n)`.
    ///
    /// For `k = 0` the class of the `log b_w` identity also contains `n = 0`,
    /// so `2^r log b_w(0)` is added; words with `b_w(0) = 0` are rejected.
    pub fn d_k_accelerated(&self, w: &Word, k: u64, n_max: u64) -> Result<SeriesResult> {
        let table = self.d_k_table(w, &[k], n_max)?;
        Ok(table.into_iter().next().expect("one row"))
    }

    fn d_k_table(&self, w: &Word, ks: &[u64], n_max: u64) -> Result<Vec<SeriesResult>> {
        if n_max < 1 {
            return Err(Error::domain("N must be at least 1"));
        }
        let spec = StatisticSpec::block_count(w.clone())?;
        if w.len() >= 64 {
            return Err(Error::domain("block words must be shorter than 64 symbols"));
        }
        let expr = qw::build(w)?;
        let zero_log = if ks.contains(&0) { Some(self.log_bw_zero(&expr)?) } else { None };
        let max_k = ks.iter().copied().max().unwrap_or(0);
        let plan = TaylorPlan::new(&expr, self.frac_bits());
        let counter = BlockCounter::new(w);
        let f = plan.frac_bits;
        let nb = max_k as usize + 1;
        let wanted: Vec<bool> = (0..nb as u64).map(|c| ks.contains(&c)).collect();

        let blocks = self.map_blocks(block_count(n_max), |i| {
            let (lo, hi) = block_range(i, n_max);
            let mut accs: Vec<Option<ClassAcc>> = vec![None; nb];
            let mut r = Recip::new(f);
            for n in lo..=hi {
                let c = counter.count(n) as usize;
                if c < nb && wanted[c] {
                    let acc = accs[c].get_or_insert_with(|| ClassAcc::new(&plan));
                    plan.accumulate(&expr, n, acc, &mut r);
                }
            }
            accs
        })?;

        let mut totals: Vec<ClassAcc> = (0..nb).map(|_| ClassAcc::new(&plan)).collect();
        for block in blocks {
            for (total, acc) in totals.iter_mut().zip(block) {
                if let Some(acc) = acc {
                    total.merge(&acc);
                }
            }
        }

        let p = self.precision_bits;
        let r = w.len();
        let wp = p + r + GUARD_BITS;
        let main = Enclosure::ln2(wp).mul_pow2(r as isize);
        let c_w = expr.remainder_constant();
        let tail = c_w / RBig::from(n_max);
        let tail_enc = Enclosure::between(&-tail.clone(), &tail, wp);
        let mut rows = Vec::with_capacity(ks.len());
        for &k in ks {
            let (low, high) = plan.finish(&totals[k as usize]);
            let mut value = &Enclosure::between(&low, &high, wp) + &main;
            value = &value + &tail_enc;
            if k == 0 {
                value = &value + zero_log.as_ref().expect("computed for k = 0");
            }
            rows.push(self.finish(spec.clone(), k, n_max, value.with_precision(p + r), tail.clone()));
        }
        Ok(rows)
    }

    /// `2^r log b_w(0)`.
    fn log_bw_zero(&self, expr: &QwExpression) -> Result<Enclosure> {
        let f = self.frac_bits();
        let (lo, hi) = expr.log_scaled(0, f).map_err(|_| {
            Error::UnsupportedClass(alloc::format!(
                "k = 0 for word {} needs log b_w(0), which involves log 0",
                expr.word()
            ))
        })?;
        let r = expr.word().len();
        Ok(Enclosure::from_scaled(&lo, &hi, f, self.precision_bits + r + GUARD_BITS).mul_pow2(r as isize))
    }

    /// One row per `k`, ascending, sharing a single pass over `[1, N]` where
    /// the algorithm allows it. Base-`b` digit sums with `b > 2` round `N`
    /// down to the nearest `b^J - 1`.
    pub fn convergence_table(&self, spec: &StatisticSpec, ks: &[u64], n_max: u64) -> Result<Vec<SeriesResult>> {
        let mut ks = ks.to_vec();
        ks.sort_unstable();
        ks.dedup();
        if ks.is_empty() {
            return Ok(Vec::new());
        }
        match spec {
            StatisticSpec::DigitSum { base: 2 } => {
                if ks[0] < 1 {
                    return Err(Error::domain("A_k needs k >= 1"));
                }
                if n_max < 1 {
                    return Err(Error::domain("N must be at least 1"));
                }
                let max = *ks.last().unwrap();
                let bins = self.popcount_bins(n_max, max.saturating_sub(1).min(64) as u32)?;
                Ok(ks.iter().map(|&k| self.a_k_from_bins(k, n_max, &bins)).collect())
            }
            StatisticSpec::DigitSum { base } => {
                let n = round_to_block_end(*base, n_max)
                    .ok_or_else(|| Error::domain("N is smaller than the base"))?;
                ks.iter().map(|&k| self.u_k_base_b(*base, k, n)).collect()
            }
            StatisticSpec::BlockCount(w) => self.d_k_table(w, &ks, n_max),
        }
    }

    #[cfg(feature = "parallel")]
    fn map_blocks<T, F>(&self, count: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        use rayon::prelude::*;
        match self.threads {
            Some(1) => Ok((0..count).map(f).collect()),
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::domain(alloc::format!("thread pool: {e}")))?;
                Ok(pool.install(|| (0..count).into_par_iter().map(&f).collect()))
            }
            None => Ok((0..count).into_par_iter().map(f).collect()),
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn map_blocks<T, F>(&self, count: usize, f: F) -> Result<Vec<T>>
    where
        F: Fn(usize) -> T,
    {
        Ok((0..count).map(f).collect())
    }
}

fn block_count(n_max: u64) -> usize {
    n_max.div_ceil(BLOCK) as usize
}

fn block_range(i: usize, n_max: u64) -> (u64, u64) {
    let lo = i as u64 * BLOCK + 1;
    (lo, (lo + BLOCK - 1).min(n_max))
}

fn fold_bins(blocks: Vec<Vec<FixedSum>>, nb: usize, f: usize) -> Vec<FixedSum> {
    let mut out = vec![FixedSum::new(f); nb];
    for block in blocks {
        for (o, b) in out.iter_mut().zip(block.iter()) {
            o.merge(b);
        }
    }
    out
}

/// `J` with `n = b^J - 1`.
fn digits_of_block_end(b: u64, n: u64) -> Option<u32> {
    let mut p: u64 = 1;
    let mut j = 0;
    while p - 1 < n {
        p = p.checked_mul(b)?;
        j += 1;
    }
    (p - 1 == n && j >= 1).then_some(j)
}

/// Largest `b^J - 1 ≤ n` with `J ≥ 1`.
pub fn round_to_block_end(b: u64, n: u64) -> Option<u64> {
    let mut best = None;
    let mut p = b;
    while p - 1 <= n {
        best = Some(p - 1);
        match p.checked_mul(b) {
            Some(q) => p = q,
            None => break,
        }
    }
    best
}

/// `Σ_{j > J} C(j+k-1, k)/b^{j-1}`, bounded by its first term over `1 - ρ`
/// with `ρ = (J+1+k)/((J+1) b)`, the largest ratio of consecutive terms.
pub fn uk_tail_bound(b: u64, k: u64, j: u32) -> Result<Rational> {
    if u64::from(j).saturating_sub(1).saturating_mul(b - 1) <= k {
        return Err(Error::TailRatio { base: b, k, digits: j });
    }
    checked_pow(b, j)?;
    let j1 = u64::from(j) + 1;
    let first = crate::oracle::tail_count_bound(b, k, j + 1)?;
    let ratio_inv = RBig::from_parts(IBig::from(j1 * b), UBig::from(j1 * b - j1 - k));
    Ok(first * ratio_inv)
}

/// Per-class accumulator for `Σ e_w(n)`.
#[derive(Clone, Debug)]
struct ClassAcc {
    /// `2^F Σ e_w(n)` bounds for `n < SERIES_START`.
    direct_lo: IBig,
    direct_hi: IBig,
    /// `powers[m - 2]` accumulates `n^{-m}`.
    powers: Vec<FixedSum>,
    /// Integers whose series was truncated, each contributing at most `2^-F`.
    truncated: u64,
}

impl ClassAcc {
    fn new(plan: &TaylorPlan) -> Self {
        ClassAcc {
            direct_lo: IBig::ZERO,
            direct_hi: IBig::ZERO,
            powers: vec![FixedSum::new(plan.frac_bits); plan.max_order as usize - 1],
            truncated: 0,
        }
    }

    fn merge(&mut self, other: &ClassAcc) {
        self.direct_lo += &other.direct_lo;
        self.direct_hi += &other.direct_hi;
        for (a, b) in self.powers.iter_mut().zip(other.powers.iter()) {
            a.merge(b);
        }
        self.truncated += other.truncated;
    }
}

/// Evaluation plan for `e_w(n) = Σ_{m ≥ 2} α_m n^{-m}`, where
/// `α_m = 2^r (-1)^{m+1} K_m / m` and `K_m = Σ sign (c/2^ℓ)^m`. The `m = 1`
/// coefficient vanishes because `K_1 = -2^{-r}`.
#[derive(Clone, Debug)]
struct TaylorPlan {
    frac_bits: usize,
    r: usize,
    /// Highest series order needed for `n` with `floor(log2 n) = β`.
    order_for_bits: [u32; 64],
    max_order: u32,
    alpha: Vec<Rational>,
}

impl TaylorPlan {
    fn new(expr: &QwExpression, frac_bits: usize) -> Self {
        let r = expr.word().len();
        let terms = expr.terms().len() as u64;
        // |α_m| ≤ 2^r T, so the terms past order M add at most
        // 2^{r+1} T n^{-(M+1)} ≤ 2^{r+1+⌈log2 T⌉-β(M+1)}.
        let need = frac_bits + r + 1 + (64 - (terms - 1).leading_zeros()) as usize;
        let mut order_for_bits = [0u32; 64];
        let min_beta = 63 - SERIES_START.leading_zeros() as usize;
        for (beta, slot) in order_for_bits.iter_mut().enumerate().skip(min_beta) {
            *slot = (need.div_ceil(beta) - 1).max(2) as u32;
        }
        let max_order = order_for_bits[min_beta];
        let mut alpha = Vec::with_capacity(max_order as usize + 1);
        alpha.push(RBig::ZERO);
        alpha.push(RBig::ZERO);
        let two_r = RBig::from(UBig::ONE << r);
        for m in 2..=max_order {
            let a = &two_r * expr.moment(m) / RBig::from(m);
            alpha.push(if m % 2 == 0 { -a } else { a });
        }
        TaylorPlan { frac_bits, r, order_for_bits, max_order, alpha }
    }

    fn accumulate(&self, expr: &QwExpression, n: u64, acc: &mut ClassAcc, r: &mut Recip) {
        if n < SERIES_START {
            let f = self.frac_bits;
            let (llo, lhi) = expr.log_scaled(n, f).expect("n >= 1");
            let one = UBig::ONE << f;
            let q = &one / UBig::from(n);
            let exact = &q * UBig::from(n) == one;
            let q = IBig::from(q);
            acc.direct_lo += &q + (&llo << self.r);
            acc.direct_hi += &q + IBig::from(u8::from(!exact)) + (&lhi << self.r);
            return;
        }
        let beta = 63 - n.leading_zeros() as usize;
        let order = self.order_for_bits[beta];
        r.set_recip(n);
        for m in 2..=order {
            r.div(n);
            acc.powers[m as usize - 2].add(r);
        }
        acc.truncated += 1;
    }

    /// Rational bounds on `Σ e_w(n)` over the class.
    fn finish(&self, acc: &ClassAcc) -> (Rational, Rational) {
        let scale = UBig::ONE << self.frac_bits;
        let to_q = |x: &IBig| RBig::from_parts(x.clone(), scale.clone());
        let mut low = to_q(&acc.direct_lo);
        let mut high = to_q(&acc.direct_hi);
        for (i, power) in acc.powers.iter().enumerate() {
            let alpha = &self.alpha[i + 2];
            let (plo, phi) = power.bounds();
            if alpha >= &RBig::ZERO {
                low += alpha * to_q(&plo);
                high += alpha * to_q(&phi);
            } else {
                low += alpha * to_q(&phi);
                high += alpha * to_q(&plo);
            }
        }
        let trunc = to_q(&IBig::from(acc.truncated));
        (low - &trunc, high + trunc)
    }
}
