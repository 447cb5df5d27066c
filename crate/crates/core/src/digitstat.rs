//! Digit words and the two digit statistics: the base-`b` digit sum `s_b(n)`
//! and the binary block count `a_w(n)`.
//!
//! Words are stored most significant digit first. Block counts follow the
//! padding convention for words that start with `0`: when `w` starts with `0`
//! and contains a `1`, the binary expansion of `n` is padded on the left with
//! `|w| - 1` zeros, which gives the same count as infinite zero padding. The
//! all-zero words `0^ℓ` are matched against the canonical expansion only.
//! For `n = 0` the expansion is empty, so `s_b(0) = 0` and `a_w(0) = 0`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A nonempty finite word over the digits `{0, …, base - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    base: u32,
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(base: u32, symbols: Vec<u8>) -> Result<Self> {
        if base < 2 {
            return Err(Error::domain("word base must be at least 2"));
        }
        if symbols.is_empty() {
            return Err(Error::domain("words must have at least one symbol"));
        }
        if let Some(&s) = symbols.iter().find(|&&s| u32::from(s) >= base) {
            return Err(Error::domain(alloc::format!("digit {s} is not below base {base}")));
        }
        Ok(Word { base, symbols })
    }

    /// Parses a binary word such as `"0110"`.
    pub fn binary(text: &str) -> Result<Self> {
        text.parse()
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always `false`: words are nonempty.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_binary(&self) -> bool {
        self.base == 2
    }

    /// `true` for `0^ℓ`.
    pub fn is_all_zero(&self) -> bool {
        self.symbols.iter().all(|&s| s == 0)
    }

    fn require_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::domain("block statistics need a binary word"))
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses a binary word.
    fn from_str(s: &str) -> Result<Self> {
        let mut symbols = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => symbols.push(0),
                '1' => symbols.push(1),
                _ => return Err(Error::domain(alloc::format!("'{ch}' is not a binary digit"))),
            }
        }
        Word::new(2, symbols)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base <= 10 {
            for &s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| alloc::format!("{s}")).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Which digit statistic restricts the summation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StatisticSpec {
    /// `s_b(n)`, the sum of the base-`b` digits.
    DigitSum { base: u64 },
    /// `a_w(n)`, the number of possibly overlapping occurrences of a binary word.
    BlockCount(Word),
}

impl StatisticSpec {
    pub fn digit_sum(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::domain("digit-sum base must be at least 2"));
        }
        Ok(StatisticSpec::DigitSum { base })
    }

    pub fn block_count(word: Word) -> Result<Self> {
        word.require_binary()?;
        Ok(StatisticSpec::BlockCount(word))
    }

    /// The statistic evaluated at `n`.
    pub fn eval(&self, n: u64) -> u64 {
        match self {
            StatisticSpec::DigitSum { base } => digit_sum(n, *base),
            StatisticSpec::BlockCount(w) => u64::from(BlockCounter::new(w).count(n)),
        }
    }
}

impl fmt::Display for StatisticSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatisticSpec::DigitSum { base: 2 } => write!(f, "s2"),
            StatisticSpec::DigitSum { base } => write!(f, "sb:{base}"),
            StatisticSpec::BlockCount(w) => write!(f, "word:{w}"),
        }
    }
}

/// `ν(t)`: the integer whose binary digits, most significant first, are `t`.
pub fn word_value(t: &Word) -> Result<u64> {
    word_value_digits(t.symbols())
}

pub(crate) fn word_value_digits(t: &[u8]) -> Result<u64> {
    if t.len() > 64 {
        return Err(Error::domain("word value does not fit in 64 bits"));
    }
    t.iter().try_fold(0u64, |acc, &d| match d {
        0 | 1 => Ok((acc << 1) | u64::from(d)),
        _ => Err(Error::domain("word value needs a binary word")),
    })
}

/// Sum of the base-`b` digits of `n`.
pub fn digit_sum(mut n: u64, b: u64) -> u64 {
    assert!(b >= 2, "base must be at least 2");
    if b == 2 {
        return u64::from(n.count_ones());
    }
    let mut s = 0;
    while n > 0 {
        s += n % b;
        n /= b;
    }
    s
}

/// Number of base-`b` digits of `n` (zero for `n = 0`).
pub fn digit_count(mut n: u64, b: u64) -> u32 {
    let mut c = 0;
    while n > 0 {
        c += 1;
        n /= b;
    }
    c
}

/// Binary digits of `n`, most significant first, padded per the block-count
/// convention for `w`.
fn padded_expansion(w: &[u8], n: u64) -> Vec<u8> {
    if n == 0 {
        return Vec::new();
    }
    let bits = 64 - n.leading_zeros() as usize;
    let pad = if w[0] == 0 && w.contains(&1) { w.len() - 1 } else { 0 };
    let mut out = Vec::with_capacity(pad + bits);
    out.resize(pad, 0);
    out.extend((0..bits).rev().map(|i| ((n >> i) & 1) as u8));
    out
}

/// Number of possibly overlapping occurrences of `w` in the binary expansion
/// of `n`, by a direct scan of the padded digit string.
pub fn count_occurrences(w: &Word, n: u64) -> Result<u32> {
    w.require_binary()?;
    let s = padded_expansion(w.symbols(), n);
    let w = w.symbols();
    if s.len() < w.len() {
        return Ok(0);
    }
    Ok(s.windows(w.len()).filter(|win| *win == w).count() as u32)
}

/// `x̄ = 1 - x` for a binary digit.
pub fn complement_digit(x: u8) -> Result<u8> {
    match x {
        0 => Ok(1),
        1 => Ok(0),
        _ => Err(Error::domain("complement needs a binary digit")),
    }
}

/// `true` iff `z` equals the last `|z|` symbols of `w`. The empty word is a
/// suffix of everything.
pub fn is_suffix(z: &[u8], w: &[u8]) -> bool {
    w.ends_with(z)
}

/// Word-parallel block counter for binary words of length at most 63.
///
/// A single pass of shifts and masks marks every bit position where `w`
/// ends; the count is the population count of the valid positions.
#[derive(Clone, Debug)]
pub struct BlockCounter {
    len: u32,
    pattern: u64,
    padded: bool,
}

impl BlockCounter {
    pub fn new(w: &Word) -> Self {
        assert!(w.is_binary() && w.len() < 64, "block counter needs a binary word shorter than 64");
        let pattern = word_value_digits(w.symbols()).expect("binary word");
        let padded = w.symbols()[0] == 0 && w.symbols().contains(&1);
        BlockCounter { len: w.len() as u32, pattern, padded }
    }

    #[inline]
    pub fn count(&self, n: u64) -> u32 {
        if n == 0 {
            return 0;
        }
        let bits = 64 - n.leading_zeros();
        // window starting (least significant end) at bit s covers bits s..s+len-1
        let windows = if self.padded {
            bits
        } else if bits >= self.len {
            bits - self.len + 1
        } else {
            return 0;
        };
        let mut hits = u64::MAX;
        for i in 0..self.len {
            let shifted = n >> i;
            hits &= if (self.pattern >> i) & 1 == 1 { shifted } else { !shifted };
        }
        let valid = if windows >= 64 { u64::MAX } else { (1u64 << windows) - 1 };
        (hits & valid).count_ones()
    }
}

/// Deterministic automaton recognising occurrences of a binary word
/// (Knuth–Morris–Pratt transitions), scanning digits most significant first.
#[derive(Clone, Debug)]
pub struct OccurrenceAutomaton {
    word: Vec<u8>,
    /// `delta[state][bit]`; state = length of the longest matched prefix.
    delta: Vec<[usize; 2]>,
    padded: bool,
}

impl OccurrenceAutomaton {
    pub fn new(w: &Word) -> Self {
        assert!(w.is_binary(), "automaton needs a binary word");
        let word = w.symbols().to_vec();
        let m = word.len();
        let mut fail = alloc::vec![0usize; m + 1];
        let mut k = 0;
        for i in 1..m {
            while k > 0 && word[i] != word[k] {
                k = fail[k];
            }
            if word[i] == word[k] {
                k += 1;
            }
            fail[i + 1] = k;
        }
        let mut delta = alloc::vec![[0usize; 2]; m + 1];
        for state in 0..=m {
            for bit in 0..2u8 {
                delta[state][bit as usize] = if state < m && word[state] == bit {
                    state + 1
                } else if state == 0 {
                    0
                } else {
                    delta[fail[state]][bit as usize]
                };
            }
        }
        let padded = word[0] == 0 && word.contains(&1);
        OccurrenceAutomaton { word, delta, padded }
    }

    pub fn states(&self) -> usize {
        self.word.len() + 1
    }

    pub fn step(&self, state: usize, bit: u8) -> usize {
        self.delta[state][bit as usize]
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        state == self.word.len()
    }

    /// State after reading the padding that precedes every nonzero expansion.
    pub fn start_state(&self) -> usize {
        let mut s = 0;
        if self.padded {
            for _ in 1..self.word.len() {
                s = self.step(s, 0);
            }
        }
        s
    }

    pub fn count(&self, n: u64) -> u32 {
        if n == 0 {
            return 0;
        }
        let bits = 64 - n.leading_zeros();
        let mut state = self.start_state();
        let mut hits = 0;
        for i in (0..bits).rev() {
            state = self.step(state, ((n >> i) & 1) as u8);
            hits += u32::from(self.is_accepting(state));
        }
        hits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn word_values() {
        assert_eq!(word_value(&w("101")).unwrap(), 5);
        assert_eq!(word_value(&w("0")).unwrap(), 0);
        assert_eq!(word_value(&w("11")).unwrap(), 3);
        assert_eq!(word_value(&w("0011")).unwrap(), 3);
        let ternary = Word::new(3, alloc::vec![1, 2]).unwrap();
        assert!(word_value(&ternary).is_err());
        assert!("012".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
        assert!(Word::new(3, alloc::vec![3]).is_err());
    }

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum(5, 2), 2);
        assert_eq!(digit_sum(5, 3), 3);
        assert_eq!(digit_sum(0, 7), 0);
        for n in 1..=1000 {
            assert_eq!(digit_sum(2 * n, 2), digit_sum(n, 2));
        }
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(count_occurrences(&w("01"), 5).unwrap(), 2);
        assert_eq!(count_occurrences(&w("000"), 8).unwrap(), 1);
        assert_eq!(count_occurrences(&w("11"), 7).unwrap(), 2);
        assert_eq!(count_occurrences(&w("0"), 8).unwrap(), 3);
        assert_eq!(count_occurrences(&w("10"), 0).unwrap(), 0);
        for n in 1..=1000 {
            assert_eq!(count_occurrences(&w("1"), n).unwrap() as u64, digit_sum(n, 2));
        }
    }

    #[test]
    fn complement_and_suffix() {
        assert_eq!(complement_digit(0).unwrap(), 1);
        assert_eq!(complement_digit(1).unwrap(), 0);
        assert!(complement_digit(2).is_err());
        assert!(is_suffix(&[1], &[1, 1]));
        assert!(!is_suffix(&[0, 1], &[0, 1, 0]));
        assert!(is_suffix(&[0], &[0, 1, 0]));
        assert!(is_suffix(&[], &[0, 1]));
    }

    #[test]
    fn three_counters_agree_on_short_words() {
        for len in 1..=4 {
            for v in 0..(1u32 << len) {
                let syms = (0..len).rev().map(|i| ((v >> i) & 1) as u8).collect();
                let word = Word::new(2, syms).unwrap();
                let fast = BlockCounter::new(&word);
                let dfa = OccurrenceAutomaton::new(&word);
                for n in 0..=10_000u64 {
                    let scan = count_occurrences(&word, n).unwrap();
                    assert_eq!(fast.count(n), scan, "{word} {n}");
                    assert_eq!(dfa.count(n), scan, "{word} {n}");
                }
            }
        }
    }

    #[test]
    fn spec_display_and_eval() {
        let s2 = StatisticSpec::digit_sum(2).unwrap();
        assert_eq!(alloc::format!("{s2}"), "s2");
        assert_eq!(s2.eval(7), 3);
        let b = StatisticSpec::block_count(w("11")).unwrap();
        assert_eq!(alloc::format!("{b}"), "word:11");
        assert_eq!(b.eval(7), 2);
        assert!(StatisticSpec::digit_sum(1).is_err());
        assert!(StatisticSpec::block_count(Word::new(3, alloc::vec![2]).unwrap()).is_err());
    }
}
