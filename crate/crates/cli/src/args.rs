use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kempner_core::{StatisticSpec, Word};

#[derive(Debug, Parser)]
#[command(name = "kempner", version, about = "Certified Kempner-like sums over digit statistics")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Working precision in bits (at least 32).
    #[arg(long, global = true, default_value_t = 128, value_parser = parse_precision)]
    pub precision: usize,
    /// Summation bound N (default 1e6); accepts 1000000, 1e6 or 2^20.
    #[arg(long = "n", global = true, value_parser = parse_count)]
    pub n: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for long summations (output does not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

pub const DEFAULT_N: u64 = 1_000_000;

impl RunConfig {
    pub fn n_or_default(&self) -> u64 {
        self.n.unwrap_or(DEFAULT_N)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form limit of the sums as k grows.
    Limits {
        #[arg(value_parser = parse_spec)]
        spec: StatisticSpec,
    },
    /// Certified sums for a range of k, with gaps to the limit.
    Converge {
        #[arg(value_parser = parse_spec)]
        spec: StatisticSpec,
        /// Inclusive range such as 2..8, or a single k.
        #[arg(long, value_parser = parse_k_range)]
        k: RangeInclusive<u64>,
    },
    /// Exact rational partial sum over the class up to N.
    Partial {
        #[arg(value_parser = parse_spec)]
        spec: StatisticSpec,
        #[arg(long)]
        k: u64,
    },
    /// The log-affine expansion of log b_w(n).
    Bw {
        #[arg(value_parser = parse_word)]
        word: Word,
        /// Also print a certified enclosure of log b_w(n) at this n.
        #[arg(long)]
        eval: Option<u64>,
    },
    /// Run exact identity suites; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        j: Option<u32>,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
    },
    /// Roots of the filter polynomial for base b.
    Transfer {
        #[arg(long)]
        b: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Split,
    Vsum,
    Partition,
    Qw,
    Transfer,
    All,
}

fn parse_precision(s: &str) -> Result<usize, String> {
    let p: usize = s.parse().map_err(|e| format!("{e}"))?;
    if p < 32 {
        return Err("precision must be at least 32 bits".into());
    }
    Ok(p)
}

/// `123`, `1e6`, `2^24`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let bad = || format!("'{s}' is not a positive integer");
    let v = if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(bad)?
    } else if let Some((b, e)) = s.split_once('^') {
        let b: u64 = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        b.checked_pow(e).ok_or_else(bad)?
    } else {
        s.parse().map_err(|_| bad())?
    };
    if v == 0 {
        return Err("N must be at least 1".into());
    }
    Ok(v)
}

/// `s2`, `sb:<b>` or `word:<w>`.
pub fn parse_spec(s: &str) -> Result<StatisticSpec, String> {
    if s == "s2" {
        return Ok(StatisticSpec::DigitSum { base: 2 });
    }
    if let Some(b) = s.strip_prefix("sb:") {
        let b: u64 = b.parse().map_err(|_| format!("'{b}' is not a base"))?;
        return StatisticSpec::digit_sum(b).map_err(|e| e.to_string());
    }
    if let Some(w) = s.strip_prefix("word:") {
        let w = parse_word(w)?;
        return StatisticSpec::block_count(w).map_err(|e| e.to_string());
    }
    Err(format!("unknown statistic '{s}'; expected s2, sb:<b> or word:<w>"))
}

fn parse_word(s: &str) -> Result<Word, String> {
    Word::binary(s).map_err(|e| e.to_string())
}

fn parse_k_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("'{t}' is not a non-negative integer"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(num(a)?..=num(b)?)
        }
        None => {
            let k = num(s)?;
            Ok(k..=k)
        }
    }
}
