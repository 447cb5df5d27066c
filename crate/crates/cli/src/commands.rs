use kempner_core::digitstat::Word;
use kempner_core::oracle::{self, ClassQuery};
use kempner_core::qw;
use kempner_core::transfer::{corollary_polynomial, Polynomial};
use kempner_core::{Engine, Enclosure, IdentityCheck, Rational, StatisticSpec};
use serde::Serialize;

use crate::args::{Command, RunConfig, Suite};
use crate::report::{bounds, render, text_table, SeriesRow};

/// A rendered report and whether every check it contains passed.
pub struct Output {
    pub body: String,
    pub ok: bool,
}

impl Output {
    fn pass(body: String) -> Self {
        Output { body, ok: true }
    }
}

pub fn run(command: &Command, cfg: &RunConfig) -> kempner_core::Result<Output> {
    match command {
        Command::Limits { spec } => limits(spec, cfg),
        Command::Converge { spec, k } => converge(spec, k.clone().collect(), cfg),
        Command::Partial { spec, k } => partial(spec, *k, cfg),
        Command::Bw { word, eval } => bw(word, *eval, cfg),
        Command::Verify { suite, b, k, j, maxlen } => verify(*suite, *b, *k, *j, *maxlen, cfg),
        Command::Transfer { b } => transfer(*b, cfg),
    }
}

fn engine(cfg: &RunConfig) -> kempner_core::Result<Engine> {
    Ok(Engine::new(cfg.precision)?.with_threads(cfg.threads))
}

#[derive(Serialize)]
struct LimitDoc {
    spec: String,
    limit_lo: String,
    limit_hi: String,
}

fn limits(spec: &StatisticSpec, cfg: &RunConfig) -> kempner_core::Result<Output> {
    let e = engine(cfg)?.limit_value(spec);
    let (lo, hi) = bounds(&e, cfg.precision);
    let doc = LimitDoc { spec: spec.to_string(), limit_lo: lo, limit_hi: hi };
    let body = render(cfg.format, &doc, std::slice::from_ref(&doc), || {
        format!("{}  limit in [{}, {}]\n", doc.spec, doc.limit_lo, doc.limit_hi)
    });
    Ok(Output::pass(body))
}

fn converge(spec: &StatisticSpec, ks: Vec<u64>, cfg: &RunConfig) -> kempner_core::Result<Output> {
    let engine = engine(cfg)?;
    let limit = bounds(&engine.limit_value(spec), cfg.precision);
    let rows = engine.convergence_table(spec, &ks, cfg.n_or_default())?;
    let rows: Vec<SeriesRow> = rows.iter().map(|r| SeriesRow::new(r, cfg.precision)).collect();
    let body = render(cfg.format, &rows, &rows, || {
        let cells: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.k.to_string(),
                    r.n.to_string(),
                    r.value_lo.clone(),
                    r.value_hi.clone(),
                    r.tail_bound.clone(),
                    r.gap_lo.clone(),
                    r.gap_hi.clone(),
                ]
            })
            .collect();
        let mut s = format!("{}  limit in [{}, {}]\n", spec, limit.0, limit.1);
        s.push_str(&text_table(&["k", "N", "value_lo", "value_hi", "tail_bound", "gap_lo", "gap_hi"], &cells));
        s
    });
    Ok(Output::pass(body))
}

#[derive(Serialize)]
struct PartialDoc {
    spec: String,
    k: u64,
    #[serde(rename = "N")]
    n: u64,
    terms: usize,
    exact: String,
    value_lo: String,
    value_hi: String,
}

fn partial(spec: &StatisticSpec, k: u64, cfg: &RunConfig) -> kempner_core::Result<Output> {
    let q = ClassQuery::new(spec.clone(), k, cfg.n_or_default())?;
    let members = oracle::enumerate_class(&q);
    let sum = oracle::partial_sum_exact(&q);
    let (lo, hi) = bounds(&Enclosure::from_rational(&sum, cfg.precision), cfg.precision);
    let doc = PartialDoc {
        spec: spec.to_string(),
        k,
        n: q.n_max,
        terms: members.len(),
        exact: sum.to_string(),
        value_lo: lo,
        value_hi: hi,
    };
    let body = render(cfg.format, &doc, std::slice::from_ref(&doc), || {
        format!(
            "{} k={} N={}: {} terms\nexact  {}\nvalue  [{}, {}]\n",
            doc.spec, doc.k, doc.n, doc.terms, doc.exact, doc.value_lo, doc.value_hi
        )
    });
    Ok(Output::pass(body))
}

#[derive(Serialize)]
struct BwDoc {
    word: String,
    terms: String,
    term_count: usize,
    rational_function: String,
    sign_sum: i64,
    scale_sum: i64,
    offset_sum: String,
    remainder_constant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    eval: Option<EvalDoc>,
}

#[derive(Serialize)]
struct EvalDoc {
    n: u64,
    log_bw_lo: String,
    log_bw_hi: String,
}

fn bw(word: &Word, eval: Option<u64>, cfg: &RunConfig) -> kempner_core::Result<Output> {
    let e = qw::build(word)?;
    let (s0, s1, k1) = e.asymptotic_coefficients();
    let eval = match eval {
        Some(n) => {
            let v = e.evaluate(n, cfg.precision)?;
            let (lo, hi) = bounds(&v, cfg.precision);
            Some(EvalDoc { n, log_bw_lo: lo, log_bw_hi: hi })
        }
        None => None,
    };
    let doc = BwDoc {
        word: word.to_string(),
        terms: e.canonical_text(),
        term_count: e.terms().len(),
        rational_function: e.rational_function(),
        sign_sum: s0,
        scale_sum: s1,
        offset_sum: k1.to_string(),
        remainder_constant: e.remainder_constant().to_string(),
        eval,
    };
    #[derive(Serialize)]
    struct TermRow {
        sign: i8,
        ell: u32,
        c: u64,
    }
    let rows: Vec<TermRow> = e.terms().iter().map(|t| TermRow { sign: t.sign, ell: t.ell, c: t.c }).collect();
    let body = render(cfg.format, &doc, &rows, || {
        let mut s = format!(
            "w = {}\nlog b_w(n) = {}\nb_w(n) = {}\nsum sign = {}, sum sign*l = {}, sum sign*c/2^l = {}\nC_w = {}\n",
            doc.word, doc.terms, doc.rational_function, doc.sign_sum, doc.scale_sum, doc.offset_sum, doc.remainder_constant
        );
        if let Some(ev) = &doc.eval {
            s.push_str(&format!("log b_w({}) in [{}, {}]\n", ev.n, ev.log_bw_lo, ev.log_bw_hi));
        }
        s
    });
    Ok(Output::pass(body))
}

#[derive(Serialize)]
struct CheckRow {
    suite: &'static str,
    name: String,
    passed: bool,
    lhs: String,
    rhs: String,
}

impl CheckRow {
    fn identity(suite: &'static str, name: String, c: &IdentityCheck) -> Self {
        CheckRow { suite, name, passed: c.holds, lhs: c.lhs.to_string(), rhs: c.rhs.to_string() }
    }
}

#[derive(Serialize)]
struct VerifyDoc {
    passed: bool,
    total: usize,
    failed: usize,
    checks: Vec<CheckRow>,
}

fn verify(
    suite: Suite,
    b: Option<u64>,
    k: Option<u64>,
    j: Option<u32>,
    maxlen: usize,
    cfg: &RunConfig,
) -> kempner_core::Result<Output> {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Split {
        let bs = b.map_or(2..=5, |b| b..=b);
        let ks = k.map_or(1..=6, |k| k..=k);
        let js = j.map_or(1..=6, |j| j..=j);
        for b in bs {
            for k in ks.clone() {
                for j in js.clone() {
                    let c = oracle::split_identity_check(b, k, j)?;
                    checks.push(CheckRow::identity("split", format!("b={b} k={k} J={j}"), &c));
                }
            }
        }
    }
    if all || suite == Suite::Vsum {
        match b {
            Some(b) if !all => {
                let n = cfg.n.unwrap_or(1);
                let c = oracle::vsum_identity_check(b, n)?;
                checks.push(CheckRow::identity("vsum", format!("b={b} N={n}"), &c));
            }
            _ => {
                let n_max = if all { 500 } else { cfg.n.unwrap_or(500) };
                for b in 2..=10 {
                    let name = format!("b={b} N=1..{n_max}");
                    match oracle::vsum_identity_sweep(b, n_max)? {
                        None => {
                            let c = oracle::vsum_identity_check(b, n_max)?;
                            checks.push(CheckRow::identity("vsum", name, &c));
                        }
                        Some((n, c)) => checks.push(CheckRow::identity("vsum", format!("b={b} N={n}"), &c)),
                    }
                }
            }
        }
    }
    if all || suite == Suite::Partition {
        let bs: Vec<u64> = match b {
            Some(b) if !all => vec![b],
            _ => vec![2, 3],
        };
        let js = match j {
            Some(j) if !all => j..=j,
            _ => 1..=10,
        };
        for b in bs {
            for j in js.clone() {
                let c = oracle::class_partition_check(b, j)?;
                checks.push(CheckRow::identity("partition", format!("b={b} J={j}"), &c));
            }
        }
    }
    if all || suite == Suite::Qw {
        for len in 1..=maxlen.min(qw::MAX_WORD_LEN) {
            let mut bad = Vec::new();
            let target = -(Rational::ONE / Rational::from(1u64 << len));
            for v in 0..(1u64 << len) {
                let syms = (0..len).rev().map(|i| ((v >> i) & 1) as u8).collect();
                let w = Word::new(2, syms)?;
                let (s0, s1, k1) = qw::build(&w)?.asymptotic_coefficients();
                if s0 != 0 || s1 != 0 || k1 != target {
                    bad.push(format!("{w}: ({s0}, {s1}, {k1})"));
                }
            }
            checks.push(CheckRow {
                suite: "qw",
                name: format!("|w|={len} ({} words)", 1u64 << len),
                passed: bad.is_empty(),
                lhs: if bad.is_empty() { format!("(0, 0, {target})") } else { bad.join("; ") },
                rhs: format!("(0, 0, {target})"),
            });
        }
    }
    if all || suite == Suite::Transfer {
        let bs = match b {
            Some(b) if !all => b..=b,
            _ => 3..=12,
        };
        for b in bs {
            let p = corollary_polynomial(b)?;
            let m = p.max_root_modulus(cfg.precision)?;
            let (lo, hi) = bounds(&m, cfg.precision);
            checks.push(CheckRow {
                suite: "transfer",
                name: format!("b={b} max root modulus < 1"),
                passed: m.hi() < &kempner_core::Dyadic::ONE,
                lhs: format!("[{lo}, {hi}]"),
                rhs: "1".into(),
            });
            let lhs = Polynomial::from_integers(&[-1, 1])?.mul(&p);
            let mut want: Vec<i64> = vec![-(b as i64 - 1)];
            want.extend(std::iter::repeat_n(1, b as usize - 1));
            let rhs = Polynomial::from_integers(&want)?;
            checks.push(CheckRow {
                suite: "transfer",
                name: format!("b={b} (1-X)P(X) expansion"),
                passed: lhs == rhs,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let doc = VerifyDoc { passed: failed == 0, total: checks.len(), failed, checks };
    let body = render(cfg.format, &doc, &doc.checks, || {
        let mut s = String::new();
        for c in &doc.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("{tag} {} {}: {} = {}\n", c.suite, c.name, c.lhs, c.rhs));
        }
        s.push_str(&format!("{} of {} checks passed\n", doc.total - doc.failed, doc.total));
        s
    });
    Ok(Output { body, ok: failed == 0 })
}

#[derive(Serialize)]
struct RootRow {
    re_lo: String,
    re_hi: String,
    im_lo: String,
    im_hi: String,
    modulus_lo: String,
    modulus_hi: String,
}

#[derive(Serialize)]
struct TransferDoc {
    b: u64,
    polynomial: String,
    roots: Vec<RootRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_modulus_lo: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_modulus_hi: Option<String>,
    below_one: bool,
}

fn transfer(b: u64, cfg: &RunConfig) -> kempner_core::Result<Output> {
    let p = corollary_polynomial(b)?;
    let prec = cfg.precision;
    let (roots, max) = if p.degree() == 0 {
        (Vec::new(), None)
    } else {
        let discs = p.roots(prec)?;
        let rows = discs
            .iter()
            .map(|d| {
                let c = d.as_complex();
                let (re_lo, re_hi) = bounds(&c.re, prec);
                let (im_lo, im_hi) = bounds(&c.im, prec);
                let (modulus_lo, modulus_hi) = bounds(&d.modulus(), prec);
                RootRow { re_lo, re_hi, im_lo, im_hi, modulus_lo, modulus_hi }
            })
            .collect();
        (rows, Some(p.max_root_modulus(prec)?))
    };
    let below_one = max.as_ref().is_none_or(|m| m.hi() < &kempner_core::Dyadic::ONE);
    let (max_lo, max_hi) = match &max {
        Some(m) => {
            let (lo, hi) = bounds(m, prec);
            (Some(lo), Some(hi))
        }
        None => (None, None),
    };
    let doc = TransferDoc {
        b,
        polynomial: p.to_string(),
        roots,
        max_modulus_lo: max_lo,
        max_modulus_hi: max_hi,
        below_one,
    };
    let body = render(cfg.format, &doc, &doc.roots, || {
        let mut s = format!("P(X) = {}\n", doc.polynomial);
        let cells: Vec<Vec<String>> = doc
            .roots
            .iter()
            .map(|r| {
                vec![
                    format!("[{}, {}]", r.re_lo, r.re_hi),
                    format!("[{}, {}]", r.im_lo, r.im_hi),
                    format!("[{}, {}]", r.modulus_lo, r.modulus_hi),
                ]
            })
            .collect();
        if !cells.is_empty() {
            s.push_str(&text_table(&["re", "im", "|z|"], &cells));
        }
        if let (Some(lo), Some(hi)) = (&doc.max_modulus_lo, &doc.max_modulus_hi) {
            s.push_str(&format!("max |z| in [{lo}, {hi}]\n"));
        }
        s.push_str(if doc.below_one { "all roots inside the unit disc\n" } else { "a root may lie outside the open unit disc\n" });
        s
    });
    Ok(Output { body, ok: below_one })
}

