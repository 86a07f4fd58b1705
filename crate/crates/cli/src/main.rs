//! `mbalance` — certified balance constants of m-bonacci words.
//!
//! Subcommands reproduce the published tables (bounds grid, the m=4 sign and
//! summary tables), run brute-force window scans, print certified root data,
//! evaluate the analytic global bound, replay the known witness recipes,
//! and run the full invariant suite.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 precision cap.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use mbalance::balance::{
    brute_force_spreads, compose_witness, witness_recipe_v, witness_recipe_w,
    propagate_letter_bounds, riemann_lemma_checks, sample_factors, lift_letter_identity_check,
};
use mbalance::exactg::{
    analytic_tail_check, certify_c_a_bound, certify_c_a_bound_with, closed_head_sum,
    eval_interval, g_sequence, head_abs_sum, reduce, sign_of, tail_bound, BetaLinear, Sign,
};
use mbalance::interval::{from_decimal, to_decimal, Q};
use mbalance::quadrature::{a_enclosure, global_balance_bound, kappa};
use mbalance::spectral::{argument_window, beta_enclosure, conjugate_enclosures, lemma_x0_check};
use mbalance::words::{decompose_prefix, mbonacci_numbers, reconstruct_decomposition};
use mbalance::{CheckReport, Error};

const EXIT_CHECK_FAILURE: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_PRECISION: i32 = 3;

#[derive(Parser)]
#[command(
    name = "mbalance",
    version,
    about = "Certified balance constants of m-bonacci words"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Certified per-letter upper bounds c_a over a range of m (grid output).
    Bounds {
        /// Inclusive range of m, e.g. "2..12" or a single value "4".
        #[arg(long, default_value = "2..12")]
        m_range: String,
        /// Comma-separated letters to certify (default: all a < m).
        #[arg(long)]
        letters: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sign table (IC vectors and signs, k = 0..3m) plus the summary table.
    Table12 {
        #[arg(long, default_value_t = 4)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force window scan: per-length letter-count spreads and a rollup.
    Brute {
        #[arg(long, default_value_t = 2)]
        m: u32,
        /// Window lengths, e.g. "1..256" or "10,20,30".
        #[arg(long, default_value = "1..256")]
        lengths: String,
        /// Comma-separated letters to scan (default: all a < m).
        #[arg(long)]
        letters: Option<String>,
        /// Length of the fixed-point prefix scanned.
        #[arg(long, default_value_t = 100_000)]
        prefix_len: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified root enclosures with the appendix lemma checks.
    Roots {
        /// Inclusive range of m, e.g. "2..12" or a single value "3".
        #[arg(long, default_value = "2..12")]
        m_range: String,
        /// Enclosure tolerance (decimal), default 1e-20.
        #[arg(long, default_value = "0.00000000000000000001")]
        tol: String,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analytic global bound: A and kappa intervals, floor(kappa m) + 12.
    Global {
        #[arg(long)]
        m: u32,
        /// Also certify c_0 and report min with 2 c_0 + 3 (m <= 64 only).
        #[arg(long, default_value_t = true)]
        certified_min: bool,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay the known lower-bound witness recipes (m = 4 or 5).
    Witness {
        #[arg(long, default_value_t = 4)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full invariant suite at desk scale.
    VerifyAll {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match run(cli.command) {
        Ok(Outcome { text, failures, out }) => {
            if let Err(e) = emit(&text, out.as_deref()) {
                eprintln!("error: {e}");
                EXIT_USAGE
            } else if failures > 0 {
                eprintln!("{failures} check(s) failed");
                EXIT_CHECK_FAILURE
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::PrecisionCap { .. }
                | Error::TruncationCap { .. }
                | Error::SectorNoConvergence { .. } => EXIT_PRECISION,
                _ => EXIT_USAGE,
            }
        }
    };
    // timing goes to stderr only; result bytes stay deterministic
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    std::process::exit(code);
}

struct Outcome {
    text: String,
    failures: usize,
    out: Option<PathBuf>,
}

fn emit(text: &str, out: Option<&std::path::Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())
        }
    }
}

fn run(cmd: Command) -> mbalance::Result<Outcome> {
    match cmd {
        Command::Bounds { m_range, letters, format, out } => {
            let (lo, hi) = parse_range(&m_range)?;
            if lo < 2 || hi > 64 {
                return Err(Error::Config("m range must lie within 2..=64".into()));
            }
            let letters = letters.map(|s| parse_list(&s)).transpose()?;
            let (text, failures) = cmd_bounds(lo, hi, letters.as_deref(), format)?;
            Ok(Outcome { text, failures, out })
        }
        Command::Table12 { m, format, out } => {
            let (text, failures) = cmd_table12(m, format)?;
            Ok(Outcome { text, failures, out })
        }
        Command::Brute { m, lengths, letters, prefix_len, format, out } => {
            let lengths = parse_lengths(&lengths)?;
            let letters = match letters {
                Some(s) => parse_list(&s)?,
                None => (0..m).collect(),
            };
            let text = cmd_brute(m, &letters, &lengths, prefix_len, format)?;
            Ok(Outcome { text, failures: 0, out })
        }
        Command::Roots { m_range, tol, format, out } => {
            let (lo, hi) = parse_range(&m_range)?;
            let tol = from_decimal(&tol)
                .filter(|t| t.is_positive())
                .ok_or_else(|| Error::Config("tol must be a positive decimal".into()))?;
            let (text, failures) = cmd_roots(lo, hi, &tol, format)?;
            Ok(Outcome { text, failures, out })
        }
        Command::Global { m, certified_min, format, out } => {
            let (text, failures) = cmd_global(m, certified_min, format)?;
            Ok(Outcome { text, failures, out })
        }
        Command::Witness { m, format, out } => {
            let (text, failures) = cmd_witness(m, format)?;
            Ok(Outcome { text, failures, out })
        }
        Command::VerifyAll { out } => {
            let (text, failures) = cmd_verify_all()?;
            Ok(Outcome { text, failures, out })
        }
    }
}

// ---------------------------------------------------------------------------
// argument parsing helpers

fn parse_range(s: &str) -> mbalance::Result<(u32, u32)> {
    let bad = || Error::Config(format!("cannot parse range {s:?} (expected \"lo..hi\")"));
    if let Some((a, b)) = s.split_once("..") {
        let lo: u32 = a.trim().parse().map_err(|_| bad())?;
        let hi: u32 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(Error::Config(format!("empty range {s:?}")));
        }
        Ok((lo, hi))
    } else {
        let v: u32 = s.trim().parse().map_err(|_| bad())?;
        Ok((v, v))
    }
}

fn parse_list(s: &str) -> mbalance::Result<Vec<u32>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Config(format!("cannot parse letter {p:?}")))
        })
        .collect()
}

fn parse_lengths(s: &str) -> mbalance::Result<Vec<usize>> {
    if let Some((a, b)) = s.split_once("..") {
        let bad = || Error::Config(format!("cannot parse lengths {s:?}"));
        let lo: usize = a.trim().parse().map_err(|_| bad())?;
        let hi: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if lo == 0 || lo > hi {
            return Err(Error::Config(format!("empty or zero lengths {s:?}")));
        }
        Ok((lo..=hi).collect())
    } else {
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("cannot parse length {p:?}")))
                    .and_then(|l| {
                        if l == 0 {
                            Err(Error::Config("length 0 is not a window".into()))
                        } else {
                            Ok(l)
                        }
                    })
            })
            .collect()
    }
}

fn symbolic(v: &BetaLinear) -> String {
    format!("{} + {}/beta^{}", v.p, v.q, v.s)
}

fn decimal4(q: &Q) -> String {
    to_decimal(q, 4)
}

// ---------------------------------------------------------------------------
// bounds

#[derive(Clone)]
enum Cell {
    Bound(BigInt),
    Excluded,
    Failed,
}

fn cmd_bounds(
    lo: u32,
    hi: u32,
    letters: Option<&[u32]>,
    format: Format,
) -> mbalance::Result<(String, usize)> {
    let columns: Vec<u32> = match letters {
        Some(ls) => {
            let mut v = ls.to_vec();
            v.sort_unstable();
            v.dedup();
            v
        }
        None => (0..hi).collect(),
    };
    if columns.is_empty() {
        return Err(Error::Config("no letters requested".into()));
    }

    let mut grid: Vec<(u32, Vec<Cell>)> = Vec::new();
    let mut failures = 0usize;
    let tol = Q::new(BigInt::one(), BigInt::from(10u32).pow(20));
    for m in lo..=hi {
        // the spectral data is shared by every letter of the same m
        let set = conjugate_enclosures(m, &tol)?;
        let mut beta = set.beta.clone();
        let mut row = Vec::with_capacity(columns.len());
        for &a in &columns {
            if a >= m {
                row.push(Cell::Excluded);
                continue;
            }
            match certify_c_a_bound_with(m, a, &set, &mut beta) {
                Ok(c) => row.push(Cell::Bound(c.bound)),
                Err(Error::TruncationCap { .. }) | Err(Error::PrecisionCap { .. }) => {
                    failures += 1;
                    row.push(Cell::Failed);
                }
                Err(e) => return Err(e),
            }
        }
        grid.push((m, row));
    }

    let text = match format {
        Format::Md => {
            let mut s = String::new();
            s.push_str("| m \\ a |");
            for a in &columns {
                s.push_str(&format!(" {a} |"));
            }
            s.push('\n');
            s.push_str("|---|");
            for _ in &columns {
                s.push_str("---|");
            }
            s.push('\n');
            for (m, row) in &grid {
                s.push_str(&format!("| {m} |"));
                for cell in row {
                    let rendered = match cell {
                        Cell::Bound(b) => b.to_string(),
                        Cell::Excluded => "\u{d7}".to_string(),
                        Cell::Failed => "!".to_string(),
                    };
                    s.push_str(&format!(" {rendered} |"));
                }
                s.push('\n');
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("m,a,bound\n");
            for (m, row) in &grid {
                for (&a, cell) in columns.iter().zip(row) {
                    match cell {
                        Cell::Bound(b) => s.push_str(&format!("{m},{a},{b}\n")),
                        Cell::Excluded => {}
                        Cell::Failed => s.push_str(&format!("{m},{a},!\n")),
                    }
                }
            }
            s
        }
        Format::Json => {
            let mut cells = Vec::new();
            for (m, row) in &grid {
                for (&a, cell) in columns.iter().zip(row) {
                    let value = match cell {
                        Cell::Bound(b) => serde_json::json!(b.to_string()),
                        Cell::Excluded => continue,
                        Cell::Failed => serde_json::json!("!"),
                    };
                    cells.push(serde_json::json!({ "m": m, "a": a, "bound": value }));
                }
            }
            pretty(&serde_json::json!({ "command": "bounds", "cells": cells }))
        }
    };
    Ok((text, failures))
}

// ---------------------------------------------------------------------------
// table12

fn cmd_table12(m: u32, format: Format) -> mbalance::Result<(String, usize)> {
    let width = from_decimal("0.000000000000000000000000000001").unwrap();
    let tol = Q::new(BigInt::one(), BigInt::from(10u32).pow(20));
    let set = conjugate_enclosures(m, &tol)?;
    let mut beta = beta_enclosure(m, &width)?;

    let n = 3 * m as usize + 1; // k = 0..=3m
    let gs = g_sequence(m, 0, n - 1)?;
    // per-k signs for every letter, and the signed IC accumulation per letter
    let mut signs: Vec<Vec<Sign>> = Vec::with_capacity(n);
    let mut sum_ic: Vec<Vec<BigInt>> = (0..m).map(|_| vec![BigInt::from(0); m as usize]).collect();
    for k in 0..n {
        let mut row = Vec::with_capacity(m as usize);
        for a in 0..m {
            let v = reduce(&g_sequence(m, a, k)?[k]);
            let sg = sign_of(&v, &mut beta)?;
            for (acc, c) in sum_ic[a as usize].iter_mut().zip(&gs[k].ic) {
                match sg {
                    Sign::Plus => *acc += c,
                    Sign::Minus => *acc -= c,
                }
            }
            row.push(sg);
        }
        signs.push(row);
    }

    struct Summary {
        a: u32,
        ic: Vec<BigInt>,
        head: BetaLinear,
        numeric: Q,
        tail: Q,
        total: Q,
        bound: BigInt,
    }
    let mut summaries = Vec::with_capacity(m as usize);
    let mut failures = 0usize;
    for a in 0..m {
        let head = head_abs_sum(m, a, n, &mut beta)?;
        let tail = tail_bound(m, a, n, &set)?;
        let numeric = eval_interval(&head, &beta).mid();
        let total = &numeric + &tail.value;
        let bound = match certify_c_a_bound(m, a) {
            Ok(c) => c.bound,
            Err(Error::TruncationCap { .. }) | Err(Error::PrecisionCap { .. }) => {
                failures += 1;
                BigInt::from(-1)
            }
            Err(e) => return Err(e),
        };
        summaries.push(Summary {
            a,
            ic: sum_ic[a as usize].clone(),
            head,
            numeric,
            tail: tail.value,
            total,
            bound,
        });
    }

    let ic_str = |ic: &[BigInt]| -> String {
        let parts: Vec<String> = ic.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(","))
    };

    let text = match format {
        Format::Md => {
            let mut s = String::new();
            s.push_str(&format!("### signs of g(a,k), m = {m}\n\n"));
            s.push_str("| k | IC |");
            for a in 0..m {
                s.push_str(&format!(" a={a} |"));
            }
            s.push('\n');
            s.push_str("|---|---|");
            for _ in 0..m {
                s.push_str("---|");
            }
            s.push('\n');
            for k in 0..n {
                s.push_str(&format!("| {k} | {} |", ic_str(&gs[k].ic)));
                for a in 0..m as usize {
                    s.push_str(&format!(" {} |", signs[k][a].as_char()));
                }
                s.push('\n');
            }
            s.push_str(&format!("\n### head sums and bounds, n = {n}\n\n"));
            s.push_str("| a | IC of sum | symbolic | numeric | tail | total | bound |\n");
            s.push_str("|---|---|---|---|---|---|---|\n");
            for r in &summaries {
                let bound = if r.bound < BigInt::from(0) {
                    "!".to_string()
                } else {
                    r.bound.to_string()
                };
                s.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} |\n",
                    r.a,
                    ic_str(&r.ic),
                    symbolic(&r.head),
                    decimal4(&r.numeric),
                    decimal4(&r.tail),
                    decimal4(&r.total),
                    bound,
                ));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("section,k_or_a,ic,signs_or_symbolic,numeric,tail,total,bound\n");
            for k in 0..n {
                let sg: String = (0..m as usize).map(|a| signs[k][a].as_char()).collect();
                s.push_str(&format!("sign,{k},\"{}\",{sg},,,,\n", ic_str(&gs[k].ic)));
            }
            for r in &summaries {
                let bound = if r.bound < BigInt::from(0) {
                    "!".to_string()
                } else {
                    r.bound.to_string()
                };
                s.push_str(&format!(
                    "summary,{},\"{}\",\"{}\",{},{},{},{}\n",
                    r.a,
                    ic_str(&r.ic),
                    symbolic(&r.head),
                    decimal4(&r.numeric),
                    decimal4(&r.tail),
                    decimal4(&r.total),
                    bound,
                ));
            }
            s
        }
        Format::Json => {
            let sign_rows: Vec<_> = (0..n)
                .map(|k| {
                    serde_json::json!({
                        "k": k,
                        "ic": gs[k].ic.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "signs": (0..m as usize)
                            .map(|a| signs[k][a].as_char().to_string())
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            let summary_rows: Vec<_> = summaries
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "a": r.a,
                        "ic": r.ic.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "symbolic": {
                            "p": r.head.p.to_string(),
                            "q": r.head.q.to_string(),
                            "s": r.head.s,
                        },
                        "numeric": decimal4(&r.numeric),
                        "tail": decimal4(&r.tail),
                        "total": decimal4(&r.total),
                        "bound": if r.bound < BigInt::from(0) {
                            serde_json::json!("!")
                        } else {
                            serde_json::json!(r.bound.to_string())
                        },
                    })
                })
                .collect();
            pretty(&serde_json::json!({
                "command": "table12",
                "m": m,
                "n": n,
                "signs": sign_rows,
                "summary": summary_rows,
            }))
        }
    };
    Ok((text, failures))
}

// ---------------------------------------------------------------------------
// brute

fn cmd_brute(
    m: u32,
    letters: &[u32],
    lengths: &[usize],
    prefix_len: usize,
    format: Format,
) -> mbalance::Result<String> {
    let table = brute_force_spreads(m, letters, lengths, prefix_len)?;
    // rollup: max spread per letter, order-stable by letter
    let mut rollup: BTreeMap<u32, u32> = BTreeMap::new();
    for row in &table.rows {
        let e = rollup.entry(row.letter).or_insert(0);
        *e = (*e).max(row.spread());
    }
    let text = match format {
        Format::Csv => {
            let mut s = table.to_csv();
            for (letter, spread) in &rollup {
                s.push_str(&format!("# rollup,letter={letter},max_spread={spread}\n"));
            }
            s.push_str(&format!("# rollup,overall,max_spread={}\n", table.max_spread()));
            s
        }
        Format::Md => {
            let mut s = String::new();
            s.push_str(&format!("### window spreads, m = {m}, N = {prefix_len}\n\n"));
            s.push_str("| L | letter | min | max | spread |\n|---|---|---|---|---|\n");
            for row in &table.rows {
                s.push_str(&format!(
                    "| {} | {} | {} | {} | {} |\n",
                    row.l,
                    row.letter,
                    row.min,
                    row.max,
                    row.spread()
                ));
            }
            s.push_str("\n### rollup\n\n| letter | max spread |\n|---|---|\n");
            for (letter, spread) in &rollup {
                s.push_str(&format!("| {letter} | {spread} |\n"));
            }
            s.push_str(&format!("| all | {} |\n", table.max_spread()));
            s
        }
        Format::Json => {
            let rows: Vec<_> = table
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "l": r.l,
                        "letter": r.letter,
                        "min": r.min,
                        "max": r.max,
                        "spread": r.spread(),
                        "argmax": r.argmax,
                        "argmin": r.argmin,
                    })
                })
                .collect();
            let rollup: Vec<_> = rollup
                .iter()
                .map(|(letter, spread)| serde_json::json!({ "letter": letter, "max_spread": spread }))
                .collect();
            pretty(&serde_json::json!({
                "command": "brute",
                "m": m,
                "prefix_len": prefix_len,
                "rows": rows,
                "rollup": rollup,
                "max_spread": table.max_spread(),
            }))
        }
    };
    Ok(text)
}

// ---------------------------------------------------------------------------
// roots

fn cmd_roots(lo: u32, hi: u32, tol: &Q, format: Format) -> mbalance::Result<(String, usize)> {
    struct RootRow {
        m: u32,
        j: u32,
        modulus: (String, String),
        gamma: (String, String),
        in_window: bool,
    }
    struct MReport {
        m: u32,
        x0_pass: bool,
        x0_detail: String,
        product_pass: bool,
        product: (String, String),
        rows: Vec<RootRow>,
    }

    let mut reports = Vec::new();
    let mut failures = 0usize;
    for m in lo..=hi {
        let x0 = lemma_x0_check(m)?;
        let set = conjugate_enclosures(m, tol)?;
        let product = set.moduli_product();
        let one = Q::one();
        let eps = Q::new(BigInt::one(), BigInt::from(10u32).pow(6));
        let product_pass = (&product.lo - &one).abs() < eps && (&product.hi - &one).abs() < eps;
        let mut rows = Vec::new();
        let pi = mbalance::transcend::pi(96);
        for r in &set.roots {
            // window endpoints are rational multiples of pi; inner radian hull
            let (wlo, whi) = argument_window(m, r.j);
            let in_window = r.gamma.lo > &wlo * &pi.hi && r.gamma.hi < &whi * &pi.lo;
            if !in_window {
                failures += 1;
            }
            rows.push(RootRow {
                m,
                j: r.j,
                modulus: (to_decimal(&r.modulus.lo, 12), to_decimal(&r.modulus.hi, 12)),
                gamma: (to_decimal(&r.gamma.lo, 12), to_decimal(&r.gamma.hi, 12)),
                in_window,
            });
        }
        if !x0.pass {
            failures += 1;
        }
        if !product_pass {
            failures += 1;
        }
        reports.push(MReport {
            m,
            x0_pass: x0.pass,
            x0_detail: x0.detail,
            product_pass,
            product: (to_decimal(&product.lo, 12), to_decimal(&product.hi, 12)),
            rows,
        });
    }

    let text = match format {
        Format::Md => {
            let mut s = String::new();
            s.push_str("| m | j | modulus lo | modulus hi | gamma lo | gamma hi | window |\n");
            s.push_str("|---|---|---|---|---|---|---|\n");
            for rep in &reports {
                for r in &rep.rows {
                    s.push_str(&format!(
                        "| {} | {} | {} | {} | {} | {} | {} |\n",
                        r.m,
                        r.j,
                        r.modulus.0,
                        r.modulus.1,
                        r.gamma.0,
                        r.gamma.1,
                        if r.in_window { "ok" } else { "FAIL" }
                    ));
                }
            }
            s.push_str("\n| m | x0 sandwich | moduli product |\n|---|---|---|\n");
            for rep in &reports {
                s.push_str(&format!(
                    "| {} | {} | [{}, {}] {} |\n",
                    rep.m,
                    if rep.x0_pass { "ok" } else { "FAIL" },
                    rep.product.0,
                    rep.product.1,
                    if rep.product_pass { "ok" } else { "FAIL" }
                ));
            }
            s
        }
        Format::Csv => {
            let mut s =
                String::from("m,j,modulus_lo,modulus_hi,gamma_lo,gamma_hi,in_window\n");
            for rep in &reports {
                for r in &rep.rows {
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        r.m, r.j, r.modulus.0, r.modulus.1, r.gamma.0, r.gamma.1, r.in_window
                    ));
                }
            }
            s
        }
        Format::Json => {
            let ms: Vec<_> = reports
                .iter()
                .map(|rep| {
                    serde_json::json!({
                        "m": rep.m,
                        "x0_sandwich": { "pass": rep.x0_pass, "detail": rep.x0_detail },
                        "moduli_product": {
                            "pass": rep.product_pass,
                            "interval": [rep.product.0, rep.product.1],
                        },
                        "roots": rep.rows.iter().map(|r| serde_json::json!({
                            "j": r.j,
                            "modulus": [r.modulus.0, r.modulus.1],
                            "gamma": [r.gamma.0, r.gamma.1],
                            "in_window": r.in_window,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(&serde_json::json!({ "command": "roots", "reports": ms }))
        }
    };
    Ok((text, failures))
}

// ---------------------------------------------------------------------------
// global

fn cmd_global(m: u32, certified_min: bool, format: Format) -> mbalance::Result<(String, usize)> {
    let gb = global_balance_bound(m)?;
    let a = a_enclosure()?;
    let kap = kappa()?;
    let analytic = gb.bound.clone();

    // propagation route: 2 c_0 + 3 from the certified c_0, when applicable
    let mut certified: Option<(BigInt, u64)> = None;
    if certified_min && m <= 64 {
        let c0 = certify_c_a_bound(m, 0)?;
        let c0u = c0
            .bound
            .to_u64()
            .ok_or_else(|| Error::precision("c_0 does not fit in u64"))?;
        if let Some(p) = propagate_letter_bounds(m, c0u)? {
            certified = Some((BigInt::from(c0u), p.global));
        }
    }
    let reported = match &certified {
        Some((_, g)) => analytic.clone().min(BigInt::from(*g)),
        None => analytic.clone(),
    };

    let a_lo = to_decimal(&a.lo, 12);
    let a_hi = to_decimal(&a.hi, 12);
    let k_lo = to_decimal(&kap.lo, 12);
    let k_hi = to_decimal(&kap.hi, 12);
    let chain_lo = to_decimal(&gb.audit_chain.lo, 12);
    let chain_hi = to_decimal(&gb.audit_chain.hi, 12);

    let text = match format {
        Format::Md | Format::Csv => {
            let mut s = String::new();
            s.push_str(&format!("m,{m}\n"));
            s.push_str(&format!("A_lo,{a_lo}\nA_hi,{a_hi}\n"));
            s.push_str(&format!("kappa_lo,{k_lo}\nkappa_hi,{k_hi}\n"));
            s.push_str(&format!("analytic_bound,{analytic}\n"));
            s.push_str(&format!("audit_chain_lo,{chain_lo}\naudit_chain_hi,{chain_hi}\n"));
            if let Some((c0, g)) = &certified {
                s.push_str(&format!("c0,{c0}\npropagated_bound,{g}\n"));
            }
            s.push_str(&format!("reported_bound,{reported}\n"));
            s
        }
        Format::Json => pretty(&serde_json::json!({
            "command": "global",
            "m": m,
            "a_interval": [a_lo, a_hi],
            "kappa_interval": [k_lo, k_hi],
            "analytic_bound": analytic.to_string(),
            "audit_chain": [chain_lo, chain_hi],
            "certified": certified.as_ref().map(|(c0, g)| serde_json::json!({
                "c0": c0.to_string(),
                "propagated_bound": g,
            })),
            "reported_bound": reported.to_string(),
        })),
    };
    Ok((text, 0))
}

// ---------------------------------------------------------------------------
// witness

fn cmd_witness(m: u32, format: Format) -> mbalance::Result<(String, usize)> {
    let (v_word, v_rep) = compose_witness(&witness_recipe_v(m)?)?;
    let (w_word, w_rep) = compose_witness(&witness_recipe_w(m)?)?;
    let diff = v_word.count(1) as i64 - w_word.count(1) as i64;
    let mut failures = 0usize;
    for rep in [&v_rep, &w_rep] {
        if !rep.quotient_ok || rep.factor_at.is_none() {
            failures += 1;
        }
    }

    let rep_json = |name: &str, rep: &mbalance::balance::WitnessReport| {
        serde_json::json!({
            "name": name,
            "m": rep.m,
            "length": rep.length,
            "counts": rep.counts,
            "quotient_ok": rep.quotient_ok,
            "factor_at": rep.factor_at,
            "scanned_prefix": rep.scanned_prefix,
        })
    };
    let text = match format {
        Format::Json => pretty(&serde_json::json!({
            "command": "witness",
            "m": m,
            "v": rep_json("v", &v_rep),
            "w": rep_json("w", &w_rep),
            "letter1_difference": diff,
        })),
        Format::Md | Format::Csv => {
            let mut s = String::from("name,length,counts,quotient_ok,factor_at\n");
            for (name, rep) in [("v", &v_rep), ("w", &w_rep)] {
                let counts: Vec<String> = rep.counts.iter().map(|c| c.to_string()).collect();
                s.push_str(&format!(
                    "{name},{},\"{}\",{},{}\n",
                    rep.length,
                    counts.join(","),
                    rep.quotient_ok,
                    rep.factor_at.map_or("-".to_string(), |p| p.to_string()),
                ));
            }
            s.push_str(&format!("# letter1_difference,{diff}\n"));
            s
        }
    };
    Ok((text, failures))
}

// ---------------------------------------------------------------------------
// verify-all

fn cmd_verify_all() -> mbalance::Result<(String, usize)> {
    let mut checks: Vec<CheckReport> = Vec::new();

    // words: recurrence seed and decomposition round-trips
    {
        let t = mbonacci_numbers(4, 20)?;
        let mut ok = true;
        for n in 4..=20 {
            let sum: BigInt = (n - 4..n).map(|i| t.get(i).clone()).sum();
            if *t.get(n) != sum {
                ok = false;
            }
        }
        checks.push(if ok {
            CheckReport::pass("t_recurrence m=4", "m-term recurrence holds up to index 20")
        } else {
            CheckReport::fail("t_recurrence m=4", "recurrence violated")
        });

        let mut ok = true;
        for n in [1u64, 7, 100, 3163] {
            let d = decompose_prefix(3, n)?;
            let w = reconstruct_decomposition(3, &d)?;
            if w.len() as u64 != n {
                ok = false;
            }
        }
        checks.push(if ok {
            CheckReport::pass("decompose_roundtrip m=3", "4 prefix lengths reconstruct exactly")
        } else {
            CheckReport::fail("decompose_roundtrip m=3", "length mismatch after reconstruction")
        });
    }

    // spectral: x0 sandwich and appendix lemma flags at desk scale
    let tol = Q::new(BigInt::one(), BigInt::from(10u32).pow(20));
    for m in [2u32, 4, 8, 12] {
        checks.push(lemma_x0_check(m)?);
    }
    {
        let set = conjugate_enclosures(4, &tol)?;
        let product = set.moduli_product();
        let one = Q::one();
        let eps = Q::new(BigInt::one(), BigInt::from(10u32).pow(6));
        let pass = (&product.lo - &one).abs() < eps && (&product.hi - &one).abs() < eps;
        checks.push(if pass {
            CheckReport::pass("moduli_product m=4", "product of all root moduli within 1e-6 of 1")
        } else {
            CheckReport::fail("moduli_product m=4", "product drifted from 1")
        });
        let mut ok = true;
        let pi = mbalance::transcend::pi(96);
        for r in &set.roots {
            let (wlo, whi) = argument_window(4, r.j);
            if !(r.gamma.lo > &wlo * &pi.hi && r.gamma.hi < &whi * &pi.lo) {
                ok = false;
            }
        }
        checks.push(if ok {
            CheckReport::pass("argument_windows m=4", "all roots inside their sector windows")
        } else {
            CheckReport::fail("argument_windows m=4", "root escaped its window")
        });
        checks.extend(riemann_lemma_checks(&set)?);
        checks.push(analytic_tail_check(4, &set)?);
    }

    // exactg: certified bounds 2,3,3,3 and the closed head sum
    {
        let expected = [2i64, 3, 3, 3];
        let mut ok = true;
        for a in 0..4 {
            let c = certify_c_a_bound(4, a)?;
            if c.bound != BigInt::from(expected[a as usize]) {
                ok = false;
            }
        }
        checks.push(if ok {
            CheckReport::pass("certified_bounds m=4", "c_a bounds are 2,3,3,3")
        } else {
            CheckReport::fail("certified_bounds m=4", "bound mismatch")
        });
        let width = from_decimal("0.000000000000000000000000000001").unwrap();
        let mut beta = beta_enclosure(4, &width)?;
        let (_, report) = closed_head_sum(4, &mut beta)?;
        checks.push(report);
    }

    // quadrature: constants and the analytic theorem value
    {
        let a = a_enclosure()?;
        let pass = a.lo > from_decimal("0.9").unwrap() && a.hi < from_decimal("0.91").unwrap();
        checks.push(if pass {
            CheckReport::pass("a_enclosure", "A inside (0.9, 0.91)")
        } else {
            CheckReport::fail("a_enclosure", "A escaped (0.9, 0.91)")
        });
        let k = kappa()?;
        let pass = k.lo > from_decimal("0.57").unwrap() && k.hi < from_decimal("0.59").unwrap();
        checks.push(if pass {
            CheckReport::pass("kappa_enclosure", "kappa inside (0.57, 0.59)")
        } else {
            CheckReport::fail("kappa_enclosure", "kappa escaped (0.57, 0.59)")
        });
        let gb = global_balance_bound(29)?;
        checks.push(if gb.bound == BigInt::from(28) {
            CheckReport::pass("global_bound m=29", "floor(kappa m) + 12 = 28 <= m - 1")
        } else {
            CheckReport::fail("global_bound m=29", format!("got {}", gb.bound))
        });
    }

    // balance: brute-force sanity, lift identities, witness replay
    {
        let lengths: Vec<usize> = (1..=64).collect();
        let table = brute_force_spreads(2, &[0, 1], &lengths, 20_000)?;
        checks.push(if table.max_spread() == 1 {
            CheckReport::pass("fibonacci_spread", "spread 1 for all L <= 64")
        } else {
            CheckReport::fail("fibonacci_spread", format!("spread {}", table.max_spread()))
        });
        let samples = sample_factors(3, 12, 64)?;
        checks.push(lift_letter_identity_check(3, &samples)?);
        let (v_word, v_rep) = compose_witness(&witness_recipe_v(4)?)?;
        let (w_word, w_rep) = compose_witness(&witness_recipe_w(4)?)?;
        let pass = v_rep.quotient_ok
            && w_rep.quotient_ok
            && v_rep.factor_at.is_some()
            && w_rep.factor_at.is_some()
            && v_word.len() == 3307
            && w_word.len() == 3303
            && v_word.count(1) as i64 - w_word.count(1) as i64 == 3;
        checks.push(if pass {
            CheckReport::pass("witness_replay m=4", "lengths 3307/3303, letter-1 difference 3")
        } else {
            CheckReport::fail("witness_replay m=4", "replay mismatch")
        });
    }

    let mut s = String::new();
    let mut failures = 0usize;
    for c in &checks {
        if !c.pass {
            failures += 1;
        }
        s.push_str(&format!(
            "{} {} - {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    s.push_str(&format!(
        "{} checks, {} failed\n",
        checks.len(),
        failures
    ));
    Ok((s, failures))
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
