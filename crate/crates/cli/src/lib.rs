//! Command-line front end: Stirling tables, the `Q_n`/`P_n` polynomials,
//! the generating series, identity sweeps and the numeric single sum.
//!
//! Exit codes: `0` computed or verified, `1` verification failure or
//! non-convergence, `2` usage or precondition error.

use std::io::{self, Write};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::Serialize;
use serde_json::json;

use stirconv_core::combinatorics::{lah, StirlingKind, StirlingTable};
use stirconv_core::identities::{sample_check, verify_range_with_jobs};
use stirconv_core::sequences::{
    p_double_sum, q_double_sum, q_exact_at, q_from_series, q_single_sum_numeric, q_triple_sum,
};
use stirconv_core::series::{q_generating_series, DEFAULT_ORDER};
use stirconv_core::{Error, IdentityId, MultiPoly, Rational, SequenceRoute, Sequences, Var};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "stirconv",
    version,
    about = "Exact Stirling-number convolution identities"
)]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Render λ as `L` in polynomial text.
    #[arg(long, global = true)]
    pub ascii: bool,

    /// Worker threads for `verify` sweeps.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    First,
    Second,
    Lah,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QRoute {
    Recurrence,
    DoubleSum,
    TripleSum,
    Series,
}

impl From<QRoute> for SequenceRoute {
    fn from(r: QRoute) -> Self {
        match r {
            QRoute::Recurrence => SequenceRoute::Recurrence,
            QRoute::DoubleSum => SequenceRoute::DoubleSum,
            QRoute::TripleSum => SequenceRoute::TripleSum,
            QRoute::Series => SequenceRoute::Series,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PRoute {
    Recurrence,
    DoubleSum,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a Stirling or Lah triangle.
    Table {
        #[arg(long, value_enum)]
        kind: TableKind,
        #[arg(long)]
        n_max: usize,
    },
    /// Print Q_n(x, y, λ).
    Qpoly {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = QRoute::Recurrence)]
        route: QRoute,
    },
    /// Print P_n(x, z), n >= 1.
    Ppoly {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value_t = PRoute::Recurrence)]
        route: PRoute,
    },
    /// Print the coefficients of the generating series up to τ^order.
    Series {
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Verify an identity over 1 <= m <= n <= n_max.
    Verify {
        #[arg(long, value_parser = parse_identity)]
        identity: IdentityId,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        /// Also compare both sides at this many random rational points per pair.
        #[arg(long, default_value_t = 0)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate the infinite single-sum formula numerically.
    EvalSingleSum {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        x: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        y: Rational,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
        lambda: Rational,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_terms: usize,
    },
    /// Time each Q_n route for n = 0..=n_max.
    Bench {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
}

fn parse_identity(s: &str) -> Result<IdentityId, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = IdentityId::ALL.iter().map(|i| i.name()).collect();
        format!(
            "unknown identity {s:?}; expected one of {}",
            names.join(", ")
        )
    })
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Runs a parsed command, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let ctx = Ctx {
        format: cli.format,
        ascii: cli.ascii,
    };
    match &cli.command {
        Command::Table { kind, n_max } => cmd_table(&ctx, *kind, *n_max, out),
        Command::Qpoly { n, route } => {
            let p = Sequences::new().q(*n, (*route).into());
            let route = SequenceRoute::from(*route);
            emit_poly(&ctx, out, &p, json!({"n": n, "route": route.name()}))
        }
        Command::Ppoly { n, route } => {
            let n = *n as usize;
            let p = match route {
                PRoute::Recurrence => Sequences::new().p_recurrence(n),
                PRoute::DoubleSum => p_double_sum(n),
            };
            match p {
                Ok(p) => {
                    let name = match route {
                        PRoute::Recurrence => "recurrence",
                        PRoute::DoubleSum => "double-sum",
                    };
                    emit_poly(&ctx, out, &p, json!({"n": n, "route": name}))
                }
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    Ok(EXIT_USAGE)
                }
            }
        }
        Command::Series { order } => cmd_series(&ctx, *order, out),
        Command::Verify {
            identity,
            n_max,
            sample,
            seed,
        } => cmd_verify(
            &ctx,
            *identity,
            *n_max as usize,
            cli.jobs as usize,
            *sample,
            *seed,
            out,
            err,
        ),
        Command::EvalSingleSum {
            n,
            x,
            y,
            lambda,
            tol,
            max_terms,
        } => cmd_eval_single_sum(&ctx, *n, x, y, lambda, *tol, *max_terms, out, err),
        Command::Bench { n_max } => cmd_bench(&ctx, *n_max, out),
    }
}

struct Ctx {
    format: OutputFormat,
    ascii: bool,
}

impl Ctx {
    fn text(&self, p: &MultiPoly) -> String {
        p.to_text(self.ascii)
    }
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}

const TERM_HEADER: &str = "coefficient,x,y,lambda,z";

fn term_rows(p: &MultiPoly) -> Vec<String> {
    p.terms()
        .map(|(m, c)| {
            let exps: Vec<String> = Var::ALL
                .iter()
                .map(|v| m.exponent(*v).to_string())
                .collect();
            format!("{c},{}", exps.join(","))
        })
        .collect()
}

fn emit_poly(
    ctx: &Ctx,
    out: &mut dyn Write,
    p: &MultiPoly,
    mut meta: serde_json::Value,
) -> io::Result<i32> {
    match ctx.format {
        OutputFormat::Text => writeln!(out, "{}", ctx.text(p))?,
        OutputFormat::Json => {
            meta["polynomial"] = json!(ctx.text(p));
            write_json(out, &meta)?;
        }
        OutputFormat::Csv => {
            writeln!(out, "{TERM_HEADER}")?;
            for row in term_rows(p) {
                writeln!(out, "{row}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_table(ctx: &Ctx, kind: TableKind, n_max: usize, out: &mut dyn Write) -> io::Result<i32> {
    let rows: Vec<(usize, Vec<String>)> = match kind {
        TableKind::First | TableKind::Second => {
            let table = StirlingTable::with_rows(
                if kind == TableKind::First {
                    StirlingKind::FirstUnsigned
                } else {
                    StirlingKind::Second
                },
                n_max,
            );
            (0..=n_max)
                .map(|n| (n, table.row(n).iter().map(ToString::to_string).collect()))
                .collect()
        }
        // Lah numbers start at m = 1, so row 0 is empty and omitted.
        TableKind::Lah => (1..=n_max)
            .map(|n| {
                let row = (1..=n)
                    .map(|m| lah(n as i64, m as i64).expect("1 <= m <= n").to_string())
                    .collect();
                (n, row)
            })
            .collect(),
    };
    let kind_name = match kind {
        TableKind::First => "first",
        TableKind::Second => "second",
        TableKind::Lah => "lah",
    };
    match ctx.format {
        OutputFormat::Text => {
            for (_, row) in &rows {
                writeln!(out, "{}", row.join(" "))?;
            }
        }
        OutputFormat::Csv => {
            for (_, row) in &rows {
                writeln!(out, "{}", row.join(","))?;
            }
        }
        OutputFormat::Json => {
            let first_index = if kind == TableKind::Lah { 1 } else { 0 };
            let rows: Vec<_> = rows
                .into_iter()
                .map(|(n, values)| json!({"n": n, "first_index": first_index, "values": values}))
                .collect();
            write_json(
                out,
                &json!({"kind": kind_name, "n_max": n_max, "rows": rows}),
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_series(ctx: &Ctx, order: usize, out: &mut dyn Write) -> io::Result<i32> {
    let series = q_generating_series(order);
    match ctx.format {
        OutputFormat::Text => {
            for c in series.coeffs() {
                writeln!(out, "{}", ctx.text(c))?;
            }
        }
        OutputFormat::Json => {
            let coeffs: Vec<String> = series.coeffs().iter().map(|c| ctx.text(c)).collect();
            write_json(out, &json!({"order": order, "coefficients": coeffs}))?;
        }
        OutputFormat::Csv => {
            writeln!(out, "n,{TERM_HEADER}")?;
            for (n, c) in series.coeffs().iter().enumerate() {
                for row in term_rows(c) {
                    writeln!(out, "{n},{row}")?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    ctx: &Ctx,
    identity: IdentityId,
    n_max: usize,
    jobs: usize,
    sample: usize,
    seed: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let report = match verify_range_with_jobs(identity, n_max, jobs) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let mut sample_mismatches = Vec::new();
    if sample > 0 {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        for &(n, m) in &report.pairs {
            match sample_check(identity, n, m, sample, &mut rng) {
                Ok(None) => {}
                Ok(Some(point)) => sample_mismatches.push((n, m, point)),
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_USAGE);
                }
            }
        }
    }
    let record = report.to_record(ctx.ascii);
    match ctx.format {
        OutputFormat::Json => write_json(out, &record)?,
        OutputFormat::Csv => {
            writeln!(out, "identity,n_max,pairs_checked,status,elapsed_ms")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                record.identity,
                record.n_max,
                record.pairs_checked,
                record.status,
                record.elapsed_ms
            )?;
            if !record.failures.is_empty() {
                writeln!(out, "n,m,difference")?;
                for f in &record.failures {
                    writeln!(out, "{},{},\"{}\"", f.n, f.m, f.difference)?;
                }
            }
        }
        OutputFormat::Text => {
            writeln!(
                out,
                "{}: {} over {} pairs (n_max = {}) in {} ms",
                record.identity,
                record.status,
                record.pairs_checked,
                record.n_max,
                record.elapsed_ms
            )?;
            for f in &record.failures {
                writeln!(out, "  ({}, {}): LHS - RHS = {}", f.n, f.m, f.difference)?;
            }
            if sample > 0 {
                writeln!(
                    out,
                    "sampled {sample} random points per pair: {} disagreement(s)",
                    sample_mismatches.len()
                )?;
            }
            if let Some(note) = identity.note() {
                writeln!(out, "note: {note}")?;
            }
        }
    }
    for (n, m, point) in &sample_mismatches {
        writeln!(err, "sample mismatch at ({n}, {m}): {point:?}")?;
    }
    if report.passed() && sample_mismatches.is_empty() {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_FAIL)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval_single_sum(
    ctx: &Ctx,
    n: usize,
    x: &Rational,
    y: &Rational,
    lambda: &Rational,
    tol: f64,
    max_terms: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let result = match q_single_sum_numeric(n, x, y, lambda, tol, max_terms) {
        Ok(r) => r,
        Err(Error::NotConverged { partial_sum, terms }) => {
            writeln!(
                err,
                "error: no convergence after {terms} terms; partial sum {partial_sum:e}"
            )?;
            return Ok(EXIT_FAIL);
        }
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let exact_rational = q_exact_at(n, x, y, lambda);
    let exact = match exact_rational.to_f64() {
        Ok(v) => v,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_FAIL);
        }
    };
    let abs_dev = (result.value - exact).abs();
    let rel_dev = abs_dev / exact.abs().max(1.0);
    match ctx.format {
        OutputFormat::Text => {
            writeln!(out, "value     {}", result.value)?;
            writeln!(out, "terms     {}", result.terms)?;
            writeln!(out, "exact     {exact_rational} ({exact})")?;
            writeln!(out, "abs_dev   {abs_dev:e}")?;
            writeln!(out, "rel_dev   {rel_dev:e}")?;
        }
        OutputFormat::Json => write_json(
            out,
            &json!({
                "n": n,
                "x": x.to_string(),
                "y": y.to_string(),
                "lambda": lambda.to_string(),
                "value": result.value,
                "terms": result.terms,
                "exact": exact_rational.to_string(),
                "exact_f64": exact,
                "abs_dev": abs_dev,
                "rel_dev": rel_dev,
            }),
        )?,
        OutputFormat::Csv => {
            writeln!(out, "n,x,y,lambda,value,terms,exact,abs_dev,rel_dev")?;
            writeln!(
                out,
                "{n},{x},{y},{lambda},{},{},{exact_rational},{abs_dev:e},{rel_dev:e}",
                result.value, result.terms
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bench(ctx: &Ctx, n_max: usize, out: &mut dyn Write) -> io::Result<i32> {
    let mut rows = Vec::new();
    for route in SequenceRoute::ALL {
        for n in 0..=n_max {
            let start = Instant::now();
            let p = match route {
                SequenceRoute::Recurrence => Sequences::new().q_recurrence(n),
                SequenceRoute::DoubleSum => q_double_sum(n),
                SequenceRoute::TripleSum => q_triple_sum(n),
                SequenceRoute::Series => q_from_series(n),
            };
            let micros = start.elapsed().as_micros();
            std::hint::black_box(p);
            rows.push((route.name(), n, micros));
        }
    }
    if ctx.format == OutputFormat::Json {
        let rows: Vec<_> = rows
            .iter()
            .map(|(r, n, us)| json!({"route": r, "n": n, "micros": us}))
            .collect();
        write_json(out, &rows)?;
    } else {
        writeln!(out, "route,n,micros")?;
        for (r, n, us) in rows {
            writeln!(out, "{r},{n},{us}")?;
        }
    }
    Ok(EXIT_OK)
}
