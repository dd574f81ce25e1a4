//! Command-line front end for the `vsa` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::combinatorics::{
    coeffs_upper_bound, l_matrix, pascal_matrix, s_matrix, straightening_coeffs, ExactMatrix,
};
use crate::fockspace::{Heisenberg, Partition};
use crate::parse::{parse_expression, render};
use crate::rational;
use crate::rewrite::{
    span_check, word_weight, Expression, ExpressionJson, SpanReport, Straightener, TraceJson,
};
use crate::subspaces::GeneratorSet;
use crate::verify::{Suite, Verifier};
use crate::{Error, Result};

/// Hard cap on `--max-weight`, keeping exact runs at desk scale.
pub const MAX_WEIGHT_CAP: i64 = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "vsa", version, about = "Exact straightening calculus on the Heisenberg Fock space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DifferenceArg {
    /// Difference N (at least 1).
    #[arg(long = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub n_diff: u32,
}

#[derive(Debug, Args)]
pub struct CacheArg {
    /// Generator cache file; defaults to a file inside $VSA_CACHE_DIR when set.
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pascal matrix P_N, L_N(m), S_N(m) and det S_N(m).
    Matrix {
        #[command(flatten)]
        diff: DifferenceArg,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// Straightening coefficients c_N(r, n) for one n or a range of n.
    Coeffs {
        #[command(flatten)]
        diff: DifferenceArg,
        /// A single centre n.
        #[arg(long, allow_negative_numbers = true)]
        n: Option<i64>,
        /// Smallest n of the table (default: largest valid n minus 5).
        #[arg(long, allow_negative_numbers = true)]
        n_from: Option<i64>,
        /// Largest n of the table (default: largest valid n).
        #[arg(long, allow_negative_numbers = true)]
        n_to: Option<i64>,
    },
    /// Build or load the quotient representatives up to a weight.
    Gens {
        #[command(flatten)]
        diff: DifferenceArg,
        #[arg(long)]
        max_weight: i64,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Normal form of an expression such as "a_(-1) a_(-1) vac".
    Straighten {
        #[command(flatten)]
        diff: DifferenceArg,
        expression: String,
        /// Generator bound; defaults to the largest monomial weight.
        #[arg(long)]
        max_weight: Option<i64>,
        /// Also emit the rewrite trace.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Rank of the normal monomials against dim V_w.
    SpanCheck {
        #[command(flatten)]
        diff: DifferenceArg,
        /// Check one weight.
        #[arg(long, conflicts_with = "max_weight")]
        weight: Option<i64>,
        /// Check every weight up to this one.
        #[arg(long)]
        max_weight: Option<i64>,
        #[command(flatten)]
        cache: CacheArg,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// What a command printed and whether it succeeded.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub success: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, success: true }
    }
}

/// Machine-readable record printed when a command fails.
pub fn failure_record(e: &Error) -> String {
    json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

fn check_weight(w: i64) -> Result<i64> {
    if !(0..=MAX_WEIGHT_CAP).contains(&w) {
        return Err(Error::domain(format!("weight {w} is outside 0..={MAX_WEIGHT_CAP}")));
    }
    Ok(w)
}

fn cache_path(arg: &CacheArg, n_diff: usize, max_weight: i64) -> Option<PathBuf> {
    arg.cache.clone().or_else(|| {
        std::env::var_os("VSA_CACHE_DIR")
            .map(|dir| PathBuf::from(dir).join(format!("gens-N{n_diff}-w{max_weight}.json")))
    })
}

fn load_gens(alg: &Heisenberg, n_diff: usize, max_weight: i64, cache: &CacheArg) -> Result<GeneratorSet<Partition>> {
    let path = cache_path(cache, n_diff, max_weight);
    GeneratorSet::load_or_build(alg, n_diff, max_weight, path.as_deref())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string(v)? + "\n")
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Matrix { diff, m } => matrix(diff.n_diff as usize, *m, json).map(Outcome::ok),
        Command::Coeffs { diff, n, n_from, n_to } => {
            coeffs(diff.n_diff as usize, *n, *n_from, *n_to, json).map(Outcome::ok)
        }
        Command::Gens {
            diff,
            max_weight,
            cache,
        } => {
            let alg = Heisenberg::new();
            let g = load_gens(&alg, diff.n_diff as usize, check_weight(*max_weight)?, cache)?;
            if json {
                return Ok(Outcome::ok(g.to_json()? + "\n"));
            }
            let mut out = String::new();
            for (w, per) in &g.per_weight {
                let reps: Vec<String> = per.reps.iter().map(ToString::to_string).collect();
                writeln!(out, "w={w} cnDim={} reps: {}", per.cn.dim(), reps.join(" ")).ok();
            }
            Ok(Outcome::ok(out))
        }
        Command::Straighten {
            diff,
            expression,
            max_weight,
            trace,
            cache,
        } => straighten(diff.n_diff as usize, expression, *max_weight, *trace, cache, json).map(Outcome::ok),
        Command::SpanCheck {
            diff,
            weight,
            max_weight,
            cache,
        } => {
            let alg = Heisenberg::new();
            let n_diff = diff.n_diff as usize;
            let (weights, top) = match (weight, max_weight) {
                (Some(w), _) => (vec![check_weight(*w)?], *w),
                (None, Some(m)) => ((0..=check_weight(*m)?).collect(), *m),
                (None, None) => return Err(Error::domain("span-check needs --weight or --max-weight")),
            };
            let g = load_gens(&alg, n_diff, top, cache)?;
            let reports: Vec<(i64, SpanReport)> = weights
                .iter()
                .map(|&w| span_check(&alg, w, &g).map(|r| (w, r)))
                .collect::<Result<_>>()?;
            let success = reports.iter().all(|(_, r)| r.ok);
            let output = match (json, weight.is_some()) {
                (true, true) => to_json(&reports[0].1)?,
                (true, false) => to_json(
                    &reports
                        .iter()
                        .map(|(w, r)| json!({"weight": w, "rank": r.rank, "dim": r.dim, "ok": r.ok}))
                        .collect::<Vec<_>>(),
                )?,
                (false, _) => reports
                    .iter()
                    .map(|(w, r)| format!("w={w} rank={} dim={} ok={}\n", r.rank, r.dim, r.ok))
                    .collect(),
            };
            Ok(Outcome { output, success })
        }
        Command::Verify { suite, seed } => {
            let suite: Suite = suite.parse()?;
            let reports = Verifier::new(*seed).run(suite);
            let success = reports.iter().all(|r| r.passed);
            let output = if json {
                to_json(&reports)?
            } else {
                reports.iter().map(|r| format!("{r}\n")).collect()
            };
            Ok(Outcome { output, success })
        }
    }
}

fn matrix(n: usize, m: i64, json: bool) -> Result<String> {
    let (p, l, s) = (pascal_matrix(n), l_matrix(n, m), s_matrix(n, m));
    let det = s.determinant()?;
    if json {
        return to_json(&json!({
            "N": n,
            "m": m,
            "P": p,
            "L": l,
            "S": s,
            "det": rational::to_string(&det),
        }));
    }
    let block = |name: &str, x: &ExactMatrix| format!("{name}:\n{x}");
    Ok(format!(
        "{}{}{}det S = {}\n",
        block(&format!("P_{n}"), &p),
        block(&format!("L_{n}({m})"), &l),
        block(&format!("S_{n}({m})"), &s),
        rational::to_string(&det)
    ))
}

fn coeffs(n_diff: usize, n: Option<i64>, from: Option<i64>, to: Option<i64>, json: bool) -> Result<String> {
    let strings = |n: i64| -> Result<Vec<String>> {
        Ok(straightening_coeffs(n_diff, n)?.values.iter().map(rational::to_string).collect())
    };
    if let Some(n) = n {
        let c = strings(n)?;
        return if json {
            to_json(&c)
        } else {
            Ok(format!("{}\n", c.join(" ")))
        };
    }
    let top = to.unwrap_or(coeffs_upper_bound(n_diff));
    let bottom = from.unwrap_or(top - 5);
    let rows: Vec<(i64, Vec<String>)> = (bottom..=top).map(|n| strings(n).map(|c| (n, c))).collect::<Result<_>>()?;
    if json {
        let table: Vec<_> = rows.iter().map(|(n, c)| json!({"n": n, "coeffs": c})).collect();
        return to_json(&json!({"N": n_diff, "table": table}));
    }
    Ok(rows.iter().map(|(n, c)| format!("n={n}: {}\n", c.join(" "))).collect())
}

fn straighten(
    n_diff: usize,
    text: &str,
    max_weight: Option<i64>,
    with_trace: bool,
    cache: &CacheArg,
    json: bool,
) -> Result<String> {
    let alg = Heisenberg::new();
    let e = parse_expression(text)?;
    let needed = e.words().map(|w| word_weight(&alg, w)).max().unwrap_or(0);
    let bound = check_weight(max_weight.unwrap_or(needed))?;
    if bound < needed {
        return Err(Error::domain(format!(
            "--max-weight {bound} is below the expression weight {needed}"
        )));
    }
    let g = load_gens(&alg, n_diff, bound, cache)?;
    let mut s = Straightener::new(&alg, &g);
    let (out, trace) = s.straighten(&e)?;
    if json {
        if with_trace {
            return to_json(&TraceJson::from(&trace));
        }
        return to_json(&json!({
            "input": ExpressionJson::from(&e),
            "output": ExpressionJson::from(&out),
        }));
    }
    let mut text = format!("{}\n", render(&out));
    if with_trace {
        for step in &trace.steps {
            let mut before = Expression::zero();
            before.add_raw(step.before.clone(), rational::int(1));
            writeln!(
                text,
                "{} ({}): {} -> {}",
                step.kind.name(),
                step.kind.lemma(),
                render(&before),
                render(&step.after)
            )
            .ok();
        }
    }
    Ok(text)
}
