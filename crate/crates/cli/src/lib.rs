//! Command-line front end: argument definitions and subcommand dispatch.

pub mod format;
pub mod schema;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::One;

use torus2c_core::funcspace::JsonBigUint;
use torus2c_core::probes::Observable;
use torus2c_core::{
    bound_formulas, build_counterexample, cf_expand, coboundary_coeffs, complexity_report, convergents,
    deviation_search, ergodic_average, minimality_probe, order2_verdict, qpair_witness, v_estimate, Alpha, FlFunction,
    SkewProduct, TorusPoint,
};

use format::sig6;
use schema::*;

pub const THREADS_ENV: &str = "TORUS2C_THREADS";

#[derive(Debug, Parser)]
#[command(name = "torus2c", version, about = "Skew products on the two-torus")]
pub struct Cli {
    /// Worker threads (default: TORUS2C_THREADS, else all cores). Output is
    /// byte-identical across runs at a fixed thread count of 1.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continued fraction, convergents and the approximability estimate.
    Cf(CfArgs),
    /// Write the lacunary counterexample as a function file.
    BuildF(BuildFArgs),
    /// Separated/spanning counts and bounds, one CSV row per (n, eps).
    Complexity(ComplexityArgs),
    /// Closed-form linear bounds.
    Bounds(BoundsArgs),
    /// Fourier coboundary test.
    Coboundary(CoboundaryArgs),
    /// Orbit of one point as CSV.
    Simulate(SimulateArgs),
    /// Grid coverage of one orbit.
    ProbeMinimality(MinimalityArgs),
    /// Regionally proximal witness for a same-base pair.
    ProbeQpair(QpairArgs),
    /// Birkhoff-average deviations of the periodic part.
    Ergodic(ErgodicArgs),
    /// Search for bounded Birkhoff deviations of a degree-zero function.
    Deviation(DeviationArgs),
}

fn parse_alpha(s: &str) -> Result<Alpha, String> {
    Alpha::parse(s).map_err(|e| e.to_string())
}

/// Decimal integer or `2^k`.
pub fn parse_biguint(s: &str) -> Result<BigUint, String> {
    if let Some(k) = s.strip_prefix("2^") {
        let k: u32 = k.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
        return Ok(BigUint::one() << k);
    }
    s.parse()
        .map_err(|_| format!("expected a nonnegative integer or 2^k, got {s:?}"))
}

#[derive(Debug, Args)]
pub struct CfArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Alpha,
    #[arg(long)]
    pub depth: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BuildFArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub l: i64,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Alpha,
    #[arg(long)]
    pub k_max: usize,
    #[arg(long, value_parser = parse_biguint)]
    pub n_cap: BigUint,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Alpha,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long)]
    pub grid: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CoboundaryArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Alpha,
    #[arg(long, value_parser = parse_biguint)]
    pub n_max: BigUint,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Alpha,
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub y: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MinimalityArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Alpha,
    #[arg(long)]
    pub cells: usize,
    #[arg(long)]
    pub horizon: usize,
    #[arg(long, default_value_t = 0.0)]
    pub x: f64,
    #[arg(long, default_value_t = 0.0)]
    pub y: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct QpairArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Alpha,
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub y1: f64,
    #[arg(long)]
    pub y2: f64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub horizon: usize,
    /// Samples used to bracket each crossing before bisection.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ErgodicArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Alpha,
    #[arg(long)]
    pub x: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,
    /// `.json` writes JSON, anything else CSV `n,deviation`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DeviationArgs {
    #[arg(long = "f")]
    pub f: PathBuf,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Alpha,
    #[arg(long)]
    pub horizon: usize,
    #[arg(long)]
    pub grid: usize,
    #[arg(long)]
    pub out: PathBuf,
}

/// Thread count from the flag, then the environment.
pub fn resolve_threads(flag: Option<usize>) -> anyhow::Result<Option<usize>> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().with_context(|| format!("{THREADS_ENV}={v:?}"))?),
            Err(_) => None,
        },
    };
    if n == Some(0) {
        bail!("thread count must be positive");
    }
    Ok(n)
}

fn load(path: &Path) -> anyhow::Result<FlFunction> {
    FlFunction::load(path).with_context(|| format!("loading {}", path.display()))
}

fn system(f: FlFunction, alpha: &Alpha) -> anyhow::Result<SkewProduct> {
    Ok(SkewProduct::new(alpha.to_f64(), f)?)
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write(path, &text)
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Cf(a) => cf(a),
        Command::BuildF(a) => {
            let ce = build_counterexample(a.l, &a.alpha, a.k_max, &a.n_cap)?;
            let mut text = ce.function.to_json();
            text.push('\n');
            write(&a.out, &text)
        }
        Command::Complexity(a) => complexity(a),
        Command::Bounds(a) => {
            let f = load(&a.f)?;
            let bounds = bound_formulas(&f, a.n, a.eps)?;
            write_json(
                &a.out,
                &BoundsOutput {
                    n: a.n,
                    eps: a.eps,
                    bounds,
                },
            )
        }
        Command::Coboundary(a) => coboundary(a),
        Command::Simulate(a) => {
            let t = system(load(&a.f)?, &a.alpha)?;
            let mut csv = String::from("i,x,y\n");
            for (i, p) in t.orbit(TorusPoint::new(a.x, a.y), a.steps + 1).iter().enumerate() {
                writeln!(csv, "{i},{},{}", sig6(p.x.value()), sig6(p.y.value()))?;
            }
            write(&a.out, &csv)
        }
        Command::ProbeMinimality(a) => {
            let t = system(load(&a.f)?, &a.alpha)?;
            let r = minimality_probe(&t, TorusPoint::new(a.x, a.y), a.cells, a.horizon)?;
            write_json(&a.out, &r)
        }
        Command::ProbeQpair(a) => {
            let t = system(load(&a.f)?, &a.alpha)?;
            let w = qpair_witness(&t, a.x, a.y1, a.y2, a.eps, a.delta, a.horizon, a.grid)?;
            write_json(&a.out, &w)
        }
        Command::Ergodic(a) => ergodic(a),
        Command::Deviation(a) => {
            let f = load(&a.f)?;
            let r = deviation_search(&f, a.alpha.to_f64(), a.horizon, a.grid)?;
            write_json(&a.out, &r)
        }
    }
}

fn cf(a: CfArgs) -> anyhow::Result<()> {
    let cf = cf_expand(&a.alpha, a.depth)?;
    let report = v_estimate(&a.alpha, a.depth)?;
    let out = CfOutput {
        alpha: a.alpha.label().to_string(),
        a0: cf.a0.to_string(),
        partial_quotients: cf.partial_quotients.iter().cloned().map(JsonBigUint).collect(),
        convergents: convergents(&cf)
            .iter()
            .map(|c| ConvergentOut {
                p: c.p.to_string(),
                q: c.q.to_string(),
                abs_err: c.abs_err(&a.alpha),
            })
            .collect(),
        v_estimate: report.v_estimate,
        running_min: report.running_min,
        badly_approximable: report.badly_approximable,
        max_quotient: report.max_quotient.map(JsonBigUint),
        terminated: cf.terminated,
        truncated: cf.truncated,
    };
    write_json(&a.out, &out)
}

fn complexity(a: ComplexityArgs) -> anyhow::Result<()> {
    let t = system(load(&a.f)?, &a.alpha)?;
    let mut csv =
        String::from("n,eps,sep_greedy,sep_construct,span_construct,bound_lower,bound_upper,eta_eps,variation\n");
    for &n in &a.n {
        for &eps in &a.eps {
            let r = complexity_report(&t, n, eps, a.grid)?;
            writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{}",
                r.n,
                sig6(r.eps),
                r.sep_greedy,
                r.sep_construct,
                r.span_construct,
                sig6(r.bound_lower),
                sig6(r.bound_upper),
                sig6(r.eta),
                sig6(r.variation)
            )?;
        }
    }
    write(&a.out, &csv)
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn coboundary(a: CoboundaryArgs) -> anyhow::Result<()> {
    let f = load(&a.f)?;
    let r = coboundary_coeffs(&f, &a.alpha, &a.n_max)?;
    let out = CoboundaryOutput {
        alpha: a.alpha.label().to_string(),
        l: r.degree,
        c: r.c,
        terms: r
            .b_terms
            .iter()
            .map(|t| BTermOut {
                n: JsonBigUint(t.n.clone()),
                b_abs: finite(t.b_abs()),
                b_re: finite(t.b.re),
                b_im: finite(t.b.im),
            })
            .collect(),
        partial_sums: r
            .partial_sums
            .iter()
            .map(|(n, s)| (JsonBigUint(n.clone()), finite(*s)))
            .collect(),
        verdict: r.verdict,
        order2: order2_verdict(&r),
    };
    write_json(&a.out, &out)
}

fn ergodic(a: ErgodicArgs) -> anyhow::Result<()> {
    let f = load(&a.f)?;
    let alpha = a.alpha.to_f64();
    let obs = Observable::Periodic(&f);
    let rows = a
        .n_list
        .iter()
        .map(|&n| {
            Ok(ErgodicRow {
                n,
                deviation: ergodic_average(&obs, alpha, a.x, n)?.re,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    if a.out.extension().is_some_and(|e| e == "json") {
        return write_json(
            &a.out,
            &ErgodicOutput {
                alpha: a.alpha.label().to_string(),
                x: a.x,
                rows,
                evidence_only: true,
            },
        );
    }
    let mut csv = String::from("n,deviation\n");
    for r in &rows {
        writeln!(csv, "{},{}", r.n, sig6(r.deviation))?;
    }
    write(&a.out, &csv)
}

/// Process exit code for a failed run: 3 for violated preconditions, 1
/// otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<torus2c_core::Error>() {
        Some(e) if e.is_precondition() => 3,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn biguint_forms() {
        assert_eq!(parse_biguint("2^10").unwrap(), BigUint::from(1024u32));
        assert_eq!(
            parse_biguint("12345678901234567890123").unwrap().to_string(),
            "12345678901234567890123"
        );
        assert!(parse_biguint("2^x").is_err());
        assert!(parse_biguint("-3").is_err());
    }

    #[test]
    fn exit_codes() {
        let pre = anyhow::Error::from(torus2c_core::Error::ZeroDegree);
        assert_eq!(exit_code(&pre), 3);
        let fmt = anyhow::Error::from(torus2c_core::Error::Format("x".into()));
        assert_eq!(exit_code(&fmt), 1);
        assert_eq!(exit_code(&anyhow::anyhow!("other")), 1);
    }

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from([
            "torus2c",
            "build-f",
            "--l",
            "-2",
            "--alpha",
            "liouville:6",
            "--k-max",
            "3",
            "--n-cap",
            "2^256",
            "--out",
            "f.json",
        ])
        .unwrap();
        let Command::BuildF(a) = cli.command else {
            panic!("build-f expected")
        };
        assert_eq!(a.l, -2);
        assert_eq!(a.n_cap, BigUint::one() << 256u32);
        assert!(Cli::try_parse_from(["torus2c", "complexity", "--alpha", "golden"]).is_err());
        let cli = Cli::try_parse_from([
            "torus2c",
            "--threads",
            "1",
            "complexity",
            "--f",
            "f.json",
            "--alpha",
            "0.5",
            "--n",
            "1,2",
            "--eps",
            "0.1",
            "--grid",
            "64",
            "--out",
            "o.csv",
        ])
        .unwrap();
        assert_eq!(cli.threads, Some(1));
        let Command::Complexity(a) = cli.command else {
            panic!("complexity expected")
        };
        assert_eq!(a.n, vec![1, 2]);
    }
}
