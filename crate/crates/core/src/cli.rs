//! The `lagrangian` command line.
//!
//! Exit codes: 0 on success, 2 when a theorem check ran but did not pass,
//! 1 on usage or input errors. Plain output prints numbers with twelve
//! decimals; `--json` emits machine-readable records.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cliques::max_complete_subgraph;
use crate::compression::{compress_hypergraph, is_left_compressed, left_compress_fixpoint};
use crate::error::{Error, Result};
use crate::generators::{gen_planted, Family, GenParams};
use crate::hypergraph::{read_hypergraph, EdgeTypeSet, Hypergraph};
use crate::objective::{Coefficients, LevelWeights};
use crate::optimizer::{grid_oracle_weighted, maximize_weighted, OptimizationResult, SolverConfig};
use crate::par;
use crate::sweep::{run_sweep, write_csv, SweepSpec};
use crate::theorems::{verify, TheoremId, TheoremParams, VerdictStatus};

#[derive(Debug, Parser)]
#[command(name = "lagrangian", version, about = "Lagrangians of non-uniform hypergraphs and Motzkin–Straus type checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Maximise an objective over the simplex.
    Compute(ComputeArgs),
    /// Maximum complete T-subgraph (JSON output).
    Clique(CliqueArgs),
    /// Left-compression: check, single step or fixpoint.
    Compress(CompressArgs),
    /// Check a theorem on an instance.
    Verify(VerifyArgs),
    /// Generate an instance from a seeded family.
    Generate(GenerateArgs),
    /// Generate and verify over a seed range, writing CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveKind {
    /// Unit weight on every level.
    Lambda,
    /// Level weights r!.
    LambdaPrime,
    /// Weighted program with `--coeffs`.
    Weighted,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Random starts.
    #[arg(long)]
    starts: Option<usize>,
    /// Grid resolution D for the brute-force oracle.
    #[arg(long = "grid-d")]
    grid_d: Option<usize>,
    /// Seed (default: $LAGRANGIAN_LAB_SEED or a fixed constant).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Stationarity tolerance of the ascent.
    #[arg(long = "grad-tol")]
    grad_tol: Option<f64>,
    /// Solver configuration as JSON (inline or a file); flags override it.
    #[arg(long = "solver")]
    solver: Option<String>,
    /// Run everything on the calling thread.
    #[arg(long)]
    sequential: bool,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig> {
        let mut cfg: SolverConfig = match &self.solver {
            Some(s) => serde_json::from_str(&inline_or_file(s)?)?,
            None => SolverConfig::default(),
        };
        if let Some(v) = self.starts {
            cfg.starts = v;
        }
        if let Some(v) = self.grid_d {
            cfg.grid_resolution = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.max_iters {
            cfg.max_iters = v;
        }
        if let Some(v) = self.grad_tol {
            cfg.tol_grad = v;
        }
        if self.sequential {
            cfg.parallel = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct ComputeArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "lambda")]
    objective: ObjectiveKind,
    /// Coefficients JSON, e.g. {"r0": 2, "alpha": {"3": 1.5}}.
    #[arg(long)]
    coeffs: Option<String>,
    /// Stationarity tolerance (same as --grad-tol).
    #[arg(long)]
    tol: Option<f64>,
    /// Also run the grid oracle at the configured resolution.
    #[arg(long)]
    grid: bool,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct CliqueArgs {
    input: PathBuf,
    /// Edge types, e.g. 1,2,3 (default: the instance's own).
    #[arg(long)]
    types: Option<String>,
}

#[derive(Debug, Args)]
#[group(id = "mode", required = true, multiple = false)]
struct CompressMode {
    /// Report whether the instance is left-compressed.
    #[arg(long, group = "mode")]
    check: bool,
    /// Compress until no step changes the instance.
    #[arg(long, group = "mode")]
    fixpoint: bool,
    /// Apply one compression C_{i<-j}, given as i,j.
    #[arg(long, group = "mode")]
    pair: Option<String>,
}

#[derive(Debug, Args)]
struct CompressArgs {
    input: PathBuf,
    #[command(flatten)]
    mode: CompressMode,
    /// Write the resulting hypergraph here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    input: PathBuf,
    /// Theorem parameters as JSON (inline or a file).
    #[arg(long)]
    params: Option<String>,
    /// Agreement tolerance between the optimum and the closed form.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    family: String,
    /// Family parameters as JSON (inline or a file).
    #[arg(long)]
    params: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write the text format instead of JSON.
    #[arg(long)]
    text: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    family: String,
    /// Theorem ids, comma separated (default: the family's target).
    #[arg(long, value_delimiter = ',')]
    theorem: Vec<String>,
    /// Inclusive seed range `a..b`, or a single seed.
    #[arg(long, default_value = "1..10")]
    seeds: String,
    /// Family parameters as JSON.
    #[arg(long)]
    params: Option<String>,
    /// Theorem parameters as JSON (default: derived from the family).
    #[arg(long = "theorem-params")]
    theorem_params: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// CSV destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: logical cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    solver: SolverArgs,
}

/// Treats `s` as inline JSON when it starts with `{`, otherwise as a path.
fn inline_or_file(s: &str) -> Result<String> {
    if s.trim_start().starts_with('{') {
        Ok(s.to_string())
    } else {
        Ok(fs::read_to_string(s)?)
    }
}

fn fmt12(v: f64) -> String {
    format!("{v:.12}")
}

fn parse_seeds(s: &str) -> Result<std::ops::RangeInclusive<u64>> {
    let bad = || Error::Parse(format!("seed range {s:?} is not `a..b` or `a..=b`"));
    let parse = |x: &str| x.trim().parse::<u64>().map_err(|_| bad());
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn write_hypergraph(h: &Hypergraph, path: Option<&Path>, text: bool, out: &mut dyn Write) -> Result<()> {
    let body = if text { h.to_text() } else { format!("{}\n", h.to_json()) };
    match path {
        Some(p) => fs::write(p, body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn result_json(r: &OptimizationResult, h: &Hypergraph) -> serde_json::Value {
    json!({
        "value": r.value,
        "x": r.x,
        "support": r.support,
        "kkt_residual": r.kkt_residual,
        "method": r.method,
        "iterations": r.iterations,
        "converged": r.converged,
        "permutation": r.permutation,
        "sorted_weights": r.sorted_weights,
        "hash": h.canonical_hash(),
    })
}

fn compute(args: ComputeArgs, out: &mut dyn Write) -> Result<i32> {
    let h = read_hypergraph(&args.input)?;
    let mut cfg = args.solver.config()?;
    if let Some(t) = args.tol {
        cfg.tol_grad = t;
        cfg.validate()?;
    }
    let weights = match args.objective {
        ObjectiveKind::Lambda => LevelWeights::unit(&h),
        ObjectiveKind::LambdaPrime => LevelWeights::lambda_prime(&h),
        ObjectiveKind::Weighted => {
            let text = args.coeffs.as_deref().ok_or_else(|| Error::InvalidParams("weighted objective needs --coeffs".into()))?;
            let raw: Coefficients = serde_json::from_str(&inline_or_file(text)?)?;
            Coefficients::new(raw.r0, raw.alpha)?.level_weights(&h)?
        }
    };
    let res = maximize_weighted(&h, &weights, &cfg)?;
    let grid = if args.grid { Some(grid_oracle_weighted(&h, &weights, cfg.grid_resolution, &cfg)?) } else { None };
    if args.json {
        let mut v = result_json(&res, &h);
        if let Some(g) = &grid {
            v["grid"] = serde_json::to_value(g)?;
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        writeln!(out, "{}", fmt12(res.value))?;
        if let Some(g) = &grid {
            writeln!(out, "grid {} polished {} slack {}", fmt12(g.value), fmt12(g.polished_value), fmt12(g.lipschitz_slack))?;
        }
    }
    Ok(0)
}

fn clique(args: CliqueArgs, out: &mut dyn Write) -> Result<i32> {
    let h = read_hypergraph(&args.input)?;
    let types = match &args.types {
        Some(s) => EdgeTypeSet::parse(s)?,
        None => h.edge_types().as_edge_types().ok_or_else(|| Error::InvalidParams("instance has no edges; pass --types".into()))?,
    };
    let c = max_complete_subgraph(&h, &types);
    writeln!(out, "{}", serde_json::to_string(&c)?)?;
    Ok(0)
}

fn compress(args: CompressArgs, out: &mut dyn Write) -> Result<i32> {
    let h = read_hypergraph(&args.input)?;
    if args.mode.check {
        let lc = is_left_compressed(&h);
        if args.json {
            writeln!(out, "{}", json!({ "left_compressed": lc }))?;
        } else {
            writeln!(out, "{lc}")?;
        }
        return Ok(0);
    }
    let (result, steps) = if let Some(pair) = &args.mode.pair {
        let (i, j) = pair
            .split_once(',')
            .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)))
            .ok_or_else(|| Error::Parse(format!("--pair expects i,j, got {pair:?}")))?;
        (compress_hypergraph(&h, i, j)?, None)
    } else {
        let f = left_compress_fixpoint(&h);
        (f.hypergraph, Some(f.steps))
    };
    if args.json {
        let v = json!({ "hypergraph": crate::hypergraph::HypergraphJson::from(&result), "steps": steps, "hash": result.canonical_hash() });
        let body = serde_json::to_string_pretty(&v)?;
        match &args.output {
            Some(p) => fs::write(p, body + "\n")?,
            None => writeln!(out, "{body}")?,
        }
    } else {
        write_hypergraph(&result, args.output.as_deref(), false, out)?;
    }
    Ok(0)
}

fn theorem_params(s: Option<&str>) -> Result<TheoremParams> {
    match s {
        Some(s) => Ok(serde_json::from_str(&inline_or_file(s)?)?),
        None => Ok(TheoremParams::default()),
    }
}

fn verify_cmd(args: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let id: TheoremId = args.theorem.parse()?;
    let h = read_hypergraph(&args.input)?;
    let params = theorem_params(args.params.as_deref())?;
    let cfg = args.solver.config()?;
    let v = verify(id, &h, &params, &cfg, args.tol)?;
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        let opt = |x: Option<f64>| x.map(fmt12).unwrap_or_else(|| "-".into());
        let status = match v.status {
            VerdictStatus::Pass => "pass",
            VerdictStatus::Fail => "fail",
            VerdictStatus::NotApplicable => "not applicable",
        };
        writeln!(out, "theorem {}", v.id)?;
        writeln!(out, "status {status}")?;
        for c in &v.conditions {
            writeln!(out, "  [{}] {}: {}", if c.holds { "ok" } else { "no" }, c.name, c.detail)?;
        }
        writeln!(out, "closed_form {}", opt(v.closed_form))?;
        writeln!(out, "numerical {}", opt(v.numerical))?;
        writeln!(out, "uniform_on_clique {}", opt(v.uniform_on_clique))?;
        writeln!(out, "kkt_residual {}", opt(v.kkt_residual))?;
        if v.strict {
            writeln!(out, "gap {} margin {}", opt(v.gap), opt(v.strictness_margin))?;
        }
        for n in &v.notes {
            writeln!(out, "note: {n}")?;
        }
    }
    Ok(if v.pass { 0 } else { 2 })
}

fn gen_params(s: Option<&str>) -> Result<GenParams> {
    match s {
        Some(s) => Ok(serde_json::from_str(&inline_or_file(s)?)?),
        None => Ok(GenParams::default()),
    }
}

fn generate(args: GenerateArgs, out: &mut dyn Write) -> Result<i32> {
    let family: Family = args.family.parse()?;
    let h = gen_planted(family, &gen_params(args.params.as_deref())?, args.seed)?;
    write_hypergraph(&h, args.output.as_deref(), args.text, out)?;
    Ok(0)
}

fn sweep(args: SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = SweepSpec {
        family: args.family.parse()?,
        gen: gen_params(args.params.as_deref())?,
        theorems: args.theorem.iter().map(|s| s.parse()).collect::<Result<_>>()?,
        params: args.theorem_params.as_deref().map(|s| theorem_params(Some(s))).transpose()?,
        seeds: parse_seeds(&args.seeds)?,
        tol: args.tol,
        solver: args.solver.config()?,
    };
    let rows = par::with_jobs(args.jobs, || run_sweep(&spec))?;
    match &args.out {
        Some(p) => write_csv(&rows, fs::File::create(p)?)?,
        None => write_csv(&rows, &mut *out)?,
    }
    Ok(if rows.iter().all(|r| r.verdict.pass) { 0 } else { 2 })
}

/// Runs the command line on `argv` (including the program name), writing
/// results to `out` and diagnostics to stderr. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                eprint!("{e}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Compute(a) => compute(a, out),
        Command::Clique(a) => clique(a, out),
        Command::Compress(a) => compress(a, out),
        Command::Verify(a) => verify_cmd(a, out),
        Command::Generate(a) => generate(a, out),
        Command::Sweep(a) => sweep(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_ranges() {
        assert_eq!(parse_seeds("1..25").unwrap(), 1..=25);
        assert_eq!(parse_seeds("3..=4").unwrap(), 3..=4);
        assert_eq!(parse_seeds("7").unwrap(), 7..=7);
        assert!(parse_seeds("5..1").is_err());
        assert!(parse_seeds("a..b").is_err());
    }

    #[test]
    fn twelve_decimals() {
        assert_eq!(fmt12(0.4), "0.400000000000");
        assert_eq!(fmt12(5.0 / 3.0), "1.666666666667");
    }

    #[test]
    fn usage_errors_exit_one() {
        let mut out = Vec::new();
        assert_eq!(run(["lagrangian", "frobnicate"], &mut out), 1);
        assert_eq!(run(["lagrangian", "--help"], &mut out), 0);
    }
}
