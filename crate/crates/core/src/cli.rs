//! The `gpoly` command line.
//!
//! Every command builds its primary output in memory, writes it to stdout
//! (and to `--out-dir` when given), and records a run entry next to it.
//! Exit codes: 0 success, 1 failed verification, 2 usage or parameter
//! error, 3 any other runtime failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::experiments::{
    default_workers, estranged_expectation_mc, facet_growth_table, kfacet_expectation_mc, kfacet_profile_mc,
    pair_facet_probability_mc, reduced_kfacet_probability_mc, run_suite, write_growth_csv, Caps, GrowthTarget,
    MCEstimate, RunConfig, Suite, SuiteBudget, VerificationReport,
};
use crate::geometry::{facet_set, kfacet_profile};
use crate::mathcore::special::binomial;
use crate::sampling::{gaussian_point_set, stream, PointSet};
use crate::theory::{
    c_alpha_r_with, estranged_constant, estranged_constant_reduced, growth_base_kfacet_with, kfacet_expectation_exact,
    kfacet_log_expectation_exact, kfacet_probability_exact, ConstantResult, ExponentVariant, KFacetFormulaInputs, Sign,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;
pub const RUNS_FILE: &str = "runs.jsonl";

#[derive(Debug, Parser, Serialize)]
#[command(name = "gpoly", version, about = "Gaussian random polytopes: facets, k-facets and estranged pairs")]
pub struct Cli {
    /// Worker threads for Monte Carlo runs.
    #[arg(long, global = true, env = "GPOLY_WORKERS")]
    #[serde(skip)]
    pub workers: Option<usize>,

    /// key=value file merged under the command-line flags.
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,

    /// Directory receiving the output file and the run log.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Sample n standard Gaussian points in R^d as CSV.
    Sample(SampleArgs),
    /// Enumerate the k-facet profile of a point-set CSV.
    Profile(ProfileArgs),
    /// Expected k-facet counts: exact quadrature or simulation.
    Kfacets(KfacetsArgs),
    /// Growth constants.
    Constants(ConstantsArgs),
    /// Estranged facet pairs of 2d Gaussian points.
    Estranged(EstrangedArgs),
    /// Trend table of (E e_k)^(1/d) against the growth base.
    Growth(GrowthArgs),
    /// Simulation-versus-theory checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ProfileArgs {
    /// Point-set CSV with an x1..xd header.
    #[arg(long)]
    pub input: PathBuf,
    /// Also write the facets (as vertex index rows) to this file.
    #[arg(long)]
    pub facets_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KfacetMode {
    Exact,
    Mc,
    Reduced,
}

#[derive(Debug, Args, Serialize)]
pub struct KfacetsArgs {
    #[arg(value_enum)]
    pub mode: KfacetMode,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, conflicts_with = "all_k", required_unless_present = "all_k")]
    pub k: Option<usize>,
    #[arg(long)]
    pub all_k: bool,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstantsArgs {
    #[command(subcommand)]
    pub target: ConstantsTarget,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "target", rename_all = "lowercase")]
pub enum ConstantsTarget {
    /// c_{α,r} and the k-facet growth base.
    Kfacet {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        r: f64,
        /// Use the exponents rα and α−1−rα instead of r(α−1) and (1−r)(α−1).
        #[arg(long)]
        statement_exponents: bool,
    },
    /// The four sign-term constants, the reduced form and 4C.
    Estranged,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstrangedMode {
    Mc,
    Pairprob,
}

#[derive(Debug, Args, Serialize)]
pub struct EstrangedArgs {
    #[arg(value_enum)]
    pub mode: EstrangedMode,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct GrowthArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2)]
    pub d_min: usize,
    #[arg(long, default_value_t = 7)]
    pub d_max: usize,
    /// Track the middle k instead of the facet count.
    #[arg(long)]
    pub middle: bool,
    #[arg(long, default_value_t = 2_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// One line of `runs.jsonl`.
#[derive(Debug, Serialize, serde::Deserialize, PartialEq)]
pub struct RunRecord {
    pub command_line: Vec<String>,
    pub params: Value,
    pub master_seed: Option<u64>,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub output_file: String,
    pub output_sha256: String,
    pub version: String,
}

struct Output {
    bytes: Vec<u8>,
    extension: &'static str,
    failed: Vec<String>,
}

impl Output {
    fn new(extension: &'static str) -> Self {
        Output { bytes: Vec::new(), extension, failed: Vec::new() }
    }

    fn line(&mut self, v: &Value) -> anyhow::Result<()> {
        serde_json::to_writer(&mut self.bytes, v)?;
        self.bytes.push(b'\n');
        Ok(())
    }
}

fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Appends `--key value` for each entry of a key=value file whose flag is
/// not already on the command line.
pub fn merge_params_file(args: &[OsString]) -> anyhow::Result<Vec<OsString>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--params" {
            path = args.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--params=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else {
        return Ok(args.to_vec());
    };
    let text = fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let present: Vec<String> =
        args.iter().map(|a| a.to_string_lossy().split('=').next().unwrap_or_default().to_string()).collect();
    let mut merged = args.to_vec();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse(format!("{}:{}: expected key=value", path.display(), lineno + 1)).into());
        };
        let flag = format!("--{}", key.trim().replace('_', "-"));
        if present.contains(&flag) {
            continue;
        }
        match value.trim() {
            "true" => merged.push(flag.into()),
            "false" => {}
            v => {
                merged.push(flag.into());
                merged.push(v.into());
            }
        }
    }
    Ok(merged)
}

fn exit_code_for(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::InvalidParameter(_)
            | Error::Domain(_)
            | Error::ResourceCap(_)
            | Error::Parse(_)
            | Error::DimensionMismatch(_),
        ) => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match merge_params_file(&args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, &args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}

fn execute(cli: &Cli, args: &[OsString]) -> anyhow::Result<i32> {
    let workers = cli.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        return Err(Error::InvalidParameter("--workers must be at least 1".into()).into());
    }
    let started = now_ms();
    let (out, seed) = match &cli.command {
        Command::Sample(a) => (cmd_sample(a)?, Some(a.seed)),
        Command::Profile(a) => (cmd_profile(a)?, None),
        Command::Kfacets(a) => (cmd_kfacets(a, workers)?, Some(a.seed)),
        Command::Constants(a) => (cmd_constants(a)?, None),
        Command::Estranged(a) => (cmd_estranged(a, workers)?, Some(a.seed)),
        Command::Growth(a) => (cmd_growth(a, workers)?, Some(a.seed)),
        Command::Verify(a) => (cmd_verify(a, workers)?, Some(a.seed)),
    };

    std::io::stdout().write_all(&out.bytes).context("writing to stdout")?;
    if let Some(dir) = &cli.out_dir {
        write_artifacts(dir, cli, args, &out, seed, started)?;
    }
    if !out.failed.is_empty() {
        eprintln!("failed checks: {}", out.failed.join(", "));
        return Ok(EXIT_VERIFY_FAILED);
    }
    Ok(EXIT_OK)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Sample(_) => "sample",
        Command::Profile(_) => "profile",
        Command::Kfacets(_) => "kfacets",
        Command::Constants(_) => "constants",
        Command::Estranged(_) => "estranged",
        Command::Growth(_) => "growth",
        Command::Verify(_) => "verify",
    }
}

fn write_artifacts(
    dir: &Path,
    cli: &Cli,
    args: &[OsString],
    out: &Output,
    seed: Option<u64>,
    started: u128,
) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let file = format!("{}.{}", command_name(&cli.command), out.extension);
    fs::write(dir.join(&file), &out.bytes).with_context(|| format!("writing {file}"))?;
    let record = RunRecord {
        command_line: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        params: serde_json::to_value(cli)?,
        master_seed: seed,
        started_unix_ms: started,
        finished_unix_ms: now_ms(),
        output_file: file,
        output_sha256: sha256_hex(&out.bytes),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let mut log = OpenOptions::new().create(true).append(true).open(dir.join(RUNS_FILE))?;
    writeln!(log, "{}", serde_json::to_string(&record)?)?;
    Ok(())
}

fn estimate_json(e: &MCEstimate) -> Value {
    json!({"mean": e.mean, "se": e.std_error, "ci95": e.ci95, "trials": e.trials, "variance": e.variance})
}

fn cmd_sample(a: &SampleArgs) -> anyhow::Result<Output> {
    let ps = gaussian_point_set(&mut stream(a.seed, 0), a.n, a.d)?;
    let mut out = Output::new("csv");
    ps.write_csv(&mut out.bytes)?;
    eprintln!("{}", serde_json::to_string(&json!({"n": a.n, "d": a.d, "provenance": ps.provenance()}))?);
    Ok(out)
}

fn cmd_profile(a: &ProfileArgs) -> anyhow::Result<Output> {
    let file = fs::File::open(&a.input).map_err(|e| Error::Io(format!("{}: {e}", a.input.display())))?;
    let ps = PointSet::read_csv(file)?;
    let profile = kfacet_profile(&ps)?;
    let mut out = Output::new("csv");
    profile.write_csv(&mut out.bytes)?;
    if let Some(path) = &a.facets_out {
        let mut buf = Vec::new();
        facet_set(&ps)?.write_csv(&mut buf)?;
        fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(out)
}

fn cmd_kfacets(a: &KfacetsArgs, workers: usize) -> anyhow::Result<Output> {
    let cfg = RunConfig::new(a.trials, a.seed, workers);
    KFacetFormulaInputs::new(a.n, a.d, a.k.unwrap_or(0))?;
    let m = a.n - a.d;
    let ks: Vec<usize> = match a.k {
        Some(k) => vec![k],
        None => (0..=m).collect(),
    };
    let exact: Vec<f64> = ks
        .iter()
        .map(|&k| kfacet_expectation_exact(KFacetFormulaInputs::new(a.n, a.d, k)?))
        .collect::<crate::Result<_>>()?;
    let params = json!({"d": a.d, "n": a.n, "k": a.k, "all_k": a.all_k});
    let mut out = Output::new("jsonl");
    let record = match a.mode {
        KfacetMode::Exact => {
            let logs: Vec<f64> = ks
                .iter()
                .map(|&k| kfacet_log_expectation_exact(KFacetFormulaInputs::new(a.n, a.d, k)?))
                .collect::<crate::Result<_>>()?;
            let probs: Vec<f64> = ks
                .iter()
                .map(|&k| kfacet_probability_exact(KFacetFormulaInputs::new(a.n, a.d, k)?))
                .collect::<crate::Result<_>>()?;
            if a.all_k {
                json!({"name": "kfacet_expectation_exact", "params": params, "values": exact,
                       "log_values": logs, "probabilities": probs, "status": "ok"})
            } else {
                json!({"name": "kfacet_expectation_exact", "params": params, "value": exact[0],
                       "log_value": logs[0], "probability": probs[0], "status": "ok"})
            }
        }
        KfacetMode::Mc => {
            let params = json!({"d": a.d, "n": a.n, "k": a.k, "all_k": a.all_k, "trials": a.trials, "seed": a.seed});
            if a.all_k {
                let est = kfacet_profile_mc(a.n, a.d, &cfg)?;
                let list: Vec<Value> = est.iter().map(estimate_json).collect();
                json!({"name": "kfacet_expectation_mc", "params": params, "estimates": list, "exact": exact, "status": "ok"})
            } else {
                let est = kfacet_expectation_mc(a.n, a.d, ks[0], &cfg)?;
                json!({"name": "kfacet_expectation_mc", "params": params, "estimate": estimate_json(&est),
                       "exact": exact[0], "status": "ok"})
            }
        }
        KfacetMode::Reduced => {
            let params = json!({"d": a.d, "n": a.n, "k": a.k, "all_k": a.all_k, "trials": a.trials, "seed": a.seed});
            let subsets = binomial(a.n as u64, a.d as u64).map_or(f64::INFINITY, |c| c as f64);
            let mut probs = Vec::new();
            let mut expectations = Vec::new();
            for &k in &ks {
                let p = reduced_kfacet_probability_mc(a.n, a.d, k, &cfg)?;
                expectations.push(estimate_json(&p.scaled(subsets)));
                probs.push(estimate_json(&p));
            }
            if a.all_k {
                json!({"name": "kfacet_reduced_mc", "params": params, "probabilities": probs,
                       "expectations": expectations, "exact": exact, "status": "ok"})
            } else {
                json!({"name": "kfacet_reduced_mc", "params": params, "probability": probs[0],
                       "estimate": expectations[0], "exact": exact[0], "status": "ok"})
            }
        }
    };
    out.line(&record)?;
    Ok(out)
}

fn constant_json(c: &ConstantResult, params: Value) -> Value {
    json!({"name": c.name, "params": params, "value": c.value, "argmax": c.argmax,
           "grid_resolution": c.diagnostics.grid_resolution,
           "candidates": c.diagnostics.candidates, "status": "ok"})
}

fn cmd_constants(a: &ConstantsArgs) -> anyhow::Result<Output> {
    let mut out = Output::new("jsonl");
    match &a.target {
        ConstantsTarget::Kfacet { alpha, r, statement_exponents } => {
            let variant = if *statement_exponents { ExponentVariant::Statement } else { ExponentVariant::Proof };
            let c = c_alpha_r_with(*alpha, *r, variant)?;
            let base = growth_base_kfacet_with(*alpha, *r, variant)?;
            let params = json!({"alpha": alpha, "r": r, "exponents": variant});
            let mut rec = constant_json(&c, params.clone());
            rec["growth_base"] = json!(base);
            out.line(&rec)?;
        }
        ConstantsTarget::Estranged => {
            let mut main = None;
            for s1 in Sign::ALL {
                for s2 in Sign::ALL {
                    let c = estranged_constant(s1, s2)?;
                    out.line(&constant_json(&c, json!({"s1": s1, "s2": s2})))?;
                    if (s1, s2) == (Sign::Minus, Sign::Minus) {
                        main = Some(c.value);
                    }
                }
            }
            let reduced = estranged_constant_reduced()?;
            out.line(&constant_json(&reduced, json!({})))?;
            let c = main.unwrap_or(reduced.value);
            out.line(&json!({"name": "four_c", "params": {"source": "estranged_constant(-,-)"},
                             "value": 4.0 * c, "status": "ok"}))?;
        }
    }
    Ok(out)
}

fn cmd_estranged(a: &EstrangedArgs, workers: usize) -> anyhow::Result<Output> {
    let cfg = RunConfig::new(a.trials, a.seed, workers);
    let c_pair = estranged_constant_reduced()?.value;
    let params = json!({"d": a.d, "trials": a.trials, "seed": a.seed});
    let root = |x: f64| x.powf(1.0 / a.d as f64);
    let rec = match a.mode {
        EstrangedMode::Mc => {
            let est = estranged_expectation_mc(a.d, &cfg)?;
            json!({"name": "estranged_expectation_mc", "params": params, "estimate": estimate_json(&est),
                   "root": root(est.mean), "four_c": 4.0 * c_pair,
                   "half_binomial": binomial(2 * a.d as u64, a.d as u64).map(|c| c as f64 / 2.0),
                   "status": "ok"})
        }
        EstrangedMode::Pairprob => {
            let est = pair_facet_probability_mc(a.d, &cfg)?;
            json!({"name": "pair_facet_probability_mc", "params": params, "estimate": estimate_json(&est),
                   "root": root(est.mean), "c_pair": c_pair, "status": "ok"})
        }
    };
    let mut out = Output::new("jsonl");
    out.line(&rec)?;
    Ok(out)
}

fn cmd_growth(a: &GrowthArgs, workers: usize) -> anyhow::Result<Output> {
    if a.d_min == 0 || a.d_min > a.d_max {
        bail!(Error::InvalidParameter(format!("bad dimension range {}..={}", a.d_min, a.d_max)));
    }
    let cfg = RunConfig::new(a.trials, a.seed, workers);
    let dims: Vec<usize> = (a.d_min..=a.d_max).collect();
    let target = if a.middle { GrowthTarget::Middle } else { GrowthTarget::Facets };
    let rows = facet_growth_table(a.alpha, &dims, target, &cfg)?;
    let mut out = Output::new("csv");
    write_growth_csv(&rows, &mut out.bytes)?;
    Ok(out)
}

fn report_json(r: &VerificationReport) -> Value {
    let mut v = json!({"name": r.name, "params": r.params, "theory": r.theory, "criterion": r.criterion,
                       "status": if r.passed { "pass" } else { "fail" }});
    if let Some(e) = &r.estimate {
        v["estimate"] = estimate_json(e);
    }
    if let Some(z) = r.z {
        v["z"] = json!(z);
    }
    if !r.details.is_null() {
        v["details"] = r.details.clone();
    }
    v
}

fn check_label(r: &VerificationReport) -> String {
    let params: BTreeMap<String, Value> = serde_json::from_value(r.params.clone()).unwrap_or_default();
    let keys: Vec<String> = params
        .iter()
        .filter(|(k, _)| !matches!(k.as_str(), "trials" | "seed" | "full_trials" | "reduced_trials" | "reduced_seed"))
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    format!("{}({})", r.name, keys.join(","))
}

fn cmd_verify(a: &VerifyArgs, workers: usize) -> anyhow::Result<Output> {
    let suite: Suite = a.suite.parse()?;
    let reports = run_suite(suite, a.seed, workers, &SuiteBudget::default(), Caps::default())?;
    let mut out = Output::new("jsonl");
    for r in &reports {
        out.line(&report_json(r))?;
        let status = if r.passed { "pass" } else { "FAIL" };
        let observed = r.estimate.map_or(String::from("-"), |e| format!("{:.6}", e.mean));
        let z = r.z.map_or(String::from("-"), |z| format!("{z:.3}"));
        eprintln!("{status:4}  {:<52} theory {:<12.6} observed {:<12} z {}", check_label(r), r.theory, observed, z);
        if !r.passed {
            out.failed.push(check_label(r));
        }
    }
    Ok(out)
}
