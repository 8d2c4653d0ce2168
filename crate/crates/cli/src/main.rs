use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gknn::estimators::{estimate, Dataset, EstimateResult, EstimatorConfig, EstimatorError, Method};
use gknn::harness::io::{read_meta, read_table, write_dataset, DatasetMeta, TableError};
use gknn::harness::{parse_seeds, preset, run_sweep, write_outputs, HarnessError, SweepSpec};
use gknn::models::{generate, Family, FamilySpec, ModelError};
use gknn::neighbors::PointSet;

/// Geometric k-nearest-neighbor entropy and mutual information estimates.
#[derive(Parser)]
#[command(name = "gknn", version)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, env = "GKNN_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a sample from a benchmark family and write it as CSV.
    Gen(GenArgs),
    /// Estimate the differential entropy of selected columns.
    Entropy(EntropyArgs),
    /// Estimate the mutual information between two column groups.
    Mi(MiArgs),
    /// Run a sweep preset or spec file.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenArgs {
    /// uniform_ridge, gaussian_ridge, gaussian4d, henon_coupled, corr_gaussian (or family1..family4)
    #[arg(long)]
    family: String,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EntropyMethod {
    Gknn,
    Kl,
}

#[derive(Clone, Copy, ValueEnum)]
enum MiMethod {
    Gknn,
    Ksg,
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(long)]
    input: PathBuf,
    /// 0-based columns, e.g. `0,2` or `0-3`; all columns by default.
    #[arg(long)]
    cols: Option<String>,
    #[arg(long, value_enum, default_value = "gknn")]
    method: EntropyMethod,
    /// Default: 20 for gknn, 4 for kl.
    #[arg(long)]
    k: Option<usize>,
    /// Report bits instead of nats.
    #[arg(long)]
    bits: bool,
}

#[derive(Args)]
struct MiArgs {
    #[arg(long)]
    input: PathBuf,
    /// X columns; default from the sidecar, or 0 for a 2-column file.
    #[arg(long)]
    xcols: Option<String>,
    /// Y columns; default from the sidecar, or 1 for a 2-column file.
    #[arg(long)]
    ycols: Option<String>,
    #[arg(long, value_enum, default_value = "gknn")]
    method: MiMethod,
    /// Default: 20 for gknn, 4 for ksg.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    bits: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    preset: Option<String>,
    /// Path to a sweep spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Override the seed list, e.g. `1..3`.
    #[arg(long)]
    seeds: Option<String>,
    /// Override the fixed sample size (or the n grid).
    #[arg(long)]
    n: Option<usize>,
    /// Record wall-clock times (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
}

/// Exit 1: bad invocation. Exit 2: numerical or data failure.
enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) => m,
        }
    }
}

impl From<EstimatorError> for Failure {
    fn from(e: EstimatorError) -> Self {
        match e {
            EstimatorError::Config(_) => Failure::Usage(e.to_string()),
            other => match other.point_index() {
                Some(i) => Failure::Data(format!("{other} (row {i})")),
                None => Failure::Data(other.to_string()),
            },
        }
    }
}

impl From<TableError> for Failure {
    fn from(e: TableError) -> Self {
        match e {
            TableError::Io { .. } => Failure::Usage(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Io { .. } | HarnessError::Csv(_) => Failure::Data(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Entropy(a) => cmd_entropy(a),
        Command::Mi(a) => cmd_mi(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    let family: Family = a.family.parse().map_err(|e: ModelError| Failure::Usage(format!("--family: {e}")))?;
    let spec = FamilySpec::new(family, a.alpha, a.n, a.seed);
    family.check_alpha(a.alpha).map_err(|e| Failure::Usage(format!("--alpha: {e}")))?;
    spec.validate().map_err(|e| Failure::Usage(format!("--n: {e}")))?;
    let generated = generate(&spec).map_err(|e| Failure::Data(e.to_string()))?;
    let data = generated.dataset;
    let meta = DatasetMeta {
        family,
        alpha: a.alpha,
        n: a.n,
        seed: a.seed,
        x_cols: data.x_columns().collect(),
        y_cols: data.y_columns().collect(),
        basin_restarts: generated.basin_restarts,
    };
    let config = json!({
        "command": "gen",
        "family": family.name(),
        "alpha": a.alpha,
        "n": a.n,
        "seed": a.seed,
        "out": a.out.as_ref().map(|p| p.display().to_string()),
        "x_cols": meta.x_cols,
        "y_cols": meta.y_cols,
        "basin_restarts": meta.basin_restarts,
    });
    match &a.out {
        Some(path) => {
            write_dataset(path, &data, Some(&meta)).map_err(|e| Failure::Data(e.to_string()))?;
            println!("{config}");
        }
        None => {
            eprintln!("{config}");
            print!("{}", gknn::harness::io::points_to_csv(data.points()));
        }
    }
    Ok(())
}

/// Parses `0,2,4-6` into 0-based column indices.
fn parse_columns(flag: &str, s: &str, width: usize) -> Result<Vec<usize>, Failure> {
    let bad = |msg: String| Failure::Usage(format!("{flag}: {msg}"));
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad(format!("'{t}' is not a column index")));
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (parse(lo)?, parse(hi)?);
                if hi < lo {
                    return Err(bad(format!("empty range {part}")));
                }
                out.extend(lo..=hi);
            }
            None => out.push(parse(part)?),
        }
    }
    if let Some(c) = out.iter().find(|&&c| c >= width) {
        return Err(bad(format!("column {c} does not exist (file has {width} columns)")));
    }
    Ok(out)
}

fn load(path: &Path) -> Result<PointSet, Failure> {
    Ok(read_table(path)?)
}

fn report(result: &EstimateResult, bits: bool, config: Value) -> Value {
    let scale = if bits { 1.0 / LN_2 } else { 1.0 };
    json!({
        "method": result.config.method.name(),
        "k": result.config.k,
        "n": result.n,
        "d_x": result.d_x,
        "d_y": result.d_y,
        "estimate": result.value * scale,
        "units": if bits { "bits" } else { "nats" },
        "diagnostics": {
            "sigma_floor_hits": result.diagnostics.sigma_floor_hits,
            "inlier_fallbacks": result.diagnostics.inlier_fallbacks,
            "correction_terms": result.diagnostics.correction_terms,
            "wall_ms": result.diagnostics.wall_time.as_secs_f64() * 1e3,
        },
        "config": config,
    })
}

fn resolved(cfg: &EstimatorConfig) -> Value {
    json!({
        "method": cfg.method.name(),
        "k": cfg.k,
        "sigma_ratio_floor": cfg.sigma_ratio_floor,
        "boundary_tol": cfg.boundary_tol,
        "threads": rayon::current_num_threads(),
    })
}

fn cmd_entropy(a: EntropyArgs) -> Result<(), Failure> {
    let table = load(&a.input)?;
    let cols = match &a.cols {
        Some(s) => parse_columns("--cols", s, table.dim())?,
        None => (0..table.dim()).collect(),
    };
    let data = Dataset::from_columns(&table, &cols, &[])?;
    let method = match a.method {
        EntropyMethod::Gknn => Method::GknnEntropy,
        EntropyMethod::Kl => Method::KlEntropy,
    };
    let cfg = EstimatorConfig::new(method, a.k.unwrap_or(method.default_k()));
    let result = estimate(&data, &cfg)?;
    let mut config = resolved(&cfg);
    config["input"] = json!(a.input.display().to_string());
    config["cols"] = json!(cols);
    println!("{}", report(&result, a.bits, config));
    Ok(())
}

fn cmd_mi(a: MiArgs) -> Result<(), Failure> {
    let table = load(&a.input)?;
    let meta = read_meta(&a.input)?;
    let (x, y) = match (&a.xcols, &a.ycols, &meta) {
        (Some(x), Some(y), _) => (parse_columns("--xcols", x, table.dim())?, parse_columns("--ycols", y, table.dim())?),
        (None, None, Some(m)) => (m.x_cols.clone(), m.y_cols.clone()),
        (None, None, None) if table.dim() == 2 => (vec![0], vec![1]),
        _ => return Err(Failure::Usage("give both --xcols and --ycols (no usable defaults for this file)".into())),
    };
    let data = Dataset::from_columns(&table, &x, &y)?;
    if data.d_y() == 0 {
        return Err(Failure::Usage("--ycols: no Y columns".into()));
    }
    let method = match a.method {
        MiMethod::Gknn => Method::GknnMi,
        MiMethod::Ksg => Method::KsgMi,
    };
    let cfg = EstimatorConfig::new(method, a.k.unwrap_or(method.default_k()));
    let result = estimate(&data, &cfg)?;
    let mut config = resolved(&cfg);
    config["input"] = json!(a.input.display().to_string());
    config["xcols"] = json!(x);
    config["ycols"] = json!(y);
    println!("{}", report(&result, a.bits, config));
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Failure> {
    let mut spec: SweepSpec = match (&a.preset, &a.spec) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => {
            if !path.exists() {
                return Err(Failure::Usage(format!("--spec: {} does not exist", path.display())));
            }
            SweepSpec::from_file(path)?
        }
        (None, None) => unreachable!("clap requires one of --preset/--spec"),
    };
    if let Some(s) = &a.seeds {
        spec = spec.with_seeds(parse_seeds(s).map_err(|e| Failure::Usage(format!("--seeds: {e}")))?);
    }
    if let Some(n) = a.n {
        spec = spec.with_n(n);
    }
    spec.timing |= a.timing;
    spec.validate()?;
    eprintln!("{}", serde_json::to_string(&spec).expect("spec serializes"));
    let records = run_sweep(&spec)?;
    let paths = write_outputs(&a.out_dir, &spec.name, &records)?;
    let failed = records.iter().filter(|r| r.failed()).count();
    if failed > 0 {
        eprintln!("{failed} of {} runs failed; see the error column of {}", records.len(), paths.records_csv.display());
    }
    println!("{}", paths.summary_csv.display());
    if failed == records.len() {
        return Err(Failure::Data("every cell failed".into()));
    }
    Ok(())
}
