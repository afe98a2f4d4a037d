//! Command-line front end: `evolve`, `report`, `gen-data` and `validate-log`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fibevo::data::{generate_synthetic, load_csv, SyntheticKind, SyntheticSpec};
use fibevo::engine::{self, mask_elapsed, validate_log, EngineConfig, JsonlSink, RateUpdate, RunLog, SigmaScope};
use fibevo::evaluation::Metric;
use fibevo::learners::Dataset;
use fibevo::moo::HvReference;
use fibevo::search_space::SearchSpace;
use fibevo::stats::compare_report;

#[derive(Debug, Parser)]
#[command(name = "fibevo", version, about = "Adaptive evolutionary search over ML pipelines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one search and write its generation log.
    Evolve(EvolveArgs),
    /// Compare two sets of runs across datasets.
    Report(ReportArgs),
    /// Write a synthetic dataset as CSV.
    GenData(GenDataArgs),
    /// Check run logs for internal consistency.
    ValidateLog(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Adaptive,
    Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SigmaScopeArg {
    All,
    Population,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RateUpdateArg {
    EveryGen,
    OnStagnation,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// CSV file with a header row.
    #[arg(long, required_unless_present = "synthetic", conflicts_with = "synthetic")]
    pub data: Option<PathBuf>,
    /// Label column name or 0-based index; defaults to the last column.
    #[arg(long)]
    pub label_col: Option<String>,
    /// Generated dataset instead of a file: `kind:instances:features:classes:noise[:seed]`.
    #[arg(long)]
    pub synthetic: Option<String>,
    /// Dataset name written to the log; defaults to the file stem or generator spec.
    #[arg(long)]
    pub dataset_id: Option<String>,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    pub time_budget: u64,
    #[arg(long, default_value_t = 5)]
    pub cv_folds: usize,
    #[arg(long, default_value = "f1-macro")]
    pub metric: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Per-pipeline evaluation timeout in seconds.
    #[arg(long, default_value_t = 10.0)]
    pub eval_timeout: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Adaptive)]
    pub mode: ModeArg,
    /// Output run log (JSON lines).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = SigmaScopeArg::All)]
    pub sigma_scope: SigmaScopeArg,
    #[arg(long, value_enum, default_value_t = RateUpdateArg::EveryGen)]
    pub rate_update: RateUpdateArg,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Run logs of the first method.
    #[arg(long = "a", num_args = 1.., required = true)]
    pub runs_a: Vec<PathBuf>,
    /// Run logs of the second method.
    #[arg(long = "b", num_args = 1.., required = true)]
    pub runs_b: Vec<PathBuf>,
    #[arg(long, default_value = "A")]
    pub name_a: String,
    #[arg(long, default_value = "B")]
    pub name_b: String,
    /// Hypervolume reference point `<score>,<complexity>`.
    #[arg(long, default_value = "0,10")]
    pub hv_ref: String,
    /// Include the per-metric signed-rank tests.
    #[arg(long)]
    pub wilcoxon: bool,
    /// Directory for report.json, report.txt and frontier CSVs.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenDataArgs {
    /// blobs, xor or spirals.
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 500)]
    pub instances: usize,
    #[arg(long, default_value_t = 5)]
    pub features: usize,
    #[arg(long, default_value_t = 3)]
    pub classes: usize,
    #[arg(long, default_value_t = 1.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(required = true)]
    pub logs: Vec<PathBuf>,
    /// Also require the first log to equal this one with `elapsed_ms` masked.
    #[arg(long)]
    pub same_as: Option<PathBuf>,
}

/// Parses `kind:instances:features:classes:noise[:seed]`.
pub fn parse_synthetic(s: &str) -> Result<SyntheticSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(5..=6).contains(&parts.len()) {
        bail!("synthetic spec must be kind:instances:features:classes:noise[:seed], got {s:?}");
    }
    Ok(SyntheticSpec {
        kind: parts[0].parse::<SyntheticKind>()?,
        instances: parts[1].parse().context("instances")?,
        features: parts[2].parse().context("features")?,
        classes: parts[3].parse().context("classes")?,
        noise: parts[4].parse().context("noise")?,
        seed: parts.get(5).map(|v| v.parse()).transpose().context("seed")?.unwrap_or(0),
    })
}

fn load_dataset(args: &EvolveArgs) -> Result<(Dataset, String)> {
    if let Some(spec) = &args.synthetic {
        let d = generate_synthetic(&parse_synthetic(spec)?)?;
        return Ok((d, spec.clone()));
    }
    let path = args.data.as_ref().expect("clap enforces --data or --synthetic");
    let d = load_csv(path, args.label_col.as_deref())?;
    let id = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok((d, id))
}

pub fn engine_config(args: &EvolveArgs, dataset_id: String) -> Result<EngineConfig> {
    if args.time_budget == 0 {
        bail!("--time-budget must be positive");
    }
    if args.cv_folds < 2 {
        bail!("--cv-folds must be at least 2");
    }
    if args.workers == 0 {
        bail!("--workers must be at least 1");
    }
    if !(args.eval_timeout.is_finite() && args.eval_timeout >= 0.0) {
        bail!("--eval-timeout must be a non-negative number of seconds");
    }
    Ok(EngineConfig {
        time_budget: Duration::from_secs(args.time_budget),
        cv_folds: args.cv_folds,
        metric: args.metric.parse::<Metric>()?,
        seed: args.seed,
        workers: args.workers,
        eval_timeout: Duration::from_secs_f64(args.eval_timeout),
        sigma_scope: match args.sigma_scope {
            SigmaScopeArg::All => SigmaScope::All,
            SigmaScopeArg::Population => SigmaScope::Population,
        },
        rate_update: match args.rate_update {
            RateUpdateArg::EveryGen => RateUpdate::EveryGen,
            RateUpdateArg::OnStagnation => RateUpdate::OnStagnation,
        },
        dataset_id,
    })
}

pub fn cmd_evolve(args: &EvolveArgs, out: &mut dyn Write) -> Result<()> {
    let (data, default_id) = load_dataset(args)?;
    let cfg = engine_config(args, args.dataset_id.clone().unwrap_or(default_id))?;
    let file = File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut sink = JsonlSink::new(BufWriter::new(file));
    let space = SearchSpace::default();
    let result = match args.mode {
        ModeArg::Adaptive => engine::run_adaptive(&space, &data, &cfg, &mut sink)?,
        ModeArg::Fixed => engine::run_fixed_baseline(&space, &data, &cfg, &mut sink)?,
    };
    let gens = result.log.records.len().saturating_sub(1);
    writeln!(out, "{} generations, {} evaluations", gens, result.stats.computed)?;
    writeln!(out, "{:>8}  {:>10}  pipeline", "score", "complexity")?;
    for p in result.front.points() {
        writeln!(out, "{:>8.4}  {:>10}  {}", p.score, p.complexity, p.key)?;
    }
    Ok(())
}

fn read_logs(paths: &[PathBuf]) -> Result<Vec<RunLog>> {
    paths.iter().map(|p| RunLog::read(p).with_context(|| format!("reading {}", p.display()))).collect()
}

/// File-name-safe form of a dataset id.
fn slug(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

pub fn cmd_report(args: &ReportArgs, out: &mut dyn Write) -> Result<()> {
    let hv_ref: HvReference = args.hv_ref.parse()?;
    let a = read_logs(&args.runs_a)?;
    let b = read_logs(&args.runs_b)?;
    let mut report = compare_report(&a, &b, hv_ref, &args.name_a, &args.name_b)?;
    if !args.wilcoxon {
        report.tests.clear();
    }
    let text = report.to_text();
    out.write_all(text.as_bytes())?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        let mut json = serde_json::to_string_pretty(&report)?;
        json.push('\n');
        fs::write(dir.join("report.json"), json)?;
        fs::write(dir.join("report.txt"), &text)?;
        for f in &report.frontiers {
            let path = dir.join(format!("frontier_{}.csv", slug(&f.dataset_id)));
            fs::write(path, f.to_csv(&report.method_a, &report.method_b))?;
        }
    }
    Ok(())
}

pub fn cmd_gen_data(args: &GenDataArgs) -> Result<()> {
    let spec = SyntheticSpec {
        kind: args.kind.parse()?,
        instances: args.instances,
        features: args.features,
        classes: args.classes,
        noise: args.noise,
        seed: args.seed,
    };
    write_csv(&generate_synthetic(&spec)?, &args.out)
}

/// Writes features as `f0..f{d-1}` followed by a `label` column.
pub fn write_csv(data: &Dataset, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    let header: Vec<String> = (0..data.n_features()).map(|j| format!("f{j}")).chain(["label".into()]).collect();
    writeln!(w, "{}", header.join(","))?;
    for i in 0..data.n_instances() {
        let row: Vec<String> = data.features.row(i).iter().map(|v| v.to_string()).collect();
        writeln!(w, "{},{}", row.join(","), data.labels[i])?;
    }
    w.flush()?;
    Ok(())
}

/// Returns whether every log passed.
pub fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write) -> Result<bool> {
    let mut ok = true;
    for path in &args.logs {
        let log = RunLog::read(path).with_context(|| format!("reading {}", path.display()))?;
        let violations = validate_log(&log);
        if violations.is_empty() {
            writeln!(out, "{}: ok ({} generations)", path.display(), log.records.len().saturating_sub(1))?;
        } else {
            ok = false;
            writeln!(out, "{}: {} violation(s)", path.display(), violations.len())?;
            for v in &violations {
                writeln!(out, "  {v}")?;
            }
        }
    }
    if let Some(other) = &args.same_as {
        let a = mask_elapsed(&fs::read_to_string(&args.logs[0])?)?;
        let b = mask_elapsed(&fs::read_to_string(other)?)?;
        if a == b {
            writeln!(out, "{} matches {} (elapsed_ms masked)", args.logs[0].display(), other.display())?;
        } else {
            ok = false;
            let (la, lb): (Vec<&str>, Vec<&str>) = (a.lines().collect(), b.lines().collect());
            let first = la.iter().zip(&lb).position(|(x, y)| x != y).unwrap_or(la.len().min(lb.len()));
            writeln!(
                out,
                "{} differs from {}: first difference at line {} ({} vs {} lines)",
                args.logs[0].display(),
                other.display(),
                first + 1,
                la.len(),
                lb.len()
            )?;
        }
    }
    Ok(ok)
}

/// Runs a parsed command, returning the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Evolve(a) => cmd_evolve(&a, out).map(|_| 0),
        Command::Report(a) => cmd_report(&a, out).map(|_| 0),
        Command::GenData(a) => cmd_gen_data(&a).map(|_| 0),
        Command::ValidateLog(a) => cmd_validate(&a, out).map(|ok| if ok { 0 } else { 1 }),
    }
}
