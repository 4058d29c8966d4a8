use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use repfn::analysis::{monotonicity_report, thm14_experiment, MonotonicityReport, Thm14Options};
use repfn::formats::{self, SetFile};
use repfn::{rep_series, Mode, SetSpec, Thm14Config, COMPLETE};

mod verify;

/// Exact additive representation functions and the checks built on them.
#[derive(Parser)]
#[command(name = "repfn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a set and write it in the set file format.
    Set(SetArgs),
    /// Compute R_(A,k)(n) for n = 0..=to.
    Rep(RepArgs),
    /// Scan a series for decreases and plateaus.
    Scan(ScanArgs),
    /// Run one of the verification suites.
    Verify(verify::VerifyArgs),
    /// Run a block-set experiment.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SetKind {
    Explicit,
    Complement,
    Thm14,
    ThueMorse,
    RudinShapiro,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetFormat {
    Json,
    Lines,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct SetArgs {
    #[arg(long, value_enum, required_unless_present = "file")]
    kind: Option<SetKind>,
    /// JSON set description, used instead of the flags below.
    #[arg(long, conflicts_with = "kind")]
    file: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    elements: Option<Vec<u64>>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<u64>>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    strict_paper_mode: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: SetFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RepArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    k: u32,
    /// Last n; defaults to the set's horizon.
    #[arg(long)]
    to: Option<u64>,
    #[arg(long, default_value = "ordered")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Series as `n,value` CSV or as a JSON series file.
    #[arg(long)]
    series: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: OutFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    which: Experiment,
    #[arg(long)]
    k: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    schedule: Vec<u64>,
    /// Materialization horizon; defaults to the largest candidate point.
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    strict_paper_mode: bool,
    /// Candidate points up to this are also checked through the series route.
    #[arg(long, default_value_t = 2_000_000)]
    series_check_limit: u64,
    #[command(flatten)]
    budget: BudgetArg,
    /// JSON report path; a CSV mirror is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Thm14,
}

#[derive(Args)]
pub(crate) struct BudgetArg {
    /// Cap on tuple visits for pointwise routes.
    #[arg(long, env = "REPFN_BUDGET", default_value_t = repfn::pointwise::DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
}

/// How a command that ran to completion ended.
pub(crate) enum Outcome {
    Pass,
    CheckFailed,
    BudgetExceeded,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Set(a) => cmd_set(a),
        Command::Rep(a) => cmd_rep(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Verify(a) => verify::run(a),
        Command::Experiment(a) => cmd_experiment(a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Ok(Outcome::BudgetExceeded) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = e
                .chain()
                .any(|c| matches!(c.downcast_ref(), Some(repfn::Error::BudgetExceeded { .. })));
            ExitCode::from(if budget { 3 } else { 2 })
        }
    }
}

pub(crate) fn read_set_file(path: &Path) -> anyhow::Result<SetSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    formats::read_set(&text).with_context(|| format!("parsing set file {}", path.display()))
}

/// Writes to `out`, or to stdout when no path is given.
pub(crate) fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `--to`, defaulting to a finite set horizon.
pub(crate) fn last_n(to: Option<u64>, set: &SetSpec) -> anyhow::Result<u64> {
    match to {
        Some(n) => Ok(n),
        None if set.is_complete() => Err(anyhow!("missing --to: the set file declares no horizon")),
        None => Ok(set.horizon()),
    }
}

fn required<T>(v: Option<T>, flag: &str, kind: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| anyhow!("missing --{flag}: required for --kind {kind}"))
}

fn build_set(a: &SetArgs) -> anyhow::Result<SetSpec> {
    if let Some(path) = &a.file {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: SetFile = serde_json::from_str(&text).context("parsing set description")?;
        return Ok(file.build()?);
    }
    let file = match a.kind.expect("clap requires --kind without --file") {
        SetKind::Explicit | SetKind::Complement => {
            let elements = a.elements.clone().unwrap_or_default();
            let horizon = match (a.kind, a.horizon) {
                (_, Some(h)) => h,
                (Some(SetKind::Explicit), None) => COMPLETE,
                _ => required(None, "horizon", "complement")?,
            };
            if matches!(a.kind, Some(SetKind::Explicit)) {
                SetFile::Explicit {
                    horizon,
                    elements,
                    source: None,
                }
            } else {
                SetFile::Complement { horizon, elements }
            }
        }
        SetKind::Thm14 => {
            let k = required(a.k, "k", "thm14")?;
            let schedule = required(a.schedule.clone(), "schedule", "thm14")?;
            let cfg = Thm14Config::new(k, schedule.clone(), a.strict_paper_mode)?;
            let horizon = match a.horizon {
                Some(h) => h,
                None => {
                    let top = cfg.block_max(*schedule.last().expect("validated nonempty"));
                    u64::try_from(top).map_err(|_| anyhow!("--horizon required: the last block does not fit in 64 bits"))?
                }
            };
            SetFile::Thm14 {
                horizon,
                k,
                schedule,
                strict_paper_mode: a.strict_paper_mode,
            }
        }
        SetKind::ThueMorse => SetFile::ThueMorse {
            horizon: required(a.horizon, "horizon", "thue-morse")?,
        },
        SetKind::RudinShapiro => SetFile::RudinShapiro {
            horizon: required(a.horizon, "horizon", "rudin-shapiro")?,
        },
    };
    Ok(file.build()?)
}

fn cmd_set(a: SetArgs) -> anyhow::Result<Outcome> {
    let set = build_set(&a)?;
    let text = match a.format {
        SetFormat::Json => formats::write_set_json(&set)?,
        SetFormat::Lines => formats::write_set_lines(&set),
    };
    let top = if set.is_complete() { set.max().unwrap_or(0) } else { set.horizon() };
    let summary = format!("elements: {}\nA({top}) = {}", set.len(), set.count_up_to(top));
    match &a.out {
        Some(p) => {
            emit(Some(p), &text)?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_rep(a: RepArgs) -> anyhow::Result<Outcome> {
    let set = read_set_file(&a.set)?;
    let to = last_n(a.to, &set)?;
    let series = rep_series(&set, a.k, a.mode, to)?;
    let text = match a.format {
        OutFormat::Csv => formats::write_series_csv(&series)?,
        OutFormat::Json => formats::write_series_json(&series)?,
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Outcome::Pass)
}

fn cmd_scan(a: ScanArgs) -> anyhow::Result<Outcome> {
    let text = fs::read_to_string(&a.series).with_context(|| format!("reading {}", a.series.display()))?;
    let report = if text.trim_start().starts_with('{') {
        monotonicity_report(&formats::read_series_json(&text)?)
    } else {
        let (first, values) = formats::read_values_csv::<BigUint>(&text)?;
        let mut r = MonotonicityReport::scan(&values);
        if first > 0 {
            shift(&mut r, first);
        }
        r
    };
    let out = match a.format {
        OutFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
        OutFormat::Csv => formats::write_monotonicity_csv(&report)?,
    };
    emit(a.out.as_deref(), &out)?;
    Ok(Outcome::Pass)
}

/// Re-indexes a report scanned from a series whose first row is `n = first`.
fn shift(r: &mut MonotonicityReport, first: u64) {
    r.horizon += first;
    for n in r.strict_decreases.iter_mut().chain(r.plateaus.iter_mut()) {
        *n += first;
    }
    if let Some(n) = r.last_violation.as_mut() {
        *n += first;
    }
}

fn cmd_experiment(a: ExperimentArgs) -> anyhow::Result<Outcome> {
    let Experiment::Thm14 = a.which;
    let cfg = Thm14Config::new(a.k, a.schedule, a.strict_paper_mode)?;
    let report = thm14_experiment(
        &cfg,
        &Thm14Options {
            budget: a.budget.budget,
            series_check_limit: a.series_check_limit,
            horizon: a.horizon,
        },
    );
    let json = serde_json::to_string_pretty(&report)? + "\n";
    emit(a.out.as_deref(), &json)?;
    if let Some(path) = &a.out {
        emit(Some(&path.with_extension("csv")), &formats::write_thm14_csv(&report)?)?;
    }
    if let Some(p) = report.first_failure() {
        eprintln!("identity check failed at n = {}", p.n.map_or("?".into(), |n| n.to_string()));
        return Ok(Outcome::CheckFailed);
    }
    if report.budget_exceeded > 0 {
        eprintln!("{} candidate point(s) exceeded the budget", report.budget_exceeded);
        return Ok(Outcome::BudgetExceeded);
    }
    Ok(Outcome::Pass)
}
