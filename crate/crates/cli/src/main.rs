use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use iegrowth::config::AnalysisConfig;
use iegrowth::ie::{cumulate_growth, ie_transform};
use iegrowth::ingest::{parse_series, Format};
use iegrowth::pipeline::{run_analyze_into, PipelineError, Stage, REPORT_FILE};
use iegrowth::regress::{fit_elasticity, fit_growth};
use iegrowth::report::{fmt_num, fmt_percent, round_sig};
use iegrowth::{Error, ErrorKind, IESeries, Phase, Unit};
use serde_json::json;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_FIT: u8 = 3;

#[derive(Parser)]
#[command(name = "iegrowth", about = "Information-entropy growth analysis of annual series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline from a config file.
    Analyze {
        config: PathBuf,
        /// Write outputs here instead of the config's output_dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the IE transform of one series as year,ie rows.
    Transform {
        file: PathBuf,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Fit the growth rate of one series over a window.
    Fit {
        file: PathBuf,
        #[arg(long)]
        from: i32,
        #[arg(long)]
        to: i32,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Fit the elasticity of one series on another over a window.
    Elasticity {
        file_y: PathBuf,
        file_x: PathBuf,
        #[arg(long)]
        from: i32,
        #[arg(long)]
        to: i32,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print the tool version.
    Version,
}

#[derive(Args)]
struct InputArgs {
    /// Base year; defaults to the earliest year in the file.
    #[arg(long)]
    base_year: Option<i32>,
    /// generic_year_value, ons_timeseries or oecd_long.
    #[arg(long, default_value = "generic_year_value")]
    format: String,
    /// index, percent_change_per_annum, currency_level or population_count.
    #[arg(long, default_value = "index")]
    unit: String,
    /// Country code for oecd_long files.
    #[arg(long, default_value = "GBR")]
    country: String,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Pipeline(PipelineError),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Usage => EXIT_USAGE,
        ErrorKind::Data => EXIT_DATA,
        ErrorKind::Fit => EXIT_FIT,
    }
}

fn load_ie(path: &Path, input: &InputArgs) -> Result<IESeries, Failure> {
    let format: Format = input.format.parse()?;
    let unit: Unit = input.unit.parse()?;
    let bytes = std::fs::read(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());
    let series = parse_series(&bytes, format, &name, unit, &input.country)?;
    let base = input
        .base_year
        .or(series.first_year())
        .ok_or_else(|| Error::EmptySeries(Some(name.clone())))?;
    let levels = if unit.is_level() {
        series
    } else {
        cumulate_growth(&series, base)?
    };
    Ok(ie_transform(&levels, base)?)
}

fn window(from: i32, to: i32) -> Result<Phase, Failure> {
    Phase::new(format!("{from}-{to}"), from, to).map_err(|e| Failure::Usage(e.to_string()))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze { config, out } => {
            let cfg = AnalysisConfig::load(&config).map_err(|error| {
                Failure::Pipeline(PipelineError {
                    stage: Stage::Config,
                    role: None,
                    error,
                })
            })?;
            let out = out.unwrap_or_else(|| cfg.output_dir.clone());
            let run = run_analyze_into(&cfg, &out).map_err(Failure::Pipeline)?;
            println!("wrote {}", out.join(REPORT_FILE).display());
            if let Some(p) = &run.report.prediction {
                println!(
                    "prediction accuracy {} (comparison slope {})",
                    fmt_percent(p.result.accuracy),
                    fmt_num(p.result.comparison_slope)
                );
            }
        }
        Command::Transform { file, input } => {
            let ie = load_ie(&file, &input)?;
            println!("year,ie");
            for (y, v) in ie.iter() {
                println!("{y},{}", fmt_num(v));
            }
        }
        Command::Fit { file, from, to, input } => {
            let ie = load_ie(&file, &input)?;
            let g = fit_growth(&ie, &window(from, to)?)?;
            let doc = json!({
                "series": ie.name(),
                "base_year": ie.base_year(),
                "from": from,
                "to": to,
                "n": g.fit.n,
                "lambda": round_sig(g.lambda),
                "intercept": round_sig(g.fit.intercept),
                "r_squared": round_sig(g.fit.r_squared),
                "annual_rate": round_sig(g.annual_rate),
                "annual_rate_pct": fmt_percent(g.annual_rate),
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        Command::Elasticity { file_y, file_x, from, to, input } => {
            let y = load_ie(&file_y, &input)?;
            let x = load_ie(&file_x, &input)?;
            let e = fit_elasticity(&y, &x, &window(from, to)?)?;
            let doc = json!({
                "response": e.response,
                "predictor": e.predictor,
                "from": from,
                "to": to,
                "n": e.fit.n,
                "slope": round_sig(e.fit.slope),
                "intercept": round_sig(e.fit.intercept),
                "r_squared": round_sig(e.fit.r_squared),
                "years": e.years,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        Command::Version => {
            println!("iegrowth {}", env!("CARGO_PKG_VERSION"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.kind()))
        }
        Err(Failure::Pipeline(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.kind()))
        }
    }
}
