use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crosswise::ci_asymptotic::{ap_interval, moment_estimate, unbiased_estimate, wp_interval};
use crosswise::ci_exact::{cp_interval, ConfidenceLevel, IntervalEstimate, Method};
use crosswise::evaluation::{curve, PiGrid};
use crosswise::model::{mle, ModelConfig, ObservedCount};
use crosswise::numkernel::Probability;
use crosswise::privacy::{disclosure_probabilities, q_min, PrivacySpec};
use crosswise::sample_size::{check_design_grid, search, Criterion, DesignSpec, SearchOptions};
use crosswise::Error;

mod output;

use output::{write_csv, write_json, Cell, Format, OutputRecord, Table, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(
    name = "crosswise",
    version,
    about = "Interval estimation and sample-size design for the crosswise model"
)]
struct Cli {
    /// Output format; curves default to csv, everything else to json
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,

    /// Suppress diagnostics on standard error
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Confidence interval for one observed count
    Interval(IntervalArgs),
    /// Exact coverage and length characteristics along a grid of pi
    Coverage(CoverageArgs),
    /// Smallest sample size meeting a length criterion
    Samplesize(SampleSizeArgs),
    /// Admissible q for a design, or disclosure probabilities for (pi, q)
    Privacy(PrivacyArgs),
}

#[derive(Debug, Args, Serialize)]
struct IntervalArgs {
    #[arg(long)]
    n: u64,
    /// number of respondents reporting 1
    #[arg(long)]
    z: u64,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 0.95)]
    delta: f64,
    #[arg(long, default_value = "cp")]
    #[serde(serialize_with = "method_str")]
    method: Method,
}

#[derive(Debug, Args, Serialize)]
struct CoverageArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 0.95)]
    delta: f64,
    #[arg(long, default_value = "cp")]
    #[serde(serialize_with = "method_str")]
    method: Method,
    /// start:stop:step inside (0, 1), or a single value
    #[arg(long, allow_hyphen_values = true)]
    pi: String,
    /// length bound for the length-probability columns
    #[arg(long)]
    d: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
struct SampleSizeArgs {
    /// expected or assured
    #[serde(serialize_with = "criterion_str")]
    criterion: Criterion,
    #[arg(long)]
    pi0: f64,
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value_t = 0.95)]
    delta: f64,
    #[arg(long)]
    d: f64,
    #[arg(long)]
    lambda: Option<f64>,
    /// largest n tried
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    /// also re-check the criterion on a STEPS x STEPS (pi, q) grid at the result
    #[arg(long, value_name = "STEPS")]
    check_grid: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
struct PrivacyArgs {
    #[arg(long, requires = "gamma", conflicts_with_all = ["pi", "q"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pi0: Option<f64>,
    #[arg(long, requires = "pi0")]
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[arg(long, requires = "q", conflicts_with_all = ["pi0", "gamma"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pi: Option<f64>,
    #[arg(long, requires = "pi")]
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
}

fn method_str<S: serde::Serializer>(m: &Method, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(m.as_str())
}

fn criterion_str<S: serde::Serializer>(c: &Criterion, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(c.as_str())
}

/// Failure carried to the exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Library(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Library(Error::Domain(_)) => 2,
            Failure::Library(Error::Infeasible { .. } | Error::SearchExhausted { .. }) => 3,
            Failure::Library(Error::Numeric(_)) | Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("error: {m}"),
            Failure::Library(e) => format!("error: {e}"),
            Failure::Io(e) => format!("error: {e}"),
        }
    }
}

/// What a command hands back for printing.
struct Report {
    record: OutputRecord,
    table: Table,
    default_format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!("{}", first.trim());
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let report = match &cli.command {
        Command::Interval(args) => interval(args)?,
        Command::Coverage(args) => coverage(args)?,
        Command::Samplesize(args) => samplesize(args, cli.quiet)?,
        Command::Privacy(args) => privacy(args)?,
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.output.unwrap_or(report.default_format) {
        Format::Json => write_json(&mut out, &report.record)?,
        Format::Csv => write_csv(&mut out, &report.table)?,
    }
    out.flush()?;
    Ok(())
}

fn record(
    command: &'static str,
    inputs: &impl Serialize,
    results: serde_json::Value,
) -> OutputRecord {
    OutputRecord {
        schema_version: SCHEMA_VERSION,
        command,
        inputs: serde_json::to_value(inputs).expect("inputs serialize"),
        results,
    }
}

fn interval(args: &IntervalArgs) -> Result<Report, Failure> {
    let config = ModelConfig::new(args.n, args.q)?;
    let z = ObservedCount::new(args.z, &config)?;
    let level = ConfidenceLevel::new(args.delta)?;
    let ci: IntervalEstimate = match args.method {
        Method::Cp => cp_interval(&config, z, &level)?,
        Method::Wp => wp_interval(&config, z, &level)?,
        Method::Ap => ap_interval(&config, z, &level)?,
    };
    let pi_cm = mle(&config, z).get();
    let pi_c = moment_estimate(&config, z);
    let variance = unbiased_estimate(&config, z)
        .ok()
        .map(|e| e.variance_unbiased);
    // undefined when the estimate sits on the boundary
    let disclosure = match args.method {
        Method::Cp => disclosure_probabilities(Probability::new(pi_cm)?, config.q()).ok(),
        _ => None,
    };
    let results = json!({
        "method": ci.method.as_str(),
        "lower": ci.lower,
        "upper": ci.upper,
        "lower_degenerate": ci.lower_degenerate,
        "upper_degenerate": ci.upper_degenerate,
        "collapsed": ci.collapsed,
        "length": ci.length(),
        "pi_cm": pi_cm,
        "pi_c": pi_c,
        "variance_unbiased": variance,
        "disclosure_at_estimate": disclosure,
    });
    let table = Table {
        header: vec![
            "lower",
            "upper",
            "lower_degenerate",
            "upper_degenerate",
            "collapsed",
            "pi_cm",
            "pi_c",
            "p11",
            "p10",
        ],
        rows: vec![vec![
            ci.lower.into(),
            ci.upper.into(),
            ci.lower_degenerate.into(),
            ci.upper_degenerate.into(),
            ci.collapsed.into(),
            pi_cm.into(),
            pi_c.into(),
            disclosure.map(|d| d.p11).into(),
            disclosure.map(|d| d.p10).into(),
        ]],
    };
    Ok(Report {
        record: record("interval", args, results),
        table,
        default_format: Format::Json,
    })
}

fn coverage(args: &CoverageArgs) -> Result<Report, Failure> {
    let config = ModelConfig::new(args.n, args.q)?;
    let level = ConfidenceLevel::new(args.delta)?;
    let grid = PiGrid::parse(&args.pi)?;
    let cv = curve(&config, &level, args.method, &grid, args.d)?;
    let mut header = vec!["pi", "coverage", "expected_covering_length"];
    if args.d.is_some() {
        header.extend(["assured_length_prob", "length_prob"]);
    }
    let rows = cv
        .grid
        .iter()
        .map(|p| {
            let mut row: Vec<Cell> = vec![
                p.pi.into(),
                p.coverage.into(),
                p.expected_covering_length.into(),
            ];
            if args.d.is_some() {
                row.push(p.assured_length_prob.into());
                row.push(p.length_prob.into());
            }
            row
        })
        .collect();
    let results = serde_json::to_value(&cv).expect("curve serializes");
    Ok(Report {
        record: record("coverage", args, results),
        table: Table { header, rows },
        default_format: Format::Csv,
    })
}

fn samplesize(args: &SampleSizeArgs, quiet: bool) -> Result<Report, Failure> {
    if args.criterion == Criterion::Assured && args.lambda.is_none() {
        return Err(Failure::Usage(
            "the assured criterion requires --lambda".into(),
        ));
    }
    let spec = DesignSpec::new(args.pi0, args.gamma, args.delta, args.d, args.lambda)?;
    let options = SearchOptions {
        cap: args.cap,
        ..Default::default()
    };
    let start = Instant::now();
    let result = search(&spec, args.criterion, &options)?;
    let grid = args
        .check_grid
        .map(|steps| check_design_grid(&spec, args.criterion, result.n_min, steps))
        .transpose()?;
    let duration = start.elapsed().as_secs_f64();
    if !quiet {
        if let Some(report) = &grid {
            for v in &report.violations {
                eprintln!(
                    "warning: criterion fails at pi = {}, q = {} (value {}) for n = {}",
                    v.pi, v.q, v.value, report.n
                );
            }
        }
    }
    let mut results = serde_json::to_value(&result).expect("result serializes");
    results["duration_seconds"] = json!(duration);
    if let Some(report) = &grid {
        results["grid_check"] = serde_json::to_value(report).expect("report serializes");
    }
    let table = Table {
        header: vec![
            "n_min",
            "criterion_value_at_n",
            "criterion_value_at_n_minus_1",
            "q_used",
            "scan_low",
            "scan_high",
        ],
        rows: vec![vec![
            result.n_min.into(),
            result.criterion_value_at_n.into(),
            result.criterion_value_at_n_minus_1.into(),
            result.q_used.get().into(),
            result.scan_window.0.into(),
            result.scan_window.1.into(),
        ]],
    };
    Ok(Report {
        record: record("samplesize", args, results),
        table,
        default_format: Format::Json,
    })
}

fn privacy(args: &PrivacyArgs) -> Result<Report, Failure> {
    match (args.pi0, args.gamma, args.pi, args.q) {
        (Some(pi0), Some(gamma), None, None) => {
            let spec = PrivacySpec::new(pi0, gamma)?;
            let q = q_min(&spec).get();
            let table = Table {
                header: vec!["q_min"],
                rows: vec![vec![q.into()]],
            };
            Ok(Report {
                record: record("privacy", args, json!({ "q_min": q })),
                table,
                default_format: Format::Json,
            })
        }
        (None, None, Some(pi), Some(q)) => {
            let probs = disclosure_probabilities(Probability::new(pi)?, Probability::new(q)?)?;
            let table = Table {
                header: vec!["p11", "p10"],
                rows: vec![vec![probs.p11.into(), probs.p10.into()]],
            };
            Ok(Report {
                record: record(
                    "privacy",
                    args,
                    json!({ "p11": probs.p11, "p10": probs.p10 }),
                ),
                table,
                default_format: Format::Json,
            })
        }
        _ => Err(Failure::Usage(
            "privacy takes either --pi0 and --gamma or --pi and --q".into(),
        )),
    }
}
