//! Thin command-line wrapper over the `supermarkov` report layer.
//!
//! Exit codes: 0 success, 2 usage error, 3 method disagreement,
//! 4 invariant failure.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use supermarkov::error::Error;
use supermarkov::report::{
    annulus_report, export, markov_report, run_suite, scan_monotonicity, table_csv, table_json,
    table_rows, AnnulusMethod, ExportKind, ExportTarget, Method, Mode, RunReport, Suite,
};
use supermarkov::words::Slope;

#[derive(Parser)]
#[command(
    name = "supermarkov",
    version,
    about = "Exact super Markov numbers and annulus super lambda-lengths, \
             computed by independent methods and cross-checked"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the super Markov number of a slope p/q
    Markov {
        /// Numerator of the slope (coprime to q, p <= q)
        #[arg(short)]
        p: u32,
        /// Denominator of the slope
        #[arg(short)]
        q: u32,
        /// Which algorithm(s) to run
        #[arg(long, value_enum, default_value_t)]
        method: MethodArg,
        /// Unit values or symbolic Laurent polynomials in x, y, z
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t)]
        format: ReportFormat,
    },
    /// Tabulate body and soul for every slope with p+q <= max-sum
    Table {
        #[arg(long, default_value_t = 10)]
        max_sum: u32,
        #[arg(long, value_enum, default_value_t)]
        format: TableFormat,
    },
    /// Compute the annulus sequence x_4..x_n
    Annulus {
        /// Number of marked points on the inner boundary
        #[arg(long)]
        q: usize,
        /// Last index to compute
        #[arg(long)]
        n: usize,
        /// Recurrence, dimer enumeration, or both with a cross-check
        #[arg(long, value_enum, default_value_t)]
        method: AnnulusArg,
        #[arg(long, value_enum, default_value_t)]
        format: ReportFormat,
    },
    /// Run a named invariant suite
    Check {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Slope bound p+q <= bound (or last index for `conserved`)
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: ReportFormat,
    },
    /// Print a deterministic snake-graph or holonomy description
    Export {
        #[arg(value_enum)]
        kind: KindArg,
        /// Slope numerator (torus targets)
        #[arg(short)]
        p: Option<u32>,
        /// Slope denominator (torus targets)
        #[arg(short)]
        q: Option<u32>,
        /// Target the annulus family instead of a torus slope
        #[arg(long)]
        annulus: bool,
        /// Number of marked points (annulus targets)
        #[arg(long)]
        n: Option<u32>,
    },
    /// Scan slope families for monotone growth of body and soul
    ScanMonotonicity {
        #[arg(long, default_value_t = 12)]
        bound: u32,
        #[arg(long, value_enum, default_value_t)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum MethodArg {
    Matrix,
    Dimer,
    Ptolemy,
    #[default]
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Matrix => vec![Method::Matrix],
            MethodArg::Dimer => vec![Method::Dimer],
            MethodArg::Ptolemy => vec![Method::Ptolemy],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum ModeArg {
    #[default]
    Unit,
    Weighted,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum AnnulusArg {
    #[default]
    Recurrence,
    Dimer,
    Both,
}

impl AnnulusArg {
    fn methods(self) -> Vec<AnnulusMethod> {
        match self {
            AnnulusArg::Recurrence => vec![AnnulusMethod::Recurrence],
            AnnulusArg::Dimer => vec![AnnulusMethod::Dimer],
            AnnulusArg::Both => AnnulusMethod::BOTH.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum TableFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Osp,
    MarkovEq,
    Cross,
    Conserved,
    Oracle,
    Positivity,
}

impl SuiteArg {
    fn suite(self) -> Suite {
        match self {
            SuiteArg::Osp => Suite::Osp,
            SuiteArg::MarkovEq => Suite::MarkovEq,
            SuiteArg::Cross => Suite::Cross,
            SuiteArg::Conserved => Suite::Conserved,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Positivity => Suite::Positivity,
        }
    }

    fn default_bound(self) -> u32 {
        match self {
            SuiteArg::Conserved => 12,
            SuiteArg::Positivity => 12,
            _ => 10,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    SnakeDot,
    SnakeJson,
    MatrixJson,
}

impl KindArg {
    fn kind(self) -> ExportKind {
        match self {
            KindArg::SnakeDot => ExportKind::SnakeDot,
            KindArg::SnakeJson => ExportKind::SnakeJson,
            KindArg::MatrixJson => ExportKind::MatrixJson,
        }
    }
}

const EXIT_USAGE: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::InvalidSlope(..)
        | Error::Unsupported(_)
        | Error::SizeLimit(..)
        | Error::MalformedWord(_)
        | Error::InvalidContext(_) => EXIT_USAGE,
        _ => EXIT_INVARIANT,
    }
}

fn print_report(report: &RunReport, format: ReportFormat) -> ExitCode {
    match format {
        ReportFormat::Text => print!("{}", report.to_text()),
        ReportFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report.to_json()).expect("report serializes")
        ),
    }
    if report.agreement {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: the requested methods disagree (see the per-method values above)");
        ExitCode::from(EXIT_DISAGREEMENT)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Markov {
            p,
            q,
            method,
            mode,
            format,
        } => {
            let mode = match mode {
                ModeArg::Unit => Mode::Unit,
                ModeArg::Weighted => Mode::Weighted,
            };
            let report = markov_report(p, q, &method.methods(), mode)?;
            Ok(print_report(&report, format))
        }
        Command::Table { max_sum, format } => {
            let rows = table_rows(max_sum)?;
            match format {
                TableFormat::Csv => print!("{}", table_csv(&rows)),
                TableFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&table_json(&rows)).expect("table serializes")
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Annulus {
            q,
            n,
            method,
            format,
        } => {
            let report = annulus_report(q, n, &method.methods())?;
            Ok(print_report(&report, format))
        }
        Command::Check {
            suite,
            bound,
            format,
        } => {
            let report = run_suite(suite.suite(), bound.unwrap_or(suite.default_bound()))?;
            match format {
                ReportFormat::Text => print!("{}", report.to_text()),
                ReportFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("suite serializes")
                ),
            }
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("error: suite {} failed", report.suite);
                Ok(ExitCode::from(EXIT_INVARIANT))
            }
        }
        Command::Export {
            kind,
            p,
            q,
            annulus,
            n,
        } => {
            let target = match (annulus, p, q, n) {
                (true, None, None, Some(n)) => ExportTarget::Annulus(n),
                (false, Some(p), Some(q), None) => ExportTarget::Torus(Slope::new(p, q)?),
                _ => {
                    return Err(Error::Unsupported(
                        "pass either -p and -q for a torus slope, or --annulus with --n".into(),
                    ))
                }
            };
            print!("{}", export(kind.kind(), target)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::ScanMonotonicity { bound, format } => {
            let report = scan_monotonicity(bound)?;
            match format {
                ReportFormat::Text => print!("{}", report.to_text()),
                ReportFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("scan serializes")
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
