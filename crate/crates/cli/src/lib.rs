//! `bottkit` — exact toric analysis of Bott towers from the command line.
//!
//! Four commands, one input format:
//!
//! * `analyze` — fan, primitive relations with reduction traces, Mori and
//!   nef cone generators, nef certificate, positivity classification, ray
//!   types; `--oracle` replays the tower through the brute-force wall
//!   enumerator and cross-checks every verdict.
//! * `check` — nef/ample (default divisor `-K`) or, with `--log-fano`, the
//!   log Fano test (default boundary `0`); the process exit code *is* the
//!   verdict.
//! * `oracle` — the brute-force report on its own, with the fast path
//!   shown alongside for comparison.
//! * `census` — exhaustive classification of every tower in an entry box,
//!   optionally oracle-confirmed, parallelized over disjoint index slices.
//!
//! Exit codes are a stable contract:
//!
//! | code | meaning                                             |
//! |------|-----------------------------------------------------|
//! | 0    | success / verdict true                              |
//! | 1    | `check` verdict false                               |
//! | 2    | usage, input, or budget error                       |
//! | 3    | oracle and fast path disagree                       |
//! | 4    | tower exceeds the oracle cap                        |
//! | 70   | internal route disagreement (a bug, never silent)   |

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use bottkit_core::{
    all_relations, build_rays, classify_fano_with, log_fano_certificate_with, nef_generators_with,
    oracle_report, ray_types_with, relation_basis, relation_degrees_with, to_plus_basis,
    BottMatrix, CurveClass, Divisor, FanoReport, LogFanoReport, NefCertificate, OracleReport,
    PlusDivisor, PrimitiveRelation, RayType, Rays, DEFAULT_ORACLE_CAP,
};

pub mod census;
pub mod oracle_check;
pub mod render;
pub mod report;

use census::{CensusOutcome, CensusSpec};
use oracle_check::{compare_oracle, OracleComparison};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ORACLE_MISMATCH: u8 = 3;
pub const EXIT_ORACLE_CAP: u8 = 4;
pub const EXIT_INTERNAL: u8 = 70;

/// Anything a command can fail with, mapped onto the exit-code contract.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] bottkit_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(
        "census r = {r} over [{lo}, {hi}] exceeds the budget of {budget} matrices; \
         narrow the box or raise --budget"
    )]
    Budget {
        r: usize,
        lo: i64,
        hi: i64,
        budget: u64,
    },
    #[error("oracle disagrees with the fast path: {0}")]
    OracleMismatch(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// The exit code this error maps to.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(bottkit_core::Error::OracleCap { .. }) => EXIT_ORACLE_CAP,
            CliError::Core(bottkit_core::Error::RouteDisagreement { .. }) => EXIT_INTERNAL,
            CliError::Core(_) | CliError::Io { .. } | CliError::Usage(_) => EXIT_USAGE,
            CliError::Budget { .. } => EXIT_USAGE,
            CliError::OracleMismatch(_) => EXIT_ORACLE_MISMATCH,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "bottkit",
    version,
    about = "Exact toric analysis of Bott towers",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: fan, relations, cones, certificates, classification.
    Analyze(AnalyzeArgs),
    /// Verdict for one divisor; the exit code is the verdict.
    Check(CheckArgs),
    /// Brute-force wall oracle, with the fast path shown for comparison.
    Oracle(OracleArgs),
    /// Classify every tower with entries in a box.
    Census(CensusArgs),
}

#[derive(Args)]
struct MatrixArg {
    /// Matrix file in text or JSON form; '-' reads standard input.
    #[arg(value_name = "MATRIX")]
    matrix: String,
}

#[derive(Args)]
struct DivisorArgs {
    /// Sparse divisor: comma-separated RAY:COEFF terms, e.g. "1+:1/2, 3-:-2".
    #[arg(long, value_name = "TERMS", conflicts_with = "plus_divisor")]
    divisor: Option<String>,
    /// Divisor in the plus basis: r comma-separated rationals.
    #[arg(long, value_name = "COEFFS")]
    plus_divisor: Option<String>,
}

#[derive(Args)]
struct OracleCapArg {
    /// Refuse brute-force enumeration above this height.
    #[arg(
        long,
        value_name = "N",
        env = "BOTTKIT_ORACLE_CAP",
        default_value_t = DEFAULT_ORACLE_CAP
    )]
    oracle_cap: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    matrix: MatrixArg,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Cross-check every verdict against the brute-force wall oracle.
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    cap: OracleCapArg,
    #[command(flatten)]
    divisor: DivisorArgs,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    matrix: MatrixArg,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    divisor: DivisorArgs,
    /// Judge the log Fano condition of the pair (X, D) instead of nefness.
    #[arg(long)]
    log_fano: bool,
    /// Demand ampleness rather than nefness for the verdict.
    #[arg(long, conflicts_with = "log_fano")]
    require_ample: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    matrix: MatrixArg,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    divisor: DivisorArgs,
    #[command(flatten)]
    cap: OracleCapArg,
}

#[derive(Args)]
struct CensusArgs {
    /// Height of the towers to sweep.
    #[arg(long, value_name = "R")]
    r: usize,
    /// Smallest entry value.
    #[arg(long, value_name = "LO", default_value_t = -2, allow_negative_numbers = true)]
    lo: i64,
    /// Largest entry value.
    #[arg(long, value_name = "HI", default_value_t = 2, allow_negative_numbers = true)]
    hi: i64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Refuse sweeps larger than this many matrices.
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    budget: u64,
    /// Confirm every matrix against the brute-force wall oracle.
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    cap: OracleCapArg,
    /// Emit the report as JSON instead of text.
    #[arg(long)]
    json: bool,
}

/// Which divisor a command falls back to when no flag names one.
#[derive(Debug, Clone, Copy)]
enum DefaultDivisor {
    Anticanonical,
    Zero,
}

/// Everything `analyze` computes, shared by the text and JSON renderers.
pub struct AnalysisData {
    pub matrix: BottMatrix,
    pub rays: Rays,
    pub relations: Vec<PrimitiveRelation>,
    pub mori: Vec<CurveClass>,
    pub nef_generators: Vec<PlusDivisor>,
    pub divisor: Divisor,
    pub divisor_source: String,
    pub certificate: NefCertificate,
    pub fano: FanoReport,
    pub ray_types: Vec<RayType>,
    pub oracle: Option<OracleSection>,
}

/// An oracle run plus its comparison against the fast path.
pub struct OracleSection {
    pub cap: usize,
    pub report: OracleReport,
    pub comparison: OracleComparison,
}

/// Everything `check` computes.
pub struct CheckData {
    pub matrix: BottMatrix,
    pub divisor: Divisor,
    pub divisor_source: String,
    pub plus: PlusDivisor,
    pub certificate: NefCertificate,
    pub log_fano: Option<LogFanoReport>,
    pub verdict_kind: &'static str,
    pub verdict: bool,
}

/// Everything the `oracle` command computes.
pub struct OracleRunData {
    pub matrix: BottMatrix,
    pub divisor: Divisor,
    pub divisor_source: String,
    pub certificate: NefCertificate,
    pub section: OracleSection,
}

/// Reads a matrix from a file path or, for `-`, standard input.
fn read_matrix(path: &str) -> Result<BottMatrix, CliError> {
    let text = if path == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|source| CliError::Io {
                path: "<stdin>".to_string(),
                source,
            })?;
        buffer
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        })?
    };
    Ok(BottMatrix::parse(&text)?)
}

/// Resolves the divisor flags against a command's default.
fn resolve_divisor(
    r: usize,
    flags: &DivisorArgs,
    default: DefaultDivisor,
) -> Result<(Divisor, String), CliError> {
    if let Some(text) = &flags.divisor {
        let d = Divisor::parse(r, text)?;
        return Ok((d, format!("--divisor {text}")));
    }
    if let Some(text) = &flags.plus_divisor {
        let d = PlusDivisor::parse(r, text)?.embed();
        return Ok((d, format!("--plus-divisor {text}")));
    }
    Ok(match default {
        DefaultDivisor::Anticanonical => {
            (Divisor::anticanonical(r), "-K (default)".to_string())
        }
        DefaultDivisor::Zero => (Divisor::zero(r), "0 (default)".to_string()),
    })
}

fn emit<T: Serialize>(json: bool, dto: &T, text: &str) -> Result<(), CliError> {
    if json {
        let rendered = serde_json::to_string_pretty(dto)
            .map_err(|e| CliError::Internal(format!("report serialization failed: {e}")))?;
        println!("{rendered}");
    } else {
        print!("{text}");
    }
    Ok(())
}

fn build_analysis_dto(data: &AnalysisData) -> report::AnalysisReportDto {
    report::AnalysisReportDto {
        schema: report::ANALYSIS_SCHEMA.to_string(),
        matrix: report::matrix_dto(&data.matrix),
        rays: report::ray_dtos(&data.rays),
        relations: data.relations.iter().map(report::relation_dto).collect(),
        mori_generators: data.mori.iter().map(report::class_strings).collect(),
        nef_generators: data.nef_generators.iter().map(report::plus_strings).collect(),
        divisor: report::divisor_dto(&data.divisor, &data.divisor_source),
        nef_certificate: report::certificate_dto(&data.certificate),
        fano: report::fano_dto(&data.fano),
        ray_types: report::ray_type_strings(&data.ray_types),
        oracle: data
            .oracle
            .as_ref()
            .map(|s| report::oracle_dto(s.cap, &s.report, &s.comparison)),
    }
}

fn build_check_dto(data: &CheckData) -> report::CheckReportDto {
    report::CheckReportDto {
        schema: report::CHECK_SCHEMA.to_string(),
        matrix: report::matrix_dto(&data.matrix),
        divisor: report::divisor_dto(&data.divisor, &data.divisor_source),
        plus_basis: report::plus_strings(&data.plus),
        nef_certificate: report::certificate_dto(&data.certificate),
        log_fano: data.log_fano.as_ref().map(report::log_fano_dto),
        verdict_kind: data.verdict_kind.to_string(),
        verdict: data.verdict,
    }
}

fn build_oracle_run_dto(data: &OracleRunData) -> report::OracleRunReportDto {
    report::OracleRunReportDto {
        schema: report::ORACLE_SCHEMA.to_string(),
        matrix: report::matrix_dto(&data.matrix),
        divisor: report::divisor_dto(&data.divisor, &data.divisor_source),
        fast_path: report::certificate_dto(&data.certificate),
        oracle: report::oracle_dto(
            data.section.cap,
            &data.section.report,
            &data.section.comparison,
        ),
    }
}

fn build_census_dto(spec: &CensusSpec, outcome: &CensusOutcome) -> report::CensusReportDto {
    let sample_text =
        |bucket: &[BottMatrix]| bucket.iter().map(BottMatrix::to_text).collect::<Vec<_>>();
    report::CensusReportDto {
        schema: report::CENSUS_SCHEMA.to_string(),
        r: spec.r,
        lo: spec.lo,
        hi: spec.hi,
        total: outcome.total,
        fano: outcome.fano,
        weak_fano: outcome.fano + outcome.weak_not_fano,
        weak_fano_not_fano: outcome.weak_not_fano,
        neither: outcome.neither,
        oracle_checked: outcome.oracle_checked,
        samples: report::CensusSamplesDto {
            fano: sample_text(&outcome.samples[0]),
            weak_fano_not_fano: sample_text(&outcome.samples[1]),
            neither: sample_text(&outcome.samples[2]),
        },
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<u8, CliError> {
    let matrix = read_matrix(&args.matrix.matrix)?;
    let (divisor, divisor_source) =
        resolve_divisor(matrix.r(), &args.divisor, DefaultDivisor::Anticanonical)?;
    let rays = build_rays(&matrix);
    let relations = all_relations(&matrix);
    let mori = relation_basis(&relations);
    let nef_gens = nef_generators_with(&relations);
    let certificate = relation_degrees_with(&relations, &divisor);
    let fano = classify_fano_with(&matrix, &relations)?;
    let ray_types = ray_types_with(&relations)?;
    let oracle = if args.oracle {
        let report = oracle_report(&matrix, &divisor, args.cap.oracle_cap)?;
        let comparison = compare_oracle(&relations, &certificate, &report);
        Some(OracleSection {
            cap: args.cap.oracle_cap,
            report,
            comparison,
        })
    } else {
        None
    };
    let data = AnalysisData {
        matrix,
        rays,
        relations,
        mori,
        nef_generators: nef_gens,
        divisor,
        divisor_source,
        certificate,
        fano,
        ray_types,
        oracle,
    };
    emit(args.json, &build_analysis_dto(&data), &render::render_analysis(&data))?;
    if let Some(section) = &data.oracle {
        if !section.comparison.all_match() {
            return Err(CliError::OracleMismatch(
                section.comparison.describe_failures(),
            ));
        }
    }
    Ok(EXIT_OK)
}

fn cmd_check(args: &CheckArgs) -> Result<u8, CliError> {
    let matrix = read_matrix(&args.matrix.matrix)?;
    let default = if args.log_fano {
        DefaultDivisor::Zero
    } else {
        DefaultDivisor::Anticanonical
    };
    let (divisor, divisor_source) = resolve_divisor(matrix.r(), &args.divisor, default)?;
    let relations = all_relations(&matrix);
    let plus = to_plus_basis(&matrix, &divisor);
    let certificate = relation_degrees_with(&relations, &divisor);
    let log_fano = args
        .log_fano
        .then(|| log_fano_certificate_with(&relations, &divisor));
    let (verdict_kind, verdict) = if let Some(log_fano) = &log_fano {
        ("log-Fano", log_fano.is_log_fano)
    } else if args.require_ample {
        ("ample", certificate.is_ample)
    } else {
        ("nef", certificate.is_nef)
    };
    let data = CheckData {
        matrix,
        divisor,
        divisor_source,
        plus,
        certificate,
        log_fano,
        verdict_kind,
        verdict,
    };
    emit(args.json, &build_check_dto(&data), &render::render_check(&data))?;
    Ok(if data.verdict { EXIT_OK } else { EXIT_FALSE })
}

fn cmd_oracle(args: &OracleArgs) -> Result<u8, CliError> {
    let matrix = read_matrix(&args.matrix.matrix)?;
    let (divisor, divisor_source) =
        resolve_divisor(matrix.r(), &args.divisor, DefaultDivisor::Anticanonical)?;
    let relations = all_relations(&matrix);
    let certificate = relation_degrees_with(&relations, &divisor);
    let report = oracle_report(&matrix, &divisor, args.cap.oracle_cap)?;
    let comparison = compare_oracle(&relations, &certificate, &report);
    let data = OracleRunData {
        matrix,
        divisor,
        divisor_source,
        certificate,
        section: OracleSection {
            cap: args.cap.oracle_cap,
            report,
            comparison,
        },
    };
    emit(
        args.json,
        &build_oracle_run_dto(&data),
        &render::render_oracle_run(&data),
    )?;
    if !comparison.all_match() {
        return Err(CliError::OracleMismatch(comparison.describe_failures()));
    }
    Ok(EXIT_OK)
}

fn cmd_census(args: &CensusArgs) -> Result<u8, CliError> {
    let jobs = args.jobs.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(std::num::NonZeroUsize::get)
            .unwrap_or(1)
    });
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".to_string()));
    }
    let spec = CensusSpec {
        r: args.r,
        lo: args.lo,
        hi: args.hi,
        jobs,
        budget: args.budget,
        oracle: args.oracle,
        oracle_cap: args.cap.oracle_cap,
    };
    let outcome = census::run_census(&spec)?;
    emit(
        args.json,
        &build_census_dto(&spec, &outcome),
        &render::render_census(&spec, &outcome),
    )?;
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Check(args) => cmd_check(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Census(args) => cmd_census(args),
    }
}

/// Parses the process arguments, runs the selected command, and returns
/// the exit code per the contract in the crate docs.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn divisor_default_depends_on_the_command() {
        let flags = DivisorArgs {
            divisor: None,
            plus_divisor: None,
        };
        let (k, source) = resolve_divisor(2, &flags, DefaultDivisor::Anticanonical)
            .expect("default divisor");
        assert_eq!(k, Divisor::anticanonical(2));
        assert_eq!(source, "-K (default)");
        let (zero, source) =
            resolve_divisor(2, &flags, DefaultDivisor::Zero).expect("default divisor");
        assert!(zero.is_zero());
        assert_eq!(source, "0 (default)");
    }

    #[test]
    fn plus_divisor_flag_embeds_on_plus_rays() {
        let flags = DivisorArgs {
            divisor: None,
            plus_divisor: Some("1, 1/2".to_string()),
        };
        let (d, _) = resolve_divisor(2, &flags, DefaultDivisor::Zero).expect("valid flag");
        assert_eq!(d, PlusDivisor::parse(2, "1, 1/2").expect("valid").embed());
    }

    #[test]
    fn exit_codes_follow_the_contract()  {
        let cap = CliError::Core(bottkit_core::Error::OracleCap { r: 20, cap: 16 });
        assert_eq!(cap.exit_code(), EXIT_ORACLE_CAP);
        let internal = CliError::Core(bottkit_core::Error::RouteDisagreement {
            context: "x".to_string(),
            detail: "y".to_string(),
        });
        assert_eq!(internal.exit_code(), EXIT_INTERNAL);
        let mismatch = CliError::OracleMismatch("nef verdicts differ".to_string());
        assert_eq!(mismatch.exit_code(), EXIT_ORACLE_MISMATCH);
        let budget = CliError::Budget {
            r: 5,
            lo: -3,
            hi: 3,
            budget: 10,
        };
        assert_eq!(budget.exit_code(), EXIT_USAGE);
    }
}
