//! Machine-readable reports.
//!
//! Every command can emit JSON (`--json`). The schemas here are a stable
//! contract: each report carries a versioned `schema` tag, and **all exact
//! numbers travel as decimal strings** (`"-3"`, `"1/2"`), never as JSON
//! floats, so arbitrarily large intersection numbers survive a round-trip
//! byte-for-byte. Counts and indices that are structurally small (stage
//! numbers, wall counts) stay native integers.
//!
//! The DTO structs derive both `Serialize` and `Deserialize` and are
//! compared in tests after a serialize/parse cycle, which keeps the schema
//! honestly lossless rather than write-only.

use num::BigRational;
use serde::{Deserialize, Serialize};

use bottkit_core::{
    BottMatrix, CurveClass, Divisor, FanoReport, LogFanoReport, NefCertificate, OracleReport,
    PlusDivisor, PrimitiveRelation, RayType, Rays,
};

use crate::oracle_check::OracleComparison;

pub const ANALYSIS_SCHEMA: &str = "bottkit/analysis/1";
pub const CHECK_SCHEMA: &str = "bottkit/check/1";
pub const ORACLE_SCHEMA: &str = "bottkit/oracle/1";
pub const CENSUS_SCHEMA: &str = "bottkit/census/1";

/// Echo of the input matrix: height and nonzero entries as string triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDto {
    pub r: usize,
    pub beta: Vec<(usize, usize, String)>,
}

pub fn matrix_dto(m: &BottMatrix) -> MatrixDto {
    MatrixDto {
        r: m.r(),
        beta: m
            .entries()
            .map(|(i, j, b)| (i, j, b.to_string()))
            .collect(),
    }
}

/// A ray and its lattice generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayDto {
    pub ray: String,
    pub u: Vec<String>,
}

pub fn ray_dtos(rays: &Rays) -> Vec<RayDto> {
    rays.iter()
        .map(|(ray, u)| RayDto {
            ray: ray.to_string(),
            u: u.iter().map(|x| x.to_string()).collect(),
        })
        .collect()
}

/// One term of a relation's supporting cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaTermDto {
    pub ray: String,
    pub c: String,
}

/// A primitive relation with its reduction trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDto {
    pub i: usize,
    pub gamma: Vec<GammaTermDto>,
    pub pivots: Vec<usize>,
    /// Row k of the reduction: pairs `[j, a_k[j]]` over the columns above
    /// the k-th pivot, zeros included.
    pub a_table: Vec<Vec<(usize, String)>>,
    /// Coefficient sum `s_i` (drives the positivity classifications).
    pub degree_sum: String,
}

pub fn relation_dto(relation: &PrimitiveRelation) -> RelationDto {
    RelationDto {
        i: relation.i,
        gamma: relation
            .gamma
            .iter()
            .map(|(ray, c)| GammaTermDto {
                ray: ray.to_string(),
                c: c.to_string(),
            })
            .collect(),
        pivots: relation.trace.pivots.clone(),
        a_table: relation
            .trace
            .a_table
            .iter()
            .map(|row| row.iter().map(|(j, a)| (*j, a.to_string())).collect())
            .collect(),
        degree_sum: relation.degree_sum().to_string(),
    }
}

pub fn class_strings(class: &CurveClass) -> Vec<String> {
    class.ints().iter().map(|x| x.to_string()).collect()
}

pub fn rational_strings(values: &[BigRational]) -> Vec<String> {
    values.iter().map(|x| x.to_string()).collect()
}

pub fn plus_strings(d: &PlusDivisor) -> Vec<String> {
    rational_strings(d.coeffs())
}

/// A sparse divisor plus a note on where it came from (flag or default).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorDto {
    pub source: String,
    pub terms: Vec<GammaTermDto>,
}

pub fn divisor_dto(d: &Divisor, source: &str) -> DivisorDto {
    DivisorDto {
        source: source.to_string(),
        terms: d
            .terms()
            .map(|(ray, a)| GammaTermDto {
                ray: ray.to_string(),
                c: a.to_string(),
            })
            .collect(),
    }
}

/// Relation degrees of a divisor and the verdicts they certify.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDto {
    pub degrees: Vec<String>,
    pub is_nef: bool,
    pub is_ample: bool,
}

pub fn certificate_dto(cert: &NefCertificate) -> CertificateDto {
    CertificateDto {
        degrees: rational_strings(&cert.degrees),
        is_nef: cert.is_nef,
        is_ample: cert.is_ample,
    }
}

/// Structural verdicts for one stage; witnesses are rendered labels like
/// `"(ii)(b), m1 = 2, m2 = 5"`, `null` when the condition fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowConditionDto {
    pub i: usize,
    pub n1: Option<String>,
    pub n2: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoDto {
    pub per_row: Vec<RowConditionDto>,
    pub degree_sums: Vec<String>,
    pub is_fano: bool,
    pub is_weak_fano: bool,
    pub locally_rigid: bool,
}

pub fn fano_dto(report: &FanoReport) -> FanoDto {
    FanoDto {
        per_row: report
            .per_row
            .iter()
            .map(|row| RowConditionDto {
                i: row.i,
                n1: row.n1.map(|w| w.to_string()),
                n2: row.n2.map(|w| w.to_string()),
            })
            .collect(),
        degree_sums: report
            .degree_sums
            .iter()
            .map(|s| s.to_string())
            .collect(),
        is_fano: report.is_fano,
        is_weak_fano: report.is_weak_fano,
        locally_rigid: report.locally_rigid,
    }
}

pub fn ray_type_strings(types: &[RayType]) -> Vec<String> {
    types.iter().map(|t| t.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogFanoDto {
    pub k: Vec<String>,
    pub floor_ok: bool,
    pub is_log_fano: bool,
}

pub fn log_fano_dto(report: &LogFanoReport) -> LogFanoDto {
    LogFanoDto {
        k: rational_strings(&report.k),
        floor_ok: report.floor_ok,
        is_log_fano: report.is_log_fano,
    }
}

/// Brute-force oracle results plus the comparison against the fast path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDto {
    pub cap: usize,
    pub wall_count: usize,
    pub mori_generators: Vec<Vec<String>>,
    pub is_nef: bool,
    pub is_ample: bool,
    pub nef_matches: bool,
    pub ample_matches: bool,
    pub mori_set_matches: bool,
    pub expansions_nonnegative: bool,
    pub all_match: bool,
}

pub fn oracle_dto(cap: usize, oracle: &OracleReport, comparison: &OracleComparison) -> OracleDto {
    OracleDto {
        cap,
        wall_count: oracle.wall_count,
        mori_generators: oracle.mori_generators.iter().map(class_strings).collect(),
        is_nef: oracle.is_nef,
        is_ample: oracle.is_ample,
        nef_matches: comparison.nef_matches,
        ample_matches: comparison.ample_matches,
        mori_set_matches: comparison.mori_set_matches,
        expansions_nonnegative: comparison.expansions_nonnegative,
        all_match: comparison.all_match(),
    }
}

/// Full `analyze` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReportDto {
    pub schema: String,
    pub matrix: MatrixDto,
    pub rays: Vec<RayDto>,
    pub relations: Vec<RelationDto>,
    /// Curve classes of the relations — the Mori cone generators.
    pub mori_generators: Vec<Vec<String>>,
    /// Plus-basis coefficient vectors of the nef cone generators.
    pub nef_generators: Vec<Vec<String>>,
    pub divisor: DivisorDto,
    pub nef_certificate: CertificateDto,
    pub fano: FanoDto,
    pub ray_types: Vec<String>,
    pub oracle: Option<OracleDto>,
}

/// Full `check` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReportDto {
    pub schema: String,
    pub matrix: MatrixDto,
    pub divisor: DivisorDto,
    pub plus_basis: Vec<String>,
    pub nef_certificate: CertificateDto,
    pub log_fano: Option<LogFanoDto>,
    /// Which verdict decides the exit code: `nef`, `ample`, or `log-fano`.
    pub verdict_kind: String,
    pub verdict: bool,
}

/// Full `oracle` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRunReportDto {
    pub schema: String,
    pub matrix: MatrixDto,
    pub divisor: DivisorDto,
    pub fast_path: CertificateDto,
    pub oracle: OracleDto,
}

/// Census bucket samples, as matrix text-format strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSamplesDto {
    pub fano: Vec<String>,
    pub weak_fano_not_fano: Vec<String>,
    pub neither: Vec<String>,
}

/// Full `census` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReportDto {
    pub schema: String,
    pub r: usize,
    pub lo: i64,
    pub hi: i64,
    pub total: u64,
    pub fano: u64,
    /// All weak Fano towers, the Fano ones included.
    pub weak_fano: u64,
    pub weak_fano_not_fano: u64,
    pub neither: u64,
    /// Matrices verified against the wall oracle (0 without `--oracle`).
    pub oracle_checked: u64,
    pub samples: CensusSamplesDto,
}
