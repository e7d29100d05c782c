//! Human-readable output.
//!
//! The default (non-`--json`) output of every command is plain text in the
//! notation the library itself uses: rays print as `3+`, relations print as
//! `e_2^+ + e_2^- = 2 e_4^- + e_5^- + e_6^+ + e_7^+`, vectors print as
//! parenthesized tuples. The renderers lean on the `Display` impls of the
//! core types so the CLI cannot drift from the library's own notation.

use std::fmt::Write as _;

use num::{BigInt, BigRational};

use bottkit_core::{BottMatrix, PrimitiveRelation};

use crate::census::{CensusOutcome, CensusSpec};
use crate::{AnalysisData, CheckData, OracleRunData, OracleSection};

/// `(a, b, c)` for any displayable sequence.
fn tuple<T: std::fmt::Display>(values: &[T]) -> String {
    let inner: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("({})", inner.join(", "))
}

pub fn int_tuple(values: &[BigInt]) -> String {
    tuple(values)
}

pub fn rational_tuple(values: &[BigRational]) -> String {
    tuple(values)
}

/// The matrix echo: one indented line per row of the strict upper triangle.
pub fn matrix_block(m: &BottMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "tower: r = {}", m.r());
    if m.r() == 1 {
        let _ = writeln!(out, "matrix: (no entries above the diagonal)");
        return out;
    }
    let _ = writeln!(out, "matrix:");
    for (index, row) in m.to_text().lines().skip(1).enumerate() {
        let _ = writeln!(out, "  row {}: {}", index + 1, row);
    }
    out
}

/// `[-1 2 | 0]`: all rows of the strict upper triangle on one line.
pub fn matrix_inline(m: &BottMatrix) -> String {
    if m.r() == 1 {
        return "[no entries]".to_string();
    }
    let text = m.to_text();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    format!("[{}]", rows.join(" | "))
}

fn relation_block(relation: &PrimitiveRelation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "  r(P_{}): {}", relation.i, relation);
    let pivots: Vec<String> = relation
        .trace
        .pivots
        .iter()
        .map(|p| p.to_string())
        .collect();
    let _ = writeln!(out, "    pivots: {{{}}}", pivots.join(", "));
    let _ = writeln!(
        out,
        "    class: {}",
        int_tuple(relation.curve_class().ints())
    );
    let _ = writeln!(out, "    reduction:");
    for (level, row) in relation.trace.a_table.iter().enumerate() {
        if row.is_empty() {
            let _ = writeln!(out, "      level {}: (no columns)", level + 1);
            continue;
        }
        let first = row.first().expect("nonempty row").0;
        let last = row.last().expect("nonempty row").0;
        let values: Vec<String> = row.iter().map(|(_, a)| a.to_string()).collect();
        let _ = writeln!(
            out,
            "      level {}: a[{first}..={last}] = {}",
            level + 1,
            values.join(" ")
        );
    }
    out
}

fn divisor_line(source: &str, divisor: &bottkit_core::Divisor) -> String {
    format!("divisor [{source}]: {divisor}\n")
}

fn oracle_block(section: &OracleSection) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "oracle (cap {}):", section.cap);
    let _ = writeln!(out, "  walls: {}", section.report.wall_count);
    let _ = writeln!(
        out,
        "  mori generators ({} classes):",
        section.report.mori_generators.len()
    );
    for class in &section.report.mori_generators {
        let _ = writeln!(out, "    {}", int_tuple(class.ints()));
    }
    let _ = writeln!(
        out,
        "  nef: {}   ample: {}",
        section.report.is_nef, section.report.is_ample
    );
    if section.comparison.all_match() {
        let _ = writeln!(out, "  comparison: all routes agree");
    } else {
        let _ = writeln!(
            out,
            "  comparison: MISMATCH — {}",
            section.comparison.describe_failures()
        );
    }
    out
}

pub fn render_analysis(data: &AnalysisData) -> String {
    let mut out = String::new();
    out.push_str(&matrix_block(&data.matrix));

    let _ = writeln!(out, "rays:");
    for (ray, u) in data.rays.iter() {
        let _ = writeln!(out, "  {ray}: {}", int_tuple(u));
    }

    let _ = writeln!(out, "primitive relations:");
    for relation in &data.relations {
        out.push_str(&relation_block(relation));
    }

    let _ = writeln!(out, "mori generators (curve classes):");
    for (relation, class) in data.relations.iter().zip(&data.mori) {
        let _ = writeln!(out, "  r(P_{}) = {}", relation.i, int_tuple(class.ints()));
    }

    let _ = writeln!(out, "nef generators (plus basis):");
    for (index, generator) in data.nef_generators.iter().enumerate() {
        let _ = writeln!(out, "  D_{} = {generator}", index + 1);
    }

    out.push_str(&divisor_line(&data.divisor_source, &data.divisor));
    let _ = writeln!(out, "nef certificate:");
    let _ = writeln!(out, "  d = {}", rational_tuple(&data.certificate.degrees));
    let _ = writeln!(
        out,
        "  nef: {}   ample: {}",
        data.certificate.is_nef, data.certificate.is_ample
    );

    let _ = writeln!(out, "classification:");
    let _ = writeln!(
        out,
        "  degree sums: {}",
        int_tuple(&data.fano.degree_sums)
    );
    for row in &data.fano.per_row {
        let n1 = row
            .n1
            .map_or_else(|| "-".to_string(), |w| w.to_string());
        let n2 = row
            .n2
            .map_or_else(|| "-".to_string(), |w| w.to_string());
        let _ = writeln!(out, "  row {}: N1 {n1}; N2 {n2}", row.i);
    }
    let _ = writeln!(out, "  Fano: {}", data.fano.is_fano);
    let _ = writeln!(out, "  weak Fano: {}", data.fano.is_weak_fano);
    let _ = writeln!(out, "  locally rigid: {}", data.fano.locally_rigid);

    let _ = writeln!(out, "ray types:");
    for (relation, ray_type) in data.relations.iter().zip(&data.ray_types) {
        let _ = writeln!(out, "  r(P_{}): {ray_type}", relation.i);
    }

    if let Some(section) = &data.oracle {
        out.push_str(&oracle_block(section));
    }
    out
}

pub fn render_check(data: &CheckData) -> String {
    let mut out = String::new();
    out.push_str(&matrix_block(&data.matrix));
    out.push_str(&divisor_line(&data.divisor_source, &data.divisor));
    let _ = writeln!(out, "plus basis: {}", data.plus);
    let _ = writeln!(out, "d = {}", rational_tuple(&data.certificate.degrees));
    let _ = writeln!(out, "nef: {}", data.certificate.is_nef);
    let _ = writeln!(out, "ample: {}", data.certificate.is_ample);
    if let Some(log_fano) = &data.log_fano {
        let _ = writeln!(out, "k = {}", rational_tuple(&log_fano.k));
        let _ = writeln!(
            out,
            "floor check (all coefficients in [0, 1)): {}",
            log_fano.floor_ok
        );
        let _ = writeln!(out, "log Fano: {}", log_fano.is_log_fano);
    }
    let _ = writeln!(out, "verdict ({}): {}", data.verdict_kind, data.verdict);
    out
}

pub fn render_oracle_run(data: &OracleRunData) -> String {
    let mut out = String::new();
    out.push_str(&matrix_block(&data.matrix));
    out.push_str(&divisor_line(&data.divisor_source, &data.divisor));
    let _ = writeln!(
        out,
        "fast path: d = {}, nef: {}, ample: {}",
        rational_tuple(&data.certificate.degrees),
        data.certificate.is_nef,
        data.certificate.is_ample
    );
    out.push_str(&oracle_block(&data.section));
    out
}

pub fn render_census(spec: &CensusSpec, outcome: &CensusOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "census: r = {}, entries in [{}, {}]",
        spec.r, spec.lo, spec.hi
    );
    let _ = writeln!(out, "jobs: {}", spec.jobs);
    let _ = writeln!(out, "total: {}", outcome.total);
    let _ = writeln!(out, "Fano: {}", outcome.fano);
    let _ = writeln!(out, "weak Fano, not Fano: {}", outcome.weak_not_fano);
    let _ = writeln!(out, "neither: {}", outcome.neither);
    let _ = writeln!(
        out,
        "(weak Fano total: {})",
        outcome.fano + outcome.weak_not_fano
    );
    if spec.oracle {
        let _ = writeln!(
            out,
            "oracle: confirmed {} of {}",
            outcome.oracle_checked, outcome.total
        );
    }
    let _ = writeln!(out, "samples (first in sweep order):");
    let labels = ["Fano", "weak Fano, not Fano", "neither"];
    for (label, bucket) in labels.iter().zip(&outcome.samples) {
        let rendered: Vec<String> = bucket.iter().map(matrix_inline).collect();
        let shown = if rendered.is_empty() {
            "(none)".to_string()
        } else {
            rendered.join(", ")
        };
        let _ = writeln!(out, "  {label}: {shown}");
    }
    out
}
