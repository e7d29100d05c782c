//! Cross-checking fast-path answers against the brute-force wall oracle.
//!
//! The oracle enumerates every wall of the fan and works only from wall
//! curves, sharing no code path with the reduction-based routines. A
//! comparison asserts four independent facts:
//!
//! * the nef verdicts agree,
//! * the ample verdicts agree,
//! * every wall curve class expands with nonnegative integer coordinates
//!   in the relation-class basis (so the fast path's Mori generators do
//!   span the oracle's cone),
//! * the oracle classes of singleton support are exactly the relation
//!   classes (so neither route invents or loses a generator).
//!
//! Any failed fact is an internal inconsistency and maps to a dedicated
//! nonzero exit code rather than a silent wrong answer.

use std::collections::BTreeSet;

use num::BigInt;

use bottkit_core::{
    CurveClass, NefCertificate, OracleReport, PrimitiveRelation, relation_basis,
};

/// Outcome of comparing a fast-path certificate with an oracle report for
/// the same divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleComparison {
    pub nef_matches: bool,
    pub ample_matches: bool,
    pub mori_set_matches: bool,
    pub expansions_nonnegative: bool,
}

impl OracleComparison {
    pub fn all_match(&self) -> bool {
        self.nef_matches
            && self.ample_matches
            && self.mori_set_matches
            && self.expansions_nonnegative
    }

    /// One-line description of whichever facts failed, for error messages.
    pub fn describe_failures(&self) -> String {
        let mut failed = Vec::new();
        if !self.nef_matches {
            failed.push("nef verdicts differ");
        }
        if !self.ample_matches {
            failed.push("ample verdicts differ");
        }
        if !self.mori_set_matches {
            failed.push("Mori generator sets differ");
        }
        if !self.expansions_nonnegative {
            failed.push("a wall class leaves the relation-class cone");
        }
        failed.join("; ")
    }
}

/// Compares the fast-path nef certificate and relation classes against an
/// oracle report computed for the same divisor.
pub fn compare_oracle(
    relations: &[PrimitiveRelation],
    certificate: &NefCertificate,
    oracle: &OracleReport,
) -> OracleComparison {
    let basis = relation_basis(relations);
    let zero = BigInt::from(0);

    let mut expansions_nonnegative = true;
    let mut support_one: BTreeSet<CurveClass> = BTreeSet::new();
    for class in &oracle.mori_generators {
        let coords = class.coordinates_in_unitriangular_basis(&basis);
        if coords.iter().any(|c| *c < zero) {
            expansions_nonnegative = false;
        }
        if coords.iter().filter(|c| **c != zero).count() == 1 {
            support_one.insert(class.clone());
        }
    }
    let relation_set: BTreeSet<CurveClass> = basis.into_iter().collect();

    OracleComparison {
        nef_matches: certificate.is_nef == oracle.is_nef,
        ample_matches: certificate.is_ample == oracle.is_ample,
        mori_set_matches: support_one == relation_set,
        expansions_nonnegative,
    }
}
