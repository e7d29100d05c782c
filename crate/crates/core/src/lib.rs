//! Exact combinatorial geometry of Bott towers.
//!
//! A Bott tower is an iterated projective-line bundle; everything about it
//! is encoded by a strictly upper-triangular integer matrix
//! ([`BottMatrix`]). From that matrix this crate computes, in exact
//! arithmetic throughout (`BigInt` / `BigRational`, no floating point):
//!
//! * the fan — rays, maximal cones, walls, and each wall's relation and
//!   curve class ([`fan`]);
//! * the primitive relations, via the reduction run stage by stage
//!   ([`relations`]);
//! * divisor classes in the plus basis, nef certificates, and the dual
//!   basis generating the nef cone ([`divisors`]);
//! * Fano / weak-Fano / log-Fano classification and the types of the
//!   extremal rays ([`classify`]).
//!
//! Two routes everywhere: each closed-form computation has a brute-force
//! counterpart (wall enumeration, [`fan::oracle_report`]) or a second
//! independent formula, and the crate cross-checks them — either by
//! assertion at construction time or by returning
//! [`Error::RouteDisagreement`] — rather than trusting a single path.

pub mod classify;
pub mod divisor;
pub mod divisors;
pub mod error;
pub mod fan;
pub mod linalg;
pub mod matrix;
pub mod relations;

pub use classify::{
    classify_fano, classify_fano_with, log_fano_certificate, log_fano_certificate_with,
    ray_types, ray_types_with, ConditionWitness, FanoReport, LogFanoReport, RayType,
    RowCondition,
};
pub use divisor::{Divisor, PlusDivisor, RayId, RaySign};
pub use divisors::{
    canonical_data, h_table, nef_generators, nef_generators_with, relation_degrees,
    relation_degrees_with, to_plus_basis, to_plus_basis_with, CanonicalData, HTable,
    NefCertificate,
};
pub use error::{Error, Result};
pub use fan::{
    build_rays, enumerate_walls, oracle_report, solve_wall, CurveClass, OracleReport, Rays,
    Wall, WallEntry, DEFAULT_ORACLE_CAP,
};
pub use matrix::BottMatrix;
pub use relations::{
    all_relations, primitive_relation, relation_basis, relation_wall, PrimitiveRelation,
    ReductionTrace,
};

/// Shared fixtures for the unit tests of several modules.
#[cfg(test)]
pub(crate) mod fixtures {
    use crate::matrix::BottMatrix;

    /// The height-7 worked example used throughout the test suite: a tower
    /// whose relations exercise every reduction depth up to three.
    pub(crate) fn m7() -> BottMatrix {
        BottMatrix::from_rows_i64(&[
            &[-1, -1, -1, 2, -1, 2],
            &[0, 2, -1, 2, -1],
            &[0, -1, 0, -1],
            &[-1, 2, -1],
            &[-1, 2],
            &[-1],
        ])
        .expect("valid matrix")
    }
}
