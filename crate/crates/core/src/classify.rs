//! Positivity classification: Fano, weak Fano, log Fano, and the types of
//! the extremal rays.
//!
//! Everything here rests on one number per stage: the sum `s_i` of the
//! coefficients of the primitive relation `gamma_i`. The anticanonical
//! degree of the relation curve is `(-K) . V(tau_i) = 2 - s_i`, so
//!
//! * the tower is **Fano** iff every `s_i <= 1`,
//! * **weak Fano** iff every `s_i <= 2`,
//! * the ray spanned by `V(tau_i)` is `K`-negative / trivial / positive as
//!   `s_i - 2` is negative / zero / positive.
//!
//! Independently, both thresholds have purely **structural**
//! characterizations directly in terms of the matrix row: small row
//! patterns (at most one downward twist of size 1, a unit twist absorbed by
//! a later stage, ...) enumerated below as `N1`/`N2` subcases, each carrying
//! a witness. [`classify_fano`] evaluates **both** routes — the structural
//! scan and the degree sums — for every stage and refuses to return if they
//! ever disagree (that would be a bug in this crate, surfaced as
//! [`Error::RouteDisagreement`], never silently).
//!
//! Log Fano: for an effective fractional boundary `D` (all coefficients in
//! `[0, 1)`, so its round-down vanishes), the pair `(X, D)` is log Fano iff
//! `-(K + D)` is ample, i.e. iff every
//! `k_i = D . V(tau_i) + s_i - 2` is strictly negative.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::divisor::{Divisor, RayId};
use crate::error::{Error, Result};
use crate::matrix::BottMatrix;
use crate::relations::{all_relations, PrimitiveRelation};

/// Witness for a structural condition holding at one stage: the subcase
/// that matched and the stages it names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionWitness {
    /// No upward twist; at most bounded downward twists.
    CaseI,
    /// A unit twist at `m` absorbed exactly by stage `m` (the `N1` shape).
    CaseII { m: usize },
    /// Twist of size 1 or 2 at `m`, compensated above `m`.
    CaseIIA { m: usize },
    /// Unit down-twist at `m1` against a unit up-twist at `m2`.
    CaseIIB { m1: usize, m2: usize },
    /// Unit twist at `m1` whose reduction leaves a single +1 at `m2`.
    CaseIIC { m1: usize, m2: usize },
    /// Unit twist at `m1` whose reduction leaves a single -1 at `m2`,
    /// cancelled by stage `m2`.
    CaseIID { m1: usize, m2: usize },
}

impl fmt::Display for ConditionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConditionWitness::CaseI => f.write_str("(i)"),
            ConditionWitness::CaseII { m } => write!(f, "(ii), m = {m}"),
            ConditionWitness::CaseIIA { m } => write!(f, "(ii)(a), m = {m}"),
            ConditionWitness::CaseIIB { m1, m2 } => write!(f, "(ii)(b), m1 = {m1}, m2 = {m2}"),
            ConditionWitness::CaseIIC { m1, m2 } => write!(f, "(ii)(c), m1 = {m1}, m2 = {m2}"),
            ConditionWitness::CaseIID { m1, m2 } => write!(f, "(ii)(d), m1 = {m1}, m2 = {m2}"),
        }
    }
}

/// Structural verdicts for one stage: `n1` witnesses `s_i <= 1`, `n2`
/// witnesses `s_i <= 2` (`None` = the condition fails at this stage).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCondition {
    pub i: usize,
    pub n1: Option<ConditionWitness>,
    pub n2: Option<ConditionWitness>,
}

/// The full classification of a tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanoReport {
    /// Structural outcome per stage.
    pub per_row: Vec<RowCondition>,
    /// `s_i`, the coefficient sum of each primitive relation.
    pub degree_sums: Vec<BigInt>,
    /// Every stage satisfies `N1` (equivalently `s_i <= 1`).
    pub is_fano: bool,
    /// Every stage satisfies `N2` (equivalently `s_i <= 2`).
    pub is_weak_fano: bool,
    /// Fano towers admit no infinitesimal deformations, so this coincides
    /// with `is_fano`.
    pub locally_rigid: bool,
}

/// Classifies the tower, running the structural row scan and the
/// degree-sum route side by side.
///
/// # Errors
///
/// [`Error::RouteDisagreement`] if the two routes split at any stage — an
/// internal bug, never a property of the input.
pub fn classify_fano_with(
    m: &BottMatrix,
    relations: &[PrimitiveRelation],
) -> Result<FanoReport> {
    let degree_sums: Vec<BigInt> = relations
        .iter()
        .map(PrimitiveRelation::degree_sum)
        .collect();
    let per_row: Vec<RowCondition> = (1..=m.r())
        .map(|i| RowCondition {
            i,
            n1: check_n1(m, i),
            n2: check_n2(m, i),
        })
        .collect();

    let (one, two) = (BigInt::one(), BigInt::from(2));
    for (row, sum) in per_row.iter().zip(&degree_sums) {
        // A stage passing the strict condition must pass the weak one.
        debug_assert!(row.n1.is_none() || row.n2.is_some());
        let checks = [("N1", row.n1.is_some(), sum <= &one), (
            "N2",
            row.n2.is_some(),
            sum <= &two,
        )];
        for (name, structural, by_degree) in checks {
            if structural != by_degree {
                return Err(Error::RouteDisagreement {
                    context: format!("{name} at stage {}", row.i),
                    detail: format!(
                        "structural scan says {structural}, degree sum {sum} says {by_degree}"
                    ),
                });
            }
        }
    }

    let is_fano = per_row.iter().all(|row| row.n1.is_some());
    let is_weak_fano = per_row.iter().all(|row| row.n2.is_some());
    Ok(FanoReport {
        per_row,
        degree_sums,
        is_fano,
        is_weak_fano,
        locally_rigid: is_fano,
    })
}

/// Classifies the tower from scratch.
///
/// # Errors
///
/// See [`classify_fano_with`].
pub fn classify_fano(m: &BottMatrix) -> Result<FanoReport> {
    classify_fano_with(m, &all_relations(m))
}

/// The structural condition for `s_i <= 1`.
fn check_n1(m: &BottMatrix, i: usize) -> Option<ConditionWitness> {
    let r = m.r();
    let one = BigInt::one();
    let ups: Vec<usize> = (i + 1..=r).filter(|&j| m.beta(i, j).is_positive()).collect();
    let downs: Vec<usize> = (i + 1..=r).filter(|&j| m.beta(i, j).is_negative()).collect();

    if ups.is_empty() {
        // (i): at most one downward twist, of size exactly 1.
        let small = match downs.as_slice() {
            [] => true,
            [l] => *m.beta(i, *l) == -&one,
            _ => false,
        };
        return small.then_some(ConditionWitness::CaseI);
    }
    // (ii): a unit twist at m, nothing before it, and row m repeating the
    // tail of row i above m.
    (i + 1..=r).find_map(|m_stage| {
        let fits = *m.beta(i, m_stage) == one
            && (i + 1..m_stage).all(|j| m.beta(i, j).is_zero())
            && (m_stage + 1..=r).all(|j| m.beta(i, j) == m.beta(m_stage, j));
        fits.then_some(ConditionWitness::CaseII { m: m_stage })
    })
}

/// The structural condition for `s_i <= 2`. `a(m, j)` abbreviates the
/// one-step reduction value `beta[i][m] * beta[m][j] - beta[i][j]`.
fn check_n2(m: &BottMatrix, i: usize) -> Option<ConditionWitness> {
    let r = m.r();
    let one = BigInt::one();
    let two = BigInt::from(2);
    let a = |m_stage: usize, j: usize| m.beta(i, m_stage) * m.beta(m_stage, j) - m.beta(i, j);
    let ups: Vec<usize> = (i + 1..=r).filter(|&j| m.beta(i, j).is_positive()).collect();
    let downs: Vec<usize> = (i + 1..=r).filter(|&j| m.beta(i, j).is_negative()).collect();

    if ups.is_empty() {
        // (i): downward twists totalling at most 2.
        let small = match downs.as_slice() {
            [] => true,
            [l] => {
                let b = m.beta(i, *l);
                *b == -&one || *b == -&two
            }
            [l1, l2] => *m.beta(i, *l1) == -&one && *m.beta(i, *l2) == -&one,
            _ => false,
        };
        return small.then_some(ConditionWitness::CaseI);
    }

    // (ii)(a): twist 1 or 2 at m, nothing before, reduction clean above.
    let case_a = (i + 1..=r).find_map(|m_stage| {
        let b = m.beta(i, m_stage);
        let fits = (*b == one || *b == two)
            && (i + 1..m_stage).all(|j| m.beta(i, j).is_zero())
            && (m_stage + 1..=r).all(|j| a(m_stage, j).is_zero());
        fits.then_some(ConditionWitness::CaseIIA { m: m_stage })
    });
    if case_a.is_some() {
        return case_a;
    }

    let pairs = (i + 1..=r)
        .flat_map(|m1| (m1 + 1..=r).map(move |m2| (m1, m2)));

    // (ii)(b): -1 at m1, +1 at m2, nothing else below m2, reduction at m2
    // clean above.
    let case_b = pairs.clone().find_map(|(m1, m2)| {
        let fits = *m.beta(i, m1) == -&one
            && *m.beta(i, m2) == one
            && (i + 1..m2).all(|j| j == m1 || m.beta(i, j).is_zero())
            && (m2 + 1..=r).all(|j| a(m2, j).is_zero());
        fits.then_some(ConditionWitness::CaseIIB { m1, m2 })
    });
    if case_b.is_some() {
        return case_b;
    }

    // (ii)(c): +1 at m1, reduction at m1 clean above except a single +1
    // residue at m2.
    let case_c = pairs.clone().find_map(|(m1, m2)| {
        let fits = *m.beta(i, m1) == one
            && a(m1, m2) == one
            && (i + 1..m1).all(|j| m.beta(i, j).is_zero())
            && (m1 + 1..=r).all(|j| j == m2 || a(m1, j).is_zero());
        fits.then_some(ConditionWitness::CaseIIC { m1, m2 })
    });
    if case_c.is_some() {
        return case_c;
    }

    // (ii)(d): +1 at m1, reduction at m1 leaving a single -1 residue at m2,
    // which stage m2 cancels exactly.
    pairs.clone().find_map(|(m1, m2)| {
        let fits = *m.beta(i, m1) == one
            && a(m1, m2) == -&one
            && (i + 1..m1).all(|j| m.beta(i, j).is_zero())
            && (m1 + 1..m2).all(|j| a(m1, j).is_zero())
            && (m2 + 1..=r).all(|j| (m.beta(m2, j) + a(m1, j)).is_zero());
        fits.then_some(ConditionWitness::CaseIID { m1, m2 })
    })
}

/// Type of the extremal ray spanned by a relation curve, by the sign of
/// `K . V(tau_i) = s_i - 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayType {
    KNegative,
    KTrivial,
    KPositive,
}

impl fmt::Display for RayType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RayType::KNegative => "K-negative",
            RayType::KTrivial => "K-trivial",
            RayType::KPositive => "K-positive",
        })
    }
}

/// Classifies every relation curve's ray from precomputed relations.
///
/// `K`-negativity also has a shape criterion — `gamma` empty or a single
/// ray with coefficient 1 — which is evaluated alongside the sign of
/// `s_i - 2` as a consistency guard.
///
/// # Errors
///
/// [`Error::RouteDisagreement`] if the shape criterion and the sign test
/// split (a bug in this crate).
pub fn ray_types_with(relations: &[PrimitiveRelation]) -> Result<Vec<RayType>> {
    let two = BigInt::from(2);
    relations
        .iter()
        .map(|relation| {
            let sum = relation.degree_sum();
            let negative_by_shape = relation.gamma.is_empty()
                || (relation.gamma.len() == 1 && relation.gamma[0].1.is_one());
            let negative_by_sign = sum < two;
            if negative_by_shape != negative_by_sign {
                return Err(Error::RouteDisagreement {
                    context: format!("ray type at stage {}", relation.i),
                    detail: format!(
                        "shape criterion says K-negative = {negative_by_shape}, \
                         degree sum {sum} says {negative_by_sign}"
                    ),
                });
            }
            Ok(if negative_by_sign {
                RayType::KNegative
            } else if sum == two {
                RayType::KTrivial
            } else {
                RayType::KPositive
            })
        })
        .collect()
}

/// Classifies every relation curve's ray.
///
/// # Errors
///
/// See [`ray_types_with`].
pub fn ray_types(m: &BottMatrix) -> Result<Vec<RayType>> {
    ray_types_with(&all_relations(m))
}

/// Log-Fano verdict for a boundary divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogFanoReport {
    /// `k_i = D . V(tau_i) + s_i - 2`; the pair is log Fano iff all are
    /// negative (and the boundary is a genuine fractional boundary).
    pub k: Vec<BigRational>,
    /// All boundary coefficients lie in `[0, 1)`, so the round-down of the
    /// boundary vanishes.
    pub floor_ok: bool,
    /// `floor_ok` and every `k_i < 0`.
    pub is_log_fano: bool,
}

/// Evaluates the log-Fano criterion for `(X, d)` from precomputed
/// relations.
pub fn log_fano_certificate_with(
    relations: &[PrimitiveRelation],
    d: &Divisor,
) -> LogFanoReport {
    let two = BigRational::from(BigInt::from(2));
    let k: Vec<BigRational> = relations
        .iter()
        .map(|relation| {
            let i = relation.i;
            let mut degree = d.coeff(RayId::plus(i)).clone() + d.coeff(RayId::minus(i));
            for (ray, c) in &relation.gamma {
                degree -= d.coeff(*ray) * BigRational::from(c.clone());
            }
            degree + BigRational::from(relation.degree_sum()) - &two
        })
        .collect();
    let floor_ok = RayId::all(d.r()).all(|ray| {
        let a = d.coeff(ray);
        !a.is_negative() && *a < BigRational::one()
    });
    let is_log_fano = floor_ok && k.iter().all(Signed::is_negative);
    LogFanoReport {
        k,
        floor_ok,
        is_log_fano,
    }
}

/// Evaluates the log-Fano criterion for `(X, d)`.
pub fn log_fano_certificate(m: &BottMatrix, d: &Divisor) -> LogFanoReport {
    log_fano_certificate_with(&all_relations(m), d)
}
