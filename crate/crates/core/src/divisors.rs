//! Divisor classes: the plus basis, nef certificates, and the dual basis of
//! nef generators.
//!
//! The divisor class group of a height-`r` tower is free of rank `r`, and
//! the plus divisors `D(1+) ... D(r+)` form a basis. Each minus divisor
//! expands as `D(i-) ~ sum_{j <= i} h[i][j] * D(j+)` with integer
//! coefficients given by the triangular recursion
//!
//! ```text
//! h[i][i] = 1,
//! h[i][j] = - sum_{k = j}^{i - 1} beta[k][i] * h[k][j]    (j < i),
//! ```
//!
//! which is exactly what the character relations `div(x^{e_i}) ~ 0` force
//! stage by stage. [`h_table`] computes the table once; [`to_plus_basis`]
//! then rewrites any divisor into its dense plus-basis coordinates.
//!
//! On the curve side the primitive relations give the degrees
//!
//! ```text
//! d_i = D . V(tau_i) = a(i+) + a(i-) - sum_{(ray, c) in gamma_i} c * a(ray),
//! ```
//!
//! and `D` is nef iff every `d_i >= 0`, ample iff every `d_i > 0`
//! ([`relation_degrees`]), because the relation curves generate the Mori
//! cone. Dually, [`nef_generators`] builds divisors `D_1 ... D_r` with
//! `D_m . V(tau_i) = delta[m][i]` by the stage recursion
//! `D_m = D(m+) + sum_{k in J_m} c_m^k * D_k`, where `J_m` collects the
//! earlier stages whose relation contains the plus ray `m+` (with
//! coefficient `c_m^k`). These generate the nef cone, and the dual-basis
//! identity is asserted before they are returned.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::divisor::{Divisor, PlusDivisor, RayId};
use crate::matrix::BottMatrix;
use crate::relations::{all_relations, PrimitiveRelation};

/// Expansion coefficients of the minus divisors in the plus basis:
/// `D(i-) ~ sum_j h(i, j) * D(j+)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HTable {
    h: Vec<Vec<BigInt>>,
}

impl HTable {
    pub fn r(&self) -> usize {
        self.h.len()
    }

    /// Coefficient `h[i][j]` for `1 <= j <= i <= r`.
    ///
    /// # Panics
    ///
    /// Panics outside the lower triangle; the table is only defined there.
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        assert!(
            1 <= j && j <= i && i <= self.h.len(),
            "h({i}, {j}) outside the lower triangle"
        );
        &self.h[i - 1][j - 1]
    }
}

/// Computes the full expansion table of the minus divisors.
pub fn h_table(m: &BottMatrix) -> HTable {
    let r = m.r();
    let mut h: Vec<Vec<BigInt>> = Vec::with_capacity(r);
    for i in 1..=r {
        let mut row = vec![BigInt::zero(); i];
        row[i - 1] = BigInt::one();
        for j in 1..i {
            let mut total = BigInt::zero();
            for k in j..i {
                total -= m.beta(k, i) * &h[k - 1][j - 1];
            }
            row[j - 1] = total;
        }
        h.push(row);
    }
    HTable { h }
}

/// Rewrites a sparse divisor in the plus basis using a precomputed table:
/// `g_i = a(i+) + sum_{j >= i} a(j-) * h[j][i]`.
///
/// # Panics
///
/// Panics on a height mismatch between the table and the divisor.
pub fn to_plus_basis_with(h: &HTable, d: &Divisor) -> PlusDivisor {
    let r = d.r();
    assert_eq!(h.r(), r, "height mismatch");
    let mut g = Vec::with_capacity(r);
    for i in 1..=r {
        let mut total = d.coeff(RayId::plus(i)).clone();
        for j in i..=r {
            let a = d.coeff(RayId::minus(j));
            if !a.is_zero() {
                total += a * BigRational::from(h.get(j, i).clone());
            }
        }
        g.push(total);
    }
    PlusDivisor::new(g)
}

/// Rewrites a sparse divisor in the plus basis.
pub fn to_plus_basis(m: &BottMatrix, d: &Divisor) -> PlusDivisor {
    to_plus_basis_with(&h_table(m), d)
}

/// The degrees of a divisor against all relation curves, with the nef/ample
/// verdicts they certify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NefCertificate {
    /// `degrees[i - 1] = D . V(tau_i)`.
    pub degrees: Vec<BigRational>,
    /// All degrees nonnegative.
    pub is_nef: bool,
    /// All degrees strictly positive.
    pub is_ample: bool,
}

/// Degrees of `d` against the relation curves of precomputed `relations`.
pub fn relation_degrees_with(relations: &[PrimitiveRelation], d: &Divisor) -> NefCertificate {
    let degrees: Vec<BigRational> = relations
        .iter()
        .map(|relation| {
            let i = relation.i;
            let mut degree =
                d.coeff(RayId::plus(i)).clone() + d.coeff(RayId::minus(i));
            for (ray, c) in &relation.gamma {
                degree -= d.coeff(*ray) * BigRational::from(c.clone());
            }
            degree
        })
        .collect();
    let is_nef = degrees.iter().all(|x| !x.is_negative());
    let is_ample = degrees.iter().all(|x| x.is_positive());
    NefCertificate {
        degrees,
        is_nef,
        is_ample,
    }
}

/// Degrees of `d` against all relation curves of the tower.
pub fn relation_degrees(m: &BottMatrix, d: &Divisor) -> NefCertificate {
    relation_degrees_with(&all_relations(m), d)
}

/// Builds the dual basis of the relation curves from precomputed relations:
/// plus-basis divisors `D_1 ... D_r` with `D_m . V(tau_i) = delta[m][i]`.
/// They generate the nef cone.
///
/// # Panics
///
/// Panics if the constructed divisors fail the dual-basis identity — the
/// recursion guarantees it, so a failure is a bug.
pub fn nef_generators_with(relations: &[PrimitiveRelation]) -> Vec<PlusDivisor> {
    let r = relations.len();
    let mut gens: Vec<PlusDivisor> = Vec::with_capacity(r);
    for m_stage in 1..=r {
        let mut d = PlusDivisor::unit(r, m_stage);
        for k in 1..m_stage {
            let c = relations[k - 1].gamma_coeff(RayId::plus(m_stage));
            if c.is_positive() {
                let scale = BigRational::from(c);
                d.add_scaled(&gens[k - 1], &scale);
            }
        }
        gens.push(d);
    }
    for (m_idx, gen) in gens.iter().enumerate() {
        for (i_idx, relation) in relations.iter().enumerate() {
            let degree = relation.curve_class().pair(gen);
            let expected = if m_idx == i_idx {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            assert_eq!(
                degree,
                expected,
                "dual-basis identity failed at D_{} . V(tau_{})",
                m_idx + 1,
                i_idx + 1
            );
        }
    }
    gens
}

/// Builds the nef-cone generators of the tower.
pub fn nef_generators(m: &BottMatrix) -> Vec<PlusDivisor> {
    nef_generators_with(&all_relations(m))
}

/// The anticanonical divisor and its per-stage relative pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalData {
    /// `-K`: coefficient 1 on every ray.
    pub anticanonical: Divisor,
    /// Stage `i`'s relative piece `D(i+) + D(i-)`; the `-K` coefficients
    /// split as the sum of these.
    pub relative_anticanonical: Vec<Divisor>,
}

/// Computes the anticanonical divisor and its relative pieces.
pub fn canonical_data(m: &BottMatrix) -> CanonicalData {
    let r = m.r();
    let relative_anticanonical = (1..=r)
        .map(|i| {
            Divisor::from_entries(
                r,
                [
                    (RayId::plus(i), BigRational::one()),
                    (RayId::minus(i), BigRational::one()),
                ],
            )
            .expect("stage rays are always in range")
        })
        .collect();
    CanonicalData {
        anticanonical: Divisor::anticanonical(r),
        relative_anticanonical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::m7;
    use crate::matrix::BottMatrix;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn hirzebruch(twist: i64) -> BottMatrix {
        BottMatrix::from_rows_i64(&[&[twist]]).expect("valid matrix")
    }

    #[test]
    fn h_table_of_a_hirzebruch_surface() {
        let h = h_table(&hirzebruch(-2));
        assert_eq!(*h.get(1, 1), BigInt::one());
        assert_eq!(*h.get(2, 1), BigInt::from(2));
        assert_eq!(*h.get(2, 2), BigInt::one());
    }

    #[test]
    fn h_table_composes_through_intermediate_stages() {
        // h[3][1] = -beta[1][3] + beta[2][3] * beta[1][2].
        let m = BottMatrix::from_rows_i64(&[&[2, 5], &[3]]).expect("valid matrix");
        let h = h_table(&m);
        assert_eq!(*h.get(2, 1), BigInt::from(-2));
        assert_eq!(*h.get(3, 2), BigInt::from(-3));
        assert_eq!(*h.get(3, 1), BigInt::from(-5 + 3 * 2));
    }

    #[test]
    fn character_divisors_vanish_in_the_plus_basis() {
        // div(x^{e_i}) = sum_ray <u_ray, e_i> D_ray is principal, so its
        // plus-basis form must be identically zero. This exercises every
        // h-table entry.
        let m = m7();
        let rays = crate::fan::build_rays(&m);
        for i in 1..=m.r() {
            let d = Divisor::from_fn(m.r(), |ray| {
                BigRational::from(rays.generator(ray)[i - 1].clone())
            });
            let g = to_plus_basis(&m, &d);
            assert!(g.is_zero(), "stage {i}: got {g}");
        }
    }

    #[test]
    fn anticanonical_of_a_hirzebruch_surface_in_the_plus_basis() {
        let m = hirzebruch(-2);
        let g = to_plus_basis(&m, &Divisor::anticanonical(2));
        assert_eq!(g.coeffs(), &[q(4), q(2)]);

        let cert = relation_degrees(&m, &Divisor::anticanonical(2));
        assert_eq!(cert.degrees, [q(0), q(2)]);
        assert!(cert.is_nef);
        assert!(!cert.is_ample);
    }

    #[test]
    fn nef_generators_of_hirzebruch_surfaces() {
        // Twist -1: D_1 = D(1+), D_2 = D(1+) + D(2+).
        let gens = nef_generators(&hirzebruch(-1));
        assert_eq!(gens[0].coeffs(), &[q(1), q(0)]);
        assert_eq!(gens[1].coeffs(), &[q(1), q(1)]);

        // Twist 0 (a product of lines): the units themselves.
        let gens = nef_generators(&hirzebruch(0));
        assert_eq!(gens[0].coeffs(), &[q(1), q(0)]);
        assert_eq!(gens[1].coeffs(), &[q(0), q(1)]);
    }

    #[test]
    fn nef_generators_of_the_height_seven_example() {
        let gens = nef_generators(&m7());
        let expected: [[i64; 7]; 7] = [
            [1, 0, 0, 0, 0, 0, 0],
            [1, 1, 0, 0, 0, 0, 0],
            [1, 0, 1, 0, 0, 0, 0],
            [1, 0, 0, 1, 0, 0, 0],
            [2, 0, 1, 1, 1, 0, 0],
            [3, 1, 1, 1, 1, 1, 0],
            [6, 2, 2, 1, 1, 1, 1],
        ];
        for (m_idx, want) in expected.iter().enumerate() {
            let want: Vec<BigRational> = want.iter().map(|&x| q(x)).collect();
            assert_eq!(
                gens[m_idx].coeffs(),
                want.as_slice(),
                "D_{}",
                m_idx + 1
            );
        }
    }

    #[test]
    fn anticanonical_degrees_match_the_gamma_sums() {
        // -K . V(tau_i) = 2 - sum of gamma coefficients.
        let m = m7();
        let relations = all_relations(&m);
        let cert = relation_degrees_with(&relations, &Divisor::anticanonical(7));
        for (relation, degree) in relations.iter().zip(&cert.degrees) {
            let expected = q(2) - BigRational::from(relation.degree_sum());
            assert_eq!(*degree, expected, "stage {}", relation.i);
        }
    }

    #[test]
    fn canonical_data_splits_by_stage() {
        let data = canonical_data(&hirzebruch(3));
        assert_eq!(data.anticanonical, Divisor::anticanonical(2));
        assert_eq!(data.relative_anticanonical.len(), 2);
        let stage1 = &data.relative_anticanonical[0];
        assert_eq!(*stage1.coeff(RayId::plus(1)), q(1));
        assert_eq!(*stage1.coeff(RayId::minus(1)), q(1));
        assert!(stage1.coeff(RayId::plus(2)).is_zero());
    }

    #[test]
    fn plus_basis_conversion_respects_linear_equivalence() {
        // D(2-) alone must convert to exactly its h-row.
        let m = BottMatrix::from_rows_i64(&[&[2, 5], &[3]]).expect("valid matrix");
        let d = Divisor::from_entries(3, [(RayId::minus(2), q(1))]).expect("in range");
        let g = to_plus_basis(&m, &d);
        assert_eq!(g.coeffs(), &[q(-2), q(1), q(0)]);
    }
}
