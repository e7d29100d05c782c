//! Primitive relations of a Bott tower's fan.
//!
//! For each stage `i`, the pair `{i+, i-}` is a primitive collection (the
//! two rays never share a cone), and its primitive relation expresses
//! `u(i+) + u(i-)` as a nonnegative combination of the rays of the smallest
//! cone containing that sum:
//!
//! ```text
//! u(i+) + u(i-) = sum_{(ray, c) in gamma_i} c * u(ray),   all c > 0.
//! ```
//!
//! The supporting cone is found by a **reduction**: a run of eliminations
//! through the stages above `i`, recorded as rows `a_1, a_2, ...` of a
//! table. Row 1 is `a_1[j] = beta[i][j]`. The first pivot `j_2` is the
//! smallest column with `a_1[j_2] > 0`; row 2 is
//! `a_2[j] = beta[i][j_2] * beta[j_2][j] - beta[i][j]`, and from then on
//! each pivot `j_{k+1}` is the smallest column with `a_k[j_{k+1}] < 0` and
//!
//! ```text
//! a_{k+1}[j] = -a_k[j_{k+1}] * beta[j_{k+1}][j] + a_k[j]    (j > j_{k+1}).
//! ```
//!
//! The run stops when no pivot is left. The pivot set `I_i = {j_1 = i,
//! j_2, ...}` marks the stages whose **minus** ray enters `gamma_i`; every
//! other contributing stage enters with its plus ray. The coefficients read
//! off the table: between consecutive pivots the row value itself (negated
//! for row 1, whose entries there are `<= 0`), at a pivot the magnitude of
//! the pivot entry. Each relation is verified on the nose against the ray
//! generators before it is returned.
//!
//! The curve side: `V(tau_i)`, the wall curve flanked by the two maximal
//! cones that agree outside stage `i`, carry minus signs exactly on
//! `I_i \ {i}`, and meet the plus divisors in
//! `D(i+) . V = 1`, `D(j+) . V = -c_j` for `(j+, c_j) in gamma_i`, and `0`
//! elsewhere — the [`CurveClass`] of the relation. [`relation_wall`]
//! rebuilds the same wall through the generic wall solver and asserts the
//! two routes agree.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, One, Signed, Zero};

use crate::divisor::{RayId, RaySign};
use crate::error::{Error, Result};
use crate::fan::{build_rays, solve_wall, CurveClass, Wall};
use crate::matrix::BottMatrix;

/// The reduction table of one primitive relation, kept for reporting.
///
/// `pivots` is the set `I_i` in ascending order (starting with `i`), and
/// `a_table[k]` lists the pairs `(j, a_{k+1}[j])` for every column
/// `j > pivots[k]`, zeros included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub pivots: Vec<usize>,
    pub a_table: Vec<Vec<(usize, BigInt)>>,
}

/// The primitive relation of stage `i`, with the reduction that produced it.
///
/// `gamma` lists the rays of the supporting cone with their (strictly
/// positive) coefficients, in ray order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveRelation {
    r: usize,
    pub i: usize,
    pub gamma: Vec<(RayId, BigInt)>,
    pub trace: ReductionTrace,
}

impl PrimitiveRelation {
    /// Height of the ambient tower.
    pub fn r(&self) -> usize {
        self.r
    }

    /// The pivot set `I_i` (ascending, first element `i`).
    pub fn pivot_set(&self) -> &[usize] {
        &self.trace.pivots
    }

    /// Sum of the `gamma` coefficients. The relation's curve meets the
    /// canonical divisor in `sum - 2`, so this sum drives every positivity
    /// classification: Fano demands `<= 1` at each stage, weak Fano `<= 2`.
    pub fn degree_sum(&self) -> BigInt {
        self.gamma.iter().map(|(_, c)| c).sum()
    }

    /// Class of the relation's wall curve (intersection numbers with the
    /// plus divisors): `1` at stage `i`, `-c` at each plus ray of `gamma`,
    /// `0` elsewhere.
    pub fn curve_class(&self) -> CurveClass {
        let mut ints = vec![BigInt::zero(); self.r];
        ints[self.i - 1] = BigInt::one();
        for (ray, c) in &self.gamma {
            if ray.sign == RaySign::Plus {
                ints[ray.index - 1] = -c;
            }
        }
        CurveClass::new(ints)
    }

    /// Coefficient of `ray` in `gamma`, zero if absent.
    pub fn gamma_coeff(&self, ray: RayId) -> BigInt {
        self.gamma
            .iter()
            .find(|(g, _)| *g == ray)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }
}

impl fmt::Display for PrimitiveRelation {
    /// Renders `e_2^+ + e_2^- = 2 e_4^- + e_5^- + e_6^+ + e_7^+` (a `0`
    /// right-hand side when `gamma` is empty).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e_{i}^+ + e_{i}^- = ", i = self.i)?;
        if self.gamma.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .gamma
            .iter()
            .map(|(ray, c)| {
                let head = if c.is_one() {
                    String::new()
                } else {
                    format!("{c} ")
                };
                format!("{head}e_{}^{}", ray.index, ray.sign.symbol())
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Runs the reduction for stage `i` and assembles the primitive relation.
///
/// # Errors
///
/// [`Error::IndexOutOfRange`] if `i` is not a stage of the tower.
///
/// # Panics
///
/// Panics if the assembled relation fails the exact lattice identity
/// `u(i+) + u(i-) = sum c * u(ray)` — that would be a bug in the reduction,
/// not a property of the input.
pub fn primitive_relation(m: &BottMatrix, i: usize) -> Result<PrimitiveRelation> {
    let r = m.r();
    if i < 1 || i > r {
        return Err(Error::IndexOutOfRange(format!(
            "stage {i} out of range for a height-{r} tower"
        )));
    }

    // The reduction. `levels[k]` holds row k+1 of the table, covering the
    // columns strictly above `pivots[k]`.
    let mut pivots = vec![i];
    let mut levels: Vec<Vec<BigInt>> = vec![(i + 1..=r).map(|j| m.beta(i, j).clone()).collect()];
    let value_at = |level: &[BigInt], pivot: usize, j: usize| level[j - pivot - 1].clone();

    let first_pivot = (i + 1..=r).find(|&j| value_at(&levels[0], i, j).is_positive());
    if let Some(j2) = first_pivot {
        pivots.push(j2);
        let beta_ij2 = m.beta(i, j2);
        levels.push(
            (j2 + 1..=r)
                .map(|j| beta_ij2 * m.beta(j2, j) - m.beta(i, j))
                .collect(),
        );
        loop {
            let (level, &pivot) = (levels.last().expect("nonempty"), pivots.last().expect("nonempty"));
            let Some(next) = (pivot + 1..=r).find(|&j| value_at(level, pivot, j).is_negative())
            else {
                break;
            };
            let a_next = value_at(level, pivot, next);
            let new_level: Vec<BigInt> = (next + 1..=r)
                .map(|j| -&a_next * m.beta(next, j) + value_at(level, pivot, j))
                .collect();
            pivots.push(next);
            levels.push(new_level);
        }
    }

    // Read `gamma` off the table: between pivots the row values (negated on
    // row 1), at each pivot the magnitude of the pivot entry on the minus
    // ray. All recorded coefficients are strictly positive.
    let mut gamma: Vec<(RayId, BigInt)> = Vec::new();
    for k in 0..pivots.len() {
        let (level, pivot) = (&levels[k], pivots[k]);
        let segment_end = pivots.get(k + 1).copied().unwrap_or(r + 1);
        for j in pivot + 1..segment_end {
            let a = value_at(level, pivot, j);
            let coeff = if k == 0 { -a } else { a };
            debug_assert!(!coeff.is_negative(), "segment coefficient must be >= 0");
            if !coeff.is_zero() {
                gamma.push((RayId::plus(j), coeff));
            }
        }
        if let Some(&next) = pivots.get(k + 1) {
            let a = value_at(level, pivot, next);
            let coeff = if k == 0 { a } else { -a };
            debug_assert!(coeff.is_positive(), "pivot coefficient must be > 0");
            gamma.push((RayId::minus(next), coeff));
        }
    }

    let trace = ReductionTrace {
        pivots: pivots.clone(),
        a_table: levels
            .iter()
            .zip(&pivots)
            .map(|(level, &pivot)| {
                (pivot + 1..=r)
                    .map(|j| (j, value_at(level, pivot, j)))
                    .collect()
            })
            .collect(),
    };
    let relation = PrimitiveRelation {
        r,
        i,
        gamma,
        trace,
    };

    // Exact postcondition: the relation holds in the lattice.
    let rays = build_rays(m);
    let mut residual: Vec<BigInt> = rays
        .generator(RayId::plus(i))
        .iter()
        .zip(rays.generator(RayId::minus(i)))
        .map(|(a, b)| a + b)
        .collect();
    for (ray, c) in &relation.gamma {
        for (slot, coord) in residual.iter_mut().zip(rays.generator(*ray)) {
            *slot -= c * coord;
        }
    }
    assert!(
        residual.iter().all(Zero::is_zero),
        "primitive relation for stage {i} violates the lattice identity"
    );
    Ok(relation)
}

/// All `r` primitive relations, one per stage.
pub fn all_relations(m: &BottMatrix) -> Vec<PrimitiveRelation> {
    (1..=m.r())
        .map(|i| primitive_relation(m, i).expect("stage index from 1..=r is always in range"))
        .collect()
}

/// Classes of all relations in stage order. Row `k` has a 1 in column `k`
/// and zeros before it, so the classes are a unitriangular basis of the
/// curve class lattice.
pub fn relation_basis(relations: &[PrimitiveRelation]) -> Vec<CurveClass> {
    relations.iter().map(PrimitiveRelation::curve_class).collect()
}

/// The wall whose curve realizes the primitive relation of stage `i`: it
/// omits stage `i` and carries minus signs exactly on `I_i \ {i}`.
///
/// # Errors
///
/// [`Error::IndexOutOfRange`] if `i` is not a stage of the tower.
///
/// # Panics
///
/// Panics if the wall's curve class (computed by the generic wall solver)
/// disagrees with the relation's — the two independent routes must match.
pub fn relation_wall(m: &BottMatrix, i: usize) -> Result<Wall> {
    let relation = primitive_relation(m, i)?;
    let minus_stages: BTreeSet<usize> = relation.pivot_set()[1..].iter().copied().collect();
    let rays = build_rays(m);
    let wall = solve_wall(&rays, i, |j| {
        if minus_stages.contains(&j) {
            RaySign::Minus
        } else {
            RaySign::Plus
        }
    });
    assert_eq!(
        wall.curve_class(),
        relation.curve_class(),
        "wall solver and reduction disagree on the curve class of stage {i}"
    );
    Ok(wall)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::m7;

    fn gamma_of(m: &BottMatrix, i: usize) -> Vec<(String, i64)> {
        primitive_relation(m, i)
            .expect("in range")
            .gamma
            .iter()
            .map(|(ray, c)| (ray.to_string(), i64::try_from(c).expect("small")))
            .collect()
    }

    #[test]
    fn hirzebruch_relations() {
        // Twist -1: the sum u(1+) + u(1-) = e_2 lands in the cone of 2+.
        let m = BottMatrix::from_rows_i64(&[&[-1]]).expect("valid");
        assert_eq!(gamma_of(&m, 1), [("2+".to_string(), 1)]);
        assert_eq!(
            primitive_relation(&m, 1).expect("in range").pivot_set(),
            &[1]
        );

        // Twist +1: the sum is -e_2, the cone of 2-.
        let m = BottMatrix::from_rows_i64(&[&[1]]).expect("valid");
        assert_eq!(gamma_of(&m, 1), [("2-".to_string(), 1)]);
        assert_eq!(
            primitive_relation(&m, 1).expect("in range").pivot_set(),
            &[1, 2]
        );

        // Twist 0: the two rays are opposite.
        let m = BottMatrix::from_rows_i64(&[&[0]]).expect("valid");
        assert_eq!(gamma_of(&m, 1), []);
    }

    #[test]
    fn height_seven_pivot_sets() {
        let m = m7();
        let expected: [&[usize]; 7] = [
            &[1, 5, 6],
            &[2, 4, 5],
            &[3],
            &[4, 6, 7],
            &[5, 7],
            &[6],
            &[7],
        ];
        for (i, want) in (1..=7).zip(expected) {
            let relation = primitive_relation(&m, i).expect("in range");
            assert_eq!(relation.pivot_set(), want, "stage {i}");
        }
    }

    #[test]
    fn height_seven_gammas() {
        let m = m7();
        let expected: [&[(&str, i64)]; 7] = [
            &[("2+", 1), ("3+", 1), ("4+", 1), ("5-", 2), ("6-", 1), ("7+", 1)],
            &[("4-", 2), ("5-", 1), ("6+", 1), ("7+", 1)],
            &[("5+", 1), ("7+", 1)],
            &[("5+", 1), ("6-", 2), ("7-", 1)],
            &[("6+", 1), ("7-", 2)],
            &[("7+", 1)],
            &[],
        ];
        for (i, want) in (1..=7).zip(expected) {
            let got = gamma_of(&m, i);
            let want: Vec<(String, i64)> =
                want.iter().map(|&(ray, c)| (ray.to_string(), c)).collect();
            assert_eq!(got, want, "stage {i}");
        }
    }

    #[test]
    fn height_seven_display_uses_basis_notation() {
        let m = m7();
        let relation = primitive_relation(&m, 2).expect("in range");
        assert_eq!(
            relation.to_string(),
            "e_2^+ + e_2^- = 2 e_4^- + e_5^- + e_6^+ + e_7^+"
        );
        let relation = primitive_relation(&m, 7).expect("in range");
        assert_eq!(relation.to_string(), "e_7^+ + e_7^- = 0");
    }

    #[test]
    fn height_seven_curve_classes() {
        let m = m7();
        let expected: [[i64; 7]; 7] = [
            [1, -1, -1, -1, 0, 0, -1],
            [0, 1, 0, 0, 0, -1, -1],
            [0, 0, 1, 0, -1, 0, -1],
            [0, 0, 0, 1, -1, 0, 0],
            [0, 0, 0, 0, 1, -1, 0],
            [0, 0, 0, 0, 0, 1, -1],
            [0, 0, 0, 0, 0, 0, 1],
        ];
        for (i, want) in (1..=7).zip(expected) {
            let class = primitive_relation(&m, i).expect("in range").curve_class();
            let want: Vec<BigInt> = want.iter().map(|&x| BigInt::from(x)).collect();
            assert_eq!(class.ints(), want, "stage {i}");
        }
    }

    #[test]
    fn reduction_trace_records_the_table() {
        // Stage 1 of the height-7 example reduces in three rows:
        // row 1 = beta[1][*], pivot 5; row 2 with pivot 6; row 3 clean.
        let relation = primitive_relation(&m7(), 1).expect("in range");
        let rows: Vec<Vec<(usize, i64)>> = relation
            .trace
            .a_table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(j, a)| (*j, i64::try_from(a).expect("small")))
                    .collect()
            })
            .collect();
        assert_eq!(
            rows,
            vec![
                vec![(2, -1), (3, -1), (4, -1), (5, 2), (6, -1), (7, 2)],
                vec![(6, -1), (7, 2)],
                vec![(7, 1)],
            ]
        );
    }

    #[test]
    fn relation_wall_carries_minus_signs_on_the_pivots() {
        let wall = relation_wall(&m7(), 1).expect("in range");
        assert_eq!(wall.omitted(), 1);
        let signs: Vec<String> = wall.ray_ids().map(|ray| ray.to_string()).collect();
        assert_eq!(signs, ["2+", "3+", "4+", "5-", "6-", "7+"]);
    }

    #[test]
    fn stage_out_of_range_is_an_error() {
        let m = m7();
        assert!(matches!(
            primitive_relation(&m, 0),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(matches!(
            primitive_relation(&m, 8),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn relation_classes_form_a_unitriangular_basis() {
        let relations = all_relations(&m7());
        let basis = relation_basis(&relations);
        for (k, class) in basis.iter().enumerate() {
            assert!(class.get(k + 1).is_one());
            assert!((1..=k).all(|j| class.get(j).is_zero()));
        }
    }
}
