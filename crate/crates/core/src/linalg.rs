//! Small exact-integer linear algebra helpers.
//!
//! The crate's cone computations never need general linear algebra — the
//! structures involved are triangular by construction — but the test oracles
//! do: checking that a maximal cone is unimodular means evaluating an exact
//! integer determinant. [`det`] implements Bareiss's fraction-free
//! elimination, which keeps every intermediate value an integer (each
//! division in the update is exact), so the result is the determinant on the
//! nose rather than a floating-point estimate.

use num::{BigInt, Zero};

/// Exact determinant of a square integer matrix (row-major).
///
/// Uses Bareiss's fraction-free Gaussian elimination: `O(n^3)` BigInt
/// operations with intermediate entries no larger than minors of the input.
/// The empty matrix has determinant 1.
///
/// # Panics
///
/// Panics if the rows do not form a square matrix; shapes are fixed by the
/// caller's construction, so a ragged input is a bug.
pub fn det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n, "row {k} has length {} in an {n}x{n} determinant", row.len());
    }
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = 1i64;
    let mut prev_pivot = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let numer = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                // Bareiss guarantee: the previous pivot divides exactly.
                a[i][j] = numer / &prev_pivot;
            }
            a[i][k] = BigInt::zero();
        }
        prev_pivot = a[k][k].clone();
    }
    match n {
        0 => BigInt::from(1),
        _ => a[n - 1][n - 1].clone() * sign,
    }
}
