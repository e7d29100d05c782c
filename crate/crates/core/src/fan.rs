//! The fan of a Bott tower, its walls, and the brute-force wall oracle.
//!
//! A height-`r` tower has `2r` rays. The plus ray of stage `i` is the
//! standard basis vector `e_i`; the minus ray is
//!
//! ```text
//! u(i-) = -e_i - sum_{j > i} beta[i][j] * e_j,
//! ```
//!
//! so every ray generator is zero below its own stage. Maximal cones are
//! indexed by sign vectors: pick one ray per stage. Each such cone is
//! unimodular (its ray matrix is triangular with diagonal entries `+-1` up
//! to row order), which is the smoothness of the tower.
//!
//! A **wall** is a codimension-one cone: all stages but one carry a chosen
//! sign, and the two flanking maximal cones complete the omitted stage with
//! `+` respectively `-`. Every wall therefore satisfies a unique relation
//!
//! ```text
//! u(i+) + u(i-) + sum_{j != i} b_j * u(j, sign_j) = 0,
//! ```
//!
//! found here by exact forward substitution ([`solve_wall`]): the residual
//! starts as `u(i+) + u(i-)` and each stage's coefficient is read off its
//! own coordinate, which no later ray can disturb. The numbers `b_j` are
//! simultaneously the intersection data of the wall curve `V(tau)`:
//! the two flanking rays meet it with multiplicity 1, a wall ray `(j, sign)`
//! with multiplicity `b_j`, and every other ray with 0. Collecting the
//! plus-ray multiplicities gives the wall's [`CurveClass`].
//!
//! Enumerating all `r * 2^(r-1)` walls ([`enumerate_walls`]) yields an
//! independent, assumption-free description of the Mori cone; the rest of
//! the crate computes the same objects through closed-form shortcuts and is
//! cross-checked against this oracle ([`oracle_report`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::divisor::{Divisor, PlusDivisor, RayId, RaySign};
use crate::error::{Error, Result};
use crate::matrix::BottMatrix;

/// Default bound on the tower height for exhaustive wall enumeration;
/// `r = 16` already means half a million walls.
pub const DEFAULT_ORACLE_CAP: usize = 16;

/// The ray generators of the fan, indexed by [`RayId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rays {
    r: usize,
    u: BTreeMap<RayId, Vec<BigInt>>,
}

impl Rays {
    pub fn r(&self) -> usize {
        self.r
    }

    /// Primitive generator of `ray` as a lattice vector of length `r`.
    ///
    /// # Panics
    ///
    /// Panics on an out-of-range ray; ray ids are produced by iterating the
    /// fan, so a stray id is a bug.
    pub fn generator(&self, ray: RayId) -> &[BigInt] {
        self.u
            .get(&ray)
            .unwrap_or_else(|| panic!("ray {ray} out of range for r = {}", self.r))
    }

    /// All rays with their generators, in ray order.
    pub fn iter(&self) -> impl Iterator<Item = (RayId, &[BigInt])> {
        self.u.iter().map(|(&ray, u)| (ray, u.as_slice()))
    }

    /// Ray matrix of the maximal cone selected by `signs` (stage `i` uses
    /// `signs[i - 1]`), one generator per row.
    pub fn cone_matrix(&self, signs: &[RaySign]) -> Vec<Vec<BigInt>> {
        assert_eq!(signs.len(), self.r, "one sign per stage");
        signs
            .iter()
            .enumerate()
            .map(|(idx, &sign)| self.generator(RayId::new(idx + 1, sign)).to_vec())
            .collect()
    }
}

/// Computes all `2r` ray generators of the fan of `m`.
pub fn build_rays(m: &BottMatrix) -> Rays {
    let r = m.r();
    let mut u = BTreeMap::new();
    for i in 1..=r {
        let mut plus = vec![BigInt::zero(); r];
        plus[i - 1] = BigInt::one();
        u.insert(RayId::plus(i), plus);

        let mut minus = vec![BigInt::zero(); r];
        minus[i - 1] = -BigInt::one();
        for j in i + 1..=r {
            minus[j - 1] = -m.beta(i, j);
        }
        u.insert(RayId::minus(i), minus);
    }
    Rays { r, u }
}

/// One stage of a wall: the chosen ray and its coefficient in the wall
/// relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallEntry {
    pub index: usize,
    pub sign: RaySign,
    pub b: BigInt,
}

/// A wall (codimension-one cone) of the fan, together with its relation.
///
/// `omitted` names the stage whose two rays flank the wall; `entries` lists
/// the remaining `r - 1` stages in ascending order with their relation
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    omitted: usize,
    entries: Vec<WallEntry>,
}

impl Wall {
    /// The stage whose plus and minus rays flank this wall.
    pub fn omitted(&self) -> usize {
        self.omitted
    }

    /// Wall stages in ascending index order.
    pub fn entries(&self) -> &[WallEntry] {
        &self.entries
    }

    /// Height of the ambient tower.
    pub fn r(&self) -> usize {
        self.entries.len() + 1
    }

    /// The rays spanning the wall itself.
    pub fn ray_ids(&self) -> impl Iterator<Item = RayId> + '_ {
        self.entries.iter().map(|e| RayId::new(e.index, e.sign))
    }

    /// Sign vectors of the two flanking maximal cones: the wall's signs with
    /// the omitted stage completed by `+` respectively `-`.
    pub fn flanking_signs(&self) -> [Vec<RaySign>; 2] {
        [RaySign::Plus, RaySign::Minus].map(|fill| {
            let mut signs = Vec::with_capacity(self.r());
            for e in &self.entries {
                if e.index > signs.len() + 1 {
                    signs.push(fill);
                }
                signs.push(e.sign);
            }
            if signs.len() < self.r() {
                signs.push(fill);
            }
            signs
        })
    }

    /// Intersection number of a sparse divisor with the wall curve:
    /// coefficient 1 on the two flanking rays, `b_j` on each wall ray.
    pub fn pair_divisor(&self, d: &Divisor) -> BigRational {
        let mut total = d.coeff(RayId::plus(self.omitted)).clone()
            + d.coeff(RayId::minus(self.omitted));
        for e in &self.entries {
            total += d.coeff(RayId::new(e.index, e.sign)) * BigRational::from(e.b.clone());
        }
        total
    }

    /// The wall curve's class: intersection numbers with the plus divisors.
    /// Stage `omitted` contributes 1, a plus wall ray contributes its `b`,
    /// and stages whose minus ray is on the wall contribute 0.
    pub fn curve_class(&self) -> CurveClass {
        let mut ints = vec![BigInt::zero(); self.r()];
        ints[self.omitted - 1] = BigInt::one();
        for e in &self.entries {
            if e.sign == RaySign::Plus {
                ints[e.index - 1] = e.b.clone();
            }
        }
        CurveClass::new(ints)
    }
}

impl fmt::Display for Wall {
    /// Compact form naming the wall rays, e.g. `wall(2; 1+ 3- 4+)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<String> = self.ray_ids().map(|ray| ray.to_string()).collect();
        write!(f, "wall({}; {})", self.omitted, rays.join(" "))
    }
}

/// Solves the wall relation for the wall omitting `omitted` whose stage `j`
/// carries `sign_of(j)`.
///
/// Forward substitution on the residual `v = u(omitted+) + u(omitted-)`:
/// scanning stages in ascending order, coordinate `j` of the running
/// residual is killed by `b_j` (the ray's own coordinate is `+-1` and no
/// later ray touches coordinate `j`). The residual is asserted to vanish at
/// the end; a nonzero residual would mean the fan construction itself is
/// broken.
pub fn solve_wall(rays: &Rays, omitted: usize, sign_of: impl Fn(usize) -> RaySign) -> Wall {
    let r = rays.r();
    assert!((1..=r).contains(&omitted), "stage {omitted} out of range");
    let mut v: Vec<BigInt> = rays
        .generator(RayId::plus(omitted))
        .iter()
        .zip(rays.generator(RayId::minus(omitted)))
        .map(|(a, b)| a + b)
        .collect();
    let mut entries = Vec::with_capacity(r - 1);
    for j in (1..=r).filter(|&j| j != omitted) {
        let sign = sign_of(j);
        let b = match sign {
            RaySign::Plus => -v[j - 1].clone(),
            RaySign::Minus => v[j - 1].clone(),
        };
        if !b.is_zero() {
            let u = rays.generator(RayId::new(j, sign));
            for (slot, coord) in v.iter_mut().zip(u) {
                *slot += &b * coord;
            }
        }
        entries.push(WallEntry { index: j, sign, b });
    }
    assert!(
        v.iter().all(Zero::is_zero),
        "wall relation residual did not vanish (omitted {omitted})"
    );
    Wall { omitted, entries }
}

/// Enumerates every wall of the fan: `r * 2^(r-1)` of them, in
/// (omitted stage, binary sign pattern) order with `+` preceding `-`.
///
/// # Errors
///
/// [`Error::OracleCap`] when `r > cap`, since the count is exponential.
pub fn enumerate_walls(m: &BottMatrix, cap: usize) -> Result<Vec<Wall>> {
    let r = m.r();
    if r > cap {
        return Err(Error::OracleCap { r, cap });
    }
    let rays = build_rays(m);
    let stage_count = 1usize << (r - 1);
    let mut walls = Vec::with_capacity(r * stage_count);
    for omitted in 1..=r {
        // Stage j != omitted corresponds to bit `position(j)` of the mask,
        // counted in ascending stage order.
        let position = |j: usize| if j < omitted { j - 1 } else { j - 2 };
        for mask in 0..stage_count {
            let wall = solve_wall(&rays, omitted, |j| {
                if mask >> position(j) & 1 == 0 {
                    RaySign::Plus
                } else {
                    RaySign::Minus
                }
            });
            walls.push(wall);
        }
    }
    Ok(walls)
}

/// Numerical class of a curve, recorded as its intersection numbers with
/// the plus divisors: `ints[i - 1] = D(i+) . C`.
///
/// These coordinates identify the class because the plus divisors form a
/// basis of the divisor class group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveClass {
    ints: Vec<BigInt>,
}

impl CurveClass {
    pub fn new(ints: Vec<BigInt>) -> Self {
        Self { ints }
    }

    pub fn r(&self) -> usize {
        self.ints.len()
    }

    /// Intersection number with the plus divisor of stage `j` (1-based).
    pub fn get(&self, j: usize) -> &BigInt {
        &self.ints[j - 1]
    }

    pub fn ints(&self) -> &[BigInt] {
        &self.ints
    }

    pub fn is_zero(&self) -> bool {
        self.ints.iter().all(Zero::is_zero)
    }

    /// The primitive class on the same ray: coordinates divided by their
    /// content (gcd). The zero class is returned unchanged.
    pub fn primitive(&self) -> CurveClass {
        let content = self
            .ints
            .iter()
            .fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if content.is_zero() || content.is_one() {
            return self.clone();
        }
        CurveClass::new(self.ints.iter().map(|x| x / &content).collect())
    }

    /// Intersection number with a plus-basis divisor: the plain dot product
    /// of the coefficient vectors.
    ///
    /// # Panics
    ///
    /// Panics on a height mismatch (a bug, not an input condition).
    pub fn pair(&self, d: &PlusDivisor) -> BigRational {
        assert_eq!(self.r(), d.r(), "height mismatch");
        self.ints
            .iter()
            .zip(d.coeffs())
            .map(|(n, g)| g * BigRational::from(n.clone()))
            .sum()
    }

    /// Coordinates of this class in a unitriangular basis: `basis[k]` must
    /// have coordinate `k` equal to 1 and all earlier coordinates 0 (the
    /// shape of the primitive-relation classes). Forward substitution then
    /// produces the unique integer expansion.
    ///
    /// # Panics
    ///
    /// Panics if the basis does not have the unitriangular shape; the
    /// callers construct it from the tower's relations, so a malformed
    /// basis is a bug.
    pub fn coordinates_in_unitriangular_basis(&self, basis: &[CurveClass]) -> Vec<BigInt> {
        let r = self.r();
        assert_eq!(basis.len(), r, "need one basis class per stage");
        for (k, class) in basis.iter().enumerate() {
            assert!(
                class.ints[k].is_one() && class.ints[..k].iter().all(Zero::is_zero),
                "basis class {} is not unitriangular",
                k + 1
            );
        }
        let mut residual = self.ints.clone();
        let mut coords = Vec::with_capacity(r);
        for k in 0..r {
            let c = residual[k].clone();
            if !c.is_zero() {
                for (slot, b) in residual.iter_mut().zip(&basis[k].ints) {
                    *slot -= &c * b;
                }
            }
            coords.push(c);
        }
        debug_assert!(residual.iter().all(Zero::is_zero));
        coords
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ints.iter().map(BigInt::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Everything the brute-force oracle reports about a divisor on a tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Number of walls enumerated (`r * 2^(r-1)`).
    pub wall_count: usize,
    /// Deduplicated primitive classes of all wall curves, sorted. These
    /// generate the Mori cone.
    pub mori_generators: Vec<CurveClass>,
    /// Whether the divisor meets every wall curve nonnegatively.
    pub is_nef: bool,
    /// Whether the divisor meets every wall curve strictly positively.
    pub is_ample: bool,
}

/// Runs the brute-force oracle: enumerate all walls, intersect each wall
/// curve with `d`, and collect the primitive wall classes.
///
/// This is the ground truth the closed-form computations are checked
/// against. It needs nothing but the fan itself.
///
/// # Errors
///
/// [`Error::OracleCap`] when `m` is taller than `cap`.
pub fn oracle_report(m: &BottMatrix, d: &Divisor, cap: usize) -> Result<OracleReport> {
    let walls = enumerate_walls(m, cap)?;
    let mut classes = BTreeSet::new();
    let mut is_nef = true;
    let mut is_ample = true;
    for wall in &walls {
        let degree = wall.pair_divisor(d);
        if degree.is_negative() {
            is_nef = false;
        }
        if !degree.is_positive() {
            is_ample = false;
        }
        classes.insert(wall.curve_class().primitive());
    }
    Ok(OracleReport {
        wall_count: walls.len(),
        mori_generators: classes.into_iter().collect(),
        is_nef,
        is_ample,
    })
}
