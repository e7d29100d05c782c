//! Shared fixtures for the criterion benchmarks.
//!
//! Deterministic matrix builders only — the benchmarks themselves live in
//! `benches/bottkit.rs`.

use num::BigInt;
use std::collections::BTreeMap;

use bottkit_core::BottMatrix;

/// The seven-stage worked example with its mix of signs and magnitudes.
pub fn m7() -> BottMatrix {
    BottMatrix::from_rows_i64(&[
        &[-1, -1, -1, 2, -1, 2],
        &[0, 2, -1, 2, -1],
        &[0, -1, 0, -1],
        &[-1, 2, -1],
        &[-1, 2],
        &[-1],
    ])
    .expect("fixture is a valid matrix")
}

/// A deterministic height-`r` tower with entries cycling through
/// `-2, 1, 0, 2, -1`, dense enough to exercise multi-level reductions.
pub fn dense_tower(r: usize) -> BottMatrix {
    let cycle = [-2i64, 1, 0, 2, -1];
    let mut entries = BTreeMap::new();
    let mut slot = 0usize;
    for i in 1..r {
        for j in (i + 1)..=r {
            entries.insert((i, j), BigInt::from(cycle[slot % cycle.len()]));
            slot += 1;
        }
    }
    BottMatrix::new(r, entries).expect("entries lie in the triangle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use bottkit_core::{all_relations, enumerate_walls};

    #[test]
    fn fixtures_are_well_formed() {
        assert_eq!(m7().r(), 7);
        let tower = dense_tower(10);
        assert_eq!(tower.r(), 10);
        assert_eq!(all_relations(&tower).len(), 10);
        let walls = enumerate_walls(&tower, 16).expect("within cap");
        assert_eq!(walls.len(), 10 * (1 << 9));
    }
}
