//! Exhaustive classification sweeps.
//!
//! A census enumerates every strictly-upper-triangular integer matrix of
//! height `r` with entries in `[lo, hi]`, classifies each tower, and counts
//! the Fano / weak-Fano-only / neither buckets. The classifier itself
//! cross-checks the structural conditions against the degree sums on every
//! row, so a census doubles as a large equivalence test between the two
//! routes; `--oracle` additionally replays every matrix through the
//! brute-force wall oracle.
//!
//! Parallelism contract: the index space `[0, total)` is split into
//! disjoint contiguous slices, one scoped worker per slice. Workers share
//! nothing mutable — each owns its slice, builds its matrices from raw
//! indices, and returns its tallies and samples by value; the parent merges
//! the results in slice order. Output is therefore identical for every
//! `--jobs` value.

use num::BigInt;

use bottkit_core::{
    classify_fano_with, oracle_report, relation_degrees_with, all_relations, BottMatrix, Divisor,
};

use crate::oracle_check::compare_oracle;
use crate::CliError;

/// How many example matrices each bucket keeps, in sweep order.
pub const SAMPLES_PER_BUCKET: usize = 3;

/// Parameters of a sweep, fully resolved (no optional fields).
#[derive(Debug, Clone)]
pub struct CensusSpec {
    pub r: usize,
    pub lo: i64,
    pub hi: i64,
    pub jobs: usize,
    pub budget: u64,
    pub oracle: bool,
    pub oracle_cap: usize,
}

/// Merged result of a sweep. `samples` holds the first few matrices of
/// each bucket in sweep order: Fano, weak-Fano-not-Fano, neither.
#[derive(Debug, Clone)]
pub struct CensusOutcome {
    pub total: u64,
    pub fano: u64,
    pub weak_not_fano: u64,
    pub neither: u64,
    pub oracle_checked: u64,
    pub samples: [Vec<BottMatrix>; 3],
}

/// One worker's tallies, merged in slice order by the parent.
#[derive(Debug, Default)]
struct SliceOutcome {
    fano: u64,
    weak_not_fano: u64,
    neither: u64,
    oracle_checked: u64,
    samples: [Vec<BottMatrix>; 3],
}

/// Number of entries above the diagonal.
fn cell_count(r: usize) -> usize {
    r * (r - 1) / 2
}

/// Decodes a sweep index into a matrix. Index `n` is read as a mixed-radix
/// numeral with the row-major cell `(1,2), (1,3), ..., (r-1,r)` as the most
/// significant digit, so the sweep is lexicographic in the row-major entry
/// vector with each digit running `lo..=hi` (`base = hi - lo + 1`).
pub fn matrix_at(r: usize, lo: i64, base: u64, mut n: u64) -> BottMatrix {
    let cells = cell_count(r);
    let mut digits = vec![0i64; cells];
    for slot in (0..cells).rev() {
        digits[slot] = lo + (n % base) as i64;
        n /= base;
    }
    let mut entries = std::collections::BTreeMap::new();
    let mut slot = 0;
    for i in 1..r {
        for j in (i + 1)..=r {
            entries.insert((i, j), BigInt::from(digits[slot]));
            slot += 1;
        }
    }
    BottMatrix::new(r, entries).expect("in-triangle entries by construction")
}

/// Classifies the towers of one index slice.
fn sweep_slice(spec: &CensusSpec, base: u64, start: u64, end: u64) -> Result<SliceOutcome, CliError> {
    let mut outcome = SliceOutcome::default();
    let anticanonical = Divisor::anticanonical(spec.r);
    for n in start..end {
        let m = matrix_at(spec.r, spec.lo, base, n);
        let relations = all_relations(&m);
        let fano = classify_fano_with(&m, &relations).map_err(CliError::Core)?;
        let bucket = if fano.is_fano {
            0
        } else if fano.is_weak_fano {
            1
        } else {
            2
        };
        if spec.oracle {
            let certificate = relation_degrees_with(&relations, &anticanonical);
            let oracle =
                oracle_report(&m, &anticanonical, spec.oracle_cap).map_err(CliError::Core)?;
            let comparison = compare_oracle(&relations, &certificate, &oracle);
            if !comparison.all_match() {
                return Err(CliError::OracleMismatch(format!(
                    "census matrix index {n}: {}",
                    comparison.describe_failures()
                )));
            }
            outcome.oracle_checked += 1;
        }
        if outcome.samples[bucket].len() < SAMPLES_PER_BUCKET {
            outcome.samples[bucket].push(m);
        }
        match bucket {
            0 => outcome.fano += 1,
            1 => outcome.weak_not_fano += 1,
            _ => outcome.neither += 1,
        }
    }
    Ok(outcome)
}

/// Runs a full sweep, splitting the index space across `spec.jobs` scoped
/// threads.
///
/// # Errors
///
/// Fails if `lo > hi`, if the sweep size exceeds `spec.budget`, if the
/// oracle cap is exceeded under `--oracle`, on any oracle mismatch, or on
/// an internal route disagreement inside the classifier.
pub fn run_census(spec: &CensusSpec) -> Result<CensusOutcome, CliError> {
    if spec.r == 0 {
        return Err(CliError::Usage("census requires r >= 1".to_string()));
    }
    if spec.lo > spec.hi {
        return Err(CliError::Usage(format!(
            "census bounds are empty: lo = {} exceeds hi = {}",
            spec.lo, spec.hi
        )));
    }
    let base = (spec.hi - spec.lo + 1) as u64;
    let cells = cell_count(spec.r) as u32;
    let total = match base.checked_pow(cells) {
        Some(total) if total <= spec.budget => total,
        _ => {
            return Err(CliError::Budget {
                r: spec.r,
                lo: spec.lo,
                hi: spec.hi,
                budget: spec.budget,
            })
        }
    };

    let jobs = spec.jobs.clamp(1, total.max(1) as usize);
    let mut slices = Vec::with_capacity(jobs);
    let chunk = total / jobs as u64;
    let remainder = total % jobs as u64;
    let mut start = 0u64;
    for worker in 0..jobs as u64 {
        let len = chunk + u64::from(worker < remainder);
        slices.push((start, start + len));
        start += len;
    }

    let results: Vec<Result<SliceOutcome, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = slices
            .iter()
            .map(|&(start, end)| scope.spawn(move || sweep_slice(spec, base, start, end)))
            .collect();
        handles
            .into_iter()
            .map(|handle| {
                handle
                    .join()
                    .unwrap_or_else(|_| Err(CliError::Internal("census worker panicked".into())))
            })
            .collect()
    });

    let mut merged = CensusOutcome {
        total,
        fano: 0,
        weak_not_fano: 0,
        neither: 0,
        oracle_checked: 0,
        samples: [Vec::new(), Vec::new(), Vec::new()],
    };
    for result in results {
        let slice = result?;
        merged.fano += slice.fano;
        merged.weak_not_fano += slice.weak_not_fano;
        merged.neither += slice.neither;
        merged.oracle_checked += slice.oracle_checked;
        for (bucket, samples) in slice.samples.into_iter().enumerate() {
            for m in samples {
                if merged.samples[bucket].len() < SAMPLES_PER_BUCKET {
                    merged.samples[bucket].push(m);
                }
            }
        }
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(r: usize, lo: i64, hi: i64, jobs: usize) -> CensusSpec {
        CensusSpec {
            r,
            lo,
            hi,
            jobs,
            budget: 1_000_000,
            oracle: false,
            oracle_cap: bottkit_core::DEFAULT_ORACLE_CAP,
        }
    }

    #[test]
    fn matrix_decoding_is_lexicographic() {
        // r = 3, entries in [-1, 1]: index 0 is the all-lo matrix, the last
        // index is the all-hi matrix, and the least significant digit is
        // the bottom-right cell.
        let first = matrix_at(3, -1, 3, 0);
        assert_eq!(first.to_text(), "3\n-1 -1\n-1\n");
        let second = matrix_at(3, -1, 3, 1);
        assert_eq!(second.to_text(), "3\n-1 -1\n0\n");
        let last = matrix_at(3, -1, 3, 26);
        assert_eq!(last.to_text(), "3\n1 1\n1\n");
    }

    #[test]
    fn surface_census_matches_the_known_table() {
        let outcome = run_census(&spec(2, -3, 3, 1)).expect("small sweep");
        assert_eq!(outcome.total, 7);
        assert_eq!(outcome.fano, 3);
        assert_eq!(outcome.weak_not_fano, 2);
        assert_eq!(outcome.neither, 2);
    }

    #[test]
    fn worker_count_does_not_change_the_outcome() {
        let single = run_census(&spec(3, -2, 2, 1)).expect("small sweep");
        let several = run_census(&spec(3, -2, 2, 4)).expect("small sweep");
        assert_eq!(single.total, several.total);
        assert_eq!(single.fano, several.fano);
        assert_eq!(single.weak_not_fano, several.weak_not_fano);
        assert_eq!(single.neither, several.neither);
        assert_eq!(single.samples, several.samples);
    }

    #[test]
    fn point_census_has_one_fano_entry() {
        let outcome = run_census(&spec(1, -2, 2, 1)).expect("trivial sweep");
        assert_eq!(outcome.total, 1);
        assert_eq!(outcome.fano, 1);
        assert_eq!(outcome.samples[0].len(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let mut tight = spec(4, -2, 2, 1);
        tight.budget = 100;
        let error = run_census(&tight).expect_err("5^6 exceeds 100");
        assert!(matches!(error, CliError::Budget { .. }));
    }

    #[test]
    fn oracle_mode_confirms_small_sweeps() {
        let mut with_oracle = spec(2, -3, 3, 1);
        with_oracle.oracle = true;
        let outcome = run_census(&with_oracle).expect("oracle agrees");
        assert_eq!(outcome.oracle_checked, 7);
    }
}
