//! Acceptance gate.
//!
//! Nine criteria, one test each, every one printing a single
//! `criterion N: PASS — ...` line on success (run with `--nocapture` to see
//! them) and failing with a `criterion N: FAIL` assertion otherwise.
//! Everything numeric is exact — the only tolerances here are the pinned
//! wall-clock budgets on the three larger sweeps.

use std::time::{Duration, Instant};

use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bottkit_cli::census::{matrix_at, run_census, CensusSpec, SAMPLES_PER_BUCKET};
use bottkit_cli::oracle_check::compare_oracle;
use bottkit_core::{
    all_relations, log_fano_certificate_with, nef_generators, nef_generators_with, oracle_report,
    ray_types_with, relation_degrees_with, relation_wall, BottMatrix, Divisor, PlusDivisor, RayId,
    RaySign, RayType, DEFAULT_ORACLE_CAP,
};

/// The seven-stage worked example used as the golden fixture.
fn m7() -> BottMatrix {
    BottMatrix::from_rows_i64(&[
        &[-1, -1, -1, 2, -1, 2],
        &[0, 2, -1, 2, -1],
        &[0, -1, 0, -1],
        &[-1, 2, -1],
        &[-1, 2],
        &[-1],
    ])
    .expect("golden fixture is a valid matrix")
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Uniform random tower: height in `1..=max_r`, entries in `[-bound, bound]`.
fn random_matrix(rng: &mut ChaCha8Rng, max_r: usize, bound: i64) -> BottMatrix {
    let r = rng.random_range(1..=max_r);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for i in 1..r {
        rows.push(
            (0..r - i)
                .map(|_| rng.random_range(-bound..=bound))
                .collect(),
        );
    }
    let borrowed: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    BottMatrix::from_rows_i64(&borrowed).expect("random entries are in the triangle")
}

/// Every height-3 tower with entries in `[-2, 2]`, in sweep order.
fn exhaustive_r3() -> Vec<BottMatrix> {
    (0..125).map(|n| matrix_at(3, -2, 5, n)).collect()
}

/// The deterministic 200-matrix random pool shared by criteria 5 and 9.
fn random_pool() -> Vec<BottMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb077);
    (0..200).map(|_| random_matrix(&mut rng, 7, 3)).collect()
}

#[test]
fn criterion_1_golden_relations_pivots_and_wall() {
    let start = Instant::now();
    let m = m7();
    let relations = all_relations(&m);
    let rendered: Vec<String> = relations.iter().map(|p| p.to_string()).collect();
    let expected = [
        "e_1^+ + e_1^- = e_2^+ + e_3^+ + e_4^+ + 2 e_5^- + e_6^- + e_7^+",
        "e_2^+ + e_2^- = 2 e_4^- + e_5^- + e_6^+ + e_7^+",
        "e_3^+ + e_3^- = e_5^+ + e_7^+",
        "e_4^+ + e_4^- = e_5^+ + 2 e_6^- + e_7^-",
        "e_5^+ + e_5^- = e_6^+ + 2 e_7^-",
        "e_6^+ + e_6^- = e_7^+",
        "e_7^+ + e_7^- = 0",
    ];
    assert_eq!(
        rendered, expected,
        "criterion 1: FAIL — primitive relations differ from the worked list"
    );
    assert_eq!(
        relations[0].pivot_set(),
        &[1, 5, 6],
        "criterion 1: FAIL — pivot set of stage 1"
    );

    let wall = relation_wall(&m, 1).expect("wall of the first relation");
    let wall_rays: Vec<String> = wall.ray_ids().map(|ray| ray.to_string()).collect();
    assert_eq!(
        wall_rays,
        ["2+", "3+", "4+", "5-", "6-", "7+"],
        "criterion 1: FAIL — wall rays"
    );
    use RaySign::{Minus, Plus};
    let expected_flanks = [
        vec![Plus, Plus, Plus, Plus, Minus, Minus, Plus],
        vec![Minus, Plus, Plus, Plus, Minus, Minus, Plus],
    ];
    assert_eq!(
        wall.flanking_signs(),
        expected_flanks,
        "criterion 1: FAIL — flanking cones"
    );

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(1),
        "criterion 1: FAIL — took {elapsed:?}, budget 1 s"
    );
    println!(
        "criterion 1: PASS — seven relations, pivots {{1, 5, 6}}, and both flanking cones exact in {elapsed:?}"
    );
}

#[test]
fn criterion_2_golden_nef_generators() {
    let m = m7();
    let gens = nef_generators(&m);
    let unit = |m_stage: usize| PlusDivisor::unit(7, m_stage);

    let mut d5 = gens[2].clone();
    d5.add_scaled(&gens[3], &BigRational::one());
    d5.add_scaled(&unit(5), &BigRational::one());
    assert_eq!(gens[4], d5, "criterion 2: FAIL — D_5 != D_3 + D_4 + D(5+)");

    let mut d6 = gens[1].clone();
    d6.add_scaled(&gens[4], &BigRational::one());
    d6.add_scaled(&unit(6), &BigRational::one());
    assert_eq!(gens[5], d6, "criterion 2: FAIL — D_6 != D_2 + D_5 + D(6+)");

    let mut d7 = gens[0].clone();
    d7.add_scaled(&gens[1], &BigRational::one());
    d7.add_scaled(&gens[2], &BigRational::one());
    d7.add_scaled(&gens[5], &BigRational::one());
    d7.add_scaled(&unit(7), &BigRational::one());
    assert_eq!(
        gens[6], d7,
        "criterion 2: FAIL — D_7 != D_1 + D_2 + D_3 + D_6 + D(7+)"
    );

    println!("criterion 2: PASS — D_5, D_6, D_7 recurrences hold exactly in the plus basis");
}

#[test]
fn criterion_3_hirzebruch_nef_cone_and_ample_box() {
    let m = BottMatrix::from_rows_i64(&[&[-1]]).expect("valid surface");
    let gens = nef_generators(&m);
    let expected = [
        PlusDivisor::new(vec![rational(1), rational(0)]),
        PlusDivisor::new(vec![rational(1), rational(1)]),
    ];
    assert_eq!(
        gens, expected,
        "criterion 3: FAIL — nef generators are not {{D(1+), D(1+)+D(2+)}}"
    );

    let relations = all_relations(&m);
    let mut checked = 0;
    for a in -3..=3i64 {
        for b in -3..=3i64 {
            let d = Divisor::from_entries(
                2,
                [
                    (RayId::plus(1), rational(a)),
                    (RayId::minus(2), rational(b)),
                ],
            )
            .expect("rays exist");
            let certificate = relation_degrees_with(&relations, &d);
            let expected_ample = a > 0 && b > 0;
            assert_eq!(
                certificate.is_ample, expected_ample,
                "criterion 3: FAIL — fast path amplitude of a={a}, b={b}"
            );
            let oracle = oracle_report(&m, &d, DEFAULT_ORACLE_CAP).expect("height 2");
            assert_eq!(
                oracle.is_ample, expected_ample,
                "criterion 3: FAIL — oracle amplitude of a={a}, b={b}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 49, "criterion 3: FAIL — case count");
    println!(
        "criterion 3: PASS — nef generators exact; aD(1+)+bD(2-) ample iff a>0 and b>0 on all 49 cases, oracle-confirmed"
    );
}

#[test]
fn criterion_4_dual_basis_identity_in_bulk() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    for _ in 0..1_000 {
        let m = random_matrix(&mut rng, 8, 5);
        let relations = all_relations(&m);
        let gens = nef_generators_with(&relations);
        for (m_index, generator) in gens.iter().enumerate() {
            let degrees = relation_degrees_with(&relations, &generator.embed()).degrees;
            for (i_index, degree) in degrees.iter().enumerate() {
                let expected = if m_index == i_index {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                assert_eq!(
                    *degree, expected,
                    "criterion 4: FAIL — D_{} . r(P_{}) on {m}",
                    m_index + 1,
                    i_index + 1
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "criterion 4: FAIL — took {elapsed:?}, budget 30 s"
    );
    println!(
        "criterion 4: PASS — (D_m . r(P_i)) is the identity on 1000 random towers (r <= 8, entries in [-5, 5]) in {elapsed:?}"
    );
}

#[test]
fn criterion_5_oracle_equivalence() {
    let mut corpus = exhaustive_r3();
    assert_eq!(corpus.len(), 125, "criterion 5: FAIL — exhaustive set size");
    corpus.extend(random_pool());

    let mut mismatches = 0;
    for m in &corpus {
        let relations = all_relations(m);
        let anticanonical = Divisor::anticanonical(m.r());
        let certificate = relation_degrees_with(&relations, &anticanonical);
        let oracle =
            oracle_report(m, &anticanonical, DEFAULT_ORACLE_CAP).expect("heights within cap");
        let comparison = compare_oracle(&relations, &certificate, &oracle);
        if !comparison.all_match() {
            mismatches += 1;
            eprintln!(
                "criterion 5: mismatch on {m}: {}",
                comparison.describe_failures()
            );
        }
    }
    assert_eq!(
        mismatches, 0,
        "criterion 5: FAIL — {mismatches} of {} towers disagree with the oracle",
        corpus.len()
    );
    println!(
        "criterion 5: PASS — nef/ample verdicts, Mori generator sets, and wall-class expansions match the oracle on all {} towers",
        corpus.len()
    );
}

#[test]
fn criterion_6_exhaustive_r4_classification() {
    let start = Instant::now();
    let spec = CensusSpec {
        r: 4,
        lo: -2,
        hi: 2,
        jobs: std::thread::available_parallelism().map_or(1, std::num::NonZeroUsize::get),
        budget: 1_000_000,
        oracle: false,
        oracle_cap: DEFAULT_ORACLE_CAP,
    };
    // classify_fano cross-checks the structural conditions against the
    // degree sums on every row and errors on any disagreement, so a clean
    // sweep is itself the zero-mismatch claim.
    let outcome = run_census(&spec).expect("criterion 6: FAIL — a route disagreement surfaced");
    assert_eq!(outcome.total, 15_625, "criterion 6: FAIL — sweep size");
    assert_eq!(
        outcome.fano + outcome.weak_not_fano + outcome.neither,
        15_625,
        "criterion 6: FAIL — buckets do not partition the sweep"
    );

    // Oracle spot-check on a deterministic 1% sample of the same sweep.
    let mut sampled = 0;
    for n in (0..15_625u64).step_by(100) {
        let m = matrix_at(4, -2, 5, n);
        let relations = all_relations(&m);
        let anticanonical = Divisor::anticanonical(4);
        let certificate = relation_degrees_with(&relations, &anticanonical);
        let oracle = oracle_report(&m, &anticanonical, DEFAULT_ORACLE_CAP).expect("height 4");
        let comparison = compare_oracle(&relations, &certificate, &oracle);
        assert!(
            comparison.all_match(),
            "criterion 6: FAIL — oracle sample disagrees on {m}: {}",
            comparison.describe_failures()
        );
        sampled += 1;
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "criterion 6: FAIL — took {elapsed:?}, budget 60 s"
    );
    println!(
        "criterion 6: PASS — structural and degree routes agree on all 15625 towers ({} Fano / {} weak-only / {} neither), {sampled}-matrix oracle sample clean, in {elapsed:?}",
        outcome.fano, outcome.weak_not_fano, outcome.neither
    );
}

#[test]
fn criterion_7_census_spot_values() {
    let spec = CensusSpec {
        r: 2,
        lo: -3,
        hi: 3,
        jobs: 1,
        budget: 1_000_000,
        oracle: true,
        oracle_cap: DEFAULT_ORACLE_CAP,
    };
    let outcome = run_census(&spec).expect("surface sweep with oracle");
    assert_eq!(outcome.total, 7, "criterion 7: FAIL — sweep size");
    assert_eq!(outcome.fano, 3, "criterion 7: FAIL — Fano count");
    assert_eq!(
        outcome.fano + outcome.weak_not_fano,
        5,
        "criterion 7: FAIL — weak Fano count"
    );
    assert_eq!(
        outcome.oracle_checked, 7,
        "criterion 7: FAIL — oracle confirmation count"
    );
    // The buckets are exactly the twist ranges: |twist| <= 1 Fano,
    // |twist| = 2 weak only, |twist| = 3 neither.
    let twists = |bucket: &[BottMatrix]| -> Vec<BigInt> {
        bucket.iter().map(|m| m.beta(1, 2).clone()).collect()
    };
    assert_eq!(
        twists(&outcome.samples[0]),
        [BigInt::from(-1), BigInt::from(0), BigInt::from(1)],
        "criterion 7: FAIL — Fano bucket members"
    );
    assert_eq!(
        twists(&outcome.samples[1]),
        [BigInt::from(-2), BigInt::from(2)],
        "criterion 7: FAIL — weak-only bucket members"
    );
    assert_eq!(SAMPLES_PER_BUCKET, 3, "samples cover every bucket at r = 2");
    println!(
        "criterion 7: PASS — r=2 census over [-3, 3]: Fano 3, weak Fano 5, all 7 oracle-confirmed"
    );
}

#[test]
fn criterion_8_log_fano_surface() {
    let m = BottMatrix::from_rows_i64(&[&[-3]]).expect("valid surface");
    let relations = all_relations(&m);

    let boundary = Divisor::from_entries(2, [(RayId::plus(2), BigRational::new(1.into(), 2.into()))])
        .expect("ray exists");
    let report = log_fano_certificate_with(&relations, &boundary);
    let expected_k = [
        BigRational::new((-1).into(), 2.into()),
        BigRational::new((-3).into(), 2.into()),
    ];
    assert_eq!(
        report.k, expected_k,
        "criterion 8: FAIL — k-vector of the half boundary"
    );
    assert!(
        report.is_log_fano,
        "criterion 8: FAIL — (X, D) should be log Fano"
    );

    // -(K + D) has coefficient 1 - a_rho on every ray; its amplitude is the
    // same claim as every k_i < 0, checked here through the wall oracle.
    let complement = Divisor::from_fn(2, |ray| BigRational::one() - boundary.coeff(ray));
    let oracle = oracle_report(&m, &complement, DEFAULT_ORACLE_CAP).expect("height 2");
    assert!(
        oracle.is_ample,
        "criterion 8: FAIL — oracle denies ampleness of -(K + D)"
    );
    let fast = relation_degrees_with(&relations, &complement);
    assert!(
        fast.is_ample && fast.is_nef,
        "criterion 8: FAIL — fast path denies ampleness of -(K + D)"
    );

    let empty = log_fano_certificate_with(&relations, &Divisor::zero(2));
    assert_eq!(
        empty.k,
        [rational(1), rational(-2)],
        "criterion 8: FAIL — k-vector of the empty boundary"
    );
    assert!(
        !empty.is_log_fano,
        "criterion 8: FAIL — the bare surface must not be log Fano (k_1 = 1)"
    );

    println!(
        "criterion 8: PASS — k = (-1/2, -3/2) log Fano with -(K+D) oracle-ample; empty boundary rejected with k_1 = 1"
    );
}

#[test]
fn criterion_9_ray_typing_routes_agree() {
    let mut corpus = vec![
        m7(),
        BottMatrix::from_rows_i64(&[&[-1]]).expect("valid"),
        BottMatrix::from_rows_i64(&[&[-2]]).expect("valid"),
        BottMatrix::from_rows_i64(&[&[-3]]).expect("valid"),
        BottMatrix::from_rows_i64(&[&[0, 0, 0, 0], &[0, 0, 0], &[0, 0], &[0]]).expect("valid"),
    ];
    corpus.extend(exhaustive_r3());
    corpus.extend(random_pool());
    corpus.extend((0..15_625u64).map(|n| matrix_at(4, -2, 5, n)));

    let two = BigInt::from(2);
    let mut typed = 0;
    for m in &corpus {
        let relations = all_relations(m);
        // The shape criterion and the sign test are compared inside
        // ray_types_with, which errors on any disagreement.
        let types = ray_types_with(&relations)
            .expect("criterion 9: FAIL — shape criterion disagrees with the sign test");
        for (relation, ray_type) in relations.iter().zip(&types) {
            // Independent restatement of the sign test: the anticanonical
            // degree is 2 - s_i.
            let expected = match relation.degree_sum().cmp(&two) {
                std::cmp::Ordering::Less => RayType::KNegative,
                std::cmp::Ordering::Equal => RayType::KTrivial,
                std::cmp::Ordering::Greater => RayType::KPositive,
            };
            assert_eq!(
                *ray_type, expected,
                "criterion 9: FAIL — stage {} of {m}",
                relation.i
            );
            typed += 1;
        }
    }
    assert_eq!(
        corpus.len(),
        5 + 125 + 200 + 15_625,
        "criterion 9: FAIL — corpus size"
    );
    println!(
        "criterion 9: PASS — shape criterion equals the sign test on {typed} rays across {} towers",
        corpus.len()
    );
}
