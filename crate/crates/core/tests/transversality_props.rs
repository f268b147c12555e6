mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solenoid_dim::linalg::smallest_singular_value;
use solenoid_dim::manifold::graph_rho_derivative;
use solenoid_dim::presets;
use solenoid_dim::transversality::{margin_at, overlap_scan, ScanOptions, Verdict};
use solenoid_dim::Word;

fn distinct_branch_words(rng: &mut ChaCha8Rng, alphabet: u32, len: usize) -> (Word, Word) {
    let a: Vec<u32> = (0..len).map(|_| rng.random_range(0..alphabet)).collect();
    let mut b: Vec<u32> = (0..len).map(|_| rng.random_range(0..alphabet)).collect();
    b[len - 1] = (a[len - 1] + rng.random_range(1..alphabet)) % alphabet;
    (Word::new(a), Word::new(b))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(200) })]

    #[test]
    fn margin_is_symmetric(seed in any::<u64>(), x0 in 0.0f64..1.0, x1 in 0.0f64..1.0, len in 1usize..8) {
        let spec = presets::planar_mixing(0.05, 0.3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = distinct_branch_words(&mut rng, 4, len);
        prop_assert_eq!(margin_at(&spec, &[x0, x1], &a, &b).unwrap(), margin_at(&spec, &[x0, x1], &b, &a).unwrap());
    }
}

#[test]
fn margin_moves_no_more_than_the_derivative_difference() {
    // |m(A) - m(B)| <= |A - B| applied to A, B = derivative differences at x, x'
    let spec = presets::planar_mixing(0.05, 0.3);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut measured: f64 = 0.0;
    for _ in 0..300 {
        let (a, b) = distinct_branch_words(&mut rng, 4, 6);
        let x = common::random_point(&mut rng, 2);
        let dx = [rng.random_range(-1e-3..1e-3), rng.random_range(-1e-3..1e-3)];
        let x2 = [x[0] + dx[0], x[1] + dx[1]];
        let diff = |p: &[f64]| &graph_rho_derivative(&spec, p, &a).unwrap() - &graph_rho_derivative(&spec, p, &b).unwrap();
        let (m1, m2) = (
            smallest_singular_value(&diff(&x)).unwrap(),
            smallest_singular_value(&diff(&x2)).unwrap(),
        );
        assert_eq!(m1, margin_at(&spec, &x, &a, &b).unwrap().1);
        let change = (&diff(&x) - &diff(&x2)).operator_norm();
        assert!((m1 - m2).abs() <= change + 1e-14);
        measured = measured.max((m1 - m2).abs() / dx[0].hypot(dx[1]));
    }
    assert!(measured.is_finite() && measured > 0.0);
}

#[test]
fn refining_the_grid_never_raises_the_minimum() {
    let spec = presets::planar_mixing(0.05, 0.3);
    let scan = |cells| {
        overlap_scan(
            &spec,
            &ScanOptions {
                depth: 3,
                delta1: Some(1e-2),
                grid_cells: cells,
                ..ScanOptions::default()
            },
        )
        .unwrap()
    };
    let coarse = scan(8);
    let fine = scan(16);
    assert!(fine.candidates.len() >= coarse.candidates.len());
    assert!(fine.min_margin.unwrap() <= coarse.min_margin.unwrap());
}

#[test]
fn graph_attractor_is_always_degenerate() {
    let spec = presets::graph_attractor(0.2, 0.3);
    for depth in 1..=8 {
        let report = overlap_scan(
            &spec,
            &ScanOptions {
                depth,
                grid_cells: 16,
                ..ScanOptions::default()
            },
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::DegenerateMargin, "depth {depth}");
        assert_eq!(report.far_pairs, 0);
    }
}

#[test]
fn planar_mixing_margins_are_positive() {
    let spec = presets::planar_mixing(0.05, 0.3);
    let report = overlap_scan(
        &spec,
        &ScanOptions {
            depth: 3,
            grid_cells: 16,
            ..ScanOptions::default()
        },
    )
    .unwrap();
    assert_eq!(report.verdict, Verdict::TransversalMarginPositive);
    assert!(report.c1_estimate.unwrap() > 0.0);
    for c in &report.candidates {
        assert!(c.gap <= report.delta1);
    }
}

#[test]
fn tiny_threshold_finds_nothing() {
    let spec = presets::planar_mixing(0.05, 0.3);
    let report = overlap_scan(
        &spec,
        &ScanOptions {
            depth: 2,
            delta1: Some(1e-14),
            grid_cells: 3,
            ..ScanOptions::default()
        },
    )
    .unwrap();
    assert_eq!(report.verdict, Verdict::NoOverlapsFound);
    assert_eq!(report.c1_estimate, None);
}

#[test]
fn flat_translation_pairs_coincide() {
    let spec = presets::linear(&[2, 2], 0.2, 2);
    let report = overlap_scan(
        &spec,
        &ScanOptions {
            depth: 2,
            grid_cells: 4,
            ..ScanOptions::default()
        },
    )
    .unwrap();
    assert_eq!(report.verdict, Verdict::DegenerateMargin);
    assert!(report.candidates.iter().all(|c| c.gap == 0.0 && c.margin == 0.0));
}
