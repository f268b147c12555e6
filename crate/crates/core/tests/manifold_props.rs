mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solenoid_dim::manifold::{
    attractor_cloud, component_lipschitz_bound, graph_rho_derivative, graph_value, slice_cloud, truncation_bound,
};
use solenoid_dim::symbolic::DEFAULT_WORD_BUDGET;
use solenoid_dim::{presets, Point, Word};

#[test]
fn pushforward_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let spec = common::random_spec(&mut rng);
        let len = rng.random_range(2..10);
        let w = common::random_word(&mut rng, &spec, len);
        let x = common::random_point(&mut rng, spec.l());
        // one-step preimage along the last (shallowest) symbol
        let x1 = common::orbit(spec.base(), &w, &x)[0].clone();
        let deeper = Word::new(w.symbols()[..len - 1].to_vec());
        let (y1, z1) = graph_value(&spec, &x1, &deeper).unwrap();
        let image = spec.apply(&Point::new(x1, y1, z1)).unwrap();
        let (y, z) = graph_value(&spec, &x, &w).unwrap();
        for (a, b) in image.y.iter().chain(&image.z).zip(y.iter().chain(&z)) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in image.x.iter().zip(&x) {
            let d = (a - b).rem_euclid(1.0);
            assert!(d.min(1.0 - d) < 1e-12);
        }
    }
}

#[test]
fn derivative_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..200 {
        let spec = common::random_spec(&mut rng);
        let len = rng.random_range(1..=10);
        let w = common::random_word(&mut rng, &spec, len);
        let x = common::random_point(&mut rng, spec.l());
        let exact = graph_rho_derivative(&spec, &x, &w).unwrap();
        let fd = common::rho_derivative_fd(&spec, &x, &w, 1e-6);
        let scale = exact.max_abs().max(1e-3);
        assert!((&exact - &fd).max_abs() <= 1e-6 * scale, "{exact:?} vs {fd:?}");
    }
}

#[test]
fn derivative_matches_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..100 {
        let spec = common::random_spec(&mut rng);
        let len = rng.random_range(1..=12);
        let w = common::random_word(&mut rng, &spec, len);
        let x = common::random_point(&mut rng, spec.l());
        let exact = graph_rho_derivative(&spec, &x, &w).unwrap();
        let series = common::rho_derivative_series(&spec, &x, &w);
        assert!((&exact - &series).max_abs() < 1e-12);
    }
}

#[test]
fn derivative_is_uniformly_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..20 {
        let spec = common::random_spec(&mut rng);
        let kappa = component_lipschitz_bound(&spec);
        for _ in 0..50 {
            let len = rng.random_range(1..=14);
            let w = common::random_word(&mut rng, &spec, len);
            let x = common::random_point(&mut rng, spec.l());
            let d = graph_rho_derivative(&spec, &x, &w).unwrap();
            assert!(d.operator_norm() <= kappa + 1e-12);
        }
    }
}

#[test]
fn value_drift_per_letter_contracts() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..50 {
        let spec = common::random_spec(&mut rng);
        let full = common::random_word(&mut rng, &spec, 14);
        let x = common::random_point(&mut rng, spec.l());
        for j in 1..14 {
            let (a, _) = graph_value(&spec, &x, &full.shallow_suffix(j)).unwrap();
            let (b, _) = graph_value(&spec, &x, &full.shallow_suffix(j + 1)).unwrap();
            let drift = a.iter().zip(&b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
            assert!(drift <= truncation_bound(&spec, j) + 1e-14);
        }
    }
}

#[test]
fn smale_williams_slice_points_are_distinct() {
    let spec = presets::smale_williams(0.2, 0.1);
    let cloud = slice_cloud(&spec, &[0.0], 10, DEFAULT_WORD_BUDGET).unwrap();
    assert_eq!(cloud.len(), 1024);
    let mut min = f64::INFINITY;
    for i in 0..cloud.len() {
        for j in 0..i {
            let (a, b) = (&cloud.point(i)[1..3], &cloud.point(j)[1..3]);
            min = min.min(a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt());
        }
    }
    assert!(min > 0.0);
}

#[test]
fn attractor_cloud_is_forward_invariant_up_to_resolution() {
    let spec = presets::smale_williams(0.2, 0.1);
    let (depth, cells) = (6, 32u64);
    let cloud = attractor_cloud(&spec, depth, cells, DEFAULT_WORD_BUDGET).unwrap();
    let words = 1usize << depth;
    let tol = truncation_bound(&spec, depth) + 1e-12;
    for i in 0..cloud.len() {
        let pt = cloud.point(i);
        let img = spec.apply(&Point::new(pt[..1].to_vec(), pt[1..3].to_vec(), pt[3..].to_vec())).unwrap();
        // the doubling map sends grid point k to grid point 2k mod cells
        let target = ((cloud.grid_index(i) * 2) % cells) as usize;
        let best = (0..words)
            .map(|k| {
                let q = cloud.point(target * words + k);
                q[1..]
                    .iter()
                    .zip(img.y.iter().chain(&img.z))
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(best <= tol, "{best} > {tol}");
    }
}
