mod common;

use std::f64::consts::PI;

use common::REFERENCE_ROOTS;
use simplex_edge::solver::{contraction_neighbourhood, default_gains, full_box};
use simplex_edge::{
    contraction_map, domain_for, grid_oracle, normalize_params, solve, Error, Method, SolveStatus, SolverConfig,
    VertexClass,
};

#[test]
fn auto_solver_matches_reference_roots() {
    let cfg = SolverConfig::default();
    for &(a, b, alpha1, beta1) in &REFERENCE_ROOTS {
        let p = normalize_params(a, b).unwrap();
        let r = solve(&p, &cfg).unwrap();
        assert_eq!(r.status, SolveStatus::Solved, "({a},{b})");
        let ang = r.angles.unwrap();
        assert!((ang.alpha1 - alpha1).abs() < 1e-10, "({a},{b}) α₁ {} vs {alpha1}", ang.alpha1);
        assert!((ang.beta1 - beta1).abs() < 1e-10, "({a},{b}) β₁ {} vs {beta1}", ang.beta1);
        assert!(r.max_residual() <= 1e-11);
        assert!(r.contraction_norm_estimate < 1.0, "({a},{b}) norm {}", r.contraction_norm_estimate);
        assert!(domain_for(&p).unwrap().strictly_contains((ang.alpha1, ang.beta1)));
    }
}

#[test]
fn solutions_are_proper_hyperbolic() {
    let cfg = SolverConfig::default();
    for &(a, b, ..) in &REFERENCE_ROOTS {
        let r = solve(&normalize_params(a, b).unwrap(), &cfg).unwrap();
        let v = r.verification.unwrap();
        assert!(v.det_b < 0.0);
        assert_eq!((v.signature.positive, v.signature.negative, v.signature.zero), (3, 1, 0));
        assert!(v.vertex_classes.iter().all(|c| *c == Some(VertexClass::Outer)));
        assert!(v.gram_signs_negative);
        let e = v.edge_lengths.unwrap();
        assert!((e.d01 - e.d02).abs() < 1e-8, "({a},{b}) {} vs {}", e.d01, e.d02);
        assert!((e.d03 - e.d13).abs() < 1e-8, "({a},{b}) {} vs {}", e.d03, e.d13);
        assert!(r.properness.unwrap().is_proper());
    }
}

#[test]
fn other_methods_agree() {
    for &(a, b, alpha1, beta1) in &REFERENCE_ROOTS[..6] {
        let p = normalize_params(a, b).unwrap();
        for method in [Method::FixedPoint, Method::Newton, Method::GridOracle] {
            let cfg = SolverConfig { method, ..SolverConfig::default() };
            let r = solve(&p, &cfg).unwrap();
            assert_eq!(r.status, SolveStatus::Solved, "({a},{b}) {method:?}");
            let ang = r.angles.unwrap();
            assert!((ang.alpha1 - alpha1).abs() < 1e-9, "({a},{b}) {method:?}");
            assert!((ang.beta1 - beta1).abs() < 1e-9, "({a},{b}) {method:?}");
        }
    }
}

#[test]
fn swapped_input_gives_same_angles() {
    let cfg = SolverConfig::default();
    let direct = solve(&normalize_params(3, 5).unwrap(), &cfg).unwrap();
    let swapped = solve(&simplex_edge::SimplexParams::new(5, 3).unwrap(), &cfg).unwrap();
    assert_eq!(direct.angles, swapped.angles);
}

#[test]
fn beyond_bmax_has_no_proper_solution() {
    let cfg = SolverConfig::default();
    for (a, b) in [(2, 9), (3, 9), (4, 10), (5, 12), (6, 13), (2, 11)] {
        let r = solve(&normalize_params(a, b).unwrap(), &cfg).unwrap();
        assert_eq!(r.status, SolveStatus::NoProperSolution, "({a},{b})");
        assert!(r.angles.is_none());
    }
}

#[test]
fn equality_case_is_boundary_solution() {
    let r = solve(&normalize_params(2, 8).unwrap(), &SolverConfig::default()).unwrap();
    assert_eq!(r.status, SolveStatus::BoundarySolution);
    let ang = r.angles.unwrap();
    assert!((ang.alpha1 - PI / 2.0).abs() < 1e-15);
    assert_eq!(ang.beta1, 0.0);
    assert!(ang.alpha2.abs() < 1e-15);
}

#[test]
fn excluded_classes_are_errors() {
    let cfg = SolverConfig::default();
    for (a, b) in [(1, 4), (2, 2), (5, 5)] {
        let r = solve(&normalize_params(a, b).unwrap(), &cfg);
        assert!(matches!(r, Err(Error::InvalidClass(_))), "({a},{b})");
    }
}

#[test]
fn two_three_reports_its_improper_root() {
    let r = solve(&normalize_params(2, 3).unwrap(), &SolverConfig::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Solved);
    let near = r
        .improper_roots
        .iter()
        .any(|&(x, y)| (x - 0.07831236).abs() < 1e-6 && (y - 0.85342051).abs() < 1e-6);
    assert!(near, "improper roots: {:?}", r.improper_roots);
    // it lies outside the search box
    assert!(!domain_for(&normalize_params(2, 3).unwrap()).unwrap().contains((0.07831236, 0.85342051)));
}

#[test]
fn oracle_finds_exactly_one_root_in_box() {
    for &(a, b, alpha1, beta1) in &REFERENCE_ROOTS {
        let p = normalize_params(a, b).unwrap();
        let c = grid_oracle(&p, &domain_for(&p).unwrap(), 200).unwrap();
        assert_eq!(c.len(), 1, "({a},{b}) {c:?}");
        assert!((c[0].alpha1 - alpha1).abs() < 1e-9);
        assert!((c[0].beta1 - beta1).abs() < 1e-9);
    }
}

#[test]
fn oracle_on_full_box_for_two_three() {
    let p = normalize_params(2, 3).unwrap();
    let c = grid_oracle(&p, &full_box(&p), 200).unwrap();
    assert!(c.iter().any(|r| (r.alpha1 - 1.2039358384794982).abs() < 1e-9));
    assert!(c.iter().any(|r| (r.alpha1 - 0.07831236).abs() < 1e-6));
}

#[test]
fn local_contraction_certificate() {
    for &(a, b, alpha1, beta1) in &REFERENCE_ROOTS {
        let p = normalize_params(a, b).unwrap();
        let (local, gains, est) = contraction_neighbourhood(&p, (alpha1, beta1), 100).unwrap();
        assert!(est.norm < 1.0);
        assert!(local.contains((alpha1, beta1)));
        // iterating from a corner of the certified box converges to the root
        let mut x = (local.alpha1_lo, local.beta1_hi);
        for _ in 0..100_000 {
            x = contraction_map(x, &p, gains, &local).point;
        }
        assert!((x.0 - alpha1).abs() < 1e-10 && (x.1 - beta1).abs() < 1e-10, "({a},{b})");
    }
}

#[test]
fn manual_gains_are_used() {
    let p = normalize_params(4, 6).unwrap();
    let auto = default_gains(&p, &domain_for(&p).unwrap(), 200);
    let cfg = SolverConfig {
        k1: Some(auto.k1 * 1.5),
        k2: Some(auto.k2 * 1.5),
        ..SolverConfig::default()
    };
    let r = solve(&p, &cfg).unwrap();
    assert_eq!(r.status, SolveStatus::Solved);
    assert_eq!(r.gains.unwrap().k1, auto.k1 * 1.5);
}

#[test]
fn tiny_iteration_budget_diverges() {
    let p = normalize_params(4, 6).unwrap();
    let cfg = SolverConfig {
        method: Method::FixedPoint,
        max_iterations: 3,
        ..SolverConfig::default()
    };
    let r = solve(&p, &cfg).unwrap();
    assert_eq!(r.status, SolveStatus::Diverged);
    assert!(r.angles.is_none());
}

#[test]
fn boxes_stay_inside_angle_range() {
    for a in 2..=6u32 {
        let p = normalize_params(a, a + 1).unwrap();
        let d = domain_for(&p).unwrap();
        assert!(d.alpha1_hi <= PI / a as f64 + 1e-15);
        assert!(d.beta1_hi <= PI / (a + 1) as f64 + 1e-15);
    }
}

#[test]
fn oracle_is_empty_beyond_bmax() {
    let p = normalize_params(2, 9).unwrap();
    assert!(grid_oracle(&p, &domain_for(&p).unwrap(), 200).unwrap().is_empty());
}

#[test]
fn rows_that_agree_with_published_values() {
    // (2,3), (2,4), (3,4) and (4,5) match the published digits to 1e-5
    for &(a, b, alpha1, beta1) in common::PUBLISHED_TABLE.iter().filter(|r| matches!((r.0, r.1), (2, 3) | (2, 4) | (3, 4) | (4, 5))) {
        let r = solve(&normalize_params(a, b).unwrap(), &SolverConfig::default()).unwrap();
        let ang = r.angles.unwrap();
        assert!((ang.alpha1 - alpha1).abs() < 1e-5, "({a},{b})");
        assert!((ang.beta1 - beta1).abs() < 1e-5, "({a},{b})");
    }
}
