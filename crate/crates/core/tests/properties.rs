#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;

use proptest::prelude::*;
use simplex_edge::edge::{self, d1, d2, f1, f2, f1_compact, f2_compact, AngleSlice};
use simplex_edge::metric::signature_of;
use simplex_edge::solver::{default_gains, estimate_contraction};
use simplex_edge::{
    build_coxeter_schlafli, classify_realization, complementary_minor_identity, contraction_map, determinant,
    domain_for, inverse, minor, normalize_params, signature, solve, MinorSpec, Signature, SimplexParams,
    SolverConfig, SymMatrix4,
};

fn sym(upper: [f64; 10]) -> SymMatrix4 {
    let mut e = [[0.0; 4]; 4];
    let mut k = 0;
    for i in 0..4 {
        for j in i..4 {
            e[i][j] = upper[k];
            k += 1;
        }
    }
    SymMatrix4::from_upper(e)
}

fn arb_matrix() -> impl Strategy<Value = SymMatrix4> {
    prop::array::uniform10(-2.0f64..=2.0).prop_map(sym)
}

fn arb_index_set() -> impl Strategy<Value = Vec<usize>> {
    (1usize..=3).prop_flat_map(|k| prop::sample::subsequence(vec![0usize, 1, 2, 3], k))
}

fn arb_spec() -> impl Strategy<Value = MinorSpec> {
    (1usize..=3).prop_flat_map(|k| {
        (
            prop::sample::subsequence(vec![0usize, 1, 2, 3], k),
            prop::sample::subsequence(vec![0usize, 1, 2, 3], k),
        )
            .prop_map(|(r, c)| MinorSpec::new(r, c).unwrap())
    })
}

const PAIRS: [(u32, u32); 4] = [(2, 4), (3, 5), (4, 7), (6, 10)];

fn slice(a: u32, b: u32, alpha1: f64, beta1: f64) -> AngleSlice {
    AngleSlice::unchecked(alpha1, beta1, normalize_params(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn complementary_minor_identity_holds(m in arb_matrix(), spec in arb_spec()) {
        prop_assume!(determinant(&m).abs() > 1e-6);
        let (lhs, rhs) = complementary_minor_identity(&m, &spec).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(rhs.abs()).max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn principal_minor_identity_holds(m in arb_matrix(), rows in arb_index_set()) {
        prop_assume!(determinant(&m).abs() > 1e-6);
        let spec = MinorSpec::principal(rows).unwrap();
        let (lhs, rhs) = complementary_minor_identity(&m, &spec).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(rhs.abs()).max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn double_inverse_is_identity(upper in prop::array::uniform10(-1.0f64..=1.0)) {
        // diagonal shift keeps the matrix well conditioned
        let mut m = *sym(upper).entries();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += 4.0;
        }
        let m = SymMatrix4::from_upper(m);
        let back = inverse(&inverse(&m).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((back.get(i, j) - m.get(i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn determinant_is_eigenvalue_product(m in arb_matrix()) {
        let det = determinant(&m);
        let prod: f64 = m.eigenvalues().iter().product();
        prop_assert!((det - prod).abs() <= 1e-8 * det.abs().max(1e-3), "{} vs {}", det, prod);
    }

    #[test]
    fn duality_swaps_conditions(
        a in 2u32..9,
        db in 1u32..6,
        s in 0.0f64..=1.0,
        t in 0.0f64..=1.0,
    ) {
        let b = a + db;
        let alpha1 = s * PI / a as f64;
        let beta1 = t * PI / b as f64;
        let direct = AngleSlice::unchecked(alpha1, beta1, SimplexParams::new(a, b).unwrap());
        let dual = AngleSlice::unchecked(beta1, alpha1, SimplexParams::new(b, a).unwrap());
        prop_assert!((f1(&direct) - f2(&dual)).abs() < 1e-12);
        prop_assert!((f2(&direct) - f1(&dual)).abs() < 1e-12);
    }

    #[test]
    fn classification_ignores_order(a in 1u32..30, b in 1u32..30) {
        let x = classify_realization(&SimplexParams::new(a, b).unwrap()).unwrap();
        let y = classify_realization(&SimplexParams::new(b, a).unwrap()).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn expanded_forms_match_compact(a in 2u32..9, db in 1u32..6, s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let b = a + db;
        let sl = slice(a, b, s * PI / a as f64, t * PI / b as f64);
        let ang = sl.angles();
        prop_assert!((f1(&sl) - f1_compact(&ang)).abs() < 1e-12);
        prop_assert!((f2(&sl) - f2_compact(&ang)).abs() < 1e-12);
    }

    #[test]
    fn principal_minors_match_matrix(a in 2u32..9, db in 1u32..6, s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let b = a + db;
        let sl = slice(a, b, s * PI / a as f64, t * PI / b as f64);
        let m = build_coxeter_schlafli(&sl.angles());
        let b00 = minor(&m, &MinorSpec::deleting(0));
        let b11 = minor(&m, &MinorSpec::deleting(1));
        prop_assert!((edge::b00(&sl) - b00).abs() < 1e-12);
        prop_assert!((edge::b11(&sl) - b11).abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences(idx in 0usize..4, s in 0.02f64..0.98, t in 0.02f64..0.98) {
        let (a, b) = PAIRS[idx];
        let p = normalize_params(a, b).unwrap();
        let d = domain_for(&p).unwrap();
        let alpha1 = d.alpha1_lo + s * d.width();
        let beta1 = d.beta1_lo + t * d.height();
        let h = 1e-6;
        let at = |x: f64, y: f64| AngleSlice::unchecked(x, y, p);
        let fd1 = (f1(&at(alpha1 + h, beta1)) - f1(&at(alpha1 - h, beta1))) / (2.0 * h);
        let fd2 = (f2(&at(alpha1, beta1 + h)) - f2(&at(alpha1, beta1 - h))) / (2.0 * h);
        prop_assert!((d1(&at(alpha1, beta1)) - fd1).abs() < 1e-5);
        prop_assert!((d2(&at(alpha1, beta1)) - fd2).abs() < 1e-5);
    }

    #[test]
    fn map_is_lipschitz_with_estimated_norm(s in 0.0f64..=1.0, t in 0.0f64..=1.0, u in 0.0f64..=1.0, v in 0.0f64..=1.0) {
        let p = normalize_params(3, 5).unwrap();
        let d = domain_for(&p).unwrap();
        let gains = default_gains(&p, &d, 200);
        let est = estimate_contraction(&p, &d, gains, 200);
        let x = (d.alpha1_lo + s * d.width(), d.beta1_lo + t * d.height());
        let y = (d.alpha1_lo + u * d.width(), d.beta1_lo + v * d.height());
        let gx = contraction_map(x, &p, gains, &d).point;
        let gy = contraction_map(y, &p, gains, &d).point;
        let lhs = (gx.0 - gy.0).abs().max((gx.1 - gy.1).abs());
        let rhs = est.norm * (x.0 - y.0).abs().max((x.1 - y.1).abs());
        prop_assert!(lhs <= rhs + 1e-15, "{} > {}", lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn signature_survives_congruence(
        p in prop::array::uniform4(prop::array::uniform4(-1.0f64..=1.0)),
        signs in prop::array::uniform4(prop::bool::ANY),
        scales in prop::array::uniform4(0.5f64..=2.0),
    ) {
        let mut pm = p;
        for (i, row) in pm.iter_mut().enumerate() {
            row[i] += 3.0;
        }
        let d: [f64; 4] = std::array::from_fn(|i| if signs[i] { scales[i] } else { -scales[i] });
        let expect = Signature::new(d.iter().filter(|x| **x > 0.0).count(), d.iter().filter(|x| **x < 0.0).count(), 0);
        let m = SymMatrix4::diagonal(d).congruence(&pm);
        prop_assert_eq!(signature(&m), expect);
        prop_assert_eq!(signature_of(*m.entries()), expect);
    }
}

fn grid(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

#[test]
fn boundary_identities_for_a_two() {
    for b in 4..=12u32 {
        let bh = PI / b as f64;
        for beta1 in grid(100, 0.0, bh) {
            let expect = -(1.0 - beta1.cos()).powi(2) * beta1.sin().powi(2);
            let v = f1(&slice(2, b, 0.0, beta1));
            assert!((v - expect).abs() < 1e-12 && v <= 1e-15);
            let expect = -beta1.cos().powi(2) * beta1.sin().powi(2);
            let v = f1(&slice(2, b, PI / 2.0, beta1));
            assert!((v - expect).abs() < 1e-12 && v <= 1e-15);
        }
        for alpha1 in grid(100, 0.0, PI / 2.0) {
            let alpha2 = PI - 2.0 * alpha1;
            let beta2 = 2.0 * PI / b as f64;
            let expect = (alpha1.cos() + beta2.cos()).powi(2) * alpha2.sin().powi(2);
            let v = f1(&slice(2, b, alpha1, 0.0));
            assert!((v - expect).abs() < 1e-12 && v >= -1e-15);
        }
    }
    // f1 stays positive on the α₁ = π/3 edge
    for b in 4..=7u32 {
        for beta1 in grid(100, 0.0, PI / b as f64) {
            assert!(f1(&slice(2, b, PI / 3.0, beta1)) > 0.0, "b = {b}, β₁ = {beta1}");
        }
    }
}

#[test]
fn boundary_signs_for_larger_a() {
    for (a, b) in [(3, 4), (4, 6), (5, 9)] {
        let ah = PI / a as f64;
        let bh = PI / b as f64;
        for beta1 in grid(100, 0.0, bh) {
            assert!(f1(&slice(a, b, 0.0, beta1)) > 0.0, "({a},{b}) β₁ = {beta1}");
            let expect = -(ah.cos() + beta1.cos()).powi(2) * beta1.sin().powi(2);
            let v = f1(&slice(a, b, ah, beta1));
            assert!((v - expect).abs() < 1e-12 && v <= 1e-15);
        }
        for alpha1 in grid(100, 0.0, ah) {
            assert!(f1(&slice(a, b, alpha1, 0.0)) >= -1e-15);
        }
    }
}

#[test]
fn f2_boundary_signs() {
    for a in 2..=6u32 {
        for b in (a + 1).max(4)..=a + 8 {
            let bh = PI / b as f64;
            for beta1 in grid(100, 0.0, bh) {
                assert!(f2(&slice(a, b, 0.0, beta1)) >= -1e-15, "({a},{b})");
            }
            for alpha1 in grid(100, 0.0, PI / a as f64) {
                let v = f2(&slice(a, b, alpha1, bh));
                let expect = -(alpha1.cos() + bh.cos()).powi(2) * alpha1.sin().powi(2);
                assert!((v - expect).abs() < 1e-12 && v <= 1e-15, "({a},{b})");
            }
        }
    }
}

fn sign_changes(values: impl Iterator<Item = f64>) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}

#[test]
fn slices_have_single_sign_change() {
    for (a, b) in PAIRS {
        let p = normalize_params(a, b).unwrap();
        let d = domain_for(&p).unwrap();
        for beta1 in grid(60, d.beta1_lo, d.beta1_hi) {
            let n = sign_changes(grid(1000, d.alpha1_lo, d.alpha1_hi).map(|x| f1(&slice(a, b, x, beta1))));
            assert!(n <= 1, "({a},{b}) β₁ = {beta1}: {n} changes");
        }
        for alpha1 in grid(60, d.alpha1_lo, d.alpha1_hi) {
            if f2(&slice(a, b, alpha1, 0.0)) < 0.0 {
                continue;
            }
            let n = sign_changes(grid(1000, d.beta1_lo, d.beta1_hi).map(|y| f2(&slice(a, b, alpha1, y))));
            assert!(n <= 1, "({a},{b}) α₁ = {alpha1}: {n} changes");
        }
    }
}

#[test]
fn inequality_matches_boundary_sign() {
    for a in 2..40u32 {
        for b in a + 1..=40 {
            let p = normalize_params(a, b).unwrap();
            let strict = edge::realizability_inequality(&p).unwrap().strict;
            let positive = edge::f2_boundary_sign(&p).unwrap() == edge::Sign::Positive;
            assert_eq!(strict, positive, "({a},{b})");
        }
    }
}

#[test]
fn solve_is_deterministic() {
    let p = normalize_params(4, 7).unwrap();
    let x = solve(&p, &SolverConfig::default()).unwrap();
    let y = solve(&p, &SolverConfig::default()).unwrap();
    assert_eq!(format!("{x:?}"), format!("{y:?}"));
}
