mod common;

use common::{m_subduction, random_vector, rng, v};
use subduce_core::liealg::{
    ad_invariance_residual, candidate_norms, cone_sample, equivariance_defect, invariant_polys, so4, so4_basis,
};
use subduce_core::linalg::{block_rotation, expm, rotation3, sphere_direction};
use subduce_core::minksub::brute_force_subduced;
use subduce_core::norms::verify_minkowski;
use subduce_core::{Matrix, MinkowskiFunction};

fn random_group_element(r: &mut rand_chacha::ChaCha8Rng) -> Matrix {
    let coeffs = random_vector(r, 6);
    let skew = so4_basis().iter().zip(coeffs.iter()).fold(Matrix::zeros(4, 4), |acc, (b, c)| acc + b * *c);
    expm(&skew)
}

fn random_block_rotation(r: &mut rand_chacha::ChaCha8Rng) -> Matrix {
    block_rotation(&rotation3(&random_vector(r, 3)))
}

#[test]
fn killing_form_is_ad_invariant() {
    let sc = so4().sc;
    let mut r = rng(61);
    for _ in 0..20 {
        let g = random_group_element(&mut r);
        let (xi, eta) = (random_vector(&mut r, 6), random_vector(&mut r, 6));
        let before = sc.killing(&xi, &eta).unwrap();
        let after = sc.killing(&sc.adjoint(&g, &xi).unwrap(), &sc.adjoint(&g, &eta).unwrap()).unwrap();
        assert!((before - after).abs() <= 1e-9 * before.abs().max(1.0));
    }
}

#[test]
fn ad_is_skew_for_killing() {
    let sc = so4().sc;
    let mut r = rng(62);
    for _ in 0..20 {
        let (xi, eta, zeta) = (random_vector(&mut r, 6), random_vector(&mut r, 6), random_vector(&mut r, 6));
        let lhs = sc.killing(&sc.bracket(&xi, &eta).unwrap(), &zeta).unwrap();
        let rhs = -sc.killing(&eta, &sc.bracket(&xi, &zeta).unwrap()).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10);
    }
}

#[test]
fn flat_and_sharp_are_inverse_and_equivariant() {
    let sc = so4().sc;
    let mut r = rng(63);
    for _ in 0..20 {
        let xi = random_vector(&mut r, 6);
        let back = sc.sharp(&sc.flat(&xi).unwrap()).unwrap();
        assert!((back - &xi).amax() <= 1e-12);
        let g = random_group_element(&mut r);
        let lhs = sc.flat(&sc.adjoint(&g, &xi).unwrap()).unwrap();
        let rhs = sc.coadjoint(&g, &sc.flat(&xi).unwrap()).unwrap();
        assert!((lhs - rhs).amax() <= 1e-9);
    }
}

#[test]
fn candidate_norms_are_bi_invariant() {
    let c = candidate_norms();
    let sc = so4().sc;
    let mut r = rng(64);
    for _ in 0..20 {
        let g = random_group_element(&mut r);
        let xi = random_vector(&mut r, 6);
        let moved = sc.adjoint(&g, &xi).unwrap();
        for spec in [&c.euclidean, &c.hat, &c.tilde] {
            let (a, b) = (spec.eval(&xi).unwrap(), spec.eval(&moved).unwrap());
            assert!((a - b).abs() <= 1e-9 * a);
        }
    }
}

#[test]
fn invariants_are_annihilated_by_the_pde() {
    let sc = so4().sc;
    let (l1, l2) = invariant_polys();
    let mut r = rng(65);
    for _ in 0..100 {
        let w = random_vector(&mut r, 6);
        assert!(ad_invariance_residual(&sc, &l1, &w).unwrap().amax() <= 1e-12);
        assert!(ad_invariance_residual(&sc, &l2, &w).unwrap().amax() <= 1e-12);
    }
    // (w¹ + w⁴)² + (w¹ + w⁵)² + (w³ + w⁶)² is not invariant.
    let mut swapped = l1.0.clone();
    swapped[(1, 4)] = 0.0;
    swapped[(4, 1)] = 0.0;
    swapped[(0, 4)] = 1.0;
    swapped[(4, 0)] = 1.0;
    swapped[(0, 0)] = 2.0;
    swapped[(1, 1)] = 0.0;
    let bad = subduce_core::liealg::QuadraticForm(swapped);
    let w = v(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    assert!(ad_invariance_residual(&sc, &bad, &w).unwrap().amax() > 0.1);
}

#[test]
fn subduced_norms_on_m_are_rotation_invariant() {
    let c = candidate_norms();
    let mut r = rng(66);
    for spec in [&c.euclidean, &c.hat, &c.tilde] {
        let sub = m_subduction(spec);
        for _ in 0..10 {
            let zeta = random_vector(&mut r, 3);
            let rot = rotation3(&random_vector(&mut r, 3));
            let (a, b) = (sub.value(&zeta).unwrap(), sub.value(&(&rot * &zeta)).unwrap());
            assert!((a - b).abs() <= 1e-8);
        }
    }
}

#[test]
fn tilde_subduced_norm_is_euclidean_multiple() {
    // Rotation invariance on ℝ³ forces F̄₂ = c |ζ|.
    let sub = m_subduction(&candidate_norms().tilde);
    let c = sub.value(&v(&[1.0, 0.0, 0.0])).unwrap();
    let mut r = rng(67);
    for _ in 0..20 {
        let zeta = random_vector(&mut r, 3);
        assert!((sub.value(&zeta).unwrap() - c * zeta.norm()).abs() <= 1e-10 * zeta.norm());
    }
    let report = verify_minkowski(&sub.subduced, 100, 1, 1e-9);
    assert!(report.passed);
}

#[test]
fn equivariance_under_block_rotations() {
    let c = candidate_norms();
    let mut r = rng(68);
    for spec in [&c.hat, &c.tilde] {
        let sub = m_subduction(spec);
        assert!(equivariance_defect(&sub, &Matrix::identity(4, 4), &v(&[1.0, 2.0, 3.0])).unwrap() <= 1e-14);
        for _ in 0..5 {
            let g = random_block_rotation(&mut r);
            let zeta = sphere_direction(&mut r, 3);
            assert!(equivariance_defect(&sub, &g, &zeta).unwrap() <= 1e-7);
        }
    }
    let tilde = m_subduction(&c.tilde);
    let third = block_rotation(&rotation3(&v(&[std::f64::consts::FRAC_PI_3, 0.0, 0.0])));
    assert!(equivariance_defect(&tilde, &third, &v(&[1.0, 1.0, 0.0])).unwrap() <= 1e-7);
}

#[test]
fn cone_samples() {
    let c = candidate_norms();
    for spec in [&c.euclidean, &c.hat] {
        let sub = m_subduction(spec);
        for p in cone_sample(&sub, 50, 3).unwrap() {
            assert!(p.rows(0, 3).amax() <= 1e-8);
        }
    }
    let tilde = m_subduction(&c.tilde);
    let pts = cone_sample(&tilde, 50, 3).unwrap();
    assert!(pts.iter().any(|p| p.rows(0, 3).norm() > 1e-3));
    assert_eq!(pts, cone_sample(&tilde, 50, 3).unwrap());
}

#[test]
fn tilde_lift_components_against_oracle() {
    // The h-component of the F̃-lift of (1, 0, 0) solves 16a(a² + 1) + 4(a + 1)³ = 0.
    let sub = m_subduction(&candidate_norms().tilde);
    let point = sub.lift(&v(&[1.0, 0.0, 0.0])).unwrap().point;
    let a = point[0];
    assert!((16.0 * a * (a * a + 1.0) + 4.0 * (a + 1.0).powi(3)).abs() <= 1e-9);
    assert!((a + 0.150097).abs() <= 1e-5);
    assert!(point[1].abs() <= 1e-12 && point[2].abs() <= 1e-12);
    let oracle =
        brute_force_subduced(&sub.subduced.source, &sub.split.projection(), &v(&[1.0, 0.0, 0.0]), 2.0, 21).unwrap();
    assert!((oracle - sub.value(&v(&[1.0, 0.0, 0.0])).unwrap()).abs() <= 1e-8);
}
