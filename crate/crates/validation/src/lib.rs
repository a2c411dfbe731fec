//! Reference norms, surjections and chart families used by the acceptance checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subduce_core::chart::{ChartFinsler, CoeffTarget, Monomial, PolyDep};
use subduce_core::liealg::{candidate_norms, so4, subduce_to_m, MSubduction};
use subduce_core::linalg::sphere_direction;
use subduce_core::{LinearSurjection, Matrix, NormSpec, Vector};

pub fn v(xs: &[f64]) -> Vector {
    Vector::from_row_slice(xs)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random vector: uniform direction times a magnitude in `[0.2, 3]`.
pub fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> Vector {
    let r: f64 = rng.random_range(0.2..3.0);
    sphere_direction(rng, d) * r
}

pub fn randers_projection() -> LinearSurjection {
    subduce_core::minksub::make_surjection(Matrix::from_row_slice(1, 2, &[1.0, 0.0])).unwrap()
}

/// A named source norm with the surjection it is subduced through.
pub struct Case {
    pub name: &'static str,
    pub spec: NormSpec,
    pub surj: LinearSurjection,
}

pub fn lift_cases() -> Vec<Case> {
    let c = candidate_norms();
    let m = so4().projection();
    vec![
        Case { name: "randers", spec: NormSpec::randers_example(), surj: randers_projection() },
        Case { name: "F_hat", spec: c.hat, surj: m.clone() },
        Case { name: "F_tilde", spec: c.tilde, surj: m },
    ]
}

pub fn m_subduction(spec: &NormSpec) -> MSubduction {
    subduce_to_m(&so4(), spec).unwrap()
}

fn monomial(px: &[u32], py: &[u32], coef: f64) -> Monomial {
    Monomial { powers_x: px.to_vec(), powers_y: py.to_vec(), coef }
}

/// Randers example with `A[0][0] = 2 + y²`.
pub fn y_dependent_chart() -> ChartFinsler {
    let dep =
        PolyDep { target: CoeffTarget::A(0, 0), monomials: vec![monomial(&[], &[0], 2.0), monomial(&[], &[2], 1.0)] };
    ChartFinsler::new(1, 1, NormSpec::randers_example(), vec![dep]).unwrap()
}

/// Randers example with `A[0][0] = 2 + x²` and `b[1] = 1 + 0.2 x`: varies
/// along the base only.
pub fn x_dependent_chart() -> ChartFinsler {
    let deps = vec![
        PolyDep { target: CoeffTarget::A(0, 0), monomials: vec![monomial(&[0], &[], 2.0), monomial(&[2], &[], 1.0)] },
        PolyDep { target: CoeffTarget::B(1), monomials: vec![monomial(&[0], &[], 1.0), monomial(&[1], &[], 0.2)] },
    ];
    ChartFinsler::new(1, 1, NormSpec::randers_example(), deps).unwrap()
}

pub fn constant_randers_chart() -> ChartFinsler {
    ChartFinsler::constant(1, 1, NormSpec::randers_example()).unwrap()
}
