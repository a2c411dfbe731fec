//! Minkowski-norm candidates with analytic derivatives of the energy
//! `E = F^2 / 2`, and a sampled certificate for the Minkowski axioms.
//!
//! Three closed-form families are supported:
//!
//! | family         | `F(u)`                                  |
//! |----------------|-----------------------------------------|
//! | `Euclidean`    | `sqrt(uᵀ A u)`                          |
//! | `Randers`      | `sqrt(uᵀ A u) + b·u`                    |
//! | `QuarticRoot`  | `(Σ_j (uᵀ Q_j u)^2)^(1/4)`              |
//!
//! Every family is positively 1-homogeneous by construction. Strong convexity
//! is only guaranteed for Euclidean norms and for Randers norms with
//! `bᵀ A⁻¹ b < 1`; quartic-root norms must be certified with
//! [`verify_minkowski`].

use alloc::format;
use alloc::vec::Vec;

use nalgebra::Cholesky;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{min_eigenvalue, powf, sphere_direction, sqrt, symmetry_defect, Matrix, Vector};

const SYMMETRY_TOL: f64 = 1e-12;

/// Scalings used by the homogeneity check.
pub const HOMOGENEITY_SCALES: [f64; 3] = [0.5, 2.0, 7.0];

/// A closed-form Minkowski-norm candidate.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    Euclidean { a: Matrix },
    Randers { a: Matrix, b: Vector },
    QuarticRoot { q: Vec<Matrix> },
}

/// Anything that behaves like a norm off the origin: a value, and the
/// gradient and Hessian of its energy.
pub trait MinkowskiFunction {
    fn dim(&self) -> usize;
    fn eval(&self, u: &Vector) -> Result<f64>;
    fn grad_energy(&self, u: &Vector) -> Result<Vector>;
    fn hess_energy(&self, u: &Vector) -> Result<Matrix>;

    /// `∇F = ∇E / F`.
    fn grad_norm(&self, u: &Vector) -> Result<Vector> {
        let f = self.eval(u)?;
        Ok(self.grad_energy(u)? / f)
    }

    fn energy(&self, u: &Vector) -> Result<f64> {
        let f = self.eval(u)?;
        Ok(0.5 * f * f)
    }
}

fn check_square_symmetric(m: &Matrix, d: usize, what: &str) -> Result<()> {
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::InvalidSpec(format!("{what} is {}x{}, expected {d}x{d}", m.nrows(), m.ncols())));
    }
    if symmetry_defect(m) > SYMMETRY_TOL {
        return Err(Error::InvalidSpec(format!("{what} is not symmetric")));
    }
    Ok(())
}

fn check_positive_definite(m: &Matrix, what: &str) -> Result<()> {
    if d_is_pd(m) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{what} is not positive definite")))
    }
}

fn d_is_pd(m: &Matrix) -> bool {
    min_eigenvalue(m) > 0.0 && Cholesky::new(m.clone()).is_some()
}

fn is_zero(u: &Vector) -> bool {
    u.iter().all(|x| *x == 0.0)
}

impl NormSpec {
    pub fn euclidean(a: Matrix) -> Result<Self> {
        let spec = NormSpec::Euclidean { a };
        spec.check_structure()?;
        Ok(spec)
    }

    /// A Randers candidate. The strong-convexity bound `bᵀA⁻¹b < 1` is not
    /// enforced here; see [`NormSpec::randers_bound`].
    pub fn randers(a: Matrix, b: Vector) -> Result<Self> {
        let spec = NormSpec::Randers { a, b };
        spec.check_structure()?;
        Ok(spec)
    }

    pub fn quartic_root(q: Vec<Matrix>) -> Result<Self> {
        let spec = NormSpec::QuarticRoot { q };
        spec.check_structure()?;
        Ok(spec)
    }

    /// The Randers norm on ℝ² used throughout the examples:
    /// `sqrt(2v² + 2vw + 2w²) + v + w`.
    pub fn randers_example() -> Self {
        NormSpec::Randers {
            a: Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]),
            b: Vector::from_row_slice(&[1.0, 1.0]),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            NormSpec::Euclidean { a } | NormSpec::Randers { a, .. } => a.nrows(),
            NormSpec::QuarticRoot { q } => q.first().map_or(0, |m| m.nrows()),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            NormSpec::Euclidean { .. } => "euclidean",
            NormSpec::Randers { .. } => "randers",
            NormSpec::QuarticRoot { .. } => "quartic_root",
        }
    }

    /// Checks shapes, symmetry and definiteness.
    pub fn check_structure(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        match self {
            NormSpec::Euclidean { a } => {
                check_square_symmetric(a, d, "A")?;
                check_positive_definite(a, "A")
            }
            NormSpec::Randers { a, b } => {
                check_square_symmetric(a, d, "A")?;
                check_positive_definite(a, "A")?;
                if b.len() != d {
                    return Err(Error::InvalidSpec(format!("b has length {}, expected {d}", b.len())));
                }
                Ok(())
            }
            NormSpec::QuarticRoot { q } => {
                let mut sum = Matrix::zeros(d, d);
                for (j, qj) in q.iter().enumerate() {
                    check_square_symmetric(qj, d, &format!("Q[{j}]"))?;
                    if min_eigenvalue(qj) < -1e-12 * qj.norm().max(1.0) {
                        return Err(Error::InvalidSpec(format!("Q[{j}] is not positive semidefinite")));
                    }
                    sum += qj;
                }
                check_positive_definite(&sum, "sum of Q")
            }
        }
    }

    /// `bᵀ A⁻¹ b` for Randers specs; strongly convex iff this is below 1.
    pub fn randers_bound(&self) -> Option<f64> {
        match self {
            NormSpec::Randers { a, b } => {
                let chol = Cholesky::new(a.clone())?;
                Some(b.dot(&chol.solve(b)))
            }
            _ => None,
        }
    }

    /// Relabels coordinates: the new coordinate `i` is the old coordinate `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let d = self.dim();
        check_dim(d, perm.len())?;
        let pm = |m: &Matrix| Matrix::from_fn(d, d, |i, j| m[(perm[i], perm[j])]);
        Ok(match self {
            NormSpec::Euclidean { a } => NormSpec::Euclidean { a: pm(a) },
            NormSpec::Randers { a, b } => NormSpec::Randers { a: pm(a), b: Vector::from_fn(d, |i, _| b[perm[i]]) },
            NormSpec::QuarticRoot { q } => NormSpec::QuarticRoot { q: q.iter().map(pm).collect() },
        })
    }
}

impl MinkowskiFunction for NormSpec {
    fn dim(&self) -> usize {
        NormSpec::dim(self)
    }

    fn eval(&self, u: &Vector) -> Result<f64> {
        check_dim(self.dim(), u.len())?;
        if is_zero(u) {
            return Ok(0.0);
        }
        Ok(match self {
            NormSpec::Euclidean { a } => sqrt(u.dot(&(a * u))),
            NormSpec::Randers { a, b } => sqrt(u.dot(&(a * u))) + b.dot(u),
            NormSpec::QuarticRoot { q } => {
                let p: f64 = q
                    .iter()
                    .map(|qj| {
                        let s = u.dot(&(qj * u));
                        s * s
                    })
                    .sum();
                powf(p, 0.25)
            }
        })
    }

    fn grad_energy(&self, u: &Vector) -> Result<Vector> {
        check_dim(self.dim(), u.len())?;
        if is_zero(u) {
            return Err(Error::ZeroVector);
        }
        Ok(match self {
            NormSpec::Euclidean { a } => a * u,
            NormSpec::Randers { a, b } => {
                let au = a * u;
                let s = sqrt(u.dot(&au));
                let f = s + b.dot(u);
                (au / s + b) * f
            }
            NormSpec::QuarticRoot { q } => {
                let (p, g) = quartic_parts(q, u);
                g / sqrt(p)
            }
        })
    }

    fn hess_energy(&self, u: &Vector) -> Result<Matrix> {
        check_dim(self.dim(), u.len())?;
        if is_zero(u) {
            return Err(Error::ZeroVector);
        }
        Ok(match self {
            NormSpec::Euclidean { a } => a.clone(),
            NormSpec::Randers { a, b } => {
                // Hess E = ∇F ∇Fᵀ + F Hess F
                let au = a * u;
                let s = sqrt(u.dot(&au));
                let f = s + b.dot(u);
                let grad_f = &au / s + b;
                let hess_f = a / s - (&au * au.transpose()) / (s * s * s);
                &grad_f * grad_f.transpose() + hess_f * f
            }
            NormSpec::QuarticRoot { q } => {
                let d = u.len();
                let (p, g) = quartic_parts(q, u);
                let mut inner = Matrix::zeros(d, d);
                for qj in q {
                    let qu = qj * u;
                    let s = u.dot(&qu);
                    inner += (&qu * qu.transpose()) * 2.0 + qj * s;
                }
                inner / sqrt(p) - (&g * g.transpose()) * (2.0 / (p * sqrt(p)))
            }
        })
    }
}

/// `P = Σ (uᵀQ_j u)^2` and `g = Σ (uᵀQ_j u) Q_j u`, so that `∇E = g / sqrt(P)`.
fn quartic_parts(q: &[Matrix], u: &Vector) -> (f64, Vector) {
    let mut p = 0.0;
    let mut g = Vector::zeros(u.len());
    for qj in q {
        let qu = qj * u;
        let s = u.dot(&qu);
        p += s * s;
        g += qu * s;
    }
    (p, g)
}

/// Outcome of a sampled Minkowski-axiom check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    pub min_hessian_eigenvalue: f64,
    pub worst_homogeneity_defect: f64,
    pub worst_triangle_defect: f64,
    pub worst_fundamental_defect: f64,
    pub samples_used: usize,
    pub failure_witness: Option<Vector>,
}

/// `x·∇F(u) − F(x)`. Nonpositive for a Minkowski norm, zero iff `x = αu`, `α > 0`.
pub fn fundamental_defect<N: MinkowskiFunction + ?Sized>(norm: &N, u: &Vector, x: &Vector) -> Result<f64> {
    check_dim(norm.dim(), x.len())?;
    if is_zero(x) {
        return Err(Error::ZeroVector);
    }
    let grad = norm.grad_norm(u)?;
    Ok(x.dot(&grad) - norm.eval(x)?)
}

/// Samples directions and checks positivity, homogeneity, strong convexity,
/// the triangle inequality and the fundamental inequality.
///
/// The signed coordinate directions `±e_i` are probed before `n_samples`
/// seeded directions drawn uniformly from the Euclidean unit sphere. Defects
/// are relative. Failures are reported, never raised; evaluation errors on a
/// sample count as a failure at that sample.
pub fn verify_minkowski<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> VerificationReport {
    let d = norm.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut directions = Vec::with_capacity(2 * d + n_samples);
    for i in 0..d {
        for sign in [1.0, -1.0] {
            let mut e = Vector::zeros(d);
            e[i] = sign;
            directions.push(e);
        }
    }
    for _ in 0..n_samples {
        directions.push(sphere_direction(&mut rng, d));
    }

    let mut report = VerificationReport {
        passed: true,
        min_hessian_eigenvalue: f64::INFINITY,
        worst_homogeneity_defect: 0.0,
        worst_triangle_defect: 0.0,
        worst_fundamental_defect: 0.0,
        samples_used: directions.len(),
        failure_witness: None,
    };
    let fail = |report: &mut VerificationReport, u: &Vector| {
        report.passed = false;
        if report.failure_witness.is_none() {
            report.failure_witness = Some(u.clone());
        }
    };

    let n = directions.len();
    for (k, u) in directions.iter().enumerate() {
        let checked = (|| -> Result<()> {
            let fu = norm.eval(u)?;
            if !(fu > 0.0) {
                fail(&mut report, u);
                return Ok(());
            }
            for lambda in HOMOGENEITY_SCALES {
                let defect = (norm.eval(&(u * lambda))? - lambda * fu).abs() / (lambda * fu);
                report.worst_homogeneity_defect = report.worst_homogeneity_defect.max(defect);
                if defect > tol {
                    fail(&mut report, u);
                }
            }
            let eig = min_eigenvalue(&norm.hess_energy(u)?);
            report.min_hessian_eigenvalue = report.min_hessian_eigenvalue.min(eig);
            if !(eig > tol) {
                fail(&mut report, u);
            }

            let x = &directions[(k + 1) % n];
            let fx = norm.eval(x)?;
            if !(fx > 0.0) {
                return Ok(());
            }
            let scale: f64 = rng.random_range(0.1..10.0);
            let y = x * scale;
            let fy = fx * scale;
            let triangle = (norm.eval(&(u + &y))? - fu - fy) / (fu + fy);
            report.worst_triangle_defect = report.worst_triangle_defect.max(triangle);
            if triangle > tol {
                fail(&mut report, u);
            }
            let fundamental = fundamental_defect(norm, u, x)? / fx;
            report.worst_fundamental_defect = report.worst_fundamental_defect.max(fundamental);
            if fundamental > tol {
                fail(&mut report, u);
            }
            Ok(())
        })();
        if checked.is_err() {
            fail(&mut report, u);
        }
    }
    report
}
