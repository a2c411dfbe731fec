//! Homogeneous nonlinear lifts through a linear surjection `μ: V₁ → V₂`.
//!
//! The lift of `v` is the unique minimizer of `F₁` on the affine fiber
//! `μ⁻¹(v)`; its norm is the subduced norm `F₂(v) = inf { F₁(u) : μ(u) = v }`.
//! Fibers are parametrized as `u(w) = R·v + K·w`, where the columns of `K`
//! span `ker μ` and `R` is a right inverse of `μ`.

use alloc::vec::Vec;

use nalgebra::{Cholesky, QR, SVD};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{max_abs, sphere_direction, Matrix, Vector};
use crate::norms::MinkowskiFunction;

const SURJECTION_TOL: f64 = 1e-12;
const ARMIJO_C: f64 = 1e-4;
const MIN_STEP: f64 = 1e-12;

/// A surjective linear map together with an adapted basis: kernel columns `K`
/// and a linear right inverse `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSurjection {
    m: Matrix,
    k: Matrix,
    r: Matrix,
}

impl LinearSurjection {
    /// Builds `K` as an orthonormal kernel basis and `R` as the
    /// minimum-norm right inverse `Mᵀ(MMᵀ)⁻¹`.
    pub fn from_matrix(m: Matrix) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows == 0 || rows > cols {
            return Err(Error::RankDeficient { rank: rows.min(cols), rows });
        }
        let sv = SVD::new(m.clone(), false, false).singular_values;
        let largest = sv.max();
        let cutoff = 1e-12 * largest.max(1.0) * cols as f64;
        let rank = sv.iter().filter(|s| **s > cutoff).count();
        if rank < rows {
            return Err(Error::RankDeficient { rank, rows });
        }

        // Householder QR of [Mᵀ | I] yields a full orthogonal Q whose first
        // `rows` columns span the row space of M; the rest span ker M.
        let mut augmented = Matrix::zeros(cols, rows + cols);
        augmented.view_mut((0, 0), (cols, rows)).copy_from(&m.transpose());
        augmented.view_mut((0, rows), (cols, cols)).copy_from(&Matrix::identity(cols, cols));
        let q = QR::new(augmented).q();
        let k = q.columns(rows, cols - rows).into_owned();

        let gram = &m * m.transpose();
        let chol = Cholesky::new(gram).ok_or(Error::RankDeficient { rank, rows })?;
        let r = m.transpose() * chol.inverse();
        Self::with_basis(m, k, r)
    }

    /// Uses caller-supplied kernel columns and right inverse, after checking
    /// `M·K = 0`, `M·R = I` and that `[R | K]` is invertible.
    pub fn with_basis(m: Matrix, k: Matrix, r: Matrix) -> Result<Self> {
        let (rows, cols) = m.shape();
        check_dim(cols, k.nrows())?;
        check_dim(cols - rows, k.ncols())?;
        check_dim(cols, r.nrows())?;
        check_dim(rows, r.ncols())?;
        let scale = max_abs(&m).max(1.0);
        if max_abs(&(&m * &k)) > SURJECTION_TOL * scale * max_abs(&k).max(1.0) {
            return Err(Error::InvalidSpec("kernel columns are not annihilated by M".into()));
        }
        if max_abs(&(&m * &r - Matrix::identity(rows, rows))) > SURJECTION_TOL * scale * max_abs(&r).max(1.0) {
            return Err(Error::InvalidSpec("R is not a right inverse of M".into()));
        }
        let mut adapted = Matrix::zeros(cols, cols);
        adapted.view_mut((0, 0), (cols, rows)).copy_from(&r);
        adapted.view_mut((0, rows), (cols, cols - rows)).copy_from(&k);
        let sv = SVD::new(adapted, false, false).singular_values;
        if sv.min() <= 1e-12 * sv.max() {
            return Err(Error::InvalidSpec("[R | K] is singular".into()));
        }
        Ok(LinearSurjection { m, k, r })
    }

    /// Projection of ℝ^`total` onto the coordinates listed in `keep`, with
    /// the complementary unit vectors as kernel basis.
    pub fn coordinate_projection(total: usize, keep: &[usize]) -> Result<Self> {
        let rows = keep.len();
        if keep.iter().any(|&i| i >= total) {
            return Err(Error::InvalidSpec("projection index out of range".into()));
        }
        let m = Matrix::from_fn(rows, total, |i, j| if keep[i] == j { 1.0 } else { 0.0 });
        let rest: Vec<usize> = (0..total).filter(|j| !keep.contains(j)).collect();
        let k = Matrix::from_fn(total, rest.len(), |i, j| if rest[j] == i { 1.0 } else { 0.0 });
        let r = m.transpose();
        Self::with_basis(m, k, r)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn kernel(&self) -> &Matrix {
        &self.k
    }

    pub fn right_inverse(&self) -> &Matrix {
        &self.r
    }

    pub fn source_dim(&self) -> usize {
        self.m.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn kernel_dim(&self) -> usize {
        self.k.ncols()
    }

    pub fn apply(&self, u: &Vector) -> Vector {
        &self.m * u
    }
}

/// Free-function form of [`LinearSurjection::from_matrix`].
pub fn make_surjection(m: Matrix) -> Result<LinearSurjection> {
    LinearSurjection::from_matrix(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tol: 1e-11, max_iter: 100 }
    }
}

/// The fiber minimizer `h(v)` with its norm and solver diagnostics.
///
/// `residual` is the sup-norm of `Kᵀ∇E₁` on the normalized problem `|v|₂ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftSolution {
    pub point: Vector,
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set for `v = 0`, where `h(0) = 0` is returned without solving.
    pub degenerate: bool,
}

struct FiberMinimum {
    w: Vector,
    residual: f64,
    iterations: usize,
}

/// Damped Newton with Armijo backtracking on `w ↦ E(base + K·w)`.
fn minimize_on_fiber<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    base: &Vector,
    k: &Matrix,
    w0: Vector,
    cfg: &SolverConfig,
) -> Result<FiberMinimum> {
    let mut w = w0;
    let point = |w: &Vector| base + k * w;
    let mut residual = f64::INFINITY;
    for it in 0..=cfg.max_iter {
        let u = point(&w);
        let energy = norm.energy(&u)?;
        let grad = k.transpose() * norm.grad_energy(&u)?;
        residual = grad.amax();
        if residual <= cfg.tol * energy.max(1.0) {
            return Ok(FiberMinimum { w, residual, iterations: it });
        }
        if it == cfg.max_iter {
            break;
        }
        let hess = k.transpose() * norm.hess_energy(&u)? * k;
        let chol = Cholesky::new(hess).ok_or(Error::NonConvexEncountered)?;
        let dir = -chol.solve(&grad);
        let slope = grad.dot(&dir);
        if !(slope < 0.0) {
            return Err(Error::NonConvexEncountered);
        }
        // Below the rounding noise of E the line search cannot discriminate;
        // the iterate is then inside the quadratic convergence region.
        if -slope <= 100.0 * f64::EPSILON * energy.abs() {
            w += dir;
            continue;
        }
        let slack = 4.0 * f64::EPSILON * energy.abs();
        let mut t = 1.0;
        loop {
            let trial = &w + &dir * t;
            let e_trial = norm.energy(&point(&trial))?;
            if e_trial <= energy + ARMIJO_C * t * slope + slack {
                w = trial;
                break;
            }
            t *= 0.5;
            if t < MIN_STEP {
                return Err(Error::MaxIterations { iterations: it, residual });
            }
        }
    }
    Err(Error::MaxIterations { iterations: cfg.max_iter, residual })
}

/// Computes `h(v)`: normalizes `v`, minimizes on the fiber starting from
/// `w = 0`, and rescales by `|v|₂`.
pub fn lift<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    surj: &LinearSurjection,
    v: &Vector,
    cfg: &SolverConfig,
) -> Result<LiftSolution> {
    lift_with_start(norm, surj, v, cfg, &Vector::zeros(surj.kernel_dim()))
}

/// As [`lift`], starting the normalized Newton iteration from kernel
/// coordinates `w0`.
pub fn lift_with_start<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    surj: &LinearSurjection,
    v: &Vector,
    cfg: &SolverConfig,
    w0: &Vector,
) -> Result<LiftSolution> {
    check_dim(norm.dim(), surj.source_dim())?;
    check_dim(surj.target_dim(), v.len())?;
    check_dim(surj.kernel_dim(), w0.len())?;
    let scale = v.norm();
    if scale == 0.0 {
        return Ok(LiftSolution {
            point: Vector::zeros(surj.source_dim()),
            value: 0.0,
            residual: 0.0,
            iterations: 0,
            converged: true,
            degenerate: true,
        });
    }
    let base = surj.right_inverse() * (v / scale);
    let min = minimize_on_fiber(norm, &base, surj.kernel(), w0.clone(), cfg)?;
    let unit_point = base + surj.kernel() * &min.w;
    let unit_value = norm.eval(&unit_point)?;
    if !(unit_value > 0.0) {
        return Err(Error::NonConvexEncountered);
    }
    let value = unit_value * scale;
    Ok(LiftSolution {
        point: unit_point * scale,
        value,
        residual: min.residual,
        iterations: min.iterations,
        converged: true,
        degenerate: false,
    })
}

/// `F₂(v) = F₁(h(v))`, with `F₂(0) = 0`.
pub fn subduced_norm<N: MinkowskiFunction + ?Sized>(norm: &N, surj: &LinearSurjection, v: &Vector) -> Result<f64> {
    Ok(lift(norm, surj, v, &SolverConfig::default())?.value)
}

/// `|h(λv) − λh(v)|₂ / (λ|h(v)|₂)`.
pub fn homogeneity_defect<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    surj: &LinearSurjection,
    v: &Vector,
    lambda: f64,
) -> Result<f64> {
    if v.iter().all(|x| *x == 0.0) {
        return Err(Error::ZeroVector);
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidSpec("scaling factor must be positive".into()));
    }
    let cfg = SolverConfig::default();
    let base = lift(norm, surj, v, &cfg)?.point;
    let scaled = lift(norm, surj, &(v * lambda), &cfg)?.point;
    Ok((scaled - &base * lambda).norm() / (lambda * base.norm()))
}

/// Euler identity `v^i ∂h/∂v^i = h` for the lift, with the directional
/// derivative taken by central differences of step `step·|v|`. Returns the
/// relative defect.
pub fn euler_defect<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    surj: &LinearSurjection,
    v: &Vector,
    step: f64,
) -> Result<f64> {
    if v.iter().all(|x| *x == 0.0) {
        return Err(Error::ZeroVector);
    }
    let cfg = SolverConfig::default();
    let h = step;
    let plus = lift(norm, surj, &(v * (1.0 + h)), &cfg)?.point;
    let minus = lift(norm, surj, &(v * (1.0 - h)), &cfg)?.point;
    let center = lift(norm, surj, v, &cfg)?.point;
    let directional = (plus - minus) / (2.0 * h);
    Ok((directional - &center).norm() / center.norm())
}

/// Derivative of the lift at a lifted point `h(v)`, from the implicit
/// function theorem applied to `Kᵀ∇E₁(R·v + K·w) = 0`:
/// `Jh = R − K (KᵀGK)⁻¹ KᵀG R` with `G = Hess E₁(h(v))`.
pub fn implicit_lift_jacobian<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    surj: &LinearSurjection,
    lifted: &Vector,
) -> Result<Matrix> {
    let g = norm.hess_energy(lifted)?;
    let k = surj.kernel();
    let r = surj.right_inverse();
    if k.ncols() == 0 {
        return Ok(r.clone());
    }
    let chol = Cholesky::new(k.transpose() * &g * k).ok_or(Error::NonConvexEncountered)?;
    let correction = chol.solve(&(k.transpose() * &g * r));
    Ok(r - k * correction)
}

/// The subduced norm `F₂` of a source norm, usable wherever a
/// [`MinkowskiFunction`] is expected.
///
/// `∇E₂(v) = Rᵀ∇E₁(h(v))` because `∇E₁(h(v))` annihilates `ker μ`, and
/// `Hess E₂(v) = JhᵀG Jh` with `Jh` from [`implicit_lift_jacobian`].
#[derive(Debug, Clone)]
pub struct SubducedNorm<N> {
    pub source: N,
    pub surj: LinearSurjection,
    pub cfg: SolverConfig,
}

impl<N: MinkowskiFunction> SubducedNorm<N> {
    pub fn new(source: N, surj: LinearSurjection) -> Result<Self> {
        check_dim(source.dim(), surj.source_dim())?;
        Ok(SubducedNorm { source, surj, cfg: SolverConfig::default() })
    }

    pub fn lift(&self, v: &Vector) -> Result<LiftSolution> {
        lift(&self.source, &self.surj, v, &self.cfg)
    }

    fn lifted_nonzero(&self, v: &Vector) -> Result<Vector> {
        let sol = self.lift(v)?;
        if sol.degenerate {
            return Err(Error::ZeroVector);
        }
        Ok(sol.point)
    }
}

impl<N: MinkowskiFunction> MinkowskiFunction for SubducedNorm<N> {
    fn dim(&self) -> usize {
        self.surj.target_dim()
    }

    fn eval(&self, v: &Vector) -> Result<f64> {
        Ok(self.lift(v)?.value)
    }

    fn grad_energy(&self, v: &Vector) -> Result<Vector> {
        let point = self.lifted_nonzero(v)?;
        Ok(self.surj.right_inverse().transpose() * self.source.grad_energy(&point)?)
    }

    fn hess_energy(&self, v: &Vector) -> Result<Matrix> {
        let point = self.lifted_nonzero(v)?;
        let jac = implicit_lift_jacobian(&self.source, &self.surj, &point)?;
        let g = self.source.hess_energy(&point)?;
        Ok(jac.transpose() * g * &jac)
    }
}

/// Result of checking that `μ` is a Minkowski submersion onto a target norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmersionReport {
    pub passed: bool,
    /// Largest `|F₂(v) − inf F₁|` over sampled `v`, relative to the subduced value.
    pub worst_value_mismatch: f64,
    /// Largest positive part of `F₂(μu) − F₁(u)` over sampled `u`, relative to `F₁(u)`.
    pub worst_inequality_defect: f64,
    pub samples_used: usize,
    pub failure_witness: Option<Vector>,
}

/// Checks that `target` agrees with the subduced norm of `source` on sampled
/// `v ∈ V₂`, and that `target(μu) ≤ source(u)` on sampled `u ∈ V₁`.
pub fn verify_submersion<N, T>(
    source: &N,
    surj: &LinearSurjection,
    target: &T,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> SubmersionReport
where
    N: MinkowskiFunction + ?Sized,
    T: MinkowskiFunction + ?Sized,
{
    let d2 = surj.target_dim();
    let d1 = surj.source_dim();
    let mut report = SubmersionReport {
        passed: true,
        worst_value_mismatch: 0.0,
        worst_inequality_defect: 0.0,
        samples_used: 0,
        failure_witness: None,
    };
    if target.dim() != d2 || source.dim() != d1 {
        report.passed = false;
        return report;
    }
    let fail = |report: &mut SubmersionReport, x: &Vector| {
        report.passed = false;
        if report.failure_witness.is_none() {
            report.failure_witness = Some(x.clone());
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut targets: Vec<Vector> = (0..d2)
        .flat_map(|i| {
            [1.0, -1.0].map(|s| {
                let mut e = Vector::zeros(d2);
                e[i] = s;
                e
            })
        })
        .collect();
    targets.extend((0..n_samples).map(|_| sphere_direction(&mut rng, d2)));
    for v in &targets {
        report.samples_used += 1;
        match (target.eval(v), subduced_norm(source, surj, v)) {
            (Ok(t), Ok(s)) => {
                let mismatch = (t - s).abs() / s.abs().max(f64::MIN_POSITIVE);
                report.worst_value_mismatch = report.worst_value_mismatch.max(mismatch);
                if mismatch > tol {
                    fail(&mut report, v);
                }
            }
            _ => fail(&mut report, v),
        }
    }
    for _ in 0..n_samples.max(1) {
        let u = sphere_direction(&mut rng, d1);
        report.samples_used += 1;
        match (target.eval(&surj.apply(&u)), source.eval(&u)) {
            (Ok(t), Ok(s)) => {
                let defect = ((t - s) / s.abs().max(f64::MIN_POSITIVE)).max(0.0);
                report.worst_inequality_defect = report.worst_inequality_defect.max(defect);
                if defect > tol {
                    fail(&mut report, &u);
                }
            }
            _ => fail(&mut report, &u),
        }
    }
    report
}

/// Exhaustive grid search for `inf F₁` on the fiber over `v`, followed by a
/// pattern search that halves the spacing ten times around the best point.
///
/// Uses only norm evaluations, never derivatives, so it serves as an
/// independent check on [`subduced_norm`]. Grid cost is
/// `grid_steps^(kernel dimension)`.
pub fn brute_force_subduced<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    surj: &LinearSurjection,
    v: &Vector,
    grid_radius: f64,
    grid_steps: usize,
) -> Result<f64> {
    check_dim(surj.target_dim(), v.len())?;
    let base = surj.right_inverse() * v;
    let k = surj.kernel();
    let dim = k.ncols();
    let value = |w: &Vector| norm.eval(&(&base + k * w));
    if dim == 0 {
        return norm.eval(&base);
    }

    let steps = grid_steps.max(2);
    let mut spacing = 2.0 * grid_radius / (steps - 1) as f64;
    let mut best_w = Vector::zeros(dim);
    let mut best = f64::INFINITY;
    let mut index = alloc::vec![0usize; dim];
    'grid: loop {
        let w = Vector::from_fn(dim, |i, _| -grid_radius + spacing * index[i] as f64);
        let f = value(&w)?;
        if f < best {
            best = f;
            best_w = w;
        }
        for slot in index.iter_mut() {
            *slot += 1;
            if *slot < steps {
                continue 'grid;
            }
            *slot = 0;
        }
        break;
    }

    let neighbours = 3usize.pow(dim as u32);
    for _ in 0..10 {
        spacing *= 0.5;
        for _ in 0..1000 {
            let mut improved = false;
            for code in 0..neighbours {
                let mut c = code;
                let offset = Vector::from_fn(dim, |_, _| {
                    let digit = (c % 3) as f64 - 1.0;
                    c /= 3;
                    digit * spacing
                });
                let w = &best_w + offset;
                let f = value(&w)?;
                if f < best {
                    best = f;
                    best_w = w;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
    }
    Ok(best)
}
