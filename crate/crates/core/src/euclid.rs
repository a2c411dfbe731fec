//! Inner products `g_u = Hess E(u)` attached to a Minkowski norm, and the
//! Euclidean submersion they induce along the horizontal cone.
//!
//! Lift derivatives and the subduced Hessian are taken by central finite
//! differences of the solver output, independently of
//! [`crate::minksub::implicit_lift_jacobian`].

use crate::error::{check_dim, Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::minksub::{lift, LinearSurjection, SolverConfig};
use crate::norms::MinkowskiFunction;

/// Relative step for lift Jacobians.
pub const JACOBIAN_STEP: f64 = 1e-5;
/// Relative step for the second differences of the subduced energy.
pub const HESSIAN_STEP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct InnerProductAt {
    pub base_point: Vector,
    pub g: Matrix,
}

impl InnerProductAt {
    pub fn apply(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(&(&self.g * y))
    }
}

pub fn inner_product_at<N: MinkowskiFunction + ?Sized>(norm: &N, u: &Vector) -> Result<InnerProductAt> {
    Ok(InnerProductAt { base_point: u.clone(), g: norm.hess_energy(u)? })
}

fn nonzero(v: &Vector) -> Result<()> {
    if v.iter().all(|x| *x == 0.0) {
        Err(Error::ZeroVector)
    } else {
        Ok(())
    }
}

fn lift_point<N: MinkowskiFunction + ?Sized>(norm: &N, surj: &LinearSurjection, v: &Vector) -> Result<Vector> {
    Ok(lift(norm, surj, v, &SolverConfig::default())?.point)
}

fn subduced_energy<N: MinkowskiFunction + ?Sized>(norm: &N, surj: &LinearSurjection, v: &Vector) -> Result<f64> {
    let f = lift(norm, surj, v, &SolverConfig::default())?.value;
    Ok(0.5 * f * f)
}

/// Central-difference Jacobian of `v ↦ h(v)` with step `fd_step·|v|`.
/// Column `i` approximates `T_v h(e_i)`.
pub fn lift_jacobian<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    surj: &LinearSurjection,
    v: &Vector,
    fd_step: f64,
) -> Result<Matrix> {
    check_dim(surj.target_dim(), v.len())?;
    nonzero(v)?;
    let h = fd_step * v.norm();
    let mut jac = Matrix::zeros(surj.source_dim(), v.len());
    for i in 0..v.len() {
        let mut plus = v.clone();
        let mut minus = v.clone();
        plus[i] += h;
        minus[i] -= h;
        let col = (lift_point(norm, surj, &plus)? - lift_point(norm, surj, &minus)?) / (2.0 * h);
        jac.set_column(i, &col);
    }
    Ok(jac)
}

/// Largest normalized `|g_{h(v)}(Jh·e_i, k_α)|` over kernel columns and
/// coordinate directions.
pub fn horizontality_defect<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    surj: &LinearSurjection,
    v: &Vector,
) -> Result<f64> {
    let jac = lift_jacobian(norm, surj, v, JACOBIAN_STEP)?;
    let g = norm.hess_energy(&lift_point(norm, surj, v)?)?;
    let g_norm = g.norm();
    let mut worst = 0.0_f64;
    for k in surj.kernel().column_iter() {
        let gk = &g * k;
        for col in jac.column_iter() {
            let scale = g_norm * k.norm() * col.norm();
            worst = worst.max(gk.dot(&col).abs() / scale);
        }
    }
    Ok(worst)
}

/// Second derivative `∂²E₂(v)[x, y]` of the subduced energy by the
/// four-point polarization stencil.
pub fn subduced_inner_product<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    surj: &LinearSurjection,
    v: &Vector,
    x: &Vector,
    y: &Vector,
    fd_step: f64,
) -> Result<f64> {
    nonzero(v)?;
    let h = fd_step * v.norm();
    let e = |p: Vector| subduced_energy(norm, surj, &p);
    let pp = e(v + (x + y) * h)?;
    let pm = e(v + (x - y) * h)?;
    let mp = e(v - (x - y) * h)?;
    let mm = e(v - (x + y) * h)?;
    Ok((pp - pm - mp + mm) / (4.0 * h * h))
}

/// `|g²_v(x, y) − g¹_{h(v)}(Jh·x, Jh·y)| / (|x|·|y|)`.
pub fn euclidean_submersion_defect<N: MinkowskiFunction + ?Sized>(
    norm: &N,
    surj: &LinearSurjection,
    v: &Vector,
    x: &Vector,
    y: &Vector,
) -> Result<f64> {
    check_dim(surj.target_dim(), x.len())?;
    check_dim(surj.target_dim(), y.len())?;
    nonzero(x)?;
    nonzero(y)?;
    let lower = subduced_inner_product(norm, surj, v, x, y, HESSIAN_STEP)?;
    let jac = lift_jacobian(norm, surj, v, JACOBIAN_STEP)?;
    let g1 = inner_product_at(norm, &lift_point(norm, surj, v)?)?;
    let upper = g1.apply(&(&jac * x), &(&jac * y));
    Ok((lower - upper).abs() / (x.norm() * y.norm()))
}
