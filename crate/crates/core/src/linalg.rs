//! Small dense helpers shared by the numerical modules.

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

pub(crate) fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn symmetry_defect(m: &Matrix) -> f64 {
    max_abs(&(m - m.transpose()))
}

/// Smallest eigenvalue of the symmetric part of `m`.
pub fn min_eigenvalue(m: &Matrix) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.min()
}

/// Uniform direction on the Euclidean unit sphere of dimension `d`.
pub fn sphere_direction<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vector {
    loop {
        let v = Vector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm(m: &Matrix) -> Matrix {
    let n = m.nrows();
    let norm = m.iter().map(|x| x.abs()).sum::<f64>().max(0.0);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m * scale;
    let mut term = Matrix::identity(n, n);
    let mut sum = Matrix::identity(n, n);
    for k in 1..=20 {
        term = &term * &a / (k as f64);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Exponential of the skew matrix built from a rotation vector, for SO(3).
pub fn rotation3(axis_angle: &Vector) -> Matrix {
    let (x, y, z) = (axis_angle[0], axis_angle[1], axis_angle[2]);
    let skew = Matrix::from_row_slice(3, 3, &[0.0, -z, y, z, 0.0, -x, -y, x, 0.0]);
    expm(&skew)
}

/// Embed a 3x3 rotation as the block `diag(A, 1)` in SO(4).
pub fn block_rotation(a: &Matrix) -> Matrix {
    let mut g = Matrix::identity(4, 4);
    g.view_mut((0, 0), (3, 3)).copy_from(a);
    g
}

pub(crate) fn sqrt(x: f64) -> f64 {
    ComplexField::sqrt(x)
}

pub(crate) fn powf(x: f64, p: f64) -> f64 {
    ComplexField::powf(x, p)
}

pub(crate) fn powi(x: f64, n: i32) -> f64 {
    ComplexField::powi(x, n)
}
