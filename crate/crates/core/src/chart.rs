//! Finsler functions on a trivialized bundle chart `(x, y)` with velocities
//! `(v, w)`, and the splitting they induce through the projection `(v, w) ↦ v`.
//!
//! A [`ChartFinsler`] is a base [`NormSpec`] on `n_x + n_y` velocity
//! coordinates whose coefficients may be replaced by polynomials in `(x, y)`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{powi, Matrix, Vector};
use crate::minksub::{lift, LinearSurjection, SolverConfig, SubducedNorm};
use crate::norms::{MinkowskiFunction, NormSpec};

/// Relative step for derivatives in the chart coordinates.
pub const CHART_STEP: f64 = 1e-5;
/// Default threshold for certifying spray tangency.
pub const TANGENCY_TOL: f64 = 1e-8;

/// A coefficient of a [`NormSpec`] that a polynomial can drive.
/// Matrix targets also set the symmetric partner entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffTarget {
    A(usize, usize),
    B(usize),
    Q(usize, usize, usize),
}

impl CoeffTarget {
    /// Parses `A[i][j]`, `b[i]` or `Q[j][i][k]`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("unrecognized coefficient target `{s}`"));
        let s = s.trim();
        let (head, rest) = s.split_at(s.find('[').ok_or_else(bad)?);
        let mut idx = Vec::new();
        let mut rest = rest;
        while !rest.is_empty() {
            let inner = rest.strip_prefix('[').ok_or_else(bad)?;
            let close = inner.find(']').ok_or_else(bad)?;
            idx.push(inner[..close].trim().parse::<usize>().map_err(|_| bad())?);
            rest = &inner[close + 1..];
        }
        match (head, idx.as_slice()) {
            ("A", [i, j]) => Ok(CoeffTarget::A(*i, *j)),
            ("b", [i]) => Ok(CoeffTarget::B(*i)),
            ("Q", [j, i, k]) => Ok(CoeffTarget::Q(*j, *i, *k)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for CoeffTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffTarget::A(i, j) => write!(f, "A[{i}][{j}]"),
            CoeffTarget::B(i) => write!(f, "b[{i}]"),
            CoeffTarget::Q(j, i, k) => write!(f, "Q[{j}][{i}][{k}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub powers_x: Vec<u32>,
    pub powers_y: Vec<u32>,
    pub coef: f64,
}

impl Monomial {
    fn eval(&self, x: &Vector, y: &Vector) -> f64 {
        let part = |powers: &[u32], z: &Vector| {
            powers.iter().zip(z.iter()).map(|(p, zi)| powi(*zi, *p as i32)).product::<f64>()
        };
        self.coef * part(&self.powers_x, x) * part(&self.powers_y, y)
    }
}

/// Replaces one coefficient by `Σ coef · x^powers_x · y^powers_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyDep {
    pub target: CoeffTarget,
    pub monomials: Vec<Monomial>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartFinsler {
    pub n_x: usize,
    pub n_y: usize,
    pub base: NormSpec,
    pub deps: Vec<PolyDep>,
    /// Chart box `[lo, hi]` per base coordinate.
    pub x_box: Vec<(f64, f64)>,
    /// Chart box `[lo, hi]` per fiber coordinate.
    pub y_box: Vec<(f64, f64)>,
}

impl ChartFinsler {
    /// Builds the family and checks the structural invariants at the corners
    /// and center of the chart box.
    pub fn new(n_x: usize, n_y: usize, base: NormSpec, deps: Vec<PolyDep>) -> Result<Self> {
        let cf = ChartFinsler {
            n_x,
            n_y,
            base,
            deps,
            x_box: alloc::vec![(-1.0, 1.0); n_x],
            y_box: alloc::vec![(-1.0, 1.0); n_y],
        };
        cf.validate()?;
        Ok(cf)
    }

    pub fn with_box(mut self, x_box: Vec<(f64, f64)>, y_box: Vec<(f64, f64)>) -> Result<Self> {
        self.x_box = x_box;
        self.y_box = y_box;
        self.validate()?;
        Ok(self)
    }

    pub fn constant(n_x: usize, n_y: usize, base: NormSpec) -> Result<Self> {
        Self::new(n_x, n_y, base, Vec::new())
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.n_x + self.n_y, self.base.dim())?;
        check_dim(self.n_x, self.x_box.len())?;
        check_dim(self.n_y, self.y_box.len())?;
        for dep in &self.deps {
            for m in &dep.monomials {
                if m.powers_x.len() > self.n_x || m.powers_y.len() > self.n_y {
                    return Err(Error::InvalidSpec(format!("monomial for {} has too many exponents", dep.target)));
                }
            }
        }
        for x in box_points(&self.x_box) {
            for y in box_points(&self.y_box) {
                self.at(&x, &y)?;
            }
        }
        Ok(())
    }

    pub fn velocity_dim(&self) -> usize {
        self.n_x + self.n_y
    }

    /// The norm on the tangent space at chart point `(x, y)`.
    pub fn at(&self, x: &Vector, y: &Vector) -> Result<NormSpec> {
        check_dim(self.n_x, x.len())?;
        check_dim(self.n_y, y.len())?;
        let mut spec = self.base.clone();
        for dep in &self.deps {
            let value: f64 = dep.monomials.iter().map(|m| m.eval(x, y)).sum();
            set_coefficient(&mut spec, dep.target, value)?;
        }
        spec.check_structure()?;
        Ok(spec)
    }

    /// Projection of velocities `(v, w)` onto `v`.
    pub fn projection(&self) -> LinearSurjection {
        let keep: Vec<usize> = (0..self.n_x).collect();
        LinearSurjection::coordinate_projection(self.velocity_dim(), &keep)
            .expect("coordinate projection onto a prefix is always valid")
    }

    fn energy(&self, x: &Vector, y: &Vector, u: &Vector) -> Result<f64> {
        self.at(x, y)?.energy(u)
    }

    /// The lifted velocity `(v, h(x, y, v))`.
    pub fn lifted_velocity(&self, x: &Vector, y: &Vector, v: &Vector) -> Result<Vector> {
        check_dim(self.n_x, v.len())?;
        let spec = self.at(x, y)?;
        Ok(lift(&spec, &self.projection(), v, &SolverConfig::default())?.point)
    }
}

fn set_coefficient(spec: &mut NormSpec, target: CoeffTarget, value: f64) -> Result<()> {
    let d = spec.dim();
    let out_of_range = || Error::InvalidSpec(format!("coefficient {target} out of range"));
    let set_sym = |m: &mut Matrix, i: usize, j: usize| {
        if i >= d || j >= d {
            return Err(out_of_range());
        }
        m[(i, j)] = value;
        m[(j, i)] = value;
        Ok(())
    };
    match (spec, target) {
        (NormSpec::Euclidean { a } | NormSpec::Randers { a, .. }, CoeffTarget::A(i, j)) => set_sym(a, i, j),
        (NormSpec::Randers { b, .. }, CoeffTarget::B(i)) => {
            if i >= d {
                return Err(out_of_range());
            }
            b[i] = value;
            Ok(())
        }
        (NormSpec::QuarticRoot { q }, CoeffTarget::Q(j, i, k)) => {
            let m = q.get_mut(j).ok_or_else(out_of_range)?;
            set_sym(m, i, k)
        }
        (spec, target) => {
            Err(Error::InvalidSpec(format!("coefficient {target} does not exist for the {} family", spec.family())))
        }
    }
}

/// Corners and center of a box.
fn box_points(bounds: &[(f64, f64)]) -> Vec<Vector> {
    let n = bounds.len();
    let mut points = Vec::with_capacity((1 << n) + 1);
    points.push(Vector::from_fn(n, |i, _| 0.5 * (bounds[i].0 + bounds[i].1)));
    if n < 16 {
        for mask in 0..(1usize << n) {
            points.push(Vector::from_fn(n, |i, _| if mask & (1 << i) == 0 { bounds[i].0 } else { bounds[i].1 }));
        }
    }
    points
}

fn nonzero(v: &Vector) -> Result<()> {
    if v.iter().all(|x| *x == 0.0) {
        Err(Error::ZeroVector)
    } else {
        Ok(())
    }
}

/// The splitting coefficients `h^α(x, y, v)`: fiber components of the lift.
pub fn splitting_coeffs(cf: &ChartFinsler, x: &Vector, y: &Vector, v: &Vector) -> Result<Vector> {
    nonzero(v)?;
    let lifted = cf.lifted_velocity(x, y, v)?;
    Ok(lifted.rows(cf.n_x, cf.n_y).into_owned())
}

/// Relative defect of `v^i ∂h^α/∂v^i = h^α`, by a central difference along `v`.
pub fn euler_defect(cf: &ChartFinsler, x: &Vector, y: &Vector, v: &Vector) -> Result<f64> {
    nonzero(v)?;
    let h = CHART_STEP;
    let plus = splitting_coeffs(cf, x, y, &(v * (1.0 + h)))?;
    let minus = splitting_coeffs(cf, x, y, &(v * (1.0 - h)))?;
    let center = splitting_coeffs(cf, x, y, v)?;
    let directional = (plus - minus) / (2.0 * h);
    Ok((directional - &center).norm() / center.norm().max(v.norm()))
}

/// `(∂E/∂y^α)(x, y, v, h(x, y, v))`, differentiating only the chart
/// dependence of the norm while the lifted velocity is held fixed.
pub fn tangency_defect(cf: &ChartFinsler, x: &Vector, y: &Vector, v: &Vector) -> Result<Vector> {
    nonzero(v)?;
    let u = cf.lifted_velocity(x, y, v)?;
    let step = CHART_STEP * y.norm().max(1.0);
    let mut out = Vector::zeros(cf.n_y);
    for alpha in 0..cf.n_y {
        let mut plus = y.clone();
        let mut minus = y.clone();
        plus[alpha] += step;
        minus[alpha] -= step;
        out[alpha] = (cf.energy(x, &plus, &u)? - cf.energy(x, &minus, &u)?) / (2.0 * step);
    }
    Ok(out)
}

fn require_tangency(cf: &ChartFinsler, x: &Vector, y: &Vector, v: &Vector, tol: f64) -> Result<()> {
    let defect = tangency_defect(cf, x, y, v)?.amax();
    if defect > tol {
        Err(Error::TangencyViolated { defect })
    } else {
        Ok(())
    }
}

/// `|h(x, y1, v) − h(x, y2, v)|`, after certifying tangency at both points.
pub fn fiber_independence_defect(cf: &ChartFinsler, x: &Vector, y1: &Vector, y2: &Vector, v: &Vector) -> Result<f64> {
    require_tangency(cf, x, y1, v, TANGENCY_TOL)?;
    require_tangency(cf, x, y2, v, TANGENCY_TOL)?;
    Ok((splitting_coeffs(cf, x, y1, v)? - splitting_coeffs(cf, x, y2, v)?).norm())
}

/// Reference fiber point: the center of the chart box.
pub fn reference_fiber_point(cf: &ChartFinsler) -> Vector {
    Vector::from_fn(cf.n_y, |i, _| 0.5 * (cf.y_box[i].0 + cf.y_box[i].1))
}

/// The subduced Minkowski norm on the base tangent space at `x`, after
/// certifying tangency at the corners and center of the fiber box.
pub fn subduced_at(cf: &ChartFinsler, x: &Vector, v: &Vector, tol: f64) -> Result<SubducedNorm<NormSpec>> {
    for y in box_points(&cf.y_box) {
        require_tangency(cf, x, &y, v, tol)?;
    }
    let spec = cf.at(x, &reference_fiber_point(cf))?;
    SubducedNorm::new(spec, cf.projection())
}

/// `F₂(x, v) = F₁(x, y₀, v, h(x, y₀, v))`.
pub fn subduced_finsler(cf: &ChartFinsler, x: &Vector, v: &Vector, tol: f64) -> Result<f64> {
    check_dim(cf.n_x, v.len())?;
    if v.iter().all(|c| *c == 0.0) {
        return Ok(0.0);
    }
    subduced_at(cf, x, v, tol)?.eval(v)
}
