//! Structure constants, the Killing form, adjoint actions and Ad-invariant
//! functions, together with the reductive pair `so(4) = so(3) ⊕ 𝔪` whose
//! quotient is the three-sphere.
//!
//! Structure constants are stored as `C^c_{ab}` with `[E_a, E_b] = C^c_{ab} E_c`.

use alloc::vec::Vec;

use nalgebra::LU;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{max_abs, powi, sphere_direction, Matrix, Vector};
use crate::minksub::{LiftSolution, LinearSurjection, SubducedNorm};
use crate::norms::{MinkowskiFunction, NormSpec};

const ALGEBRA_TOL: f64 = 1e-12;
const GROUP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<f64>,
    rep: Option<Vec<Matrix>>,
}

impl StructureConstants {
    /// `c[(c * dim + a) * dim + b] = C^c_{ab}`. Antisymmetry and the Jacobi
    /// identity are checked to `1e-12`.
    pub fn new(dim: usize, c: Vec<f64>) -> Result<Self> {
        check_dim(dim * dim * dim, c.len())?;
        let sc = StructureConstants { dim, c, rep: None };
        if sc.antisymmetry_defect() > ALGEBRA_TOL || sc.jacobi_defect() > ALGEBRA_TOL {
            return Err(Error::InvalidSpec("structure constants do not define a Lie algebra".into()));
        }
        Ok(sc)
    }

    /// Derives the constants from a faithful matrix representation by
    /// expanding each commutator in the basis.
    pub fn from_rep(rep: Vec<Matrix>) -> Result<Self> {
        let dim = rep.len();
        let gram = rep_gram(&rep);
        let lu = LU::new(gram);
        if lu.determinant().abs() <= ALGEBRA_TOL {
            return Err(Error::InvalidSpec("representation matrices are linearly dependent".into()));
        }
        let mut c = alloc::vec![0.0; dim * dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let comm = &rep[a] * &rep[b] - &rep[b] * &rep[a];
                let coords = lu.solve(&frobenius_rhs(&rep, &comm)).expect("gram matrix is invertible");
                for k in 0..dim {
                    c[(k * dim + a) * dim + b] = coords[k];
                }
            }
        }
        let mut sc = StructureConstants::new(dim, c)?;
        sc.rep = Some(rep);
        if sc.rep_defect().unwrap_or(0.0) > ALGEBRA_TOL {
            return Err(Error::InvalidSpec("representation is not closed under commutators".into()));
        }
        Ok(sc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `C^c_{ab}`.
    pub fn constant(&self, c: usize, a: usize, b: usize) -> f64 {
        self.c[(c * self.dim + a) * self.dim + b]
    }

    pub fn rep(&self) -> Option<&[Matrix]> {
        self.rep.as_deref()
    }

    pub fn raw_constants(&self) -> &[f64] {
        &self.c
    }

    pub fn basis_vector(&self, a: usize) -> Vector {
        let mut e = Vector::zeros(self.dim);
        e[a] = 1.0;
        e
    }

    pub fn bracket(&self, xi: &Vector, eta: &Vector) -> Result<Vector> {
        check_dim(self.dim, xi.len())?;
        check_dim(self.dim, eta.len())?;
        Ok(self.ad_matrix(xi)? * eta)
    }

    /// Matrix of `ad_ξ`: `(ad_ξ)^c_b = C^c_{ab} ξ^a`.
    pub fn ad_matrix(&self, xi: &Vector) -> Result<Matrix> {
        check_dim(self.dim, xi.len())?;
        let n = self.dim;
        Ok(Matrix::from_fn(n, n, |c, b| (0..n).map(|a| self.constant(c, a, b) * xi[a]).sum()))
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    worst = worst.max((self.constant(c, a, b) + self.constant(c, b, a)).abs());
                }
            }
        }
        worst
    }

    /// Largest `|Σ_d C^e_{ad}C^d_{bc} + C^e_{bd}C^d_{ca} + C^e_{cd}C^d_{ab}|`.
    pub fn jacobi_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let s: f64 = (0..n)
                            .map(|d| {
                                self.constant(e, a, d) * self.constant(d, b, c)
                                    + self.constant(e, b, d) * self.constant(d, c, a)
                                    + self.constant(e, c, d) * self.constant(d, a, b)
                            })
                            .sum();
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest entry of `[rep_a, rep_b] − C^c_{ab} rep_c`.
    pub fn rep_defect(&self) -> Option<f64> {
        let rep = self.rep.as_ref()?;
        let n = self.dim;
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                let mut diff = &rep[a] * &rep[b] - &rep[b] * &rep[a];
                for (c, rc) in rep.iter().enumerate() {
                    diff -= rc * self.constant(c, a, b);
                }
                worst = worst.max(max_abs(&diff));
            }
        }
        Some(worst)
    }

    /// `κ_{ab} = tr(ad_{E_a} ∘ ad_{E_b})`.
    pub fn killing_matrix(&self) -> Matrix {
        let n = self.dim;
        let ads: Vec<Matrix> =
            (0..n).map(|a| self.ad_matrix(&self.basis_vector(a)).expect("basis has algebra dimension")).collect();
        Matrix::from_fn(n, n, |a, b| (&ads[a] * &ads[b]).trace())
    }

    pub fn killing(&self, xi: &Vector, eta: &Vector) -> Result<f64> {
        check_dim(self.dim, xi.len())?;
        check_dim(self.dim, eta.len())?;
        Ok((self.ad_matrix(xi)? * self.ad_matrix(eta)?).trace())
    }

    /// The constant `s` with `−κ(E_a, E_b) = s δ_{ab}`, when the basis is
    /// `κ`-orthogonal with equal norms.
    pub fn killing_normalization(&self) -> Option<f64> {
        let k = self.killing_matrix();
        let s = -k[(0, 0)];
        let n = self.dim;
        let scaled = Matrix::identity(n, n) * s + &k;
        (max_abs(&scaled) <= ALGEBRA_TOL * s.abs().max(1.0) && s != 0.0).then_some(s)
    }

    fn killing_lu(&self) -> Result<LU<f64, nalgebra::Dyn, nalgebra::Dyn>> {
        let k = self.killing_matrix();
        let scale = max_abs(&k);
        let lu = LU::new(k);
        let det = lu.determinant();
        if scale == 0.0 || det.abs() <= 1e-12 * powi(scale, self.dim as i32) {
            return Err(Error::SingularKilling);
        }
        Ok(lu)
    }

    /// `ξ^♭ = κ(ξ, ·)` in dual-basis coordinates.
    pub fn flat(&self, xi: &Vector) -> Result<Vector> {
        check_dim(self.dim, xi.len())?;
        self.killing_lu()?;
        Ok(self.killing_matrix() * xi)
    }

    pub fn sharp(&self, theta: &Vector) -> Result<Vector> {
        check_dim(self.dim, theta.len())?;
        self.killing_lu()?.solve(theta).ok_or(Error::SingularKilling)
    }

    /// Coordinates of a matrix in the span of the representation.
    pub fn rep_coordinates(&self, m: &Matrix) -> Result<Vector> {
        let rep = self.require_rep()?;
        LU::new(rep_gram(rep))
            .solve(&frobenius_rhs(rep, m))
            .ok_or_else(|| Error::InvalidSpec("representation matrices are linearly dependent".into()))
    }

    pub fn rep_matrix(&self, xi: &Vector) -> Result<Matrix> {
        check_dim(self.dim, xi.len())?;
        let rep = self.require_rep()?;
        let n = rep[0].nrows();
        Ok(rep.iter().zip(xi.iter()).fold(Matrix::zeros(n, n), |acc, (r, x)| acc + r * *x))
    }

    fn require_rep(&self) -> Result<&[Matrix]> {
        self.rep.as_deref().ok_or_else(|| Error::InvalidSpec("no matrix representation attached".into()))
    }

    /// Checks `gᵀg = I` and `det g = 1` for the representation's matrix group.
    pub fn check_group_element(&self, g: &Matrix) -> Result<()> {
        let rep = self.require_rep()?;
        let n = rep[0].nrows();
        if g.shape() != (n, n) {
            return Err(Error::NotInGroup { defect: f64::INFINITY });
        }
        let orth = max_abs(&(g.transpose() * g - Matrix::identity(n, n)));
        let det = (g.clone().determinant() - 1.0).abs();
        let defect = orth.max(det);
        if defect > GROUP_TOL {
            return Err(Error::NotInGroup { defect });
        }
        Ok(())
    }

    /// Matrix of `Ad_g` in the basis.
    pub fn adjoint_matrix(&self, g: &Matrix) -> Result<Matrix> {
        self.check_group_element(g)?;
        let rep = self.require_rep()?;
        let n = self.dim;
        let g_inv = g.transpose();
        let mut out = Matrix::zeros(n, n);
        for (b, rb) in rep.iter().enumerate() {
            out.set_column(b, &self.rep_coordinates(&(g * rb * &g_inv))?);
        }
        Ok(out)
    }

    /// `Ad_g ξ`: coordinates of `g (ξ^a rep_a) g⁻¹`.
    pub fn adjoint(&self, g: &Matrix, xi: &Vector) -> Result<Vector> {
        check_dim(self.dim, xi.len())?;
        Ok(self.adjoint_matrix(g)? * xi)
    }

    /// `Ad*_g θ = θ ∘ Ad_{g⁻¹}`.
    pub fn coadjoint(&self, g: &Matrix, theta: &Vector) -> Result<Vector> {
        check_dim(self.dim, theta.len())?;
        Ok(self.adjoint_matrix(&g.transpose())?.transpose() * theta)
    }
}

fn rep_gram(rep: &[Matrix]) -> Matrix {
    let n = rep.len();
    Matrix::from_fn(n, n, |a, b| rep[a].dot(&rep[b]))
}

fn frobenius_rhs(rep: &[Matrix], m: &Matrix) -> Vector {
    Vector::from_fn(rep.len(), |a, _| rep[a].dot(m))
}

/// A function on the Lie algebra with an analytic gradient.
pub trait ScalarField {
    fn dim(&self) -> usize;
    fn value(&self, w: &Vector) -> Result<f64>;
    fn gradient(&self, w: &Vector) -> Result<Vector>;
}

/// `w ↦ wᵀ S w` for symmetric `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm(pub Matrix);

impl ScalarField for QuadraticForm {
    fn dim(&self) -> usize {
        self.0.nrows()
    }

    fn value(&self, w: &Vector) -> Result<f64> {
        check_dim(self.dim(), w.len())?;
        Ok(w.dot(&(&self.0 * w)))
    }

    fn gradient(&self, w: &Vector) -> Result<Vector> {
        check_dim(self.dim(), w.len())?;
        Ok((&self.0 + self.0.transpose()) * w)
    }
}

/// `w ↦ θ·w`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm(pub Vector);

impl ScalarField for LinearForm {
    fn dim(&self) -> usize {
        self.0.len()
    }

    fn value(&self, w: &Vector) -> Result<f64> {
        check_dim(self.dim(), w.len())?;
        Ok(self.0.dot(w))
    }

    fn gradient(&self, w: &Vector) -> Result<Vector> {
        check_dim(self.dim(), w.len())?;
        Ok(self.0.clone())
    }
}

impl ScalarField for NormSpec {
    fn dim(&self) -> usize {
        NormSpec::dim(self)
    }

    fn value(&self, w: &Vector) -> Result<f64> {
        self.eval(w)
    }

    fn gradient(&self, w: &Vector) -> Result<Vector> {
        self.grad_norm(w)
    }
}

/// `r_a = C^c_{ab} w^b ∂f/∂w^c`; vanishes identically iff `f` is Ad-invariant.
pub fn ad_invariance_residual<F: ScalarField + ?Sized>(sc: &StructureConstants, f: &F, w: &Vector) -> Result<Vector> {
    check_dim(sc.dim(), f.dim())?;
    check_dim(sc.dim(), w.len())?;
    let grad = f.gradient(w)?;
    let n = sc.dim();
    Ok(Vector::from_fn(n, |a, _| {
        let mut s = 0.0;
        for b in 0..n {
            for c in 0..n {
                s += sc.constant(c, a, b) * w[b] * grad[c];
            }
        }
        s
    }))
}

/// A reductive decomposition `𝔤 = 𝔥 ⊕ 𝔪` along basis indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductiveSplit {
    pub sc: StructureConstants,
    pub h_idx: Vec<usize>,
    pub m_idx: Vec<usize>,
}

impl ReductiveSplit {
    pub fn new(sc: StructureConstants, h_idx: Vec<usize>, m_idx: Vec<usize>) -> Result<Self> {
        let mut all: Vec<usize> = h_idx.iter().chain(m_idx.iter()).copied().collect();
        all.sort_unstable();
        if all != (0..sc.dim()).collect::<Vec<_>>() {
            return Err(Error::InvalidSpec("h and m indices must partition the basis".into()));
        }
        let split = ReductiveSplit { sc, h_idx, m_idx };
        if split.reductivity_defect() > ALGEBRA_TOL {
            return Err(Error::InvalidSpec("decomposition is not reductive".into()));
        }
        Ok(split)
    }

    /// Largest structure constant violating `[𝔥,𝔥] ⊆ 𝔥` or `[𝔥,𝔪] ⊆ 𝔪`.
    pub fn reductivity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for &a in &self.h_idx {
            for &b in &self.h_idx {
                for &c in &self.m_idx {
                    worst = worst.max(self.sc.constant(c, a, b).abs());
                }
            }
            for &b in &self.m_idx {
                for &c in &self.h_idx {
                    worst = worst.max(self.sc.constant(c, a, b).abs());
                }
            }
        }
        worst
    }

    pub fn m_dim(&self) -> usize {
        self.m_idx.len()
    }

    /// The projection `p_𝔪` in basis coordinates.
    pub fn projection(&self) -> LinearSurjection {
        LinearSurjection::coordinate_projection(self.sc.dim(), &self.m_idx).expect("m indices are in range")
    }

    pub fn embed_m(&self, zeta: &Vector) -> Result<Vector> {
        check_dim(self.m_dim(), zeta.len())?;
        let mut xi = Vector::zeros(self.sc.dim());
        for (k, &i) in self.m_idx.iter().enumerate() {
            xi[i] = zeta[k];
        }
        Ok(xi)
    }

    pub fn m_part(&self, xi: &Vector) -> Vector {
        Vector::from_fn(self.m_dim(), |k, _| xi[self.m_idx[k]])
    }

    pub fn h_part(&self, xi: &Vector) -> Vector {
        Vector::from_fn(self.h_idx.len(), |k, _| xi[self.h_idx[k]])
    }

    /// `Ad_g` for `g` in the group whose adjoint action preserves both `𝔥`
    /// and `𝔪`; fails with `NotInGroup` otherwise.
    pub fn isotropy_adjoint(&self, g: &Matrix) -> Result<Matrix> {
        let ad = self.sc.adjoint_matrix(g)?;
        let mut leak = 0.0_f64;
        for &i in &self.h_idx {
            for &j in &self.m_idx {
                leak = leak.max(ad[(i, j)].abs()).max(ad[(j, i)].abs());
            }
        }
        if leak > GROUP_TOL {
            return Err(Error::NotInGroup { defect: leak });
        }
        Ok(ad)
    }
}

/// The six 4×4 basis matrices of `so(4)`: `E_1..E_3` rotate within the
/// first three coordinates, `E_4..E_6` mix each of them with the fourth.
pub fn so4_basis() -> Vec<Matrix> {
    let gen = |i: usize, j: usize| {
        let mut m = Matrix::zeros(4, 4);
        m[(i, j)] = -1.0;
        m[(j, i)] = 1.0;
        m
    };
    alloc::vec![gen(1, 2), gen(2, 0), gen(0, 1), gen(0, 3), gen(1, 3), gen(2, 3)]
}

/// `so(4) = so(3) ⊕ 𝔪` with `𝔥 = span{E_1, E_2, E_3}` and `𝔪 = span{E_4, E_5, E_6}`.
pub fn so4() -> ReductiveSplit {
    let sc = StructureConstants::from_rep(so4_basis()).expect("so(4) basis is a Lie algebra");
    ReductiveSplit::new(sc, alloc::vec![0, 1, 2], alloc::vec![3, 4, 5]).expect("so(3) ⊕ m is reductive")
}

/// The two invariant quadratics on `so(4)`, squared norms of the two
/// `so(3)` components: `L₁ = Σ (w^i + w^{i+3})²`, `L₂ = Σ (w^i − w^{i+3})²`.
pub fn invariant_polys() -> (QuadraticForm, QuadraticForm) {
    let block = |sign: f64| {
        Matrix::from_fn(6, 6, |i, j| {
            if i == j {
                1.0
            } else if i % 3 == j % 3 {
                sign
            } else {
                0.0
            }
        })
    };
    (QuadraticForm(block(1.0)), QuadraticForm(block(-1.0)))
}

/// Bi-invariant candidates on `so(4)` built from `L₁`, `L₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateNorms {
    /// `((L₁ + L₂)²)^(1/4) = sqrt(2) |w|`.
    pub euclidean: NormSpec,
    /// `(L₁² + L₂²)^(1/4)`.
    pub hat: NormSpec,
    /// `((L₁ + L₂)² + L₁²)^(1/4)`.
    pub tilde: NormSpec,
}

pub fn candidate_norms() -> CandidateNorms {
    let (l1, l2) = invariant_polys();
    let sum = &l1.0 + &l2.0;
    let spec = |q: Vec<Matrix>| NormSpec::quartic_root(q).expect("invariant quadratics are PSD with PD sum");
    CandidateNorms {
        euclidean: spec(alloc::vec![sum.clone()]),
        hat: spec(alloc::vec![l1.0.clone(), l2.0]),
        tilde: spec(alloc::vec![sum, l1.0]),
    }
}

/// The lift `𝔪 → 𝔤` and subduced norm on `𝔪 ≅ T_o(G/H)` induced by an
/// `Ad(H)`-invariant norm on `𝔤`.
#[derive(Debug, Clone)]
pub struct MSubduction {
    pub split: ReductiveSplit,
    pub subduced: SubducedNorm<NormSpec>,
}

impl MSubduction {
    pub fn lift(&self, zeta: &Vector) -> Result<LiftSolution> {
        self.subduced.lift(zeta)
    }

    pub fn value(&self, zeta: &Vector) -> Result<f64> {
        self.subduced.eval(zeta)
    }
}

/// Wraps the fiber minimization for `p_𝔪`, after checking on seeded samples
/// that the `𝔥`-components of the invariance residual vanish.
pub fn subduce_to_m(split: &ReductiveSplit, spec: &NormSpec) -> Result<MSubduction> {
    check_dim(split.sc.dim(), spec.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..20 {
        let w = sphere_direction(&mut rng, spec.dim());
        let r = ad_invariance_residual(&split.sc, spec, &w)?;
        let worst = split.h_idx.iter().map(|&a| r[a].abs()).fold(0.0, f64::max);
        if worst > 1e-8 {
            return Err(Error::InvalidSpec("norm is not Ad(H)-invariant".into()));
        }
    }
    Ok(MSubduction { split: split.clone(), subduced: SubducedNorm::new(spec.clone(), split.projection())? })
}

/// `|h̄(Ad_h ζ) − Ad_h h̄(ζ)|₂ / |h̄(ζ)|₂`.
pub fn equivariance_defect(sub: &MSubduction, h_elem: &Matrix, zeta: &Vector) -> Result<f64> {
    let ad = sub.split.isotropy_adjoint(h_elem)?;
    let lifted = sub.lift(zeta)?.point;
    let rotated = sub.split.m_part(&(&ad * sub.split.embed_m(zeta)?));
    let lifted_rotated = sub.lift(&rotated)?.point;
    Ok((lifted_rotated - &ad * &lifted).norm() / lifted.norm())
}

/// Lifts `n` seeded unit directions of `𝔪`, sampling the horizontal cone.
pub fn cone_sample(sub: &MSubduction, n: usize, seed: u64) -> Result<Vec<Vector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let zeta = sphere_direction(&mut rng, sub.split.m_dim());
            Ok(sub.lift(&zeta)?.point)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{block_rotation, expm, rotation3};
    use alloc::vec;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
        match (i, j, k) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    }

    #[test]
    fn so4_constants_follow_epsilon_table() {
        let sc = so4().sc;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let e = levi_civita(i, j, k);
                    assert_eq!(sc.constant(k, i, j), e);
                    assert_eq!(sc.constant(k + 3, i, j + 3), e);
                    assert_eq!(sc.constant(k, i + 3, j + 3), e);
                    assert_eq!(sc.constant(k + 3, i, j), 0.0);
                    assert_eq!(sc.constant(k, i, j + 3), 0.0);
                    assert_eq!(sc.constant(k + 3, i + 3, j + 3), 0.0);
                }
            }
        }
    }

    #[test]
    fn named_brackets() {
        let sc = so4().sc;
        let e = |a: usize| sc.basis_vector(a - 1);
        assert_eq!(sc.bracket(&e(1), &e(2)).unwrap(), e(3));
        assert_eq!(sc.bracket(&e(4), &e(5)).unwrap(), e(3));
        assert_eq!(sc.bracket(&e(1), &e(5)).unwrap(), e(6));
    }

    #[test]
    fn killing_form_of_so4() {
        let sc = so4().sc;
        let e = |a: usize| sc.basis_vector(a - 1);
        assert!((sc.killing(&e(1), &e(1)).unwrap() + 4.0).abs() < 1e-12);
        assert!(sc.killing(&e(1), &e(2)).unwrap().abs() < 1e-12);
        assert_eq!(sc.killing_normalization(), Some(4.0));
        let mut expected = Vector::zeros(6);
        expected[0] = -4.0;
        assert!((sc.flat(&e(1)).unwrap() - expected).amax() < 1e-12);
    }

    #[test]
    fn abelian_algebra_has_singular_killing() {
        let sc = StructureConstants::new(2, vec![0.0; 8]).unwrap();
        assert_eq!(sc.flat(&v(&[1.0, 0.0])), Err(Error::SingularKilling));
        assert_eq!(sc.sharp(&v(&[1.0, 0.0])), Err(Error::SingularKilling));
    }

    #[test]
    fn non_antisymmetric_constants_rejected() {
        let mut c = vec![0.0; 8];
        c[1] = 1.0; // C^0_{01} without its partner
        assert!(StructureConstants::new(2, c).is_err());
    }

    #[test]
    fn adjoint_identity_and_group_check() {
        let sc = so4().sc;
        let xi = v(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert!((sc.adjoint(&Matrix::identity(4, 4), &xi).unwrap() - &xi).amax() < 1e-14);
        let mut scaled = Matrix::identity(4, 4);
        scaled[(0, 0)] = 2.0;
        assert!(matches!(sc.adjoint(&scaled, &xi), Err(Error::NotInGroup { .. })));
        let mut reflection = Matrix::identity(4, 4);
        reflection[(0, 0)] = -1.0;
        assert!(matches!(sc.adjoint(&reflection, &xi), Err(Error::NotInGroup { .. })));
    }

    #[test]
    fn block_rotation_preserves_m() {
        let split = so4();
        let g = block_rotation(&rotation3(&v(&[0.3, -1.2, 0.7])));
        let ad = split.isotropy_adjoint(&g).unwrap();
        let image = &ad * split.embed_m(&v(&[1.0, -2.0, 0.5])).unwrap();
        assert!(split.h_part(&image).amax() < 1e-14);
        let generic = expm(&(so4_basis()[3].clone() * 0.4));
        assert!(matches!(split.isotropy_adjoint(&generic), Err(Error::NotInGroup { .. })));
    }

    #[test]
    fn invariance_residual_witness() {
        let sc = so4().sc;
        let r = ad_invariance_residual(&sc, &LinearForm(sc.basis_vector(0)), &sc.basis_vector(1)).unwrap();
        // r_a = C^1_{a2}; only a = 3 survives with C^1_{32} = −1.
        assert_eq!(r, v(&[0.0, 0.0, -1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn invariant_quadratics() {
        let (l1, l2) = invariant_polys();
        let e4 = v(&[0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(l1.value(&e4).unwrap(), 1.0);
        assert_eq!(l2.value(&e4).unwrap(), 1.0);
        assert_eq!(&l1.0 + &l2.0, Matrix::identity(6, 6) * 2.0);
        let w = v(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(l1.value(&w).unwrap(), 25.0 + 49.0 + 81.0);
    }

    #[test]
    fn hat_lift_is_zero_padding() {
        let sub = subduce_to_m(&so4(), &candidate_norms().hat).unwrap();
        let sol = sub.lift(&v(&[1.0, 2.0, 3.0])).unwrap();
        assert!((sol.point - v(&[0.0, 0.0, 0.0, 1.0, 2.0, 3.0])).amax() < 1e-8);
    }

    #[test]
    fn non_invariant_norm_rejected() {
        let spec = NormSpec::euclidean(Matrix::from_diagonal(&v(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]))).unwrap();
        assert!(subduce_to_m(&so4(), &spec).is_err());
    }
}
