//! JSON shapes for every input and output of the tool.
//!
//! Matrices are row-major nested arrays. Non-finite report values are written
//! as `null`.

use serde::{Deserialize, Serialize};
use subduce_core::chart::{ChartFinsler, CoeffTarget, Monomial, PolyDep};
use subduce_core::liealg::{candidate_norms, ReductiveSplit};
use subduce_core::minksub::{LiftSolution, SubmersionReport};
use subduce_core::{LinearSurjection, Matrix, NormSpec, SolverConfig, Vector, VerificationReport};

use crate::Error;

pub(crate) fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>], what: &str) -> Result<Matrix, Error> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(Error::Input(format!("`{what}` must be a non-empty rectangular matrix")));
    }
    Ok(Matrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpecJson {
    pub family: String,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<Vec<f64>>>>,
}

impl From<&NormSpec> for NormSpecJson {
    fn from(spec: &NormSpec) -> Self {
        let family = spec.family().to_string();
        match spec {
            NormSpec::Euclidean { a } => NormSpecJson { family, a: Some(matrix_rows(a)), b: None, q: None },
            NormSpec::Randers { a, b } => {
                NormSpecJson { family, a: Some(matrix_rows(a)), b: Some(b.iter().copied().collect()), q: None }
            }
            NormSpec::QuarticRoot { q } => {
                NormSpecJson { family, a: None, b: None, q: Some(q.iter().map(matrix_rows).collect()) }
            }
        }
    }
}

impl TryFrom<&NormSpecJson> for NormSpec {
    type Error = Error;

    fn try_from(j: &NormSpecJson) -> Result<Self, Error> {
        let need = |field: &str| Error::Input(format!("family `{}` requires `{field}`", j.family));
        let unexpected = |field: &str| Error::Input(format!("family `{}` does not take `{field}`", j.family));
        let a = || matrix_from_rows(j.a.as_ref().ok_or_else(|| need("A"))?, "A");
        let spec = match j.family.as_str() {
            "euclidean" => {
                if j.b.is_some() {
                    return Err(unexpected("b"));
                }
                if j.q.is_some() {
                    return Err(unexpected("Q"));
                }
                NormSpec::euclidean(a()?)?
            }
            "randers" => {
                if j.q.is_some() {
                    return Err(unexpected("Q"));
                }
                let b = j.b.as_ref().ok_or_else(|| need("b"))?;
                NormSpec::randers(a()?, Vector::from_column_slice(b))?
            }
            "quartic_root" => {
                if j.a.is_some() {
                    return Err(unexpected("A"));
                }
                if j.b.is_some() {
                    return Err(unexpected("b"));
                }
                let q = j.q.as_ref().ok_or_else(|| need("Q"))?;
                let q = q.iter().map(|m| matrix_from_rows(m, "Q")).collect::<Result<Vec<_>, _>>()?;
                NormSpec::quartic_root(q)?
            }
            other => {
                return Err(Error::Input(format!(
                    "unknown family `{other}` (expected euclidean, randers or quartic_root)"
                )))
            }
        };
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurjectionJson {
    #[serde(rename = "M")]
    pub m: Vec<Vec<f64>>,
}

impl From<&LinearSurjection> for SurjectionJson {
    fn from(s: &LinearSurjection) -> Self {
        SurjectionJson { m: matrix_rows(s.matrix()) }
    }
}

impl TryFrom<&SurjectionJson> for LinearSurjection {
    type Error = Error;

    fn try_from(j: &SurjectionJson) -> Result<Self, Error> {
        Ok(LinearSurjection::from_matrix(matrix_from_rows(&j.m, "M")?)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfigJson {
    pub tol: f64,
    pub max_iter: usize,
}

impl From<SolverConfig> for SolverConfigJson {
    fn from(c: SolverConfig) -> Self {
        SolverConfigJson { tol: c.tol, max_iter: c.max_iter }
    }
}

impl From<SolverConfigJson> for SolverConfig {
    fn from(c: SolverConfigJson) -> Self {
        SolverConfig { tol: c.tol, max_iter: c.max_iter }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftSolutionJson {
    pub point: Vec<f64>,
    pub value: f64,
    pub residual: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub degenerate: bool,
}

impl From<&LiftSolution> for LiftSolutionJson {
    fn from(s: &LiftSolution) -> Self {
        LiftSolutionJson {
            point: s.point.iter().copied().collect(),
            value: s.value,
            residual: finite(s.residual),
            iterations: s.iterations,
            converged: s.converged,
            degenerate: s.degenerate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubducedValueJson {
    pub v: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReportJson {
    pub passed: bool,
    pub min_hessian_eigenvalue: Option<f64>,
    pub worst_homogeneity_defect: Option<f64>,
    pub worst_triangle_defect: Option<f64>,
    pub worst_fundamental_defect: Option<f64>,
    pub samples_used: usize,
    pub failure_witness: Option<Vec<f64>>,
}

impl From<&VerificationReport> for VerificationReportJson {
    fn from(r: &VerificationReport) -> Self {
        VerificationReportJson {
            passed: r.passed,
            min_hessian_eigenvalue: finite(r.min_hessian_eigenvalue),
            worst_homogeneity_defect: finite(r.worst_homogeneity_defect),
            worst_triangle_defect: finite(r.worst_triangle_defect),
            worst_fundamental_defect: finite(r.worst_fundamental_defect),
            samples_used: r.samples_used,
            failure_witness: r.failure_witness.as_ref().map(|w| w.iter().copied().collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmersionReportJson {
    pub passed: bool,
    pub worst_value_mismatch: Option<f64>,
    pub worst_inequality_defect: Option<f64>,
    pub samples_used: usize,
    pub failure_witness: Option<Vec<f64>>,
}

impl From<&SubmersionReport> for SubmersionReportJson {
    fn from(r: &SubmersionReport) -> Self {
        SubmersionReportJson {
            passed: r.passed,
            worst_value_mismatch: finite(r.worst_value_mismatch),
            worst_inequality_defect: finite(r.worst_inequality_defect),
            samples_used: r.samples_used,
            failure_witness: r.failure_witness.as_ref().map(|w| w.iter().copied().collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialJson {
    pub powers_x: Vec<u32>,
    pub powers_y: Vec<u32>,
    pub coef: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDepJson {
    pub target: String,
    pub monomials: Vec<MonomialJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartJson {
    pub n_x: usize,
    pub n_y: usize,
    pub base_spec: NormSpecJson,
    #[serde(default)]
    pub poly_deps: Vec<PolyDepJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_box: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_box: Option<Vec<[f64; 2]>>,
}

impl From<&ChartFinsler> for ChartJson {
    fn from(cf: &ChartFinsler) -> Self {
        let boxes = |b: &[(f64, f64)]| Some(b.iter().map(|&(lo, hi)| [lo, hi]).collect());
        ChartJson {
            n_x: cf.n_x,
            n_y: cf.n_y,
            base_spec: (&cf.base).into(),
            poly_deps: cf
                .deps
                .iter()
                .map(|d| PolyDepJson {
                    target: d.target.to_string(),
                    monomials: d
                        .monomials
                        .iter()
                        .map(|m| MonomialJson {
                            powers_x: m.powers_x.clone(),
                            powers_y: m.powers_y.clone(),
                            coef: m.coef,
                        })
                        .collect(),
                })
                .collect(),
            x_box: boxes(&cf.x_box),
            y_box: boxes(&cf.y_box),
        }
    }
}

impl TryFrom<&ChartJson> for ChartFinsler {
    type Error = Error;

    fn try_from(j: &ChartJson) -> Result<Self, Error> {
        let deps = j
            .poly_deps
            .iter()
            .map(|d| {
                Ok(PolyDep {
                    target: CoeffTarget::parse(&d.target)?,
                    monomials: d
                        .monomials
                        .iter()
                        .map(|m| Monomial { powers_x: m.powers_x.clone(), powers_y: m.powers_y.clone(), coef: m.coef })
                        .collect(),
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let cf = ChartFinsler::new(j.n_x, j.n_y, NormSpec::try_from(&j.base_spec)?, deps)?;
        if j.x_box.is_none() && j.y_box.is_none() {
            return Ok(cf);
        }
        let boxes = |b: &Option<Vec<[f64; 2]>>, fallback: &[(f64, f64)]| {
            b.as_ref().map_or_else(|| fallback.to_vec(), |b| b.iter().map(|&[lo, hi]| (lo, hi)).collect())
        };
        let (x_box, y_box) = (boxes(&j.x_box, &cf.x_box), boxes(&j.y_box, &cf.y_box));
        Ok(cf.with_box(x_box, y_box)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct So4Defects {
    pub antisymmetry: f64,
    pub jacobi: f64,
    pub representation: f64,
    pub reductivity: f64,
}

/// Everything needed to check the `so(4)` tables independently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct So4Dump {
    /// `E_1..E_6` as 4×4 matrices.
    pub basis: Vec<Vec<Vec<f64>>>,
    /// `constants[c][a][b]` is the `E_c` component of `[E_a, E_b]`.
    pub constants: Vec<Vec<Vec<f64>>>,
    pub killing: Vec<Vec<f64>>,
    pub killing_normalization: Option<f64>,
    pub h_indices: Vec<usize>,
    pub m_indices: Vec<usize>,
    pub defects: So4Defects,
    pub candidate_norms: CandidateNormsJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateNormsJson {
    pub euclidean: NormSpecJson,
    pub hat: NormSpecJson,
    pub tilde: NormSpecJson,
}

impl So4Dump {
    pub fn new(split: &ReductiveSplit) -> Self {
        let sc = &split.sc;
        let n = sc.dim();
        let constants =
            (0..n).map(|c| (0..n).map(|a| (0..n).map(|b| sc.constant(c, a, b)).collect()).collect()).collect();
        let norms = candidate_norms();
        So4Dump {
            basis: sc.rep().unwrap_or(&[]).iter().map(matrix_rows).collect(),
            constants,
            killing: matrix_rows(&sc.killing_matrix()),
            killing_normalization: sc.killing_normalization(),
            h_indices: split.h_idx.clone(),
            m_indices: split.m_idx.clone(),
            defects: So4Defects {
                antisymmetry: sc.antisymmetry_defect(),
                jacobi: sc.jacobi_defect(),
                representation: sc.rep_defect().unwrap_or(0.0),
                reductivity: split.reductivity_defect(),
            },
            candidate_norms: CandidateNormsJson {
                euclidean: (&norms.euclidean).into(),
                hat: (&norms.hat).into(),
                tilde: (&norms.tilde).into(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ragged_and_empty_matrices_are_rejected() {
        assert!(matrix_from_rows(&[vec![1.0, 2.0], vec![3.0]], "A").is_err());
        assert!(matrix_from_rows(&[], "A").is_err());
        assert!(matrix_from_rows(&[vec![]], "A").is_err());
        let m = matrix_from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]], "A").unwrap();
        assert_eq!(m[(0, 1)], 2.0);
        assert_eq!(matrix_rows(&m), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn families_reject_foreign_fields() {
        let j = NormSpecJson {
            family: "quartic_root".into(),
            a: Some(vec![vec![1.0]]),
            b: None,
            q: Some(vec![vec![vec![1.0]]]),
        };
        assert!(NormSpec::try_from(&j).is_err());
        let j = NormSpecJson { a: None, ..j };
        assert!(NormSpec::try_from(&j).is_ok());
    }

    #[test]
    fn non_finite_report_values_become_null() {
        assert_eq!(finite(f64::INFINITY), None);
        assert_eq!(finite(f64::NAN), None);
        assert_eq!(finite(2.0), Some(2.0));
    }
}
