//! The full discretization matrix `M = R(nu L)` of the theta-method.
//!
//! Two independent constructions are provided: a discrete Fourier sum over the
//! eigenvalues of `L` ([`build_m_trig`]) and a pivoted dense solve of
//! `(I - theta nu L) M = I + (1 - theta) nu L` ([`build_m_direct`]).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circulant::{unit_roots, CirculantMatrix};
use crate::error::{invalid, Error, Result};
use crate::schemes::{build_l, eigen_imag, SchemeKind};

/// Residue cap per grid point for the discarded imaginary part of the trig route.
pub const IMAG_RESIDUE_CAP_PER_POINT: f64 = 1e-10;

const DIRECT_CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullStepParams {
    pub kind: SchemeKind,
    pub m: usize,
    pub theta: f64,
    pub nu: f64,
}

impl FullStepParams {
    pub fn new(kind: SchemeKind, m: usize, theta: f64, nu: f64) -> Result<Self> {
        kind.check_order(m)?;
        if !(0.0..=1.0).contains(&theta) {
            return Err(invalid(format!("theta must lie in [0, 1], got {theta}")));
        }
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(invalid(format!("nu must be positive and finite, got {nu}")));
        }
        Ok(Self { kind, m, theta, nu })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullStepMatrix {
    pub params: FullStepParams,
    pub matrix: CirculantMatrix,
    pub max_imag_residue: f64,
}

impl FullStepMatrix {
    pub fn first_row(&self) -> &[f64] {
        self.matrix.first_row()
    }
}

/// Stability function of the theta-method, `(1 + (1-theta) z) / (1 - theta z)`.
pub fn stability_r(theta: f64, z: Complex64) -> Result<Complex64> {
    let den = Complex64::new(1.0, 0.0) - theta * z;
    if den.norm() == 0.0 {
        return Err(Error::Singular(format!(
            "stability function pole at theta = {theta}, z = {z}"
        )));
    }
    Ok((1.0 + (1.0 - theta) * z) / den)
}

/// Eigenvalues of `L` in frequency order.
pub fn l_eigenvalues(kind: SchemeKind, m: usize) -> Result<Vec<Complex64>> {
    if kind.is_skew() {
        Ok(eigen_imag(kind, m)?
            .into_iter()
            .map(|lam| Complex64::new(0.0, lam))
            .collect())
    } else {
        Ok(build_l(kind, m)?.spectrum().values)
    }
}

/// Inverse discrete Fourier sum `(1/m) sum_l s_l exp(-i (j-1) xi_l)`.
///
/// Returns the real parts and the largest discarded imaginary part.
pub(crate) fn inverse_fourier_row(sigma: &[Complex64], roots: &[Complex64]) -> (Vec<f64>, f64) {
    let m = sigma.len();
    let scale = 1.0 / m as f64;
    let mut residue: f64 = 0.0;
    let row = (0..m)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, s) in sigma.iter().enumerate() {
                acc += s * roots[(j * l) % m].conj();
            }
            acc *= scale;
            residue = residue.max(acc.im.abs());
            acc.re
        })
        .collect();
    (row, residue)
}

/// Reusable trig-route evaluator for one `(scheme, m)` pair.
///
/// Holds the eigenvalues of `L` and the root-of-unity table so parameter
/// scans only pay for the O(m^2) Fourier sum per `(theta, nu)`.
#[derive(Debug, Clone)]
pub struct RowEvaluator {
    kind: SchemeKind,
    m: usize,
    lambdas: Vec<Complex64>,
    roots: Vec<Complex64>,
}

impl RowEvaluator {
    pub fn new(kind: SchemeKind, m: usize) -> Result<Self> {
        Ok(Self {
            kind,
            m,
            lambdas: l_eigenvalues(kind, m)?,
            roots: unit_roots(m),
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// First row of `M(theta, nu)` and the discarded imaginary residue.
    pub fn row(&self, theta: f64, nu: f64) -> Result<(Vec<f64>, f64)> {
        let sigma = self
            .lambdas
            .iter()
            .map(|lam| stability_r(theta, lam * nu))
            .collect::<Result<Vec<_>>>()?;
        Ok(inverse_fourier_row(&sigma, &self.roots))
    }

    /// Smallest entry of the first row and the matrix-scaled default tolerance.
    pub fn min_entry(&self, theta: f64, nu: f64) -> Result<(f64, f64)> {
        let (row, _) = self.row(theta, nu)?;
        let scale = row.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        let min = row.iter().copied().fold(f64::INFINITY, f64::min);
        Ok((min, crate::circulant::DEFAULT_RELATIVE_TOL * scale))
    }

    /// First row of `lim_{nu -> inf} M`, `None` for `theta = 0`.
    ///
    /// Nonzero eigenvalues contribute `R(inf) = -(1 - theta) / theta`, zero
    /// eigenvalues contribute 1.
    pub fn limit_row(&self, theta: f64) -> Option<Vec<f64>> {
        if theta <= 0.0 {
            return None;
        }
        let at_infinity = -(1.0 - theta) / theta;
        let sigma: Vec<Complex64> = self
            .lambdas
            .iter()
            .map(|lam| {
                if lam.norm() < 1e-12 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(at_infinity, 0.0)
                }
            })
            .collect();
        Some(inverse_fourier_row(&sigma, &self.roots).0)
    }
}

/// `M_{1,j} = (1/m) sum_l R(nu lambda_l) exp(-i (j-1) xi_l)`.
pub fn build_m_trig(p: &FullStepParams) -> Result<FullStepMatrix> {
    let (row, residue) = RowEvaluator::new(p.kind, p.m)?.row(p.theta, p.nu)?;
    let cap = IMAG_RESIDUE_CAP_PER_POINT * p.m as f64;
    if residue > cap {
        return Err(Error::ImaginaryResidue { residue, cap });
    }
    Ok(FullStepMatrix {
        params: *p,
        matrix: CirculantMatrix::from_first_row(row)?,
        max_imag_residue: residue,
    })
}

/// Dense solve of `(I - theta nu L) M = I + (1 - theta) nu L`.
pub fn build_m_direct(p: &FullStepParams) -> Result<FullStepMatrix> {
    let m = p.m;
    let l = build_l(p.kind, m)?.to_dense();
    let lhs = DMatrix::from_fn(m, m, |i, j| delta(i, j) - p.theta * p.nu * l[i][j]);
    let rhs = DMatrix::from_fn(m, m, |i, j| delta(i, j) + (1.0 - p.theta) * p.nu * l[i][j]);

    let inverse = lhs
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Singular("I - theta nu L has no LU inverse".into()))?;
    let condition = norm1(&lhs) * norm1(&inverse);
    if !condition.is_finite() || condition > DIRECT_CONDITION_LIMIT {
        return Err(Error::Singular(format!(
            "condition estimate {condition:e} exceeds {DIRECT_CONDITION_LIMIT:e}"
        )));
    }
    let full = inverse * rhs;
    let row = (0..m).map(|j| full[(0, j)]).collect();
    Ok(FullStepMatrix {
        params: *p,
        matrix: CirculantMatrix::from_first_row(row)?,
        max_imag_residue: 0.0,
    })
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

fn norm1(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub preserving: bool,
    pub min_value: f64,
    /// 1-based column of the smallest first-row entry.
    pub witness: usize,
}

pub fn is_positivity_preserving(p: &FullStepParams, tol: f64) -> Result<PositivityVerdict> {
    if !(tol >= 0.0) {
        return Err(invalid(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    let built = build_m_trig(p)?;
    Ok(verdict(&built.matrix, tol))
}

/// Same as [`is_positivity_preserving`] with the matrix-scaled default tolerance.
pub fn positivity_default(p: &FullStepParams) -> Result<PositivityVerdict> {
    let built = build_m_trig(p)?;
    let tol = built.matrix.default_tolerance();
    Ok(verdict(&built.matrix, tol))
}

fn verdict(matrix: &CirculantMatrix, tol: f64) -> PositivityVerdict {
    let (min_value, witness) = matrix.min_entry();
    PositivityVerdict {
        preserving: min_value >= -tol,
        min_value,
        witness,
    }
}

/// First row of `lim_{nu -> inf} M`; `None` for `theta = 0`, where the limit diverges.
pub fn large_nu_limit_row(kind: SchemeKind, m: usize, theta: f64) -> Result<Option<Vec<f64>>> {
    Ok(RowEvaluator::new(kind, m)?.limit_row(theta))
}
