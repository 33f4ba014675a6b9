//! Real circulant matrices stored by their first row.
//!
//! Entry `(i, j)` of an order-`m` circulant equals `first_row[(j - i) mod m]`.
//! Public index arguments and returned positions are 1-based, matching the
//! `M_{1,j}` notation used throughout the crate.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// `exp(+i 2 pi r / m)` for `r = 0..m`.
///
/// Values are taken from the first quadrant and reflected so that the table
/// is exactly conjugation symmetric (`w[m - r] == conj(w[r])`).
pub(crate) fn unit_roots(m: usize) -> Vec<Complex64> {
    let mut w = vec![Complex64::new(1.0, 0.0); m];
    for r in 1..m {
        if 2 * r > m {
            w[r] = w[m - r].conj();
            continue;
        }
        let angle = 2.0 * PI * r as f64 / m as f64;
        w[r] = Complex64::new(angle.cos(), angle.sin());
    }
    w
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculantMatrix {
    first_row: Vec<f64>,
}

/// Eigenvalues of a circulant, indexed by frequency `l = 1..m` (stored 0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    pub values: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest `|s_l - conj(s_{m-l+2})|`, zero for the spectrum of a real matrix.
    pub fn conjugation_defect(&self) -> f64 {
        let m = self.values.len();
        (0..m)
            .map(|l| (self.values[l] - self.values[(m - l) % m].conj()).norm())
            .fold(0.0, f64::max)
    }
}

impl CirculantMatrix {
    pub fn from_first_row(row: Vec<f64>) -> Result<Self> {
        if row.is_empty() {
            return Err(invalid("circulant first row must be non-empty"));
        }
        Ok(Self { first_row: row })
    }

    /// The order-`m` identity.
    pub fn identity(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("order must be positive"));
        }
        let mut row = vec![0.0; m];
        row[0] = 1.0;
        Ok(Self { first_row: row })
    }

    pub fn order(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    pub fn into_first_row(self) -> Vec<f64> {
        self.first_row
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> Result<f64> {
        let m = self.order();
        if i == 0 || j == 0 || i > m || j > m {
            return Err(invalid(format!("index ({i}, {j}) outside 1..={m}")));
        }
        Ok(self.first_row[(j + m - i) % m])
    }

    /// Dense row-major copy, mostly for tests and the direct solver.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let m = self.order();
        (0..m)
            .map(|i| (0..m).map(|j| self.first_row[(j + m - i) % m]).collect())
            .collect()
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let m = self.order();
        if v.len() != m {
            return Err(invalid(format!(
                "vector length {} does not match order {m}",
                v.len()
            )));
        }
        let mut out = vec![0.0; m];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, vj) in v.iter().enumerate() {
                acc += self.first_row[(j + m - i) % m] * vj;
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// The circulant product `self * other`.
    pub fn compose(&self, other: &CirculantMatrix) -> Result<CirculantMatrix> {
        let m = self.order();
        if other.order() != m {
            return Err(invalid(format!("order mismatch: {m} vs {}", other.order())));
        }
        let a = &self.first_row;
        let b = &other.first_row;
        let row = (0..m)
            .map(|j| (0..m).map(|k| a[k] * b[(j + m - k) % m]).sum())
            .collect();
        Ok(CirculantMatrix { first_row: row })
    }

    /// Eigenvalue `l` is `sum_j c_j exp(+i (j-1) xi_l)` with `xi_l = 2 pi (l-1) / m`.
    ///
    /// Direct O(m^2) summation over a shared root-of-unity table.
    pub fn spectrum(&self) -> ComplexSpectrum {
        let m = self.order();
        let w = unit_roots(m);
        let values = (0..m)
            .map(|l| {
                self.first_row
                    .iter()
                    .enumerate()
                    .map(|(j, c)| w[(j * l) % m] * *c)
                    .sum()
            })
            .collect();
        ComplexSpectrum { values }
    }

    /// Smallest first-row entry and its 1-based position (ties go to the smallest index).
    pub fn min_entry(&self) -> (f64, usize) {
        let mut best = (self.first_row[0], 1);
        for (j, &v) in self.first_row.iter().enumerate().skip(1) {
            if v < best.0 {
                best = (v, j + 1);
            }
        }
        best
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.first_row.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn row_sum(&self) -> f64 {
        self.first_row.iter().sum()
    }

    /// Round-off allowance `1e-12 * max(1, |largest entry|)`.
    pub fn default_tolerance(&self) -> f64 {
        DEFAULT_RELATIVE_TOL * self.max_abs_entry().max(1.0)
    }

    pub fn is_nonnegative(&self, tol: f64) -> Result<bool> {
        if !(tol >= 0.0) {
            return Err(invalid(format!(
                "tolerance must be non-negative, got {tol}"
            )));
        }
        Ok(self.min_entry().0 >= -tol)
    }
}

pub const DEFAULT_RELATIVE_TOL: f64 = 1e-12;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn centered3() -> CirculantMatrix {
        CirculantMatrix::from_first_row(vec![0.0, 0.5, -0.5]).unwrap()
    }

    #[test]
    fn empty_row_is_rejected() {
        assert!(CirculantMatrix::from_first_row(vec![]).is_err());
    }

    #[test]
    fn entries_follow_wrapped_diagonals() {
        let l = centered3();
        assert_eq!(l.entry(2, 1).unwrap(), -0.5);
        assert_eq!(l.entry(3, 1).unwrap(), 0.5);
        assert_eq!(l.entry(2, 2).unwrap(), 0.0);
        assert!(l.entry(0, 1).is_err());
        assert!(l.entry(1, 4).is_err());

        let l5 = CirculantMatrix::from_first_row(vec![0.0, 0.5, 0.0, 0.0, -0.5]).unwrap();
        assert_eq!(l5.entry(5, 1).unwrap(), 0.5);
        assert_eq!(l5.entry(1, 5).unwrap(), -0.5);
    }

    #[test]
    fn single_entry_circulant() {
        let c = CirculantMatrix::from_first_row(vec![1.0]).unwrap();
        assert_eq!(c.order(), 1);
        assert_eq!(c.entry(1, 1).unwrap(), 1.0);
        assert_eq!(c.apply(&[3.0]).unwrap(), vec![3.0]);
    }

    #[test]
    fn apply_centered_to_basis_vector() {
        // column 1 of L
        let out = centered3().apply(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(out, vec![0.0, -0.5, 0.5]);
        assert!(centered3().apply(&[1.0]).is_err());
    }

    #[test]
    fn compose_matches_dense_product() {
        let l = centered3();
        let sq = l.compose(&l).unwrap();
        assert_eq!(sq.first_row(), &[-0.5, 0.25, 0.25]);

        let shift = CirculantMatrix::from_first_row(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(shift.compose(&shift).unwrap().first_row(), &[0.0, 0.0, 1.0]);

        let id = CirculantMatrix::identity(3).unwrap();
        assert_eq!(id.compose(&l).unwrap(), l);
        assert!(id.compose(&CirculantMatrix::identity(4).unwrap()).is_err());
    }

    #[test]
    fn spectrum_of_centered_difference() {
        let l = CirculantMatrix::from_first_row(vec![0.0, 0.5, 0.0, 0.0, -0.5]).unwrap();
        let s = l.spectrum();
        for (idx, v) in s.values.iter().enumerate() {
            let xi = 2.0 * PI * idx as f64 / 5.0;
            assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(v.im, xi.sin(), epsilon = 1e-15);
        }
        let id = CirculantMatrix::identity(6).unwrap().spectrum();
        assert!(id.values.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn min_entry_breaks_ties_by_index() {
        let c = CirculantMatrix::from_first_row(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(c.min_entry(), (0.0, 1));
        let c = CirculantMatrix::from_first_row(vec![0.5, 0.5, 0.0]).unwrap();
        assert_eq!(c.min_entry(), (0.0, 3));
    }

    #[test]
    fn nonnegativity_check() {
        let id = CirculantMatrix::identity(4).unwrap();
        assert!(id.is_nonnegative(0.0).unwrap());
        assert!(!centered3().is_nonnegative(1e-12).unwrap());
        assert!(id.is_nonnegative(-1.0).is_err());
        assert!(id.is_nonnegative(f64::NAN).is_err());
    }
}
