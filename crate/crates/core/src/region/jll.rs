//! Power-sum necessary conditions for the spectrum of a non-negative matrix,
//! applied to `sigma_l = R(i nu sin xi_l)` of the centered second-order scheme.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bisect_predicate;
use crate::error::{invalid, Error, Result};
use crate::fullstep::stability_r;
use crate::schemes::{eigen_imag, SchemeKind};

/// Largest tolerated imaginary part of a power sum, relative to its magnitude bound.
pub const POWER_SUM_IMAG_CAP: f64 = 1e-9;

const SCAN_FLOOR: f64 = 1e-4;
const POINTS_PER_DECADE: f64 = 400.0;

/// `sigma_l = R(i nu sin xi_l)`, `l = 1..m`.
pub fn centered2_spectrum(m: usize, theta: f64, nu: f64) -> Result<Vec<Complex64>> {
    eigen_imag(SchemeKind::Centered2, m)?
        .into_iter()
        .map(|lam| stability_r(theta, Complex64::new(0.0, nu * lam)))
        .collect()
}

/// Real part of `sum_l sigma_l^p`; errors if the imaginary part is not round-off.
pub fn power_sum(sigma: &[Complex64], p: u32) -> Result<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for s in sigma {
        let v = s.powu(p);
        acc += v;
        bound += v.norm();
    }
    let cap = POWER_SUM_IMAG_CAP * bound.max(1.0);
    if acc.im.abs() > cap {
        return Err(Error::ImaginaryResidue {
            residue: acc.im.abs(),
            cap,
        });
    }
    Ok(acc.re)
}

/// Both sides of `0 <= (S_p)^q <= m^{q-1} S_{pq}` at one `nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JllCheck {
    /// `(S_p)^q`.
    pub lhs: f64,
    /// `m^{q-1} S_{pq}`.
    pub rhs: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

pub fn jll_check(m: usize, theta: f64, nu: f64, p: u32, q: u32) -> Result<JllCheck> {
    if p == 0 || q == 0 {
        return Err(invalid("p and q must be positive"));
    }
    let sigma = centered2_spectrum(m, theta, nu)?;
    let lhs = power_sum(&sigma, p)?.powi(q as i32);
    let rhs = (m as f64).powi(q as i32 - 1) * power_sum(&sigma, p * q)?;
    // both sides tend to m^q as nu -> 0; compare with a relative slack
    let slack = 1e-12 * lhs.abs().max(rhs.abs()).max(1.0);
    Ok(JllCheck {
        lhs,
        rhs,
        lower_holds: lhs >= -slack,
        upper_holds: lhs <= rhs + slack,
    })
}

/// Threshold `nu_*(p, q)`: supremum of `nu` in `(0, scan_max]` where the upper
/// power-sum inequality fails, or 0 if it never fails.
pub fn jll_nu_star(m: usize, theta: f64, p: u32, q: u32, scan_max: f64) -> Result<f64> {
    if !(scan_max > 0.0) || !scan_max.is_finite() {
        return Err(invalid(format!(
            "scan_max must be positive, got {scan_max}"
        )));
    }
    let fails = |nu: f64| -> Result<bool> { Ok(!jll_check(m, theta, nu, p, q)?.upper_holds) };

    let floor = SCAN_FLOOR.min(scan_max);
    let decades = (scan_max / floor).log10();
    let n = ((decades * POINTS_PER_DECADE).ceil() as usize).max(1);
    let grid: Vec<f64> = (0..=n)
        .map(|i| {
            if i == n {
                scan_max
            } else {
                floor * 10f64.powf(decades * i as f64 / n as f64)
            }
        })
        .collect();

    let mut last_fail = None;
    for (i, &nu) in grid.iter().enumerate().rev() {
        if fails(nu)? {
            last_fail = Some(i);
            break;
        }
    }
    let Some(i) = last_fail else {
        return Ok(0.0);
    };
    if i + 1 == grid.len() {
        return Ok(scan_max);
    }
    // bisect_predicate returns the failing end; errors cannot occur away from poles
    let mut err = None;
    let edge = bisect_predicate(grid[i], grid[i + 1], 1e-13, |nu| match fails(nu) {
        Ok(b) => b,
        Err(e) => {
            err.get_or_insert(e);
            false
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(edge),
    }
}
