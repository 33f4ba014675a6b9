//! Exact region boundaries for the centered second-order scheme, `m = 2k + 1`.
//!
//! `M >= 0` holds exactly for `nu_R(k, theta) <= nu <= nu_L(k, theta)`. Both
//! bounds come from roots of monotone functions of `y`, found by bisection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bisect_increasing;
use crate::closed_form::poly_pr;
use crate::error::{invalid, Error, Result};

/// Default absolute bisection tolerance on `y`.
pub const Y_ROOT_TOL: f64 = 1e-13;

/// CFL bound that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub enum NuBound {
    Finite(f64),
    Infinite,
}

impl NuBound {
    pub fn is_infinite(self) -> bool {
        matches!(self, NuBound::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            NuBound::Finite(v) => Some(v),
            NuBound::Infinite => None,
        }
    }

    /// `nu <= self`.
    pub fn admits(self, nu: f64) -> bool {
        match self {
            NuBound::Finite(v) => nu <= v,
            NuBound::Infinite => true,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for NuBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NuBound::Finite(v) => write!(f, "{v:.16e}"),
            NuBound::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for NuBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(NuBound::Infinite);
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(NuBound::Finite)
            .ok_or_else(|| Error::Parse(format!("bad nu bound '{s}'")))
    }
}

/// `Theta(y, k) = 2 y^2 (1 - y^{4k}) / ((1 + y^2)(1 - y^{4k+2}))`.
///
/// `P_{L,k,theta}(y)` has the sign of `theta - Theta(y, k)`.
pub fn theta_fn(y: f64, k: u32) -> Result<f64> {
    check_k(k)?;
    if !(y > 0.0 && y < 1.0) {
        return Err(invalid(format!("y must lie in (0, 1), got {y}")));
    }
    Ok(theta_unchecked(y, k))
}

fn theta_unchecked(y: f64, k: u32) -> f64 {
    let y2 = y * y;
    let a = 1.0 - y.powi(4 * k as i32);
    let b = 1.0 - y.powi(4 * k as i32 + 2);
    2.0 * y2 * a / ((1.0 + y2) * b)
}

/// Unique root of the increasing `P_{R,k}` in `(0, 1)`.
pub fn root_y_r(k: u32, tol: f64) -> Result<f64> {
    check_k(k)?;
    check_tol(tol)?;
    let pr = poly_pr(k)?;
    Ok(bisect_increasing(0.0, 1.0, tol, |y| pr.eval(y)))
}

/// Unique `y` in `(0, 1)` with `Theta(y, k) = theta`, for `0 < theta < 2k/(2k+1)`.
pub fn root_y_l(k: u32, theta: f64, tol: f64) -> Result<f64> {
    check_k(k)?;
    check_tol(tol)?;
    let cap = theta_cap(k);
    if !(theta > 0.0 && theta < cap) {
        return Err(invalid(format!(
            "theta must lie in (0, {cap}) for k = {k}, got {theta}"
        )));
    }
    Ok(bisect_increasing(0.0, 1.0, tol, |y| {
        theta_unchecked(y, k) - theta
    }))
}

/// `2k / (2k + 1)`: at or above it `M_{1,1}` never turns negative.
pub fn theta_cap(k: u32) -> f64 {
    let m = 2.0 * k as f64;
    m / (m + 1.0)
}

fn nu_of_y(y: f64, theta: f64) -> f64 {
    2.0 * y / (1.0 - y * y) / theta
}

/// Lower CFL bound `nu_R(k, theta)`.
pub fn nu_r(k: u32, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(nu_of_y(root_y_r(k, Y_ROOT_TOL)?, theta))
}

/// Upper CFL bound `nu_L(k, theta)`, infinite for `theta >= 2k/(2k+1)`.
pub fn nu_l(k: u32, theta: f64) -> Result<NuBound> {
    check_k(k)?;
    check_theta(theta)?;
    if theta >= theta_cap(k) {
        return Ok(NuBound::Infinite);
    }
    Ok(NuBound::Finite(nu_of_y(
        root_y_l(k, theta, Y_ROOT_TOL)?,
        theta,
    )))
}

/// `theta_k = Theta(y_R(k), k)`, the smallest theta with a non-empty region.
pub fn theta_crit(k: u32) -> Result<f64> {
    theta_fn(root_y_r(k, Y_ROOT_TOL)?, k)
}

/// Strict bracket `((sqrt2 - 1)^{1/(2k-1)}, (sqrt2 - 1)^{1/(2k+1)})` around `y_R(k)`.
pub fn y_r_bracket(k: u32) -> Result<(f64, f64)> {
    check_k(k)?;
    let base = std::f64::consts::SQRT_2 - 1.0;
    let k = k as f64;
    Ok((
        base.powf(1.0 / (2.0 * k - 1.0)),
        base.powf(1.0 / (2.0 * k + 1.0)),
    ))
}

/// Strict bracket around `nu_R(k, theta)`, the image of [`y_r_bracket`].
pub fn nu_r_bracket(k: u32, theta: f64) -> Result<(f64, f64)> {
    check_theta(theta)?;
    check_k(k)?;
    let kf = k as f64;
    let up = std::f64::consts::SQRT_2 + 1.0;
    let down = std::f64::consts::SQRT_2 - 1.0;
    let a = up.powf(1.0 / (2.0 * kf - 1.0));
    let lower = 2.0 * a / (a * a - 1.0) / theta;
    let b = down.powf(1.0 / (2.0 * kf + 1.0));
    let upper = 2.0 * b / (1.0 - b * b) / theta;
    Ok((lower, upper))
}

/// `lim_{k -> inf} nu_L(k, theta) = sqrt((2 - theta)/theta) / (1 - theta)`.
pub fn nu_l_limit(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(invalid(format!("theta must lie in (0, 1), got {theta}")));
    }
    Ok(((2.0 - theta) / theta).sqrt() / (1.0 - theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub theta: f64,
    pub nu_r: f64,
    pub nu_l: NuBound,
}

impl BoundarySample {
    /// Whether the region `[nu_R, nu_L]` is non-empty at this theta.
    pub fn is_open(&self) -> bool {
        self.nu_l.admits(self.nu_r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub k: u32,
    pub theta_crit: f64,
    pub samples: Vec<BoundarySample>,
}

pub fn boundary_curve(k: u32, thetas: &[f64]) -> Result<BoundaryCurve> {
    let samples = thetas
        .iter()
        .map(|&theta| {
            Ok(BoundarySample {
                theta,
                nu_r: nu_r(k, theta)?,
                nu_l: nu_l(k, theta)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryCurve {
        k,
        theta_crit: theta_crit(k)?,
        samples,
    })
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(invalid(format!("theta must lie in (0, 1], got {theta}")));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}
