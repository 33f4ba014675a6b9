//! Numeric region scans in the `(theta, nu)` plane for every scheme.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bisect_predicate;
use super::boundary::{nu_r_bracket, NuBound};
use crate::error::{invalid, Error, Result};
use crate::fullstep::{FullStepParams, RowEvaluator, IMAG_RESIDUE_CAP_PER_POINT};
use crate::schemes::SchemeKind;

/// Smallest `nu` probed by [`nu_interval_numeric`].
pub const NU_SCAN_FLOOR: f64 = 1e-4;
pub const NU_POINTS_PER_DECADE: usize = 400;
/// Entry tolerance used inside [`corner_theta`].
pub const CORNER_ENTRY_TOL: f64 = 1e-10;

const EDGE_REL_TOL: f64 = 1e-12;
const GOLDEN_STEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuInterval {
    /// 0 when the predicate already holds at the scan floor.
    pub lo: f64,
    pub hi: NuBound,
}

impl NuInterval {
    pub fn contains(&self, nu: f64) -> bool {
        nu >= self.lo && self.hi.admits(nu)
    }
}

/// Maximal `nu` intervals where `min_j M_{1,j} >= -tol`, in increasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuScan {
    pub intervals: Vec<NuInterval>,
}

impl NuScan {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// More than one interval was found.
    pub fn is_connected(&self) -> bool {
        self.intervals.len() <= 1
    }

    /// Outermost `(lo, hi)` over all intervals.
    pub fn span(&self) -> Option<NuInterval> {
        let first = self.intervals.first()?;
        let last = self.intervals.last()?;
        Some(NuInterval {
            lo: first.lo,
            hi: last.hi,
        })
    }
}

/// `min_j M_{1,j} + tol`; non-negative exactly where the predicate holds.
fn margin(ev: &RowEvaluator, theta: f64, nu: f64, tol: f64) -> Result<f64> {
    let (row, residue) = ev.row(theta, nu)?;
    let cap = IMAG_RESIDUE_CAP_PER_POINT * ev.m() as f64;
    if residue > cap {
        return Err(Error::ImaginaryResidue { residue, cap });
    }
    Ok(row.iter().copied().fold(f64::INFINITY, f64::min) + tol)
}

fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1);
    (0..=n)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo * 10f64.powf(decades * i as f64 / n as f64)
            }
        })
        .collect()
}

// Bisection that surfaces the first evaluation error.
fn edge<F: Fn(f64) -> Result<f64>>(lo: f64, hi: f64, f: &F) -> Result<f64> {
    let mut err = None;
    let x = bisect_predicate(lo, hi, EDGE_REL_TOL, |nu| match f(nu) {
        Ok(v) => v >= 0.0,
        Err(e) => {
            err.get_or_insert(e);
            false
        }
    });
    err.map_or(Ok(x), Err)
}

// Golden-section maximization of f over [a, b] in log(nu).
fn golden_max<F: Fn(f64) -> Result<f64>>(a: f64, b: f64, f: &F) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a.ln(), b.ln());
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1.exp())?;
    let mut f2 = f(x2.exp())?;
    for _ in 0..GOLDEN_STEPS {
        if f1 >= 0.0 {
            return Ok((x1.exp(), f1));
        }
        if f2 >= 0.0 {
            return Ok((x2.exp(), f2));
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2.exp())?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1.exp())?;
        }
    }
    Ok(if f1 >= f2 {
        (x1.exp(), f1)
    } else {
        (x2.exp(), f2)
    })
}

/// Intervals in `(0, nu_max]` where `M(kind, m, theta, nu) >= -tol` entrywise.
///
/// A log grid with 400 points per decade is scanned from [`NU_SCAN_FLOOR`],
/// negative local maxima are refined to catch narrow regions, and every sign
/// change is bisected. The last interval is open-ended when the predicate
/// holds at `nu_max` and the large-`nu` limit row is non-negative.
pub fn nu_interval_numeric(
    kind: SchemeKind,
    m: usize,
    theta: f64,
    nu_max: f64,
    tol: f64,
) -> Result<NuScan> {
    if m.is_multiple_of(2) {
        return Err(invalid(format!("m must be odd, got {m}")));
    }
    if !(nu_max > NU_SCAN_FLOOR) || !nu_max.is_finite() {
        return Err(invalid(format!(
            "nu_max must exceed {NU_SCAN_FLOOR}, got {nu_max}"
        )));
    }
    if !(tol >= 0.0) {
        return Err(invalid(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    FullStepParams::new(kind, m, theta, nu_max)?;
    let ev = RowEvaluator::new(kind, m)?;
    let f = |nu: f64| margin(&ev, theta, nu, tol);

    let grid = log_grid(NU_SCAN_FLOOR, nu_max, NU_POINTS_PER_DECADE);
    let g = grid
        .par_iter()
        .map(|&nu| f(nu))
        .collect::<Result<Vec<f64>>>()?;
    let n = grid.len();

    // (lo, hi) pairs in nu, hi = None for open at nu_max
    let mut raw: Vec<(f64, Option<f64>)> = Vec::new();
    let mut start = if g[0] >= 0.0 { Some(0.0) } else { None };
    for i in 1..n {
        match (g[i - 1] >= 0.0, g[i] >= 0.0) {
            (false, true) => start = Some(edge(grid[i - 1], grid[i], &f)?),
            (true, false) => {
                let hi = edge(grid[i - 1], grid[i], &f)?;
                raw.push((start.take().unwrap_or(0.0), Some(hi)));
            }
            (false, false) => {
                let peak = i + 1 < n && g[i] >= g[i - 1] && g[i] >= g[i + 1] && g[i + 1] < 0.0;
                if peak {
                    let (x, v) = golden_max(grid[i - 1], grid[i + 1], &f)?;
                    if v >= 0.0 {
                        let lo_side = if x <= grid[i] { grid[i - 1] } else { grid[i] };
                        let hi_side = if x <= grid[i] { grid[i] } else { grid[i + 1] };
                        raw.push((edge(lo_side, x, &f)?, Some(edge(x, hi_side, &f)?)));
                    }
                }
            }
            (true, true) => {}
        }
    }
    if let Some(lo) = start {
        raw.push((lo, None));
    }
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));

    let limit_ok = ev
        .limit_row(theta)
        .is_some_and(|row| row.iter().all(|&v| v >= -tol));
    let intervals = raw
        .into_iter()
        .map(|(lo, hi)| NuInterval {
            lo,
            hi: match hi {
                Some(h) => NuBound::Finite(h),
                None if limit_ok => NuBound::Infinite,
                None => NuBound::Finite(nu_max),
            },
        })
        .collect();
    Ok(NuScan { intervals })
}

/// Scan ceiling used for the emptiness test inside [`corner_theta`].
pub fn corner_nu_max(kind: SchemeKind, m: usize, theta: f64) -> Result<f64> {
    match kind {
        SchemeKind::Centered2 => {
            let k = ((m - 1) / 2) as u32;
            Ok(10.0 * nu_r_bracket(k, theta)?.1)
        }
        _ => Ok(1e4),
    }
}

/// Smallest `theta` for which the numeric `nu` region is non-empty, to `tol`.
pub fn corner_theta(kind: SchemeKind, m: usize, tol: f64) -> Result<f64> {
    if kind == SchemeKind::Upwind1 {
        return Err(Error::UnsupportedScheme(kind));
    }
    if m.is_multiple_of(2) {
        return Err(invalid(format!("m must be odd, got {m}")));
    }
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    kind.check_order(m)?;
    let non_empty = |theta: f64| -> Result<bool> {
        if theta <= 0.0 {
            return Ok(false);
        }
        let nu_max = corner_nu_max(kind, m, theta)?;
        Ok(!nu_interval_numeric(kind, m, theta, nu_max, CORNER_ENTRY_TOL)?.is_empty())
    };
    if !non_empty(1.0)? {
        return Err(Error::OutOfRange(format!(
            "{kind} with m = {m} has no non-negative region even at theta = 1"
        )));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if non_empty(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSample {
    pub kind: SchemeKind,
    pub m: usize,
    pub theta: f64,
    pub nu: f64,
    pub min_entry: f64,
    pub nonneg: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionScan {
    pub tol: f64,
    /// Theta-major: all `nu` values for the first theta come first.
    pub samples: Vec<RegionSample>,
}

impl RegionScan {
    pub fn nonneg_count(&self) -> usize {
        self.samples.iter().filter(|s| s.nonneg).count()
    }
}

pub fn region_scan(
    kind: SchemeKind,
    m: usize,
    thetas: &[f64],
    nus: &[f64],
    tol: f64,
) -> Result<RegionScan> {
    if thetas.is_empty() || nus.is_empty() {
        return Err(invalid("region grids must be non-empty"));
    }
    if !(tol >= 0.0) {
        return Err(invalid(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    for &theta in thetas {
        for &nu in nus {
            FullStepParams::new(kind, m, theta, nu)?;
        }
    }
    let ev = RowEvaluator::new(kind, m)?;
    let samples = (0..thetas.len() * nus.len())
        .into_par_iter()
        .map(|idx| {
            let theta = thetas[idx / nus.len()];
            let nu = nus[idx % nus.len()];
            let min_entry = margin(&ev, theta, nu, 0.0)?;
            Ok(RegionSample {
                kind,
                m,
                theta,
                nu,
                min_entry,
                nonneg: min_entry >= -tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionScan { tol, samples })
}

/// `M_{1,m}`, the entry that turns negative for even `m`.
pub fn even_m_negativity_witness(kind: SchemeKind, m: usize, theta: f64, nu: f64) -> Result<f64> {
    if !m.is_multiple_of(2) {
        return Err(invalid(format!("m must be even, got {m}")));
    }
    FullStepParams::new(kind, m, theta, nu)?;
    let (row, _) = RowEvaluator::new(kind, m)?.row(theta, nu)?;
    Ok(row[m - 1])
}

/// `p_8(y) = -3(8 + 3 sqrt2) y^4 + 64 y^3 - 32(7 + 5 sqrt2) y^2 + 256 y - 256(2 + sqrt2)`.
///
/// For the spectral scheme with `m = 8`, `M_{1,8}` has the sign of `p_8(pi theta nu)`.
pub fn eval_p8(y: f64) -> f64 {
    let s = std::f64::consts::SQRT_2;
    let c4 = -3.0 * (8.0 + 3.0 * s);
    let c2 = -32.0 * (7.0 + 5.0 * s);
    let c0 = -256.0 * (2.0 + s);
    (((c4 * y + 64.0) * y + c2) * y + 256.0) * y + c0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn centered2_m3_backward_euler_interval() {
        let s = nu_interval_numeric(SchemeKind::Centered2, 3, 1.0, 100.0, 1e-6).unwrap();
        assert_eq!(s.intervals.len(), 1);
        let iv = s.intervals[0];
        assert_abs_diff_eq!(iv.lo, 2.0, epsilon = 1e-4);
        assert!(iv.hi.is_infinite());
    }

    #[test]
    fn below_half_is_empty() {
        let s = nu_interval_numeric(SchemeKind::Centered2, 3, 0.4, 100.0, 1e-6).unwrap();
        assert!(s.is_empty());
        assert!(s.span().is_none());
    }

    #[test]
    fn narrow_region_is_caught() {
        // just above theta_1 = 1/2 the region is a short interval around nu = 4
        let s = nu_interval_numeric(SchemeKind::Centered2, 3, 0.5005, 100.0, 1e-12).unwrap();
        assert_eq!(s.intervals.len(), 1);
        let iv = s.intervals[0];
        let hi = iv.hi.finite().unwrap();
        assert!(iv.lo < 4.0 && hi > 3.99 && hi - iv.lo < 0.5);
    }

    #[test]
    fn even_m_rejected() {
        assert!(nu_interval_numeric(SchemeKind::Centered2, 4, 1.0, 100.0, 1e-6).is_err());
        assert!(corner_theta(SchemeKind::Centered2, 4, 1e-6).is_err());
        assert!(even_m_negativity_witness(SchemeKind::Centered2, 5, 1.0, 1.0).is_err());
    }

    #[test]
    fn p8_constant_term() {
        assert_abs_diff_eq!(eval_p8(0.0), -256.0 * (2.0 + 2f64.sqrt()), epsilon = 1e-12);
        assert_abs_diff_eq!(eval_p8(0.0), -874.0387, epsilon = 1e-4);
    }

    #[test]
    fn region_scan_order_is_theta_major() {
        let r = region_scan(
            SchemeKind::Centered2,
            3,
            &[0.5, 1.0],
            &[1.0, 4.0, 8.0],
            1e-12,
        )
        .unwrap();
        assert_eq!(r.samples.len(), 6);
        assert_eq!((r.samples[1].theta, r.samples[1].nu), (0.5, 4.0));
        assert_eq!((r.samples[3].theta, r.samples[3].nu), (1.0, 1.0));
        assert!(r.samples[1].nonneg);
        assert!(!r.samples[0].nonneg);
        assert!(region_scan(SchemeKind::Centered2, 3, &[], &[1.0], 1e-12).is_err());
    }
}
