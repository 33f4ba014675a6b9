//! Time stepping of `u^{n+1} = M u^n` for `U_t = a U_x` on the unit periodic domain.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fullstep::{build_m_trig, FullStepParams};
use crate::schemes::SchemeKind;

/// Initial data on `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `1 + sin(2 pi x)`.
    SineBump,
    /// Indicator of `[0, 1/2)`.
    IndicatorStep,
    /// `exp(-((x - 1/2) / 0.1)^2)`.
    GaussianBump,
    /// Grid values at `x_j = j / n`, read back by periodic nearest-point lookup.
    Samples(Vec<f64>),
}

impl Profile {
    /// Standard basis vector `e_i` (1-based) on an `m`-point grid.
    pub fn basis(m: usize, i: usize) -> Result<Self> {
        if i == 0 || i > m {
            return Err(invalid(format!("basis index {i} outside 1..={m}")));
        }
        let mut v = vec![0.0; m];
        v[i - 1] = 1.0;
        Ok(Profile::Samples(v))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x - x.floor();
        match self {
            Profile::SineBump => 1.0 + (2.0 * std::f64::consts::PI * x).sin(),
            Profile::IndicatorStep => {
                if x < 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::GaussianBump => (-((x - 0.5) / 0.1).powi(2)).exp(),
            Profile::Samples(v) => {
                let n = v.len();
                v[((x * n as f64).round() as usize) % n]
            }
        }
    }

    pub fn sample(&self, m: usize) -> Vec<f64> {
        (0..m).map(|j| self.eval(j as f64 / m as f64)).collect()
    }

    fn check(&self) -> Result<()> {
        if let Profile::Samples(v) = self {
            if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                return Err(invalid("sample profile must be non-empty and finite"));
            }
        }
        Ok(())
    }
}

/// `U(x, t) = U_0(frac(x + a t))`.
pub fn exact_solution(profile: &Profile, x: f64, t: f64, a: f64) -> f64 {
    profile.eval(x + a * t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub kind: SchemeKind,
    pub m: usize,
    pub theta: f64,
    /// Wave speed, positive.
    pub a: f64,
    pub nu: f64,
    pub steps: usize,
    pub profile: Profile,
    #[serde(default)]
    pub record_trajectory: bool,
}

impl SimulationConfig {
    pub fn dx(&self) -> f64 {
        1.0 / self.m as f64
    }

    pub fn dt(&self) -> f64 {
        self.nu * self.dx() / self.a
    }

    fn validate(&self) -> Result<FullStepParams> {
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(invalid(format!(
                "wave speed must be positive, got {}",
                self.a
            )));
        }
        if self.steps == 0 {
            return Err(invalid("steps must be positive"));
        }
        self.profile.check()?;
        if let Profile::Samples(v) = &self.profile {
            if v.len() != self.m {
                return Err(invalid(format!(
                    "sample profile has {} values, grid has {}",
                    v.len(),
                    self.m
                )));
            }
        }
        FullStepParams::new(self.kind, self.m, self.theta, self.nu)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    /// Smallest component over steps `0..=steps`.
    pub min_over_run: f64,
    /// First step with a component below `-tol`.
    pub first_violation_step: Option<usize>,
    /// Max-norm error against the exact solution at the final time.
    pub final_error_max: f64,
    /// Largest `|mean(u^n) - mean(u^0)|`.
    pub mean_drift: f64,
    pub final_time: f64,
    /// `trajectory[n]` is `u^n`, present when requested.
    pub trajectory: Option<Vec<Vec<f64>>>,
}

pub fn run(config: &SimulationConfig, tol: f64) -> Result<SimulationReport> {
    if !(tol >= 0.0) {
        return Err(invalid(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    let params = config.validate()?;
    let m = build_m_trig(&params)?.matrix;

    let mut u = config.profile.sample(config.m);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let mean0 = mean(&u);
    let mut min_over_run = f64::INFINITY;
    let mut first_violation_step = None;
    let mut mean_drift: f64 = 0.0;
    let mut trajectory = config.record_trajectory.then(Vec::new);

    for step in 0..=config.steps {
        if step > 0 {
            u = m.apply(&u)?;
        }
        let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
        min_over_run = min_over_run.min(lo);
        if lo < -tol && first_violation_step.is_none() {
            first_violation_step = Some(step);
        }
        mean_drift = mean_drift.max((mean(&u) - mean0).abs());
        if let Some(t) = trajectory.as_mut() {
            t.push(u.clone());
        }
    }

    let final_time = config.steps as f64 * config.dt();
    let final_error_max = u
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let x = j as f64 * config.dx();
            (v - exact_solution(&config.profile, x, final_time, config.a)).abs()
        })
        .fold(0.0, f64::max);

    Ok(SimulationReport {
        min_over_run,
        first_violation_step,
        final_error_max,
        mean_drift,
        final_time,
        trajectory,
    })
}

/// CFL number held fixed across refinements by [`convergence_order`].
pub const CONVERGENCE_NU: f64 = 0.5;
/// Coarsest grid of the refinement ladder.
pub const CONVERGENCE_BASE_M: usize = 32;

/// Least-squares slope of `log(error)` against `log(dx)` at `t = 1`.
///
/// Grids are `32 * 2^i`, `i < refinements`; the step count is rounded up so
/// that `nu <= 0.5` and the final time is exactly 1.
pub fn convergence_order(
    kind: SchemeKind,
    theta: f64,
    a: f64,
    profile: &Profile,
    refinements: usize,
) -> Result<f64> {
    if refinements < 3 {
        return Err(invalid(format!(
            "need at least 3 refinements, got {refinements}"
        )));
    }
    if matches!(profile, Profile::Samples(_)) {
        return Err(invalid("convergence needs a profile defined on [0, 1)"));
    }
    let points = (0..refinements)
        .into_par_iter()
        .map(|i| {
            let m = CONVERGENCE_BASE_M << i;
            let steps = (a * m as f64 / CONVERGENCE_NU).ceil() as usize;
            let config = SimulationConfig {
                kind,
                m,
                theta,
                a,
                nu: a * m as f64 / steps as f64,
                steps,
                profile: profile.clone(),
                record_trajectory: false,
            };
            let err = run(&config, f64::INFINITY)?.final_error_max;
            Ok(((1.0 / m as f64).ln(), err.ln()))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_solution_is_a_periodic_shift() {
        let p = Profile::SineBump;
        assert_eq!(exact_solution(&p, 0.3, 0.0, 1.0), p.eval(0.3));
        assert_abs_diff_eq!(
            exact_solution(&p, 0.3, 1.0, 1.0),
            p.eval(0.3),
            epsilon = 1e-12
        );
        assert_eq!(exact_solution(&Profile::IndicatorStep, 0.4, 0.25, 1.0), 0.0);
        assert_eq!(exact_solution(&Profile::IndicatorStep, 0.2, 0.25, 1.0), 1.0);
    }

    #[test]
    fn basis_profile_samples_back() {
        let p = Profile::basis(4, 2).unwrap();
        assert_eq!(p.sample(4), vec![0.0, 1.0, 0.0, 0.0]);
        assert!(Profile::basis(4, 0).is_err());
        assert!(Profile::basis(4, 5).is_err());
    }

    #[test]
    fn upwind_forward_euler_stays_nonnegative() {
        let cfg = SimulationConfig {
            kind: SchemeKind::Upwind1,
            m: 10,
            theta: 0.0,
            a: 1.0,
            nu: 0.5,
            steps: 40,
            profile: Profile::IndicatorStep,
            record_trajectory: true,
        };
        let r = run(&cfg, 1e-12).unwrap();
        assert_eq!(r.first_violation_step, None);
        assert!(r.min_over_run >= 0.0);
        assert_eq!(r.trajectory.unwrap().len(), 41);
    }

    #[test]
    fn config_is_validated() {
        let mut cfg = SimulationConfig {
            kind: SchemeKind::Centered2,
            m: 5,
            theta: 1.0,
            a: 1.0,
            nu: 5.0,
            steps: 3,
            profile: Profile::Samples(vec![1.0; 4]),
            record_trajectory: false,
        };
        assert!(run(&cfg, 1e-12).is_err());
        cfg.profile = Profile::SineBump;
        cfg.a = 0.0;
        assert!(run(&cfg, 1e-12).is_err());
        cfg.a = 1.0;
        cfg.steps = 0;
        assert!(run(&cfg, 1e-12).is_err());
        cfg.steps = 3;
        assert!(run(&cfg, -1.0).is_err());
        assert!(run(&cfg, 0.0).is_ok());
    }
}
