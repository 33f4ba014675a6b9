//! Self-check suites run by `advpos verify`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::closed_form::{
    det_d_closed, det_d_recursive, verify_corollary1_perturbed, y_from, YCoordinate,
};
use crate::error::{invalid, Error, Result};
use crate::region::{
    jll_nu_star, nu_r, nu_r_bracket, root_y_r, theta_crit, y_r_bracket, Y_ROOT_TOL,
};

/// Published `nu_*(p, q)` for `m = 5`, `theta = 1`; rows `q = 2, 3`, columns `p = 1..9`.
pub const JLL_REFERENCE: [[f64; 9]; 2] = [
    [
        3.0074, 1.462, 0.9669, 0.7219, 0.5753, 0.4778, 0.4082, 0.3563, 0.3160,
    ],
    [
        2.1497, 1.0269, 0.6694, 0.4941, 0.3907, 0.3227, 0.2749, 0.2393, 0.2119,
    ],
];
pub const JLL_TOL: f64 = 2e-3;
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Recursions,
    Bounds,
    Jll,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Identities,
        Suite::Recursions,
        Suite::Bounds,
        Suite::Jll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Recursions => "recursions",
            Suite::Bounds => "bounds",
            Suite::Jll => "jll",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| invalid(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, suite: Suite) -> SuiteResult {
        SuiteResult {
            suite,
            checks: self.checks,
            failures: self.failures,
        }
    }
}

const THETAS: [f64; 5] = [0.25, 0.5, 0.6, 0.75, 1.0];
const NUS: [f64; 5] = [0.05, 0.7, 2.0, 4.0, 25.0];

/// Runs one suite. `perturb` scales the constant coefficient of the `M_{1,1}`
/// numerator in the identity suite; any factor other than 1 should fail it.
pub fn run_suite(suite: Suite, perturb: Option<f64>) -> Result<SuiteResult> {
    let mut t = Tally::new();
    match suite {
        Suite::Identities => {
            let factor = perturb.unwrap_or(1.0);
            for k in 1..=10 {
                for &theta in &THETAS {
                    for &nu in &NUS {
                        let r = verify_corollary1_perturbed(k, theta, nu, IDENTITY_TOL, factor)?;
                        t.check(r.passed, || {
                            format!(
                                "k={k} theta={theta} nu={nu}: discrepancy {:e}",
                                r.max_discrepancy
                            )
                        });
                    }
                }
            }
        }
        Suite::Recursions => {
            for k in 1..=20 {
                for &theta in &THETAS {
                    for &nu in &NUS {
                        let y = y_from(theta, nu)?;
                        let closed = det_d_closed(k, y)?;
                        let rec = det_d_recursive(k, y.mu())?;
                        let rel = (closed - rec).abs() / closed.abs();
                        t.check(rel <= IDENTITY_TOL, || {
                            format!("D_{k} at theta={theta} nu={nu}: relative gap {rel:e}")
                        });
                    }
                }
                let y = YCoordinate::new(0.5)?;
                let back = y_from(1.0, crate::closed_form::nu_from(y, 1.0)?)?.value();
                t.check((back - 0.5).abs() < 1e-15, || {
                    format!("y round trip gave {back}")
                });
            }
        }
        Suite::Bounds => {
            let mut prev_y = 0.0;
            let mut prev_theta = 0.0;
            for k in 1..=50 {
                let y = root_y_r(k, Y_ROOT_TOL)?;
                let (lo, hi) = y_r_bracket(k)?;
                t.check(lo < y && y < hi, || {
                    format!("y_R({k}) = {y} outside ({lo}, {hi})")
                });
                t.check(y > prev_y, || format!("y_R not increasing at k={k}"));
                prev_y = y;
                for theta in [0.5, 0.75, 1.0] {
                    let v = nu_r(k, theta)?;
                    let (lo, hi) = nu_r_bracket(k, theta)?;
                    t.check(lo < v && v < hi, || {
                        format!("nu_R({k}, {theta}) = {v} outside ({lo}, {hi})")
                    });
                }
                if k <= 20 {
                    let tc = theta_crit(k)?;
                    t.check(tc > prev_theta, || {
                        format!("theta_k not increasing at k={k}")
                    });
                    prev_theta = tc;
                }
            }
        }
        Suite::Jll => {
            for (qi, row) in JLL_REFERENCE.iter().enumerate() {
                for (pi, &want) in row.iter().enumerate() {
                    let (p, q) = (pi as u32 + 1, qi as u32 + 2);
                    let got = jll_nu_star(5, 1.0, p, q, 100.0)?;
                    t.check((got - want).abs() <= JLL_TOL, || {
                        format!("nu_*({p}, {q}) = {got}, table gives {want}")
                    });
                }
            }
        }
    }
    Ok(t.finish(suite))
}
