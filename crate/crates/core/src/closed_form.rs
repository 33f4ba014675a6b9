//! Closed forms for the centered second-order scheme with odd `m = 2k + 1`.
//!
//! Every entry of the first row of `M` is a ratio of sparse polynomials in
//! `y = (sqrt(1 + theta^2 nu^2) - 1) / (theta nu)`, which lives in `(0, 1)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fullstep::{build_m_direct, build_m_trig, FullStepParams};
use crate::schemes::SchemeKind;

/// Largest `y` at which closed-form entries are evaluated; both numerator and
/// denominator vanish as `y -> 1`.
pub const Y_EVAL_LIMIT: f64 = 1.0 - 1e-8;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparsePolynomial {
    terms: Vec<(u32, f64)>,
}

impl SparsePolynomial {
    /// Sorts by exponent, merges duplicates and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, f64)>) -> Self {
        let mut raw: Vec<(u32, f64)> = terms.into_iter().collect();
        raw.sort_by_key(|t| t.0);
        let mut merged: Vec<(u32, f64)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        Self { terms: merged }
    }

    pub fn terms(&self) -> &[(u32, f64)] {
        &self.terms
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|t| t.0)
    }

    /// Evaluates term by term, advancing the running power by each exponent gap.
    pub fn eval(&self, y: f64) -> f64 {
        let mut power = 1.0;
        let mut at = 0u32;
        let mut acc = 0.0;
        for &(e, c) in &self.terms {
            power *= y.powi((e - at) as i32);
            at = e;
            acc += c * power;
        }
        acc
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.1).sum()
    }

    /// Copy with the coefficient of `exponent` scaled by `factor`.
    pub fn scale_term(&self, exponent: u32, factor: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|&(e, c)| {
            if e == exponent {
                (e, c * factor)
            } else {
                (e, c)
            }
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct YCoordinate(f64);

impl YCoordinate {
    pub fn new(y: f64) -> Result<Self> {
        if !(y > 0.0 && y < 1.0) {
            return Err(invalid(format!("y must lie in (0, 1), got {y}")));
        }
        Ok(Self(y))
    }

    /// Builds `y` from `mu = theta^2 nu^2 > 0`.
    pub fn from_mu(mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(invalid(format!("mu must be positive, got {mu}")));
        }
        let s = mu.sqrt();
        Self::new(s / ((1.0 + mu).sqrt() + 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `mu = (2y / (1 - y^2))^2`.
    pub fn mu(self) -> f64 {
        let t = 2.0 * self.0 / (1.0 - self.0 * self.0);
        t * t
    }
}

pub fn y_from(theta: f64, nu: f64) -> Result<YCoordinate> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(invalid(format!(
            "y transform needs theta in (0, 1], got {theta}"
        )));
    }
    if !(nu > 0.0) {
        return Err(invalid(format!("nu must be positive, got {nu}")));
    }
    // sqrt(mu) / (sqrt(1 + mu) + 1) avoids the cancellation in the raw form
    let s = theta * nu;
    YCoordinate::new(s / ((1.0 + s * s).sqrt() + 1.0))
}

pub fn nu_from(y: YCoordinate, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(invalid(format!("theta must lie in (0, 1], got {theta}")));
    }
    let y = y.value();
    Ok(2.0 * y / (1.0 - y * y) / theta)
}

/// `D_k = det(I - theta nu L) = (1 - y^{4k+2}) / (1 - y^2)^{2k+1}`.
pub fn det_d_closed(k: u32, y: YCoordinate) -> Result<f64> {
    check_k(k)?;
    let y = y.value();
    Ok((1.0 - y.powi(4 * k as i32 + 2)) / (1.0 - y * y).powi(2 * k as i32 + 1))
}

/// `D_k` from `D_{k+2} = (1 + mu/2) D_{k+1} - (mu^2/16) D_k`.
pub fn det_d_recursive(k: u32, mu: f64) -> Result<f64> {
    check_k(k)?;
    if !(mu > 0.0) {
        return Err(invalid(format!("mu must be positive, got {mu}")));
    }
    let d1 = 1.0 + 0.75 * mu;
    let d2 = 1.0 + 1.25 * mu + 5.0 * mu * mu / 16.0;
    Ok(second_order_recursion(k, mu, d1, d2))
}

/// Shared recursion for `D_k` and the numerator of `M_{1,1}`.
pub(crate) fn second_order_recursion(k: u32, mu: f64, first: f64, second: f64) -> f64 {
    if k == 1 {
        return first;
    }
    let (a, b) = (1.0 + mu / 2.0, mu * mu / 16.0);
    let (mut prev, mut cur) = (first, second);
    for _ in 2..k {
        let next = a * cur - b * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Numerator of `M_{1,1}`: `-theta y^{4k+4} - (theta-2) y^{4k+2} + (theta-2) y^2 + theta`.
pub fn poly_pl(k: u32, theta: f64) -> Result<SparsePolynomial> {
    check_k(k)?;
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(invalid(format!("theta must lie in (0, 1], got {theta}")));
    }
    Ok(SparsePolynomial::from_terms([
        (4 * k + 4, -theta),
        (4 * k + 2, -(theta - 2.0)),
        (2, theta - 2.0),
        (0, theta),
    ]))
}

/// Numerator of `M_{1,m}`: `y^{4k} + y^{2k+1} + y^{2k-1} - 1`.
pub fn poly_pr(k: u32) -> Result<SparsePolynomial> {
    check_k(k)?;
    Ok(SparsePolynomial::from_terms([
        (4 * k, 1.0),
        (2 * k + 1, 1.0),
        (2 * k - 1, 1.0),
        (0, -1.0),
    ]))
}

/// `P_{j,k} = (-1)^{j-1} y^{4k+2-j} + y^{2k-1+j} + (-1)^j y^{2k+1-j} + y^{j-2}` for `2 <= j <= 2k+1`.
pub fn poly_pjk(j: u32, k: u32) -> Result<SparsePolynomial> {
    check_k(k)?;
    if j < 2 || j > 2 * k + 1 {
        return Err(invalid(format!("j must lie in 2..={}, got {j}", 2 * k + 1)));
    }
    let odd_j = if j % 2 == 1 { 1.0 } else { -1.0 };
    Ok(SparsePolynomial::from_terms([
        (4 * k + 2 - j, odd_j),
        (2 * k - 1 + j, 1.0),
        (2 * k + 1 - j, -odd_j),
        (j - 2, 1.0),
    ]))
}

/// `M_{1,j}(2k+1, theta, nu)` from the sparse polynomials.
pub fn entry_closed(j: u32, k: u32, theta: f64, nu: f64) -> Result<f64> {
    let y = y_from(theta, nu)?;
    entry_closed_with(j, k, theta, nu, y, &poly_pl(k, theta)?, None)
}

fn entry_closed_with(
    j: u32,
    k: u32,
    theta: f64,
    nu: f64,
    y: YCoordinate,
    pl: &SparsePolynomial,
    pjk: Option<&SparsePolynomial>,
) -> Result<f64> {
    check_k(k)?;
    if j == 0 || j > 2 * k + 1 {
        return Err(invalid(format!("j must lie in 1..={}, got {j}", 2 * k + 1)));
    }
    let yv = y.value();
    if yv > Y_EVAL_LIMIT {
        return Err(Error::OutOfRange(format!(
            "y = {yv} is beyond the closed-form evaluation limit {Y_EVAL_LIMIT}"
        )));
    }
    let y2 = yv * yv;
    let tail = 1.0 - yv.powi(4 * k as i32 + 2);
    if j == 1 {
        return Ok(pl.eval(yv) / ((1.0 + y2) * tail * theta));
    }
    let value = match pjk {
        Some(p) => p.eval(yv),
        None => poly_pjk(j, k)?.eval(yv),
    };
    Ok(nu * (1.0 - y2).powi(2) * value / (2.0 * (1.0 + y2) * tail))
}

/// `prod_l (1 - i theta nu sin(xi_l))` over `m = 2k + 1` angles.
pub fn det_product(k: u32, theta: f64, nu: f64) -> Result<Complex64> {
    check_k(k)?;
    let m = 2 * k as usize + 1;
    Ok((0..m)
        .map(|l| {
            let xi = 2.0 * PI * l as f64 / m as f64;
            Complex64::new(1.0, -theta * nu * xi.sin())
        })
        .product())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corollary1Report {
    pub k: u32,
    pub theta: f64,
    pub nu: f64,
    /// Largest `|trig - closed|` over the first row.
    pub trig_vs_closed: f64,
    /// Largest `|direct - closed|` over the first row.
    pub direct_vs_closed: f64,
    /// Largest `|trig - direct|` over the first row.
    pub trig_vs_direct: f64,
    /// Relative gap between the determinant product, its closed form and the recursion.
    pub determinant: f64,
    pub max_discrepancy: f64,
    pub passed: bool,
}

/// Checks the trigonometric, closed-form and direct-solve first rows, plus the
/// determinant product identity, against each other.
pub fn verify_corollary1(k: u32, theta: f64, nu: f64, tol: f64) -> Result<Corollary1Report> {
    verify_corollary1_perturbed(k, theta, nu, tol, 1.0)
}

/// As [`verify_corollary1`], with the constant term of the `M_{1,1}` numerator
/// scaled by `factor` (1 leaves it untouched). Used to confirm the harness fails.
pub fn verify_corollary1_perturbed(
    k: u32,
    theta: f64,
    nu: f64,
    tol: f64,
    factor: f64,
) -> Result<Corollary1Report> {
    check_k(k)?;
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    let m = 2 * k as usize + 1;
    let params = FullStepParams::new(SchemeKind::Centered2, m, theta, nu)?;
    let trig = build_m_trig(&params)?;
    let direct = build_m_direct(&params)?;
    let y = y_from(theta, nu)?;
    let pl = poly_pl(k, theta)?.scale_term(0, factor);

    let mut trig_vs_closed: f64 = 0.0;
    let mut direct_vs_closed: f64 = 0.0;
    let mut trig_vs_direct: f64 = 0.0;
    for j in 1..=m {
        let closed = entry_closed_with(j as u32, k, theta, nu, y, &pl, None)?;
        let t = trig.first_row()[j - 1];
        let d = direct.first_row()[j - 1];
        trig_vs_closed = trig_vs_closed.max((t - closed).abs());
        direct_vs_closed = direct_vs_closed.max((d - closed).abs());
        trig_vs_direct = trig_vs_direct.max((t - d).abs());
    }

    let product = det_product(k, theta, nu)?;
    let closed_det = det_d_closed(k, y)?;
    let rec_det = det_d_recursive(k, theta * theta * nu * nu)?;
    let determinant = [
        (product.re - closed_det).abs(),
        product.im.abs(),
        (rec_det - closed_det).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
        / closed_det.abs();

    let max_discrepancy = trig_vs_closed
        .max(direct_vs_closed)
        .max(trig_vs_direct)
        .max(determinant);
    Ok(Corollary1Report {
        k,
        theta,
        nu,
        trig_vs_closed,
        direct_vs_closed,
        trig_vs_direct,
        determinant,
        max_discrepancy,
        passed: max_discrepancy <= tol,
    })
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    Ok(())
}
