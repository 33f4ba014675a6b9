//! Spatial semi-discretizations of `d/dx` on a uniform periodic grid.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circulant::CirculantMatrix;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Upwind1,
    Centered2,
    Centered4,
    Centered6,
    Spectral,
}

const CENTERED2: [f64; 1] = [0.5];
const CENTERED4: [f64; 2] = [2.0 / 3.0, -1.0 / 12.0];
const CENTERED6: [f64; 3] = [0.75, -3.0 / 20.0, 1.0 / 60.0];

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::Upwind1,
        SchemeKind::Centered2,
        SchemeKind::Centered4,
        SchemeKind::Centered6,
        SchemeKind::Spectral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Upwind1 => "upwind1",
            SchemeKind::Centered2 => "centered2",
            SchemeKind::Centered4 => "centered4",
            SchemeKind::Centered6 => "centered6",
            SchemeKind::Spectral => "spectral",
        }
    }

    /// Right half of the central stencil, `C_1..C_{(N-1)/2}`, for centered schemes.
    pub fn stencil_coefficients(self) -> Option<&'static [f64]> {
        match self {
            SchemeKind::Centered2 => Some(&CENTERED2),
            SchemeKind::Centered4 => Some(&CENTERED4),
            SchemeKind::Centered6 => Some(&CENTERED6),
            _ => None,
        }
    }

    pub fn min_order(self) -> usize {
        match self {
            SchemeKind::Upwind1 => 2,
            SchemeKind::Centered2 => 3,
            SchemeKind::Centered4 => 5,
            SchemeKind::Centered6 => 7,
            SchemeKind::Spectral => 4,
        }
    }

    /// Whether `L` is antisymmetric, i.e. its eigenvalues are purely imaginary.
    pub fn is_skew(self) -> bool {
        self != SchemeKind::Upwind1
    }

    pub fn check_order(self, m: usize) -> Result<()> {
        if m < self.min_order() {
            return Err(invalid(format!(
                "{self} requires m >= {}, got {m}",
                self.min_order()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid(format!("unknown scheme '{s}'")))
    }
}

/// `xi_l = 2 pi (l-1) / m` for `l = 1..m`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAngles {
    pub m: usize,
    pub values: Vec<f64>,
}

impl GridAngles {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("m must be positive"));
        }
        let values = (0..m).map(|r| 2.0 * PI * r as f64 / m as f64).collect();
        Ok(Self { m, values })
    }
}

/// Antisymmetric banded circulant with central coefficients `(…, -C_1, 0, C_1, …)`.
pub fn centered_from_coefficients(coeffs: &[f64], m: usize) -> Result<CirculantMatrix> {
    if coeffs.is_empty() {
        return Err(invalid("stencil needs at least one coefficient"));
    }
    if m < 2 * coeffs.len() + 1 {
        return Err(invalid(format!(
            "stencil width {} does not fit m = {m}",
            2 * coeffs.len() + 1
        )));
    }
    let mut row = vec![0.0; m];
    for (k, c) in coeffs.iter().enumerate() {
        row[k + 1] += c;
        row[m - k - 1] -= c;
    }
    CirculantMatrix::from_first_row(row)
}

pub fn build_l(kind: SchemeKind, m: usize) -> Result<CirculantMatrix> {
    kind.check_order(m)?;
    match kind {
        SchemeKind::Upwind1 => {
            let mut row = vec![0.0; m];
            row[0] = -1.0;
            row[1] = 1.0;
            CirculantMatrix::from_first_row(row)
        }
        SchemeKind::Centered2 | SchemeKind::Centered4 | SchemeKind::Centered6 => {
            centered_from_coefficients(kind.stencil_coefficients().unwrap(), m)
        }
        SchemeKind::Spectral => CirculantMatrix::from_first_row(spectral_first_row(m)),
    }
}

// L_{1,j} = (pi/m) (-1)^{1+j} cot((1-j) pi/m) for even m, csc for odd m.
fn spectral_first_row(m: usize) -> Vec<f64> {
    let h = PI / m as f64;
    (0..m)
        .map(|d| {
            if d == 0 {
                return 0.0;
            }
            // d = j - 1, so (-1)^{1+j} = (-1)^d and the angle is -d h
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            let angle = -(d as f64) * h;
            let trig = if m.is_multiple_of(2) {
                angle.cos() / angle.sin()
            } else {
                1.0 / angle.sin()
            };
            h * sign * trig
        })
        .collect()
}

/// Real symbol with eigenvalues of `L` equal to `i psi(xi_l)`.
pub fn symbol_psi(kind: SchemeKind, x: f64) -> Result<f64> {
    match kind {
        SchemeKind::Upwind1 => Err(Error::UnsupportedScheme(kind)),
        SchemeKind::Spectral => {
            if !(0.0..=PI).contains(&x) {
                return Err(invalid(format!(
                    "spectral symbol defined on [0, pi], got {x}"
                )));
            }
            Ok(x)
        }
        _ => Ok(psi_from_coefficients(
            kind.stencil_coefficients().unwrap(),
            x,
        )),
    }
}

/// `2 sum_k C_k sin(k x)`.
pub fn psi_from_coefficients(coeffs: &[f64], x: f64) -> f64 {
    2.0 * coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * ((k + 1) as f64 * x).sin())
        .sum::<f64>()
}

/// Imaginary parts `lambda_l` of the eigenvalues `i lambda_l` of `L`.
pub fn eigen_imag(kind: SchemeKind, m: usize) -> Result<Vec<f64>> {
    kind.check_order(m)?;
    let angles = GridAngles::new(m)?;
    match kind {
        SchemeKind::Upwind1 => Err(Error::UnsupportedScheme(kind)),
        SchemeKind::Spectral => Ok(angles
            .values
            .iter()
            .enumerate()
            .map(|(r, &xi)| match (2 * r).cmp(&m) {
                std::cmp::Ordering::Less => xi,
                std::cmp::Ordering::Equal => 0.0,
                std::cmp::Ordering::Greater => xi - 2.0 * PI,
            })
            .collect()),
        _ => {
            let c = kind.stencil_coefficients().unwrap();
            // sin(k * 2 pi r / m) through the reduced index keeps the table odd-symmetric
            Ok((0..m)
                .map(|r| {
                    2.0 * c
                        .iter()
                        .enumerate()
                        .map(|(k, ck)| ck * signed_sin((k + 1) * r, m))
                        .sum::<f64>()
                })
                .collect())
        }
    }
}

// sin(2 pi n / m) evaluated on the reduced angle in [0, pi].
fn signed_sin(n: usize, m: usize) -> f64 {
    let r = n % m;
    if 2 * r > m {
        -(2.0 * PI * (m - r) as f64 / m as f64).sin()
    } else {
        (2.0 * PI * r as f64 / m as f64).sin()
    }
}
