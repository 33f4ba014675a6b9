//! Positivity analysis of theta-method discretizations of the periodic
//! advection equation `U_t = a U_x`.
//!
//! The full discretization matrix `M(m, theta, nu)` is circulant, so most of the
//! crate works with first rows. [`fullstep`] builds `M`, [`closed_form`] gives
//! the sparse-polynomial entries for the centered second-order scheme on odd
//! grids, [`region`] maps out where `M >= 0`, and [`sim`] time-steps test data.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circulant;
pub mod closed_form;
pub mod error;
pub mod fullstep;
pub mod io;
pub mod region;
pub mod schemes;
pub mod sim;
pub mod verify;

pub use circulant::{CirculantMatrix, ComplexSpectrum, DEFAULT_RELATIVE_TOL};
pub use error::{Error, Result};
pub use fullstep::{
    build_m_direct, build_m_trig, is_positivity_preserving, large_nu_limit_row, positivity_default,
    stability_r, FullStepMatrix, FullStepParams, PositivityVerdict, RowEvaluator,
};
pub use region::{BoundaryCurve, NuBound, NuInterval, NuScan, RegionSample, RegionScan};
pub use schemes::{build_l, eigen_imag, symbol_psi, SchemeKind};
pub use sim::{Profile, SimulationConfig, SimulationReport};
