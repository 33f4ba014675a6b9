//! Parameter regions where `M(m, theta, nu) >= 0`.
//!
//! Closed-form boundaries for the centered second-order scheme live in
//! [`boundary`]; scans that work for every scheme live in [`scan`].

pub mod boundary;
pub mod jll;
pub mod scan;

pub use boundary::*;
pub use jll::*;
pub use scan::*;

/// Bisection for the sign change of `f` on `[lo, hi]` where `f(lo) < 0 <= f(hi)`.
///
/// Stops once the bracket is narrower than `tol` or cannot be split further.
pub(crate) fn bisect_increasing<F: FnMut(f64) -> f64>(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut f: F,
) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Bisection on a boolean predicate with `pred(lo) != pred(hi)`; returns the
/// bracket end where the predicate holds.
pub(crate) fn bisect_predicate<F: FnMut(f64) -> bool>(
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    mut pred: F,
) -> f64 {
    let holds_at_hi = pred(hi);
    while (hi - lo) > rel_tol * hi.abs().max(lo.abs()) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) == holds_at_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if holds_at_hi {
        hi
    } else {
        lo
    }
}
