//! Geodesics of the Heisenberg group with its Sasakian metric and of its
//! Kähler cone: structures, closed-form geodesics, a numerical oracle, and
//! cross-verification.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod closed;
pub mod cone;
pub mod error;
pub mod heis;
pub mod numeric;

pub use error::{GeomError, Result};

/// Tolerance on `|v|^2 - 1` for accepting a unit-speed initial vector.
pub const EPS_UNIT: f64 = 1e-9;

/// Smallest cone radius accepted by the geometric primitives.
pub const R_MIN: f64 = 1e-12;

/// Smallest radius the integrators step to before reporting a domain breach.
pub const R_MIN_INTEGRATION: f64 = 1e-9;

/// Frame components below this magnitude select the degenerate closed forms.
pub const CASE_EPS: f64 = 1e-10;
