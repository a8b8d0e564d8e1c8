//! Numerical oracle for the geodesic flows: the frame-component ODE systems
//! with coordinate reconstruction, integrated by RK4 or Dormand-Prince 5(4).

mod integrate;
mod systems;

pub use self::integrate::{
    integrate, resample, Breach, StepPolicy, Trace, TraceMeta, TraceRow, DEFAULT_ABS_TOL, DEFAULT_MAX_STEP,
    DEFAULT_REL_TOL, DEFAULT_STEP,
};
pub use self::systems::{cone_rhs, heis_rhs, ConeFlow, ConeState, GeodesicSystem, HeisFlow, HeisState};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("invalid step policy: {0}")]
    InvalidPolicy(&'static str),

    #[error("domain breach: r = {r} is at or below the integration floor")]
    DomainBreach { r: f64 },

    #[error("adaptive step underflow at s = {s} (h = {h})")]
    StepUnderflow { s: f64, h: f64 },

    #[error("step budget exhausted at s = {s}")]
    TooManySteps { s: f64 },

    #[error("s = {s} is outside the trace range [{lo}, {hi}]")]
    OutOfRange { s: f64, lo: f64, hi: f64 },
}

pub fn integrate_heis(state0: HeisState, s_end: f64, policy: StepPolicy) -> Result<Trace<6>, NumericError> {
    integrate(&HeisFlow, state0.to_array(), s_end, policy)
}

pub fn integrate_cone(state0: ConeState, s_end: f64, policy: StepPolicy) -> Result<Trace<8>, NumericError> {
    integrate(&ConeFlow::default(), state0.to_array(), s_end, policy)
}
