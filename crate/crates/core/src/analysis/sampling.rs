//! Seeded random points and initial conditions, one generator per geodesic case.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{ConePoint, FrameVecC};
use crate::heis::{FrameVecH, HeisPoint};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn heis_point(rng: &mut impl Rng, scale: f64) -> HeisPoint {
    HeisPoint::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
}

pub fn cone_point(rng: &mut impl Rng, scale: f64, r_lo: f64, r_hi: f64) -> ConePoint {
    let b = heis_point(rng, scale);
    ConePoint::new(b.x, b.y, b.t, rng.gen_range(r_lo..=r_hi))
}

/// Frame vector with independent components in `[-1, 1]`.
pub fn frame_h(rng: &mut impl Rng) -> FrameVecH {
    FrameVecH::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

pub fn frame_c(rng: &mut impl Rng) -> FrameVecC {
    FrameVecC::new(
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(-1.0..=1.0),
    )
}

fn sign(rng: &mut impl Rng) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// Uniform in `[lo, hi]` with a random sign.
fn signed(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    sign(rng) * rng.gen_range(lo..=hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeisKind {
    Line,
    Vertical,
    Helix,
}

impl HeisKind {
    pub const ALL: [HeisKind; 3] = [HeisKind::Line, HeisKind::Vertical, HeisKind::Helix];

    pub fn name(self) -> &'static str {
        match self {
            HeisKind::Line => "Line",
            HeisKind::Vertical => "Vertical",
            HeisKind::Helix => "Helix",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    RadialLine,
    Arc,
    General,
    HorizontalLimit,
}

impl ConeKind {
    pub const ALL: [ConeKind; 4] = [ConeKind::RadialLine, ConeKind::Arc, ConeKind::General, ConeKind::HorizontalLimit];

    pub fn name(self) -> &'static str {
        match self {
            ConeKind::RadialLine => "RadialLine",
            ConeKind::Arc => "Arc",
            ConeKind::General => "General",
            ConeKind::HorizontalLimit => "HorizontalLimit",
        }
    }
}

/// A unit initial condition of the requested Heisenberg case, base point in `[-2, 2]^3`.
pub fn heis_ic(rng: &mut impl Rng, kind: HeisKind) -> (HeisPoint, FrameVecH) {
    let p = heis_point(rng, 2.0);
    let v = match kind {
        HeisKind::Line => {
            let a: f64 = rng.gen_range(0.0..TAU);
            FrameVecH::new(a.cos(), a.sin(), 0.0)
        }
        HeisKind::Vertical => FrameVecH::new(0.0, 0.0, sign(rng)),
        HeisKind::Helix => {
            let c = signed(rng, 0.05, 0.95);
            let m = (1.0 - c * c).sqrt();
            let a: f64 = rng.gen_range(0.0..TAU);
            FrameVecH::new(m * a.cos(), m * a.sin(), c)
        }
    };
    (p, v)
}

/// A unit initial condition of the requested cone case.
///
/// Radii lie in `[0.5, 2]` and `|k| <= 0.9` off the radial case, so the
/// closest approach `r0 sqrt(1 - k^2)` stays above `0.2`.
pub fn cone_ic(rng: &mut impl Rng, kind: ConeKind) -> (ConePoint, FrameVecC) {
    let q = cone_point(rng, 2.0, 0.5, 2.0);
    let v = match kind {
        ConeKind::RadialLine => FrameVecC::new(0.0, 0.0, 0.0, sign(rng)),
        ConeKind::Arc => {
            let k: f64 = rng.gen_range(-0.9..=0.9);
            FrameVecC::new(0.0, 0.0, sign(rng) * (1.0 - k * k).sqrt(), k)
        }
        ConeKind::General => {
            let k: f64 = rng.gen_range(-0.9..=0.9);
            let rest = (1.0 - k * k).sqrt();
            // split the transverse part between h and F, keeping both visible
            let b = rng.gen_range(0.1..=PI / 2.0 - 0.1);
            let (h, m) = (rest * b.sin() * sign(rng), rest * b.cos());
            let a: f64 = rng.gen_range(0.0..TAU);
            FrameVecC::new(m * a.cos(), m * a.sin(), h, k)
        }
        ConeKind::HorizontalLimit => {
            let k: f64 = rng.gen_range(-0.9..=0.9);
            let m = (1.0 - k * k).sqrt();
            let a: f64 = rng.gen_range(0.0..TAU);
            FrameVecC::new(m * a.cos(), m * a.sin(), 0.0, k)
        }
    };
    (q, v)
}
