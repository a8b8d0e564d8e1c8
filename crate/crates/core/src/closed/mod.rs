//! Closed-form unit-speed geodesics of the Heisenberg group and of its cone.

mod cone;
mod heis;

pub use self::cone::{
    cone_geodesic_eval, cone_geodesic_from_ic, cone_geodesic_velocity, geodesic_domain, ConeCase, ConeGeodesic,
    GeodesicDomain,
};
pub use self::heis::{heis_geodesic_eval, heis_geodesic_from_ic, heis_geodesic_velocity, HeisCase, HeisGeodesic};

use num_complex::Complex64;

/// `sin(x) / x`, equal to 1 at the origin.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `(e^{ix} - 1) / x`, tending to `i` as `x -> 0`.
pub(crate) fn expm1_i_over(x: f64) -> Complex64 {
    let half = 0.5 * x;
    Complex64::new(-half.sin() * sinc(half), sinc(x))
}

/// `(x - sin x) / x^3`, tending to `1/6` as `x -> 0`.
pub(crate) fn x_minus_sin_over_cube(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 5040.0 - x2 / 362_880.0))
    } else {
        (x - x.sin()) / (x * x * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helper_limits_are_continuous() {
        for &x in &[1e-12, 1e-6, 1e-3, 0.05, 0.0999, 0.1001, 0.5, 2.0, -0.7] {
            let e = expm1_i_over(x);
            let direct = (Complex64::new(0.0, x).exp() - 1.0) / x;
            let tol = if x.abs() < 1e-3 { 1e-9 } else { 1e-13 };
            assert!((e - direct).norm() <= tol, "x = {x}: {e} vs {direct}");
            if x.abs() > 1e-3 {
                let d = (x - x.sin()) / (x * x * x);
                assert!((x_minus_sin_over_cube(x) - d).abs() < 1e-9, "x = {x}");
            }
        }
        assert_eq!(expm1_i_over(0.0), Complex64::new(0.0, 1.0));
        assert_eq!(x_minus_sin_over_cube(0.0), 1.0 / 6.0);
        // matching the two branches at the switch point
        let below = x_minus_sin_over_cube(0.1 - 1e-12);
        let above = x_minus_sin_over_cube(0.1 + 1e-12);
        assert!((below - above).abs() < 1e-12);
    }
}
