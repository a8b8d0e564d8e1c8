//! Property tests for the structures and the closed-form geodesics.

use heiscone::closed::{cone_geodesic_from_ic, heis_geodesic_from_ic, ConeCase, HeisCase};
use heiscone::cone::{
    cone_frame_at, cone_metric, connection_c, frame_compose_cone, frame_decompose_cone, fundamental_form, j_apply,
    j_apply_coord, lie_bracket_cone, ConePoint, CoordVecC, FrameLabelC, FrameVecC,
};
use heiscone::heis::{
    connection_h, contact_form, frame_at, frame_compose, frame_decompose, group_inv, group_mul, lie_bracket, metric_g,
    CoordVecH, FrameLabelH, FrameVecH, HeisPoint, MetricParamL,
};
use num_complex::Complex64;
use proptest::prelude::*;

const L: MetricParamL = MetricParamL::SASAKIAN;

fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn heis_point() -> impl Strategy<Value = HeisPoint> {
    (coord(), coord(), coord()).prop_map(|(x, y, t)| HeisPoint::new(x, y, t))
}

fn cone_point() -> impl Strategy<Value = ConePoint> {
    (coord(), coord(), coord(), 0.1..10.0f64).prop_map(|(x, y, t, r)| ConePoint::new(x, y, t, r))
}

fn unit_h() -> impl Strategy<Value = FrameVecH> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("not too short", |(f, g, h)| f * f + g * g + h * h > 1e-2)
        .prop_map(|(f, g, h)| FrameVecH::new(f, g, h).normalized().unwrap())
}

fn unit_c() -> impl Strategy<Value = FrameVecC> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("not too short", |(f, g, h, k)| f * f + g * g + h * h + k * k > 1e-2)
        .prop_map(|(f, g, h, k)| FrameVecC::new(f, g, h, k).normalized().unwrap())
}

fn coord_c() -> impl Strategy<Value = CoordVecC> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b, c, d)| CoordVecC::new(a, b, c, d))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn hv(v: FrameVecH) -> [f64; 3] {
    [v.f, v.g, v.h]
}

proptest! {
    #[test]
    fn group_axioms(p in heis_point(), q in heis_point(), r in heis_point()) {
        let lhs = group_mul(group_mul(p, q), r).to_array();
        let rhs = group_mul(p, group_mul(q, r)).to_array();
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-12);
        prop_assert_eq!(group_mul(p, HeisPoint::ORIGIN), p);
        prop_assert_eq!(group_mul(HeisPoint::ORIGIN, p), p);
        prop_assert!(max_diff(&group_mul(p, group_inv(p)).to_array(), &[0.0; 3]) <= 1e-12);
    }

    #[test]
    fn heis_frame_orthonormal_and_horizontal(p in heis_point()) {
        for (i, a) in FrameLabelH::ALL.into_iter().enumerate() {
            for (j, b) in FrameLabelH::ALL.into_iter().enumerate() {
                let g = metric_g(p, frame_at(p, a), frame_at(p, b), L);
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g - want).abs() <= 1e-12);
            }
        }
        prop_assert_eq!(contact_form(p, frame_at(p, FrameLabelH::X)), 0.0);
        prop_assert_eq!(contact_form(p, frame_at(p, FrameLabelH::Y)), 0.0);
    }

    #[test]
    fn heis_decompose_roundtrip(p in heis_point(), a in -5.0..5.0f64, b in -5.0..5.0f64, c in -5.0..5.0f64) {
        let v = CoordVecH::new(a, b, c);
        let back = frame_compose(p, frame_decompose(p, v));
        let scale = 1.0 + p.x.abs().max(p.y.abs());
        prop_assert!(max_diff(&[back.dx, back.dy, back.dt], &[a, b, c]) <= 1e-14 * scale * scale * 10.0);
    }

    #[test]
    fn cone_frame_orthonormal(q in cone_point()) {
        for (i, a) in FrameLabelC::ALL.into_iter().enumerate() {
            for (j, b) in FrameLabelC::ALL.into_iter().enumerate() {
                let g = cone_metric(q, cone_frame_at(q, a).unwrap(), cone_frame_at(q, b).unwrap()).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((g - want).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn j_isometry_and_fundamental_form(q in cone_point(), u in coord_c(), v in coord_c()) {
        let (ju, jv) = (j_apply_coord(q, u).unwrap(), j_apply_coord(q, v).unwrap());
        let g = cone_metric(q, u, v).unwrap();
        let scale = 1.0 + g.abs() + cone_metric(q, u, u).unwrap() + cone_metric(q, v, v).unwrap();
        prop_assert!((cone_metric(q, ju, jv).unwrap() - g).abs() <= 1e-12 * scale);
        let omega = fundamental_form(q, u, v).unwrap();
        prop_assert!((omega - cone_metric(q, ju, v).unwrap()).abs() <= 1e-12 * scale);
        prop_assert!((omega + fundamental_form(q, v, u).unwrap()).abs() <= 1e-12 * scale);
    }

    #[test]
    fn j_squared_is_minus_identity(w in unit_c()) {
        prop_assert_eq!(j_apply(j_apply(w)), -w);
    }

    #[test]
    fn cone_decompose_roundtrip(q in cone_point(), u in coord_c()) {
        let back = frame_compose_cone(q, frame_decompose_cone(q, u).unwrap()).unwrap();
        let scale = (1.0 + q.x.abs().max(q.y.abs())).powi(2) * 10.0;
        prop_assert!(max_diff(&back.to_array(), &u.to_array()) <= 1e-14 * scale);
    }

    #[test]
    fn cone_connection_torsion_free(r in 0.1..10.0f64) {
        for a in FrameLabelC::ALL {
            for b in FrameLabelC::ALL {
                let lhs = connection_c(a, b, r).unwrap() - connection_c(b, a, r).unwrap();
                let rhs = lie_bracket_cone(a, b, r).unwrap();
                prop_assert!(max_diff(&lhs.to_array(), &rhs.to_array()) <= 1e-15 / r);
                for c in FrameLabelC::ALL {
                    let m = connection_c(a, b, r).unwrap().dot(&c.unit()) + b.unit().dot(&connection_c(a, c, r).unwrap());
                    prop_assert_eq!(m, 0.0);
                }
            }
        }
    }

    #[test]
    fn heis_geodesic_starts_at_ic_and_has_unit_speed(p in heis_point(), v in unit_h(), s in -20.0..20.0f64) {
        let geo = heis_geodesic_from_ic(p, v).unwrap();
        prop_assert_eq!(geo.eval(0.0), p);
        prop_assert!(max_diff(&hv(geo.velocity(0.0)), &hv(v)) <= 1e-12);
        prop_assert!((geo.velocity(s).norm_sq() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn heis_helix_lies_on_circle(p in heis_point(), v in unit_h(), s in -20.0..20.0f64) {
        let geo = heis_geodesic_from_ic(p, v).unwrap();
        if let HeisCase::Helix { c, kappa } = geo.case {
            // z - z0 = i kappa (e^{-2ics} - 1) / (2c), a circle about z0 - i kappa / (2c)
            let centre = Complex64::new(p.x, p.y) - Complex64::i() * kappa / (2.0 * c);
            let radius = kappa.norm() / (2.0 * c.abs());
            let z = geo.eval(s);
            let d = (Complex64::new(z.x, z.y) - centre).norm();
            prop_assert!((d - radius).abs() <= 1e-10 * (1.0 + radius));
        }
    }

    #[test]
    fn heis_geodesics_are_left_equivariant(a in heis_point(), p in heis_point(), v in unit_h(), s in -5.0..5.0f64) {
        // left translations are isometries fixing frame components
        let moved = heis_geodesic_from_ic(group_mul(a, p), v).unwrap().eval(s);
        let expect = group_mul(a, heis_geodesic_from_ic(p, v).unwrap().eval(s));
        prop_assert!(max_diff(&moved.to_array(), &expect.to_array()) <= 1e-10 * (1.0 + expect.t.abs()));
    }

    #[test]
    fn heis_reverse_returns_to_base(p in heis_point(), v in unit_h(), s in -5.0..5.0f64) {
        let geo = heis_geodesic_from_ic(p, v).unwrap();
        let back = heis_geodesic_from_ic(geo.eval(s), -geo.velocity(s)).unwrap().eval(s);
        prop_assert!(max_diff(&back.to_array(), &p.to_array()) <= 1e-10 * (1.0 + p.t.abs() + p.x.abs() + p.y.abs()));
    }

    #[test]
    fn cone_geodesic_invariants(q in cone_point(), v in unit_c(), u in -1.0..1.0f64) {
        let geo = cone_geodesic_from_ic(q, v).unwrap();
        prop_assert_eq!(geo.eval(0.0).unwrap(), q);
        prop_assert!(max_diff(&geo.velocity(0.0).unwrap().to_array(), &v.to_array()) <= 1e-12);
        let d = geo.domain();
        // a sample inside the domain, at most 20 from the base
        let (lo, hi) = d.clamp(-20.0, 20.0, 1e-3 * q.r);
        let s = lo + (hi - lo) * (u + 1.0) / 2.0;
        let w = geo.velocity(s).unwrap();
        let r = geo.radius(s).unwrap();
        prop_assert!((w.norm_sq() - 1.0).abs() <= 1e-12);
        prop_assert!((w.h * r - geo.c3).abs() <= 1e-10 * (1.0 + q.r));
        prop_assert!((w.k * r - s - geo.c1).abs() <= 1e-10 * (1.0 + q.r + s.abs()));
        prop_assert!((r * r - (s * s + 2.0 * geo.c1 * s + q.r * q.r)).abs() <= 1e-10 * (1.0 + r * r));
    }

    #[test]
    fn cone_dilation_maps_geodesics(q in cone_point(), v in unit_c(), lambda in 0.2..5.0f64, u in -1.0..1.0f64) {
        // r -> lambda r scales g_r by lambda^2 and fixes frame components
        let geo = cone_geodesic_from_ic(q, v).unwrap();
        let big = cone_geodesic_from_ic(ConePoint::new(q.x, q.y, q.t, lambda * q.r), v).unwrap();
        let (lo, hi) = geo.domain().clamp(-5.0, 5.0, 1e-2 * q.r);
        let s = lo + (hi - lo) * (u + 1.0) / 2.0;
        let a = geo.eval(s).unwrap();
        let b = big.eval(lambda * s).unwrap();
        let want = [a.x, a.y, a.t, lambda * a.r];
        prop_assert!(max_diff(&b.to_array(), &want) <= 1e-9 * (1.0 + a.t.abs() + a.x.abs() + a.y.abs() + lambda * a.r));
    }

    #[test]
    fn cone_reverse_returns_to_base(q in cone_point(), v in unit_c(), u in -1.0..1.0f64) {
        let geo = cone_geodesic_from_ic(q, v).unwrap();
        let (lo, hi) = geo.domain().clamp(-5.0, 5.0, 1e-2 * q.r);
        let s = lo + (hi - lo) * (u + 1.0) / 2.0;
        let back = cone_geodesic_from_ic(geo.eval(s).unwrap(), -geo.velocity(s).unwrap()).unwrap().eval(s).unwrap();
        let scale = 1.0 + q.t.abs() + q.x.abs() + q.y.abs() + q.r;
        prop_assert!(max_diff(&back.to_array(), &q.to_array()) <= 1e-9 * scale);
    }
}

#[test]
fn heis_connection_torsion_free_and_metric() {
    for a in FrameLabelH::ALL {
        for b in FrameLabelH::ALL {
            assert_eq!(connection_h(a, b) - connection_h(b, a), lie_bracket(a, b));
            for c in FrameLabelH::ALL {
                assert_eq!(connection_h(a, b).dot(&c.unit()) + b.unit().dot(&connection_h(a, c)), 0.0);
            }
        }
    }
}

#[test]
fn case_thresholds() {
    let o = ConePoint::new(0.0, 0.0, 0.0, 1.0);
    let tiny = 1e-11;
    let near_radial = FrameVecC::new(tiny, 0.0, tiny, -1.0);
    assert_eq!(cone_geodesic_from_ic(o, near_radial).unwrap().case, ConeCase::RadialLine { outward: false });
    let flat = FrameVecC::new(0.6, 0.0, tiny, 0.8);
    assert_eq!(cone_geodesic_from_ic(o, flat).unwrap().case, ConeCase::HorizontalLimit);
    let heis = heis_geodesic_from_ic(HeisPoint::ORIGIN, FrameVecH::new(tiny, 0.0, 1.0)).unwrap();
    assert!(matches!(heis.case, HeisCase::Vertical { .. }));
}
