//! Algebraic identities of both structures, checked at seeded random points.

use rand::Rng;

use crate::cone::{
    cone_frame_at, cone_metric, connection_c, frame_compose_cone, frame_decompose_cone, fundamental_form, j_apply,
    j_apply_coord, lie_bracket_cone, ConePoint, CoordVecC, FrameLabelC, FrameVecC,
};
use crate::heis::{
    connection_h, contact_form, contact_form_tilde, d_contact_form, frame_at, frame_compose, frame_decompose,
    group_inv, group_mul, lie_bracket, metric_g, phi, phi_coord, CoordVecH, FrameLabelH, HeisPoint, MetricParamL,
};

use super::report::{SupNorm, ValidationReport};
use super::sampling::{frame_c, frame_h, heis_point, rng};

pub const IDENTITY_TOL: f64 = 1e-12;
pub const ROUNDTRIP_TOL: f64 = 1e-14;

/// Coordinate box for sampled base points.
pub const POINT_SCALE: f64 = 10.0;
pub const CONE_R_RANGE: (f64, f64) = (0.1, 10.0);

/// Runs the identities at `n_points` points, the first of which is the origin
/// (with `r = 1` on the cone), for the metric `g_{1/4}`.
pub fn structure_validate(n_points: usize, seed: u64) -> ValidationReport {
    structure_validate_with_metric(n_points, seed, MetricParamL::SASAKIAN)
}

/// As [`structure_validate`], with the Heisenberg metric `g_L` in place of
/// `g_{1/4}`. The Reeb field becomes the `g_L`-unit vector `xi_L = T~ / (2 sqrt L)`
/// and the contact form its dual `eta_L = sqrt(L) omega`. The contact-metric
/// relation `(1/2) d eta = g(phi ., .)` holds only for `L = 1/4`.
pub fn structure_validate_with_metric(n_points: usize, seed: u64, l: MetricParamL) -> ValidationReport {
    let mut rep = ValidationReport::new("structures").with_seed(seed);
    let n = n_points.max(1);
    rep.samples("points", n as u64);
    let mut rng = rng(seed);

    heis_checks(&mut rep, &mut rng, n, l);
    cone_checks(&mut rep, &mut rng, n);

    rep.note(format!("Heisenberg metric parameter L = {}", l.value()));
    rep.note(
        "Closedness of the cone's fundamental form is structural: it is the exterior derivative of (r^2/2) of the \
         normalized contact form, so it is not differentiated numerically.",
    );
    rep
}

fn max_abs_h(a: CoordVecH, b: CoordVecH) -> f64 {
    (a.dx - b.dx).abs().max((a.dy - b.dy).abs()).max((a.dt - b.dt).abs())
}

fn max_abs_c(a: CoordVecC, b: CoordVecC) -> f64 {
    (a.dx - b.dx).abs().max((a.dy - b.dy).abs()).max((a.dt - b.dt).abs()).max((a.dr - b.dr).abs())
}

fn pt_diff(a: HeisPoint, b: HeisPoint) -> f64 {
    (a.x - b.x).abs().max((a.y - b.y).abs()).max((a.t - b.t).abs())
}

/// Differential of left translation by `p` applied to `v`.
fn left_translate(p: HeisPoint, v: CoordVecH) -> CoordVecH {
    CoordVecH::new(v.dx, v.dy, v.dt + 2.0 * p.y * v.dx - 2.0 * p.x * v.dy)
}

/// `J[i][j] = d_j V^i` for the Heisenberg frame fields, coordinates `(x, y, t)`.
pub fn heis_frame_jacobian(label: FrameLabelH) -> [[f64; 3]; 3] {
    let mut j = [[0.0; 3]; 3];
    match label {
        FrameLabelH::X => j[2][1] = 2.0,
        FrameLabelH::Y => j[2][0] = -2.0,
        FrameLabelH::T => {}
    }
    j
}

/// `J[i][j] = d_j V^i` for the cone frame fields, coordinates `(x, y, t, r)`.
pub fn cone_frame_jacobian(q: ConePoint, label: FrameLabelC) -> [[f64; 4]; 4] {
    let (x, y, r) = (q.x, q.y, q.r);
    let r2 = r * r;
    let mut j = [[0.0; 4]; 4];
    match label {
        FrameLabelC::X => {
            j[0][3] = -1.0 / r2;
            j[2][1] = 2.0 / r;
            j[2][3] = -2.0 * y / r2;
        }
        FrameLabelC::Y => {
            j[1][3] = -1.0 / r2;
            j[2][0] = -2.0 / r;
            j[2][3] = 2.0 * x / r2;
        }
        FrameLabelC::T => j[2][3] = -2.0 / r2,
        FrameLabelC::R => {}
    }
    j
}

/// `[A, B]^i = A^j d_j B^i - B^j d_j A^i`.
fn coord_bracket<const N: usize>(a: [f64; N], ja: [[f64; N]; N], b: [f64; N], jb: [[f64; N]; N]) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        for j in 0..N {
            out[i] += a[j] * jb[i][j] - b[j] * ja[i][j];
        }
    }
    out
}

fn heis_checks(rep: &mut ValidationReport, rng: &mut impl Rng, n: usize, l: MetricParamL) {
    let sl = l.value().sqrt();
    let xi = |p: HeisPoint| {
        let t = frame_at(p, FrameLabelH::T);
        CoordVecH::new(0.0, 0.0, t.dt / (2.0 * sl))
    };
    let eta = |p: HeisPoint, v: CoordVecH| sl * contact_form(p, v);

    let mut assoc = SupNorm::default();
    let mut ident = SupNorm::default();
    let mut inverse = SupNorm::default();
    let mut ortho = SupNorm::default();
    let mut kernel = SupNorm::default();
    let mut reeb = SupNorm::default();
    let mut left_inv = SupNorm::default();
    let mut bracket = SupNorm::default();
    let mut roundtrip = SupNorm::default();
    let mut cm_eta = SupNorm::default();
    let mut cm_deta = SupNorm::default();
    let mut cm_phi2 = SupNorm::default();
    let mut cm_compat = SupNorm::default();

    for i in 0..n {
        let p = if i == 0 { HeisPoint::ORIGIN } else { heis_point(rng, POINT_SCALE) };
        let q = heis_point(rng, POINT_SCALE);
        let w = heis_point(rng, POINT_SCALE);

        assoc.add(pt_diff(group_mul(group_mul(p, q), w), group_mul(p, group_mul(q, w))));
        ident.add(pt_diff(group_mul(HeisPoint::ORIGIN, p), p));
        ident.add(pt_diff(group_mul(p, HeisPoint::ORIGIN), p));
        inverse.add(pt_diff(group_mul(p, group_inv(p)), HeisPoint::ORIGIN));
        inverse.add(pt_diff(group_mul(group_inv(p), p), HeisPoint::ORIGIN));

        let basis = [frame_at(p, FrameLabelH::X), frame_at(p, FrameLabelH::Y), xi(p)];
        for (a, ea) in basis.iter().enumerate() {
            for (b, eb) in basis.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                ortho.add(metric_g(p, *ea, *eb, l) - want);
            }
        }
        kernel.add(contact_form(p, basis[0]));
        kernel.add(contact_form(p, basis[1]));
        reeb.add(contact_form_tilde(p, frame_at(p, FrameLabelH::T)) - 1.0);

        for lab in FrameLabelH::ALL {
            left_inv.add(max_abs_h(frame_at(group_mul(p, q), lab), left_translate(p, frame_at(q, lab))));
        }

        for a in FrameLabelH::ALL {
            for b in FrameLabelH::ALL {
                let (ea, eb) = (frame_at(p, a), frame_at(p, b));
                let c = coord_bracket(
                    [ea.dx, ea.dy, ea.dt],
                    heis_frame_jacobian(a),
                    [eb.dx, eb.dy, eb.dt],
                    heis_frame_jacobian(b),
                );
                let got = frame_decompose(p, CoordVecH::new(c[0], c[1], c[2]));
                bracket.add((got - lie_bracket(a, b)).max_abs());
            }
        }

        let u = frame_h(rng);
        let v = frame_h(rng);
        roundtrip.add((frame_decompose(p, frame_compose(p, u)) - u).max_abs());
        let cu = CoordVecH::new(u.f, u.g, u.h);
        roundtrip.add(max_abs_h(frame_compose(p, frame_decompose(p, cu)), cu));

        let (uc, vc) = (frame_compose(p, u), frame_compose(p, v));
        cm_eta.add(eta(p, uc) - metric_g(p, uc, xi(p), l));
        cm_deta.add(0.5 * sl * d_contact_form(uc, vc) - metric_g(p, phi_coord(p, uc), vc, l));
        let phi2 = phi_coord(p, phi_coord(p, uc));
        let xi_p = xi(p);
        let e = eta(p, uc);
        let want = CoordVecH::new(-uc.dx + e * xi_p.dx, -uc.dy + e * xi_p.dy, -uc.dt + e * xi_p.dt);
        cm_phi2.add(max_abs_h(phi2, want));
        cm_compat
            .add(metric_g(p, phi_coord(p, uc), phi_coord(p, vc), l) - metric_g(p, uc, vc, l) + eta(p, uc) * eta(p, vc));
    }

    // frame-table identities; the tables are point-independent
    let mut torsion = SupNorm::default();
    let mut compat = SupNorm::default();
    let mut reeb_deriv = SupNorm::default();
    let mut phi_frame = SupNorm::default();
    for a in FrameLabelH::ALL {
        for b in FrameLabelH::ALL {
            torsion.add((connection_h(a, b) - connection_h(b, a) - lie_bracket(a, b)).max_abs());
            for c in FrameLabelH::ALL {
                compat.add(connection_h(a, b).dot(&c.unit()) + b.unit().dot(&connection_h(a, c)));
            }
        }
        // nabla_V T~ = phi V
        reeb_deriv.add((connection_h(a, FrameLabelH::T) - phi(a.unit())).max_abs());
    }
    phi_frame.add((phi(FrameLabelH::X.unit()) - FrameLabelH::Y.unit()).max_abs());
    phi_frame.add((phi(FrameLabelH::Y.unit()) + FrameLabelH::X.unit()).max_abs());
    phi_frame.add(phi(FrameLabelH::T.unit()).max_abs());

    rep.check("heis.group_associativity", assoc.get(), IDENTITY_TOL);
    rep.check("heis.group_identity", ident.get(), IDENTITY_TOL);
    rep.check("heis.group_inverse", inverse.get(), IDENTITY_TOL);
    rep.check("heis.frame_orthonormal", ortho.get(), IDENTITY_TOL);
    rep.check("heis.omega_kernel", kernel.get(), IDENTITY_TOL);
    rep.check("heis.reeb_normalization", reeb.get(), IDENTITY_TOL);
    rep.check("heis.frame_left_invariant", left_inv.get(), IDENTITY_TOL);
    rep.check("heis.bracket_table", bracket.get(), IDENTITY_TOL);
    rep.check("heis.torsion_free", torsion.get(), IDENTITY_TOL);
    rep.check("heis.metric_compatible", compat.get(), IDENTITY_TOL);
    rep.check("heis.reeb_derivative", reeb_deriv.get(), IDENTITY_TOL);
    rep.check("heis.phi_on_frame", phi_frame.get(), IDENTITY_TOL);
    rep.check("heis.decompose_roundtrip", roundtrip.get(), ROUNDTRIP_TOL);
    rep.check("heis.contact_metric.eta_dual", cm_eta.get(), IDENTITY_TOL);
    rep.check("heis.contact_metric.d_eta", cm_deta.get(), IDENTITY_TOL);
    rep.check("heis.contact_metric.phi_squared", cm_phi2.get(), IDENTITY_TOL);
    rep.check("heis.contact_metric.compatible", cm_compat.get(), IDENTITY_TOL);
}

fn cone_checks(rep: &mut ValidationReport, rng: &mut impl Rng, n: usize) {
    let mut ortho = SupNorm::default();
    let mut bracket = SupNorm::default();
    let mut torsion = SupNorm::default();
    let mut compat = SupNorm::default();
    let mut j_parallel = SupNorm::default();
    let mut j_iso = SupNorm::default();
    let mut omega = SupNorm::default();
    let mut omega_anti = SupNorm::default();
    let mut roundtrip = SupNorm::default();
    let mut errors = 0u64;

    for i in 0..n {
        let q = if i == 0 {
            ConePoint::new(0.0, 0.0, 0.0, 1.0)
        } else {
            let b = heis_point(rng, POINT_SCALE);
            ConePoint::new(b.x, b.y, b.t, rng.gen_range(CONE_R_RANGE.0..=CONE_R_RANGE.1))
        };
        let u = frame_c(rng);
        let v = frame_c(rng);
        let res: crate::Result<()> = (|| {
            let r = q.r;
            for a in FrameLabelC::ALL {
                let ea = cone_frame_at(q, a)?;
                for b in FrameLabelC::ALL {
                    let eb = cone_frame_at(q, b)?;
                    let want = if a == b { 1.0 } else { 0.0 };
                    ortho.add(cone_metric(q, ea, eb)? - want);

                    let c = coord_bracket(
                        ea.to_array(),
                        cone_frame_jacobian(q, a),
                        eb.to_array(),
                        cone_frame_jacobian(q, b),
                    );
                    let got = frame_decompose_cone(q, CoordVecC::new(c[0], c[1], c[2], c[3]))?;
                    bracket.add((got - lie_bracket_cone(a, b, r)?).max_abs());

                    let nab = connection_c(a, b, r)?;
                    torsion.add((nab - connection_c(b, a, r)? - lie_bracket_cone(a, b, r)?).max_abs());
                    for c in FrameLabelC::ALL {
                        compat.add(nab.dot(&c.unit()) + b.unit().dot(&connection_c(a, c, r)?));
                    }
                    // nabla_a (J e_b) = J (nabla_a e_b); J e_b has constant frame coefficients
                    let jb = j_apply(b.unit());
                    let mut lhs = FrameVecC::ZERO;
                    for (lab, coef) in FrameLabelC::ALL.iter().zip(jb.to_array()) {
                        if coef != 0.0 {
                            lhs = lhs + connection_c(a, *lab, r)? * coef;
                        }
                    }
                    j_parallel.add((lhs - j_apply(nab)).max_abs());
                }
            }

            let (uc, vc) = (frame_compose_cone(q, u)?, frame_compose_cone(q, v)?);
            let (ju, jv) = (j_apply_coord(q, uc)?, j_apply_coord(q, vc)?);
            j_iso.add(cone_metric(q, ju, jv)? - cone_metric(q, uc, vc)?);
            omega.add(fundamental_form(q, uc, vc)? - cone_metric(q, ju, vc)?);
            omega_anti.add(fundamental_form(q, uc, vc)? + fundamental_form(q, vc, uc)?);
            omega_anti.add(fundamental_form(q, uc, uc)?);

            roundtrip.add((frame_decompose_cone(q, uc)? - u).max_abs());
            let cu = CoordVecC::new(u.f, u.g, u.h, u.k);
            roundtrip.add(max_abs_c(frame_compose_cone(q, frame_decompose_cone(q, cu)?)?, cu));
            Ok(())
        })();
        if res.is_err() {
            errors += 1;
        }
    }

    let mut j_sq = SupNorm::default();
    for lab in FrameLabelC::ALL {
        j_sq.add((j_apply(j_apply(lab.unit())) + lab.unit()).max_abs());
    }

    rep.check("cone.frame_orthonormal", ortho.get(), IDENTITY_TOL);
    rep.check("cone.bracket_table", bracket.get(), IDENTITY_TOL);
    rep.check("cone.torsion_free", torsion.get(), IDENTITY_TOL);
    rep.check("cone.metric_compatible", compat.get(), IDENTITY_TOL);
    rep.check("cone.J_parallel", j_parallel.get(), IDENTITY_TOL);
    rep.check("cone.J_squared", j_sq.get(), 0.0);
    rep.check("cone.J_isometry", j_iso.get(), IDENTITY_TOL);
    rep.check("cone.fundamental_form_compat", omega.get(), IDENTITY_TOL);
    rep.check("cone.fundamental_form_antisymmetric", omega_anti.get(), IDENTITY_TOL);
    rep.check("cone.decompose_roundtrip", roundtrip.get(), ROUNDTRIP_TOL);
    rep.flag("cone.no_domain_errors", errors == 0);
}
