use heiscone::analysis::{
    connect_shooting, incompleteness_witness, structure_validate_with_metric, suites, SuiteConfig, Verdict,
};
use heiscone::closed::cone_geodesic_from_ic;
use heiscone::cone::{ConePoint, FrameVecC};
use heiscone::heis::MetricParamL;

fn small(seed: u64) -> SuiteConfig {
    SuiteConfig { seed, points: 40, samples: 8 }
}

#[test]
fn suites_are_deterministic_per_seed() {
    let a = suites::all(small(7)).unwrap();
    let b = suites::all(small(7)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let c = suites::all(small(8)).unwrap();
    assert_ne!(a.checks, c.checks);
    assert_eq!(a.summary, Verdict::Pass);
}

#[test]
fn only_quarter_metric_is_contact_metric() {
    for l in [0.1, 0.3, 1.0] {
        let rep = structure_validate_with_metric(30, 1, MetricParamL::new(l).unwrap());
        let failing: Vec<_> = rep.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failing, ["heis.contact_metric.d_eta"], "L = {l}");
    }
    let rep = structure_validate_with_metric(30, 1, MetricParamL::SASAKIAN);
    assert!(rep.passed());
}

#[test]
fn witness_lengths_scale_exactly() {
    for r0 in [0.1, 1.0, 10.0, 0.37] {
        let rep = incompleteness_witness(r0).unwrap();
        assert!(rep.passed(), "{r0}");
        assert_eq!(rep.get("length_equals_r0").unwrap().residual, Some(0.0));
    }
}

#[test]
fn shooting_recovers_forward_evaluated_endpoints() {
    let p = ConePoint::new(0.4, -0.1, 0.2, 1.3);
    for v in
        [FrameVecC::new(0.6, 0.0, 0.0, 0.8), FrameVecC::new(0.0, 0.6, -0.8, 0.0), FrameVecC::new(0.5, 0.5, 0.5, -0.5)]
    {
        let q = cone_geodesic_from_ic(p, v).unwrap().eval(0.7).unwrap();
        let sol = connect_shooting(p, q, 50, 1e-12).unwrap();
        let d = sol.direction;
        let err = [d.f - v.f, d.g - v.g, d.h - v.h, d.k - v.k].iter().fold(0.0_f64, |m, e| m.max(e.abs()));
        assert!(err <= 1e-6, "{v:?} -> {d:?}");
        assert!((sol.s_star - 0.7).abs() <= 1e-6);
    }
}
