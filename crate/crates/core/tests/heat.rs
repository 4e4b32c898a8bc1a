use torsion_core::algebra::{int, Angle};
use torsion_core::lie::{EllipticClass, RayConfig};
use torsion_core::torsion::{heat_trace_e_with, heat_trace_i_with, HeatMethod, OrbifoldData, Real};

fn pinned() -> (RayConfig, OrbifoldData) {
    let cls = EllipticClass::new(2, 2, vec![Angle::two_pi(1, 4).unwrap()], int(1)).unwrap();
    let d1 = EllipticClass::new(
        2,
        1,
        vec![Angle::two_pi(1, 3).unwrap(), Angle::two_pi(1, 5).unwrap()],
        int(1),
    )
    .unwrap();
    let orb = OrbifoldData::new(2, Real::Exact(int(1)), vec![cls, d1], None).unwrap();
    (RayConfig::trivial(2, 0).unwrap(), orb)
}

#[test]
fn closed_forms_match_quadrature() {
    let (cfg, orb) = pinned();
    for t in [0.1, 1.0, 10.0] {
        let i_closed = heat_trace_i_with(&cfg, &orb, t, HeatMethod::ClosedForm).unwrap();
        let i_quad = heat_trace_i_with(&cfg, &orb, t, HeatMethod::Quadrature).unwrap();
        assert!(
            ((i_closed - i_quad) / i_closed).abs() < 1e-8,
            "I t={t}: {i_closed} vs {i_quad}"
        );
        let e_closed = heat_trace_e_with(&cfg, &orb, t, HeatMethod::ClosedForm).unwrap();
        let e_quad = heat_trace_e_with(&cfg, &orb, t, HeatMethod::Quadrature).unwrap();
        assert!(
            (e_closed - e_quad).norm() / e_closed.norm() < 1e-8,
            "E t={t}: {e_closed} vs {e_quad}"
        );
    }
}

#[test]
fn heat_traces_reject_bad_t() {
    let (cfg, orb) = pinned();
    assert!(heat_trace_i_with(&cfg, &orb, -1.0, HeatMethod::ClosedForm).is_err());
    assert!(heat_trace_e_with(&cfg, &orb, f64::NAN, HeatMethod::Quadrature).is_err());
}
