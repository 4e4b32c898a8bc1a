use num_traits::Signed;
use torsion_core::algebra::{int, Angle, CycloElem, Rational};
use torsion_core::elliptic::identity_alternating_sum;
use torsion_core::lie::{weyl_dim, EllipticClass, RayConfig};
use torsion_core::pseudo::pseudopoly_extract;
use torsion_core::torsion::{alternating_sum_at, me, Mode, OrbifoldData, Real};

fn class(n: usize, d: usize, angles: &[(i64, i64)]) -> EllipticClass {
    let angles = angles
        .iter()
        .map(|&(p, q)| Angle::two_pi(p, q).unwrap())
        .collect();
    EllipticClass::new(n, d, angles, int(1)).unwrap()
}

fn cases() -> Vec<(usize, Vec<i64>, EllipticClass)> {
    vec![
        (2, vec![0, 0, 0], class(2, 2, &[(1, 4)])),
        (2, vec![1, 0, 0], class(2, 1, &[(1, 3), (1, 6)])),
        (3, vec![0, 0, 0, 0], class(3, 2, &[(1, 4), (1, 2)])),
        (3, vec![1, 1, 0, 0], class(3, 3, &[(1, 5)])),
    ]
}

#[test]
fn alternating_sum_degree_bound() {
    for (n, tau, cls) in cases() {
        let q = cls.period() as usize;
        let orb = OrbifoldData::new(n, Real::Exact(int(1)), vec![cls.clone()], None).unwrap();
        let field = orb.field();
        let base = RayConfig::new(n, tau.clone(), 0).unwrap();
        let bound = cls.d() * (cls.d() - 1) / 2;
        let m_max = (q * (bound + 3)) as i64;
        let values: Vec<CycloElem> = (0..=m_max)
            .map(|m| alternating_sum_at(&base.with_m(m).unwrap(), &cls, &field).unwrap())
            .collect();
        let report = pseudopoly_extract(&values, q, bound + 1, 0.0).unwrap();
        let degree = report
            .global_degree()
            .expect("polynomial on residue classes");
        assert!(
            degree <= bound,
            "n={n} tau={tau:?} d={} degree={degree}",
            cls.d()
        );
    }
}

#[test]
fn identity_alternating_sum_degree_is_exact() {
    for n in 1..=3usize {
        for tau in [vec![0; n + 1], {
            let mut t = vec![0; n + 1];
            t[0] = 1;
            t
        }] {
            let want = n * (n + 1) / 2;
            let base = RayConfig::new(n, tau.clone(), 0).unwrap();
            let values: Vec<Rational> = (0..=(want as i64 + 3))
                .map(|m| identity_alternating_sum(&base.with_m(m).unwrap()).unwrap())
                .collect();
            let report = pseudopoly_extract(&values, 1, want + 1, 0.0).unwrap();
            assert_eq!(report.global_degree(), Some(want), "n={n} tau={tau:?}");
        }
    }
}

#[test]
fn me_degree_bound_up_to_forty() {
    for (n, tau, cls) in cases() {
        let q = cls.period() as usize;
        let d = cls.d();
        let bound = (d * d + d + 2) / 2;
        let orb = OrbifoldData::new(n, Real::Exact(int(1)), vec![cls.clone()], None).unwrap();
        let base = RayConfig::new(n, tau.clone(), 0).unwrap();
        let values: Vec<CycloElem> = (0..=40)
            .map(|m| {
                me(&base.with_m(m).unwrap(), &orb, Mode::Exact)
                    .unwrap()
                    .exact
                    .unwrap()
            })
            .collect();
        let max_fit = (values.len() / q).saturating_sub(2).min(bound + 1);
        let report = pseudopoly_extract(&values, q, max_fit, 0.0).unwrap();
        let degree = report
            .global_degree()
            .expect("polynomial on residue classes");
        assert!(degree <= bound, "n={n} tau={tau:?} d={d} degree={degree}");
    }
}

#[test]
fn identity_ratio_stabilizes() {
    let base = RayConfig::trivial(2, 0).unwrap();
    let ratio = |m| {
        let cfg = base.with_m(m).unwrap();
        identity_alternating_sum(&cfg).unwrap() / Rational::from_integer(weyl_dim(&cfg))
    };
    for m in 20..60 {
        let delta = ratio(m + 1) - ratio(m);
        assert!(delta.abs() < Rational::new(1.into(), m.into()), "m={m}");
    }
}
