//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::Signed;
use torsion_cli::config::{parse_config_str, RunConfig};
use torsion_cli::pseudo::{cmd_pseudo, PseudoOptions};
use torsion_cli::table::{cmd_table, Quantity, TableOptions};
use torsion_cli::verify::{cmd_verify, Suite, VerifyOptions};
use torsion_core::algebra::{int, rat, PhaseMonomial, Rational};
use torsion_core::cone::cone_report;
use torsion_core::elliptic::{alternating_sum_d, identity_alternating_sum};
use torsion_core::lie::{weyl_dim, RayConfig};
use torsion_core::pseudo::pseudopoly_extract;
use torsion_core::torsion::{heat_trace_e_with, heat_trace_i_with, me, HeatMethod, Mode};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, budget_s: u64) -> bool {
    elapsed <= Duration::from_secs(budget_s)
}

fn nu_free_suite() -> Outcome {
    let start = Instant::now();
    let opts = VerifyOptions {
        m_max: Some(6),
        ..VerifyOptions::default()
    };
    let r = cmd_verify(Suite::Lemma51, None, &opts).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    check(
        r.passed() && r.checked == 497 && within(t, 60),
        format!(
            "alternating sums nu-free: {} cases, {} violations, {:.2}s (budget 60s)",
            r.checked,
            r.violations.len(),
            t.as_secs_f64()
        ),
    )
}

fn eqfora_suite() -> Outcome {
    let r =
        cmd_verify(Suite::EqForA, None, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    let pinned = VerifyOptions {
        lambdas: Some(vec![2, 1]),
        kappa: Some(2),
        ..VerifyOptions::default()
    };
    let p = cmd_verify(Suite::EqForA, None, &pinned).map_err(|e| e.to_string())?;
    let pinned_ok = p.passed() && p.lines == ["K=[2, 1] kappa=2: value 3 (sign 1)"];
    check(
        r.passed() && pinned_ok,
        format!(
            "A-factor zeros and signed Vandermonde values: {} (K, kappa) pairs, {} violations; K={{2,1}} kappa=2 value 3: {}",
            r.checked,
            r.violations.len(),
            pinned_ok
        ),
    )
}

fn pinned_values() -> Outcome {
    let ray = |m| RayConfig::trivial(2, m).unwrap();
    let id0 = identity_alternating_sum(&ray(0)).map_err(|e| e.to_string())?;
    let id1 = identity_alternating_sum(&ray(1)).map_err(|e| e.to_string())?;
    let alt = alternating_sum_d(&ray(0), 2).map_err(|e| e.to_string())?;
    let c = |e: i64| alt.get(&PhaseMonomial(vec![e])).map(|p| p.constant_term());
    // zeta^0 coefficient 6 is conjugate-pair coefficient 3
    let alt_ok = alt.len() == 5
        && c(0) == Some(int(6))
        && c(1) == Some(int(-4))
        && c(-1) == Some(int(-4))
        && c(2) == Some(int(1))
        && c(-2) == Some(int(1));
    let cfg = RunConfig::pinned();
    let me_at = |m| {
        me(&ray(m), &cfg.orbifold, Mode::Exact)
            .ok()
            .and_then(|v| v.exact_rational())
    };
    let (me0, me1) = (me_at(0), me_at(1));
    check(
        id0 == int(48) && id1 == int(480) && alt_ok && me0 == Some(int(0)) && me1 == Some(rat(-16, 3)),
        format!(
            "identity sums {id0}, {id1}; d=2 pair coefficients 3, -4, 1: {alt_ok}; ME(0) = {}, ME(1) = {}",
            me0.map_or("?".into(), |x| x.to_string()),
            me1.map_or("?".into(), |x| x.to_string())
        ),
    )
}

const DEGREE_CONFIGS: [&str; 3] = [
    r#"{"n": 2, "tau": [0,0,0], "volume": 1, "classes": [{"d": 2, "angles": [{"p": 1, "q": 4}], "weight": 1}]}"#,
    r#"{"n": 2, "tau": [1,0,0], "volume": 1, "classes": [{"d": 1, "angles": [{"p": 1, "q": 3}, {"p": 1, "q": 6}], "weight": 1}]}"#,
    r#"{"n": 3, "tau": [1,1,0,0], "volume": 1, "classes": [{"d": 3, "angles": [{"p": 1, "q": 2}], "weight": 1}, {"d": 2, "angles": [{"p": 1, "q": 4}, {"p": 1, "q": 2}], "weight": {"num": 1, "den": 2}}]}"#,
];

fn degree_suites() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for text in DEGREE_CONFIGS {
        let cfg = parse_config_str(text).map_err(|e| e.to_string())?;
        let r = cmd_verify(Suite::Lemma52, Some(&cfg), &VerifyOptions::default())
            .map_err(|e| e.to_string())?;
        ok &= r.passed();
        let p = cmd_pseudo(
            &cfg,
            &PseudoOptions {
                m_max: 40,
                ..PseudoOptions::default()
            },
        );
        match p {
            Ok(p) => {
                ok &= p.violations.is_empty();
                notes.push(format!(
                    "ME degrees {:?} <= {}",
                    flatten(&p.degrees),
                    p.bound
                ));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("ME: {e}"));
            }
        }
    }
    let mut id_degrees = Vec::new();
    for n in 1..=3usize {
        let want = n * (n + 1) / 2;
        let base = RayConfig::trivial(n, 0).unwrap();
        let values: Vec<Rational> = (0..=(want as i64 + 3))
            .map(|m| identity_alternating_sum(&base.with_m(m).unwrap()).unwrap())
            .collect();
        let got = pseudopoly_extract(&values, 1, want + 1, 0.0)
            .map_err(|e| e.to_string())?
            .global_degree();
        ok &= got == Some(want);
        id_degrees.push(format!("n={n}: {got:?} (want {want})"));
    }
    let t = start.elapsed();
    check(
        ok && within(t, 300),
        format!(
            "alternating-sum residue degrees within d(d-1)/2; identity degree {}; {}; {:.2}s (budget 300s)",
            id_degrees.join(", "),
            notes.join("; "),
            t.as_secs_f64()
        ),
    )
}

fn flatten(d: &[Option<usize>]) -> Vec<i64> {
    d.iter().map(|x| x.map_or(-1, |x| x as i64)).collect()
}

fn growth_suites() -> Outcome {
    let opts = VerifyOptions {
        m_max: Some(100),
        ..VerifyOptions::default()
    };
    let cfg = RunConfig::pinned();
    let coeffs = cmd_verify(Suite::Lemma53, Some(&cfg), &opts).map_err(|e| e.to_string())?;
    let sup = cmd_verify(Suite::Lemma54, Some(&cfg), &opts).map_err(|e| e.to_string())?;
    check(
        coeffs.passed() && sup.passed(),
        format!(
            "normalized coefficients: {} [{}]; normalized sup over [lambda_n, lambda_k]: {} [{}]",
            if coeffs.passed() {
                "bounded"
            } else {
                "unbounded"
            },
            coeffs.lines.join(" "),
            if sup.passed() { "bounded" } else { "unbounded" },
            sup.lines.join(" ")
        ),
    )
}

fn heat_traces() -> Outcome {
    let cfg = RunConfig::pinned();
    let mut worst = 0.0f64;
    for m in [0, 2] {
        let ray = cfg.ray.with_m(m).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let ic = heat_trace_i_with(&ray, &cfg.orbifold, t, HeatMethod::ClosedForm)
                .map_err(|e| e.to_string())?;
            let iq = heat_trace_i_with(&ray, &cfg.orbifold, t, HeatMethod::Quadrature)
                .map_err(|e| e.to_string())?;
            let ec = heat_trace_e_with(&ray, &cfg.orbifold, t, HeatMethod::ClosedForm)
                .map_err(|e| e.to_string())?;
            let eq = heat_trace_e_with(&ray, &cfg.orbifold, t, HeatMethod::Quadrature)
                .map_err(|e| e.to_string())?;
            worst = worst.max(((ic - iq) / ic).abs());
            worst = worst.max((ec - eq).norm() / ec.norm().max(f64::MIN_POSITIVE));
            if ec == Complex64::new(0.0, 0.0) {
                return Err(format!("elliptic heat trace vanished at m={m} t={t}"));
            }
        }
    }
    check(
        worst < 1e-8,
        format!("closed forms vs quadrature at t in {{0.1, 1, 10}}, m in {{0, 2}}: max relative error {worst:.3e} (limit 1e-8)"),
    )
}

fn ratio_stabilization() -> Outcome {
    let base = RayConfig::trivial(2, 0).unwrap();
    let ratio = |m| {
        let cfg = base.with_m(m).unwrap();
        identity_alternating_sum(&cfg).unwrap() / Rational::from_integer(weyl_dim(&cfg))
    };
    let mut worst = None;
    for m in 20..60 {
        let delta = (ratio(m + 1) - ratio(m)).abs() * int(m);
        if worst.as_ref().is_none_or(|w| &delta > w) {
            worst = Some(delta);
        }
    }
    let worst = worst.unwrap();
    check(
        worst < int(1),
        format!("identity sum / Weyl dimension, m in [20, 60]: max m * |step| = {worst} (limit < 1), ratio {}", ratio(60)),
    )
}

fn cone() -> Outcome {
    let start = Instant::now();
    let grid: Vec<f64> = (3..=8).map(|k| 10f64.powi(-k)).collect();
    let r = cone_report(1.0, &grid).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let last = r.rows.last().unwrap().normalized;
    let slope_ok = (r.slope + 0.25).abs() <= 0.02;
    let norm_ok = (0.98..=1.02).contains(&last);
    check(
        slope_ok && norm_ok && within(t, 10),
        format!(
            "log-log slope {:.4} (want -0.25 +/- 0.02), normalized tail at eps=1e-8 {:.4} (want [0.98, 1.02]), {:.2}s (budget 10s)",
            r.slope,
            last,
            t.as_secs_f64()
        ),
    )
}

fn determinism() -> Outcome {
    let cfg = RunConfig::pinned();
    let opts = TableOptions {
        m_max: 12,
        ..TableOptions::default()
    };
    let mut same = true;
    for q in [
        Quantity::Me,
        Quantity::Mi,
        Quantity::LogT2,
        Quantity::LogT,
        Quantity::HeatE,
        Quantity::HeatI,
    ] {
        let a = cmd_table(&cfg, q, &opts).map_err(|e| e.to_string())?.csv;
        let b = cmd_table(&cfg, q, &opts).map_err(|e| e.to_string())?.csv;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = pool
            .install(|| cmd_table(&cfg, q, &opts))
            .map_err(|e| e.to_string())?
            .csv;
        same &= a == b && a == c;
    }
    check(
        same,
        "six table quantities, repeated and single-threaded runs byte-identical".into(),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1", nu_free_suite),
        ("2", eqfora_suite),
        ("3", pinned_values),
        ("4", degree_suites),
        ("5", growth_suites),
        ("6", heat_traces),
        ("7", ratio_stabilization),
        ("8", cone),
        ("9", determinism),
    ];
    let mut failed = Vec::new();
    for (id, f) in criteria {
        let (status, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed.push(id);
                ("FAIL", d)
            }
        };
        println!("criterion {id}: {status} {detail}");
    }
    println!(
        "acceptance: {} of {} criteria pass{}",
        criteria.len() - failed.len(),
        criteria.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!(", failing: {}", failed.join(", "))
        }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
