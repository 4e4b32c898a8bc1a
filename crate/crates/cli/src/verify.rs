//! `verify`: exact and property suites with violation reports.

use torsion_core::algebra::CycloElem;
use torsion_core::elliptic::{alternating_sum_d, eqfora_check, EqForA};
use torsion_core::lie::{EllipticClass, RayConfig};
use torsion_core::pseudo::pseudopoly_extract;
use torsion_core::torsion::{
    alternating_sum_at, default_nu_fracs, growth_check_lemma53, growth_check_lemma54, telescoping,
    GrowthTable,
};
use torsion_core::Error;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{fmt_f64, Csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Alternating sums over k are free of nu.
    #[value(name = "lemma51")]
    Lemma51,
    /// Alternating sums at the class angles have residue degree <= d(d-1)/2.
    #[value(name = "lemma52")]
    Lemma52,
    /// Normalized P coefficients stay bounded in m.
    #[value(name = "lemma53")]
    Lemma53,
    /// Normalized sup of |P| over [lambda_n, lambda_k] stays bounded in m.
    #[value(name = "lemma54")]
    Lemma54,
    /// Zeros and pinned values of the A factor.
    #[value(name = "eqforA")]
    EqForA,
    /// The split of the alternating integral at lambda_n.
    #[value(name = "telescoping")]
    Telescoping,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Lemma51 => "lemma51",
            Suite::Lemma52 => "lemma52",
            Suite::Lemma53 => "lemma53",
            Suite::Lemma54 => "lemma54",
            Suite::EqForA => "eqforA",
            Suite::Telescoping => "telescoping",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub m_max: Option<i64>,
    pub q: Option<usize>,
    pub degree_cap: Option<usize>,
    pub lambdas: Option<Vec<i64>>,
    pub kappa: Option<i64>,
    pub nu_points: usize,
    /// Growth suites: the maximum must be attained before this `m`.
    pub split: i64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            m_max: None,
            q: None,
            degree_cap: None,
            lambdas: None,
            kappa: None,
            nu_points: 17,
            split: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub suite: Suite,
    pub checked: usize,
    pub lines: Vec<String>,
    pub violations: Vec<String>,
    /// Extra CSV files as `(file name, contents)`.
    pub tables: Vec<(String, String)>,
}

impl VerifyReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            checked: 0,
            lines: Vec::new(),
            violations: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        for v in &self.violations {
            s.push_str("violation: ");
            s.push_str(v);
            s.push('\n');
        }
        s.push_str(&format!(
            "{} {}: {} checked, {} violations\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite.name(),
            self.checked,
            self.violations.len()
        ));
        s
    }
}

fn non_increasing(len: usize, max: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return vec![vec![]];
    }
    (0..=max)
        .flat_map(|first| {
            non_increasing(len - 1, first)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// `n ∈ {1, 2, 3}` with every non-increasing `τ` whose entries are at most 2.
pub fn default_grid() -> Vec<RayConfig> {
    (1..=3usize)
        .flat_map(|n| {
            non_increasing(n + 1, 2)
                .into_iter()
                .map(move |tau| (n, tau))
        })
        .map(|(n, tau)| RayConfig::new(n, tau, 0).expect("valid grid point"))
        .collect()
}

fn grid(cfg: Option<&RunConfig>) -> Vec<RayConfig> {
    match cfg {
        Some(c) => vec![c.ray.clone()],
        None => default_grid(),
    }
}

fn tag(ray: &RayConfig, d: usize) -> String {
    format!("n={} tau={:?} m={} d={d}", ray.n(), ray.tau(), ray.m())
}

pub fn cmd_verify(
    suite: Suite,
    cfg: Option<&RunConfig>,
    opts: &VerifyOptions,
) -> Result<VerifyReport, CliError> {
    let mut report = VerifyReport::new(suite);
    match suite {
        Suite::Lemma51 => lemma51(cfg, opts, &mut report)?,
        Suite::Lemma52 => lemma52(cfg, opts, &mut report)?,
        Suite::Lemma53 | Suite::Lemma54 => growth(suite, cfg, opts, &mut report)?,
        Suite::EqForA => eqfora(cfg, opts, &mut report)?,
        Suite::Telescoping => telescoping_suite(cfg, opts, &mut report)?,
    }
    Ok(report)
}

fn lemma51(
    cfg: Option<&RunConfig>,
    opts: &VerifyOptions,
    report: &mut VerifyReport,
) -> Result<(), CliError> {
    for base in grid(cfg) {
        for m in 0..=opts.m_max.unwrap_or(6) {
            let ray = base.with_m(m)?;
            for d in 1..=ray.n() {
                report.checked += 1;
                match alternating_sum_d(&ray, d) {
                    Ok(p) if p.is_nu_free() => {}
                    Ok(p) => report.violations.push(format!(
                        "{} k=all: nu-degree {:?}",
                        tag(&ray, d),
                        p.max_nu_degree()
                    )),
                    Err(Error::LemmaViolation(msg)) => report
                        .violations
                        .push(format!("{} k=all: {msg}", tag(&ray, d))),
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(())
}

fn classes(cfg: Option<&RunConfig>) -> RunConfig {
    cfg.cloned().unwrap_or_else(RunConfig::pinned)
}

fn lemma52(
    cfg: Option<&RunConfig>,
    opts: &VerifyOptions,
    report: &mut VerifyReport,
) -> Result<(), CliError> {
    let run = classes(cfg);
    let field = run.orbifold.field();
    for (i, cls) in run.orbifold.classes().iter().enumerate() {
        let d = cls.d();
        let q = opts.q.unwrap_or(cls.period() as usize);
        if q == 0 {
            return Err(CliError::Usage("q must be positive".into()));
        }
        let cap = opts.degree_cap.unwrap_or(d * (d - 1) / 2);
        let m_max = opts.m_max.unwrap_or((q * (cap + 4)) as i64);
        let values: Vec<CycloElem> = (0..=m_max)
            .map(|m| alternating_sum_at(&run.ray.with_m(m)?, cls, &field))
            .collect::<Result<_, _>>()?;
        let fit = pseudopoly_extract(&values, q, cap + 1, 0.0)?;
        report.checked += 1;
        let degrees = fit.degrees();
        report.lines.push(format!(
            "class {i} (d={d}): q={q}, residue degrees {}, cap {cap}",
            show_degrees(&degrees)
        ));
        for (r, deg) in degrees.iter().enumerate() {
            match deg {
                Some(x) if *x <= cap => {}
                Some(x) => report
                    .violations
                    .push(format!("class {i} d={d} residue {r}: degree {x} > {cap}")),
                None => report.violations.push(format!(
                    "class {i} d={d} residue {r}: not polynomial up to degree {}",
                    cap + 1
                )),
            }
        }
    }
    Ok(())
}

fn show_degrees(d: &[Option<usize>]) -> String {
    let parts: Vec<String> = d
        .iter()
        .map(|x| x.map_or("none".into(), |x| x.to_string()))
        .collect();
    format!("[{}]", parts.join(" "))
}

fn growth_csv(table: &GrowthTable) -> String {
    let mut csv = Csv::new(&["m", "normalized"]);
    for r in &table.rows {
        csv.row([r.m.to_string(), fmt_f64(r.value)]);
    }
    csv.into_string()
}

fn growth(
    suite: Suite,
    cfg: Option<&RunConfig>,
    opts: &VerifyOptions,
    report: &mut VerifyReport,
) -> Result<(), CliError> {
    let run = classes(cfg);
    let m_max = opts.m_max.unwrap_or(100);
    if m_max < opts.split {
        return Err(CliError::Usage(format!(
            "m-max {m_max} is below the split point {}",
            opts.split
        )));
    }
    let m_grid: Vec<i64> = (1..=m_max).collect();
    let fracs = default_nu_fracs(opts.nu_points);
    for (i, cls) in run.orbifold.classes().iter().enumerate() {
        let table = growth_table(suite, &run.ray, cls, &m_grid, &fracs)?;
        let verdict = table.assess(opts.split).ok_or(Error::EmptyGrid(
            "growth grid needs points on both sides of the split",
        ))?;
        report.checked += 1;
        report.lines.push(format!(
            "class {i} (d={}): normalized by m^{}; max before m={} is {} at m={}, max after is {} at m={}, threshold {}",
            cls.d(),
            table.exponent,
            opts.split,
            fmt_f64(verdict.max_before),
            verdict.argmax_before,
            fmt_f64(verdict.max_after),
            verdict.argmax_after,
            fmt_f64(verdict.threshold),
        ));
        if !verdict.bounded {
            report.violations.push(format!(
                "class {i} d={} tau={:?}: normalized value {} at m={} exceeds threshold {}",
                cls.d(),
                run.ray.tau(),
                fmt_f64(verdict.max_after),
                verdict.argmax_after,
                fmt_f64(verdict.threshold)
            ));
        }
        report
            .tables
            .push((format!("{}_class{i}.csv", suite.name()), growth_csv(&table)));
    }
    Ok(())
}

pub fn growth_table(
    suite: Suite,
    base: &RayConfig,
    cls: &EllipticClass,
    m_grid: &[i64],
    fracs: &[f64],
) -> Result<GrowthTable, Error> {
    match suite {
        Suite::Lemma53 => growth_check_lemma53(base, cls, m_grid),
        _ => growth_check_lemma54(base, cls, m_grid, fracs),
    }
}

fn subsets(items: &[i64], size: usize) -> Vec<Vec<i64>> {
    if size == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], size - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn eqfora_one(k_set: &[i64], kappa: i64, report: &mut VerifyReport) -> Result<EqForA, CliError> {
    let r = eqfora_check(k_set, kappa)?;
    report.checked += 1;
    let want_zeros = 2 * (k_set.len() - 1);
    if r.zeros_verified != want_zeros {
        report.violations.push(format!(
            "K={k_set:?} kappa={kappa}: {} of {want_zeros} zeros",
            r.zeros_verified
        ));
    }
    let want = r.vandermonde.clone() * torsion_core::algebra::int(r.sign as i64);
    if r.value != want {
        report.violations.push(format!(
            "K={k_set:?} kappa={kappa}: value {} != {want}",
            r.value
        ));
    }
    Ok(r)
}

fn eqfora(
    cfg: Option<&RunConfig>,
    opts: &VerifyOptions,
    report: &mut VerifyReport,
) -> Result<(), CliError> {
    if let Some(k_set) = &opts.lambdas {
        let kappas = match opts.kappa {
            Some(k) => vec![k],
            None => k_set.clone(),
        };
        for kappa in kappas {
            let r = eqfora_one(k_set, kappa, report)?;
            report.lines.push(format!(
                "K={k_set:?} kappa={kappa}: value {} (sign {})",
                r.value, r.sign
            ));
        }
        return Ok(());
    }
    let mut lams: Vec<i64> = Vec::new();
    for base in grid(cfg) {
        for m in 0..=opts.m_max.unwrap_or(3) {
            lams.extend(base.with_m(m)?.lambdas());
        }
    }
    lams.sort_unstable();
    lams.dedup();
    report
        .lines
        .push(format!("lambda grid {lams:?}, subsets of size 1..=3"));
    for size in 1..=3 {
        for k_set in subsets(&lams, size) {
            for &kappa in &k_set {
                eqfora_one(&k_set, kappa, report)?;
            }
        }
    }
    Ok(())
}

fn telescoping_suite(
    cfg: Option<&RunConfig>,
    opts: &VerifyOptions,
    report: &mut VerifyReport,
) -> Result<(), CliError> {
    for base in grid(cfg) {
        for m in 0..=opts.m_max.unwrap_or(5) {
            let ray = base.with_m(m)?;
            for d in 1..=ray.n() {
                report.checked += 1;
                if !telescoping(&ray, d)?.holds() {
                    report
                        .violations
                        .push(format!("{} k=all: split does not hold", tag(&ray, d)));
                }
            }
        }
    }
    Ok(())
}
