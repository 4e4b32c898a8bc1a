//! `pseudo`: residue-class degree report for `ME(m)`.

use rayon::prelude::*;
use torsion_core::pseudo::{pseudopoly_extract, PseudoPolyReport, SequenceValue};
use torsion_core::torsion::{self, Mode};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{fmt_complex, Csv};

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoOptions {
    pub m_max: i64,
    pub mode: Mode,
    /// Residue period; the config's angle lcm when `None`.
    pub q: Option<usize>,
    /// Relative tolerance for float-mode differences.
    pub tolerance: f64,
}

impl Default for PseudoOptions {
    fn default() -> Self {
        Self {
            m_max: 40,
            mode: Mode::Exact,
            q: None,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoOutput {
    pub q: usize,
    /// `(d² + d + 2) / 2` for the largest class `d` (0 without classes).
    pub bound: usize,
    pub degrees: Vec<Option<usize>>,
    /// Per-residue summary: residue, samples, degree, leading coefficient.
    pub summary_csv: String,
    /// `ME(m)` rows: m, re, im, exact.
    pub series_csv: String,
    /// Fitted values: m, residue, re, im.
    pub fit_csv: String,
    pub script: String,
    pub violations: Vec<String>,
}

pub fn degree_bound(d: usize) -> usize {
    (d * d + d + 2) / 2
}

pub fn cmd_pseudo(cfg: &RunConfig, opts: &PseudoOptions) -> Result<PseudoOutput, CliError> {
    let q = opts.q.unwrap_or_else(|| cfg.q());
    if q == 0 {
        return Err(CliError::Usage("q must be positive".into()));
    }
    if opts.m_max < 0 {
        return Err(CliError::Usage("m-max must be non-negative".into()));
    }
    let bound = cfg.orbifold.max_d().map_or(0, degree_bound);
    let values: Vec<torsion::Value> = (0..=opts.m_max)
        .into_par_iter()
        .map(|m| torsion::me(&cfg.ray.with_m(m)?, &cfg.orbifold, opts.mode))
        .collect::<Result<_, _>>()?;
    let mut series = Csv::new(&["m", "re", "im", "exact"]);
    for (m, v) in values.iter().enumerate() {
        let [re, im] = fmt_complex(v.approx);
        let exact = v
            .exact
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_default();
        series.row([m.to_string(), re, im, exact]);
    }
    // one past the bound
    let fit_degree = bound + 1;
    let (summary, fit, degrees) = match opts.mode {
        Mode::Exact => {
            let exact: Vec<_> = values
                .into_iter()
                .map(|v| v.exact.expect("exact mode"))
                .collect();
            render(&pseudopoly_extract(&exact, q, fit_degree, 0.0)?)
        }
        Mode::Float => {
            let approx: Vec<_> = values.iter().map(|v| v.approx).collect();
            render(&pseudopoly_extract(&approx, q, fit_degree, opts.tolerance)?)
        }
    };
    let violations = degrees
        .iter()
        .enumerate()
        .filter_map(|(r, d)| match d {
            Some(d) if *d <= bound => None,
            Some(d) => Some(format!("residue {r}: degree {d} exceeds bound {bound}")),
            None => Some(format!(
                "residue {r}: not polynomial up to degree {fit_degree}"
            )),
        })
        .collect();
    Ok(PseudoOutput {
        q,
        bound,
        degrees,
        summary_csv: summary,
        series_csv: series.into_string(),
        fit_csv: fit,
        script: plot_script(q),
        violations,
    })
}

fn render<V: SequenceValue>(report: &PseudoPolyReport<V>) -> (String, String, Vec<Option<usize>>) {
    let mut summary = Csv::new(&[
        "residue",
        "samples",
        "degree",
        "leading_re",
        "leading_im",
        "leading_exact",
    ]);
    let mut fit = Csv::new(&["m", "residue", "re", "im"]);
    for r in &report.residues {
        let (lre, lim, lexact) = match &r.leading {
            Some(l) => {
                let [re, im] = fmt_complex(l.to_complex());
                (re, im, l.exact_string().unwrap_or_default())
            }
            None => (String::new(), String::new(), String::new()),
        };
        let degree = r.degree.map_or("none".to_string(), |d| d.to_string());
        summary.row([
            r.residue.to_string(),
            r.samples.to_string(),
            degree,
            lre,
            lim,
            lexact,
        ]);
        if r.degree.is_some() {
            for j in 0..r.samples {
                let [re, im] = fmt_complex(r.eval_index(j));
                fit.row([
                    (r.residue + j * report.q).to_string(),
                    r.residue.to_string(),
                    re,
                    im,
                ]);
            }
        }
    }
    (summary.into_string(), fit.into_string(), report.degrees())
}

fn plot_script(q: usize) -> String {
    format!(
        "# gnuplot script: ME(m) with the per-residue polynomial fits\n\
         set datafile separator ','\n\
         set key outside\n\
         set xlabel 'm'\n\
         set ylabel 'Re ME(m)'\n\
         plot 'me.csv' using 1:2 skip 1 with points pt 7 title 'ME(m)', \\\n\
         \x20    for [r=0:{last}] 'pseudo_fit.csv' using ($2 == r ? $1 : NaN):3 skip 1 with lines title sprintf('fit, m = %d mod {q}', r)\n",
        last = q - 1
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_degrees_within_bound() {
        let out = cmd_pseudo(&RunConfig::pinned(), &PseudoOptions::default()).unwrap();
        assert_eq!(out.q, 4);
        assert_eq!(out.bound, 4);
        assert!(out.violations.is_empty(), "{:?}", out.violations);
        assert!(out.degrees.iter().all(|d| d.is_some_and(|d| d <= 4)));
        assert_eq!(out.series_csv.lines().count(), 42);
    }

    #[test]
    fn float_mode_agrees() {
        let opts = PseudoOptions {
            mode: Mode::Float,
            ..PseudoOptions::default()
        };
        let exact = cmd_pseudo(&RunConfig::pinned(), &PseudoOptions::default()).unwrap();
        let float = cmd_pseudo(&RunConfig::pinned(), &opts).unwrap();
        assert_eq!(exact.degrees, float.degrees);
    }

    #[test]
    fn too_few_samples() {
        let opts = PseudoOptions {
            m_max: 10,
            ..PseudoOptions::default()
        };
        let err = cmd_pseudo(&RunConfig::pinned(), &opts).unwrap_err();
        assert_eq!(err.exit_code(), crate::error::EXIT_CONFIG);
    }
}
