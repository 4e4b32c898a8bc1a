//! `table`: one CSV row per `m` (or per `t` for heat traces).

use num_complex::Complex64;
use rayon::prelude::*;
use torsion_core::torsion::{self, Mode, Normalization, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{fmt_complex, fmt_f64, Csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Quantity {
    #[value(name = "ME")]
    Me,
    #[value(name = "MI")]
    Mi,
    #[value(name = "logT2")]
    LogT2,
    #[value(name = "logT")]
    LogT,
    #[value(name = "heatE")]
    HeatE,
    #[value(name = "heatI")]
    HeatI,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Me => "ME",
            Quantity::Mi => "MI",
            Quantity::LogT2 => "logT2",
            Quantity::LogT => "logT",
            Quantity::HeatE => "heatE",
            Quantity::HeatI => "heatI",
        }
    }

    pub fn is_heat(&self) -> bool {
        matches!(self, Quantity::HeatE | Quantity::HeatI)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableOptions {
    pub m_min: i64,
    pub m_max: i64,
    pub mode: Mode,
    /// Ray point used by heat-trace tables.
    pub heat_m: i64,
    pub ts: Vec<f64>,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            m_min: 0,
            m_max: 10,
            mode: Mode::Exact,
            heat_m: 0,
            ts: vec![0.1, 1.0, 10.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub csv: String,
    /// Human-readable remarks (normalization in use).
    pub notes: Vec<String>,
}

fn value_row(m: i64, v: &Value) -> Vec<String> {
    let [re, im] = fmt_complex(v.approx);
    let exact = v
        .exact
        .as_ref()
        .map(ToString::to_string)
        .unwrap_or_default();
    vec![m.to_string(), re, im, exact]
}

pub fn cmd_table(
    cfg: &RunConfig,
    quantity: Quantity,
    opts: &TableOptions,
) -> Result<Table, CliError> {
    if quantity.is_heat() {
        return heat_table(cfg, quantity, opts);
    }
    if opts.m_min < 0 || opts.m_max < opts.m_min {
        return Err(CliError::Usage(format!(
            "invalid m range {}..={}",
            opts.m_min, opts.m_max
        )));
    }
    let rows: Vec<(i64, Value, Option<Normalization>)> = (opts.m_min..=opts.m_max)
        .into_par_iter()
        .map(|m| {
            let ray = cfg.ray.with_m(m)?;
            let orb = &cfg.orbifold;
            let (v, norm) = match quantity {
                Quantity::Me => (torsion::me(&ray, orb, opts.mode)?, None),
                Quantity::Mi => split(torsion::mi_standin(&ray, orb, opts.mode)?),
                Quantity::LogT2 => split(torsion::log_t2(&ray, orb, opts.mode)?),
                Quantity::LogT => split(torsion::log_t_approx(&ray, orb, opts.mode)?),
                Quantity::HeatE | Quantity::HeatI => unreachable!(),
            };
            Ok((m, v, norm))
        })
        .collect::<Result<_, torsion_core::Error>>()?;
    let mut csv = Csv::new(&["m", "re", "im", "exact"]);
    for (m, v, _) in &rows {
        csv.row(value_row(*m, v));
    }
    let mut notes = Vec::new();
    if let Some((_, _, Some(norm))) = rows.first() {
        notes.push(format!("{}: {}", quantity.name(), norm.label()));
    }
    if quantity == Quantity::LogT {
        notes.push("logT omits the exponentially small remainder".into());
    }
    Ok(Table {
        csv: csv.into_string(),
        notes,
    })
}

fn split(n: torsion::Normalized) -> (Value, Option<Normalization>) {
    (n.value, Some(n.normalization))
}

fn heat_table(cfg: &RunConfig, quantity: Quantity, opts: &TableOptions) -> Result<Table, CliError> {
    if opts.ts.is_empty() {
        return Err(CliError::Usage("no t values".into()));
    }
    let ray = cfg.ray.with_m(opts.heat_m)?;
    let rows: Vec<Complex64> = opts
        .ts
        .par_iter()
        .map(|&t| match quantity {
            Quantity::HeatE => torsion::heat_trace_e(&ray, &cfg.orbifold, t),
            _ => torsion::heat_trace_i(&ray, &cfg.orbifold, t).map(|x| Complex64::new(x, 0.0)),
        })
        .collect::<Result<_, _>>()?;
    let mut csv = Csv::new(&["t", "re", "im", "exact"]);
    for (t, z) in opts.ts.iter().zip(&rows) {
        let [re, im] = fmt_complex(*z);
        csv.row([fmt_f64(*t), re, im, String::new()]);
    }
    let mut notes = vec![format!("{} at m = {}", quantity.name(), opts.heat_m)];
    if quantity == Quantity::HeatI {
        let (_, norm) = torsion::identity_polynomials(&ray, &cfg.orbifold)?;
        notes.push(format!("heatI: {}", norm.label()));
    }
    Ok(Table {
        csv: csv.into_string(),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;

    #[test]
    fn pinned_me_rows() {
        let cfg = RunConfig::pinned();
        let opts = TableOptions {
            m_max: 1,
            ..TableOptions::default()
        };
        let t = cmd_table(&cfg, Quantity::Me, &opts).unwrap();
        let lines: Vec<&str> = t.csv.lines().collect();
        assert_eq!(lines[0], "m,re,im,exact");
        assert_eq!(lines[1], "0,0.000000000000000e0,0.000000000000000e0,0");
        assert_eq!(lines[2], "1,-5.333333333333333e0,0.000000000000000e0,-16/3");
    }

    #[test]
    fn no_classes_gives_zero_me() {
        let cfg = parse_config_str(r#"{"n": 2, "tau": [0,0,0], "volume": 1}"#).unwrap();
        let t = cmd_table(&cfg, Quantity::Me, &TableOptions::default()).unwrap();
        for line in t.csv.lines().skip(1) {
            assert!(
                line.ends_with(",0.000000000000000e0,0.000000000000000e0,0"),
                "{line}"
            );
        }
    }

    #[test]
    fn heat_rows_and_notes() {
        let cfg = RunConfig::pinned();
        let t = cmd_table(&cfg, Quantity::HeatI, &TableOptions::default()).unwrap();
        assert_eq!(t.csv.lines().count(), 4);
        assert!(t.notes.iter().any(|n| n.contains("stand-in")));
        let bad = TableOptions {
            m_min: 3,
            m_max: 2,
            ..TableOptions::default()
        };
        assert!(cmd_table(&cfg, Quantity::Mi, &bad).is_err());
    }
}
