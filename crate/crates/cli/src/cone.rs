//! `cone`: regularized tails of the divergent cone integral.

use torsion_core::cone::{cone_report_with_tol, ConeReport};

use crate::error::CliError;
use crate::output::{fmt_f64, Csv};

#[derive(Debug, Clone)]
pub struct ConeOutput {
    pub report: ConeReport,
    /// eps, tail, normalized
    pub csv: String,
    pub script: String,
}

pub fn cmd_cone(u: f64, eps: &[f64], tolerance: f64) -> Result<ConeOutput, CliError> {
    if eps.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(CliError::Usage("eps values must lie in (0, 1)".into()));
    }
    let report = cone_report_with_tol(u, eps, tolerance)?;
    let mut csv = Csv::new(&["eps", "tail", "normalized"]);
    for r in &report.rows {
        csv.row([fmt_f64(r.eps), fmt_f64(r.tail), fmt_f64(r.normalized)]);
    }
    let script = format!(
        "# gnuplot script: tail integral against eps, with the leading-order tail\n\
         set datafile separator ','\n\
         set logscale xy\n\
         set xlabel 'eps'\n\
         set ylabel 'tail'\n\
         set title 'u = {u}, fitted slope {slope:.6}'\n\
         plot 'cone.csv' using 1:2 skip 1 with linespoints pt 7 title 'tail', \\\n\
         \x20    x**(-0.25) / (16 * sqrt({u})) with lines title 'eps^(-1/4) / (16 sqrt(u))'\n",
        slope = report.slope
    );
    Ok(ConeOutput {
        csv: csv.into_string(),
        script,
        report,
    })
}
