//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use torsion_core::cone::{default_eps_grid, TAIL_REL_TOL};
use torsion_core::torsion::Mode;

use crate::cone::cmd_cone;
use crate::config::{parse_config, schema, to_canonical_json, RunConfig};
use crate::error::{CliError, EXIT_PASS, EXIT_VIOLATION};
use crate::output::write_file;
use crate::pseudo::{cmd_pseudo, PseudoOptions};
use crate::table::{cmd_table, Quantity, TableOptions};
use crate::verify::{cmd_verify, Suite, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "torsion",
    version,
    about = "Elliptic and identity torsion contributions on hyperbolic orbifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON run configuration; commands fall back to a built-in example.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Largest m on the ray.
    #[arg(long, global = true, value_name = "N")]
    pub m_max: Option<i64>,

    /// Float-mode difference tolerance (pseudo) or quadrature tolerance (cone).
    #[arg(long, global = true, value_name = "X")]
    pub tolerance: Option<f64>,

    /// Write outputs into this directory instead of stdout.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Exact cyclotomic arithmetic (default).
    #[arg(long, global = true, conflicts_with = "float")]
    pub exact: bool,

    /// Double-precision phases.
    #[arg(long, global = true)]
    pub float: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite; exit 1 on any violation.
    Verify {
        suite: Suite,
        /// Residue period override.
        #[arg(long)]
        q: Option<usize>,
        /// Degree cap override for lemma52.
        #[arg(long)]
        degree_cap: Option<usize>,
        /// Explicit lambda set for eqforA, e.g. 2,1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambdas: Option<Vec<i64>>,
        /// Single kappa for eqforA.
        #[arg(long)]
        kappa: Option<i64>,
        /// nu samples per interval for lemma54.
        #[arg(long, default_value_t = 17)]
        nu_points: usize,
    },
    /// CSV table of a quantity along the ray.
    Table {
        quantity: Quantity,
        /// Smallest m.
        #[arg(long, default_value_t = 0)]
        m_min: i64,
        /// Ray point for heat traces.
        #[arg(long, default_value_t = 0)]
        m: i64,
        /// Heat-trace times.
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1.0, 10.0])]
        t: Vec<f64>,
    },
    /// Residue-class degree report for ME(m), with a gnuplot script.
    Pseudo {
        /// Residue period override.
        #[arg(long)]
        q: Option<usize>,
    },
    /// Tails of the cone integral, with a gnuplot script.
    Cone {
        #[arg(long, default_value_t = 1.0)]
        u: f64,
        /// Comma-separated eps grid (default 1e-3, ..., 1e-8).
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
    },
    /// Print the config JSON schema, or the canonical form of --config.
    Schema {
        #[arg(long, requires = "config")]
        canonical: bool,
    },
}

impl Cli {
    fn mode(&self) -> Mode {
        if self.float {
            Mode::Float
        } else {
            Mode::Exact
        }
    }

    fn load(&self) -> Result<Option<RunConfig>, CliError> {
        self.config
            .as_deref()
            .map(parse_config)
            .transpose()
            .map_err(Into::into)
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let loaded = cli.load()?;
    let cfg = || loaded.clone().unwrap_or_else(RunConfig::pinned);
    match &cli.command {
        Command::Verify {
            suite,
            q,
            degree_cap,
            lambdas,
            kappa,
            nu_points,
        } => {
            let opts = VerifyOptions {
                m_max: cli.m_max,
                q: *q,
                degree_cap: *degree_cap,
                lambdas: lambdas.clone(),
                kappa: *kappa,
                nu_points: *nu_points,
                ..VerifyOptions::default()
            };
            let report = cmd_verify(*suite, loaded.as_ref(), &opts)?;
            let text = report.render();
            out.write_all(text.as_bytes()).map_err(io_err)?;
            if let Some(dir) = &cli.out {
                write_file(dir, &format!("verify_{}.txt", suite.name()), &text)?;
                for (name, contents) in &report.tables {
                    write_file(dir, name, contents)?;
                }
            }
            Ok(if report.passed() {
                EXIT_PASS
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Table {
            quantity,
            m_min,
            m,
            t,
        } => {
            let opts = TableOptions {
                m_min: *m_min,
                m_max: cli.m_max.unwrap_or(10),
                mode: cli.mode(),
                heat_m: *m,
                ts: t.clone(),
            };
            let table = cmd_table(&cfg(), *quantity, &opts)?;
            for note in &table.notes {
                writeln!(err, "note: {note}").map_err(io_err)?;
            }
            match &cli.out {
                Some(dir) => {
                    let path = write_file(dir, &format!("{}.csv", quantity.name()), &table.csv)?;
                    writeln!(out, "{}", path.display()).map_err(io_err)?;
                }
                None => out.write_all(table.csv.as_bytes()).map_err(io_err)?,
            }
            Ok(EXIT_PASS)
        }
        Command::Pseudo { q } => {
            let defaults = PseudoOptions::default();
            let opts = PseudoOptions {
                m_max: cli.m_max.unwrap_or(defaults.m_max),
                mode: cli.mode(),
                q: *q,
                tolerance: cli.tolerance.unwrap_or(defaults.tolerance),
            };
            let res = cmd_pseudo(&cfg(), &opts)?;
            match &cli.out {
                Some(dir) => {
                    write_file(dir, "me.csv", &res.series_csv)?;
                    write_file(dir, "pseudo.csv", &res.summary_csv)?;
                    write_file(dir, "pseudo_fit.csv", &res.fit_csv)?;
                    write_file(dir, "pseudo.gp", &res.script)?;
                    writeln!(out, "q = {}, degree bound {}", res.q, res.bound).map_err(io_err)?;
                    out.write_all(res.summary_csv.as_bytes()).map_err(io_err)?;
                }
                None => out.write_all(res.summary_csv.as_bytes()).map_err(io_err)?,
            }
            for v in &res.violations {
                writeln!(err, "violation: {v}").map_err(io_err)?;
            }
            Ok(if res.violations.is_empty() {
                EXIT_PASS
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Cone { u, eps } => {
            let grid = if eps.is_empty() {
                default_eps_grid()
            } else {
                eps.clone()
            };
            let res = cmd_cone(*u, &grid, cli.tolerance.unwrap_or(TAIL_REL_TOL))?;
            let slope = format!("fitted log-log slope {:.6}", res.report.slope);
            match &cli.out {
                Some(dir) => {
                    write_file(dir, "cone.csv", &res.csv)?;
                    write_file(dir, "cone.gp", &res.script)?;
                    writeln!(out, "{slope}").map_err(io_err)?;
                }
                None => {
                    out.write_all(res.csv.as_bytes()).map_err(io_err)?;
                    writeln!(err, "{slope}").map_err(io_err)?;
                }
            }
            Ok(EXIT_PASS)
        }
        Command::Schema { canonical } => {
            let text = match (canonical, &loaded) {
                (true, Some(c)) => to_canonical_json(c),
                _ => serde_json::to_string_pretty(&schema()).expect("serializable") + "\n",
            };
            match &cli.out {
                Some(dir) => {
                    let name = if *canonical {
                        "config.json"
                    } else {
                        "schema.json"
                    };
                    let path = write_file(dir, name, &text)?;
                    writeln!(out, "{}", path.display()).map_err(io_err)?;
                }
                None => out.write_all(text.as_bytes()).map_err(io_err)?,
            }
            Ok(EXIT_PASS)
        }
    }
}
