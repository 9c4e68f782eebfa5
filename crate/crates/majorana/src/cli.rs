//! Argument parsing and the subcommands. Every command is a thin wrapper
//! that reads its inputs and serializes a single library call.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use majorana_core::dynamics::{max_star_displacement, oracle_trajectory};
use majorana_core::oracle::wrap_phase;
use majorana_core::{
    constellation_to_state, evolve_stars, free_energy, geometric_phase, matching_sums, moments, partition_function,
    quantum_tensors, state_to_constellation, Constellation, HamiltonianSpec, MatchingSums, PhaseMethod, Spin,
    SpinState, StarPath, TangentFrame, Trajectory, WeightedGraph,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance::{self, Config};
use crate::json::{self, ConstellationJson, HamiltonianJson, PathJson, StateJson, TrajectoryJson};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "majorana",
    version,
    about = "Majorana stars of spin-J states: conversion, moments, geometry, dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// State to constellation (--state) or constellation to state (--constellation).
    Convert {
        #[arg(long, conflicts_with = "constellation", required_unless_present = "constellation")]
        state: Option<PathBuf>,
        #[arg(long)]
        constellation: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition function Z with its free energy F, plus the diagram sums D.
    Norm {
        #[arg(long)]
        constellation: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// <n>, <n n>, <J> and <Q> of a constellation.
    Moments {
        #[arg(long)]
        constellation: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Metric g and curvature f on the (theta-hat, phi-hat) frames.
    Tensors {
        #[arg(long)]
        constellation: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Berry phase of a closed star path.
    Phase {
        #[arg(long)]
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the star equations of motion.
    Evolve {
        /// Spin as 1.5 or 3/2; must agree with the initial constellation.
        #[arg(long)]
        j: Option<String>,
        /// Hamiltonian JSON file.
        #[arg(long)]
        h: PathBuf,
        /// Initial constellation JSON file.
        #[arg(long)]
        u0: PathBuf,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also emit the Schrodinger-evolved star trajectory.
        #[arg(long)]
        oracle: bool,
        /// Write per-star rows t,star,x,y,z to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the acceptance suite (small sizes unless --full).
    Selftest {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long)]
        full: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Line,
    Holonomy,
    Both,
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `stdout` and diagnostics to `stderr`. Returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let text = err.render().to_string();
            let sink: &mut dyn Write = if err.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    if let Command::Selftest { seed, full } = cli.command {
        return selftest(seed, full, stdout);
    }
    match execute(&cli.command) {
        Ok(output) => {
            let _ = writeln!(stdout, "{output}");
            0
        }
        Err(err) => {
            let _ = writeln!(stderr, "majorana: {err}");
            err.exit_code()
        }
    }
}

fn selftest(seed: u64, full: bool, stdout: &mut dyn Write) -> i32 {
    let config = if full { Config::full(seed) } else { Config::quick(seed) };
    let mut failed = 0;
    let outcomes = acceptance::run_all(&config);
    for outcome in &outcomes {
        let _ = writeln!(stdout, "{outcome}");
        failed += usize::from(!outcome.passed());
    }
    let _ = writeln!(stdout, "{} passed, {failed} failed", outcomes.len() - failed);
    i32::from(failed > 0)
}

fn read_constellation(path: &Path) -> Result<Constellation, CliError> {
    Constellation::try_from(&json::read::<ConstellationJson>(path)?)
}

fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<String, CliError> {
    let text = json::to_string(value);
    match out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Parses a decimal ("1.5") or a fraction ("3/2").
pub fn parse_spin(text: &str) -> Result<Spin, CliError> {
    let bad = || CliError::Validation(format!("cannot read spin from {text:?}"));
    let j = match text.split_once('/') {
        Some((num, den)) => {
            let (num, den): (f64, f64) =
                (num.trim().parse().map_err(|_| bad())?, den.trim().parse().map_err(|_| bad())?);
            num / den
        }
        None => text.trim().parse().map_err(|_| bad())?,
    };
    Ok(Spin::from_j(j)?)
}

/// Runs a command other than `selftest` and returns its JSON text (empty if
/// it went to `--out`).
pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Convert { state, constellation, out } => {
            if let Some(path) = state {
                let psi = SpinState::try_from(&json::read::<StateJson>(path)?)?;
                emit(&ConstellationJson::from(&state_to_constellation(&psi)?), out.as_deref())
            } else {
                let path = constellation.as_ref().ok_or_else(|| CliError::Validation("no input".into()))?;
                let c = read_constellation(path)?;
                emit(&StateJson::from(&constellation_to_state(&c)), out.as_deref())
            }
        }
        Command::Norm { constellation, out } => {
            let c = read_constellation(constellation)?;
            let d = match matching_sums(&WeightedGraph::from_constellation(&c, 0)?)? {
                MatchingSums::Scalar(d) => d,
                _ => unreachable!("no open dots requested"),
            };
            emit(&json!({ "Z": partition_function(&c)?, "F": free_energy(&c)?, "D": d }), out.as_deref())
        }
        Command::Moments { constellation, out } => {
            let m = moments(&read_constellation(constellation)?)?;
            emit(
                &json!({
                    "mean_n": json::vec3(&m.mean_n),
                    "mean_nn": json::mat3(&m.mean_nn),
                    "dipole": json::vec3(&m.dipole),
                    "quadrupole": json::mat3(&m.quadrupole),
                }),
                out.as_deref(),
            )
        }
        Command::Tensors { constellation, out } => {
            let c = read_constellation(constellation)?;
            let t = quantum_tensors(&c, &TangentFrame::spherical(&c))?;
            let rows = |m: &majorana_core::geometry::GeometricTensors, f: bool| -> Vec<Vec<f64>> {
                let src = if f { &m.f } else { &m.g };
                src.row_iter().map(|r| r.iter().copied().collect()).collect()
            };
            emit(
                &json!({
                    "layout": "row-major; row and column 2*i + alpha for star i, alpha 0 = theta-hat, 1 = phi-hat",
                    "two_j": c.spin().two_j(),
                    "g": rows(&t, false),
                    "f": rows(&t, true),
                }),
                out.as_deref(),
            )
        }
        Command::Phase { path, method, out } => {
            let path = StarPath::try_from(&json::read::<PathJson>(path)?)?;
            let value = match method {
                MethodArg::Line => json!({ "line_integral": geometric_phase(&path, PhaseMethod::LineIntegral)? }),
                MethodArg::Holonomy => json!({ "holonomy": geometric_phase(&path, PhaseMethod::Holonomy)? }),
                MethodArg::Both => {
                    let line = geometric_phase(&path, PhaseMethod::LineIntegral)?;
                    let hol = geometric_phase(&path, PhaseMethod::Holonomy)?;
                    json!({ "line_integral": line, "holonomy": hol, "delta": wrap_phase(line - hol).abs() })
                }
            };
            emit(&value, out.as_deref())
        }
        Command::Evolve { j, h, u0, dt, steps, out, oracle, csv } => {
            let c = read_constellation(u0)?;
            if let Some(j) = j {
                let spin = parse_spin(j)?;
                if spin != c.spin() {
                    return Err(CliError::Validation(format!(
                        "--j {j} does not match the {} stars of the initial constellation",
                        c.len()
                    )));
                }
            }
            if !(dt.is_finite() && *dt != 0.0) {
                return Err(CliError::Validation("--dt must be finite and nonzero".into()));
            }
            let h = HamiltonianSpec::try_from(&json::read::<HamiltonianJson>(h)?)?;
            let stars = evolve_stars(&c, &h, *dt, *steps)?;
            if let Some(path) = csv {
                write_csv(&stars, path)?;
            }
            let value: Value = if *oracle {
                let reference = oracle_trajectory(&c, &h, *dt, *steps)?;
                json!({
                    "stars": TrajectoryJson::from(&stars),
                    "oracle": TrajectoryJson::from(&reference),
                    "max_displacement": max_star_displacement(&stars, &reference),
                })
            } else {
                serde_json::to_value(TrajectoryJson::from(&stars)).expect("plain data")
            };
            emit(&value, out.as_deref())
        }
        Command::Selftest { .. } => Err(CliError::Validation("selftest is run through `run`".into())),
    }
}

fn write_csv(t: &Trajectory, path: &Path) -> Result<(), CliError> {
    let mut text = String::from("t,star,x,y,z\n");
    for (time, c) in t.times.iter().zip(&t.constellations) {
        for (i, u) in c.stars().iter().enumerate() {
            text.push_str(&format!("{time:.16e},{i},{:.16e},{:.16e},{:.16e}\n", u.x(), u.y(), u.z()));
        }
    }
    std::fs::write(path, text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}
