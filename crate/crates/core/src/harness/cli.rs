//! Command-line front end. Exit codes: 0 success, 1 validation failure or
//! bad input, 2 numerical failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::correlations::{joint_table, Setting};
use crate::entanglement::concurrence;
use crate::error::{Error, Result};
use crate::harness::minimize::{fibonacci_sphere, grid_scan, min_ratio};
use crate::harness::scatter::scatter_to_csv;
use crate::harness::simulate::simulate_lhv;
use crate::harness::statespec::StateSpec;
use crate::harness::DEFAULT_SEED;

/// Tolerance on `min P_NL` (or `max |P_Q − P_L|`) for `check` to pass.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "epr2", version, about = "Local/nonlocal decomposition of two-qubit correlations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Concurrence of the state.
    Concurrence {
        #[arg(long)]
        state: StateSpec,
    },
    /// Joint outcome table for settings A and B.
    Pq {
        #[arg(long)]
        state: StateSpec,
        #[arg(long = "A", value_parser = parse_setting, allow_hyphen_values = true)]
        a: Setting,
        #[arg(long = "B", value_parser = parse_setting, allow_hyphen_values = true)]
        b: Setting,
    },
    /// The local/nonlocal split as JSON.
    Model {
        #[arg(long)]
        state: StateSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks the split on a setting grid and minimizes P_Q/P_L.
    Check {
        #[arg(long)]
        state: StateSpec,
        /// Fibonacci points per sphere.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        /// Refinement passes after the grid scan.
        #[arg(long, default_value_t = 3)]
        refine: usize,
    },
    /// Random generalized Werner states: ratio minimum against 1 − C.
    Scatter {
        #[arg(long, default_value_t = 20000)]
        n: usize,
        #[arg(long, env = "EPR2_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte-Carlo run of the local part of the split.
    Simulate {
        #[arg(long)]
        state: StateSpec,
        #[arg(long = "A", value_parser = parse_setting, allow_hyphen_values = true)]
        a: Setting,
        #[arg(long = "B", value_parser = parse_setting, allow_hyphen_values = true)]
        b: Setting,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, env = "EPR2_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn parse_setting(s: &str) -> std::result::Result<Setting, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("{p:?} is not a number")))
        .collect::<std::result::Result<_, _>>()?;
    let v: [f64; 3] = parts.try_into().map_err(|_| "expected x,y,z".to_string())?;
    Setting::new(v).map_err(|e| e.to_string())
}

/// Rounds to 12 decimals and drops trailing zeros.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn fmt_vec(s: &Setting) -> String {
    s.as_array().iter().map(|&c| fmt_num(c)).collect::<Vec<_>>().join(",")
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `out` and diagnostics to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Concurrence { state } => {
            writeln!(out, "{}", fmt_num(concurrence(&state.density_matrix()?)))?;
        }
        Command::Pq { state, a, b } => {
            let t = joint_table(&state.density_matrix()?, &a, &b);
            writeln!(out, "P(+,+)={}", fmt_num(t.pp))?;
            writeln!(out, "P(+,-)={}", fmt_num(t.pm))?;
            writeln!(out, "P(-,+)={}", fmt_num(t.mp))?;
            writeln!(out, "P(-,-)={}", fmt_num(t.mm))?;
        }
        Command::Model { state, out: path } => {
            let json = state.split()?.to_json();
            match path {
                Some(p) => std::fs::write(p, json + "\n")?,
                None => writeln!(out, "{json}")?,
            }
        }
        Command::Check { state, grid, refine } => {
            let split = state.split()?;
            let scan = grid_scan(&split, &fibonacci_sphere(grid.max(2)));
            writeln!(out, "p_local={}", fmt_num(split.p_local))?;
            let valid = match scan.min_remainder {
                Some(m) => {
                    writeln!(out, "min_remainder={}", fmt_num(m))?;
                    m >= -CHECK_TOL
                }
                None => {
                    writeln!(out, "max_local_error={}", fmt_num(scan.max_local_error))?;
                    scan.max_local_error <= CHECK_TOL
                }
            };
            match min_ratio(&split, grid, refine) {
                Ok(m) => {
                    writeln!(out, "min_ratio={}", fmt_num(m.value))?;
                    writeln!(out, "argmin_a={}", fmt_vec(&m.a))?;
                    writeln!(out, "argmin_b={}", fmt_vec(&m.b))?;
                    writeln!(out, "a_dot_b_primed={}", fmt_num(m.a.dot(&m.b.primed())))?;
                }
                Err(Error::DegeneratePl) => writeln!(out, "min_ratio=inf")?,
                Err(e) => return Err(e),
            }
            writeln!(out, "valid={valid}")?;
            if !valid {
                return Ok(1);
            }
        }
        Command::Scatter { n, seed, out: path } => {
            let summary = scatter_to_csv(seed, n, &path)?;
            writeln!(out, "rows={}", summary.rows)?;
            writeln!(out, "seed={seed}")?;
            writeln!(out, "min_gap={}", fmt_num(summary.min_gap))?;
            if !summary.claim_holds(1e-9) {
                return Ok(1);
            }
        }
        Command::Simulate { state, a, b, samples, seed } => {
            if samples == 0 {
                return Err(Error::OutOfRange {
                    name: "samples",
                    value: 0.0,
                    range: "[1, ∞)",
                });
            }
            let split = state.split()?;
            let t = simulate_lhv(&split.model, &a, &b, samples, seed);
            let l = |x: &Setting, y: &Setting| split.local(x, y);
            let expect = crate::correlations::JointTable::from_fn(&a, &b, l);
            writeln!(out, "samples={samples}")?;
            for (name, (f, e)) in ["P(+,+)", "P(+,-)", "P(-,+)", "P(-,-)"]
                .iter()
                .zip(t.cells().into_iter().zip(expect.cells()))
            {
                writeln!(out, "{name}={} expected={}", fmt_num(f), fmt_num(e))?;
            }
        }
    }
    Ok(0)
}
