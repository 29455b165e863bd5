//! The `coilchain` command line: `simulate`, `sweep`, `optimize`, `validate`.
//!
//! Exit codes: 0 ok, 2 unreadable or unparseable scenario, 3 invalid
//! scenario, 4 solver failure, 5 bad flag, 6 nothing feasible. Every failure
//! writes exactly one `error:` line to stderr.

use crate::circuit::{solve_network, CircuitError, Network, SolveResult, SolverMode};
use crate::geometry::ChainConfig;
use crate::scenario::{Scenario, ScenarioError};
use crate::search::{raca_optimize, Dimension, DimensionKey, OptimizeResult, SearchError, SearchSpace};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_BAD_FLAG: i32 = 5;
pub const EXIT_INFEASIBLE: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "coilchain", version, about = "Resonant relay-coil chain simulator and optimizer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the scenario once: per-coil currents plus a power summary.
    Simulate(SimulateArgs),
    /// Vary one parameter over a linear range.
    Sweep(SweepArgs),
    /// Ant-colony search for each relay count in a range.
    Optimize(OptimizeArgs),
    /// Check a scenario and list every violation.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    scenario: PathBuf,
    /// `corrected` (phasor) or `literal` (recursion as published).
    #[arg(long, default_value = "corrected")]
    mode: String,
    /// CSV destination; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    scenario: PathBuf,
    /// axial_c:K, lateral_d:K, angle:K, capacitance:K, relay_side:K,
    /// relay_turns:K, frequency or n_relays.
    #[arg(long)]
    dimension: String,
    /// `min,max,points`, linearly spaced.
    #[arg(long)]
    range: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Minimum P_o (W) the tag needs; reports the last swept value that
    /// still reaches it (for `n_relays`, the longest chain that wakes the tag).
    #[arg(long)]
    wake_threshold: Option<f64>,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    scenario: PathBuf,
    /// Relay count `N` or inclusive range `A..B`.
    #[arg(short, long, default_value = "1")]
    n: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Convergence history CSV; defaults to `<output stem>.history.csv`
    /// next to `--output`, and is skipped when both are omitted.
    #[arg(long)]
    history: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    scenario: PathBuf,
    /// Print the canonical form of the scenario after `OK`.
    #[arg(long)]
    dump: bool,
}

/// A failure carrying its exit code and a one-line message.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn bad_flag(message: impl Into<String>) -> Self {
        Failure::new(EXIT_BAD_FLAG, message)
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Parse(m) => Failure::new(EXIT_PARSE, format!("cannot parse scenario: {m}")),
            ScenarioError::Invalid(_) => Failure::new(EXIT_INVALID, format!("invalid scenario: {e}")),
        }
    }
}

impl From<CircuitError> for Failure {
    fn from(e: CircuitError) -> Self {
        let code = match e {
            CircuitError::Invalid(_) => EXIT_INVALID,
            _ => EXIT_SOLVER,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Run the command line with explicit streams; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("bad arguments");
            let _ = writeln!(stderr, "error: {}", first.trim_start_matches("error: "));
            return EXIT_BAD_FLAG;
        }
    };
    let outcome = match cli.command {
        Command::Simulate(a) => simulate(a, stdout),
        Command::Sweep(a) => sweep(a, stdout, stderr),
        Command::Optimize(a) => optimize(a, stdout, stderr),
        Command::Validate(a) => validate(a, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message.replace('\n', " "));
            f.code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> ! {
    let code = run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code)
}

/// Nine significant digits.
pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else {
        v.to_string()
    }
}

fn emit(bytes: Vec<u8>, output: Option<&Path>, stdout: &mut dyn Write) -> Outcome {
    match output {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| Failure::new(EXIT_SOLVER, format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(&bytes)
            .map_err(|e| Failure::new(EXIT_SOLVER, format!("cannot write output: {e}"))),
    }
}

fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Per-coil rows `0 .. n+2` (reader, relays, tag coil, load branch) and a
/// `summary` row, in one table.
pub fn simulate_csv(result: &SolveResult) -> Vec<u8> {
    let header = strings(&["index", "current_A", "P_in_W", "P_o_W", "eta", "Z_in_ohm"]);
    let n_coils = result.currents.len() - 1;
    let mut coil_currents: Vec<f64> = result.currents[..n_coils].to_vec();
    coil_currents.push(result.tag_coil_current);
    coil_currents.push(result.output_current());
    let mut rows: Vec<Vec<String>> = coil_currents
        .iter()
        .enumerate()
        .map(|(i, &c)| vec![i.to_string(), fmt_float(c), String::new(), String::new(), String::new(), String::new()])
        .collect();
    rows.push(vec![
        "summary".into(),
        String::new(),
        fmt_float(result.input_power),
        fmt_float(result.output_power),
        fmt_float(result.efficiency),
        fmt_float(result.input_impedance.re),
    ]);
    csv_bytes(&header, &rows)
}

fn simulate(a: SimulateArgs, stdout: &mut dyn Write) -> Outcome {
    let mode: SolverMode = a.mode.parse().map_err(Failure::bad_flag)?;
    let scenario = Scenario::from_path(&a.scenario)?;
    let net = Network::from_config(&scenario.chain)?;
    let result = solve_network(&net, mode)?;
    emit(simulate_csv(&result), a.output.as_deref(), stdout)
}

/// What a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepDimension {
    Geometry(DimensionKey),
    /// Series capacitance of relay `k` (1-based), F.
    Capacitance(usize),
    /// Evaluation frequency with capacitors left tuned to the design frequency, Hz.
    Frequency,
    NRelays,
}

impl std::str::FromStr for SweepDimension {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "frequency" => return Ok(SweepDimension::Frequency),
            "n_relays" => return Ok(SweepDimension::NRelays),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("capacitance:") {
            return match k.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(SweepDimension::Capacitance(k)),
                _ => Err(format!("bad relay index in `{s}` (relays count from 1)")),
            };
        }
        s.parse().map(SweepDimension::Geometry)
    }
}

impl SweepDimension {
    fn check(&self, config: &ChainConfig) -> Result<(), String> {
        let n = config.n_relays();
        let ok = match *self {
            SweepDimension::Geometry(DimensionKey::RelaySide(k))
            | SweepDimension::Geometry(DimensionKey::RelayTurns(k))
            | SweepDimension::Capacitance(k) => (1..=n).contains(&k),
            SweepDimension::Geometry(DimensionKey::Lateral(j))
            | SweepDimension::Geometry(DimensionKey::Axial(j))
            | SweepDimension::Geometry(DimensionKey::Angle(j)) => j <= n,
            SweepDimension::Frequency | SweepDimension::NRelays => true,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("scenario has {n} relays; index out of range"))
        }
    }

    fn network(&self, config: &ChainConfig, value: f64) -> Result<Network, Failure> {
        match *self {
            SweepDimension::Geometry(key) => {
                let space = SearchSpace {
                    dimensions: vec![Dimension::new(key, vec![value])],
                    n_relays: config.n_relays(),
                };
                if let DimensionKey::RelayTurns(_) = key {
                    if value < 1.0 || value.fract() != 0.0 {
                        return Err(Failure::bad_flag(format!("turn count {value} is not a positive integer")));
                    }
                }
                Ok(Network::from_config(&space.apply(config, &[value]))?)
            }
            SweepDimension::Capacitance(k) => {
                let mut cfg = config.clone();
                cfg.relays[k - 1].capacitance = Some(value);
                Ok(Network::from_config(&cfg)?)
            }
            SweepDimension::Frequency => Ok(Network::at_frequency(config, value)?),
            SweepDimension::NRelays => {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(Failure::bad_flag(format!("relay count {value} is not a non-negative integer")));
                }
                let cfg = config
                    .with_relay_count(value as usize)
                    .ok_or_else(|| Failure::new(EXIT_INVALID, "placements do not match relays"))?;
                Ok(Network::from_config(&cfg)?)
            }
        }
    }
}

/// `min,max,points` with linear spacing; one point gives just `min`.
pub fn parse_range(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("range `{text}` must be min,max,points"));
    }
    let min: f64 = parts[0].parse().map_err(|_| format!("bad range minimum `{}`", parts[0]))?;
    let max: f64 = parts[1].parse().map_err(|_| format!("bad range maximum `{}`", parts[1]))?;
    let points: usize = parts[2].parse().map_err(|_| format!("bad point count `{}`", parts[2]))?;
    if points == 0 || !min.is_finite() || !max.is_finite() || max < min {
        return Err(format!("range `{text}` needs finite min <= max and at least one point"));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                max
            } else {
                min + (max - min) * i as f64 / (points - 1) as f64
            }
        })
        .collect())
}

/// Sweep rows `(value, corrected result, literal result)`.
pub fn sweep_rows(
    config: &ChainConfig,
    dimension: SweepDimension,
    values: &[f64],
) -> Result<Vec<(f64, SolveResult, Option<SolveResult>)>, String> {
    run_sweep(config, dimension, values).map_err(|f| f.message)
}

fn run_sweep(
    config: &ChainConfig,
    dimension: SweepDimension,
    values: &[f64],
) -> Result<Vec<(f64, SolveResult, Option<SolveResult>)>, Failure> {
    dimension.check(config).map_err(Failure::bad_flag)?;
    values
        .par_iter()
        .map(|&v| {
            let net = dimension.network(config, v).map_err(|f| Failure {
                message: format!("at {}: {}", fmt_float(v), f.message),
                ..f
            })?;
            let corrected = solve_network(&net, SolverMode::CorrectedPhasor).map_err(|e| {
                let f = Failure::from(e);
                Failure {
                    message: format!("at {}: {}", fmt_float(v), f.message),
                    ..f
                }
            })?;
            let literal = solve_network(&net, SolverMode::PaperLiteral).ok();
            Ok((v, corrected, literal))
        })
        .collect()
}

pub fn sweep_csv(rows: &[(f64, SolveResult, Option<SolveResult>)]) -> Vec<u8> {
    let header = strings(&[
        "value",
        "P_o_W",
        "eta",
        "I_o_A",
        "P_o_literal_W",
        "eta_literal",
        "I_o_literal_A",
    ]);
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|(v, c, l)| {
            let lit = |f: fn(&SolveResult) -> f64| l.as_ref().map_or(f64::NAN, f);
            vec![
                fmt_float(*v),
                fmt_float(c.output_power),
                fmt_float(c.efficiency),
                fmt_float(c.output_current()),
                fmt_float(lit(|r| r.output_power)),
                fmt_float(lit(|r| r.efficiency)),
                fmt_float(lit(|r| r.output_current())),
            ]
        })
        .collect();
    csv_bytes(&header, &body)
}

/// Last swept value whose corrected P_o reaches `p_min`.
pub fn last_reaching(rows: &[(f64, SolveResult, Option<SolveResult>)], p_min: f64) -> Option<f64> {
    rows.iter().rev().find(|r| r.1.output_power >= p_min).map(|r| r.0)
}

fn sweep(a: SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let dimension: SweepDimension = a.dimension.parse().map_err(Failure::bad_flag)?;
    let values = parse_range(&a.range).map_err(Failure::bad_flag)?;
    if let Some(t) = a.wake_threshold {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::bad_flag(format!("wake threshold must be positive, got {t}")));
        }
    }
    let scenario = Scenario::from_path(&a.scenario)?;
    let rows = run_sweep(&scenario.chain, dimension, &values)?;
    emit(sweep_csv(&rows), a.output.as_deref(), stdout)?;
    if let Some(t) = a.wake_threshold {
        let line = match last_reaching(&rows, t) {
            Some(v) => format!("wake cutoff {}={}", a.dimension, fmt_float(v)),
            None => format!("wake cutoff {}=none", a.dimension),
        };
        let sink: &mut dyn Write = if a.output.is_some() { stdout } else { stderr };
        let _ = writeln!(sink, "{line}");
    }
    Ok(())
}

/// `N` or `A..B` (inclusive).
pub fn parse_relay_range(text: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("relay count `{text}` must be N or A..B");
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if b < a {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        Ok(vec![text.trim().parse().map_err(|_| bad())?])
    }
}

/// One optimize row per relay count; `None` when nothing was feasible.
pub fn optimize_csv(dimensions: &[Dimension], rows: &[(usize, Option<OptimizeResult>)]) -> Vec<u8> {
    let mut header = strings(&["n", "best_P_o_W", "feasible", "eta"]);
    header.extend(dimensions.iter().map(|d| d.key.to_string()));
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|(n, r)| {
            let mut row = vec![n.to_string()];
            match r {
                Some(r) => {
                    row.push(fmt_float(r.best_power));
                    row.push("1".into());
                    row.push(fmt_float(r.efficiency));
                    row.extend(r.params.iter().map(|&p| fmt_float(p)));
                }
                None => {
                    row.push(fmt_float(0.0));
                    row.push("0".into());
                    row.push(String::new());
                    row.extend(dimensions.iter().map(|_| String::new()));
                }
            }
            row
        })
        .collect();
    csv_bytes(&header, &body)
}

pub fn history_csv(rows: &[(usize, Option<OptimizeResult>)]) -> Vec<u8> {
    let header = strings(&["n", "iteration", "best_P_o_W"]);
    let mut body = Vec::new();
    for (n, r) in rows {
        if let Some(r) = r {
            for (i, p) in r.history.iter().enumerate() {
                body.push(vec![n.to_string(), (i + 1).to_string(), fmt_float(*p)]);
            }
        }
    }
    csv_bytes(&header, &body)
}

fn optimize(a: OptimizeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let counts = parse_relay_range(&a.n).map_err(Failure::bad_flag)?;
    let scenario = Scenario::from_path(&a.scenario)?;
    let constraints = scenario
        .constraints
        .ok_or_else(|| Failure::new(EXIT_INVALID, "optimize needs a [constraints] section"))?;
    let setup = scenario
        .search
        .clone()
        .ok_or_else(|| Failure::new(EXIT_INVALID, "optimize needs a [raca] section"))?;

    let mut rows = Vec::with_capacity(counts.len());
    for &n in &counts {
        let base = scenario
            .chain
            .with_relay_count(n)
            .ok_or_else(|| Failure::new(EXIT_INVALID, "placements do not match relays"))?;
        let space = setup
            .space(n)
            .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
        match raca_optimize(&space, &base, &constraints, &setup.params) {
            Ok(r) => rows.push((n, Some(r))),
            Err(SearchError::NoFeasible { .. }) => rows.push((n, None)),
            Err(e @ SearchError::BadParameter(_)) => return Err(Failure::new(EXIT_INVALID, e.to_string())),
            Err(e) => return Err(Failure::new(EXIT_SOLVER, e.to_string())),
        }
    }

    emit(optimize_csv(&setup.dimensions, &rows), a.output.as_deref(), stdout)?;
    let history_path = a.history.clone().or_else(|| {
        a.output
            .as_ref()
            .map(|o| o.with_extension("").with_extension("history.csv"))
    });
    if let Some(path) = history_path {
        emit(history_csv(&rows), Some(&path), stdout)?;
    }

    let best = rows
        .iter()
        .filter_map(|(n, r)| r.as_ref().map(|r| (*n, r)))
        .fold(None::<(usize, &OptimizeResult)>, |acc, (n, r)| match acc {
            Some((_, b)) if b.best_power >= r.best_power => acc,
            _ => Some((n, r)),
        });
    let Some((n, r)) = best else {
        return Err(Failure::new(EXIT_INFEASIBLE, "no relay count yields a feasible candidate"));
    };
    let params: Vec<String> = setup
        .dimensions
        .iter()
        .zip(&r.params)
        .map(|(d, p)| format!("{}={}", d.key, fmt_float(*p)))
        .collect();
    let summary = format!(
        "best n={n} P_o_W={} eta={} {}",
        fmt_float(r.best_power),
        fmt_float(r.efficiency),
        params.join(" ")
    );
    // keep stdout pure CSV when the table goes there
    let sink: &mut dyn Write = if a.output.is_some() { stdout } else { stderr };
    let _ = writeln!(sink, "{}", summary.trim_end());
    Ok(())
}

fn validate(a: ValidateArgs, stdout: &mut dyn Write) -> Outcome {
    match Scenario::from_path(&a.scenario) {
        Ok(s) => {
            let _ = writeln!(stdout, "OK");
            if a.dump {
                let _ = write!(stdout, "{}", s.to_toml());
            }
            Ok(())
        }
        Err(ScenarioError::Invalid(v)) => {
            for violation in &v {
                let _ = writeln!(stdout, "{violation}");
            }
            Err(Failure::new(
                EXIT_INVALID,
                format!("{} violation{}", v.len(), if v.len() == 1 { "" } else { "s" }),
            ))
        }
        Err(e) => Err(e.into()),
    }
}
