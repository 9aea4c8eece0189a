//! Command-line surface for the macroscopic-coherence measure: single-state
//! evaluation, size sweeps, distance distributions, and the maximality
//! verification scan, all as machine-readable JSON/CSV on standard output.
//!
//! Exit codes: 0 on success, 2 for invalid flags or parameters, 3 for file
//! or parse errors. Output is deterministic for fixed flags and seed;
//! floats are printed in shortest round-trip form, so re-parsing recovers
//! them bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use macrocoh::analytic::{uniform_measure_closed, uniform_report};
use macrocoh::measure::{bin_observable, measure_m, measure_m_pure, BinSpec, MeasureReport};
use macrocoh::mmqs::verify_theorem;
use macrocoh::oracle::random_spectrum;
use macrocoh::quadrature::{mixed_scs_full_report, scs_full_report};
use macrocoh::states::{
    coherent, coherent_cutoff, generalized_ghz, ghz, magnetization_z, mode_photon_number, noon,
    photon_number, scs, single_excitation, thermal, uniform, w_state, SpinBasisConvention,
    MAX_SPINS, MAX_UNIFORM_SPINS,
};
use macrocoh::types::{DensityMatrix, Observable, PureState};

/// Default bin width for quadrature evaluations: an order of magnitude below
/// the vacuum packet width 1/2.
pub const DEFAULT_BIN_WIDTH: f64 = 0.1;

/// Default Fock cutoff for thermal states.
pub const DEFAULT_THERMAL_CUTOFF: usize = 100;

#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or parameters (exit 2).
    Usage(String),
    /// File or parse problem (exit 3).
    File(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::File(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::File(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<macrocoh::Error> for CliError {
    fn from(err: macrocoh::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "macrocoh",
    about = "Macroscopic-coherence measure of quantum states",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate M for one state; JSON on stdout.
    Measure(StateArgs),
    /// Sweep M over system sizes; CSV on stdout.
    Sweep(SweepArgs),
    /// Distance distribution P(delta) of one state; CSV on stdout.
    Pdist(StateArgs),
    /// Verify the maximality bound on random states; JSON on stdout.
    MmqsVerify(MmqsVerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Ghz,
    Psi1,
    Uniform,
    W,
    Gghz,
    Noon,
    Scs,
    MixedScs,
    Thermal,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObservableKind {
    Magnetization,
    Number,
    Quadrature,
    File,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Which state to evaluate.
    #[arg(long, value_enum)]
    pub state: StateKind,

    /// Number of spins or photons.
    #[arg(long)]
    pub n: Option<u32>,

    /// Branch angle of the generalized GHZ state.
    #[arg(long)]
    pub eps: Option<f64>,

    /// Coherent amplitude as RE,IM (the imaginary part may be omitted).
    #[arg(long, value_parser = parse_complex)]
    pub alpha: Option<Complex64>,

    /// Inverse temperature of the thermal state.
    #[arg(long)]
    pub beta: Option<f64>,

    /// Fock-space cutoff.
    #[arg(long)]
    pub cutoff: Option<usize>,

    /// Measured observable (defaults to the state's natural one).
    #[arg(long, value_enum)]
    pub observable: Option<ObservableKind>,

    /// Bin the observable's spectrum with this width (origin 0).
    #[arg(long)]
    pub bin_width: Option<f64>,

    /// Input file(s): the state file first, then the observable file when
    /// --observable file is selected.
    #[arg(long = "input")]
    pub input: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Which state family to sweep.
    #[arg(long, value_enum)]
    pub state: StateKind,

    #[arg(long)]
    pub n_min: u32,

    #[arg(long)]
    pub n_max: u32,

    #[arg(long, default_value_t = 1)]
    pub step: u32,

    /// Branch angle, required for the generalized GHZ family.
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MmqsVerifyArgs {
    /// Hilbert-space dimension of the random spectrum (at most 8).
    #[arg(long)]
    pub dim: usize,

    /// Number of random density matrices (and pure states) to sample.
    #[arg(long)]
    pub trials: u64,

    /// Seed for the spectrum and the scan.
    #[arg(long)]
    pub seed: u64,
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| format!("invalid number {s:?}: {e}"))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(format!("expected RE or RE,IM, got {text:?}")),
    }
}

/// JSON document for states on disk.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub dimension: u64,
    pub kind: String,
    pub entries: Vec<StateFileEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StateFileEntry {
    pub i: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    pub re: f64,
    pub im: f64,
}

/// JSON document for observables on disk.
#[derive(Debug, Serialize, Deserialize)]
pub struct ObservableFile {
    pub name: String,
    pub eigenvalues: Vec<f64>,
}

/// A state loaded from disk.
#[derive(Debug)]
pub enum LoadedState {
    Pure(PureState),
    Density(DensityMatrix),
}

impl LoadedState {
    pub fn dimension(&self) -> u128 {
        match self {
            LoadedState::Pure(psi) => psi.dimension(),
            LoadedState::Density(rho) => rho.dimension(),
        }
    }
}

pub fn state_to_file(state: &LoadedState) -> StateFile {
    match state {
        LoadedState::Pure(psi) => StateFile {
            dimension: psi.dimension() as u64,
            kind: "pure".into(),
            entries: psi
                .amplitudes()
                .iter()
                .map(|&(i, c)| StateFileEntry {
                    i: i as u64,
                    j: None,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        },
        LoadedState::Density(rho) => StateFile {
            dimension: rho.dimension() as u64,
            kind: "density".into(),
            entries: rho
                .entries()
                .iter()
                .map(|&((i, j), c)| StateFileEntry {
                    i: i as u64,
                    j: Some(j as u64),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        },
    }
}

pub fn file_to_state(file: &StateFile) -> CliResult<LoadedState> {
    let dimension = file.dimension as u128;
    match file.kind.as_str() {
        "pure" => {
            let entries = file
                .entries
                .iter()
                .map(|e| (e.i as u128, Complex64::new(e.re, e.im)))
                .collect();
            Ok(LoadedState::Pure(
                PureState::new(dimension, entries).map_err(file_invalid)?,
            ))
        }
        "density" => {
            let entries = file
                .entries
                .iter()
                .map(|e| {
                    let j = e.j.ok_or_else(|| {
                        CliError::File("density entries need both indices i and j".into())
                    })?;
                    Ok(((e.i as u128, j as u128), Complex64::new(e.re, e.im)))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(LoadedState::Density(
                DensityMatrix::new(dimension, entries).map_err(file_invalid)?,
            ))
        }
        other => Err(CliError::File(format!(
            "state kind must be \"pure\" or \"density\", got {other:?}"
        ))),
    }
}

fn file_invalid(err: macrocoh::Error) -> CliError {
    CliError::File(format!("state file does not describe a valid state: {err}"))
}

pub fn read_state_file(path: &Path) -> CliResult<LoadedState> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::File(format!("cannot read {}: {e}", path.display())))?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::File(format!("cannot parse {}: {e}", path.display())))?;
    file_to_state(&file)
}

pub fn write_state_file(path: &Path, state: &LoadedState) -> CliResult<()> {
    let doc = state_to_file(state);
    let text = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::File(format!("cannot serialize state: {e}")))?;
    fs::write(path, text)
        .map_err(|e| CliError::File(format!("cannot write {}: {e}", path.display())))
}

pub fn read_observable_file(path: &Path) -> CliResult<Observable> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::File(format!("cannot read {}: {e}", path.display())))?;
    let file: ObservableFile = serde_json::from_str(&text)
        .map_err(|e| CliError::File(format!("cannot parse {}: {e}", path.display())))?;
    Observable::new(file.name, file.eigenvalues)
        .map_err(|e| CliError::File(format!("observable file is invalid: {e}")))
}

#[derive(Debug, Serialize)]
struct MeasureOutput {
    #[serde(rename = "M")]
    m: f64,
    #[serde(rename = "N_eff")]
    n_eff: u64,
    path: String,
    distribution: Vec<(f64, f64)>,
}

#[derive(Debug, Serialize)]
struct VerifyOutput {
    d_max_over_2: f64,
    best_m: f64,
    bound_violations: u64,
    converged: bool,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require_n(args: &StateArgs) -> CliResult<u32> {
    args.n.ok_or_else(|| usage("--n is required for this state"))
}

fn require_alpha(args: &StateArgs) -> CliResult<Complex64> {
    args.alpha
        .ok_or_else(|| usage("--alpha is required for this state"))
}

fn spin_observable(n: u32) -> CliResult<Observable> {
    if n > MAX_SPINS {
        return Err(usage(format!("--n must be at most {MAX_SPINS}")));
    }
    Ok(magnetization_z(n, SpinBasisConvention::default())?)
}

fn maybe_bin(obs: Observable, args: &StateArgs) -> CliResult<Observable> {
    match args.bin_width {
        Some(width) => {
            let bins = BinSpec::new(width, 0.0)?;
            Ok(bin_observable(&obs, &bins))
        }
        None => Ok(obs),
    }
}

fn check_spin_observable(args: &StateArgs) -> CliResult<()> {
    match args.observable {
        None | Some(ObservableKind::Magnetization) => Ok(()),
        Some(other) => Err(usage(format!(
            "spin states are measured against magnetization, not {other:?}"
        ))),
    }
}

/// Evaluate the measure for the given flags.
pub fn evaluate(args: &StateArgs) -> CliResult<MeasureReport> {
    match args.state {
        StateKind::Ghz => {
            check_spin_observable(args)?;
            let n = require_n(args)?;
            let obs = maybe_bin(spin_observable(n)?, args)?;
            Ok(measure_m_pure(&ghz(n), &obs)?)
        }
        StateKind::Psi1 => {
            check_spin_observable(args)?;
            let n = require_n(args)?;
            let obs = maybe_bin(spin_observable(n)?, args)?;
            Ok(measure_m_pure(&single_excitation(n), &obs)?)
        }
        StateKind::W => {
            check_spin_observable(args)?;
            let n = require_n(args)?;
            let obs = maybe_bin(spin_observable(n)?, args)?;
            Ok(measure_m_pure(&w_state(n), &obs)?)
        }
        StateKind::Uniform => {
            check_spin_observable(args)?;
            let n = require_n(args)?;
            if n <= MAX_UNIFORM_SPINS {
                let obs = maybe_bin(spin_observable(n)?, args)?;
                Ok(measure_m_pure(&uniform(n)?, &obs)?)
            } else {
                if args.bin_width.is_some() {
                    return Err(usage(format!(
                        "--bin-width is only supported for the explicit uniform state (n <= {MAX_UNIFORM_SPINS})"
                    )));
                }
                Ok(uniform_report(n)?)
            }
        }
        StateKind::Gghz => {
            check_spin_observable(args)?;
            let n = require_n(args)?;
            let eps = args.eps.ok_or_else(|| usage("--eps is required for gghz"))?;
            let obs = maybe_bin(spin_observable(n)?, args)?;
            Ok(measure_m_pure(&generalized_ghz(n, eps)?, &obs)?)
        }
        StateKind::Noon => {
            let n = require_n(args)? as usize;
            let cutoff = args.cutoff.unwrap_or(n);
            match args.observable {
                None | Some(ObservableKind::Number) => {
                    let obs = maybe_bin(mode_photon_number(cutoff)?, args)?;
                    Ok(measure_m_pure(&noon(n, cutoff)?, &obs)?)
                }
                Some(other) => Err(usage(format!(
                    "NOON states are measured against number, not {other:?}"
                ))),
            }
        }
        StateKind::Scs => {
            let alpha = require_alpha(args)?;
            let cutoff = args.cutoff.unwrap_or_else(|| coherent_cutoff(alpha));
            match args.observable {
                None | Some(ObservableKind::Quadrature) => {
                    let bins = BinSpec::new(args.bin_width.unwrap_or(DEFAULT_BIN_WIDTH), 0.0)?;
                    Ok(scs_full_report(alpha, cutoff, &bins)?)
                }
                Some(ObservableKind::Number) => {
                    let obs = maybe_bin(photon_number(cutoff)?, args)?;
                    Ok(measure_m_pure(&scs(alpha, cutoff)?, &obs)?)
                }
                Some(other) => Err(usage(format!(
                    "cat states are measured against quadrature or number, not {other:?}"
                ))),
            }
        }
        StateKind::MixedScs => {
            let alpha = require_alpha(args)?;
            let cutoff = args.cutoff.unwrap_or_else(|| coherent_cutoff(alpha));
            match args.observable {
                None | Some(ObservableKind::Quadrature) => {
                    let bins = BinSpec::new(args.bin_width.unwrap_or(DEFAULT_BIN_WIDTH), 0.0)?;
                    Ok(mixed_scs_full_report(alpha, cutoff, &bins)?)
                }
                Some(ObservableKind::Number) => {
                    let rho = fock_basis_mixed_scs(alpha, cutoff)?;
                    let obs = maybe_bin(photon_number(cutoff)?, args)?;
                    Ok(measure_m(&rho, &obs)?)
                }
                Some(other) => Err(usage(format!(
                    "cat states are measured against quadrature or number, not {other:?}"
                ))),
            }
        }
        StateKind::Thermal => {
            let beta = args
                .beta
                .ok_or_else(|| usage("--beta is required for thermal"))?;
            let cutoff = args.cutoff.unwrap_or(DEFAULT_THERMAL_CUTOFF);
            match args.observable {
                None | Some(ObservableKind::Number) => {
                    let obs = maybe_bin(photon_number(cutoff)?, args)?;
                    Ok(measure_m(&thermal(beta, cutoff)?, &obs)?)
                }
                Some(other) => Err(usage(format!(
                    "thermal states are measured against number, not {other:?}"
                ))),
            }
        }
        StateKind::File => {
            let mut inputs = args.input.iter();
            let state_path = inputs
                .next()
                .ok_or_else(|| usage("--state file needs --input PATH"))?;
            let state = read_state_file(state_path)?;
            let obs = match args.observable {
                Some(ObservableKind::File) => {
                    let obs_path = inputs
                        .next()
                        .ok_or_else(|| usage("--observable file needs a second --input PATH"))?;
                    read_observable_file(obs_path)?
                }
                Some(ObservableKind::Magnetization) => {
                    let dim = state.dimension();
                    let n = dim.trailing_zeros();
                    if dim == 0 || 1u128 << n != dim {
                        return Err(usage(format!(
                            "magnetization needs a power-of-two dimension, got {dim}"
                        )));
                    }
                    spin_observable(n)?
                }
                Some(ObservableKind::Number) => {
                    let dim = state.dimension();
                    photon_number((dim - 1) as usize)?
                }
                Some(ObservableKind::Quadrature) => {
                    return Err(usage(
                        "quadrature evaluation applies to scs and mixed-scs states",
                    ));
                }
                None => {
                    return Err(usage("--state file needs an explicit --observable choice"));
                }
            };
            let obs = maybe_bin(obs, args)?;
            match state {
                LoadedState::Pure(psi) => Ok(measure_m_pure(&psi, &obs)?),
                LoadedState::Density(rho) => Ok(measure_m(&rho, &obs)?),
            }
        }
    }
}

/// The Fock-basis mixture `(|α⟩⟨α| + |−α⟩⟨−α|)/2`.
fn fock_basis_mixed_scs(alpha: Complex64, cutoff: usize) -> CliResult<DensityMatrix> {
    let plus = coherent(alpha, cutoff)?;
    let minus = coherent(-alpha, cutoff)?;
    let dim = (cutoff + 1) as u128;
    let mut entries = Vec::new();
    for i in 0..dim {
        let (pi, mi) = (plus.amplitude(i), minus.amplitude(i));
        for j in i..dim {
            let v = 0.5 * (pi * plus.amplitude(j).conj() + mi * minus.amplitude(j).conj());
            entries.push(((i, j), v));
        }
    }
    Ok(DensityMatrix::new_psd_by_construction(dim, entries)?)
}

pub fn cmd_measure(args: &StateArgs) -> CliResult<String> {
    let report = evaluate(args)?;
    let output = MeasureOutput {
        m: report.m,
        n_eff: report.n_eff,
        path: report.path.to_string(),
        distribution: report.distribution.points().to_vec(),
    };
    serde_json::to_string(&output).map_err(|e| CliError::File(format!("cannot render JSON: {e}")))
}

pub fn cmd_pdist(args: &StateArgs) -> CliResult<String> {
    let report = evaluate(args)?;
    let mut out = String::from("delta,p\n");
    for &(delta, p) in report.distribution.points() {
        writeln!(out, "{delta},{p}").expect("string write");
    }
    Ok(out)
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<String> {
    if args.step == 0 {
        return Err(usage("--step must be positive"));
    }
    if args.n_min > args.n_max {
        return Err(usage("--n-min must not exceed --n-max"));
    }
    let uniform_family = args.state == StateKind::Uniform;
    let mut out = String::from(if uniform_family {
        "n,M,N_eff,path,M_paper_closed\n"
    } else {
        "n,M,N_eff,path\n"
    });
    let mut n = args.n_min;
    while n <= args.n_max {
        let report = sweep_row(args, n)?;
        if uniform_family {
            writeln!(
                out,
                "{n},{},{},{},{}",
                report.m,
                report.n_eff,
                report.path,
                uniform_measure_closed(n)
            )
            .expect("string write");
        } else {
            writeln!(out, "{n},{},{},{}", report.m, report.n_eff, report.path)
                .expect("string write");
        }
        match n.checked_add(args.step) {
            Some(next) => n = next,
            None => break,
        }
    }
    Ok(out)
}

fn sweep_row(args: &SweepArgs, n: u32) -> CliResult<MeasureReport> {
    match args.state {
        StateKind::Ghz => {
            let obs = spin_observable(n)?;
            Ok(measure_m_pure(&ghz(n), &obs)?)
        }
        StateKind::Psi1 => {
            let obs = spin_observable(n)?;
            Ok(measure_m_pure(&single_excitation(n), &obs)?)
        }
        StateKind::W => {
            let obs = spin_observable(n)?;
            Ok(measure_m_pure(&w_state(n), &obs)?)
        }
        StateKind::Uniform => {
            if n <= MAX_UNIFORM_SPINS {
                let obs = spin_observable(n)?;
                Ok(measure_m_pure(&uniform(n)?, &obs)?)
            } else {
                Ok(uniform_report(n)?)
            }
        }
        StateKind::Gghz => {
            let eps = args
                .eps
                .ok_or_else(|| usage("--eps is required to sweep gghz"))?;
            let obs = spin_observable(n)?;
            Ok(measure_m_pure(&generalized_ghz(n, eps)?, &obs)?)
        }
        StateKind::Noon => {
            let n = n as usize;
            Ok(measure_m_pure(&noon(n, n)?, &mode_photon_number(n)?)?)
        }
        other => Err(usage(format!(
            "sweep supports the size-indexed families (ghz, psi1, uniform, w, gghz, noon), not {other:?}"
        ))),
    }
}

pub fn cmd_mmqs_verify(args: &MmqsVerifyArgs) -> CliResult<String> {
    if args.dim < 2 || args.dim > 8 {
        return Err(usage("--dim must be between 2 and 8"));
    }
    let obs = random_spectrum(args.dim, args.seed, true);
    let report = verify_theorem(&obs, args.trials, args.seed.wrapping_add(1))?;
    let output = VerifyOutput {
        d_max_over_2: report.d_max_over_2,
        best_m: report.best_m,
        bound_violations: report.bound_violations,
        converged: report.converged,
    };
    serde_json::to_string(&output).map_err(|e| CliError::File(format!("cannot render JSON: {e}")))
}

/// Run a parsed command, returning the stdout payload.
pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Measure(args) => cmd_measure(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Pdist(args) => cmd_pdist(args),
        Command::MmqsVerify(args) => cmd_mmqs_verify(args),
    }
}
