//! Command-line front end. All energies are in units of the Rabi frequency Ω
//! and all times in units of 1/Ω unless `--rabi` sets a different Ω.
//!
//! Exit codes: 0 success, 2 usage, 3 numerical failure, 4 I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::figures::{run_figure, FigureId, Overrides};
use crate::floquet::{floquet_decompose, ipr};
use crate::io::{fmt_num, series_header, series_to_csv, write_csv_with_sidecar, Sidecar};
use crate::model::{AtomCount, DriveParams, NamedState};
use crate::observables::entanglement_entropy;
use crate::propagate::{monodromy_in, propagate, Frame, IntegratorConfig, Method};
use crate::resonance::{locate_resonances, predict_trapping, ResonanceKind, ResonanceScan};
use crate::sweep::{run_sweep, BasisChoice, SweepAxis, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "RYDBERG_FLOQUET_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "rydberg-floquet",
    version,
    about = "Floquet analysis of one and two periodically driven Rydberg atoms",
    long_about = "Floquet analysis of one and two periodically driven Rydberg atoms.\n\n\
                  Energies are in units of the Rabi frequency Omega, times in units of 1/Omega.\n\
                  The detuning is Delta(t) = Delta0 + delta sin(omega t), alpha = delta/omega.\n\
                  Exit codes: 0 success, 2 usage, 3 numerical failure, 4 I/O."
)]
pub struct Cli {
    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Time-dependent populations and norm of one trajectory
    Dynamics(DynamicsArgs),
    /// Quasi-energies and Floquet modes at one parameter point
    Floquet(FloquetArgs),
    /// IPR, quasi-energies and mode characters over a 1D or 2D grid
    IprMap(IprMapArgs),
    /// Resonance locations and Bessel-zero trapping predictions
    Resonances(ResonanceArgs),
    /// Entanglement entropy S_A(t) of a two-atom trajectory
    Entropy(DynamicsArgs),
    /// Data behind one published figure panel, caption parameters as defaults
    Figure(FigureArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// Number of atoms, 1 or 2 (default: from the initial state)
    #[arg(long = "n")]
    pub atoms: Option<usize>,
    /// Rabi frequency Omega, sets the energy unit
    #[arg(long, default_value_t = 1.0)]
    pub rabi: f64,
    /// Static detuning Delta0 [Omega]
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta0: f64,
    /// Modulation amplitude delta [Omega]
    #[arg(long, default_value_t = 15.0)]
    pub delta: f64,
    /// Modulation frequency omega [Omega]
    #[arg(long, default_value_t = 8.0)]
    pub omega: f64,
    /// Interaction V0 [Omega]
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub v0: f64,
    /// Modulation index alpha = delta/omega; replaces --delta when given [dimensionless]
    #[arg(long)]
    pub alpha: Option<f64>,
}

impl ParamArgs {
    fn params(&self) -> Result<DriveParams> {
        let mut p = DriveParams { rabi: self.rabi, delta0: self.delta0, delta_mod: self.delta, omega: self.omega, v0: self.v0 };
        if let Some(a) = self.alpha {
            p.delta_mod = a * p.omega;
        }
        p.validate()?;
        Ok(p)
    }

    fn atoms_for(&self, state: Option<NamedState>) -> Result<AtomCount> {
        match (self.atoms, state) {
            (Some(n), Some(s)) if n != s.atoms() => Err(Error::InvalidParameter(format!(
                "state '{}' needs {} atom(s), --n is {n}",
                s.token(),
                s.atoms()
            ))),
            (Some(n), _) => AtomCount::from_count(n),
            (None, Some(s)) => AtomCount::from_count(s.atoms()),
            (None, None) => Ok(AtomCount::Two),
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum MethodArg {
    /// Adaptive Dormand-Prince 8(5,3)
    Adaptive,
    /// Fixed-step fourth-order commutator-free Magnus
    Magnus,
}

#[derive(Args, Debug, Clone)]
pub struct IntegratorArgs {
    /// Propagation method
    #[arg(long, value_enum, default_value_t = MethodArg::Adaptive)]
    pub method: MethodArg,
    /// Relative tolerance of the adaptive method
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    /// Absolute tolerance of the adaptive method
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
    /// Largest step [1/Omega] (default T/200, at most T/100)
    #[arg(long)]
    pub max_step: Option<f64>,
    /// Jacobi-Anger truncation |m| <= m_max for rotating and effective frames
    #[arg(long)]
    pub m_max: Option<i32>,
}

impl IntegratorArgs {
    fn config(&self) -> IntegratorConfig {
        IntegratorConfig {
            method: match self.method {
                MethodArg::Adaptive => Method::AdaptiveEmbeddedRk,
                MethodArg::Magnus => Method::FixedStepCommutatorFree,
            },
            rel_tol: self.rtol,
            abs_tol: self.atol,
            max_step: self.max_step,
            m_max: self.m_max,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum FrameArg {
    Lab,
    Rotating,
    Effective,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum BasisArg {
    /// (g,e) or (gg,ge,eg,ee)
    Full,
    /// (gg,+,ee), two atoms only
    Symmetric,
}

impl From<BasisArg> for BasisChoice {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Full => BasisChoice::Full,
            BasisArg::Symmetric => BasisChoice::Symmetric,
        }
    }
}

fn parse_state(s: &str) -> std::result::Result<NamedState, String> {
    s.parse::<NamedState>().map_err(|_| format!("'{s}' is not one of g, e, gg, ge, eg, ee, plus, bell"))
}

fn parse_axis(s: &str) -> std::result::Result<SweepAxis, String> {
    s.parse::<SweepAxis>().map_err(|e| e.to_string())
}

fn parse_figure(s: &str) -> std::result::Result<FigureId, String> {
    s.parse::<FigureId>().map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Initial state: g, e, gg, ge, eg, ee, plus or bell
    #[arg(long, value_parser = parse_state)]
    pub initial: Option<NamedState>,
    /// Final time [1/Omega]
    #[arg(long, default_value_t = 20.0)]
    pub tmax: f64,
    /// Sampling interval [1/Omega]
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Frame of the propagated state
    #[arg(long, value_enum, default_value_t = FrameArg::Lab)]
    pub frame: FrameArg,
    /// Basis of the reported populations
    #[arg(long, value_enum, default_value_t = BasisArg::Full)]
    pub basis: BasisArg,
    /// Append the entanglement entropy S_A (two atoms)
    #[arg(long)]
    pub entropy: bool,
    /// Output CSV (stdout when omitted); a .json sidecar is written next to it
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FloquetArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Basis of the monodromy
    #[arg(long, value_enum, default_value_t = BasisArg::Full)]
    pub basis: BasisArg,
    /// Initial states whose IPR and mode characters are reported
    #[arg(long, value_parser = parse_state, value_delimiter = ',')]
    pub initial: Vec<NamedState>,
    /// Output CSV (stdout when omitted)
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct IprMapArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Grid "name=start:stop:count" with name in delta0, alpha, v0, omega; give once or twice
    #[arg(long = "axis", value_parser = parse_axis, required = true)]
    pub axes: Vec<SweepAxis>,
    /// Initial states (comma separated)
    #[arg(long, value_parser = parse_state, value_delimiter = ',')]
    pub initial: Vec<NamedState>,
    /// Basis of the monodromy
    #[arg(long, value_enum, default_value_t = BasisArg::Full)]
    pub basis: BasisArg,
    /// Insert located branch crossings into 1D sweeps
    #[arg(long)]
    pub refine_crossings: bool,
    /// Output CSV (stdout when omitted)
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum ScanArg {
    Delta0,
    V0,
}

#[derive(Args, Debug)]
pub struct ResonanceArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Scanned parameter
    #[arg(long, value_enum, default_value_t = ScanArg::Delta0)]
    pub scan: ScanArg,
    /// Scan interval "lo:hi" [Omega]
    #[arg(long, default_value = "0:20", allow_hyphen_values = true)]
    pub range: String,
    /// Largest |n| considered
    #[arg(long, default_value_t = 3)]
    pub max_index: u32,
    /// Number of predicted trapping alphas per hit (0 = none)
    #[arg(long, default_value_t = 0)]
    pub predict: usize,
    /// Output CSV (stdout when omitted)
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    /// Figure id: 1a-1f, 2, 3a-3d, 4a-4c, 5, 6a, 6b, 7a, 7b, 8a, 8b
    #[arg(value_parser = parse_figure)]
    pub id: FigureId,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    /// Rabi frequency Omega override
    #[arg(long)]
    pub rabi: Option<f64>,
    /// Static detuning Delta0 override [Omega]
    #[arg(long, allow_negative_numbers = true)]
    pub delta0: Option<f64>,
    /// Modulation amplitude delta override [Omega]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Modulation frequency omega override [Omega]
    #[arg(long)]
    pub omega: Option<f64>,
    /// Interaction V0 override [Omega]
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// Output directory
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    if let Some(n) = cli.threads.filter(|&n| n > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::debug!("thread pool already configured: {e}");
        }
    }
    let spec = serde_json::json!({
        "argv": argv.iter().map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>(),
    });
    match dispatch(cli.command, spec) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_)
        | Error::DimensionMismatch { .. }
        | Error::NoSymmetricContent { .. }
        | Error::Unsupported(_)
        | Error::ResonanceNotSatisfied(_)
        | Error::BesselRange { .. } => EXIT_USAGE,
        Error::StepUnderflow { .. } | Error::NotUnitary { .. } | Error::SweepFailed { .. } => EXIT_NUMERICAL,
        Error::Io(_) => EXIT_IO,
    }
}

fn emit(out: Option<&Path>, csv: &str, sidecar: Sidecar) -> Result<()> {
    match out {
        Some(path) => write_csv_with_sidecar(path, csv, &sidecar),
        None => std::io::stdout().lock().write_all(csv.as_bytes()).map_err(|e| Error::Io(e.to_string())),
    }
}

fn dispatch(command: Command, spec: serde_json::Value) -> Result<()> {
    match command {
        Command::Dynamics(a) => cmd_dynamics(a, false, spec),
        Command::Entropy(a) => cmd_dynamics(a, true, spec),
        Command::Floquet(a) => cmd_floquet(a, spec),
        Command::IprMap(a) => cmd_ipr_map(a, spec),
        Command::Resonances(a) => cmd_resonances(a, spec),
        Command::Figure(a) => cmd_figure(a, spec),
    }
}

fn cmd_dynamics(a: DynamicsArgs, entropy_cmd: bool, spec: serde_json::Value) -> Result<()> {
    let params = a.params.params()?;
    let default_state = if entropy_cmd { NamedState::Plus } else { NamedState::GG };
    let initial = match (a.initial, a.params.atoms) {
        (Some(s), _) => s,
        (None, Some(1)) => NamedState::G,
        (None, _) => default_state,
    };
    let atoms = a.params.atoms_for(Some(initial))?;
    let with_entropy = entropy_cmd || a.entropy;
    if with_entropy && atoms == AtomCount::One {
        return Err(Error::InvalidParameter("the entanglement entropy needs two atoms".into()));
    }
    let basis = BasisChoice::from(a.basis).resolve(atoms)?;
    let state = initial.state(basis)?;
    let frame = match a.frame {
        FrameArg::Lab => Frame::Lab,
        FrameArg::Rotating => Frame::Rotating,
        FrameArg::Effective => Frame::Effective,
    };
    let cfg = a.integrator.config();
    let mut series = propagate(&state, &params, frame, a.tmax, a.dt, &cfg)?;
    if with_entropy {
        series = series.with_entropy(entanglement_entropy)?;
    }
    let data = serde_json::json!({
        "params": params,
        "initial": initial,
        "basis": basis,
        "frame": frame,
        "t_final": a.tmax,
        "sample_every": a.dt,
        "integrator": cfg,
        "max_norm_drift": series.max_norm_drift(),
    });
    let kind = if entropy_cmd { "entropy" } else { "dynamics" };
    let sidecar = Sidecar::new(kind, series_header(&series), spec, data);
    emit(a.out.as_deref(), &series_to_csv(&series), sidecar)
}

fn cmd_floquet(a: FloquetArgs, spec: serde_json::Value) -> Result<()> {
    let params = a.params.params()?;
    let atoms = a.params.atoms_for(a.initial.first().copied())?;
    let basis = BasisChoice::from(a.basis).resolve(atoms)?;
    let cfg = a.integrator.config();
    let u = monodromy_in(&params, basis, &cfg)?;
    let dec = floquet_decompose(&u, params.omega)?;
    let states = a.initial.iter().map(|s| s.state(basis)).collect::<Result<Vec<_>>>()?;

    let mut header = vec!["mode".to_string(), "eps".into(), "theta".into(), "group".into()];
    header.extend(basis.labels().iter().map(|l| format!("p_{}", l.name())));
    header.extend(a.initial.iter().map(|s| format!("char_{}", s.token())));
    let mut csv = header.join(",") + "\n";
    for (k, mode) in dec.modes().iter().enumerate() {
        let mut row = vec![(k + 1).to_string(), fmt_num(dec.quasi_energies()[k]), fmt_num(dec.eigenphases()[k])];
        row.push(dec.group_of(k).to_string());
        row.extend(mode.populations().iter().map(|&p| fmt_num(p)));
        for s in &states {
            row.push(fmt_num(mode.fidelity(s)?));
        }
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    let mut iprs = serde_json::Map::new();
    for (n, s) in a.initial.iter().zip(&states) {
        iprs.insert(n.token().to_string(), serde_json::json!(ipr(s, &dec)?));
    }
    let data = serde_json::json!({
        "params": params,
        "basis": basis,
        "integrator": cfg,
        "unitarity_defect": u.unitarity_defect(),
        "min_quasi_energy_gap": dec.min_quasi_energy_gap(),
        "degeneracy_groups": dec.degeneracy_groups(),
        "ipr": iprs,
    });
    emit(a.out.as_deref(), &csv, Sidecar::new("floquet", header, spec, data))
}

fn cmd_ipr_map(a: IprMapArgs, spec: serde_json::Value) -> Result<()> {
    let params = a.params.params()?;
    let atoms = a.params.atoms_for(a.initial.first().copied())?;
    let initial = if a.initial.is_empty() {
        vec![match atoms {
            AtomCount::One => NamedState::G,
            AtomCount::Two => NamedState::GG,
        }]
    } else {
        a.initial.clone()
    };
    if let Some(s) = initial.iter().find(|s| s.atoms() != atoms.count()) {
        return Err(Error::InvalidParameter(format!("state '{}' does not match --n {}", s.token(), atoms.count())));
    }
    let cfg = SweepConfig::new(atoms, initial)
        .with_basis(a.basis.into())
        .with_integrator(a.integrator.config())
        .with_refined_crossings(a.refine_crossings);
    let result = run_sweep(&params, &a.axes, &cfg)?;
    if result.failed_count() > 0 {
        eprintln!("warning: {} of {} points failed", result.failed_count(), result.points.len());
    }
    let sidecar = Sidecar::new("sweep", result.header(), spec, result.metadata());
    emit(a.out.as_deref(), &result.to_csv(), sidecar)
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidParameter(format!("range '{s}' is not of the form lo:hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn cmd_resonances(a: ResonanceArgs, spec: serde_json::Value) -> Result<()> {
    let params = a.params.params()?;
    let range = parse_range(&a.range)?;
    let scan = match a.scan {
        ScanArg::Delta0 => ResonanceScan::Delta0,
        ScanArg::V0 => ResonanceScan::V0,
    };
    let hits = locate_resonances(&params, scan, range, a.max_index)?;
    let mut header = vec!["kind".to_string(), "index".into(), "location".into(), "residual".into()];
    if a.predict > 0 {
        header.extend(["bessel_order".to_string(), "reliable".into()]);
        header.extend((1..=a.predict).map(|k| format!("alpha_{k}")));
    }
    let mut csv = header.join(",") + "\n";
    for h in &hits {
        let mut row = vec![h.kind.to_string(), h.index.to_string(), fmt_num(h.location), fmt_num(h.residual)];
        if a.predict > 0 {
            let at = match scan {
                ResonanceScan::Delta0 => params.with_delta0(h.location),
                ResonanceScan::V0 => params.with_v0(h.location),
            };
            match predict_trapping(&at, h, a.predict) {
                Ok(pred) => {
                    row.push(pred.bessel_order.to_string());
                    row.push(pred.reliable.to_string());
                    row.extend(pred.alphas.iter().map(|&x| fmt_num(x)));
                }
                Err(Error::Unsupported(_)) if h.kind == ResonanceKind::R3 => {
                    row.extend(["none".to_string(), "false".into()]);
                    row.extend(std::iter::repeat_n(fmt_num(f64::NAN), a.predict));
                }
                Err(e) => return Err(e),
            }
        }
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    let data = serde_json::json!({ "params": params, "scan": scan, "range": [range.0, range.1], "max_index": a.max_index, "hits": hits });
    emit(a.out.as_deref(), &csv, Sidecar::new("resonances", header, spec, data))
}

fn cmd_figure(a: FigureArgs, spec: serde_json::Value) -> Result<()> {
    let overrides = Overrides { rabi: a.rabi, delta0: a.delta0, delta_mod: a.delta, omega: a.omega, v0: a.v0 };
    let outputs = run_figure(a.id, &overrides, &a.integrator.config(), spec)?;
    for out in outputs {
        let path = a.out_dir.join(format!("{}.csv", out.name));
        write_csv_with_sidecar(&path, &out.csv, &out.sidecar)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn help_lists_units() {
        let mut cmd = <Cli as clap::CommandFactory>::command();
        let help = cmd.find_subcommand_mut("dynamics").unwrap().render_long_help().to_string();
        for flag in ["--delta0", "--delta", "--omega", "--v0", "--rabi", "--tmax", "--dt", "--initial", "--entropy"] {
            assert!(help.contains(flag), "missing {flag}");
        }
        assert!(help.contains("[Omega]") && help.contains("[1/Omega]"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["rydberg-floquet", "dynamics", "--initial", "xy"]), EXIT_USAGE);
        assert_eq!(run(["rydberg-floquet", "figure", "99"]), EXIT_USAGE);
        assert_eq!(run(["rydberg-floquet", "dynamics", "--n", "1", "--initial", "gg"]), EXIT_USAGE);
        assert_eq!(run(["rydberg-floquet", "ipr-map", "--axis", "alpha=0:1:1"]), EXIT_USAGE);
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(exit_code(&Error::StepUnderflow { time: 1.0, step: 1e-20 }), EXIT_NUMERICAL);
        assert_eq!(exit_code(&Error::SweepFailed { failed: 2, total: 10 }), EXIT_NUMERICAL);
        assert_eq!(exit_code(&Error::Io("x".into())), EXIT_IO);
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("-2:5").unwrap(), (-2.0, 5.0));
        assert!(parse_range("2").is_err());
    }
}
