//! Argument parsing and dispatch for the `qalg` binary.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qalg_core::fermion::{self, EncodingKind, LadderTerm, OccupationState};
use qalg_core::foundations::{self, BellIndex, DjVerdict, MeasurementBasis, MitigationMatrix};
use qalg_core::grover::{self, GroverPlan};
use qalg_core::hamsim::{self, SparseOracle, ValuePath};
use qalg_core::oracles::{self, MarkedSet, TruthTable};
use qalg_core::pauli::{PauliString, PauliSum};
use qalg_core::state::{bitstring, lower_qubit_limit, sample_distribution};
use qalg_core::variational::{self, LinearSystem, Sense, WeightedGraph};
use qalg_core::{fourier, number, BasisLabel, Circuit, Distribution, Error, Gate, Matrix, QuantumState, C64};
use serde::Serialize;
use serde_json::{json, Value};

use crate::format;
use crate::output::{self, amplitudes, bitstrings, dense, distribution, num, nums, Format, Report};

/// Environment variable that lowers the qubit cap.
pub const MAX_QUBITS_ENV: &str = "QALG_MAX_QUBITS";

#[derive(Debug, Parser)]
#[command(name = "qalg", version, about = "Deterministic state-vector simulator and quantum algorithm suite")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sample this many shots instead of reporting exact probabilities.
    #[arg(long, global = true)]
    pub shots: Option<u64>,
    /// Print one JSON object (default).
    #[arg(long, global = true, conflicts_with = "text")]
    #[serde(skip)]
    pub json: bool,
    /// Print a human-readable summary.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub text: bool,
    /// Input file for commands that read one.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prepare a Bell state and measure it in the Bell basis.
    Bell(BellArgs),
    /// Teleport one qubit.
    Teleport(TeleportArgs),
    /// Deutsch-Jozsa on a truth table.
    Dj(DjArgs),
    /// Bernstein-Vazirani recovery of a hidden string.
    Bv(BvArgs),
    /// Simon's algorithm for a hidden period.
    Simon(SimonArgs),
    /// Quantum Fourier transform of a basis state.
    Qft(QftArgs),
    /// Phase estimation of a single-qubit phase gate.
    Qpe(QpeArgs),
    /// Iterative phase estimation.
    Ipe(IpeArgs),
    /// Order finding for a modulo N.
    Period(PeriodArgs),
    /// Shor factoring.
    Shor(ShorArgs),
    /// Discrete logarithm modulo N.
    Dlog(DlogArgs),
    /// RSA key generation and round trip.
    Rsa(RsaArgs),
    /// Grover search.
    Grover(GroverArgs),
    /// Quantum counting.
    Count(CountArgs),
    /// Amplitude estimation of a one-qubit rotation.
    Aestimate(AestimateArgs),
    /// Trotter product formulas for a Pauli sum.
    Trotter(TrotterArgs),
    /// 1-sparse Hamiltonian simulation.
    Sparse1(Sparse1Args),
    /// Linear combination of unitaries.
    Lcu(LcuArgs),
    /// QAOA for MaxCut.
    Qaoa(QaoaArgs),
    /// Adiabatic evolution for MaxCut.
    Adiabatic(AdiabaticArgs),
    /// HHL linear solver.
    Hhl(HhlArgs),
    /// Variational linear solver.
    Vqls(VqlsArgs),
    /// Fermion-to-qubit encoding.
    FermionEncode(FermionArgs),
    /// Readout-error mitigation.
    Mitigate(MitigateArgs),
    /// Run a circuit file.
    CircuitRun(CircuitRunArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct BellArgs {
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub x: u8,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub y: u8,
}

#[derive(Debug, Args, Serialize)]
pub struct TeleportArgs {
    /// Payload `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    #[arg(long, default_value_t = PI / 3.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DjArgs {
    /// Outputs `f(0) f(1) ...` as a bitstring of length 2^n; `--file` takes a truth table instead.
    #[arg(long)]
    pub table: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct BvArgs {
    #[arg(long)]
    pub s: String,
}

#[derive(Debug, Args, Serialize)]
pub struct SimonArgs {
    /// Hidden period; the oracle is `f(x) = min(x, x xor p)`. `--file` takes a truth table instead.
    #[arg(long)]
    pub p: Option<String>,
    /// Oracle queries allowed (default 4n).
    #[arg(long)]
    pub max_runs: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct QftArgs {
    #[arg(long)]
    pub input: String,
}

#[derive(Debug, Args, Serialize)]
pub struct QpeArgs {
    /// Eigenphase of `P(2 pi theta)` on `|1>`.
    #[arg(long, default_value_t = 0.125, allow_negative_numbers = true)]
    pub theta: f64,
    /// Use `t`, `s` or `z` instead of a phase gate.
    #[arg(long)]
    pub gate: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub c: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct IpeArgs {
    #[arg(long, default_value_t = 0.125, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PeriodArgs {
    #[arg(long)]
    pub a: u64,
    #[arg(long)]
    pub n: u64,
    /// Clock width.
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct ShorArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 20)]
    pub max_bases: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct DlogArgs {
    #[arg(long)]
    pub a: u64,
    #[arg(long)]
    pub b: u64,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct RsaArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub e: u64,
    /// Message.
    #[arg(long)]
    pub m: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct GroverArgs {
    #[arg(long)]
    pub n: usize,
    /// Marked indices, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub marked: Vec<usize>,
    /// Iteration count (default: the optimal one).
    #[arg(long)]
    pub r: Option<usize>,
    /// Use the exact variant with an ancilla rotation.
    #[arg(long)]
    pub derandomize: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub marked: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub c: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct AestimateArgs {
    /// Good-state probability prepared by `Ry(2 asin(sqrt g))`.
    #[arg(long, default_value_t = 0.5)]
    pub g: f64,
    #[arg(long, default_value_t = 3)]
    pub c: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct TrotterArgs {
    /// Pauli sum as `;`-separated `<coeff> <letters>` terms; `--file` takes a Pauli-sum file.
    #[arg(long, default_value = "1 XI; 1 ZZ", allow_hyphen_values = true)]
    pub terms: String,
    #[arg(long, default_value_t = 1.0)]
    pub time: f64,
    #[arg(long, default_value_t = 4)]
    pub r: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub order: u8,
}

#[derive(Debug, Args, Serialize)]
pub struct Sparse1Args {
    #[arg(long, default_value_t = 1.0)]
    pub time: f64,
    /// Initial basis state (default all zeros).
    #[arg(long)]
    pub input: Option<String>,
    /// Use the 8-bit quantized value register instead of exact angles.
    #[arg(long)]
    pub quantized: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct LcuArgs {
    #[arg(long, default_value = "1 X; 1 Z", allow_hyphen_values = true)]
    pub terms: String,
    #[arg(long)]
    pub input: Option<String>,
    /// Rounds of oblivious amplitude amplification.
    #[arg(long, default_value_t = 0)]
    pub rounds: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct QaoaArgs {
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    /// Objective evaluations allowed.
    #[arg(long, default_value_t = 2000)]
    pub budget: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct AdiabaticArgs {
    #[arg(long, default_value_t = 30.0)]
    pub time: f64,
    #[arg(long, default_value_t = 300)]
    pub steps: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct HhlArgs {
    /// Rows separated by `;`, entries by `,`; `--file` takes a grid.
    #[arg(long, default_value = "0.5,-0.25;-0.25,0.5", allow_hyphen_values = true)]
    pub matrix: String,
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, default_value_t = 2)]
    pub clock: usize,
    /// Rotation constant (default 2^-clock).
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct VqlsArgs {
    #[arg(long, default_value = "0.5,-0.25;-0.25,0.5", allow_hyphen_values = true)]
    pub matrix: String,
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, default_value_t = 2)]
    pub layers: usize,
    #[arg(long, default_value_t = 500)]
    pub budget: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct FermionArgs {
    /// `jordan-wigner`, `parity` or `bravyi-kitaev` (`jw`, `bk`).
    #[arg(long, default_value = "jordan-wigner")]
    pub encoding: String,
    /// A single ladder product such as `2^ 0`, instead of `--file`.
    #[arg(long)]
    pub term: Option<String>,
    /// Mode count for `--term` (default: highest mode + 1).
    #[arg(long)]
    pub modes: Option<usize>,
    /// Occupation state to act on with `--term`, e.g. `1011`.
    #[arg(long)]
    pub state: Option<String>,
    /// Verify the canonical anticommutation relations of the encoding.
    #[arg(long)]
    pub check: bool,
    /// Report the spectrum of the encoded operator.
    #[arg(long)]
    pub spectrum: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct MitigateArgs {
    /// Ideal distribution to push through `M`.
    #[arg(long, value_delimiter = ',')]
    pub ideal: Option<Vec<f64>>,
    /// Measured distribution to correct with `M^-1`.
    #[arg(long, value_delimiter = ',')]
    pub noisy: Option<Vec<f64>>,
}

#[derive(Debug, Args, Serialize)]
pub struct CircuitRunArgs {
    #[arg(long)]
    pub input: Option<String>,
    /// Include the final amplitudes.
    #[arg(long)]
    pub amplitudes: bool,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// `None` means exact probabilities.
    pub shots: Option<u64>,
    pub format: Format,
    pub qubit_cap: Option<usize>,
    pub file: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 0, shots: None, format: Format::Json, qubit_cap: None, file: None }
    }
}

/// Why a run stopped early.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, inputs or files; exit status 2.
    Usage(String),
    /// The algorithm ran but could not produce an answer; exit status 1.
    Inconclusive(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Inconclusive(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Inconclusive(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconclusive(_) | Error::NullResult | Error::ImpossibleOutcome => Failure::Inconclusive(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<format::FormatError> for Failure {
    fn from(e: format::FormatError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the subcommand. `cap` is the
/// raw value of [`MAX_QUBITS_ENV`], if set.
pub fn run<I, T>(args: I, cap: Option<&str>) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Invocation { code, stdout, stderr };
        }
    };
    let format = if cli.global.text { Format::Text } else { Format::Json };
    let name = command_name(&cli.command);
    let mut cfg = RunConfig {
        seed: cli.global.seed,
        shots: cli.global.shots,
        format,
        qubit_cap: None,
        file: cli.global.file.clone(),
    };
    let result = parse_cap(cap).and_then(|c| {
        cfg.qubit_cap = c;
        if let Some(c) = c {
            lower_qubit_limit(c);
        }
        if cfg.shots == Some(0) {
            return Err(Failure::Usage("--shots must be positive".into()));
        }
        let inputs = echo_inputs(&cli);
        dispatch(&cli.command, &cfg).map(|mut r| {
            r.fields.insert("inputs".into(), inputs);
            r
        })
    });
    match result {
        Ok(report) => Invocation { code: 0, stdout: report.render(format), stderr: String::new() },
        Err(f) => {
            let mut r = Report::new(name, echo_inputs(&cli));
            r.set("error", f.message());
            r.set("status", if f.exit_code() == 1 { "inconclusive" } else { "invalid" });
            Invocation { code: f.exit_code(), stdout: r.render(format), stderr: format!("qalg {name}: {}\n", f.message()) }
        }
    }
}

fn parse_cap(cap: Option<&str>) -> Outcome<Option<usize>> {
    match cap {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("{MAX_QUBITS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

fn echo_inputs(cli: &Cli) -> Value {
    let mut v = match &cli.command {
        Command::Bell(a) => serde_json::to_value(a),
        Command::Teleport(a) => serde_json::to_value(a),
        Command::Dj(a) => serde_json::to_value(a),
        Command::Bv(a) => serde_json::to_value(a),
        Command::Simon(a) => serde_json::to_value(a),
        Command::Qft(a) => serde_json::to_value(a),
        Command::Qpe(a) => serde_json::to_value(a),
        Command::Ipe(a) => serde_json::to_value(a),
        Command::Period(a) => serde_json::to_value(a),
        Command::Shor(a) => serde_json::to_value(a),
        Command::Dlog(a) => serde_json::to_value(a),
        Command::Rsa(a) => serde_json::to_value(a),
        Command::Grover(a) => serde_json::to_value(a),
        Command::Count(a) => serde_json::to_value(a),
        Command::Aestimate(a) => serde_json::to_value(a),
        Command::Trotter(a) => serde_json::to_value(a),
        Command::Sparse1(a) => serde_json::to_value(a),
        Command::Lcu(a) => serde_json::to_value(a),
        Command::Qaoa(a) => serde_json::to_value(a),
        Command::Adiabatic(a) => serde_json::to_value(a),
        Command::Hhl(a) => serde_json::to_value(a),
        Command::Vqls(a) => serde_json::to_value(a),
        Command::FermionEncode(a) => serde_json::to_value(a),
        Command::Mitigate(a) => serde_json::to_value(a),
        Command::CircuitRun(a) => serde_json::to_value(a),
    }
    .unwrap_or(Value::Null);
    if let (Value::Object(m), Ok(Value::Object(g))) = (&mut v, serde_json::to_value(&cli.global)) {
        m.extend(g);
    }
    v
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Bell(_) => "bell",
        Command::Teleport(_) => "teleport",
        Command::Dj(_) => "dj",
        Command::Bv(_) => "bv",
        Command::Simon(_) => "simon",
        Command::Qft(_) => "qft",
        Command::Qpe(_) => "qpe",
        Command::Ipe(_) => "ipe",
        Command::Period(_) => "period",
        Command::Shor(_) => "shor",
        Command::Dlog(_) => "dlog",
        Command::Rsa(_) => "rsa",
        Command::Grover(_) => "grover",
        Command::Count(_) => "count",
        Command::Aestimate(_) => "aestimate",
        Command::Trotter(_) => "trotter",
        Command::Sparse1(_) => "sparse1",
        Command::Lcu(_) => "lcu",
        Command::Qaoa(_) => "qaoa",
        Command::Adiabatic(_) => "adiabatic",
        Command::Hhl(_) => "hhl",
        Command::Vqls(_) => "vqls",
        Command::FermionEncode(_) => "fermion-encode",
        Command::Mitigate(_) => "mitigate",
        Command::CircuitRun(_) => "circuit-run",
    }
}

fn dispatch(c: &Command, cfg: &RunConfig) -> Outcome<Report> {
    let mut r = Report::new(command_name(c), Value::Null);
    match c {
        Command::Bell(a) => bell(a, cfg, &mut r)?,
        Command::Teleport(a) => teleport(a, cfg, &mut r)?,
        Command::Dj(a) => dj(a, cfg, &mut r)?,
        Command::Bv(a) => bv(a, cfg, &mut r)?,
        Command::Simon(a) => simon(a, cfg, &mut r)?,
        Command::Qft(a) => qft(a, cfg, &mut r)?,
        Command::Qpe(a) => qpe(a, cfg, &mut r)?,
        Command::Ipe(a) => ipe(a, &mut r)?,
        Command::Period(a) => period(a, cfg, &mut r)?,
        Command::Shor(a) => shor(a, cfg, &mut r)?,
        Command::Dlog(a) => dlog(a, cfg, &mut r)?,
        Command::Rsa(a) => rsa(a, &mut r)?,
        Command::Grover(a) => grover_cmd(a, cfg, &mut r)?,
        Command::Count(a) => count(a, cfg, &mut r)?,
        Command::Aestimate(a) => aestimate(a, cfg, &mut r)?,
        Command::Trotter(a) => trotter(a, cfg, &mut r)?,
        Command::Sparse1(a) => sparse1(a, cfg, &mut r)?,
        Command::Lcu(a) => lcu(a, cfg, &mut r)?,
        Command::Qaoa(a) => qaoa(a, cfg, &mut r)?,
        Command::Adiabatic(a) => adiabatic(a, cfg, &mut r)?,
        Command::Hhl(a) => hhl(a, cfg, &mut r)?,
        Command::Vqls(a) => vqls(a, cfg, &mut r)?,
        Command::FermionEncode(a) => fermion_encode(a, cfg, &mut r)?,
        Command::Mitigate(a) => mitigate(a, cfg, &mut r)?,
        Command::CircuitRun(a) => circuit_run(a, cfg, &mut r)?,
    }
    Ok(r)
}

// ---- shared helpers ----

fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

fn read_file(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn label(bits: &str) -> Outcome<BasisLabel> {
    Ok(BasisLabel::parse(bits)?)
}

/// Exact distribution, or sampled counts when `--shots` is given.
fn reported(d: &Distribution, cfg: &RunConfig) -> Outcome<Value> {
    Ok(match cfg.shots {
        Some(s) => distribution(&sample_distribution(d, s, cfg.seed)?),
        None => distribution(d),
    })
}

fn state_distribution(state: &QuantumState, cfg: &RunConfig) -> Outcome<Value> {
    reported(&state.full_distribution(), cfg)
}

fn pauli_terms(inline: &str, cfg: &RunConfig) -> Outcome<PauliSum> {
    let text = match &cfg.file {
        Some(p) => read_file(p)?,
        None => inline.replace(';', "\n"),
    };
    Ok(format::parse_pauli_sum(&text)?)
}

fn parse_real_matrix(inline: &str, cfg: &RunConfig) -> Outcome<Vec<Vec<f64>>> {
    let text = match &cfg.file {
        Some(p) => read_file(p)?,
        None => inline.replace(';', "\n"),
    };
    Ok(format::parse_grid(&text)?)
}

fn parse_real_vector(s: &str) -> Outcome<Vec<f64>> {
    let rows = format::parse_grid(s)?;
    match rows.as_slice() {
        [row] => Ok(row.clone()),
        _ => usage("expected a single comma-separated vector"),
    }
}

fn real_state(v: &[f64]) -> Outcome<QuantumState> {
    Ok(QuantumState::normalized(v.iter().map(|&x| C64::new(x, 0.0)).collect())?)
}

fn input_state(input: &Option<String>, n: usize) -> Outcome<QuantumState> {
    match input {
        None => Ok(QuantumState::zero(n)?),
        Some(bits) => {
            let l = label(bits)?;
            if l.width != n {
                return usage(format!("input {bits} has {} bits, register has {n}", l.width));
            }
            Ok(QuantumState::from_label(l)?)
        }
    }
}

fn graph(cfg: &RunConfig) -> Outcome<WeightedGraph> {
    match &cfg.file {
        Some(p) => Ok(format::parse_graph(&read_file(p)?)?),
        None => Ok(WeightedGraph::from_edges(
            5,
            &[(0, 1, 2.0), (0, 3, 1.0), (0, 4, 1.0), (1, 2, 2.0), (2, 3, 2.0), (3, 4, 3.0)],
        )?),
    }
}

fn marked_set(n: usize, marked: &[usize]) -> Outcome<MarkedSet> {
    Ok(MarkedSet::new(n, marked.iter().copied())?)
}

// ---- foundations ----

fn bell(a: &BellArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let idx = BellIndex::new(a.x == 1, a.y == 1);
    let state = foundations::bell_prepare(idx);
    r.set("state", amplitudes(&state));
    r.set("distribution", state_distribution(&state, cfg)?);
    r.set("bell_measurement", reported(&foundations::measure_in_basis(&state, MeasurementBasis::Bell)?, cfg)?);
    Ok(())
}

fn teleport(a: &TeleportArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let (s, c) = ((a.theta / 2.0).sin(), (a.theta / 2.0).cos());
    let payload = QuantumState::from_amplitudes(vec![C64::new(c, 0.0), C64::from_polar(s, a.phi)])?;
    let branches = foundations::teleport_branches(&payload)?;
    let probs: Vec<f64> = branches.iter().map(|b| b.probability).collect();
    let (bob, msg) = foundations::teleport(&payload, cfg.seed)?;
    r.set("branches", dense(2, &probs));
    r.set("message", bitstring(msg.value(), 2));
    r.set("bob", amplitudes(&bob));
    r.set("fidelity", num(bob.fidelity(&payload)?));
    Ok(())
}

fn dj(a: &DjArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let table = match (&a.table, &cfg.file) {
        (Some(bits), None) => {
            let outputs = label(bits)?;
            if !outputs.width.is_power_of_two() || outputs.width < 2 {
                return usage("--table needs 2^n output bits with n >= 1");
            }
            let n = outputs.width.trailing_zeros() as usize;
            TruthTable::from_fn(n, 1, |x| outputs.bit(x) as usize)?
        }
        (None, Some(p)) => format::parse_truth_table(&read_file(p)?)?,
        _ => return usage("give exactly one of --table or --file"),
    };
    if table.n_out != 1 {
        return usage("Deutsch-Jozsa needs a one-bit output");
    }
    let n = table.n_in;
    let oracle = oracles::phase_oracle_from_table(&table)?;
    let verdict = match cfg.shots {
        Some(s) => foundations::deutsch_jozsa_sampled(&oracle, n, s, cfg.seed)?,
        None => foundations::deutsch_jozsa(&oracle, n)?,
    };
    let out = foundations::deutsch_jozsa_circuit(&oracle, n)?.run_basis(0)?;
    r.set("n", n);
    r.set("p0", num(out.amplitude(0).norm_sqr()));
    r.set("distribution", state_distribution(&out, cfg)?);
    r.set("result", if verdict == DjVerdict::Constant { "constant" } else { "balanced" });
    Ok(())
}

fn bv(a: &BvArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let s = label(&a.s)?;
    let oracle = foundations::bv_oracle(s);
    let found = foundations::bernstein_vazirani(&oracle, s.width)?;
    let out = foundations::deutsch_jozsa_circuit(&oracle, s.width)?.run_basis(0)?;
    r.set("distribution", state_distribution(&out, cfg)?);
    r.set("result", found.to_bitstring());
    Ok(())
}

fn simon(a: &SimonArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let table = match (&a.p, &cfg.file) {
        (Some(bits), None) => {
            let p = label(bits)?;
            TruthTable::from_fn(p.width, p.width, |x| x.min(x ^ p.value))?
        }
        (None, Some(path)) => format::parse_truth_table(&read_file(path)?)?,
        _ => return usage("give exactly one of --p or --file"),
    };
    let n = table.n_in;
    if table.n_out > n {
        return usage("Simon needs at most as many output bits as input bits");
    }
    // Narrower outputs are zero-padded on the left to n bits.
    let table = TruthTable::new(n, n, table.rows)?;
    let oracle = oracles::bit_oracle(&table);
    let dist = foundations::simon_distribution(&oracle, n)?;
    let res = foundations::simon(&oracle, n, cfg.seed, a.max_runs)?;
    r.set("distribution", reported(&dist, cfg)?);
    r.set("samples", bitstrings(&res.samples, n));
    r.set("runs", res.samples.len());
    r.set("result", res.p.to_bitstring());
    Ok(())
}

// ---- fourier ----

fn qft(a: &QftArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let l = label(&a.input)?;
    let c = fourier::qft_circuit(l.width, true)?;
    let out = c.run(&QuantumState::from_label(l)?)?;
    r.set("gates", c.len());
    r.set("state", amplitudes(&out));
    r.set("distribution", state_distribution(&out, cfg)?);
    Ok(())
}

fn phase_gate(theta: f64, gate: &Option<String>) -> Outcome<(Gate, f64)> {
    Ok(match gate.as_deref() {
        None => (Gate::P(2.0 * PI * theta), theta),
        Some("t") => (Gate::T, 0.125),
        Some("s") => (Gate::S, 0.25),
        Some("z") => (Gate::Z, 0.5),
        Some(g) => return usage(format!("--gate must be t, s or z, got {g:?}")),
    })
}

fn qpe(a: &QpeArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let (gate, theta) = phase_gate(a.theta, &a.gate)?;
    let est = fourier::qpe(&fourier::gate_powers(gate), &QuantumState::basis(1, 1)?, a.c)?;
    let big = 1u64 << a.c;
    let nearest = ((theta.rem_euclid(1.0) * big as f64).round() as u64 % big) as usize;
    r.set("phase", num(theta));
    r.set("raw", est.raw.to_bitstring());
    r.set("theta_hat", num(est.theta_hat));
    r.set("nearest_mass", num(est.distribution.get(nearest)));
    r.set("distribution", reported(&est.distribution, cfg)?);
    Ok(())
}

fn ipe(a: &IpeArgs, r: &mut Report) -> Outcome<()> {
    let res = fourier::ipe(&fourier::gate_powers(Gate::P(2.0 * PI * a.theta)), &QuantumState::basis(1, 1)?, a.m)?;
    r.set("bits", res.raw.to_bitstring());
    r.set("theta_hat", num(res.theta_hat));
    r.set("exact", res.exact);
    r.set("round_probabilities", nums(&res.round_probabilities));
    Ok(())
}

// ---- number theory ----

fn period(a: &PeriodArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let t = a.t.unwrap_or_else(|| number::default_clock_width(a.n));
    let dist = number::period_distribution(a.a, a.n, t)?;
    let res = number::quantum_period(a.a, a.n, Some(t), cfg.seed, 2 * t + 8)?;
    r.set("t", t);
    r.set("distribution", reported(&dist, cfg)?);
    r.set("samples", res.samples.clone());
    r.set("r", res.r);
    Ok(())
}

fn shor(a: &ShorArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let res = number::shor_factor(a.n, cfg.seed, a.max_bases)?;
    r.set("factors", vec![res.p, res.q]);
    r.set("a", res.a);
    r.set("r", res.r);
    r.set("tried", res.tried.clone());
    Ok(())
}

fn dlog(a: &DlogArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let res = number::discrete_log(a.a, a.b, a.n, a.t, cfg.seed, 32)?;
    r.set("s", res.s);
    r.set("r", res.r);
    r.set("samples", res.samples.iter().map(|&(x, y)| vec![x, y]).collect::<Vec<_>>());
    r.set("verified", number::mod_pow(a.a, res.s, a.n) == a.b % a.n);
    Ok(())
}

fn rsa(a: &RsaArgs, r: &mut Report) -> Outcome<()> {
    let (keys, cipher, plain) = number::rsa(a.p, a.q, a.e, a.m)?;
    r.set("n", keys.n);
    r.set("phi", keys.phi);
    r.set("d", keys.d);
    r.set("ciphertext", cipher);
    r.set("decrypted", plain);
    r.set("round_trip", plain == a.m);
    Ok(())
}

// ---- search ----

fn grover_cmd(a: &GroverArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let marked = marked_set(a.n, &a.marked)?;
    if a.derandomize {
        if a.r.is_some() {
            return usage("--r cannot be combined with --derandomize");
        }
        let res = grover::derandomized_search(&marked)?;
        r.set("iterations", res.r);
        r.set("uses_ancilla", res.uses_ancilla);
        r.set("g0", num(res.g0));
        r.set("g0_prime", num(res.g0_prime));
        r.set("success", num(res.success));
        r.set("distribution", reported(&res.distribution, cfg)?);
        return Ok(());
    }
    let (dist, plan) = grover::grover_search(&marked, a.r)?;
    let success: f64 = a.marked.iter().map(|&x| dist.get(x)).sum();
    r.set("iterations", plan.r);
    r.set("alpha", num(plan.alpha));
    r.set("predicted", num(GroverPlan::success_probability(&plan)));
    r.set("success", num(success));
    r.set("distribution", reported(&dist, cfg)?);
    Ok(())
}

fn count(a: &CountArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let marked = marked_set(a.n, &a.marked)?;
    let est = grover::quantum_count(&marked, a.c)?;
    r.set("mu_hat", est.mu_hat);
    r.set("theta_hat", num(est.theta_hat));
    r.set("raw", est.estimate.raw.to_bitstring());
    r.set("distribution", reported(&est.estimate.distribution, cfg)?);
    Ok(())
}

fn aestimate(a: &AestimateArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    if !(0.0..=1.0).contains(&a.g) {
        return usage("--g must lie in [0, 1]");
    }
    let mut prep = Circuit::new(1);
    prep.ry(0, 2.0 * a.g.sqrt().asin());
    let est = grover::amplitude_estimate(&prep, &marked_set(1, &[1])?, a.c)?;
    r.set("g_hat", num(est.g_hat));
    r.set("theta_hat", num(est.theta_hat));
    r.set("raw", est.estimate.raw.to_bitstring());
    r.set("distribution", reported(&est.estimate.distribution, cfg)?);
    Ok(())
}

// ---- simulation ----

fn trotter(a: &TrotterArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let h = pauli_terms(&a.terms, cfg)?;
    let build = |steps| if a.order == 1 { hamsim::trotter1(&h, a.time, steps) } else { hamsim::trotter2(&h, a.time, steps) };
    let c = build(a.r)?;
    let e1 = hamsim::evolution_error(&c, &h, a.time)?;
    let e2 = hamsim::evolution_error(&build(2 * a.r)?, &h, a.time)?;
    r.set("gates", c.len());
    r.set("error", num(e1));
    r.set("error_2r", num(e2));
    r.set("ratio", num(e1 / e2));
    Ok(())
}

fn sparse1(a: &Sparse1Args, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let oracle = match &cfg.file {
        Some(p) => {
            let rows = format::parse_grid(&read_file(p)?)?;
            SparseOracle::from_matrix(&Matrix::from_real_rows(&rows))?
        }
        None => SparseOracle::new(2, vec![3, 1, 2, 0], vec![0.7, -0.4, 1.1, 0.7])?,
    };
    let n = oracle.n_qubits();
    let psi = input_state(&a.input, n)?;
    let path = if a.quantized { ValuePath::Quantized { bits: hamsim::VALUE_BITS } } else { ValuePath::Exact };
    let out = hamsim::one_sparse_evolve(&oracle, a.time, &psi, path)?;
    let exact = oracle.matrix().evolution(a.time);
    let reference = QuantumState::from_amplitudes(exact.mul_vec(psi.amplitudes()))?;
    r.set("state", amplitudes(&out));
    r.set("distribution", state_distribution(&out, cfg)?);
    r.set("error", num(out.max_diff(&reference)));
    Ok(())
}

fn lcu(a: &LcuArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let h = pauli_terms(&a.terms, cfg)?;
    let n = h.n_qubits();
    let mut coeffs = Vec::new();
    let mut unitaries = Vec::new();
    let offset = h.real_offset();
    let terms = h.real_terms()?;
    let all = (offset != 0.0).then(|| (offset, PauliString::identity(n))).into_iter().chain(terms);
    for (c, p) in all {
        let mut u = p.circuit();
        if c < 0.0 {
            u.global_phase(0, PI);
        }
        if u.is_empty() {
            u.i(0);
        }
        coeffs.push(c.abs());
        unitaries.push(u);
    }
    let psi = input_state(&a.input, n)?;
    let (out, p) = hamsim::lcu_amplified(&coeffs, &unitaries, &psi, a.rounds)?;
    r.set("success", num(p));
    r.set("state", amplitudes(&out));
    r.set("distribution", state_distribution(&out, cfg)?);
    Ok(())
}

// ---- variational ----

fn qubo_json(q: &qalg_core::variational::Qubo) -> Value {
    let rows: Vec<Value> = q.q.chunks(q.n).map(nums).collect();
    json!({ "n": q.n, "q": rows, "c": nums(&q.c) })
}

fn qaoa(a: &QaoaArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let g = graph(cfg)?;
    let q = variational::maxcut_qubo(&g);
    let (best, argmax) = q.brute_force_max();
    let (h, constant) = variational::qubo_cost_hamiltonian(&q);
    let res = variational::qaoa_optimize(
        &h,
        constant,
        &variational::qaoa_default_init(a.p),
        Sense::Maximize,
        a.budget,
        cfg.seed,
    )?;
    let state = variational::qaoa_state(&h, &res.params)?;
    r.set("qubo", qubo_json(&q));
    r.set("optimum", num(best));
    r.set("maximizers", bitstrings(&argmax, q.n));
    r.set("expectation", num(res.expectation));
    r.set("approximation_ratio", num(res.expectation / best));
    r.set("betas", nums(&res.params.betas));
    r.set("gammas", nums(&res.params.gammas));
    r.set("evaluations", res.evaluations);
    r.set("distribution", state_distribution(&state, cfg)?);
    Ok(())
}

fn adiabatic(a: &AdiabaticArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let g = graph(cfg)?;
    let q = variational::maxcut_qubo(&g);
    let (h, _) = variational::qubo_cost_hamiltonian(&q);
    let target = h.scale(C64::new(-1.0, 0.0));
    let state = variational::adiabatic_evolve(None, &target, a.time, a.steps)?;
    let (pop, ground) = variational::ground_population(&target, &state)?;
    r.set("ground_population", num(pop));
    r.set("ground_states", bitstrings(&ground, q.n));
    r.set("distribution", state_distribution(&state, cfg)?);
    Ok(())
}

fn linear_system(matrix: &str, b: &str, cfg: &RunConfig) -> Outcome<(Matrix, QuantumState)> {
    let rows = parse_real_matrix(matrix, cfg)?;
    let b = real_state(&parse_real_vector(b)?)?;
    if rows.len() != rows[0].len() || rows.len() != b.dim() {
        return usage(format!("matrix is {}x{} but b has {} entries", rows.len(), rows[0].len(), b.dim()));
    }
    Ok((Matrix::from_real_rows(&rows), b))
}

fn hhl(a: &HhlArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let (m, b) = linear_system(&a.matrix, &a.b, cfg)?;
    let sys = LinearSystem::new(m, b)?;
    let res = variational::hhl(&sys, a.clock, a.c)?;
    r.set("eigenvalues", nums(sys.eigenvalues()));
    r.set("c_const", num(res.c_const));
    r.set("success", num(res.success));
    r.set("fidelity", num(res.fidelity));
    r.set("state", amplitudes(&res.state));
    r.set("classical", amplitudes(&sys.classical_solution()?));
    Ok(())
}

fn vqls(a: &VqlsArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let (m, b) = linear_system(&a.matrix, &a.b, cfg)?;
    let (state, cost) = variational::vqls_solve(&m, &b, a.layers, a.budget, cfg.seed)?;
    let dim = b.dim();
    let flat: Vec<f64> = (0..dim * dim).map(|k| m[(k / dim, k % dim)].re).collect();
    if let Some(inv) = qalg_core::matrix::real::inverse(&flat, dim) {
        let b_re: Vec<f64> = b.amplitudes().iter().map(|z| z.re).collect();
        let x = real_state(&qalg_core::matrix::real::mul_vec(&inv, dim, &b_re))?;
        r.set("fidelity", num(state.fidelity(&x)?));
    }
    r.set("cost", num(cost));
    r.set("state", amplitudes(&state));
    Ok(())
}

// ---- fermions ----

fn pauli_json(s: &PauliSum) -> Outcome<Value> {
    let mut m = serde_json::Map::new();
    for (c, p) in s.real_terms()? {
        m.insert(p.to_string(), num(c));
    }
    Ok(Value::Object(m))
}

fn fermion_encode(a: &FermionArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let kind = EncodingKind::from_name(&a.encoding)?;
    let (encoded, n) = match (&a.term, &cfg.file) {
        (Some(t), None) => {
            let term = LadderTerm::parse(t)?;
            let n = match (a.modes, term.max_mode()) {
                (Some(n), _) => n,
                (None, Some(m)) => m + 1,
                (None, None) => return usage("--modes is required for a constant term"),
            };
            if let Some(bits) = &a.state {
                let occ = OccupationState::parse(bits)?;
                if occ.n_modes() != n {
                    return usage(format!("state has {} modes, expected {n}", occ.n_modes()));
                }
                r.set(
                    "occupation_result",
                    match fermion::ladder_apply(&term, &occ)? {
                        Some(out) => json!({ "state": out.to_bitstring(), "amplitude": output::complex(out.amplitude) }),
                        None => Value::Null,
                    },
                );
            }
            (fermion::encode_ladder(&term, n, kind)?, n)
        }
        (None, Some(p)) => {
            if a.state.is_some() {
                return usage("--state needs --term");
            }
            let h = format::parse_fermion_hamiltonian(&read_file(p)?)?;
            (fermion::encode_hamiltonian(&h, kind)?, h.n_modes())
        }
        _ => return usage("give exactly one of --term or --file"),
    };
    r.set("encoding", kind.name());
    r.set("modes", n);
    if encoded.max_imag() == 0.0 {
        r.set("terms", pauli_json(&encoded)?);
        r.set("offset", num(encoded.real_offset()));
    } else {
        let terms: serde_json::Map<String, Value> =
            encoded.terms().iter().map(|(c, p)| (p.to_string(), output::complex(*c))).collect();
        r.set("terms", Value::Object(terms));
        r.set("offset", output::complex(encoded.offset()));
    }
    if a.spectrum {
        if n > 10 {
            return usage("--spectrum supports at most 10 modes");
        }
        let m = encoded.matrix();
        if !m.is_hermitian(1e-10) {
            return usage("--spectrum needs a Hermitian operator");
        }
        r.set("spectrum", nums(&m.hermitian_eigenvalues()));
    }
    if a.check {
        let rep = fermion::anticommutator_check(n, kind)?;
        r.set(
            "anticommutators",
            json!({ "checks": rep.checks, "failures": rep.failures, "max_error": num(rep.max_error), "passed": rep.passed() }),
        );
    }
    Ok(())
}

// ---- mitigation and raw circuits ----

fn mitigate(a: &MitigateArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let m = match &cfg.file {
        Some(p) => MitigationMatrix::new(format::parse_grid(&read_file(p)?)?)?,
        None => MitigationMatrix::new(vec![
            vec![0.90, 0.01, 0.02, 0.01],
            vec![0.05, 0.98, 0.04, 0.03],
            vec![0.04, 0.002, 0.91, 0.04],
            vec![0.01, 0.008, 0.03, 0.92],
        ])?,
    };
    let dim = m.dim();
    if !dim.is_power_of_two() {
        return usage(format!("readout matrix dimension {dim} is not a power of two"));
    }
    let width = dim.trailing_zeros() as usize;
    let ideal = match (&a.ideal, &a.noisy) {
        (None, None) => Some(vec![0.5, 0.0, 0.0, 0.5]),
        (i, _) => i.clone(),
    };
    r.set("condition", num(m.condition()));
    if let Some(p) = ideal {
        r.set("predicted", dense(width, &foundations::mitigation_predict(&m, &p)?));
    }
    if let Some(p) = &a.noisy {
        let fixed = foundations::mitigation_correct(&m, p)?;
        r.set("corrected", dense(width, &fixed.probabilities));
        r.set("raw", dense(width, &fixed.raw));
    }
    Ok(())
}

fn circuit_run(a: &CircuitRunArgs, cfg: &RunConfig, r: &mut Report) -> Outcome<()> {
    let Some(path) = &cfg.file else {
        return usage("circuit-run needs --file");
    };
    let c = format::parse_circuit(&read_file(path)?)?;
    let out = c.run(&input_state(&a.input, c.n)?)?;
    r.set("qubits", c.n);
    r.set("gates", c.len());
    r.set("distribution", state_distribution(&out, cfg)?);
    if a.amplitudes {
        r.set("state", amplitudes(&out));
    }
    Ok(())
}
