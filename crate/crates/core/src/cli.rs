//! Command-line front end: `encode`, `apply`, `retrieve`, `cost`,
//! `emit-circuit`.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::audio::{
    amplitude_bounds, load_signal, oracle_add, oracle_delay, oracle_invert, oracle_reverse,
    oracle_reverse_restricted, pad_to_power_of_two, write_csv, AudioSignal, TimeRestriction,
};
use crate::error::FrqaError;
use crate::frqa::{prepare, retrieve_by_measurement, FrqaState};
use crate::gates::{Circuit, CostModel};
use crate::ops::{
    add_states, cost_report, delay_signal, invert_signal, preparation_report, reverse_signal,
    reverse_signal_restricted, CostReport, Operation,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn verify(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_VERIFY,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn context(self, prefix: impl fmt::Display) -> Self {
        CliError {
            code: self.code,
            message: format!("{prefix}: {}", self.message),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<FrqaError> for CliError {
    fn from(e: FrqaError) -> Self {
        let code = match e {
            FrqaError::Resource(_) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        FrqaError::from(e).into()
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum ModelArg {
    #[default]
    Standard,
    AllGates,
}

impl From<ModelArg> for CostModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Standard => CostModel::Standard,
            ModelArg::AllGates => CostModel::AllGates,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitFormat {
    Json,
    Qasm,
}

#[derive(Debug, Parser)]
#[command(name = "frqa", version, about = "Encode, transform and cost FRQA quantum audio")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prepare a state from a CSV or 8-bit WAV file.
    Encode(EncodeArgs),
    /// Run an operation pipeline over an input signal or state.
    Apply(ApplyArgs),
    /// Read a state JSON back into samples.
    Retrieve(RetrieveArgs),
    /// Compare an operation's measured cost with its closed form.
    Cost(CostArgs),
    /// Write an operation's circuit as JSON or OpenQASM 3.
    EmitCircuit(EmitArgs),
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long, value_enum, default_value_t)]
    pub cost_model: ModelArg,
    #[arg(long, default_value = "frqa-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    /// Sample file (CSV/WAV) or state JSON. Optional with --manifest.
    pub input: Option<PathBuf>,
    /// Pipeline step: invert, delay:N, reverse, restricted-reverse:P=V,..., add:FILE.
    #[arg(long = "op")]
    pub ops: Vec<String>,
    /// JSON run manifest; its settings are overridden by explicit flags.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub q: Option<u32>,
    /// Check the result against the classical oracle composition.
    #[arg(long)]
    pub verify: bool,
    /// Retrieve by this many seeded measurement shots instead of exactly.
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub cost_model: Option<ModelArg>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RetrieveArgs {
    pub state: PathBuf,
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write output.csv here instead of printing.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// prepare, add, invert, delay:N, reverse, restricted-reverse[:P=V,...|:worst].
    pub op: String,
    #[arg(long)]
    pub q: u32,
    #[arg(long, default_value_t = 1)]
    pub l: u32,
    #[arg(long, value_enum, default_value_t)]
    pub cost_model: ModelArg,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    /// Same names as `cost`.
    pub op: String,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub l: u32,
    /// Signal file, required for `prepare`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = CircuitFormat::Json)]
    pub format: CircuitFormat,
    /// Write circuit.json and circuit.qasm here instead of printing.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// Pipeline description accepted by `apply --manifest`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    #[serde(default)]
    pub pipeline: Vec<String>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub cost_model: Option<CostModel>,
    #[serde(default)]
    pub q: Option<u32>,
}

/// One parsed pipeline step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Op(Operation),
    Add(PathBuf),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Op(op) => op.fmt(f),
            Step::Add(p) => write!(f, "add:{}", p.display()),
        }
    }
}

pub fn parse_step(text: &str, base: &Path) -> CliResult<Step> {
    if let Some(path) = text.strip_prefix("add:") {
        let p = PathBuf::from(path);
        return Ok(Step::Add(if p.is_relative() { base.join(p) } else { p }));
    }
    if text == "add" {
        return Err(CliError::usage("add needs a file: add:FILE"));
    }
    Ok(Step::Op(text.parse()?))
}

/// Resolves `restricted-reverse:worst` to the l-1 leading bits fixed at 1.
fn parse_operation(text: &str, l: u32) -> CliResult<Operation> {
    if text == "restricted-reverse:worst" {
        let fixed = TimeRestriction::from_pairs((0..l.saturating_sub(1) as usize).map(|p| (p, true)));
        return Ok(Operation::RestrictedReverse(fixed));
    }
    Ok(text.parse()?)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

fn load_state_or_signal(path: &Path, q: Option<u32>) -> CliResult<FrqaState> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let text = fs::read_to_string(path)?;
        return Ok(FrqaState::from_json(&text)?);
    }
    Ok(prepare(&load_signal(path, q)?)?)
}

fn report_line(r: &CostReport) -> String {
    format!(
        "{}: formula {} expected {} measured {} delta {}",
        r.operation, r.formula, r.expected, r.measured, r.delta
    )
}

fn cmd_encode(a: &EncodeArgs, out: &mut dyn Write) -> CliResult<()> {
    let signal = load_signal(&a.input, a.q)?;
    let state = prepare(&signal)?;
    let (_, report) = preparation_report(&signal, a.cost_model.into())?;
    writeln!(
        out,
        "{} qubits (q={}, l={})",
        state.q() + state.l(),
        state.q(),
        state.l()
    )?;
    writeln!(out, "{}", report_line(&report))?;
    let s = write_file(&a.out_dir, "state.json", &state.to_json())?;
    let c = write_file(&a.out_dir, "cost.json", &report.to_json())?;
    writeln!(out, "wrote {} and {}", s.display(), c.display())?;
    Ok(())
}

/// Runs one pipeline step on the state and, alongside, on the classical
/// reference signal.
fn run_step(
    step: &Step,
    state: &FrqaState,
    reference: &AudioSignal,
    model: CostModel,
    err: &mut dyn Write,
) -> CliResult<(FrqaState, AudioSignal, CostReport)> {
    let (q, l) = (state.q() as usize, state.l() as usize);
    match step {
        Step::Add(path) => {
            let other = pad_to_power_of_two(&load_signal(path, Some(state.q()))?);
            let other_state = prepare(&other)?;
            let next = add_states(state, &other_state)?;
            let (_, r) = cost_report(&Operation::Add, q, l, model)?;
            Ok((next, oracle_add(reference, &other)?, r))
        }
        Step::Op(op) => {
            let (_, r) = cost_report(op, q, l, model)?;
            let (next, oracle) = match op {
                Operation::Add => return Err(CliError::usage("add needs a file: add:FILE")),
                Operation::Invert => {
                    let min = amplitude_bounds(state.q()).0;
                    if reference.samples().contains(&min) {
                        writeln!(
                            err,
                            "warning: sample value {min} has no positive counterpart at q={} and stays {min}",
                            state.q()
                        )?;
                    }
                    (invert_signal(state)?, oracle_invert(reference))
                }
                Operation::Delay(dt) => (
                    delay_signal(state, *dt)?,
                    oracle_delay(reference, *dt as usize)?,
                ),
                Operation::Reverse => (reverse_signal(state)?, oracle_reverse(reference)?),
                Operation::RestrictedReverse(fixed) => (
                    reverse_signal_restricted(state, fixed)?,
                    oracle_reverse_restricted(reference, fixed)?,
                ),
            };
            Ok((next, oracle, r))
        }
    }
}

fn retrieve_with_shots(state: &FrqaState, shots: usize, seed: u64) -> CliResult<AudioSignal> {
    let partial = retrieve_by_measurement(state, shots, seed)?;
    let missing: Vec<usize> = partial
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_none())
        .map(|(t, _)| t)
        .collect();
    if !missing.is_empty() {
        return Err(CliError::verify(format!(
            "{shots} shots never observed time indices {missing:?}"
        )));
    }
    Ok(AudioSignal::new(
        partial.into_iter().map(Option::unwrap).collect(),
        state.q(),
    )?)
}

fn cmd_apply(a: &ApplyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let (manifest, base) = match &a.manifest {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let m: RunManifest = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("manifest {}: {e}", path.display())))?;
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            (m, base)
        }
        None => (RunManifest::default(), PathBuf::new()),
    };
    let resolve = |p: &PathBuf| if p.is_relative() { base.join(p) } else { p.clone() };

    let input = match (&a.input, manifest.inputs.first()) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => resolve(p),
        (None, None) => return Err(CliError::usage("no input given")),
    };
    let mut steps = Vec::new();
    for text in &manifest.pipeline {
        steps.push(parse_step(text, &base)?);
    }
    // extra manifest inputs become add steps
    for extra in manifest.inputs.iter().skip(1) {
        steps.push(Step::Add(resolve(extra)));
    }
    for text in &a.ops {
        steps.push(parse_step(text, Path::new(""))?);
    }
    let model: CostModel = a
        .cost_model
        .map(Into::into)
        .or(manifest.cost_model)
        .unwrap_or_default();
    let seed = a.seed.or(manifest.seed).unwrap_or(0);
    let out_dir = a
        .out_dir
        .clone()
        .or_else(|| manifest.out_dir.as_ref().map(resolve))
        .unwrap_or_else(|| PathBuf::from("frqa-out"));
    let q = a.q.or(manifest.q);

    let mut state = load_state_or_signal(&input, q)?;
    let mut reference = state.retrieve()?;
    let mut reports = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let (next, oracle, report) = run_step(step, &state, &reference, model, err)
            .map_err(|e| e.context(format_args!("step {} ({step})", i + 1)))?;
        writeln!(out, "step {}: {}", i + 1, report_line(&report))?;
        state = next;
        reference = oracle;
        reports.push(report);
    }

    let result = match a.shots {
        Some(shots) => retrieve_with_shots(&state, shots, seed)?,
        None => state.retrieve()?,
    };
    write_file(&out_dir, "state.json", &state.to_json())?;
    write_file(&out_dir, "output.csv", &write_csv(&result))?;
    write_file(
        &out_dir,
        "costs.json",
        &serde_json::to_string_pretty(&reports).expect("reports serialize"),
    )?;
    writeln!(
        out,
        "{} samples at q={} written to {}",
        result.len(),
        result.q(),
        out_dir.display()
    )?;
    if a.verify {
        if result != reference {
            return Err(CliError::verify(format!(
                "pipeline output {:?} differs from oracle {:?}",
                result.samples(),
                reference.samples()
            )));
        }
        writeln!(out, "verified against oracle composition")?;
    }
    Ok(())
}

fn cmd_retrieve(a: &RetrieveArgs, out: &mut dyn Write) -> CliResult<()> {
    let state = FrqaState::from_json(&fs::read_to_string(&a.state)?)?;
    let signal = match a.shots {
        Some(shots) => retrieve_with_shots(&state, shots, a.seed)?,
        None => state.retrieve()?,
    };
    let csv = write_csv(&signal);
    match &a.out_dir {
        Some(dir) => {
            let p = write_file(dir, "output.csv", &csv)?;
            writeln!(out, "wrote {}", p.display())?;
        }
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}

/// Circuit and report for a named operation at (q, l). `prepare` uses the
/// given input or, without one, the all-ones worst-case signal.
fn build_named(
    op: &str,
    q: u32,
    l: u32,
    input: Option<&Path>,
    model: CostModel,
) -> CliResult<(Circuit, CostReport)> {
    if op == "prepare" {
        let signal = match input {
            Some(p) => load_signal(p, Some(q))?,
            None => {
                let max = amplitude_bounds(q).1;
                AudioSignal::new(vec![max; 1 << l], q)?
            }
        };
        return Ok(preparation_report(&signal, model)?);
    }
    let operation = parse_operation(op, l)?;
    Ok(cost_report(&operation, q as usize, l as usize, model)?)
}

fn cmd_cost(a: &CostArgs, out: &mut dyn Write) -> CliResult<()> {
    let (_, report) = build_named(&a.op, a.q, a.l, None, a.cost_model.into())?;
    if a.json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        writeln!(out, "operation: {}", report.operation)?;
        writeln!(out, "formula:   {}", report.formula)?;
        writeln!(out, "expected:  {}", report.expected)?;
        writeln!(out, "measured:  {}", report.measured)?;
        writeln!(out, "delta:     {}", report.delta)?;
        writeln!(out, "census:    {}", report.census.summary())?;
        for note in &report.notes {
            writeln!(out, "note:      {note}")?;
        }
    }
    if let Some(dir) = &a.out_dir {
        write_file(dir, "cost.json", &report.to_json())?;
    }
    Ok(())
}

fn cmd_emit(a: &EmitArgs, out: &mut dyn Write) -> CliResult<()> {
    let q = match (a.q, &a.input) {
        (Some(q), _) => q,
        (None, Some(p)) => load_signal(p, None)?.q(),
        (None, None) => return Err(CliError::usage("--q is required without --input")),
    };
    let (circuit, _) = build_named(&a.op, q, a.l, a.input.as_deref(), CostModel::Standard)?;
    match &a.out_dir {
        Some(dir) => {
            write_file(dir, "circuit.json", &circuit.to_json())?;
            write_file(dir, "circuit.qasm", &circuit.to_qasm())?;
            writeln!(out, "wrote {} gates on {} wires to {}", circuit.len(), circuit.width(), dir.display())?;
        }
        None => match a.format {
            CircuitFormat::Json => writeln!(out, "{}", circuit.to_json())?,
            CircuitFormat::Qasm => out.write_all(circuit.to_qasm().as_bytes())?,
        },
    }
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Encode(a) => cmd_encode(a, out),
        Command::Apply(a) => cmd_apply(a, out, err),
        Command::Retrieve(a) => cmd_retrieve(a, out),
        Command::Cost(a) => cmd_cost(a, out),
        Command::EmitCircuit(a) => cmd_emit(a, out),
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}
