//! FRQA states: preparation from classical audio and exact retrieval.
//!
//! A prepared state lives on `q` amplitude wires (MSB first) followed by `l`
//! time wires (MSB first). Each time index carries exactly one amplitude
//! pattern, with uniform weight `2^(-l/2)`.

use serde::{Deserialize, Serialize};

use crate::audio::{
    amplitude_to_resolution, pad_to_power_of_two, time_bits, AudioSignal, BitString,
};
use crate::error::{FrqaError, Result};
use crate::gates::{Circuit, CircuitBuilder, Control, Gate, RegisterJson, RegisterLayout, Role};
use crate::simulator::{readout_with, register_value, StateTerm, StateVector, DEFAULT_MAX_WIRES};

const MAGNITUDE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FrqaState {
    q: u32,
    l: u32,
    state: StateVector,
}

/// Serialized form: the state dump plus the register header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrqaStateJson {
    pub q: u32,
    pub l: u32,
    pub width: usize,
    pub layout: Vec<RegisterJson>,
    pub terms: Vec<StateTerm>,
}

fn unique_role(layout: &RegisterLayout, role: Role) -> Result<Vec<usize>> {
    let mut found = layout.registers().iter().filter(|r| r.role == role);
    let first = found.next().ok_or_else(|| {
        FrqaError::NotFrqaShaped(format!("no {role:?} register in layout"))
    })?;
    if found.next().is_some() {
        return Err(FrqaError::NotFrqaShaped(format!(
            "more than one {role:?} register in layout"
        )));
    }
    Ok(first.wires.clone())
}

impl FrqaState {
    /// Wraps a statevector after checking the FRQA shape invariants.
    pub fn new(state: StateVector) -> Result<Self> {
        let q = unique_role(state.layout(), Role::Amplitude)?.len() as u32;
        let l = unique_role(state.layout(), Role::Time)?.len() as u32;
        let s = FrqaState { q, l, state };
        s.validate()?;
        Ok(s)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn width(&self) -> usize {
        self.state.n()
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }

    pub fn layout(&self) -> &RegisterLayout {
        self.state.layout()
    }

    pub fn amplitude_wires(&self) -> Vec<usize> {
        unique_role(self.layout(), Role::Amplitude).expect("validated")
    }

    pub fn time_wires(&self) -> Vec<usize> {
        unique_role(self.layout(), Role::Time).expect("validated")
    }

    pub fn validate(&self) -> Result<()> {
        let time = self.time_wires();
        let clean: Vec<usize> = self
            .layout()
            .registers()
            .iter()
            .filter(|r| r.role == Role::Ancilla)
            .flat_map(|r| r.wires.iter().copied())
            .collect();
        let expected = 2f64.powf(-(self.l as f64) / 2.0);
        let slots = 1usize << self.l;
        let mut seen = vec![false; slots];
        let mut count = 0usize;
        for (i, a) in self.state.terms() {
            count += 1;
            if (a.norm() - expected).abs() > MAGNITUDE_TOLERANCE {
                return Err(FrqaError::NotFrqaShaped(format!(
                    "term {i} has magnitude {} instead of {expected}",
                    a.norm()
                )));
            }
            let t = register_value(i, &time) as usize;
            if std::mem::replace(&mut seen[t], true) {
                return Err(FrqaError::NotFrqaShaped(format!(
                    "time {t} appears in more than one term"
                )));
            }
            if let Some(w) = clean.iter().find(|&&w| (i >> w) & 1 == 1) {
                return Err(FrqaError::NotFrqaShaped(format!(
                    "ancilla wire {w} is set in term {i}"
                )));
            }
        }
        if count != slots {
            return Err(FrqaError::NotFrqaShaped(format!(
                "{count} nonzero terms, expected {slots}"
            )));
        }
        Ok(())
    }

    /// Signed sample stored at time `t`.
    pub fn readout(&self, t: u64) -> Result<i64> {
        readout_with(&self.state, &self.amplitude_wires(), &self.time_wires(), t)
    }

    /// Exact readout of every time index.
    pub fn retrieve(&self) -> Result<AudioSignal> {
        let samples = (0..1u64 << self.l)
            .map(|t| self.readout(t))
            .collect::<Result<Vec<_>>>()?;
        AudioSignal::new(samples, self.q)
    }

    /// Drops every non-amplitude, non-time wire that has the same value in
    /// all terms. Exact: no amplitude is discarded.
    pub fn compact(&self) -> Result<FrqaState> {
        let amp = self.amplitude_wires();
        let time = self.time_wires();
        let terms: Vec<usize> = self.state.terms().map(|(i, _)| i).collect();
        let n = self.width();
        let dropped: Vec<usize> = (0..n)
            .filter(|w| !amp.contains(w) && !time.contains(w))
            .filter(|&w| {
                let first = (terms[0] >> w) & 1;
                terms.iter().all(|&i| (i >> w) & 1 == first)
            })
            .collect();
        if dropped.is_empty() {
            return Ok(self.clone());
        }
        let kept: Vec<usize> = (0..n).filter(|w| !dropped.contains(w)).collect();
        let layout = self.layout().without_wires(&dropped, n);
        let state = self.state.restricted_to(&kept, layout)?;
        FrqaState::new(state)
    }

    pub fn to_json_model(&self) -> FrqaStateJson {
        FrqaStateJson {
            q: self.q,
            l: self.l,
            width: self.width(),
            layout: self
                .layout()
                .registers()
                .iter()
                .map(|r| RegisterJson {
                    name: r.name.clone(),
                    role: r.role,
                    wires: r.wires.clone(),
                })
                .collect(),
            terms: self.state.dump(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_model()).expect("state serializes")
    }

    pub fn from_json_model(model: &FrqaStateJson) -> Result<FrqaState> {
        let mut layout = RegisterLayout::new();
        for r in &model.layout {
            layout.add(r.name.clone(), r.role, r.wires.clone())?;
        }
        let state = StateVector::from_dump(model.width, layout, &model.terms)?;
        let s = FrqaState::new(state)?;
        if s.q != model.q || s.l != model.l {
            return Err(FrqaError::Shape(format!(
                "header says q={}, l={} but layout gives q={}, l={}",
                model.q, model.l, s.q, s.l
            )));
        }
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<FrqaState> {
        FrqaState::from_json_model(&serde_json::from_str(text)?)
    }
}

/// NOT-only loader: maps |0...0> to the amplitude pattern for the
/// resolution value `sample_bits` (MSB complemented).
pub fn build_value_setting_op(sample_bits: &BitString) -> Result<Circuit> {
    let q = sample_bits.width();
    if q == 0 {
        return Err(FrqaError::Shape("sample bits are empty".into()));
    }
    let mut b = CircuitBuilder::new();
    let amp = b.register("amplitude", Role::Amplitude, q);
    for (i, &w) in amp.iter().enumerate() {
        let bit = sample_bits.get(i);
        let flip = if i == 0 { !bit } else { bit };
        if flip {
            b.push(Gate::not(w));
        }
    }
    b.finish()
}

/// Gates XOR-ing `bits` into `amp` when `time` holds `k`, using the l-way
/// AND computed into `anc` (length l-1) and then uncomputed.
fn emit_controlled_load(
    out: &mut Vec<Gate>,
    k: usize,
    bits: &BitString,
    amp: &[usize],
    time: &[usize],
    anc: &[usize],
) {
    let l = time.len();
    let on = |j: usize| Control::on(time[j], (k >> (l - 1 - j)) & 1 == 1);
    let targets = amp
        .iter()
        .enumerate()
        .filter(|&(i, _)| bits.get(i))
        .map(|(_, &w)| w);
    if l == 1 {
        out.extend(targets.map(|w| Gate::x(vec![on(0)], w)));
        return;
    }
    let mut compute = vec![Gate::x(vec![on(0), on(1)], anc[0])];
    for j in 2..l {
        compute.push(Gate::x(vec![on(j), Control::pos(anc[j - 2])], anc[j - 1]));
    }
    let and = anc[l - 2];
    out.extend(compute.iter().cloned());
    out.extend(targets.map(|w| Gate::cnot(and, w)));
    out.extend(compute.into_iter().rev());
}

fn check_time_index(k: usize, l: u32) -> Result<()> {
    let max = (1i64 << l) - 1;
    if k as i64 > max {
        return Err(FrqaError::range("time index", k as i64, 0, max));
    }
    Ok(())
}

/// Loads the resolution bits `sample_bits` into the amplitude register when
/// the time register equals `k`. The MSB complement is left to the single
/// unconditional NOT of the preparation circuit.
pub fn build_controlled_value_setting(k: usize, sample_bits: &BitString, l: u32) -> Result<Circuit> {
    if l == 0 {
        return Err(FrqaError::InvalidWidth("time resolution must be at least 1".into()));
    }
    check_time_index(k, l)?;
    let q = sample_bits.width();
    let mut b = CircuitBuilder::new();
    let amp = b.register("amplitude", Role::Amplitude, q);
    let time = b.register("time", Role::Time, l as usize);
    let anc = b.register("and", Role::Ancilla, l as usize - 1);
    let mut gates = Vec::new();
    emit_controlled_load(&mut gates, k, sample_bits, &amp, &time, &anc);
    b.extend(gates);
    b.finish()
}

/// Hadamard layer, one MSB NOT, then the controlled load for every sample.
pub fn build_preparation_circuit(signal: &AudioSignal) -> Result<Circuit> {
    if !signal.is_padded() {
        return Err(FrqaError::Shape(format!(
            "preparation needs 2^l samples, got {}",
            signal.len()
        )));
    }
    let q = signal.q() as usize;
    let l = signal.l() as usize;
    let mut b = CircuitBuilder::new();
    let amp = b.register("amplitude", Role::Amplitude, q);
    let time = b.register("time", Role::Time, l);
    let anc = b.register("and", Role::Ancilla, l - 1);
    for &w in &time {
        b.push(Gate::hadamard(w));
    }
    b.push(Gate::not(amp[0]));
    let mut gates = Vec::new();
    for (t, &s) in signal.samples().iter().enumerate() {
        let bits = BitString::from_u64(amplitude_to_resolution(s, signal.q())?, q);
        emit_controlled_load(&mut gates, t, &bits, &amp, &time, &anc);
    }
    b.extend(gates);
    b.finish()
}

/// Wire count the preparation circuit needs for a signal of `len` samples.
pub fn preparation_width(len: usize, q: u32) -> usize {
    let l = time_bits(len) as usize;
    q as usize + 2 * l - 1
}

/// Pads, builds and simulates the preparation circuit, then drops the
/// (returned-to-zero) AND ancillas.
pub fn prepare(signal: &AudioSignal) -> Result<FrqaState> {
    let padded = pad_to_power_of_two(signal);
    let width = preparation_width(padded.len(), padded.q());
    if width > DEFAULT_MAX_WIRES {
        return Err(FrqaError::Resource(format!(
            "preparing {} samples at q={} needs {width} wires, cap is {DEFAULT_MAX_WIRES}",
            padded.len(),
            padded.q()
        )));
    }
    let circuit = build_preparation_circuit(&padded)?;
    let mut state = StateVector::zero(circuit.width(), circuit.layout().clone())?;
    state.apply_circuit(&circuit)?;
    FrqaState::new(state)?.compact()
}

pub fn retrieve(state: &FrqaState) -> Result<AudioSignal> {
    state.retrieve()
}

/// Measurement-based retrieval: each shot measures the time register, then
/// the amplitude register of the collapsed state. Shot `i` uses seed
/// `seed + i`. Entry `t` is `None` when no shot landed on time `t`.
pub fn retrieve_by_measurement(state: &FrqaState, shots: usize, seed: u64) -> Result<Vec<Option<i64>>> {
    let amp = state.amplitude_wires();
    let time = state.time_wires();
    let mut out = vec![None; 1 << state.l()];
    for shot in 0..shots as u64 {
        let s = seed.wrapping_add(shot);
        let (t, collapsed) = state.state().measure_wires(&time, s)?;
        let (pattern, _) = collapsed.measure_wires(&amp, s ^ 0x9e37_79b9_7f4a_7c15)?;
        out[t.to_u64() as usize] = Some(crate::audio::decode_twos_complement(&pattern)?);
    }
    Ok(out)
}
