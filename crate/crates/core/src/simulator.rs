//! Dense statevector simulation.
//!
//! Wire `w` is bit `w` of the basis index. Register values are read most
//! significant wire first, matching the register's wire order.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::audio::{decode_twos_complement, BitString};
use crate::error::{FrqaError, Result};
use crate::gates::{Circuit, Gate, RegisterLayout, Role};

pub const DEFAULT_MAX_WIRES: usize = 26;

/// Amplitudes at or below this magnitude count as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;

pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
    layout: RegisterLayout,
}

/// One nonzero term of a state dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateTerm {
    /// One character per wire, wire 0 first.
    pub basis: String,
    pub re: f64,
    pub im: f64,
}

fn check_width(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(FrqaError::Resource(format!(
            "{n} wires exceed the simulator cap of {cap}"
        )));
    }
    Ok(())
}

/// Reads `wires` out of `index`, first wire most significant.
pub fn register_value(index: usize, wires: &[usize]) -> u64 {
    wires
        .iter()
        .fold(0u64, |acc, &w| (acc << 1) | ((index >> w) & 1) as u64)
}

/// Walks every index whose bits under `fixed_mask` equal `fixed_value`.
fn for_each_matching(n: usize, fixed_mask: usize, fixed_value: usize, mut f: impl FnMut(usize)) {
    let free = ((1usize << n) - 1) & !fixed_mask;
    let mut sub = 0usize;
    loop {
        f(sub | fixed_value);
        sub = sub.wrapping_sub(free) & free;
        if sub == 0 {
            break;
        }
    }
}

impl StateVector {
    /// |0...0> on `n` wires under the default width cap.
    pub fn zero(n: usize, layout: RegisterLayout) -> Result<Self> {
        Self::basis(n, layout, 0)
    }

    pub fn basis(n: usize, layout: RegisterLayout, index: usize) -> Result<Self> {
        Self::basis_with_cap(n, layout, index, DEFAULT_MAX_WIRES)
    }

    pub fn basis_with_cap(
        n: usize,
        layout: RegisterLayout,
        index: usize,
        cap: usize,
    ) -> Result<Self> {
        check_width(n, cap)?;
        if index >> n != 0 {
            return Err(FrqaError::Shape(format!(
                "basis index {index} does not fit {n} wires"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps, layout })
    }

    /// Builds a state from explicit amplitudes, which must be normalized.
    pub fn from_amplitudes(n: usize, layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        check_width(n, DEFAULT_MAX_WIRES)?;
        if amps.len() != 1 << n {
            return Err(FrqaError::Shape(format!(
                "{} amplitudes for {n} wires",
                amps.len()
            )));
        }
        let s = StateVector { n, amps, layout };
        s.check_norm()?;
        Ok(s)
    }

    /// Builds a state from sparse `(index, amplitude)` pairs.
    pub fn from_terms(
        n: usize,
        layout: RegisterLayout,
        terms: impl IntoIterator<Item = (usize, Complex64)>,
    ) -> Result<Self> {
        check_width(n, DEFAULT_MAX_WIRES)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (i, a) in terms {
            if i >> n != 0 {
                return Err(FrqaError::Shape(format!(
                    "basis index {i} does not fit {n} wires"
                )));
            }
            amps[i] += a;
        }
        Self::from_amplitudes(n, layout, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn set_layout(&mut self, layout: RegisterLayout) {
        self.layout = layout;
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_norm(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(FrqaError::Shape(format!("state norm {norm} is not 1")));
        }
        Ok(())
    }

    /// Nonzero terms in index order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > ZERO_THRESHOLD)
            .map(|(i, a)| (i, *a))
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        let tbit = 1usize << gate.target();
        match gate {
            Gate::Hadamard { .. } => {
                for_each_matching(self.n, tbit, 0, |i| {
                    let a = self.amps[i];
                    let b = self.amps[i | tbit];
                    self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                    self.amps[i | tbit] = (a - b) * FRAC_1_SQRT_2;
                });
            }
            Gate::X { controls, .. } => {
                let mut mask = tbit;
                let mut value = 0;
                for c in controls {
                    mask |= 1 << c.wire;
                    if c.polarity.active_value() {
                        value |= 1 << c.wire;
                    }
                }
                for_each_matching(self.n, mask, value, |i| self.amps.swap(i, i | tbit));
            }
        }
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.width() != self.n {
            return Err(FrqaError::Shape(format!(
                "circuit width {} does not match state width {}",
                circuit.width(),
                self.n
            )));
        }
        for g in circuit.gates() {
            self.apply_gate(g);
        }
        self.check_norm()
    }

    fn register_wires(&self, name: &str) -> Result<Vec<usize>> {
        Ok(self.layout.wires(name)?.to_vec())
    }

    fn role_wires(&self, role: Role) -> Result<Vec<usize>> {
        self.layout
            .first_with_role(role)
            .map(|r| r.wires.clone())
            .ok_or_else(|| FrqaError::UnknownRegister(format!("{role:?}").to_lowercase()))
    }

    /// Born-rule outcome probabilities of a register, keyed by its value.
    pub fn register_distribution(&self, name: &str) -> Result<BTreeMap<u64, f64>> {
        let wires = self.register_wires(name)?;
        let mut dist = BTreeMap::new();
        for (i, a) in self.terms() {
            *dist.entry(register_value(i, &wires)).or_insert(0.0) += a.norm_sqr();
        }
        Ok(dist)
    }

    /// Projective measurement of one register, sampled with a seeded RNG.
    pub fn measure_register(&self, name: &str, seed: u64) -> Result<(BitString, StateVector)> {
        let wires = self.register_wires(name)?;
        self.measure_wires(&wires, seed)
    }

    /// Projective measurement of an arbitrary wire list, first wire most significant.
    pub fn measure_wires(&self, wires: &[usize], seed: u64) -> Result<(BitString, StateVector)> {
        let mut dist = BTreeMap::new();
        for (i, a) in self.terms() {
            *dist.entry(register_value(i, wires)).or_insert(0.0) += a.norm_sqr();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw: f64 = rng.gen::<f64>() * dist.values().sum::<f64>();
        let mut acc = 0.0;
        let mut outcome = *dist
            .keys()
            .next_back()
            .ok_or_else(|| FrqaError::DegenerateMeasurement("state has no support".into()))?;
        for (&v, &p) in &dist {
            acc += p;
            if draw < acc {
                outcome = v;
                break;
            }
        }
        let collapsed = self.project(wires, outcome)?;
        Ok((BitString::from_u64(outcome, wires.len()), collapsed))
    }

    fn project(&self, wires: &[usize], value: u64) -> Result<StateVector> {
        let mut amps = self.amps.clone();
        for (i, a) in amps.iter_mut().enumerate() {
            if register_value(i, wires) != value {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-9 {
            return Err(FrqaError::DegenerateMeasurement(format!(
                "post-projection norm {norm:e}"
            )));
        }
        for a in amps.iter_mut() {
            *a /= norm;
        }
        Ok(StateVector {
            n: self.n,
            amps,
            layout: self.layout.clone(),
        })
    }

    /// Post-selects `wires == value` and renormalizes.
    pub fn post_select(&self, wires: &[usize], value: u64) -> Result<StateVector> {
        self.project(wires, value)
    }

    /// Signed amplitude entangled with time index `t`, read exactly.
    pub fn readout_amplitude(&self, t: u64) -> Result<i64> {
        let amp_wires = self.role_wires(Role::Amplitude)?;
        let time_wires = self.role_wires(Role::Time)?;
        readout_with(self, &amp_wires, &time_wires, t)
    }

    /// Appends `extra` zero-initialized wires above the existing ones.
    pub fn with_extra_wires(&self, extra: usize, layout: RegisterLayout) -> Result<StateVector> {
        let n = self.n + extra;
        check_width(n, DEFAULT_MAX_WIRES)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[..self.amps.len()].copy_from_slice(&self.amps);
        Ok(StateVector { n, amps, layout })
    }

    /// `self` on the low wires, `other` on the wires above it.
    pub fn tensor(&self, other: &StateVector, layout: RegisterLayout) -> Result<StateVector> {
        let n = self.n + other.n;
        check_width(n, DEFAULT_MAX_WIRES)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        let low: Vec<_> = self.terms().collect();
        for (j, b) in other.terms() {
            for &(i, a) in &low {
                amps[i | (j << self.n)] = a * b;
            }
        }
        Ok(StateVector { n, amps, layout })
    }

    /// Keeps only `kept` wires (in the given order) of a state in which every
    /// other wire is constant across the support.
    pub(crate) fn restricted_to(&self, kept: &[usize], layout: RegisterLayout) -> Result<StateVector> {
        let n = kept.len();
        check_width(n, DEFAULT_MAX_WIRES)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (i, a) in self.terms() {
            let j = kept
                .iter()
                .enumerate()
                .fold(0usize, |acc, (new, &old)| acc | (((i >> old) & 1) << new));
            amps[j] += a;
        }
        let s = StateVector { n, amps, layout };
        s.check_norm()?;
        Ok(s)
    }

    pub fn dump(&self) -> Vec<StateTerm> {
        let mut out: Vec<StateTerm> = self
            .terms()
            .map(|(i, a)| StateTerm {
                basis: (0..self.n)
                    .map(|w| if (i >> w) & 1 == 1 { '1' } else { '0' })
                    .collect(),
                re: a.re,
                im: a.im,
            })
            .collect();
        out.sort_by(|a, b| a.basis.cmp(&b.basis));
        out
    }

    pub fn dump_json(&self) -> String {
        serde_json::to_string_pretty(&self.dump()).expect("state dump serializes")
    }

    pub fn from_dump(n: usize, layout: RegisterLayout, terms: &[StateTerm]) -> Result<Self> {
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            if t.basis.len() != n {
                return Err(FrqaError::Shape(format!(
                    "basis string `{}` is not {n} wires wide",
                    t.basis
                )));
            }
            let mut index = 0usize;
            for (w, ch) in t.basis.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => index |= 1 << w,
                    other => {
                        return Err(FrqaError::Parse(format!("bad basis character `{other}`")))
                    }
                }
            }
            parsed.push((index, Complex64::new(t.re, t.im)));
        }
        Self::from_terms(n, layout, parsed)
    }
}

pub(crate) fn readout_with(
    state: &StateVector,
    amp_wires: &[usize],
    time_wires: &[usize],
    t: u64,
) -> Result<i64> {
    let mut pattern = None;
    for (i, _) in state.terms() {
        if register_value(i, time_wires) != t {
            continue;
        }
        let p = register_value(i, amp_wires);
        match pattern {
            None => pattern = Some(p),
            Some(prev) if prev != p => {
                return Err(FrqaError::NotFrqaShaped(format!(
                    "time {t} carries amplitude patterns {prev} and {p}"
                )))
            }
            _ => {}
        }
    }
    let p = pattern.ok_or_else(|| {
        FrqaError::NotFrqaShaped(format!("time {t} has zero probability"))
    })?;
    decode_twos_complement(&BitString::from_u64(p, amp_wires.len()))
}

/// Functional form of [`StateVector::apply_circuit`].
pub fn apply_circuit(mut state: StateVector, circuit: &Circuit) -> Result<StateVector> {
    state.apply_circuit(circuit)?;
    Ok(state)
}
