//! Reversible-gate circuit IR over named registers.
//!
//! Every gate is either a Hadamard or an X with zero or more polarity-tagged
//! controls. The control count fixes the kind: NOT, CNOT, TOFFOLI, or MCX(k)
//! for k >= 3, so a two-control X is always a TOFFOLI.

mod cost;
mod decompose;
mod export;

pub use cost::{cnot_cost, mcx_cost, CostModel, GateCensus};
pub use decompose::{decompose_mcx, max_controls};
pub use export::{CircuitJson, ControlJson, GateJson, RegisterJson};

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::audio::BitString;
use crate::error::{FrqaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Polarity::Positive
        } else {
            Polarity::Negative
        }
    }

    /// Wire value that satisfies the control.
    pub fn active_value(self) -> bool {
        self == Polarity::Positive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub wire: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn pos(wire: usize) -> Self {
        Control {
            wire,
            polarity: Polarity::Positive,
        }
    }

    pub fn neg(wire: usize) -> Self {
        Control {
            wire,
            polarity: Polarity::Negative,
        }
    }

    /// Control that fires when `wire` equals `value`.
    pub fn on(wire: usize, value: bool) -> Self {
        Control {
            wire,
            polarity: Polarity::from_bit(value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Not,
    Hadamard,
    Cnot,
    Toffoli,
    Mcx(usize),
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Not => f.write_str("NOT"),
            GateKind::Hadamard => f.write_str("HADAMARD"),
            GateKind::Cnot => f.write_str("CNOT"),
            GateKind::Toffoli => f.write_str("TOFFOLI"),
            GateKind::Mcx(k) => write!(f, "MCX({k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    Hadamard { target: usize },
    X { target: usize, controls: Vec<Control> },
}

impl Gate {
    /// X on `target` under `controls`, rejecting repeated wires.
    pub fn controlled_x(controls: Vec<Control>, target: usize) -> Result<Gate> {
        let mut seen = HashSet::with_capacity(controls.len() + 1);
        seen.insert(target);
        for c in &controls {
            if !seen.insert(c.wire) {
                return Err(FrqaError::Wiring(format!(
                    "wire {} used twice in one gate (target {target})",
                    c.wire
                )));
            }
        }
        Ok(Gate::X { target, controls })
    }

    pub fn not(target: usize) -> Gate {
        Gate::X {
            target,
            controls: Vec::new(),
        }
    }

    pub fn hadamard(target: usize) -> Gate {
        Gate::Hadamard { target }
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::controlled_x(vec![Control::pos(control)], target).expect("cnot wires must differ")
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Gate {
        Gate::controlled_x(vec![Control::pos(c1), Control::pos(c2)], target)
            .expect("toffoli wires must differ")
    }

    /// Shorthand for internally-built gates whose wiring is known to be distinct.
    pub(crate) fn x(controls: Vec<Control>, target: usize) -> Gate {
        Gate::controlled_x(controls, target).expect("builder produced overlapping wires")
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Hadamard { .. } => GateKind::Hadamard,
            Gate::X { controls, .. } => match controls.len() {
                0 => GateKind::Not,
                1 => GateKind::Cnot,
                2 => GateKind::Toffoli,
                k => GateKind::Mcx(k),
            },
        }
    }

    pub fn target(&self) -> usize {
        match self {
            Gate::Hadamard { target } | Gate::X { target, .. } => *target,
        }
    }

    pub fn controls(&self) -> &[Control] {
        match self {
            Gate::Hadamard { .. } => &[],
            Gate::X { controls, .. } => controls,
        }
    }

    /// Target followed by control wires.
    pub fn wires(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.target()).chain(self.controls().iter().map(|c| c.wire))
    }

    pub fn negative_controls(&self) -> usize {
        self.controls()
            .iter()
            .filter(|c| c.polarity == Polarity::Negative)
            .count()
    }

    /// Whether every control is satisfied by `bit(wire)`.
    pub fn controls_satisfied(&self, bit: impl Fn(usize) -> bool) -> bool {
        self.controls()
            .iter()
            .all(|c| bit(c.wire) == c.polarity.active_value())
    }
}

/// What a register is for. Roles other than amplitude, time and operand
/// must start at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Amplitude,
    Time,
    /// Generic data input (e.g. adder operands).
    Operand,
    /// Clean scratch space, returned to zero.
    Ancilla,
    /// Starts at zero, may end holding a carry bit.
    Carry,
    Extension,
    Flags,
    /// Holds a classical constant loaded with NOT gates.
    Constant,
    /// Entangled leftovers of an operation; no value guarantee.
    Discard,
}

impl Role {
    pub fn requires_clean_input(self) -> bool {
        !matches!(
            self,
            Role::Amplitude | Role::Time | Role::Operand | Role::Discard
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub role: Role,
    /// Wire indices, most significant first.
    pub wires: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

impl RegisterLayout {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, role: Role, wires: Vec<usize>) -> Result<()> {
        let name = name.into();
        if self.get(&name).is_some() {
            return Err(FrqaError::Wiring(format!("register `{name}` declared twice")));
        }
        for w in &wires {
            if let Some(owner) = self.owner(*w) {
                return Err(FrqaError::Wiring(format!(
                    "wire {w} already belongs to register `{}`",
                    owner.name
                )));
            }
        }
        self.registers.push(Register { name, role, wires });
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn wires(&self, name: &str) -> Result<&[usize]> {
        self.get(name)
            .map(|r| r.wires.as_slice())
            .ok_or_else(|| FrqaError::UnknownRegister(name.to_string()))
    }

    pub fn owner(&self, wire: usize) -> Option<&Register> {
        self.registers.iter().find(|r| r.wires.contains(&wire))
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn first_with_role(&self, role: Role) -> Option<&Register> {
        self.registers.iter().find(|r| r.role == role)
    }

    /// All wires whose role requires a zero input.
    pub fn clean_wires(&self) -> Vec<usize> {
        self.registers
            .iter()
            .filter(|r| r.role.requires_clean_input())
            .flat_map(|r| r.wires.iter().copied())
            .collect()
    }

    pub fn set_role(&mut self, name: &str, role: Role) -> Result<()> {
        let reg = self
            .registers
            .iter_mut()
            .find(|r| r.name == name)
            .ok_or_else(|| FrqaError::UnknownRegister(name.to_string()))?;
        reg.role = role;
        Ok(())
    }

    /// Layout of `other` placed after this one, with `other`'s wires shifted by
    /// `offset` and its register names prefixed.
    pub fn merged(&self, other: &RegisterLayout, offset: usize, prefix: &str) -> Result<Self> {
        let mut out = self.clone();
        for r in &other.registers {
            out.add(
                format!("{prefix}{}", r.name),
                r.role,
                r.wires.iter().map(|w| w + offset).collect(),
            )?;
        }
        Ok(out)
    }

    /// Drops the listed wires and renumbers the remainder densely.
    pub fn without_wires(&self, dropped: &[usize], width: usize) -> Self {
        let mut remap = vec![None; width];
        let mut next = 0;
        for (w, slot) in remap.iter_mut().enumerate() {
            if !dropped.contains(&w) {
                *slot = Some(next);
                next += 1;
            }
        }
        let registers = self
            .registers
            .iter()
            .filter_map(|r| {
                let wires: Vec<usize> = r.wires.iter().filter_map(|&w| remap[w]).collect();
                (!wires.is_empty()).then(|| Register {
                    name: r.name.clone(),
                    role: r.role,
                    wires,
                })
            })
            .collect();
        RegisterLayout { registers }
    }

    fn validate(&self, width: usize) -> Result<()> {
        let mut seen = HashSet::new();
        for r in &self.registers {
            for &w in &r.wires {
                if w >= width {
                    return Err(FrqaError::Wiring(format!(
                        "register `{}` uses wire {w} beyond width {width}",
                        r.name
                    )));
                }
                if !seen.insert(w) {
                    return Err(FrqaError::Wiring(format!("wire {w} is in two registers")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    width: usize,
    layout: RegisterLayout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize, layout: RegisterLayout) -> Result<Self> {
        layout.validate(width)?;
        Ok(Circuit {
            width,
            layout,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(width: usize, layout: RegisterLayout, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(width, layout)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(w) = gate.wires().find(|&w| w >= self.width) {
            return Err(FrqaError::Wiring(format!(
                "gate {} touches wire {w} beyond width {}",
                gate.kind(),
                self.width
            )));
        }
        if let Gate::X { controls, target } = &gate {
            Gate::controlled_x(controls.clone(), *target)?;
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn has_hadamard(&self) -> bool {
        self.gates.iter().any(|g| g.kind() == GateKind::Hadamard)
    }

    pub fn census(&self) -> GateCensus {
        GateCensus::of(&self.gates)
    }

    /// Gates in reverse order. Every gate in the IR is self-inverse.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            width: self.width,
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().cloned().collect(),
        }
    }

    /// `self` followed by `other` on the same wires.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if other.width != self.width {
            return Err(FrqaError::Shape(format!(
                "cannot concatenate width {} with width {}",
                self.width, other.width
            )));
        }
        let mut out = self.clone();
        out.gates.extend(other.gates.iter().cloned());
        Ok(out)
    }

    /// Every MCX replaced by its Toffoli ladder over a shared clean pool
    /// appended as register `mcx_pool`.
    pub fn decomposed(&self) -> Result<Circuit> {
        let k = max_controls(&self.gates);
        if k < 3 {
            return Ok(self.clone());
        }
        let pool: Vec<usize> = (self.width..self.width + k - 1).collect();
        let mut layout = self.layout.clone();
        layout.add("mcx_pool", Role::Ancilla, pool.clone())?;
        let mut out = Circuit::new(self.width + pool.len(), layout)?;
        for g in &self.gates {
            if matches!(g.kind(), GateKind::Mcx(_)) {
                out.extend(decompose_mcx(g, &pool)?)?;
            } else {
                out.push(g.clone())?;
            }
        }
        Ok(out)
    }

    /// Same circuit with negative controls rewritten as NOT sandwiches.
    pub fn with_positive_controls(&self) -> Circuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            gates.extend(lower_polarity(g));
        }
        Circuit {
            width: self.width,
            layout: self.layout.clone(),
            gates,
        }
    }
}

/// Rewrites negative controls of one gate as NOTs before and after it.
pub(crate) fn lower_polarity(gate: &Gate) -> Vec<Gate> {
    let negs: Vec<usize> = gate
        .controls()
        .iter()
        .filter(|c| c.polarity == Polarity::Negative)
        .map(|c| c.wire)
        .collect();
    if negs.is_empty() {
        return vec![gate.clone()];
    }
    let positive = Gate::X {
        target: gate.target(),
        controls: gate.controls().iter().map(|c| Control::pos(c.wire)).collect(),
    };
    let mut out: Vec<Gate> = negs.iter().map(|&w| Gate::not(w)).collect();
    out.push(positive);
    out.extend(negs.iter().map(|&w| Gate::not(w)));
    out
}

/// Adds `controls` to every gate: NOT becomes CNOT, CNOT becomes TOFFOLI,
/// and so on. The control wires must not be touched by the circuit.
pub fn add_controls(circuit: &Circuit, controls: &[Control]) -> Result<Circuit> {
    let mut seen = HashSet::new();
    for c in controls {
        if c.wire >= circuit.width {
            return Err(FrqaError::Wiring(format!(
                "control wire {} beyond width {}",
                c.wire, circuit.width
            )));
        }
        if !seen.insert(c.wire) {
            return Err(FrqaError::Wiring(format!("control wire {} repeated", c.wire)));
        }
    }
    let used: HashSet<usize> = circuit.gates.iter().flat_map(|g| g.wires()).collect();
    if let Some(c) = controls.iter().find(|c| used.contains(&c.wire)) {
        return Err(FrqaError::Wiring(format!(
            "control wire {} is already used by the circuit",
            c.wire
        )));
    }
    let gates = controlled_gates(&circuit.gates, controls)?;
    Ok(Circuit {
        width: circuit.width,
        layout: circuit.layout.clone(),
        gates,
    })
}

pub(crate) fn controlled_gates(gates: &[Gate], controls: &[Control]) -> Result<Vec<Gate>> {
    gates
        .iter()
        .map(|g| match g {
            Gate::Hadamard { .. } if !controls.is_empty() => Err(FrqaError::NotAPermutation(
                "controlled Hadamard is outside the gate set".into(),
            )),
            Gate::Hadamard { .. } => Ok(g.clone()),
            Gate::X {
                target,
                controls: own,
            } => {
                let mut all = controls.to_vec();
                all.extend(own.iter().copied());
                Gate::controlled_x(all, *target)
            }
        })
        .collect()
}

/// Image of a computational basis state under a Hadamard-free circuit.
/// `input` holds one bit per wire, wire 0 first.
pub fn apply_to_basis_state(circuit: &Circuit, input: &BitString) -> Result<BitString> {
    if input.width() != circuit.width {
        return Err(FrqaError::Shape(format!(
            "input has {} bits, circuit has {} wires",
            input.width(),
            circuit.width
        )));
    }
    if circuit.has_hadamard() {
        return Err(FrqaError::NotAPermutation(
            "circuit contains a Hadamard gate".into(),
        ));
    }
    let mut state = input.clone();
    for g in &circuit.gates {
        if g.controls_satisfied(|w| state.get(w)) {
            state.flip(g.target());
        }
    }
    Ok(state)
}

/// Incremental circuit construction with register allocation.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    width: usize,
    layout: RegisterLayout,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts from an existing layout of `width` wires.
    pub fn on_layout(width: usize, layout: RegisterLayout) -> Self {
        CircuitBuilder {
            width,
            layout,
            gates: Vec::new(),
        }
    }

    /// Allocates `n` fresh wires as a named register. A numeric suffix is
    /// appended when the name is taken.
    pub fn register(&mut self, name: &str, role: Role, n: usize) -> Vec<usize> {
        let wires: Vec<usize> = (self.width..self.width + n).collect();
        self.width += n;
        let mut unique = name.to_string();
        let mut suffix = 2;
        while self.layout.get(&unique).is_some() {
            unique = format!("{name}_{suffix}");
            suffix += 1;
        }
        self.layout
            .add(unique, role, wires.clone())
            .expect("fresh wires cannot clash");
        wires
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) {
        self.gates.extend(gates);
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn finish(self) -> Result<Circuit> {
        Circuit::from_gates(self.width, self.layout, self.gates)
    }
}
