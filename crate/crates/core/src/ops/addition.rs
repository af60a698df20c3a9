use crate::audio::AudioSignal;
use crate::error::{FrqaError, Result};
use crate::frqa::FrqaState;
use crate::gates::{
    cnot_cost, controlled_gates, Circuit, CircuitBuilder, Control, Gate, GateCensus,
    RegisterLayout, Role,
};

use super::arith::{adder_gates, comparator_gates, AdderWires};
use super::report::formulas;

/// Wire map of the addition circuit. The sum is `[sum_high] ++ y_amp`.
#[derive(Debug, Clone)]
pub struct AdditionWires<'a> {
    pub x_amp: &'a [usize],
    pub x_time: &'a [usize],
    pub y_amp: &'a [usize],
    pub y_time: &'a [usize],
    pub sum_high: usize,
    pub flags: [usize; 2],
    pub carry_in: usize,
    pub carries: &'a [usize],
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AdditionOptions {
    /// Re-run the comparator at the end so the flags return to 00.
    pub uncompute_flags: bool,
}

fn equal_times(flags: [usize; 2]) -> Vec<Control> {
    vec![Control::neg(flags[0]), Control::neg(flags[1])]
}

/// Copies each sign bit onto its extension wire when both flags are 0.
/// The two targets may be the same wire.
pub fn sign_extension_gates(
    x_sign: usize,
    y_sign: usize,
    flags: [usize; 2],
    x_ext: usize,
    y_ext: usize,
) -> Vec<Gate> {
    [(x_sign, x_ext), (y_sign, y_ext)]
        .into_iter()
        .map(|(sign, ext)| {
            let mut controls = equal_times(flags);
            controls.push(Control::pos(sign));
            Gate::x(controls, ext)
        })
        .collect()
}

/// Stand-alone extension stage over `x`, `y` (q each), `flags` and one
/// extension wire per operand.
pub fn build_sign_extension(q: usize) -> Result<Circuit> {
    if q == 0 {
        return Err(FrqaError::InvalidWidth("sign extension needs q >= 1".into()));
    }
    let mut b = CircuitBuilder::new();
    let x = b.register("x", Role::Operand, q);
    let y = b.register("y", Role::Operand, q);
    let flags = b.register("flags", Role::Flags, 2);
    let ext = b.register("extension", Role::Extension, 2);
    b.extend(sign_extension_gates(x[0], y[0], [flags[0], flags[1]], ext[0], ext[1]));
    b.finish()
}

/// Comparator on the time registers, extension and adder both gated on
/// equal times. Both extensions target `sum_high`, which therefore ends as
/// `x_sign ^ y_sign ^ carry`, the top bit of the widened sum.
pub fn addition_gates(w: &AdditionWires<'_>, opts: AdditionOptions) -> Result<Vec<Gate>> {
    let q = w.x_amp.len();
    if q == 0 || w.y_amp.len() != q || w.x_time.len() != w.y_time.len() {
        return Err(FrqaError::Shape(format!(
            "addition needs matching registers (amplitude {} vs {}, time {} vs {})",
            w.x_amp.len(),
            w.y_amp.len(),
            w.x_time.len(),
            w.y_time.len()
        )));
    }
    let compare = comparator_gates(w.x_time, w.y_time, w.flags[0], w.flags[1])?;
    let mut out = compare.clone();
    out.extend(sign_extension_gates(
        w.x_amp[0],
        w.y_amp[0],
        w.flags,
        w.sum_high,
        w.sum_high,
    ));
    let adder = adder_gates(&AdderWires {
        a: w.x_amp,
        b: w.y_amp,
        carry_in: w.carry_in,
        carries: w.carries,
        carry_out: w.sum_high,
    })?;
    out.extend(controlled_gates(&adder, &equal_times(w.flags))?);
    if opts.uncompute_flags {
        out.extend(compare);
    }
    Ok(out)
}

/// Registers, in wire order: `x_amplitude`, `x_time`, `y_amplitude`,
/// `y_time`, `sum_high`, `flags`, `carry_in`, `carries`.
pub fn build_addition_circuit(q: usize, l: usize, opts: AdditionOptions) -> Result<Circuit> {
    if q == 0 || l == 0 {
        return Err(FrqaError::InvalidWidth("addition needs q >= 1 and l >= 1".into()));
    }
    let mut b = CircuitBuilder::new();
    let x_amp = b.register("x_amplitude", Role::Operand, q);
    let x_time = b.register("x_time", Role::Operand, l);
    let y_amp = b.register("y_amplitude", Role::Operand, q);
    let y_time = b.register("y_time", Role::Operand, l);
    let high = b.register("sum_high", Role::Extension, 1);
    let flags = b.register("flags", Role::Flags, 2);
    let cin = b.register("carry_in", Role::Ancilla, 1);
    let carries = b.register("carries", Role::Ancilla, q - 1);
    let gates = addition_gates(
        &AdditionWires {
            x_amp: &x_amp,
            x_time: &x_time,
            y_amp: &y_amp,
            y_time: &y_time,
            sum_high: high[0],
            flags: [flags[0], flags[1]],
            carry_in: cin[0],
            carries: &carries,
        },
        opts,
    )?;
    b.extend(gates);
    b.finish()
}

/// Census of the adder gated by two controls.
pub(crate) fn controlled_adder_census(q: usize) -> Result<GateCensus> {
    let adder = super::arith::build_adder(q)?;
    Ok(adder.census().controlled(2))
}

/// Total cost with the comparator and extension priced at the stated
/// figures and the controlled adder measured.
pub fn addition_itemized_cost(q: usize, l: usize) -> Result<u64> {
    let adder = cnot_cost(&controlled_adder_census(q)?);
    Ok(formulas::comparator(l as u64) + formulas::EXTENSION + adder)
}

/// Sums two states of equal shape. The joint state runs through the
/// addition circuit and is post-selected on equal time indices, leaving a
/// state whose amplitude register is `q + 1` wires wide.
pub fn add_states(x: &FrqaState, y: &FrqaState) -> Result<FrqaState> {
    if x.q() != y.q() || x.l() != y.l() {
        return Err(FrqaError::Shape(format!(
            "cannot add q={}, l={} to q={}, l={}",
            x.q(),
            x.l(),
            y.q(),
            y.l()
        )));
    }
    let q = x.q() as usize;
    let nx = x.width();
    let ny = y.width();

    let mut layout = RegisterLayout::new();
    for r in x.layout().registers() {
        let role = match r.role {
            Role::Amplitude => Role::Operand,
            Role::Time => Role::Discard,
            other => other,
        };
        layout.add(format!("x_{}", r.name), role, r.wires.clone())?;
    }
    let shift = |ws: &[usize]| ws.iter().map(|w| w + nx).collect::<Vec<_>>();
    let y_amp = shift(&y.amplitude_wires());
    let y_time = shift(&y.time_wires());
    for r in y.layout().registers() {
        match r.role {
            Role::Amplitude => {}
            Role::Time => layout.add("time", Role::Time, y_time.clone())?,
            other => layout.add(format!("y_{}", r.name), other, shift(&r.wires))?,
        }
    }
    let joint = x.state().tensor(y.state(), layout.clone())?;

    let mut b = CircuitBuilder::on_layout(nx + ny, layout);
    let high = b.register("sum_high", Role::Extension, 1);
    let flags = b.register("flags", Role::Flags, 2);
    let cin = b.register("add_carry_in", Role::Ancilla, 1);
    let carries = b.register("add_carries", Role::Ancilla, q - 1);
    let x_amp = x.amplitude_wires();
    let x_time = x.time_wires();
    b.extend(addition_gates(
        &AdditionWires {
            x_amp: &x_amp,
            x_time: &x_time,
            y_amp: &y_amp,
            y_time: &y_time,
            sum_high: high[0],
            flags: [flags[0], flags[1]],
            carry_in: cin[0],
            carries: &carries,
        },
        AdditionOptions::default(),
    )?);
    let circuit = b.finish()?;

    // the sum register replaces y's amplitude register
    let mut out_layout = RegisterLayout::new();
    let mut sum = high.clone();
    sum.extend(&y_amp);
    for r in circuit.layout().registers() {
        if r.name != "sum_high" {
            out_layout.add(r.name.clone(), r.role, r.wires.clone())?;
        }
    }
    out_layout.add("amplitude", Role::Amplitude, sum)?;

    let mut sv = joint.with_extra_wires(circuit.width() - joint.n(), out_layout)?;
    sv.apply_circuit(&circuit)?;
    let selected = sv.post_select(&flags, 0)?;
    FrqaState::new(selected)?.compact()
}

/// Sum of two states as a classical signal at resolution `q + 1`.
pub fn add_signals(x: &FrqaState, y: &FrqaState) -> Result<AudioSignal> {
    add_states(x, y)?.retrieve()
}
