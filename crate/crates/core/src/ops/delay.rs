use crate::error::{FrqaError, Result};
use crate::frqa::FrqaState;
use crate::gates::{Circuit, CircuitBuilder, Gate, Role};

use super::arith::{adder_gates, AdderWires};
use super::run_on_state;

/// Wires for a delay by a classical constant.
#[derive(Debug, Clone)]
pub struct DelayWires<'a> {
    pub time: &'a [usize],
    pub amplitude: &'a [usize],
    pub constant: &'a [usize],
    pub carry_in: usize,
    pub carries: &'a [usize],
    pub carry: usize,
    pub moved: &'a [usize],
}

fn check_dt(dt: u64, l: usize) -> Result<()> {
    let max = (1i64 << l) - 1;
    if dt as i64 > max {
        return Err(FrqaError::range("delay", dt as i64, 0, max));
    }
    Ok(())
}

/// Loads `dt`, adds it to the time register, moves the amplitude of
/// wrapped terms into `moved`, then unloads `dt`.
pub fn delay_gates(w: &DelayWires<'_>, dt: u64) -> Result<Vec<Gate>> {
    let l = w.time.len();
    check_dt(dt, l)?;
    if w.constant.len() != l || w.moved.len() != w.amplitude.len() {
        return Err(FrqaError::Shape(format!(
            "delay needs an {l}-wire constant and {} move ancillas",
            w.amplitude.len()
        )));
    }
    let load: Vec<Gate> = w
        .constant
        .iter()
        .enumerate()
        .filter(|&(j, _)| (dt >> (l - 1 - j)) & 1 == 1)
        .map(|(_, &c)| Gate::not(c))
        .collect();
    let mut out = load.clone();
    out.extend(adder_gates(&AdderWires {
        a: w.constant,
        b: w.time,
        carry_in: w.carry_in,
        carries: w.carries,
        carry_out: w.carry,
    })?);
    for (&s, &m) in w.amplitude.iter().zip(w.moved) {
        out.push(Gate::toffoli(w.carry, s, m));
        out.push(Gate::toffoli(w.carry, m, s));
    }
    out.extend(load);
    Ok(out)
}

fn allocate(b: &mut CircuitBuilder, l: usize, q: usize) -> (Vec<usize>, usize, Vec<usize>, usize, Vec<usize>) {
    let constant = b.register("delay_constant", Role::Constant, l);
    let cin = b.register("delay_carry_in", Role::Ancilla, 1);
    let carries = b.register("delay_carries", Role::Ancilla, l - 1);
    let carry = b.register("delay_carry", Role::Carry, 1);
    let moved = b.register("delay_moved", Role::Carry, q);
    (constant, cin[0], carries, carry[0], moved)
}

/// Delay circuit over `amplitude` (q) and `time` (l) plus its scratch.
pub fn build_delay_circuit(l: usize, q: usize, dt: u64) -> Result<Circuit> {
    if l == 0 || q == 0 {
        return Err(FrqaError::InvalidWidth("delay needs l >= 1 and q >= 1".into()));
    }
    check_dt(dt, l)?;
    let mut b = CircuitBuilder::new();
    let amp = b.register("amplitude", Role::Amplitude, q);
    let time = b.register("time", Role::Time, l);
    let (constant, carry_in, carries, carry, moved) = allocate(&mut b, l, q);
    let gates = delay_gates(
        &DelayWires {
            time: &time,
            amplitude: &amp,
            constant: &constant,
            carry_in,
            carries: &carries,
            carry,
            moved: &moved,
        },
        dt,
    )?;
    b.extend(gates);
    b.finish()
}

/// Shifts the signal `dt` steps later. Samples pushed past the end are
/// kept in the `delay_moved` register, entangled with `delay_carry`.
pub fn delay_signal(x: &FrqaState, dt: u64) -> Result<FrqaState> {
    check_dt(dt, x.l() as usize)?;
    run_on_state(x, |b, amp, time| {
        let (constant, carry_in, carries, carry, moved) = allocate(b, time.len(), amp.len());
        b.extend(delay_gates(
            &DelayWires {
                time,
                amplitude: amp,
                constant: &constant,
                carry_in,
                carries: &carries,
                carry,
                moved: &moved,
            },
            dt,
        )?);
        Ok(())
    })
}
