use crate::audio::TimeRestriction;
use crate::error::{FrqaError, Result};
use crate::frqa::FrqaState;
use crate::gates::{Circuit, CircuitBuilder, Control, Gate, Role};

use super::run_on_state;

fn time_circuit(l: usize, gates: Vec<Gate>) -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    b.register("time", Role::Time, l);
    b.extend(gates);
    b.finish()
}

/// `t -> 2^l - 1 - t`: one NOT per time wire.
pub fn build_reversal_circuit(l: usize) -> Result<Circuit> {
    if l == 0 {
        return Err(FrqaError::InvalidWidth("reversal needs l >= 1".into()));
    }
    time_circuit(l, (0..l).map(Gate::not).collect())
}

/// Complements every unfixed time wire, controlled on the fixed ones.
pub fn restricted_reversal_gates(time: &[usize], fixed: &TimeRestriction) -> Result<Vec<Gate>> {
    let l = time.len();
    fixed.check(l as u32)?;
    if fixed.len() == l {
        return Err(FrqaError::DegenerateRestriction(format!(
            "all {l} time bits are fixed, nothing to reverse"
        )));
    }
    let controls: Vec<Control> = fixed.iter().map(|(p, v)| Control::on(time[p], v)).collect();
    Ok((0..l)
        .filter(|&p| !fixed.is_fixed(p))
        .map(|p| Gate::x(controls.clone(), time[p]))
        .collect())
}

pub fn build_restricted_reversal_circuit(l: usize, fixed: &TimeRestriction) -> Result<Circuit> {
    if l == 0 {
        return Err(FrqaError::InvalidWidth("reversal needs l >= 1".into()));
    }
    let time: Vec<usize> = (0..l).collect();
    time_circuit(l, restricted_reversal_gates(&time, fixed)?)
}

pub fn reverse_signal(x: &FrqaState) -> Result<FrqaState> {
    run_on_state(x, |b, _, time| {
        b.extend(time.iter().map(|&w| Gate::not(w)));
        Ok(())
    })
}

pub fn reverse_signal_restricted(x: &FrqaState, fixed: &TimeRestriction) -> Result<FrqaState> {
    run_on_state(x, |b, _, time| {
        b.extend(restricted_reversal_gates(time, fixed)?);
        Ok(())
    })
}
