//! Circuit builders and state-level semantics for the signal operations:
//! addition, inversion, delay, reversal and restricted reversal.

mod addition;
mod arith;
mod delay;
mod inversion;
mod report;
mod reversal;

pub use addition::{
    add_signals, add_states, addition_gates, addition_itemized_cost, build_addition_circuit,
    build_sign_extension, sign_extension_gates, AdditionOptions, AdditionWires,
};
pub use arith::{adder_gates, build_adder, build_comparator, comparator_gates, AdderWires};
pub use delay::{build_delay_circuit, delay_gates, delay_signal, DelayWires};
pub use inversion::{build_inversion_circuit, build_inversion_circuit_with, invert_signal, inversion_gates};
pub use report::{cost_report, formulas, preparation_report, CostReport, Operation};
pub use reversal::{
    build_restricted_reversal_circuit, build_reversal_circuit, restricted_reversal_gates,
    reverse_signal, reverse_signal_restricted,
};

use crate::error::Result;
use crate::frqa::FrqaState;
use crate::gates::CircuitBuilder;

/// Builds a circuit on top of `state`'s layout (allocating any extra
/// registers), simulates it, and compacts constant scratch wires away.
pub(crate) fn run_on_state(
    state: &FrqaState,
    build: impl FnOnce(&mut CircuitBuilder, &[usize], &[usize]) -> Result<()>,
) -> Result<FrqaState> {
    let amp = state.amplitude_wires();
    let time = state.time_wires();
    let mut b = CircuitBuilder::on_layout(state.width(), state.layout().clone());
    build(&mut b, &amp, &time)?;
    let extra = b.width() - state.width();
    let circuit = b.finish()?;
    let mut sv = state
        .state()
        .with_extra_wires(extra, circuit.layout().clone())?;
    sv.apply_circuit(&circuit)?;
    FrqaState::new(sv)?.compact()
}
