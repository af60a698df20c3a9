use super::{Control, Gate, Polarity};
use crate::error::{FrqaError, Result};

/// Largest control count among `gates`.
pub fn max_controls(gates: &[Gate]) -> usize {
    gates.iter().map(|g| g.controls().len()).max().unwrap_or(0)
}

/// Toffoli ladder for a k-controlled NOT, k >= 3, using the first k-1 of
/// `ancillas` (which must be zero and are returned to zero).
pub fn decompose_mcx(gate: &Gate, ancillas: &[usize]) -> Result<Vec<Gate>> {
    let (target, controls) = match gate {
        Gate::X { target, controls } if controls.len() >= 3 => (*target, controls),
        other => {
            return Err(FrqaError::Shape(format!(
                "decompose_mcx needs at least 3 controls, got {}",
                other.kind()
            )))
        }
    };
    let k = controls.len();
    if ancillas.len() < k - 1 {
        return Err(FrqaError::Resource(format!(
            "MCX({k}) needs {} ancillas, {} available",
            k - 1,
            ancillas.len()
        )));
    }
    let anc = &ancillas[..k - 1];
    if let Some(a) = anc.iter().find(|a| gate.wires().any(|w| w == **a)) {
        return Err(FrqaError::Wiring(format!(
            "ancilla {a} overlaps a wire of the gate"
        )));
    }

    let negs: Vec<usize> = controls
        .iter()
        .filter(|c| c.polarity == Polarity::Negative)
        .map(|c| c.wire)
        .collect();
    let w: Vec<usize> = controls.iter().map(|c| c.wire).collect();

    let mut compute = vec![Gate::toffoli(w[0], w[1], anc[0])];
    for i in 2..k {
        compute.push(Gate::toffoli(w[i], anc[i - 2], anc[i - 1]));
    }

    let mut out: Vec<Gate> = negs.iter().map(|&n| Gate::not(n)).collect();
    out.extend(compute.iter().cloned());
    out.push(Gate::x(vec![Control::pos(anc[k - 2])], target));
    out.extend(compute.into_iter().rev());
    out.extend(negs.iter().map(|&n| Gate::not(n)));
    Ok(out)
}
