use crate::error::{FrqaError, Result};
use crate::frqa::FrqaState;
use crate::gates::{Circuit, CircuitBuilder, Control, Gate, Role};

use super::run_on_state;

/// Two's-complement negation of `amp` (MSB first): NOT every bit, then add
/// one through a carry chain seeded by `carry_in` held at 1.
///
/// The increment is (q-1) Toffoli + q CNOT and leaves `carries` holding
/// prefix-AND garbage. With `uncompute`, q-1 more Toffolis clear them.
pub fn inversion_gates(
    amp: &[usize],
    carry_in: usize,
    carries: &[usize],
    uncompute: bool,
) -> Result<Vec<Gate>> {
    let q = amp.len();
    if q == 0 || carries.len() + 1 != q {
        return Err(FrqaError::Shape(format!(
            "inversion of {q} bits needs {} carries, got {}",
            q.saturating_sub(1),
            carries.len()
        )));
    }
    let y: Vec<usize> = amp.iter().rev().copied().collect();
    let mut c = vec![carry_in];
    c.extend(carries.iter().copied());

    let mut out: Vec<Gate> = amp.iter().map(|&w| Gate::not(w)).collect();
    out.push(Gate::not(carry_in));
    for j in 0..q - 1 {
        out.push(Gate::toffoli(y[j], c[j], c[j + 1]));
        out.push(Gate::cnot(c[j], y[j]));
    }
    out.push(Gate::cnot(c[q - 1], y[q - 1]));
    if uncompute {
        for j in (0..q - 1).rev() {
            out.push(Gate::x(vec![Control::neg(y[j]), Control::pos(c[j])], c[j + 1]));
        }
    }
    out.push(Gate::not(carry_in));
    Ok(out)
}

/// Inversion circuit with the census (q-1) Toffoli + q CNOT. The carry
/// register is left dirty.
pub fn build_inversion_circuit(q: usize) -> Result<Circuit> {
    build_inversion_circuit_with(q, false)
}

/// Inversion circuit over registers `amplitude`, `carry_in`, `carries`.
pub fn build_inversion_circuit_with(q: usize, uncompute: bool) -> Result<Circuit> {
    if q == 0 {
        return Err(FrqaError::InvalidWidth("inversion needs q >= 1".into()));
    }
    let mut b = CircuitBuilder::new();
    let amp = b.register("amplitude", Role::Amplitude, q);
    let cin = b.register("carry_in", Role::Ancilla, 1);
    let role = if uncompute { Role::Ancilla } else { Role::Carry };
    let carries = b.register("carries", role, q - 1);
    let gates = inversion_gates(&amp, cin[0], &carries, uncompute)?;
    b.extend(gates);
    b.finish()
}

/// Negates every sample. `-2^(q-1)` maps to itself.
pub fn invert_signal(x: &FrqaState) -> Result<FrqaState> {
    run_on_state(x, |b, amp, _| {
        let cin = b.register("inv_carry_in", Role::Ancilla, 1);
        let carries = b.register("inv_carries", Role::Ancilla, amp.len() - 1);
        b.extend(inversion_gates(amp, cin[0], &carries, true)?);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audio::{decode_twos_complement, encode_twos_complement, BitString};
    use crate::gates::{apply_to_basis_state, cnot_cost};

    fn negate(c: &Circuit, value: i64, q: usize) -> (i64, BitString) {
        let mut input = BitString::zeros(c.width());
        let bits = encode_twos_complement(value, q as u32).unwrap();
        for i in 0..q {
            input.set(i, bits.get(i));
        }
        let out = apply_to_basis_state(c, &input).unwrap();
        let amp = BitString::new(out.bits()[..q].to_vec());
        (decode_twos_complement(&amp).unwrap(), out)
    }

    #[test]
    fn census_and_cost() {
        for q in 1..=8usize {
            let c = build_inversion_circuit(q).unwrap().census();
            assert_eq!(c.toffoli, q as u64 - 1);
            assert_eq!(c.cnot, q as u64);
            assert_eq!(cnot_cost(&c), 7 * q as u64 - 6);
        }
        assert_eq!(cnot_cost(&build_inversion_circuit(3).unwrap().census()), 15);
    }

    #[test]
    fn examples() {
        let c = build_inversion_circuit(3).unwrap();
        assert_eq!(negate(&c, 3, 3).0, -3);
        assert_eq!(negate(&c, 0, 3).0, 0);
        let (_, out) = negate(&c, 3, 3);
        assert_eq!(BitString::new(out.bits()[..3].to_vec()), "101".parse().unwrap());
    }

    #[test]
    fn both_configurations_negate_and_clean_one_is_tidy() {
        for q in 1..=5usize {
            let half = 1i64 << (q - 1);
            for uncompute in [false, true] {
                let c = build_inversion_circuit_with(q, uncompute).unwrap();
                for v in -half..half {
                    let (got, out) = negate(&c, v, q);
                    let expect = if v == -half { v } else { -v };
                    assert_eq!(got, expect, "q={q} v={v} uncompute={uncompute}");
                    assert!(!out.get(q), "carry_in restored");
                    if uncompute {
                        assert!(out.bits()[q..].iter().all(|&b| !b));
                    }
                }
            }
        }
    }

    #[test]
    fn dirty_carries_hold_prefix_and() {
        let c = build_inversion_circuit(3).unwrap();
        // 0 -> all trailing bits zero, so every carry fires
        let (_, out) = negate(&c, 0, 3);
        assert!(out.bits()[4..].iter().all(|&b| b));
    }
}
