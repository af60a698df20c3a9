//! Ripple-carry adder and bit-serial magnitude comparator.

use crate::error::{FrqaError, Result};
use crate::gates::{Circuit, CircuitBuilder, Control, Gate, Role};

/// Wires of one in-place adder `b <- a + b + c_in`. Operand lists are most
/// significant first; `carries` are the internal carries c_1..c_{q-1}.
#[derive(Debug, Clone)]
pub struct AdderWires<'a> {
    pub a: &'a [usize],
    pub b: &'a [usize],
    pub carry_in: usize,
    pub carries: &'a [usize],
    pub carry_out: usize,
}

fn carry(out: &mut Vec<Gate>, c: usize, a: usize, b: usize, next: usize) {
    out.push(Gate::toffoli(a, b, next));
    out.push(Gate::cnot(a, b));
    out.push(Gate::toffoli(c, b, next));
}

fn carry_inv(out: &mut Vec<Gate>, c: usize, a: usize, b: usize, next: usize) {
    out.push(Gate::toffoli(c, b, next));
    out.push(Gate::cnot(a, b));
    out.push(Gate::toffoli(a, b, next));
}

fn sum(out: &mut Vec<Gate>, c: usize, a: usize, b: usize) {
    out.push(Gate::cnot(a, b));
    out.push(Gate::cnot(c, b));
}

/// CARRY/SUM ripple adder: (4q-2) Toffoli and 4q CNOT. `carry_out` is
/// XOR-ed with the final carry; internal carries return to zero.
pub fn adder_gates(w: &AdderWires<'_>) -> Result<Vec<Gate>> {
    let q = w.a.len();
    if q == 0 || w.b.len() != q || w.carries.len() + 1 != q {
        return Err(FrqaError::Shape(format!(
            "adder needs equal non-empty operands and q-1 carries (a={}, b={}, carries={})",
            w.a.len(),
            w.b.len(),
            w.carries.len()
        )));
    }
    // index 0 is the least significant bit from here on
    let a: Vec<usize> = w.a.iter().rev().copied().collect();
    let b: Vec<usize> = w.b.iter().rev().copied().collect();
    let mut c = vec![w.carry_in];
    c.extend(w.carries.iter().copied());
    c.push(w.carry_out);

    let mut out = Vec::with_capacity(8 * q);
    for i in 0..q {
        carry(&mut out, c[i], a[i], b[i], c[i + 1]);
    }
    out.push(Gate::cnot(a[q - 1], b[q - 1]));
    sum(&mut out, c[q - 1], a[q - 1], b[q - 1]);
    for i in (0..q - 1).rev() {
        carry_inv(&mut out, c[i], a[i], b[i], c[i + 1]);
        sum(&mut out, c[i], a[i], b[i]);
    }
    Ok(out)
}

/// Stand-alone q-bit adder. Registers: `a`, `b`, `carry_in`, `carries`,
/// and `carry_out`, which together with `b` holds the (q+1)-bit sum.
pub fn build_adder(q: usize) -> Result<Circuit> {
    if q == 0 {
        return Err(FrqaError::InvalidWidth("adder needs q >= 1".into()));
    }
    let mut b = CircuitBuilder::new();
    let a = b.register("a", Role::Operand, q);
    let bb = b.register("b", Role::Operand, q);
    let cin = b.register("carry_in", Role::Ancilla, 1);
    let carries = b.register("carries", Role::Ancilla, q - 1);
    let cout = b.register("carry_out", Role::Carry, 1);
    let gates = adder_gates(&AdderWires {
        a: &a,
        b: &bb,
        carry_in: cin[0],
        carries: &carries,
        carry_out: cout[0],
    })?;
    b.extend(gates);
    b.finish()
}

/// Flags `e0 = [a > b]`, `e1 = [a < b]`, both XOR-ed in; `a` and `b` are
/// restored. Self-inverse.
pub fn comparator_gates(a: &[usize], b: &[usize], e0: usize, e1: usize) -> Result<Vec<Gate>> {
    if a.is_empty() || a.len() != b.len() {
        return Err(FrqaError::Shape(format!(
            "comparator needs equal non-empty registers (a={}, b={})",
            a.len(),
            b.len()
        )));
    }
    let mut out = Vec::new();
    let diff: Vec<Gate> = a.iter().zip(b).map(|(&x, &y)| Gate::cnot(x, y)).collect();
    out.extend(diff.iter().cloned());
    for i in 0..a.len() {
        // b now holds a xor b; bit i is the first difference
        let mut controls: Vec<Control> = b[..i].iter().map(|&w| Control::neg(w)).collect();
        controls.push(Control::pos(b[i]));
        let mut greater = controls.clone();
        greater.push(Control::pos(a[i]));
        controls.push(Control::neg(a[i]));
        out.push(Gate::x(greater, e0));
        out.push(Gate::x(controls, e1));
    }
    out.extend(diff);
    Ok(out)
}

/// Stand-alone l-bit comparator over registers `a`, `b`, `flags` = [e0, e1].
pub fn build_comparator(l: usize) -> Result<Circuit> {
    if l == 0 {
        return Err(FrqaError::InvalidWidth("comparator needs l >= 1".into()));
    }
    let mut b = CircuitBuilder::new();
    let a = b.register("a", Role::Operand, l);
    let bb = b.register("b", Role::Operand, l);
    let flags = b.register("flags", Role::Flags, 2);
    let gates = comparator_gates(&a, &bb, flags[0], flags[1])?;
    b.extend(gates);
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audio::{decode_twos_complement, BitString};
    use crate::gates::{apply_to_basis_state, cnot_cost};

    fn write(bits: &mut BitString, wires: &[usize], value: u64) {
        let n = wires.len();
        for (j, &w) in wires.iter().enumerate() {
            bits.set(w, (value >> (n - 1 - j)) & 1 == 1);
        }
    }

    fn read(bits: &BitString, wires: &[usize]) -> u64 {
        wires.iter().fold(0, |acc, &w| (acc << 1) | u64::from(bits.get(w)))
    }

    #[test]
    fn adder_census_hits_stated_composition() {
        for q in 1..=8usize {
            let c = build_adder(q).unwrap().census();
            assert_eq!(c.toffoli, 4 * q as u64 - 2);
            assert_eq!(c.cnot, 4 * q as u64);
            assert_eq!(cnot_cost(&c), 28 * q as u64 - 12);
        }
        let c = build_adder(3).unwrap().census();
        assert_eq!((c.toffoli, c.cnot, cnot_cost(&c)), (10, 12, 72));
    }

    #[test]
    fn adder_exhaustive_unsigned() {
        for q in 1..=4usize {
            let c = build_adder(q).unwrap();
            let layout = c.layout();
            let (a, b) = (layout.wires("a").unwrap(), layout.wires("b").unwrap());
            let cout = layout.wires("carry_out").unwrap();
            let mut scratch = layout.wires("carries").unwrap().to_vec();
            scratch.extend_from_slice(layout.wires("carry_in").unwrap());
            for x in 0..1u64 << q {
                for y in 0..1u64 << q {
                    let mut input = BitString::zeros(c.width());
                    write(&mut input, a, x);
                    write(&mut input, b, y);
                    let out = apply_to_basis_state(&c, &input).unwrap();
                    let mut sum_wires = cout.to_vec();
                    sum_wires.extend_from_slice(b);
                    assert_eq!(read(&out, &sum_wires), x + y, "q={q} {x}+{y}");
                    assert_eq!(read(&out, a), x);
                    assert!(scratch.iter().all(|&w| !out.get(w)));
                }
            }
        }
    }

    #[test]
    fn adder_signed_example() {
        let c = build_adder(4).unwrap();
        let layout = c.layout();
        let (a, b) = (layout.wires("a").unwrap(), layout.wires("b").unwrap());
        let mut input = BitString::zeros(c.width());
        write(&mut input, a, 0b0011);
        write(&mut input, b, 0b1110);
        let out = apply_to_basis_state(&c, &input).unwrap();
        let low = BitString::from_u64(read(&out, b), 4);
        assert_eq!(decode_twos_complement(&low).unwrap(), 1);
    }

    #[test]
    fn adder_rejects_bad_shapes() {
        assert!(build_adder(0).is_err());
        let w = AdderWires {
            a: &[0, 1],
            b: &[2],
            carry_in: 3,
            carries: &[4],
            carry_out: 5,
        };
        assert!(adder_gates(&w).is_err());
    }

    #[test]
    fn comparator_truth_table() {
        for l in 1..=3usize {
            let c = build_comparator(l).unwrap();
            let layout = c.layout();
            let (a, b) = (layout.wires("a").unwrap(), layout.wires("b").unwrap());
            let f = layout.wires("flags").unwrap();
            for x in 0..1u64 << l {
                for y in 0..1u64 << l {
                    let mut input = BitString::zeros(c.width());
                    write(&mut input, a, x);
                    write(&mut input, b, y);
                    let out = apply_to_basis_state(&c, &input).unwrap();
                    assert_eq!(out.get(f[0]), x > y);
                    assert_eq!(out.get(f[1]), x < y);
                    assert_eq!(read(&out, a), x);
                    assert_eq!(read(&out, b), y);
                    let again = apply_to_basis_state(&c, &out).unwrap();
                    assert_eq!(again, input);
                }
            }
        }
    }

    #[test]
    fn comparator_examples() {
        let c = build_comparator(2).unwrap();
        let mut input = BitString::zeros(6);
        write(&mut input, &[0, 1], 0b10);
        write(&mut input, &[2, 3], 0b01);
        let out = apply_to_basis_state(&c, &input).unwrap();
        assert_eq!((out.get(4), out.get(5)), (true, false));

        let c = build_comparator(3).unwrap();
        let mut input = BitString::zeros(8);
        write(&mut input, &[0, 1, 2], 0b101);
        write(&mut input, &[3, 4, 5], 0b101);
        let out = apply_to_basis_state(&c, &input).unwrap();
        assert_eq!((out.get(6), out.get(7)), (false, false));
    }

    #[test]
    fn comparator_true_cost() {
        for l in 1..=6u64 {
            let c = build_comparator(l as usize).unwrap().census();
            assert_eq!(cnot_cost(&c), 12 * l * l + 16 * l - 14);
        }
    }
}
