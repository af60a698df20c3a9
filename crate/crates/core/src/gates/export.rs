use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Circuit, Control, Gate, GateKind, Polarity, RegisterLayout, Role};
use crate::error::{FrqaError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterJson {
    pub name: String,
    pub role: Role,
    pub wires: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlJson {
    pub wire: usize,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateJson {
    pub kind: String,
    pub target: usize,
    #[serde(default)]
    pub controls: Vec<ControlJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitJson {
    pub width: usize,
    pub registers: Vec<RegisterJson>,
    pub gates: Vec<GateJson>,
}

impl Circuit {
    pub fn to_json_model(&self) -> CircuitJson {
        CircuitJson {
            width: self.width,
            registers: self
                .layout
                .registers()
                .iter()
                .map(|r| RegisterJson {
                    name: r.name.clone(),
                    role: r.role,
                    wires: r.wires.clone(),
                })
                .collect(),
            gates: self
                .gates
                .iter()
                .map(|g| GateJson {
                    kind: g.kind().to_string(),
                    target: g.target(),
                    controls: g
                        .controls()
                        .iter()
                        .map(|c| ControlJson {
                            wire: c.wire,
                            polarity: c.polarity,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_model()).expect("circuit serializes")
    }

    pub fn from_json_model(model: &CircuitJson) -> Result<Circuit> {
        let mut layout = RegisterLayout::new();
        for r in &model.registers {
            layout.add(r.name.clone(), r.role, r.wires.clone())?;
        }
        let mut gates = Vec::with_capacity(model.gates.len());
        for g in &model.gates {
            let gate = if g.kind == "HADAMARD" {
                if !g.controls.is_empty() {
                    return Err(FrqaError::Parse("HADAMARD cannot have controls".into()));
                }
                Gate::hadamard(g.target)
            } else {
                let controls = g
                    .controls
                    .iter()
                    .map(|c| Control {
                        wire: c.wire,
                        polarity: c.polarity,
                    })
                    .collect();
                Gate::controlled_x(controls, g.target)?
            };
            if gate.kind().to_string() != g.kind {
                return Err(FrqaError::Parse(format!(
                    "gate kind `{}` does not match its {} controls",
                    g.kind,
                    g.controls.len()
                )));
            }
            gates.push(gate);
        }
        Circuit::from_gates(model.width, layout, gates)
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        Circuit::from_json_model(&serde_json::from_str(text)?)
    }

    /// OpenQASM 3 text, one gate per line. Negative controls are emitted
    /// as explicit `x` pairs around the gate.
    pub fn to_qasm(&self) -> String {
        let mut out = String::new();
        out.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
        writeln!(out, "qubit[{}] q;", self.width.max(1)).unwrap();
        for r in self.layout.registers() {
            let wires: Vec<String> = r.wires.iter().map(|w| w.to_string()).collect();
            writeln!(out, "// {} ({:?}): {}", r.name, r.role, wires.join(" ")).unwrap();
        }
        for g in self.with_positive_controls().gates() {
            let args: Vec<String> = g
                .controls()
                .iter()
                .map(|c| c.wire)
                .chain(std::iter::once(g.target()))
                .map(|w| format!("q[{w}]"))
                .collect();
            let args = args.join(", ");
            let line = match g.kind() {
                GateKind::Hadamard => format!("h {args};"),
                GateKind::Not => format!("x {args};"),
                GateKind::Cnot => format!("cx {args};"),
                GateKind::Toffoli => format!("ccx {args};"),
                GateKind::Mcx(k) => format!("ctrl({k}) @ x {args};"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::CircuitBuilder;

    fn sample() -> Circuit {
        let mut b = CircuitBuilder::new();
        let a = b.register("a", Role::Amplitude, 2);
        let t = b.register("t", Role::Time, 2);
        let f = b.register("f", Role::Ancilla, 1);
        b.push(Gate::hadamard(t[0]));
        b.push(Gate::x(
            vec![Control::pos(t[0]), Control::neg(t[1]), Control::pos(a[0])],
            f[0],
        ));
        b.push(Gate::cnot(f[0], a[1]));
        b.finish().unwrap()
    }

    #[test]
    fn json_round_trip() {
        let c = sample();
        let back = Circuit::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn json_rejects_mislabelled_kind() {
        let mut model = sample().to_json_model();
        model.gates[2].kind = "TOFFOLI".into();
        assert!(Circuit::from_json_model(&model).is_err());
    }

    #[test]
    fn qasm_has_one_line_per_lowered_gate() {
        let c = sample();
        let text = c.to_qasm();
        let body: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with("//") && !l.starts_with("OPENQASM"))
            .filter(|l| !l.starts_with("include") && !l.starts_with("qubit"))
            .collect();
        assert_eq!(body.len(), c.with_positive_controls().len());
        assert!(text.contains("ctrl(3) @ x q[2], q[3], q[0], q[4];"));
        assert!(text.contains("h q[2];"));
        assert_eq!(text.matches("x q[3];").count(), 2);
    }
}
