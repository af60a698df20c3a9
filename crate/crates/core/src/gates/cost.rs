use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use super::{Gate, GateKind};

/// Counts per gate kind. Negative controls are counted separately as the
/// NOT pairs that would realize them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCensus {
    pub not: u64,
    pub hadamard: u64,
    pub cnot: u64,
    pub toffoli: u64,
    /// Control count to gate count, k >= 3.
    pub mcx: BTreeMap<usize, u64>,
    pub polarity_not: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostModel {
    /// Single-qubit gates are free.
    #[default]
    Standard,
    /// Every single-qubit gate, including polarity NOTs, costs 1.
    AllGates,
}

impl std::str::FromStr for CostModel {
    type Err = crate::error::FrqaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(CostModel::Standard),
            "all-gates" => Ok(CostModel::AllGates),
            other => Err(crate::error::FrqaError::Parse(format!(
                "unknown cost model `{other}` (expected standard or all-gates)"
            ))),
        }
    }
}

/// CNOT-equivalent cost of one k-controlled NOT, k >= 3.
pub fn mcx_cost(k: usize) -> u64 {
    12 * (k as u64 - 1) + 1
}

/// CNOT-equivalent cost under the standard model.
pub fn cnot_cost(census: &GateCensus) -> u64 {
    census.cost(CostModel::Standard)
}

impl GateCensus {
    pub fn of(gates: &[Gate]) -> Self {
        let mut c = GateCensus::default();
        for g in gates {
            c.record(g);
        }
        c
    }

    pub fn record(&mut self, gate: &Gate) {
        self.record_kind(gate.kind(), 1);
        self.polarity_not += 2 * gate.negative_controls() as u64;
    }

    pub fn record_kind(&mut self, kind: GateKind, n: u64) {
        match kind {
            GateKind::Not => self.not += n,
            GateKind::Hadamard => self.hadamard += n,
            GateKind::Cnot => self.cnot += n,
            GateKind::Toffoli => self.toffoli += n,
            GateKind::Mcx(k) => *self.mcx.entry(k).or_default() += n,
        }
    }

    pub fn mcx_count(&self, k: usize) -> u64 {
        self.mcx.get(&k).copied().unwrap_or(0)
    }

    pub fn total_gates(&self) -> u64 {
        self.not + self.hadamard + self.cnot + self.toffoli + self.mcx.values().sum::<u64>()
    }

    pub fn cost(&self, model: CostModel) -> u64 {
        let multi = self.cnot
            + 6 * self.toffoli
            + self.mcx.iter().map(|(&k, &n)| mcx_cost(k) * n).sum::<u64>();
        match model {
            CostModel::Standard => multi,
            CostModel::AllGates => multi + self.not + self.hadamard + self.polarity_not,
        }
    }

    /// Census after adding `k` positive controls to every X gate.
    pub fn controlled(&self, k: usize) -> GateCensus {
        let mut out = GateCensus {
            hadamard: self.hadamard,
            polarity_not: self.polarity_not,
            ..GateCensus::default()
        };
        let shift = |from: usize| -> GateKind {
            match from + k {
                0 => GateKind::Not,
                1 => GateKind::Cnot,
                2 => GateKind::Toffoli,
                n => GateKind::Mcx(n),
            }
        };
        out.record_kind(shift(0), self.not);
        out.record_kind(shift(1), self.cnot);
        out.record_kind(shift(2), self.toffoli);
        for (&m, &n) in &self.mcx {
            out.record_kind(shift(m), n);
        }
        out.mcx.retain(|_, n| *n > 0);
        out
    }

    /// Compact human-readable summary, e.g. `CNOT: 4, TOFFOLI: 2`.
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        let mut push = |name: String, n: u64| {
            if n > 0 {
                parts.push(format!("{name}: {n}"));
            }
        };
        push("NOT".into(), self.not);
        push("HADAMARD".into(), self.hadamard);
        push("CNOT".into(), self.cnot);
        push("TOFFOLI".into(), self.toffoli);
        for (k, n) in &self.mcx {
            push(format!("MCX({k})"), *n);
        }
        if parts.is_empty() {
            "empty".into()
        } else {
            parts.join(", ")
        }
    }
}

impl AddAssign<&GateCensus> for GateCensus {
    fn add_assign(&mut self, rhs: &GateCensus) {
        self.not += rhs.not;
        self.hadamard += rhs.hadamard;
        self.cnot += rhs.cnot;
        self.toffoli += rhs.toffoli;
        self.polarity_not += rhs.polarity_not;
        for (&k, &n) in &rhs.mcx {
            *self.mcx.entry(k).or_default() += n;
        }
    }
}

impl Add for GateCensus {
    type Output = GateCensus;

    fn add(mut self, rhs: GateCensus) -> GateCensus {
        self += &rhs;
        self
    }
}
