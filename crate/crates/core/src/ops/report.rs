use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::audio::{AudioSignal, TimeRestriction};
use crate::error::{FrqaError, Result};
use crate::frqa::build_preparation_circuit;
use crate::gates::{cnot_cost, Circuit, CostModel, GateCensus};

use super::addition::{build_addition_circuit, controlled_adder_census, AdditionOptions};
use super::arith::build_comparator;
use super::{
    build_delay_circuit, build_inversion_circuit, build_restricted_reversal_circuit,
    build_reversal_circuit,
};

/// Closed-form CNOT-equivalent costs.
pub mod formulas {
    /// Upper bound; equality when every resolution value is all ones.
    pub fn preparation(l: u64, q: u64) -> u64 {
        (12 * l + q - 12) << l
    }

    pub fn adder(q: u64) -> u64 {
        28 * q - 12
    }

    pub fn controlled_adder(q: u64) -> u64 {
        248 * q - 74
    }

    pub fn comparator(l: u64) -> u64 {
        24 * l * l + 6 * l
    }

    /// Two 4-controlled NOTs.
    pub const EXTENSION: u64 = 74;

    pub fn addition(l: u64, q: u64) -> u64 {
        24 * l * l + 6 * l + 248 * q
    }

    pub fn inversion(q: u64) -> u64 {
        7 * q - 6
    }

    pub fn delay(l: u64, q: u64) -> u64 {
        28 * l + 12 * q - 12
    }

    /// One (l-1)-controlled NOT. Only meaningful as written for l >= 4.
    pub fn restricted_reversal_worst(l: u64) -> i64 {
        12 * l as i64 - 23
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub operation: String,
    pub formula: String,
    pub expected: i64,
    pub measured: i64,
    pub delta: i64,
    pub census: GateCensus,
    pub cnot_equivalent_cost: u64,
    pub formula_expected: i64,
    pub cost_model: CostModel,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CostReport {
    pub fn new(
        operation: impl Into<String>,
        formula: impl Into<String>,
        expected: i64,
        census: GateCensus,
        model: CostModel,
    ) -> Self {
        let measured = census.cost(model);
        CostReport {
            operation: operation.into(),
            formula: formula.into(),
            expected,
            measured: measured as i64,
            delta: measured as i64 - expected,
            census,
            cnot_equivalent_cost: measured,
            formula_expected: expected,
            cost_model: model,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One signal operation, as named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operation {
    Add,
    Invert,
    Delay(u64),
    Reverse,
    RestrictedReverse(TimeRestriction),
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Add => f.write_str("add"),
            Operation::Invert => f.write_str("invert"),
            Operation::Delay(dt) => write!(f, "delay:{dt}"),
            Operation::Reverse => f.write_str("reverse"),
            Operation::RestrictedReverse(r) => write!(f, "restricted-reverse:{r}"),
        }
    }
}

impl FromStr for Operation {
    type Err = FrqaError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        match (name, arg) {
            ("add", _) => Ok(Operation::Add),
            ("invert", None) => Ok(Operation::Invert),
            ("reverse", None) => Ok(Operation::Reverse),
            ("delay", Some(a)) => a
                .trim()
                .parse()
                .map(Operation::Delay)
                .map_err(|_| FrqaError::Parse(format!("bad delay amount {a:?}"))),
            ("restricted-reverse", a) => Ok(Operation::RestrictedReverse(TimeRestriction::parse(
                a.unwrap_or(""),
            )?)),
            _ => Err(FrqaError::Parse(format!(
                "unknown operation {s:?} (expected add, invert, delay:N, reverse, restricted-reverse:P=V,...)"
            ))),
        }
    }
}

/// Builds the operation's circuit at (q, l) and compares its cost with the
/// closed-form figure.
pub fn cost_report(op: &Operation, q: usize, l: usize, model: CostModel) -> Result<(Circuit, CostReport)> {
    let (qq, ll) = (q as u64, l as u64);
    Ok(match op {
        Operation::Add => {
            let c = build_addition_circuit(q, l, AdditionOptions::default())?;
            let comparator = cnot_cost(&build_comparator(l)?.census());
            let adder = cnot_cost(&controlled_adder_census(q)?);
            let ext = 2 * crate::gates::mcx_cost(3);
            let r = CostReport::new(
                op.to_string(),
                "24l^2+6l+248q",
                formulas::addition(ll, qq) as i64,
                c.census(),
                model,
            )
            .with_note(format!(
                "comparator measured {comparator}, priced {}",
                formulas::comparator(ll)
            ))
            .with_note(format!(
                "sign extension measured {ext} (two 3-controlled NOTs), priced {}",
                formulas::EXTENSION
            ))
            .with_note(format!(
                "controlled adder measured {adder}, formula {}",
                formulas::controlled_adder(qq)
            ));
            (c, r)
        }
        Operation::Invert => {
            let c = build_inversion_circuit(q)?;
            let r = CostReport::new(
                op.to_string(),
                "7q-6",
                formulas::inversion(qq) as i64,
                c.census(),
                model,
            )
            .with_note("carry chain left dirty; the clean variant adds q-1 Toffoli gates");
            (c, r)
        }
        Operation::Delay(dt) => {
            let c = build_delay_circuit(l, q, *dt)?;
            let r = CostReport::new(
                op.to_string(),
                "28l+12q-12",
                formulas::delay(ll, qq) as i64,
                c.census(),
                model,
            );
            (c, r)
        }
        Operation::Reverse => {
            let c = build_reversal_circuit(l)?;
            let r = CostReport::new(op.to_string(), "0", 0, c.census(), model);
            (c, r)
        }
        Operation::RestrictedReverse(fixed) => {
            let c = build_restricted_reversal_circuit(l, fixed)?;
            let mut r = CostReport::new(
                op.to_string(),
                "12l-23",
                formulas::restricted_reversal_worst(ll),
                c.census(),
                model,
            );
            if fixed.len() + 1 != l {
                r = r.with_note("formula is the worst case with l-1 fixed bits");
            }
            if l == 3 {
                r = r.with_note("at l=3 the worst case is a Toffoli, priced 6");
            }
            (c, r)
        }
    })
}

/// Preparation cost of `signal` (padded) against the closed-form bound.
pub fn preparation_report(signal: &AudioSignal, model: CostModel) -> Result<(Circuit, CostReport)> {
    let padded = crate::audio::pad_to_power_of_two(signal);
    let c = build_preparation_circuit(&padded)?;
    let r = CostReport::new(
        "prepare",
        "(12l+q-12)*2^l",
        formulas::preparation(padded.l() as u64, padded.q() as u64) as i64,
        c.census(),
        model,
    )
    .with_note("upper bound; equal when every resolution value is all ones");
    Ok((c, r))
}
