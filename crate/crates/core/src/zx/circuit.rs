// Copyright 2026 The zxopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Gate-list circuits and their plain-text format.
//!
//! The text format is line oriented:
//!
//! ```text
//! # comment lines and blank lines are ignored
//! qubits 3
//! cnot 0 1      # control, target
//! cz 1 2
//! h 0
//! rz 2 1/4      # phase as a reduced fraction of pi
//! rx 1 3/2
//! swap 0 2
//! ```
//!
//! The `qubits N` header must be the first non-comment line. Qubit 0 is the
//! least significant bit of a computational basis index everywhere in this
//! crate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::phase::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    H(usize),
    Rz(usize, Phase),
    Rx(usize, Phase),
    Swap(usize, usize),
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz(a, b) | Gate::Swap(a, b) => vec![a, b],
            Gate::H(q) | Gate::Rz(q, _) | Gate::Rx(q, _) => vec![q],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. } | Gate::Cz(..) | Gate::Swap(..))
    }

    /// Contribution to the two-qubit gate count; a SWAP costs three CNOTs.
    pub fn two_qubit_cost(&self) -> usize {
        match self {
            Gate::Swap(..) => 3,
            Gate::Cnot { .. } | Gate::Cz(..) => 1,
            _ => 0,
        }
    }

    /// Apply a qubit relabeling `q -> map[q]`.
    pub fn relabeled(&self, map: &[usize]) -> Gate {
        match *self {
            Gate::Cnot { control, target } => Gate::cnot(map[control], map[target]),
            Gate::Cz(a, b) => Gate::Cz(map[a], map[b]),
            Gate::Swap(a, b) => Gate::Swap(map[a], map[b]),
            Gate::H(q) => Gate::H(map[q]),
            Gate::Rz(q, p) => Gate::Rz(map[q], p),
            Gate::Rx(q, p) => Gate::Rx(map[q], p),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cnot { control, target } => write!(f, "cnot {control} {target}"),
            Gate::Cz(a, b) => write!(f, "cz {a} {b}"),
            Gate::H(q) => write!(f, "h {q}"),
            Gate::Rz(q, p) => write!(f, "rz {q} {p}"),
            Gate::Rx(q, p) => write!(f, "rx {q} {p}"),
            Gate::Swap(a, b) => write!(f, "swap {a} {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("gate `{gate}` at index {index} uses qubit {qubit} but the circuit has {width} qubits")]
    QubitOutOfRange { index: usize, gate: Gate, qubit: usize, width: usize },
    #[error("gate `{gate}` at index {index} repeats a qubit operand")]
    RepeatedOperand { index: usize, gate: Gate },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circuit {
    pub width: usize,
    pub gates: Vec<Gate>,
}

/// Gate statistics used for reporting and as policy features.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub gate_count: usize,
    pub t_count: usize,
    pub clifford_count: usize,
    /// CNOT and CZ count 1, SWAP counts 3.
    pub two_qubit_count: usize,
    pub h_count: usize,
    pub depth: usize,
    /// Depth counting only two-qubit gates.
    pub depth_cz: usize,
}

impl Circuit {
    pub fn new(width: usize) -> Circuit {
        Circuit { width, gates: Vec::new() }
    }

    pub fn with_gates(width: usize, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        let c = Circuit { width, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (index, gate) in self.gates.iter().enumerate() {
            let qs = gate.qubits();
            if let Some(&qubit) = qs.iter().find(|&&q| q >= self.width) {
                return Err(CircuitError::QubitOutOfRange {
                    index,
                    gate: *gate,
                    qubit,
                    width: self.width,
                });
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(CircuitError::RepeatedOperand { index, gate: *gate });
            }
        }
        Ok(())
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().map(Gate::two_qubit_cost).sum()
    }

    pub fn is_pure_cnot(&self) -> bool {
        self.gates.iter().all(|g| matches!(g, Gate::Cnot { .. }))
    }

    pub fn stats(&self) -> CircuitStats {
        let mut s = CircuitStats { gate_count: self.gates.len(), ..Default::default() };
        let mut level = vec![0usize; self.width];
        let mut level_cz = vec![0usize; self.width];
        for g in &self.gates {
            match g {
                Gate::Rz(_, p) | Gate::Rx(_, p) => {
                    if p.is_t() {
                        s.t_count += 1;
                    } else if p.is_clifford() {
                        s.clifford_count += 1;
                    }
                }
                Gate::H(_) => {
                    s.h_count += 1;
                    s.clifford_count += 1;
                }
                _ => s.clifford_count += 1,
            }
            s.two_qubit_count += g.two_qubit_cost();
            let qs = g.qubits();
            let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            let lc = qs.iter().map(|&q| level_cz[q]).max().unwrap_or(0)
                + usize::from(g.is_two_qubit());
            for &q in &qs {
                level[q] = l;
                level_cz[q] = lc;
            }
        }
        s.depth = level.into_iter().max().unwrap_or(0);
        s.depth_cz = level_cz.into_iter().max().unwrap_or(0);
        s
    }

    /// Circuit with every gate inverted, in reverse order.
    pub fn adjoint(&self) -> Circuit {
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| match *g {
                Gate::Rz(q, p) => Gate::Rz(q, -p),
                Gate::Rx(q, p) => Gate::Rx(q, -p),
                other => other,
            })
            .collect();
        Circuit { width: self.width, gates }
    }

    /// Serialize to the text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.width);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Circuit, CircuitError> {
        let mut width: Option<usize> = None;
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| CircuitError::Parse { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let qubit = |t: &str| -> Result<usize, CircuitError> {
                t.parse::<usize>().map_err(|_| err(format!("bad qubit index `{t}`")))
            };
            let arity = |n: usize| -> Result<(), CircuitError> {
                if toks.len() != n + 1 {
                    Err(err(format!("`{}` expects {} operands, got {}", toks[0], n, toks.len() - 1)))
                } else {
                    Ok(())
                }
            };
            let Some(w) = width else {
                if toks[0] != "qubits" {
                    return Err(err(format!("expected `qubits N` header, found `{line}`")));
                }
                arity(1)?;
                width = Some(qubit(toks[1])?);
                continue;
            };
            let gate = match toks[0] {
                "cnot" => {
                    arity(2)?;
                    Gate::cnot(qubit(toks[1])?, qubit(toks[2])?)
                }
                "cz" => {
                    arity(2)?;
                    Gate::Cz(qubit(toks[1])?, qubit(toks[2])?)
                }
                "swap" => {
                    arity(2)?;
                    Gate::Swap(qubit(toks[1])?, qubit(toks[2])?)
                }
                "h" => {
                    arity(1)?;
                    Gate::H(qubit(toks[1])?)
                }
                "rz" | "rx" => {
                    arity(2)?;
                    let q = qubit(toks[1])?;
                    let p = Phase::from_str(toks[2]).map_err(|e| err(e.to_string()))?;
                    if toks[0] == "rz" {
                        Gate::Rz(q, p)
                    } else {
                        Gate::Rx(q, p)
                    }
                }
                "qubits" => return Err(err("duplicate `qubits` header".into())),
                other => return Err(err(format!("unknown gate `{other}`"))),
            };
            let c = Circuit { width: w, gates: vec![gate] };
            c.validate().map_err(|e| err(e.to_string()))?;
            gates.push(gate);
        }
        let width = width.ok_or(CircuitError::Parse { line: 0, message: "missing `qubits N` header".into() })?;
        Ok(Circuit { width, gates })
    }
}

impl FromStr for Circuit {
    type Err = CircuitError;
    fn from_str(s: &str) -> Result<Circuit, CircuitError> {
        Circuit::from_text(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_pure_cnot() {
        let gates = (0..80).map(|i| Gate::cnot(i % 4, (i + 1) % 4)).collect();
        let s = Circuit { width: 4, gates }.stats();
        assert_eq!(s.two_qubit_count, 80);
        assert_eq!(s.t_count, 0);
        assert_eq!(s.h_count, 0);
        assert_eq!(s.clifford_count, 80);
    }

    #[test]
    fn stats_t_gate() {
        let s = Circuit { width: 1, gates: vec![Gate::Rz(0, Phase::QUARTER_PI)] }.stats();
        assert_eq!((s.t_count, s.clifford_count), (1, 0));
    }

    #[test]
    fn stats_parallel_depth() {
        let c = Circuit { width: 4, gates: vec![Gate::cnot(0, 1), Gate::cnot(2, 3)] };
        let s = c.stats();
        assert_eq!((s.depth, s.two_qubit_count, s.depth_cz), (1, 2, 1));
        let c = Circuit {
            width: 2,
            gates: vec![Gate::H(0), Gate::cnot(0, 1), Gate::H(1), Gate::Swap(0, 1)],
        };
        let s = c.stats();
        assert_eq!((s.depth, s.depth_cz, s.two_qubit_count), (4, 2, 4));
    }

    #[test]
    fn text_round_trip() {
        let c = Circuit {
            width: 3,
            gates: vec![
                Gate::cnot(0, 1),
                Gate::Cz(1, 2),
                Gate::H(0),
                Gate::Rz(2, Phase::new(1, 4)),
                Gate::Rx(1, Phase::new(3, 2)),
                Gate::Swap(0, 2),
            ],
        };
        let text = c.to_text();
        let back = Circuit::from_text(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.stats().two_qubit_count, c.stats().two_qubit_count);
    }

    #[test]
    fn parser_errors_carry_line_numbers() {
        let e = Circuit::from_text("qubits 2\n\n# hi\nfoo 1\n").unwrap_err();
        assert_eq!(e, CircuitError::Parse { line: 4, message: "unknown gate `foo`".into() });
        let e = Circuit::from_text("qubits 2\ncnot 0 2\n").unwrap_err();
        assert!(matches!(e, CircuitError::Parse { line: 2, .. }));
        let e = Circuit::from_text("cnot 0 1\n").unwrap_err();
        assert!(matches!(e, CircuitError::Parse { line: 1, .. }));
        let e = Circuit::from_text("qubits 2\ncz 1 1\n").unwrap_err();
        assert!(matches!(e, CircuitError::Parse { line: 2, .. }));
        let e = Circuit::from_text("qubits 2\nrz 0 1/x\n").unwrap_err();
        assert!(matches!(e, CircuitError::Parse { line: 2, .. }));
        assert!(Circuit::from_text("").is_err());
    }
}
