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

//! Random and assembled circuit generators.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::seed;
use crate::zx::{Circuit, Gate, Phase};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DatasetError {
    #[error("gate ratios must be nonnegative and sum to 1, got {0:?}")]
    BadRatios([f64; 4]),
    #[error("{0}")]
    BadShape(String),
}

/// Fractions of CNOT, H, RX and RZ gates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRatios {
    pub cnot: f64,
    pub h: f64,
    pub rx: f64,
    pub rz: f64,
}

impl GateRatios {
    pub fn new(cnot: f64, h: f64, rx: f64, rz: f64) -> Result<GateRatios, DatasetError> {
        let r = GateRatios { cnot, h, rx, rz };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let a = self.as_array();
        if a.iter().any(|x| !x.is_finite() || *x < 0.0) || (a.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(DatasetError::BadRatios(a));
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.cnot, self.h, self.rx, self.rz]
    }

    /// Dataset (i): 0.6/0.2/0.1/0.1.
    pub fn mixed() -> GateRatios {
        GateRatios { cnot: 0.6, h: 0.2, rx: 0.1, rz: 0.1 }
    }

    /// Dataset (ii): CNOT only.
    pub fn cnot_only() -> GateRatios {
        GateRatios { cnot: 1.0, h: 0.0, rx: 0.0, rz: 0.0 }
    }

    /// Dataset (iii): equal shares.
    pub fn uniform() -> GateRatios {
        GateRatios { cnot: 0.25, h: 0.25, rx: 0.25, rz: 0.25 }
    }

    /// Exact per-kind gate counts by largest remainder: each share is floored
    /// and the leftover gates go to the largest fractional parts (ties to the
    /// earlier kind).
    pub fn counts(&self, gates: usize) -> [usize; 4] {
        let exact = self.as_array().map(|r| r * gates as f64);
        let mut counts = exact.map(|x| x.floor() as usize);
        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&i, &j| (exact[j] - exact[j].floor()).total_cmp(&(exact[i] - exact[i].floor())).then(i.cmp(&j)));
        let left = gates.saturating_sub(counts.iter().sum());
        for &i in order.iter().take(left) {
            counts[i] += 1;
        }
        counts
    }
}

/// Dataset description: the three standard families differ only in ratios and width.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub ratios: GateRatios,
    pub width: usize,
    pub gates: usize,
    pub count: usize,
    pub seed: u64,
}

impl DatasetSpec {
    pub fn dataset_i(count: usize, seed: u64) -> DatasetSpec {
        DatasetSpec { ratios: GateRatios::mixed(), width: 5, gates: 80, count, seed }
    }

    pub fn dataset_ii(count: usize, seed: u64) -> DatasetSpec {
        DatasetSpec { ratios: GateRatios::cnot_only(), width: 4, gates: 80, count, seed }
    }

    pub fn dataset_iii(count: usize, seed: u64) -> DatasetSpec {
        DatasetSpec { ratios: GateRatios::uniform(), width: 5, gates: 80, count, seed }
    }

    /// Seed of circuit `i`.
    pub fn circuit_seed(&self, i: usize) -> u64 {
        seed::derive(self.seed, "dataset", i as u64)
    }

    pub fn generate(&self) -> Result<Vec<Circuit>, DatasetError> {
        (0..self.count).map(|i| random_circuit(self.width, self.gates, &self.ratios, self.circuit_seed(i))).collect()
    }
}

/// Random circuit with exact gate-kind counts in shuffled order. Rotation
/// angles are drawn uniformly from {kπ/4 : k = 1..7}.
pub fn random_circuit(width: usize, gates: usize, ratios: &GateRatios, seed: u64) -> Result<Circuit, DatasetError> {
    ratios.validate()?;
    let counts = ratios.counts(gates);
    if counts[0] > 0 && width < 2 {
        return Err(DatasetError::BadShape("CNOT gates need at least two qubits".into()));
    }
    if gates > 0 && width == 0 {
        return Err(DatasetError::BadShape("gates on a zero-width circuit".into()));
    }
    let mut rng = seed::rng(seed);
    let mut kinds: Vec<u8> = counts.iter().enumerate().flat_map(|(k, &n)| std::iter::repeat_n(k as u8, n)).collect();
    kinds.shuffle(&mut rng);
    let mut c = Circuit::new(width);
    for k in kinds {
        let g = match k {
            0 => {
                let a = rng.gen_range(0..width);
                let mut b = rng.gen_range(0..width - 1);
                if b >= a {
                    b += 1;
                }
                Gate::cnot(a, b)
            }
            1 => Gate::H(rng.gen_range(0..width)),
            2 => Gate::Rx(rng.gen_range(0..width), Phase::new(rng.gen_range(1..8), 4)),
            _ => Gate::Rz(rng.gen_range(0..width), Phase::new(rng.gen_range(1..8), 4)),
        };
        c.push(g);
    }
    Ok(c)
}

/// Shape of an assembled circuit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssembleSpec {
    pub width: usize,
    pub total_gates: usize,
    pub block_width: usize,
    pub block_gates: usize,
}

impl Default for AssembleSpec {
    fn default() -> Self {
        AssembleSpec { width: 50, total_gates: 2000, block_width: 5, block_gates: 50 }
    }
}

/// Wide circuit built from random blocks, each placed on a uniformly chosen
/// contiguous window of `block_width` qubits.
pub fn assemble_circuit(spec: &AssembleSpec, ratios: &GateRatios, seed: u64) -> Result<Circuit, DatasetError> {
    if spec.block_width > spec.width || spec.block_width == 0 || spec.block_gates == 0 {
        return Err(DatasetError::BadShape(format!("cannot place {}-qubit blocks on {} qubits", spec.block_width, spec.width)));
    }
    let mut rng = seed::rng(seed);
    let mut c = Circuit::new(spec.width);
    let mut i = 0u64;
    while c.len() < spec.total_gates {
        let n = spec.block_gates.min(spec.total_gates - c.len());
        let block = random_circuit(spec.block_width, n, ratios, seed::derive(seed, "block", i))?;
        let start = rng.gen_range(0..=spec.width - spec.block_width);
        let map: Vec<usize> = (start..start + spec.block_width).collect();
        c.gates.extend(block.gates.iter().map(|g| g.relabeled(&map)));
        i += 1;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_cnot_counts() {
        let c = random_circuit(4, 80, &GateRatios::cnot_only(), 1).unwrap();
        assert_eq!(c.len(), 80);
        assert!(c.is_pure_cnot());
        c.validate().unwrap();
    }

    #[test]
    fn mixed_counts_exact() {
        assert_eq!(GateRatios::mixed().counts(80), [48, 16, 8, 8]);
        let c = random_circuit(5, 80, &GateRatios::mixed(), 3).unwrap();
        let s = c.stats();
        assert_eq!(s.two_qubit_count, 48);
        assert_eq!(s.h_count, 16);
        assert_eq!(c.gates.iter().filter(|g| matches!(g, Gate::Rx(..))).count(), 8);
        assert_eq!(GateRatios::uniform().counts(80), [20, 20, 20, 20]);
    }

    #[test]
    fn counts_always_sum() {
        for g in 0..120 {
            for r in [GateRatios::mixed(), GateRatios::uniform(), GateRatios::cnot_only()] {
                assert_eq!(r.counts(g).iter().sum::<usize>(), g);
            }
        }
    }

    #[test]
    fn deterministic_and_validated() {
        let r = GateRatios::mixed();
        assert_eq!(random_circuit(5, 80, &r, 9).unwrap(), random_circuit(5, 80, &r, 9).unwrap());
        assert_ne!(random_circuit(5, 80, &r, 9).unwrap(), random_circuit(5, 80, &r, 10).unwrap());
        assert!(GateRatios::new(0.5, 0.5, 0.5, 0.0).is_err());
        assert!(random_circuit(1, 10, &GateRatios::cnot_only(), 0).is_err());
    }

    #[test]
    fn assembled_blocks() {
        let spec = AssembleSpec::default();
        let c = assemble_circuit(&spec, &GateRatios::cnot_only(), 4).unwrap();
        assert_eq!(c.len(), 2000);
        assert_eq!(spec.total_gates / spec.block_gates, 40);
        for block in c.gates.chunks(50) {
            let qs: Vec<usize> = block.iter().flat_map(|g| g.qubits()).collect();
            let (lo, hi) = (qs.iter().min().unwrap(), qs.iter().max().unwrap());
            assert!(hi - lo < 5);
        }
        assert_eq!(c, assemble_circuit(&spec, &GateRatios::cnot_only(), 4).unwrap());
    }
}
