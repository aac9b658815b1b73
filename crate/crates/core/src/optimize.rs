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

//! Whole-circuit and peephole optimization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::{partition_circuit, reassemble, PermutationMode};
use crate::search::{run_with_restarts, Scorer, SearchError, SearchSettings};
use crate::seed;
use crate::zx::{circuit_to_unitary, equal_up_to_scalar, Circuit, TensorError};

/// Widest circuit whose unitary is checked densely.
pub const MAX_VERIFY_WIDTH: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PeepholeMode {
    /// Partition only above [`MAX_VERIFY_WIDTH`] qubits.
    Auto,
    On,
    Off,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOutcome {
    pub circuit: Circuit,
    pub input_count: usize,
    pub output_count: usize,
    pub blocks: usize,
    /// Blocks (or the whole circuit) where search beat the input.
    pub improved: usize,
}

/// Search on one circuit, keeping the input when search does not beat it.
fn optimize_piece(c: &Circuit, scorer: &dyn Scorer, settings: &SearchSettings, seed_value: u64) -> Result<(Circuit, bool), SearchError> {
    if c.two_qubit_count() == 0 {
        return Ok((c.clone(), false));
    }
    let out = run_with_restarts(c, scorer, settings, seed_value)?;
    if out.best_count < c.two_qubit_count() {
        Ok((out.best.circuit, true))
    } else {
        Ok((c.clone(), false))
    }
}

/// Optimize `c`, partitioning into blocks of `block_width` qubits when the
/// mode asks for it.
pub fn optimize_circuit(
    c: &Circuit,
    scorer: &dyn Scorer,
    settings: &SearchSettings,
    mode: PeepholeMode,
    block_width: usize,
    seed_value: u64,
) -> Result<OptimizeOutcome, SearchError> {
    let partitioned = match mode {
        PeepholeMode::Auto => c.width > MAX_VERIFY_WIDTH,
        PeepholeMode::On => true,
        PeepholeMode::Off => false,
    };
    let input_count = c.two_qubit_count();
    if !partitioned {
        let (circuit, improved) = optimize_piece(c, scorer, settings, seed::derive(seed_value, "whole", 0))?;
        let output_count = circuit.two_qubit_count();
        return Ok(OptimizeOutcome { circuit, input_count, output_count, blocks: 1, improved: usize::from(improved) });
    }
    let p = partition_circuit(c, block_width);
    let done: Vec<(Circuit, bool)> = p
        .blocks
        .par_iter()
        .enumerate()
        .map(|(i, b)| optimize_piece(&b.local_circuit(), scorer, settings, seed::derive(seed_value, "block", i as u64)))
        .collect::<Result<_, _>>()?;
    let improved = done.iter().filter(|d| d.1).count();
    let blocks: Vec<(Circuit, Vec<usize>)> = done.into_iter().map(|(b, _)| {
        let n = b.width;
        (b, (0..n).collect())
    }).collect();
    let (circuit, _) = reassemble(&p, &blocks, PermutationMode::Relabel).expect("blocks keep their widths");
    let output_count = circuit.two_qubit_count();
    Ok(OptimizeOutcome { circuit, input_count, output_count, blocks: p.blocks.len(), improved })
}

/// Dense check that `b` equals `a` up to a global scalar.
pub fn verify_equal(a: &Circuit, b: &Circuit) -> Result<bool, TensorError> {
    equal_up_to_scalar(&circuit_to_unitary(a)?, &circuit_to_unitary(b)?, 1e-9)
}
