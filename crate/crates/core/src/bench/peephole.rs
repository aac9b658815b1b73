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

//! SWAP removal and the peephole partitioner.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::zx::{Circuit, Gate};

/// Drop every SWAP by relabeling the gates after it. Returns the circuit and
/// `perm`, where `perm[q]` is the wire that ends up holding what the original
/// circuit leaves on wire `q`.
pub fn remove_swaps(c: &Circuit) -> (Circuit, Vec<usize>) {
    let mut map: Vec<usize> = (0..c.width).collect();
    let mut out = Circuit::new(c.width);
    for g in &c.gates {
        match *g {
            Gate::Swap(a, b) => map.swap(a, b),
            ref other => out.push(other.relabeled(&map)),
        }
    }
    (out, map)
}

/// SWAPs that move the content of wire `perm[q]` to wire `q` for every `q`.
pub fn permutation_swaps(perm: &[usize]) -> Vec<Gate> {
    let mut at = perm.to_vec();
    let mut gates = vec![];
    for q in 0..at.len() {
        let w = at[q];
        if w != q {
            gates.push(Gate::Swap(w, q));
            // whatever sat on q now sits on w
            for x in at.iter_mut().skip(q + 1) {
                if *x == q {
                    *x = w;
                }
            }
            at[q] = q;
        }
    }
    gates
}

/// Undo a recorded output permutation with explicit SWAPs.
pub fn restore_permutation(c: &Circuit, perm: &[usize]) -> Circuit {
    let mut out = c.clone();
    out.gates.extend(permutation_swaps(perm));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    /// Sorted global qubits; local wire `i` is `qubits[i]`.
    pub qubits: Vec<usize>,
    /// Gates in global labels.
    pub gates: Vec<Gate>,
    /// Index of the block's first gate in the original circuit.
    pub position: usize,
}

impl Block {
    /// The block as a circuit on its own `qubits.len()` wires.
    pub fn local_circuit(&self) -> Circuit {
        let mut map = vec![usize::MAX; self.qubits.iter().max().map_or(0, |m| m + 1)];
        for (i, &q) in self.qubits.iter().enumerate() {
            map[q] = i;
        }
        Circuit { width: self.qubits.len(), gates: self.gates.iter().map(|g| g.relabeled(&map)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub width: usize,
    pub blocks: Vec<Block>,
}

/// Greedy single-scan partition into blocks of at most `k` qubits. A gate may
/// join a block only if no later block touches its qubits, so concatenating
/// the blocks keeps every pair of gates on a shared qubit in order.
pub fn partition_circuit(c: &Circuit, k: usize) -> Partition {
    let mut blocks: Vec<(BTreeSet<usize>, Block)> = vec![];
    for (i, g) in c.gates.iter().enumerate() {
        let qs = g.qubits();
        let fits = |s: &BTreeSet<usize>| s.iter().chain(&qs).collect::<BTreeSet<_>>().len() <= k;
        let mut chosen = None;
        for b in (0..blocks.len()).rev() {
            let touches = qs.iter().any(|q| blocks[b].0.contains(q));
            if fits(&blocks[b].0) && (touches || chosen.is_none()) {
                chosen = Some(b);
            }
            if touches {
                break;
            }
        }
        match chosen {
            Some(b) => {
                blocks[b].0.extend(&qs);
                blocks[b].1.gates.push(*g);
            }
            None => blocks.push((qs.iter().copied().collect(), Block { qubits: vec![], gates: vec![*g], position: i })),
        }
    }
    let blocks = blocks
        .into_iter()
        .map(|(s, mut b)| {
            b.qubits = s.into_iter().collect();
            b
        })
        .collect();
    Partition { width: c.width, blocks }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReassembleError {
    #[error("expected {expected} optimized blocks, got {got}")]
    BlockCount { expected: usize, got: usize },
    #[error("block {index}: optimized circuit has width {got}, block has {expected} qubits")]
    BlockMismatch { index: usize, expected: usize, got: usize },
}

/// How block output permutations are applied on reassembly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PermutationMode {
    /// Relabel later gates; the final permutation is returned.
    Relabel,
    /// Insert SWAPs after each block; the returned permutation is the identity.
    Swaps,
}

/// Stitch optimized blocks back together. Each entry is a block circuit on
/// local wires plus its output permutation (see [`remove_swaps`]).
pub fn reassemble(
    p: &Partition,
    optimized: &[(Circuit, Vec<usize>)],
    mode: PermutationMode,
) -> Result<(Circuit, Vec<usize>), ReassembleError> {
    if optimized.len() != p.blocks.len() {
        return Err(ReassembleError::BlockCount { expected: p.blocks.len(), got: optimized.len() });
    }
    let mut map: Vec<usize> = (0..p.width).collect();
    let mut out = Circuit::new(p.width);
    for (index, (b, (c, perm))) in p.blocks.iter().zip(optimized).enumerate() {
        let m = b.qubits.len();
        if c.width != m || perm.len() != m {
            return Err(ReassembleError::BlockMismatch { index, expected: m, got: c.width });
        }
        let wires: Vec<usize> = b.qubits.iter().map(|&q| map[q]).collect();
        out.gates.extend(c.gates.iter().map(|g| g.relabeled(&wires)));
        match mode {
            PermutationMode::Relabel => {
                for (q, &l) in b.qubits.iter().enumerate() {
                    map[l] = wires[perm[q]];
                }
            }
            PermutationMode::Swaps => out.gates.extend(permutation_swaps(perm).iter().map(|g| g.relabeled(&wires))),
        }
    }
    Ok((out, map))
}
