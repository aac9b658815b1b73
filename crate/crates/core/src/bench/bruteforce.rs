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

//! Exact minimal CNOT counts for 4-qubit linear reversible maps.

pub use crate::zx::linear::{apply_cnot, mat_mul, CnotDistanceTable, IDENTITY, WIDTH};
use crate::zx::{Circuit, Gate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BruteForceError {
    #[error("gate {0} is not a CNOT")]
    NotPureCnot(String),
    #[error("brute force needs exactly {WIDTH} qubits, got {0}")]
    UnsupportedWidth(usize),
}

/// Linear map of a CNOT/SWAP circuit on four qubits.
pub fn circuit_matrix(c: &Circuit) -> Result<u16, BruteForceError> {
    if c.width != WIDTH {
        return Err(BruteForceError::UnsupportedWidth(c.width));
    }
    let mut m = IDENTITY;
    for g in &c.gates {
        match *g {
            Gate::Cnot { control, target } => m = apply_cnot(m, control, target),
            Gate::Swap(a, b) => {
                m = apply_cnot(apply_cnot(apply_cnot(m, a, b), b, a), a, b);
            }
            ref other => return Err(BruteForceError::NotPureCnot(other.to_string())),
        }
    }
    Ok(m)
}

/// Fewest CNOTs realizing the same linear map as `c`.
pub fn brute_force_cnot_count(c: &Circuit) -> Result<usize, BruteForceError> {
    let m = circuit_matrix(c)?;
    Ok(CnotDistanceTable::global().distance(m).expect("circuits are invertible") as usize)
}

/// Fewest CNOTs realizing the map of `c` followed by some permutation of the
/// output wires: the right bound for circuits whose SWAPs were stripped.
pub fn brute_force_cnot_count_up_to_permutation(c: &Circuit) -> Result<usize, BruteForceError> {
    let m = circuit_matrix(c)?;
    let t = CnotDistanceTable::global();
    let best = permutations4()
        .into_iter()
        .map(|p| {
            let mut x = 0u16;
            for (r, &src) in p.iter().enumerate() {
                x |= ((m >> (4 * src)) & 0xF) << (4 * r);
            }
            t.distance(x).expect("row permutation keeps invertibility")
        })
        .min()
        .expect("24 permutations");
    Ok(best as usize)
}

fn permutations4() -> Vec<[usize; WIDTH]> {
    let mut out = vec![];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a != b && a != c && b != c {
                    out.push([a, b, c, 6 - a - b - c]);
                }
            }
        }
    }
    out
}
