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

//! Circuit extraction from ZX diagrams.

mod frontier;
mod gates;
mod graphlike;

pub use graphlike::{level_bound, local_complement, pivot, simplify_level, to_graph_like, GraphLike, GraphLikeError};
pub use frontier::{extract_circuit, ExtractError};
pub use gates::basic_optimization;

use serde::{Deserialize, Serialize};

use crate::zx::{Circuit, Diagram};

/// Highest pre-processing level.
pub const MAX_LEVEL: u8 = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub circuit: Circuit,
    pub level_used: u8,
    /// `output_permutation[q]` is the wire carrying logical qubit `q` at the
    /// end of `circuit`. Identity unless swaps were stripped.
    pub output_permutation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("extraction failed at every level: {last}")]
pub struct ExtractionFailed {
    pub last: ExtractError,
}

/// Extract with the lowest level that works.
pub fn extract_with_levels(d: &Diagram) -> Result<ExtractionResult, ExtractionFailed> {
    extract_with_levels_up_to(d, MAX_LEVEL)
}

/// Like [`extract_with_levels`], trying levels `1..=cap` only.
pub fn extract_with_levels_up_to(d: &Diagram, cap: u8) -> Result<ExtractionResult, ExtractionFailed> {
    let g = to_graph_like(d);
    let mut last = ExtractError::Stuck { remaining: g.spiders().count() };
    for level in 1..=cap.min(MAX_LEVEL) {
        match extract_simplified(simplify_level(&g, level), level) {
            Ok(circuit) => {
                log::trace!("extracted at level {level}: {} two-qubit gates", circuit.two_qubit_count());
                let output_permutation = (0..circuit.width).collect();
                return Ok(ExtractionResult { circuit, level_used: level, output_permutation });
            }
            Err(e) => {
                log::trace!("level {level} failed: {e}");
                last = e;
            }
        }
    }
    Err(ExtractionFailed { last })
}

/// Extract at exactly `level`.
pub fn extract_at_level(d: &Diagram, level: u8) -> Result<Circuit, ExtractError> {
    extract_simplified(simplify_level(&to_graph_like(d), level), level)
}

/// Extract and clean up. From level 4 on, boundary pivots are also tried
/// against the real extracted cost.
fn extract_simplified(mut g: GraphLike, level: u8) -> Result<Circuit, ExtractError> {
    let cost = |h: &GraphLike| extract_circuit(h).ok().map(|c| basic_optimization(&c).two_qubit_count());
    if level >= 4 {
        graphlike::reduce_boundary_by(&mut g, cost);
    }
    extract_circuit(&g).map(|c| basic_optimization(&c))
}
