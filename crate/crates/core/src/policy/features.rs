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

//! Per-node feature vector: eight circuit and graph counts, each also divided
//! by the gate count and by the qubit count.

use crate::zx::{Circuit, Diagram};

pub const BASE_FEATURES: usize = 8;
pub const FEATURES: usize = 3 * BASE_FEATURES;

pub type Features = [f64; FEATURES];

pub const FEATURE_NAMES: [&str; BASE_FEATURES] =
    ["gates", "t_gates", "clifford_gates", "two_qubit_gates", "hadamard_gates", "depth", "depth_cz", "graph_edges"];

/// Features of a node with extracted circuit `c` and diagram `d`. Ratios with
/// a zero denominator are 0.
pub fn featurize(c: &Circuit, d: &Diagram) -> Features {
    let s = c.stats();
    let base = [
        s.gate_count,
        s.t_count,
        s.clifford_count,
        s.two_qubit_count,
        s.h_count,
        s.depth,
        s.depth_cz,
        d.num_edges(),
    ]
    .map(|x| x as f64);
    let ratio = |x: f64, den: usize| if den == 0 { 0.0 } else { x / den as f64 };
    let mut f = [0.0; FEATURES];
    for (i, &x) in base.iter().enumerate() {
        f[i] = x;
        f[BASE_FEATURES + i] = ratio(x, s.gate_count);
        f[2 * BASE_FEATURES + i] = ratio(x, c.width);
    }
    f
}
