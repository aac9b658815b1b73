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

//! Peephole optimization: partition a wide circuit into narrow blocks,
//! search on each block, and stitch the results back together.
//!
//! ```text
//! cargo run --release --example peephole
//! ```

use zxopt::bench::{assemble_circuit, partition_circuit, AssembleSpec, GateRatios};
use zxopt::optimize::{optimize_circuit, verify_equal, PeepholeMode};
use zxopt::policy::PolicyParams;
use zxopt::search::SearchSettings;

fn main() {
    let settings = SearchSettings { budget: 16, restarts: 1, ..SearchSettings::default() };
    let policy = PolicyParams::zeros();

    let small = AssembleSpec { width: 8, total_gates: 200, block_width: 5, block_gates: 50 };
    let c = assemble_circuit(&small, &GateRatios::mixed(), 4).expect("circuit");
    let p = partition_circuit(&c, 5);
    println!("8 qubits: {} blocks, widths {:?}", p.blocks.len(), p.blocks.iter().map(|b| b.qubits.len()).collect::<Vec<_>>());
    let out = optimize_circuit(&c, &policy, &settings, PeepholeMode::On, 5, 1).expect("optimize");
    let ok = verify_equal(&c, &out.circuit).expect("tensor");
    println!("  two-qubit {} -> {}, verified {ok}", out.input_count, out.output_count);

    let wide = assemble_circuit(&AssembleSpec::default(), &GateRatios::cnot_only(), 4).expect("circuit");
    let out = optimize_circuit(&wide, &policy, &settings, PeepholeMode::Auto, 5, 1).expect("optimize");
    println!("50 qubits: {} blocks ({} improved), two-qubit {} -> {}", out.blocks, out.improved, out.input_count, out.output_count);
}
