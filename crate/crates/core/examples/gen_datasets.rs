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

//! Generate the three standard datasets and an assembled wide circuit,
//! printing gate statistics for each.
//!
//! ```text
//! cargo run --release --example gen_datasets
//! ```

use zxopt::bench::{assemble_circuit, AssembleSpec, DatasetSpec, GateRatios};

fn main() {
    for (name, spec) in [
        ("i", DatasetSpec::dataset_i(100, 1)),
        ("ii", DatasetSpec::dataset_ii(100, 2)),
        ("iii", DatasetSpec::dataset_iii(100, 3)),
    ] {
        let circuits = spec.generate().expect("dataset");
        let n = circuits.len() as f64;
        let stats: Vec<_> = circuits.iter().map(|c| c.stats()).collect();
        let mean = |f: &dyn Fn(&zxopt::zx::CircuitStats) -> usize| stats.iter().map(|s| f(s) as f64).sum::<f64>() / n;
        println!(
            "dataset {name:>3}: {} qubits, {} gates; mean two-qubit {:.1}, t {:.1}, h {:.1}, depth {:.1}",
            spec.width,
            spec.gates,
            mean(&|s| s.two_qubit_count),
            mean(&|s| s.t_count),
            mean(&|s| s.h_count),
            mean(&|s| s.depth),
        );
    }
    let wide = assemble_circuit(&AssembleSpec::default(), &GateRatios::cnot_only(), 9).expect("assembled");
    println!("assembled: {} qubits, {} gates, {} two-qubit", wide.width, wide.len(), wide.two_qubit_count());
    println!("\nfirst lines of dataset ii circuit 0:");
    let c = &DatasetSpec::dataset_ii(1, 2).generate().expect("dataset")[0];
    for line in c.to_text().lines().take(6) {
        println!("  {line}");
    }
}
