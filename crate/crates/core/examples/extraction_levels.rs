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

//! Mean two-qubit counts of plain extraction at each level on the three
//! standard datasets.
//!
//! ```text
//! cargo run --release --example extraction_levels -- 100
//! ```

use zxopt::bench::DatasetSpec;
use zxopt::extract::{basic_optimization, extract_at_level};
use zxopt::zx::circuit_to_diagram;

fn main() {
    let count: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let sets = [
        ("i", DatasetSpec::dataset_i(count, 1)),
        ("ii", DatasetSpec::dataset_ii(count, 2)),
        ("iii", DatasetSpec::dataset_iii(count, 3)),
    ];
    for (name, spec) in sets {
        let circuits = spec.generate().expect("dataset");
        let input: f64 = circuits.iter().map(|c| c.two_qubit_count() as f64).sum::<f64>() / count as f64;
        print!("dataset {name:>3}: input {input:6.2}");
        for level in 1..=5 {
            let mut total = 0.0;
            let mut failed = 0;
            for c in &circuits {
                match extract_at_level(&circuit_to_diagram(c), level) {
                    Ok(out) => total += basic_optimization(&out).two_qubit_count() as f64,
                    Err(_) => failed += 1,
                }
            }
            print!("  L{level} {:6.2}", total / (count - failed).max(1) as f64);
            if failed > 0 {
                print!(" ({failed} failed)");
            }
        }
        println!();
    }
}
