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

//! Build the 4-qubit CNOT distance table and compare exact optima with
//! extraction on random pure-CNOT circuits.
//!
//! ```text
//! cargo run --release --example brute_force
//! ```

use zxopt::bench::{brute_force_cnot_count, brute_force_cnot_count_up_to_permutation, CnotDistanceTable, DatasetSpec};
use zxopt::bench::runner::mean_std;
use zxopt::extract::extract_at_level;
use zxopt::zx::circuit_to_diagram;

fn main() {
    let t = CnotDistanceTable::global();
    println!("invertible 4x4 matrices reached: {}, max distance {}", t.reachable(), t.max_distance());
    let circuits = DatasetSpec::dataset_ii(100, 2).generate().expect("dataset");
    let exact: Vec<f64> = circuits.iter().map(|c| brute_force_cnot_count(c).expect("pure cnot") as f64).collect();
    let perm: Vec<f64> = circuits.iter().map(|c| brute_force_cnot_count_up_to_permutation(c).expect("pure cnot") as f64).collect();
    let l4: Vec<f64> = circuits
        .iter()
        .map(|c| extract_at_level(&circuit_to_diagram(c), 4).expect("level 4").two_qubit_count() as f64)
        .collect();
    for (name, xs) in [("exact map", &exact), ("up to permutation", &perm), ("level-4 extraction", &l4)] {
        let (m, s) = mean_std(xs).expect("non-empty");
        println!("{name:<20} {m:.2} ± {s:.2}");
    }
}
