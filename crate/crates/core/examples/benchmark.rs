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

//! Benchmark table on a slice of dataset (ii), written as CSV to stdout.
//!
//! ```text
//! cargo run --release --example benchmark -- 20
//! ```

use zxopt::bench::{parse_methods, run_benchmark, write_csv, BenchConfig, DatasetSpec};
use zxopt::search::SearchSettings;

fn main() {
    let count: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let methods = parse_methods("level-1..4,full-simplify,rl-agent,brute-force").expect("methods");
    let cfg = BenchConfig {
        dataset: DatasetSpec::dataset_ii(count, 2),
        methods: methods.clone(),
        search: SearchSettings { budget: 32, restarts: 1, ..SearchSettings::default() },
        params: None,
        timing: false,
    };
    let rows = run_benchmark(&cfg).expect("benchmark");
    write_csv(&rows, &methods, std::io::stdout()).expect("csv");
}
