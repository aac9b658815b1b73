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

//! Run one search episode with the uniform policy and print its trace.
//!
//! ```text
//! cargo run --release --example search_episode
//! ```

use zxopt::bench::{random_circuit, GateRatios};
use zxopt::policy::PolicyParams;
use zxopt::search::{run_episode, run_with_restarts, SearchSettings};

fn main() {
    let c = random_circuit(5, 80, &GateRatios::mixed(), 11).expect("circuit");
    let settings = SearchSettings { budget: 32, ..SearchSettings::default() };
    let policy = PolicyParams::zeros();
    let (tree, steps, trace) = run_episode(&c, &policy, &settings, 1).expect("episode");
    for t in trace.iter().take(12) {
        println!("{}", serde_json::to_string(t).expect("json"));
    }
    let total: f64 = steps.iter().map(|s| s.reward).sum();
    println!(
        "input {} two-qubit, root {}, best {} after {} nodes; summed reward {total:.4} = tree reward {:.4}",
        c.two_qubit_count(),
        tree.root().cnot_count,
        tree.best_node().cnot_count,
        tree.len(),
        tree.tree_reward()
    );
    let out = run_with_restarts(&c, &policy, &settings, 1).expect("search");
    println!("with {} restarts: best per episode {:?}", settings.restarts, out.history);
}
