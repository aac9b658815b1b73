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

//! Apply every available rewrite to a small circuit's diagram and check that
//! the tensor is unchanged up to a scalar.
//!
//! ```text
//! cargo run --release --example rewrite_soundness
//! ```

use std::collections::BTreeMap;

use zxopt::rewrite::{apply_rewrite, enumerate_matches};
use zxopt::zx::{circuit_to_diagram, diagram_to_tensor, equal_up_to_scalar, Circuit};

fn main() {
    let c = Circuit::from_text("qubits 3\ncnot 0 1\nh 1\nrz 1 1/4\ncnot 1 2\nrx 2 1/2\ncz 0 2\n").expect("circuit");
    let d = circuit_to_diagram(&c);
    let reference = diagram_to_tensor(&d).expect("tensor");
    let mut tally: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for m in enumerate_matches(&d) {
        let out = apply_rewrite(&d, &m).expect("enumerated matches apply");
        let ok = equal_up_to_scalar(&reference, &diagram_to_tensor(&out).expect("tensor"), 1e-9).expect("shapes");
        let t = tally.entry(m.rule.name()).or_default();
        t.0 += 1;
        t.1 += usize::from(ok);
    }
    for (rule, (n, ok)) in &tally {
        println!("{rule:<15} {ok}/{n} sound");
    }
}
