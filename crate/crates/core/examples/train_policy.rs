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

//! Short training run on small circuits, printing the curve.
//!
//! ```text
//! cargo run --release --example train_policy -- 4096
//! ```

use zxopt::policy::{train, Hyperparams, TrainConfig};

fn main() {
    let steps: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2048);
    let cfg = TrainConfig {
        hyper: Hyperparams { total_steps: steps, budget: 32, ..Hyperparams::default() },
        width: 4,
        gates: 40,
        seed: 3,
        ..TrainConfig::default()
    };
    println!("update  step  episodes  reward   entropy  value_loss");
    let out = train(&cfg, None, |_| Ok(()), |r| {
        let reward = r.mean_reward.map_or("-".to_string(), |x| format!("{x:.4}"));
        println!("{:>6} {:>5} {:>9}  {reward:>7}  {:.4}   {:.5}", r.update, r.step, r.episodes, r.entropy, r.value_loss);
    })
    .expect("training");
    if let Some((a, b)) = zxopt::policy::train::reward_improvement(&out.episodes, 0.1) {
        println!("episode reward, first 10%: {a:.4}, last 10%: {b:.4}");
    }
}
