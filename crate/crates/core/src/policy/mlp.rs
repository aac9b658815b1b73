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

//! The node scorer: 24 inputs, two tanh layers of 64, a weight head and a
//! value head. Parameters live in one flat vector so the optimizer and
//! checkpoints can treat them uniformly.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::features::{Features, BASE_FEATURES, FEATURES};
use crate::seed;

pub const HIDDEN: usize = 64;

const W1: usize = 0;
const B1: usize = W1 + HIDDEN * FEATURES;
const W2: usize = B1 + HIDDEN;
const B2: usize = W2 + HIDDEN * HIDDEN;
const W3: usize = B2 + HIDDEN;
const B3: usize = W3 + 2 * HIDDEN;
pub const NUM_PARAMS: usize = B3 + 2;

/// Fixed input scaling: raw counts by 1/100, per-gate ratios as is, per-qubit
/// ratios by 1/10. Not trained.
pub fn default_input_scale() -> Vec<f64> {
    let mut s = vec![0.01; BASE_FEATURES];
    s.extend([1.0; BASE_FEATURES]);
    s.extend([0.1; BASE_FEATURES]);
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyParams {
    pub input_scale: Vec<f64>,
    pub theta: Vec<f64>,
}

/// Activations kept for the backward pass.
#[derive(Clone, Debug)]
pub struct Cache {
    x: [f64; FEATURES],
    h1: [f64; HIDDEN],
    h2: [f64; HIDDEN],
}

impl PolicyParams {
    /// All-zero network: every node gets weight 0 and value 0, so node
    /// selection is uniform.
    pub fn zeros() -> PolicyParams {
        PolicyParams { input_scale: default_input_scale(), theta: vec![0.0; NUM_PARAMS] }
    }

    /// Gaussian init scaled by fan-in; the weight head starts near zero so the
    /// first policy is close to uniform.
    pub fn init(seed_value: u64) -> PolicyParams {
        let mut rng = seed::rng(seed::derive(seed_value, "policy-init", 0));
        let mut theta = vec![0.0; NUM_PARAMS];
        let mut fill = |range: std::ops::Range<usize>, std: f64| {
            for t in &mut theta[range] {
                *t = std * rng.sample::<f64, _>(StandardNormal);
            }
        };
        fill(W1..B1, (2.0 / FEATURES as f64).sqrt());
        fill(W2..B2, (2.0 / HIDDEN as f64).sqrt());
        fill(W3..W3 + HIDDEN, 0.01);
        fill(W3 + HIDDEN..B3, 1.0 / (HIDDEN as f64).sqrt());
        PolicyParams { input_scale: default_input_scale(), theta }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.theta.len() != NUM_PARAMS {
            return Err(format!("expected {NUM_PARAMS} parameters, got {}", self.theta.len()));
        }
        if self.input_scale.len() != FEATURES {
            return Err(format!("expected {FEATURES} input scales, got {}", self.input_scale.len()));
        }
        if self.theta.iter().chain(&self.input_scale).any(|x| !x.is_finite()) {
            return Err("non-finite parameter".into());
        }
        Ok(())
    }

    /// `(W, V)` for one node, plus the activations.
    pub fn forward_cached(&self, f: &Features) -> ((f64, f64), Cache) {
        let t = &self.theta;
        let mut x = [0.0; FEATURES];
        for i in 0..FEATURES {
            x[i] = f[i] * self.input_scale[i];
        }
        let mut h1 = [0.0; HIDDEN];
        for j in 0..HIDDEN {
            let row = &t[W1 + j * FEATURES..W1 + (j + 1) * FEATURES];
            h1[j] = (t[B1 + j] + dot(row, &x)).tanh();
        }
        let mut h2 = [0.0; HIDDEN];
        for j in 0..HIDDEN {
            let row = &t[W2 + j * HIDDEN..W2 + (j + 1) * HIDDEN];
            h2[j] = (t[B2 + j] + dot(row, &h1)).tanh();
        }
        let w = t[B3] + dot(&t[W3..W3 + HIDDEN], &h2);
        let v = t[B3 + 1] + dot(&t[W3 + HIDDEN..B3], &h2);
        ((w, v), Cache { x, h1, h2 })
    }

    pub fn forward(&self, f: &Features) -> (f64, f64) {
        self.forward_cached(f).0
    }

    pub fn forward_batch(&self, fs: &[Features]) -> Vec<(f64, f64)> {
        fs.iter().map(|f| self.forward(f)).collect()
    }

    /// Add `dL/dθ` into `grad` given `dL/dW` and `dL/dV` for one node.
    pub fn backward(&self, cache: &Cache, gw: f64, gv: f64, grad: &mut [f64]) {
        if gw == 0.0 && gv == 0.0 {
            return;
        }
        let t = &self.theta;
        grad[B3] += gw;
        grad[B3 + 1] += gv;
        let mut g2 = [0.0; HIDDEN];
        for j in 0..HIDDEN {
            grad[W3 + j] += gw * cache.h2[j];
            grad[W3 + HIDDEN + j] += gv * cache.h2[j];
            g2[j] = (gw * t[W3 + j] + gv * t[W3 + HIDDEN + j]) * (1.0 - cache.h2[j] * cache.h2[j]);
        }
        let mut g1 = [0.0; HIDDEN];
        for j in 0..HIDDEN {
            if g2[j] == 0.0 {
                continue;
            }
            grad[B2 + j] += g2[j];
            let base = W2 + j * HIDDEN;
            for k in 0..HIDDEN {
                grad[base + k] += g2[j] * cache.h1[k];
                g1[k] += g2[j] * t[base + k];
            }
        }
        for k in 0..HIDDEN {
            let g = g1[k] * (1.0 - cache.h1[k] * cache.h1[k]);
            if g == 0.0 {
                continue;
            }
            grad[B1 + k] += g;
            let base = W1 + k * FEATURES;
            for i in 0..FEATURES {
                grad[base + i] += g * cache.x[i];
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
