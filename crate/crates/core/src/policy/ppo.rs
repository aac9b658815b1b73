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

//! Clipped-surrogate policy optimization with generalized advantage
//! estimation. Gradients are computed by hand in double precision.
//!
//! The selection logit of a candidate is the mean weight along its root path,
//! so a node's weight feeds the logits of all its candidate descendants. The
//! state value is the max of node values; its gradient flows to the argmax.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mlp::{PolicyParams, NUM_PARAMS};
use crate::search::{log_softmax, StepRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hyperparams {
    pub learning_rate: f64,
    pub gamma: f64,
    pub batch: usize,
    pub envs: usize,
    pub entropy_coef: f64,
    pub clip: f64,
    pub gae_lambda: f64,
    pub epochs: usize,
    pub rollout: usize,
    pub minibatches: usize,
    pub vf_coef: f64,
    pub max_grad_norm: f64,
    pub adam_eps: f64,
    pub anneal_lr: bool,
    pub norm_adv: bool,
    pub total_steps: usize,
    pub budget: usize,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            learning_rate: 3e-4,
            gamma: 0.99,
            batch: 128,
            envs: 8,
            entropy_coef: 1e-5,
            clip: 0.2,
            gae_lambda: 0.95,
            epochs: 4,
            rollout: 16,
            minibatches: 4,
            vf_coef: 0.5,
            max_grad_norm: 0.5,
            adam_eps: 1e-5,
            anneal_lr: true,
            norm_adv: true,
            total_steps: 50_000,
            budget: 128,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<(), String> {
        if self.envs * self.rollout != self.batch {
            return Err(format!("envs ({}) x rollout ({}) must equal batch ({})", self.envs, self.rollout, self.batch));
        }
        if self.minibatches == 0 || !self.batch.is_multiple_of(self.minibatches) {
            return Err(format!("batch {} is not divisible into {} minibatches", self.batch, self.minibatches));
        }
        let positive = [self.learning_rate, self.clip, self.max_grad_norm, self.adam_eps];
        if positive.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err("learning_rate, clip, max_grad_norm and adam_eps must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.gamma) || !(0.0..=1.0).contains(&self.gae_lambda) {
            return Err("gamma and gae_lambda must lie in [0, 1]".into());
        }
        if self.budget == 0 {
            return Err("budget must be positive".into());
        }
        Ok(())
    }
}

/// A step with its advantage and return target.
#[derive(Clone, Debug)]
pub struct Sample {
    pub step: StepRecord,
    pub advantage: f64,
    pub ret: f64,
}

/// Advantages and returns for one environment's consecutive steps.
/// `next_value` bootstraps the step after the last one unless it ended an
/// episode.
pub fn gae(steps: &[StepRecord], next_value: f64, gamma: f64, lambda: f64) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); steps.len()];
    let mut acc = 0.0;
    for t in (0..steps.len()).rev() {
        let nonterminal = if steps[t].done { 0.0 } else { 1.0 };
        let next = if t + 1 < steps.len() { steps[t + 1].value } else { next_value };
        let delta = steps[t].reward + gamma * next * nonterminal - steps[t].value;
        acc = delta + gamma * lambda * nonterminal * acc;
        out[t] = (acc, acc + steps[t].value);
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LossStats {
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub approx_kl: f64,
    pub clip_fraction: f64,
}

/// Per-candidate selection terms of one step under `params`.
struct Selection {
    log_probs: Vec<f64>,
    outputs: Vec<(f64, f64)>,
    paths: Vec<Vec<usize>>,
}

fn paths(parents: &[Option<usize>], candidates: &[usize]) -> Vec<Vec<usize>> {
    candidates
        .iter()
        .map(|&c| {
            let mut p = vec![c];
            let mut cur = c;
            while let Some(q) = parents[cur] {
                p.push(q);
                cur = q;
            }
            p
        })
        .collect()
}

fn select(s: &StepRecord, outputs: Vec<(f64, f64)>) -> Selection {
    let paths = paths(&s.parents, &s.candidates);
    let logits: Vec<f64> = paths.iter().map(|p| p.iter().map(|&u| outputs[u].0).sum::<f64>() / p.len() as f64).collect();
    Selection { log_probs: log_softmax(&logits), outputs, paths }
}

/// Log-probability of the recorded choice under `params`.
pub fn log_prob(params: &PolicyParams, s: &StepRecord) -> f64 {
    let outputs = params.forward_batch(&s.node_features);
    select(s, outputs).log_probs[s.chosen]
}

fn normalized_advantages(samples: &[Sample], normalize: bool) -> Vec<f64> {
    let a: Vec<f64> = samples.iter().map(|s| s.advantage).collect();
    if !normalize || a.len() < 2 {
        return a;
    }
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    let var = a.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (a.len() - 1) as f64;
    a.iter().map(|x| (x - mean) / (var.sqrt() + 1e-8)).collect()
}

/// Minibatch loss and its gradient with respect to `params.theta`.
pub fn loss_and_grad(params: &PolicyParams, samples: &[Sample], hyper: &Hyperparams) -> (f64, LossStats, Vec<f64>) {
    let adv = normalized_advantages(samples, hyper.norm_adv);
    let n = samples.len() as f64;
    let parts: Vec<(f64, LossStats, Vec<f64>)> = samples
        .par_iter()
        .zip(adv.par_iter())
        .map(|(sample, &a)| {
            let s = &sample.step;
            let fwd: Vec<_> = s.node_features.iter().map(|f| params.forward_cached(f)).collect();
            let outputs: Vec<(f64, f64)> = fwd.iter().map(|(o, _)| *o).collect();
            let sel = select(s, outputs);
            // the uniform match factor enters both sides of the ratio
            let lp = sel.log_probs[s.chosen] + s.match_log_prob;
            let ratio = (lp - (s.log_prob + s.match_log_prob)).exp();
            let clipped = ratio.clamp(1.0 - hyper.clip, 1.0 + hyper.clip);
            let (unclip_loss, clip_loss) = (-a * ratio, -a * clipped);
            let pg = unclip_loss.max(clip_loss);
            // gradient flows only through the unclipped branch when it is the max
            let dpg_dlp = if unclip_loss >= clip_loss { -a * ratio } else { 0.0 };
            let probs: Vec<f64> = sel.log_probs.iter().map(|l| l.exp()).collect();
            let entropy = -probs.iter().zip(&sel.log_probs).map(|(p, l)| p * l).sum::<f64>();
            let (argmax, v) = sel.outputs.iter().enumerate().fold((0, f64::NEG_INFINITY), |best, (i, o)| {
                if o.1 > best.1 {
                    (i, o.1)
                } else {
                    best
                }
            });
            let v_loss = 0.5 * (v - sample.ret).powi(2);
            let loss = (pg - hyper.entropy_coef * entropy + hyper.vf_coef * v_loss) / n;

            let mut gw = vec![0.0; fwd.len()];
            for (c, path) in sel.paths.iter().enumerate() {
                let onehot = if c == s.chosen { 1.0 } else { 0.0 };
                let dh = -probs[c] * (sel.log_probs[c] + entropy);
                let dz = (dpg_dlp * (onehot - probs[c]) - hyper.entropy_coef * dh) / n;
                for &u in path {
                    gw[u] += dz / path.len() as f64;
                }
            }
            let mut grad = vec![0.0; NUM_PARAMS];
            for (u, (_, cache)) in fwd.iter().enumerate() {
                let gv = if u == argmax { hyper.vf_coef * (v - sample.ret) / n } else { 0.0 };
                params.backward(cache, gw[u], gv, &mut grad);
            }
            let stats = LossStats {
                policy_loss: pg / n,
                value_loss: v_loss / n,
                entropy: entropy / n,
                approx_kl: ((ratio - 1.0) - ratio.ln()) / n,
                clip_fraction: if (ratio - 1.0).abs() > hyper.clip { 1.0 / n } else { 0.0 },
            };
            (loss, stats, grad)
        })
        .collect();
    let mut total = 0.0;
    let mut stats = LossStats::default();
    let mut grad = vec![0.0; NUM_PARAMS];
    for (l, st, g) in parts {
        total += l;
        stats.policy_loss += st.policy_loss;
        stats.value_loss += st.value_loss;
        stats.entropy += st.entropy;
        stats.approx_kl += st.approx_kl;
        stats.clip_fraction += st.clip_fraction;
        for (a, b) in grad.iter_mut().zip(g) {
            *a += b;
        }
    }
    (total, stats, grad)
}

/// Adam state over the flat parameter vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
}

impl Adam {
    pub fn new() -> Adam {
        Adam { m: vec![0.0; NUM_PARAMS], v: vec![0.0; NUM_PARAMS], t: 0 }
    }

    pub fn step(&mut self, theta: &mut [f64], grad: &[f64], lr: f64, eps: f64) {
        const B1: f64 = 0.9;
        const B2: f64 = 0.999;
        self.t += 1;
        let c1 = 1.0 - B1.powi(self.t as i32);
        let c2 = 1.0 - B2.powi(self.t as i32);
        for i in 0..theta.len() {
            self.m[i] = B1 * self.m[i] + (1.0 - B1) * grad[i];
            self.v[i] = B2 * self.v[i] + (1.0 - B2) * grad[i] * grad[i];
            theta[i] -= lr * (self.m[i] / c1) / ((self.v[i] / c2).sqrt() + eps);
        }
    }
}

impl Default for Adam {
    fn default() -> Self {
        Adam::new()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrainError {
    #[error("non-finite {what} during update (loss {loss}, grad norm {grad_norm})")]
    NonFinite { what: &'static str, loss: f64, grad_norm: f64 },
    #[error("bad hyperparameters: {0}")]
    Config(String),
    #[error("{0}")]
    Search(String),
}

/// `epochs` passes of shuffled minibatch updates. Returns the mean stats of
/// the last epoch.
pub fn ppo_update<R: Rng>(
    params: &mut PolicyParams,
    adam: &mut Adam,
    samples: &[Sample],
    hyper: &Hyperparams,
    lr: f64,
    rng: &mut R,
) -> Result<LossStats, TrainError> {
    if samples.is_empty() {
        return Ok(LossStats::default());
    }
    let size = (samples.len() / hyper.minibatches).max(1);
    let mut idx: Vec<usize> = (0..samples.len()).collect();
    let mut last = LossStats::default();
    for _ in 0..hyper.epochs {
        idx.shuffle(rng);
        let mut epoch = LossStats::default();
        let mut batches = 0.0;
        for chunk in idx.chunks(size) {
            let mb: Vec<Sample> = chunk.iter().map(|&i| samples[i].clone()).collect();
            let (loss, stats, mut grad) = loss_and_grad(params, &mb, hyper);
            let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if !loss.is_finite() || !norm.is_finite() {
                return Err(TrainError::NonFinite { what: "loss or gradient", loss, grad_norm: norm });
            }
            if norm > hyper.max_grad_norm {
                let scale = hyper.max_grad_norm / (norm + 1e-6);
                grad.iter_mut().for_each(|g| *g *= scale);
            }
            adam.step(&mut params.theta, &grad, lr, hyper.adam_eps);
            if params.theta.iter().any(|x| !x.is_finite()) {
                return Err(TrainError::NonFinite { what: "parameters", loss, grad_norm: norm });
            }
            epoch.policy_loss += stats.policy_loss;
            epoch.value_loss += stats.value_loss;
            epoch.entropy += stats.entropy;
            epoch.approx_kl += stats.approx_kl;
            epoch.clip_fraction += stats.clip_fraction;
            batches += 1.0;
        }
        last = LossStats {
            policy_loss: epoch.policy_loss / batches,
            value_loss: epoch.value_loss / batches,
            entropy: epoch.entropy / batches,
            approx_kl: epoch.approx_kl / batches,
            clip_fraction: epoch.clip_fraction / batches,
        };
    }
    Ok(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::features::{Features, FEATURES};
    use crate::seed;

    /// Three steps on a growing tree of 2, 3 and 4 nodes.
    pub(crate) fn synthetic(params: &PolicyParams) -> Vec<Sample> {
        let mut rng = seed::rng(42);
        let mut feats: Vec<Features> = vec![];
        let parents_all = [None, Some(0), Some(0), Some(1)];
        let mut out = vec![];
        for t in 0..3 {
            while feats.len() < t + 2 {
                let mut f = [0.0; FEATURES];
                for x in &mut f {
                    *x = rng.gen_range(0.0..30.0);
                }
                feats.push(f);
            }
            let n = feats.len();
            let candidates: Vec<usize> = (0..n).collect();
            let mut step = StepRecord {
                node_features: feats.clone(),
                parents: parents_all[..n].to_vec(),
                candidates,
                chosen: t % n,
                log_prob: 0.0,
                match_log_prob: -(5.0f64).ln(),
                value: 0.0,
                reward: 0.1 * t as f64,
                done: t == 2,
            };
            step.log_prob = log_prob(params, &step) + 0.05 * (t as f64 - 1.0);
            out.push(Sample { step, advantage: [0.8, -0.5, 1.3][t], ret: [0.3, -0.2, 0.5][t] });
        }
        out
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = PolicyParams::init(11);
        let hyper = Hyperparams { entropy_coef: 0.01, norm_adv: false, ..Hyperparams::default() };
        let samples = synthetic(&p);
        let (_, _, grad) = loss_and_grad(&p, &samples, &hyper);
        // gradients below 1e-6 are compared absolutely: differencing noise is ~1e-11
        let h = 1e-5;
        let mut worst: f64 = 0.0;
        for i in 0..NUM_PARAMS {
            let mut a = p.clone();
            a.theta[i] += h;
            let mut b = p.clone();
            b.theta[i] -= h;
            let fd = (loss_and_grad(&a, &samples, &hyper).0 - loss_and_grad(&b, &samples, &hyper).0) / (2.0 * h);
            let rel = (fd - grad[i]).abs() / fd.abs().max(grad[i].abs()).max(1e-6);
            worst = worst.max(rel);
        }
        assert!(worst < 1e-4, "max relative error {worst}");
    }

    #[test]
    fn zero_advantage_zero_entropy_is_a_fixed_point() {
        let mut p = PolicyParams::init(12);
        let hyper = Hyperparams { entropy_coef: 0.0, ..Hyperparams::default() };
        let samples: Vec<Sample> = synthetic(&p)
            .into_iter()
            .map(|mut s| {
                s.step.log_prob = log_prob(&p, &s.step);
                let v = p.forward_batch(&s.step.node_features).iter().map(|o| o.1).fold(f64::NEG_INFINITY, f64::max);
                s.advantage = 0.0;
                s.ret = v;
                s
            })
            .collect();
        let before = p.clone();
        ppo_update(&mut p, &mut Adam::new(), &samples, &hyper, 3e-4, &mut seed::rng(0)).unwrap();
        assert_eq!(p, before);
    }

    #[test]
    fn ratio_is_one_at_collection_params() {
        let p = PolicyParams::init(13);
        for s in synthetic(&p) {
            let mut step = s.step.clone();
            step.log_prob = log_prob(&p, &step);
            assert_eq!((log_prob(&p, &step) - step.log_prob).exp(), 1.0);
        }
    }

    #[test]
    fn uniform_match_factor_cancels() {
        // adding the same constant to stored and fresh log-probs leaves the ratio alone
        let p = PolicyParams::init(14);
        let hyper = Hyperparams { norm_adv: false, ..Hyperparams::default() };
        let samples = synthetic(&p);
        let shifted: Vec<Sample> = samples
            .iter()
            .cloned()
            .map(|mut s| {
                s.step.match_log_prob -= 3.7;
                s
            })
            .collect();
        let (a, b) = (loss_and_grad(&p, &samples, &hyper), loss_and_grad(&p, &shifted, &hyper));
        assert!((a.0 - b.0).abs() < 1e-12);
        assert!(a.2.iter().zip(&b.2).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn gae_by_hand() {
        let mk = |r: f64, v: f64, done: bool| StepRecord {
            node_features: vec![],
            parents: vec![],
            candidates: vec![],
            chosen: 0,
            log_prob: 0.0,
            match_log_prob: 0.0,
            value: v,
            reward: r,
            done,
        };
        let steps = [mk(1.0, 0.5, false), mk(0.0, 0.2, true), mk(2.0, 0.1, false)];
        let out = gae(&steps, 0.4, 0.9, 0.8);
        let d2 = 2.0 + 0.9 * 0.4 - 0.1;
        let d1 = 0.0 - 0.2;
        let d0 = 1.0 + 0.9 * 0.2 - 0.5;
        assert!((out[2].0 - d2).abs() < 1e-12);
        assert!((out[1].0 - d1).abs() < 1e-12);
        assert!((out[0].0 - (d0 + 0.9 * 0.8 * d1)).abs() < 1e-12);
        assert!((out[0].1 - (out[0].0 + 0.5)).abs() < 1e-12);
    }
}
