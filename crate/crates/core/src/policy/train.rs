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

//! Training loop: parallel episode workers on freshly sampled circuits,
//! synchronous updates between rollouts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mlp::PolicyParams;
use super::ppo::{gae, ppo_update, Adam, Hyperparams, LossStats, Sample, TrainError};
use crate::bench::{random_circuit, GateRatios};
use crate::search::{Episode, SearchSettings, StepRecord};
use crate::seed;

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub hyper: Hyperparams,
    pub ratios: GateRatios,
    pub width: usize,
    pub gates: usize,
    pub seed: u64,
    /// Updates between checkpoints; 0 writes only the final one.
    pub checkpoint_every: usize,
    pub level_cap: u8,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { hyper: Hyperparams::default(), ratios: GateRatios::mixed(), width: 5, gates: 80, seed: 0, checkpoint_every: 0, level_cap: crate::extract::MAX_LEVEL }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub update: usize,
    pub step: usize,
    pub params: PolicyParams,
    pub config: TrainConfig,
}

impl Checkpoint {
    pub fn validate(&self) -> Result<(), String> {
        if self.version != CHECKPOINT_VERSION {
            return Err(format!("unsupported checkpoint version {}", self.version));
        }
        self.params.validate()
    }
}

/// One row of the training curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub update: usize,
    pub step: usize,
    pub episodes: usize,
    /// Mean final tree reward of episodes that ended during this rollout.
    pub mean_reward: Option<f64>,
    pub mean_step_reward: f64,
    pub learning_rate: f64,
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub approx_kl: f64,
    pub clip_fraction: f64,
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub params: PolicyParams,
    pub curve: Vec<CurveRow>,
    /// `(step, final tree reward)` per finished episode, in order.
    pub episodes: Vec<(usize, f64)>,
}

struct Worker {
    id: u64,
    count: u64,
    episode: Option<Episode>,
}

impl Worker {
    fn reset(&mut self, cfg: &TrainConfig) -> Result<(), TrainError> {
        loop {
            let s = seed::derive(cfg.seed, "train-circuit", self.id << 32 | self.count);
            self.count += 1;
            let c = random_circuit(cfg.width, cfg.gates, &cfg.ratios, s).map_err(|e| TrainError::Config(e.to_string()))?;
            let settings = SearchSettings { budget: cfg.hyper.budget, restarts: 0, level_cap: cfg.level_cap };
            match Episode::new(&c, &settings, seed::derive(s, "train-episode", 0)) {
                // roots without two-qubit gates carry no reward signal
                Ok(ep) if ep.tree.root().cnot_count > 0 => {
                    self.episode = Some(ep);
                    return Ok(());
                }
                Ok(_) => continue,
                Err(e) => log::debug!("skipping training circuit: {e}"),
            }
            if self.count > 1000 + 1000 * self.id {
                return Err(TrainError::Search("no usable training circuit".into()));
            }
        }
    }

    /// `n` steps; returns the steps, the bootstrap value and finished rewards.
    fn rollout(&mut self, cfg: &TrainConfig, params: &PolicyParams, n: usize) -> Result<(Vec<StepRecord>, f64, Vec<(usize, f64)>), TrainError> {
        let mut steps = Vec::with_capacity(n);
        let mut finished = vec![];
        while steps.len() < n {
            if self.episode.as_ref().is_none_or(Episode::is_done) {
                if let Some(ep) = self.episode.take() {
                    finished.push((steps.len(), ep.tree.tree_reward()));
                }
                self.reset(cfg)?;
            }
            let ep = self.episode.as_mut().expect("reset");
            if let Some(s) = ep.step(params) {
                steps.push(s);
            }
        }
        let ep = self.episode.as_mut().expect("episode");
        let next = if ep.is_done() { 0.0 } else { ep.value(params) };
        Ok((steps, next, finished))
    }
}

/// Train from `init` (or a fresh seeded network). `on_checkpoint` sees every
/// checkpoint, the final one included.
pub fn train(
    cfg: &TrainConfig,
    init: Option<PolicyParams>,
    mut on_checkpoint: impl FnMut(&Checkpoint) -> Result<(), TrainError>,
    mut on_row: impl FnMut(&CurveRow),
) -> Result<TrainOutcome, TrainError> {
    cfg.hyper.validate().map_err(TrainError::Config)?;
    cfg.ratios.validate().map_err(|e| TrainError::Config(e.to_string()))?;
    let h = &cfg.hyper;
    let mut params = init.unwrap_or_else(|| PolicyParams::init(cfg.seed));
    params.validate().map_err(TrainError::Config)?;
    let mut adam = Adam::new();
    let mut rng = seed::rng(seed::derive(cfg.seed, "ppo", 0));
    // round up so at least `total_steps` environment steps are taken
    let updates = h.total_steps.div_ceil(h.batch);
    let mut workers: Vec<Worker> = (0..h.envs as u64).map(|id| Worker { id, count: 0, episode: None }).collect();
    let mut curve = vec![];
    let mut episodes = vec![];
    for update in 0..updates {
        let lr = if h.anneal_lr { h.learning_rate * (1.0 - update as f64 / updates as f64) } else { h.learning_rate };
        let results: Vec<_> = workers.par_iter_mut().map(|w| w.rollout(cfg, &params, h.rollout)).collect();
        let mut samples = Vec::with_capacity(h.batch);
        let mut finished = vec![];
        for r in results {
            let (steps, next, done) = r?;
            let base = update * h.batch + samples.len();
            finished.extend(done.into_iter().map(|(i, rew)| (base + i, rew)));
            for (step, (advantage, ret)) in steps.iter().cloned().zip(gae(&steps, next, h.gamma, h.gae_lambda)) {
                samples.push(Sample { step, advantage, ret });
            }
        }
        let mean_step_reward = samples.iter().map(|s| s.step.reward).sum::<f64>() / samples.len() as f64;
        let stats: LossStats = ppo_update(&mut params, &mut adam, &samples, h, lr, &mut rng)?;
        finished.sort_by_key(|f| f.0);
        let row = CurveRow {
            update,
            step: (update + 1) * h.batch,
            episodes: finished.len(),
            mean_reward: (!finished.is_empty()).then(|| finished.iter().map(|f| f.1).sum::<f64>() / finished.len() as f64),
            mean_step_reward,
            learning_rate: lr,
            policy_loss: stats.policy_loss,
            value_loss: stats.value_loss,
            entropy: stats.entropy,
            approx_kl: stats.approx_kl,
            clip_fraction: stats.clip_fraction,
        };
        log::info!(
            "update {}/{updates} step {} episodes {} reward {:?} vloss {:.4}",
            update + 1,
            row.step,
            row.episodes,
            row.mean_reward,
            row.value_loss
        );
        on_row(&row);
        curve.push(row);
        episodes.extend(finished);
        let last = update + 1 == updates;
        if !last && cfg.checkpoint_every > 0 && (update + 1) % cfg.checkpoint_every == 0 {
            on_checkpoint(&checkpoint(&params, cfg, update + 1))?;
        }
    }
    on_checkpoint(&checkpoint(&params, cfg, updates))?;
    Ok(TrainOutcome { params, curve, episodes })
}

fn checkpoint(params: &PolicyParams, cfg: &TrainConfig, update: usize) -> Checkpoint {
    Checkpoint { version: CHECKPOINT_VERSION, update, step: update * cfg.hyper.batch, params: params.clone(), config: cfg.clone() }
}

/// Mean episode reward over the first and last `fraction` of finished
/// episodes.
pub fn reward_improvement(episodes: &[(usize, f64)], fraction: f64) -> Option<(f64, f64)> {
    let k = ((episodes.len() as f64 * fraction).ceil() as usize).max(1);
    if episodes.len() < 2 * k {
        return None;
    }
    let mean = |xs: &[(usize, f64)]| xs.iter().map(|x| x.1).sum::<f64>() / xs.len() as f64;
    Some((mean(&episodes[..k]), mean(&episodes[episodes.len() - k..])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> TrainConfig {
        let hyper = Hyperparams { envs: 2, rollout: 8, batch: 16, minibatches: 2, budget: 8, total_steps: 32, ..Hyperparams::default() };
        TrainConfig { hyper, width: 3, gates: 20, seed: 7, ..TrainConfig::default() }
    }

    #[test]
    fn zero_steps_returns_init() {
        let cfg = TrainConfig { hyper: Hyperparams { total_steps: 0, ..small().hyper }, ..small() };
        let init = PolicyParams::init(1);
        let out = train(&cfg, Some(init.clone()), |_| Ok(()), |_| {}).unwrap();
        assert_eq!(out.params, init);
        assert!(out.curve.is_empty());
    }

    #[test]
    fn deterministic_runs() {
        let cfg = small();
        let mut ck = vec![];
        let a = train(&cfg, None, |c| {
            ck.push(c.clone());
            Ok(())
        }, |_| {})
        .unwrap();
        let b = train(&cfg, None, |_| Ok(()), |_| {}).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.curve, b.curve);
        assert_eq!(ck.len(), 1);
        assert_eq!(ck[0].params, a.params);
        ck[0].validate().unwrap();
        assert_ne!(a.params, PolicyParams::init(cfg.seed));
    }

    #[test]
    fn rejects_bad_batch() {
        let cfg = TrainConfig { hyper: Hyperparams { batch: 100, ..small().hyper }, ..small() };
        assert!(matches!(train(&cfg, None, |_| Ok(()), |_| {}), Err(TrainError::Config(_))));
    }
}
