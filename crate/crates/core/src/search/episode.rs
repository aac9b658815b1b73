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

//! Episodes: grow one tree for a fixed number of expansions.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Scorer, SearchError, SearchSettings, SearchTree};
use crate::extract::ExtractionResult;
use crate::policy::Features;
use crate::seed;
use crate::zx::{circuit_to_diagram, Circuit};

/// What the learner needs from one decision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// Features of every node in the tree at decision time, by id.
    pub node_features: Vec<Features>,
    pub parents: Vec<Option<usize>>,
    /// Candidate node ids, in selection order.
    pub candidates: Vec<usize>,
    /// Index into `candidates`.
    pub chosen: usize,
    /// Log-probability of the node choice only.
    pub log_prob: f64,
    /// Log-probability of the uniform match choice; parameter-free.
    pub match_log_prob: f64,
    /// Max-pooled value of the tree at decision time.
    pub value: f64,
    /// Change in tree reward caused by this step.
    pub reward: f64,
    pub done: bool,
}

/// One line of the JSONL episode trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceLine {
    pub step: usize,
    pub node: usize,
    pub rule: String,
    pub child: Option<usize>,
    pub cnot_count: Option<usize>,
    pub best_cnot: usize,
    pub reward: f64,
}

/// A running episode that owns its tree and random stream.
pub struct Episode {
    pub tree: SearchTree,
    pub trace: Vec<TraceLine>,
    rng: ChaCha8Rng,
    aborted: bool,
}

impl Episode {
    pub fn new(c: &Circuit, settings: &SearchSettings, seed_value: u64) -> Result<Episode, SearchError> {
        let tree = SearchTree::from_diagram(circuit_to_diagram(c), settings.budget, settings.level_cap)?;
        Ok(Episode::from_tree(tree, seed_value))
    }

    pub fn from_tree(tree: SearchTree, seed_value: u64) -> Episode {
        Episode { tree, trace: vec![], rng: seed::rng(seed::derive(seed_value, "episode", 0)), aborted: false }
    }

    pub fn is_done(&self) -> bool {
        self.aborted || self.tree.step >= self.tree.budget || self.tree.candidate_nodes().is_empty()
    }

    /// Tree value under `scorer`, used to bootstrap at a rollout boundary.
    pub fn value(&mut self, scorer: &dyn Scorer) -> f64 {
        self.tree.refresh(scorer);
        self.tree.tree_value()
    }

    /// One select-and-expand step; `None` once the episode is over.
    pub fn step(&mut self, scorer: &dyn Scorer) -> Option<StepRecord> {
        if self.is_done() {
            return None;
        }
        self.tree.refresh(scorer);
        let value = self.tree.tree_value();
        let before = self.tree.tree_reward();
        let (node, log_prob) = self.tree.select_node(&mut self.rng).ok()?;
        let candidates = self.tree.candidate_nodes();
        let chosen = candidates.iter().position(|&c| c == node).expect("selected a candidate");
        let node_features = self.tree.nodes.iter().map(|n| n.features).collect();
        let parents = self.tree.nodes.iter().map(|n| n.parent).collect();
        let match_log_prob = -(self.tree.nodes[node].untried.len() as f64).ln();
        let m = self.tree.choose_match(node, &mut self.rng).ok()?;
        let child = match self.tree.expand(node, &m) {
            Ok(id) => Some(id),
            Err(e) => {
                log::debug!("episode aborted at step {}: {e}", self.tree.step);
                self.aborted = true;
                None
            }
        };
        let reward = self.tree.tree_reward() - before;
        self.trace.push(TraceLine {
            step: self.tree.step,
            node,
            rule: m.to_string(),
            child,
            cnot_count: child.map(|c| self.tree.nodes[c].cnot_count),
            best_cnot: self.tree.best_node().cnot_count,
            reward,
        });
        Some(StepRecord { node_features, parents, candidates, chosen, log_prob, match_log_prob, value, reward, done: self.is_done() })
    }
}

/// Run a whole episode on `c`.
pub fn run_episode(
    c: &Circuit,
    scorer: &dyn Scorer,
    settings: &SearchSettings,
    seed_value: u64,
) -> Result<(SearchTree, Vec<StepRecord>, Vec<TraceLine>), SearchError> {
    let mut ep = Episode::new(c, settings, seed_value)?;
    let mut steps = vec![];
    while let Some(s) = ep.step(scorer) {
        steps.push(s);
    }
    Ok((ep.tree, steps, ep.trace))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best: ExtractionResult,
    pub best_count: usize,
    /// Best count after each episode, first episode included.
    pub history: Vec<usize>,
}

/// Run an episode, then `settings.restarts` more, each rooted at the best
/// circuit found so far.
pub fn run_with_restarts(c: &Circuit, scorer: &dyn Scorer, settings: &SearchSettings, seed_value: u64) -> Result<SearchOutcome, SearchError> {
    let mut best: Option<ExtractionResult> = None;
    let mut history = vec![];
    let mut root = c.clone();
    for r in 0..=settings.restarts {
        let (tree, _, _) = run_episode(&root, scorer, settings, seed::derive(seed_value, "restart", r as u64))?;
        let node = tree.best_node();
        if best.as_ref().is_none_or(|b| node.cnot_count < b.circuit.two_qubit_count()) {
            best = Some(node.extraction.clone());
        }
        let b = best.as_ref().expect("set above");
        history.push(b.circuit.two_qubit_count());
        root = b.circuit.clone();
    }
    let best = best.expect("at least one episode");
    Ok(SearchOutcome { best_count: best.circuit.two_qubit_count(), best, history })
}
