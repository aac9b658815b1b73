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

//! Search over a tree of equivalent diagrams. Each node holds a rewritten
//! diagram and the circuit extracted from it; a node-selection policy picks
//! which node to expand next and the rewrite is drawn uniformly among the
//! node's untried matches.

mod episode;

pub use episode::{run_episode, run_with_restarts, Episode, SearchOutcome, StepRecord, TraceLine};

/// Episode length, restart count and highest extraction level tried.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSettings {
    pub budget: usize,
    pub restarts: usize,
    pub level_cap: u8,
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings { budget: 128, restarts: 3, level_cap: MAX_LEVEL }
    }
}

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::extract::{extract_with_levels_up_to, ExtractionFailed, ExtractionResult, MAX_LEVEL};
use crate::policy::{featurize, Features, PolicyParams};
use crate::rewrite::{apply_rewrite, enumerate_matches, Match, RewriteError};
use crate::zx::{circuit_to_diagram, Circuit, Diagram};

/// Scores nodes: returns `(W, V)` per feature row.
pub trait Scorer: Sync {
    fn evaluate(&self, features: &[Features]) -> Vec<(f64, f64)>;
}

impl Scorer for PolicyParams {
    fn evaluate(&self, features: &[Features]) -> Vec<(f64, f64)> {
        self.forward_batch(features)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SearchError {
    #[error("no node has an untried rewrite")]
    NoCandidates,
    #[error("node {0} has no untried rewrite")]
    NoMatches(usize),
    #[error("match {1} is not untried at node {0}")]
    InvalidMatch(usize, Match),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Extraction(#[from] ExtractionFailed),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub action: Option<Match>,
    pub diagram: Diagram,
    pub extraction: ExtractionResult,
    /// Two-qubit count of the extracted circuit, SWAP = 3.
    pub cnot_count: usize,
    pub weight: f64,
    pub value: f64,
    pub features: Features,
    pub untried: Vec<Match>,
}

impl TreeNode {
    fn new(id: usize, parent: Option<usize>, action: Option<Match>, diagram: Diagram, cap: u8) -> Result<TreeNode, ExtractionFailed> {
        let extraction = extract_with_levels_up_to(&diagram, cap)?;
        let cnot_count = extraction.circuit.two_qubit_count();
        let features = featurize(&extraction.circuit, &diagram);
        let untried = enumerate_matches(&diagram);
        Ok(TreeNode { id, parent, action, diagram, extraction, cnot_count, weight: 0.0, value: 0.0, features, untried })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchTree {
    pub nodes: Vec<TreeNode>,
    pub step: usize,
    pub budget: usize,
    pub level_cap: u8,
}

impl SearchTree {
    /// Tree whose root is the diagram of `c`, extracting at every level.
    pub fn new(c: &Circuit, budget: usize) -> Result<SearchTree, SearchError> {
        SearchTree::from_diagram(circuit_to_diagram(c), budget, MAX_LEVEL)
    }

    pub fn from_diagram(d: Diagram, budget: usize, level_cap: u8) -> Result<SearchTree, SearchError> {
        let root = TreeNode::new(0, None, None, d, level_cap)?;
        Ok(SearchTree { nodes: vec![root], step: 0, budget, level_cap })
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes with untried rewrites, by id.
    pub fn candidate_nodes(&self) -> Vec<usize> {
        self.nodes.iter().filter(|n| !n.untried.is_empty()).map(|n| n.id).collect()
    }

    /// Root-to-`n` path, inclusive.
    pub fn path(&self, n: usize) -> Vec<usize> {
        let mut p = vec![n];
        let mut cur = n;
        while let Some(parent) = self.nodes[cur].parent {
            p.push(parent);
            cur = parent;
        }
        p.reverse();
        p
    }

    /// Mean weight along the root-to-`n` path.
    pub fn path_weight(&self, n: usize) -> f64 {
        let p = self.path(n);
        p.iter().map(|&u| self.nodes[u].weight).sum::<f64>() / p.len() as f64
    }

    /// Softmax of path weights over the candidates, as `(id, probability)`.
    pub fn selection_probabilities(&self) -> Vec<(usize, f64)> {
        let cands = self.candidate_nodes();
        let logits: Vec<f64> = cands.iter().map(|&c| self.path_weight(c)).collect();
        cands.into_iter().zip(softmax(&logits)).collect()
    }

    /// Sample a candidate node; returns its id and log-probability.
    pub fn select_node<R: Rng>(&self, rng: &mut R) -> Result<(usize, f64), SearchError> {
        let probs = self.selection_probabilities();
        if probs.is_empty() {
            return Err(SearchError::NoCandidates);
        }
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut pick = probs.len() - 1;
        for (i, &(_, p)) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                pick = i;
                break;
            }
        }
        let cands: Vec<usize> = probs.iter().map(|p| p.0).collect();
        let logits: Vec<f64> = cands.iter().map(|&c| self.path_weight(c)).collect();
        Ok((cands[pick], log_softmax(&logits)[pick]))
    }

    /// Uniform choice among the untried matches of `n`.
    pub fn choose_match<R: Rng>(&self, n: usize, rng: &mut R) -> Result<Match, SearchError> {
        self.nodes[n].untried.choose(rng).cloned().ok_or(SearchError::NoMatches(n))
    }

    /// Apply `m` at node `n` and add the child. The match is consumed even if
    /// extraction of the child fails.
    pub fn expand(&mut self, n: usize, m: &Match) -> Result<usize, SearchError> {
        let pos = self.nodes[n]
            .untried
            .iter()
            .position(|x| x == m)
            .ok_or_else(|| SearchError::InvalidMatch(n, m.clone()))?;
        self.nodes[n].untried.remove(pos);
        self.step += 1;
        let diagram = apply_rewrite(&self.nodes[n].diagram, m)?;
        let id = self.nodes.len();
        let child = TreeNode::new(id, Some(n), Some(m.clone()), diagram, self.level_cap)?;
        self.nodes.push(child);
        Ok(id)
    }

    /// `max_n 1 - CNOT(n) / CNOT(root)`; 0 when the root has no two-qubit gates.
    pub fn tree_reward(&self) -> f64 {
        let root = self.root().cnot_count;
        if root == 0 {
            return 0.0;
        }
        let best = self.nodes.iter().map(|n| n.cnot_count).min().unwrap_or(root);
        1.0 - best as f64 / root as f64
    }

    /// Node with the fewest two-qubit gates, earliest on ties.
    pub fn best_node(&self) -> &TreeNode {
        self.nodes.iter().min_by_key(|n| (n.cnot_count, n.id)).expect("root")
    }

    /// Re-score every node.
    pub fn refresh(&mut self, scorer: &dyn Scorer) {
        let fs: Vec<Features> = self.nodes.iter().map(|n| n.features).collect();
        for (n, (w, v)) in self.nodes.iter_mut().zip(scorer.evaluate(&fs)) {
            n.weight = w;
            n.value = v;
        }
    }

    /// Max-pooled node value.
    pub fn tree_value(&self) -> f64 {
        self.nodes.iter().map(|n| n.value).fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn softmax(z: &[f64]) -> Vec<f64> {
    log_softmax(z).into_iter().map(f64::exp).collect()
}

pub fn log_softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + z.iter().map(|x| (x - m).exp()).sum::<f64>().ln();
    z.iter().map(|x| x - lse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::RuleKind;
    use crate::seed;
    use crate::zx::{equal_up_to_scalar, diagram_to_tensor, Gate};

    fn cnot_pair() -> Circuit {
        Circuit::with_gates(2, vec![Gate::cnot(0, 1), Gate::cnot(0, 1)]).unwrap()
    }

    /// Chain root -> 1 -> 2 built by color changes.
    fn chain() -> SearchTree {
        let c = Circuit::with_gates(3, vec![Gate::cnot(0, 1), Gate::cnot(1, 2)]).unwrap();
        let mut t = SearchTree::new(&c, 10).unwrap();
        for n in 0..2 {
            let m = t.nodes[n].untried.iter().find(|m| m.rule == RuleKind::ColorChange).unwrap().clone();
            t.expand(n, &m).unwrap();
        }
        t
    }

    #[test]
    fn fresh_tree_candidates() {
        let t = SearchTree::new(&cnot_pair(), 4).unwrap();
        assert_eq!(t.candidate_nodes(), vec![0]);
        assert_eq!(t.tree_reward(), 0.0);
        let empty = SearchTree::new(&Circuit::new(1), 4).unwrap();
        assert!(empty.candidate_nodes().is_empty());
        assert!(matches!(empty.select_node(&mut seed::rng(0)), Err(SearchError::NoCandidates)));
    }

    #[test]
    fn exhausted_middle_is_skipped() {
        let mut t = chain();
        t.nodes[1].untried.clear();
        assert_eq!(t.candidate_nodes(), vec![0, 2]);
    }

    #[test]
    fn path_weight_is_mean() {
        let mut t = chain();
        t.nodes[0].weight = 1.0;
        t.nodes[1].weight = 0.5;
        t.nodes[2].weight = -0.5;
        assert!((t.path_weight(2) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(t.path_weight(0), 1.0);
        for n in &mut t.nodes {
            n.weight = 0.25;
        }
        assert!(t.nodes.iter().all(|n| (t.path_weight(n.id) - 0.25).abs() < 1e-15));
    }

    #[test]
    fn selection_odds() {
        let mut t = chain();
        t.nodes[1].untried.clear();
        t.nodes[0].weight = 0.0;
        t.nodes[1].weight = 3.0 * 3f64.ln();
        t.nodes[2].weight = 0.0;
        // path weights: root 0, node 2 = ln 3
        let probs = t.selection_probabilities();
        assert!((probs[0].1 - 0.25).abs() < 1e-12 && (probs[1].1 - 0.75).abs() < 1e-12);
        let mut rng = seed::rng(1);
        let n = 20000;
        let hits = (0..n).filter(|_| t.select_node(&mut rng).unwrap().0 == 2).count();
        assert!((hits as f64 / n as f64 - 0.75).abs() < 0.015);
        let (id, lp) = t.select_node(&mut rng).unwrap();
        assert!((lp - probs.iter().find(|p| p.0 == id).unwrap().1.ln()).abs() < 1e-12);
    }

    #[test]
    fn single_candidate_has_log_prob_zero() {
        let t = SearchTree::new(&cnot_pair(), 4).unwrap();
        assert_eq!(t.select_node(&mut seed::rng(2)).unwrap(), (0, 0.0));
    }

    #[test]
    fn expand_bookkeeping() {
        let mut t = SearchTree::new(&cnot_pair(), 4).unwrap();
        let root_count = t.root().cnot_count;
        let m = t.nodes[0].untried.iter().find(|m| m.rule == RuleKind::Fuse || m.rule == RuleKind::ColorChange).unwrap().clone();
        let c = t.expand(0, &m).unwrap();
        assert_eq!(t.nodes[c].cnot_count, t.nodes[c].extraction.circuit.two_qubit_count());
        assert!(matches!(t.expand(0, &m), Err(SearchError::InvalidMatch(..))));
        let m2 = t.nodes[c].untried[0].clone();
        t.expand(c, &m2).unwrap();
        assert_eq!(t.root().cnot_count, root_count);
        assert_eq!(t.step, 2);
        let root = diagram_to_tensor(&t.root().diagram).unwrap();
        for n in &t.nodes {
            assert!(equal_up_to_scalar(&root, &diagram_to_tensor(&n.diagram).unwrap(), 1e-9).unwrap());
        }
    }

    #[test]
    fn reward_examples() {
        let mut t = chain();
        t.nodes[0].cnot_count = 80;
        t.nodes[1].cnot_count = 90;
        t.nodes[2].cnot_count = 95;
        assert_eq!(t.tree_reward(), 0.0);
        t.nodes[2].cnot_count = 5;
        assert_eq!(t.tree_reward(), 0.9375);
    }

    #[test]
    fn reward_monotone_under_expansion() {
        let c = crate::bench::random_circuit(3, 15, &crate::bench::GateRatios::mixed(), 4).unwrap();
        let mut t = SearchTree::new(&c, 40).unwrap();
        let mut rng = seed::rng(8);
        let mut last = t.tree_reward();
        for _ in 0..40 {
            let Ok((n, _)) = t.select_node(&mut rng) else { break };
            let m = t.choose_match(n, &mut rng).unwrap();
            let _ = t.expand(n, &m);
            let r = t.tree_reward();
            assert!(r >= last);
            last = r;
        }
    }

    #[test]
    fn softmax_sums_to_one() {
        let p = softmax(&[1000.0, 1000.0, -5.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((p[0] - 0.5).abs() < 1e-9);
    }
}
