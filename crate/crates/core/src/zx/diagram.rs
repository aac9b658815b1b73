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

//! Open ZX multigraphs.
//!
//! Vertices are Z spiders, X spiders, or boundaries. Between any two vertices
//! there may be several parallel wires, each either plain (`Simple`) or
//! carrying a Hadamard box. Self-loops are tracked per vertex. Global scalars
//! are not tracked; every equality in this crate holds up to a nonzero factor.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::circuit::{Circuit, Gate};
use super::phase::Phase;

pub type V = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexKind {
    Z,
    X,
    Input(usize),
    Output(usize),
}

impl VertexKind {
    pub fn is_spider(self) -> bool {
        matches!(self, VertexKind::Z | VertexKind::X)
    }

    pub fn is_boundary(self) -> bool {
        !self.is_spider()
    }

    /// Z <-> X; boundaries are unchanged.
    pub fn flipped(self) -> VertexKind {
        match self {
            VertexKind::Z => VertexKind::X,
            VertexKind::X => VertexKind::Z,
            b => b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    Simple,
    Hadamard,
}

impl EdgeKind {
    pub fn toggled(self) -> EdgeKind {
        match self {
            EdgeKind::Simple => EdgeKind::Hadamard,
            EdgeKind::Hadamard => EdgeKind::Simple,
        }
    }

    /// Kind of the wire obtained by splicing two wires through an identity.
    pub fn compose(self, other: EdgeKind) -> EdgeKind {
        if self == other {
            EdgeKind::Simple
        } else {
            EdgeKind::Hadamard
        }
    }
}

/// Multiplicities of the parallel wires between two vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeCount {
    pub simple: u32,
    pub hadamard: u32,
}

impl EdgeCount {
    pub fn of(kind: EdgeKind) -> EdgeCount {
        let mut e = EdgeCount::default();
        e.add(kind, 1);
        e
    }

    pub fn total(self) -> u32 {
        self.simple + self.hadamard
    }

    pub fn is_empty(self) -> bool {
        self.total() == 0
    }

    pub fn get(self, kind: EdgeKind) -> u32 {
        match kind {
            EdgeKind::Simple => self.simple,
            EdgeKind::Hadamard => self.hadamard,
        }
    }

    pub fn add(&mut self, kind: EdgeKind, n: u32) {
        match kind {
            EdgeKind::Simple => self.simple += n,
            EdgeKind::Hadamard => self.hadamard += n,
        }
    }

    pub fn toggled(self) -> EdgeCount {
        EdgeCount { simple: self.hadamard, hadamard: self.simple }
    }

    /// Individual wires, simple ones first.
    pub fn kinds(self) -> impl Iterator<Item = EdgeKind> {
        std::iter::repeat_n(EdgeKind::Simple, self.simple as usize)
            .chain(std::iter::repeat_n(EdgeKind::Hadamard, self.hadamard as usize))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct VertexData {
    kind: VertexKind,
    phase: Phase,
    adj: BTreeMap<V, EdgeCount>,
    self_loops: EdgeCount,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("boundary vertex {0} has degree {1}, expected 1")]
    BoundaryDegree(V, usize),
    #[error("boundary vertex {0} carries a nonzero phase")]
    BoundaryPhase(V),
    #[error("boundary list references vertex {0} which is missing or not a boundary of that side")]
    BadBoundary(V),
    #[error("adjacency of {0} and {1} is not symmetric")]
    Asymmetric(V, V),
    #[error("vertex {0} has an edge to missing vertex {1}")]
    DanglingEdge(V, V),
}

/// A ZX diagram with ordered inputs and outputs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    slots: Vec<Option<VertexData>>,
    inputs: Vec<V>,
    outputs: Vec<V>,
    live: usize,
}

impl Diagram {
    pub fn new() -> Diagram {
        Diagram::default()
    }

    pub fn add_vertex(&mut self, kind: VertexKind, phase: Phase) -> V {
        let v = self.slots.len();
        self.slots.push(Some(VertexData {
            kind,
            phase,
            adj: BTreeMap::new(),
            self_loops: EdgeCount::default(),
        }));
        self.live += 1;
        v
    }

    pub fn add_spider(&mut self, kind: VertexKind, phase: Phase) -> V {
        debug_assert!(kind.is_spider());
        self.add_vertex(kind, phase)
    }

    /// Add a boundary vertex and register it as the next input.
    pub fn add_input(&mut self) -> V {
        let v = self.add_vertex(VertexKind::Input(self.inputs.len()), Phase::ZERO);
        self.inputs.push(v);
        v
    }

    /// Add a boundary vertex and register it as the next output.
    pub fn add_output(&mut self) -> V {
        let v = self.add_vertex(VertexKind::Output(self.outputs.len()), Phase::ZERO);
        self.outputs.push(v);
        v
    }

    /// Removes a vertex with all its wires. Boundaries cannot be removed.
    pub fn remove_vertex(&mut self, v: V) {
        let data = self.slots[v].take().expect("removing a missing vertex");
        assert!(data.kind.is_spider(), "cannot remove boundary vertex {v}");
        for w in data.adj.keys() {
            if let Some(d) = self.slots[*w].as_mut() {
                d.adj.remove(&v);
            }
        }
        self.live -= 1;
    }

    fn data(&self, v: V) -> &VertexData {
        self.slots
            .get(v)
            .and_then(Option::as_ref)
            .unwrap_or_else(|| panic!("vertex {v} does not exist"))
    }

    fn data_mut(&mut self, v: V) -> &mut VertexData {
        self.slots
            .get_mut(v)
            .and_then(Option::as_mut)
            .unwrap_or_else(|| panic!("vertex {v} does not exist"))
    }

    pub fn contains(&self, v: V) -> bool {
        matches!(self.slots.get(v), Some(Some(_)))
    }

    pub fn kind(&self, v: V) -> VertexKind {
        self.data(v).kind
    }

    pub fn set_kind(&mut self, v: V, kind: VertexKind) {
        self.data_mut(v).kind = kind;
    }

    pub fn is_spider(&self, v: V) -> bool {
        self.kind(v).is_spider()
    }

    pub fn is_boundary(&self, v: V) -> bool {
        self.kind(v).is_boundary()
    }

    pub fn phase(&self, v: V) -> Phase {
        self.data(v).phase
    }

    pub fn set_phase(&mut self, v: V, p: Phase) {
        self.data_mut(v).phase = p;
    }

    pub fn add_to_phase(&mut self, v: V, p: Phase) {
        let d = self.data_mut(v);
        d.phase += p;
    }

    pub fn num_vertices(&self) -> usize {
        self.live
    }

    /// Upper bound (exclusive) on vertex ids ever allocated.
    pub fn id_bound(&self) -> usize {
        self.slots.len()
    }

    /// Live vertex ids, ascending.
    pub fn vertices(&self) -> impl Iterator<Item = V> + '_ {
        self.slots.iter().enumerate().filter_map(|(i, s)| s.as_ref().map(|_| i))
    }

    pub fn spiders(&self) -> impl Iterator<Item = V> + '_ {
        self.vertices().filter(|&v| self.is_spider(v))
    }

    pub fn inputs(&self) -> &[V] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[V] {
        &self.outputs
    }

    pub fn edge(&self, u: V, v: V) -> EdgeCount {
        if u == v {
            return self.data(u).self_loops;
        }
        self.data(u).adj.get(&v).copied().unwrap_or_default()
    }

    /// Overwrite the wires between `u` and `v` (or the self-loops when equal).
    pub fn set_edge(&mut self, u: V, v: V, e: EdgeCount) {
        if u == v {
            self.data_mut(u).self_loops = e;
            return;
        }
        assert!(self.contains(v), "vertex {v} does not exist");
        if e.is_empty() {
            self.data_mut(u).adj.remove(&v);
            self.data_mut(v).adj.remove(&u);
        } else {
            self.data_mut(u).adj.insert(v, e);
            self.data_mut(v).adj.insert(u, e);
        }
    }

    pub fn add_edge(&mut self, u: V, v: V, kind: EdgeKind) {
        self.add_edges(u, v, EdgeCount::of(kind));
    }

    pub fn add_edges(&mut self, u: V, v: V, extra: EdgeCount) {
        let mut e = self.edge(u, v);
        e.simple += extra.simple;
        e.hadamard += extra.hadamard;
        self.set_edge(u, v, e);
    }

    /// Remove one wire of the given kind. Returns false if there was none.
    pub fn remove_edge(&mut self, u: V, v: V, kind: EdgeKind) -> bool {
        let mut e = self.edge(u, v);
        match kind {
            EdgeKind::Simple if e.simple > 0 => e.simple -= 1,
            EdgeKind::Hadamard if e.hadamard > 0 => e.hadamard -= 1,
            _ => return false,
        }
        self.set_edge(u, v, e);
        true
    }

    /// Neighbors (excluding `v` itself) with their wire multiplicities, ascending by id.
    pub fn neighbors(&self, v: V) -> impl Iterator<Item = (V, EdgeCount)> + '_ {
        self.data(v).adj.iter().map(|(&w, &e)| (w, e))
    }

    pub fn neighbor_ids(&self, v: V) -> Vec<V> {
        self.data(v).adj.keys().copied().collect()
    }

    pub fn self_loops(&self, v: V) -> EdgeCount {
        self.data(v).self_loops
    }

    /// Number of wire ends at `v`; a self-loop contributes two.
    pub fn degree(&self, v: V) -> usize {
        let d = self.data(v);
        d.adj.values().map(|e| e.total() as usize).sum::<usize>() + 2 * d.self_loops.total() as usize
    }

    pub fn num_edges(&self) -> usize {
        let mut n = 0;
        for v in self.vertices() {
            let d = self.data(v);
            n += d.self_loops.total() as usize;
            n += d.adj.range(v + 1..).map(|(_, e)| e.total() as usize).sum::<usize>();
        }
        n
    }

    /// True if `v` is a spider with no boundary neighbor.
    pub fn is_interior(&self, v: V) -> bool {
        self.is_spider(v) && self.data(v).adj.keys().all(|&w| self.is_spider(w))
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        for v in self.vertices() {
            let d = self.data(v);
            for (&w, &e) in &d.adj {
                if !self.contains(w) {
                    return Err(DiagramError::DanglingEdge(v, w));
                }
                if self.data(w).adj.get(&v) != Some(&e) {
                    return Err(DiagramError::Asymmetric(v, w));
                }
            }
            if d.kind.is_boundary() {
                if self.degree(v) != 1 {
                    return Err(DiagramError::BoundaryDegree(v, self.degree(v)));
                }
                if !d.phase.is_zero() {
                    return Err(DiagramError::BoundaryPhase(v));
                }
            }
        }
        for (i, &v) in self.inputs.iter().enumerate() {
            if !self.contains(v) || self.kind(v) != VertexKind::Input(i) {
                return Err(DiagramError::BadBoundary(v));
            }
        }
        for (i, &v) in self.outputs.iter().enumerate() {
            if !self.contains(v) || self.kind(v) != VertexKind::Output(i) {
                return Err(DiagramError::BadBoundary(v));
            }
        }
        Ok(())
    }

    /// Copy of the diagram with vertex `v` renamed to `perm[v]`. `perm` must be
    /// injective on live vertices.
    pub fn relabeled(&self, perm: &[V]) -> Diagram {
        let bound = self.vertices().map(|v| perm[v] + 1).max().unwrap_or(0);
        let mut slots: Vec<Option<VertexData>> = vec![None; bound];
        for v in self.vertices() {
            let d = self.data(v);
            slots[perm[v]] = Some(VertexData {
                kind: d.kind,
                phase: d.phase,
                adj: d.adj.iter().map(|(&w, &e)| (perm[w], e)).collect(),
                self_loops: d.self_loops,
            });
        }
        Diagram {
            slots,
            inputs: self.inputs.iter().map(|&v| perm[v]).collect(),
            outputs: self.outputs.iter().map(|&v| perm[v]).collect(),
            live: self.live,
        }
    }

    /// Same diagram with Z and X exchanged everywhere.
    pub fn color_flipped(&self) -> Diagram {
        let mut d = self.clone();
        for s in d.slots.iter_mut().flatten() {
            s.kind = s.kind.flipped();
        }
        d
    }

    /// Mirror image: inputs and outputs exchanged and every phase negated.
    pub fn adjoint(&self) -> Diagram {
        let mut d = self.clone();
        for s in d.slots.iter_mut().flatten() {
            s.kind = match s.kind {
                VertexKind::Input(i) => VertexKind::Output(i),
                VertexKind::Output(i) => VertexKind::Input(i),
                k => k,
            };
            s.phase = -s.phase;
        }
        std::mem::swap(&mut d.inputs, &mut d.outputs);
        d
    }

    /// Renumber live vertices densely in ascending order.
    pub fn compacted(&self) -> Diagram {
        let mut perm = vec![usize::MAX; self.id_bound()];
        for (i, v) in self.vertices().enumerate() {
            perm[v] = i;
        }
        self.relabeled(&perm)
    }

    /// Isomorphism test fixing inputs and outputs positionally. Exponential in
    /// the worst case; meant for small diagrams in tests and assertions.
    pub fn is_isomorphic(&self, other: &Diagram) -> bool {
        iso::isomorphic(self, other)
    }
}

/// ZX diagram of a circuit: one input and one output per qubit, in qubit order.
///
/// CNOT becomes a Z(0) on the control joined to an X(0) on the target by a
/// plain wire; CZ uses two Z(0) spiders joined by a Hadamard wire; H toggles the
/// kind of the wire it sits on; SWAP is expanded into three CNOTs.
pub fn circuit_to_diagram(c: &Circuit) -> Diagram {
    let mut d = Diagram::new();
    let mut last: Vec<V> = (0..c.width).map(|_| d.add_input()).collect();
    let mut pending = vec![EdgeKind::Simple; c.width];

    fn attach(d: &mut Diagram, last: &mut [V], pending: &mut [EdgeKind], q: usize, kind: VertexKind, p: Phase) -> V {
        let v = d.add_spider(kind, p);
        d.add_edge(last[q], v, pending[q]);
        last[q] = v;
        pending[q] = EdgeKind::Simple;
        v
    }

    let mut push = |d: &mut Diagram, g: &Gate| match *g {
        Gate::H(q) => pending[q] = pending[q].toggled(),
        Gate::Rz(q, p) => {
            attach(d, &mut last, &mut pending, q, VertexKind::Z, p);
        }
        Gate::Rx(q, p) => {
            attach(d, &mut last, &mut pending, q, VertexKind::X, p);
        }
        Gate::Cnot { control, target } => {
            let a = attach(d, &mut last, &mut pending, control, VertexKind::Z, Phase::ZERO);
            let b = attach(d, &mut last, &mut pending, target, VertexKind::X, Phase::ZERO);
            d.add_edge(a, b, EdgeKind::Simple);
        }
        Gate::Cz(x, y) => {
            let a = attach(d, &mut last, &mut pending, x, VertexKind::Z, Phase::ZERO);
            let b = attach(d, &mut last, &mut pending, y, VertexKind::Z, Phase::ZERO);
            d.add_edge(a, b, EdgeKind::Hadamard);
        }
        Gate::Swap(..) => unreachable!(),
    };
    for g in &c.gates {
        if let Gate::Swap(a, b) = *g {
            for h in [Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)] {
                push(&mut d, &h);
            }
        } else {
            push(&mut d, g);
        }
    }
    for q in 0..c.width {
        let o = d.add_output();
        d.add_edge(last[q], o, pending[q]);
    }
    d
}

mod iso {
    use super::*;

    fn signature(d: &Diagram, v: V) -> (VertexKind, Phase, usize, EdgeCount) {
        (d.kind(v), d.phase(v), d.degree(v), d.self_loops(v))
    }

    pub(super) fn isomorphic(a: &Diagram, b: &Diagram) -> bool {
        if a.num_vertices() != b.num_vertices()
            || a.inputs.len() != b.inputs.len()
            || a.outputs.len() != b.outputs.len()
            || a.num_edges() != b.num_edges()
        {
            return false;
        }
        let mut map: BTreeMap<V, V> = BTreeMap::new();
        let mut used: BTreeMap<V, V> = BTreeMap::new();
        for (x, y) in a.inputs.iter().zip(&b.inputs).chain(a.outputs.iter().zip(&b.outputs)) {
            map.insert(*x, *y);
            used.insert(*y, *x);
        }
        let order: Vec<V> = {
            // visit in BFS order from the boundaries so neighbors constrain candidates early
            let mut seen: Vec<V> = map.keys().copied().collect();
            let mut i = 0;
            while i < seen.len() {
                for w in a.neighbor_ids(seen[i]) {
                    if !seen.contains(&w) {
                        seen.push(w);
                    }
                }
                i += 1;
            }
            for v in a.vertices() {
                if !seen.contains(&v) {
                    seen.push(v);
                }
            }
            seen.into_iter().filter(|v| !map.contains_key(v)).collect()
        };
        if !consistent_all(a, b, &map) {
            return false;
        }
        extend(a, b, &order, 0, &mut map, &mut used)
    }

    fn consistent_all(a: &Diagram, b: &Diagram, map: &BTreeMap<V, V>) -> bool {
        map.iter().all(|(&x, &y)| signature(a, x) == signature(b, y))
            && map.iter().all(|(&x, &y)| {
                map.iter().all(|(&x2, &y2)| x2 <= x || a.edge(x, x2) == b.edge(y, y2))
            })
    }

    fn extend(
        a: &Diagram,
        b: &Diagram,
        order: &[V],
        i: usize,
        map: &mut BTreeMap<V, V>,
        used: &mut BTreeMap<V, V>,
    ) -> bool {
        let Some(&x) = order.get(i) else { return true };
        let sig = signature(a, x);
        let candidates: Vec<V> = b.vertices().filter(|y| !used.contains_key(y) && signature(b, *y) == sig).collect();
        for y in candidates {
            let ok = map.iter().all(|(&x2, &y2)| a.edge(x, x2) == b.edge(y, y2));
            if !ok {
                continue;
            }
            map.insert(x, y);
            used.insert(y, x);
            if extend(a, b, order, i + 1, map, used) {
                return true;
            }
            map.remove(&x);
            used.remove(&y);
        }
        false
    }
}
