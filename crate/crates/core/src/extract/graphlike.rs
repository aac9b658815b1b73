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

//! Graph-like normal form, local complementation and pivoting.

use std::collections::BTreeSet;
use std::ops::Deref;

use crate::rewrite::{color_change, fuse};
use crate::zx::{Diagram, EdgeCount, EdgeKind, Phase, VertexKind, V};

/// A diagram of Z spiders joined by single Hadamard wires, without self-loops.
/// A boundary hangs off a single wire of either kind, and each spider touches
/// at most one input and at most one output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphLike(Diagram);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphLikeError {
    #[error("{0}")]
    NotApplicable(String),
    #[error("diagram is not graph-like: {0}")]
    NotGraphLike(String),
}

impl Deref for GraphLike {
    type Target = Diagram;
    fn deref(&self) -> &Diagram {
        &self.0
    }
}

impl GraphLike {
    /// Wrap a diagram that is already graph-like.
    pub fn new(d: Diagram) -> Result<GraphLike, GraphLikeError> {
        check_graph_like(&d)?;
        Ok(GraphLike(d))
    }

    pub fn into_diagram(self) -> Diagram {
        self.0
    }

    pub fn boundary_neighbor(&self, v: V) -> Option<V> {
        boundary_neighbor(&self.0, v)
    }

    /// True if `u` and `v` are joined by a Hadamard wire.
    pub fn connected(&self, u: V, v: V) -> bool {
        self.0.edge(u, v).hadamard > 0
    }

    fn toggle(&mut self, u: V, v: V) {
        let e = if self.connected(u, v) { EdgeCount::default() } else { EdgeCount::of(EdgeKind::Hadamard) };
        self.0.set_edge(u, v, e);
    }

    /// Spider neighbors of `v`.
    pub fn spider_neighbors(&self, v: V) -> Vec<V> {
        self.0.neighbors(v).map(|(w, _)| w).filter(|&w| self.0.is_spider(w)).collect()
    }
}

fn boundary_neighbor(d: &Diagram, v: V) -> Option<V> {
    d.neighbors(v).map(|(w, _)| w).find(|&w| d.is_boundary(w))
}

fn check_graph_like(d: &Diagram) -> Result<(), GraphLikeError> {
    let bad = |s: String| Err(GraphLikeError::NotGraphLike(s));
    for v in d.vertices() {
        if !d.self_loops(v).is_empty() {
            return bad(format!("self-loop at {v}"));
        }
        match d.kind(v) {
            VertexKind::X => return bad(format!("X spider {v}")),
            VertexKind::Z => {
                let (mut ins, mut outs) = (0, 0);
                for (w, e) in d.neighbors(v) {
                    if d.is_boundary(w) {
                        match d.kind(w) {
                            VertexKind::Input(_) => ins += 1,
                            _ => outs += 1,
                        }
                        if e.total() != 1 {
                            return bad(format!("boundary wire {w}-{v} is not a single wire"));
                        }
                    } else if e != EdgeCount::of(EdgeKind::Hadamard) {
                        return bad(format!("wire {v}-{w} is not a single Hadamard wire"));
                    }
                }
                if ins > 1 || outs > 1 {
                    return bad(format!("spider {v} touches {ins} inputs and {outs} outputs"));
                }
            }
            _ => {}
        }
    }
    Ok(())
}

/// Convert any diagram to graph-like form.
pub fn to_graph_like(d: &Diagram) -> GraphLike {
    let mut g = d.clone();
    let xs: Vec<V> = g.spiders().filter(|&v| g.kind(v) == VertexKind::X).collect();
    for v in xs {
        color_change(&mut g, v);
    }
    loop {
        let pair = g.spiders().find_map(|v| {
            g.neighbors(v).find(|&(w, e)| w > v && e.simple > 0 && g.is_spider(w)).map(|(w, _)| (v, w))
        });
        let Some((u, v)) = pair else { break };
        fuse(&mut g, u, v);
    }
    let spiders: Vec<V> = g.spiders().collect();
    for v in spiders {
        let loops = g.self_loops(v);
        if loops.hadamard % 2 == 1 {
            g.add_to_phase(v, Phase::PI);
        }
        g.set_edge(v, v, EdgeCount::default());
        let nbrs: Vec<(V, EdgeCount)> = g.neighbors(v).filter(|&(w, _)| w > v && g.is_spider(w)).collect();
        for (w, e) in nbrs {
            g.set_edge(v, w, EdgeCount { simple: 0, hadamard: e.hadamard % 2 });
        }
    }
    let boundaries: Vec<V> = g.inputs().iter().chain(g.outputs()).copied().collect();
    let mut claimed = BTreeSet::new();
    for b in boundaries {
        let side = matches!(g.kind(b), VertexKind::Output(_));
        let Some((v, _)) = g.neighbors(b).next() else { continue };
        if !g.is_spider(v) {
            continue;
        }
        if !claimed.insert((side, v)) {
            detach_boundary(&mut g, b, v);
        }
    }
    let isolated: Vec<V> = g.spiders().filter(|&v| g.degree(v) == 0).collect();
    for v in isolated {
        g.remove_vertex(v);
    }
    debug_assert!(check_graph_like(&g).is_ok(), "{:?}", check_graph_like(&g));
    GraphLike(g)
}

/// Replace the wire `b`-`v` by `b`-`w`-H-`v` with a fresh phase-0 spider `w`.
pub(crate) fn detach_boundary(g: &mut Diagram, b: V, v: V) -> V {
    let kind = g.edge(b, v).kinds().next().expect("boundary wire");
    g.set_edge(b, v, EdgeCount::default());
    let w = g.add_spider(VertexKind::Z, Phase::ZERO);
    g.add_edge(b, w, kind.toggled());
    g.add_edge(w, v, EdgeKind::Hadamard);
    w
}

fn local_complement_unchecked(g: &mut GraphLike, v: V) {
    let nbrs = g.spider_neighbors(v);
    let p = g.phase(v);
    for (i, &a) in nbrs.iter().enumerate() {
        g.0.add_to_phase(a, -p);
        for &b in &nbrs[i + 1..] {
            g.toggle(a, b);
        }
    }
    g.0.remove_vertex(v);
}

/// Remove an interior ±π/2 spider, complementing its neighborhood.
pub fn local_complement(g: &GraphLike, v: V) -> Result<GraphLike, GraphLikeError> {
    if !g.contains(v) || !g.is_interior(v) || !g.phase(v).is_proper_clifford() {
        return Err(GraphLikeError::NotApplicable(format!("local complementation at {v}")));
    }
    let mut out = g.clone();
    local_complement_unchecked(&mut out, v);
    Ok(out)
}

fn pivot_unchecked(g: &mut GraphLike, u: V, v: V) {
    let nu: BTreeSet<V> = g.spider_neighbors(u).into_iter().filter(|&w| w != v).collect();
    let nv: BTreeSet<V> = g.spider_neighbors(v).into_iter().filter(|&w| w != u).collect();
    let only_u: Vec<V> = nu.difference(&nv).copied().collect();
    let only_v: Vec<V> = nv.difference(&nu).copied().collect();
    let common: Vec<V> = nu.intersection(&nv).copied().collect();
    for (xs, ys) in [(&only_u, &only_v), (&only_u, &common), (&only_v, &common)] {
        for &x in xs {
            for &y in ys {
                g.toggle(x, y);
            }
        }
    }
    let (pu, pv) = (g.phase(u), g.phase(v));
    for &w in &only_u {
        g.0.add_to_phase(w, pv);
    }
    for &w in &only_v {
        g.0.add_to_phase(w, pu);
    }
    for &w in &common {
        g.0.add_to_phase(w, pu + pv + Phase::PI);
    }
    g.0.remove_vertex(u);
    g.0.remove_vertex(v);
}

/// Remove an adjacent interior pair of Pauli spiders.
pub fn pivot(g: &GraphLike, u: V, v: V) -> Result<GraphLike, GraphLikeError> {
    let ok = u != v
        && g.contains(u)
        && g.contains(v)
        && g.is_interior(u)
        && g.is_interior(v)
        && g.phase(u).is_pauli()
        && g.phase(v).is_pauli()
        && g.connected(u, v);
    if !ok {
        return Err(GraphLikeError::NotApplicable(format!("pivot at {u}-{v}")));
    }
    let mut out = g.clone();
    pivot_unchecked(&mut out, u, v);
    Ok(out)
}

/// Degree bound of a simplification level; `None` is unbounded.
pub fn level_bound(level: u8) -> Option<usize> {
    match level {
        1 => Some(2),
        2 => Some(3),
        3 => Some(4),
        _ => None,
    }
}

fn within(g: &GraphLike, v: V, bound: Option<usize>) -> bool {
    bound.is_none_or(|b| g.degree(v) <= b)
}

/// One pass of local complementation and pivoting on bounded-degree interior
/// spiders. Returns true if anything changed.
fn interior_pass(g: &mut GraphLike, bound: Option<usize>) -> bool {
    let mut changed = false;
    let vs: Vec<V> = g.spiders().collect();
    for v in vs {
        if !g.contains(v) || !g.is_interior(v) || !within(g, v, bound) {
            continue;
        }
        let p = g.phase(v);
        if p.is_proper_clifford() {
            local_complement_unchecked(g, v);
            changed = true;
        } else if p.is_pauli() {
            let partner = g
                .spider_neighbors(v)
                .into_iter()
                .find(|&w| g.is_interior(w) && g.phase(w).is_pauli() && within(g, w, bound));
            if let Some(w) = partner {
                pivot_unchecked(g, v, w);
                changed = true;
            }
        }
    }
    changed
}

/// Drop interior phase-0 spiders with two wires, fusing their neighbors.
fn remove_identities(g: &mut GraphLike) -> bool {
    let mut changed = false;
    let vs: Vec<V> = g.spiders().collect();
    for v in vs {
        if !g.contains(v) || !g.is_interior(v) || g.degree(v) != 2 || !g.phase(v).is_zero() {
            continue;
        }
        let [a, b] = g.spider_neighbors(v)[..] else { continue };
        if g.boundary_neighbor(a).is_some() && g.boundary_neighbor(b).is_some() {
            continue;
        }
        let (keep, gone) = if g.boundary_neighbor(b).is_some() { (b, a) } else { (a, b) };
        g.0.remove_vertex(v);
        let p = g.phase(gone);
        let nbrs: Vec<V> = g.spider_neighbors(gone);
        g.0.remove_vertex(gone);
        g.0.add_to_phase(keep, p);
        for w in nbrs {
            if w == keep {
                // their Hadamard wire becomes a Hadamard self-loop
                g.0.add_to_phase(keep, Phase::PI);
            } else {
                g.toggle(keep, w);
            }
        }
        changed = true;
    }
    changed
}

/// Pivot an interior Pauli spider with a Pauli spider on exactly one boundary,
/// after moving that boundary onto a fresh spider. Each application removes
/// one interior spider.
fn boundary_pass(g: &mut GraphLike) -> bool {
    let vs: Vec<V> = g.spiders().collect();
    for u in vs {
        if !g.contains(u) || !g.is_interior(u) || !g.phase(u).is_pauli() {
            continue;
        }
        let partner = g.spider_neighbors(u).into_iter().find(|&w| {
            g.phase(w).is_pauli() && g.neighbors(w).filter(|&(x, _)| g.is_boundary(x)).count() == 1
        });
        let Some(v) = partner else { continue };
        let b = g.boundary_neighbor(v).expect("boundary neighbor");
        detach_boundary(&mut g.0, b, v);
        pivot_unchecked(g, u, v);
        return true;
    }
    false
}

fn side(g: &Diagram, v: V) -> Option<bool> {
    let mut side = None;
    for (w, _) in g.neighbors(v) {
        match g.kind(w) {
            VertexKind::Output(_) => return Some(true),
            VertexKind::Input(_) => side = Some(false),
            _ => {}
        }
    }
    side
}

/// Wires between spiders on the same boundary side; each becomes a CZ.
fn same_side_edges(g: &Diagram) -> usize {
    let mut n = 0;
    for v in g.spiders() {
        let Some(s) = side(g, v) else { continue };
        n += g.neighbors(v).filter(|&(w, _)| w > v && g.is_spider(w) && side(g, w) == Some(s)).count();
    }
    n
}

/// Pivot along a wire between two boundary spiders: both keep their
/// boundaries (moved onto fresh spiders), the graph between them changes.
fn boundary_edge_pivot(g: &mut GraphLike, u: V, v: V) {
    let bu = g.boundary_neighbor(u).expect("boundary");
    let bv = g.boundary_neighbor(v).expect("boundary");
    detach_boundary(&mut g.0, bu, u);
    detach_boundary(&mut g.0, bv, v);
    pivot_unchecked(g, u, v);
}

/// Greedily pivot along boundary-boundary wires while that lowers the number
/// of same-side wires.
fn reduce_boundary_czs(g: &mut GraphLike) {
    reduce_boundary_by(g, |h| Some(same_side_edges(h)));
}

/// Greedy descent over boundary-boundary pivots under `cost`; candidates with
/// no cost are skipped.
pub(crate) fn reduce_boundary_by(g: &mut GraphLike, cost: impl Fn(&GraphLike) -> Option<usize>) {
    let one_boundary = |g: &GraphLike, v: V| g.neighbors(v).filter(|&(w, _)| g.is_boundary(w)).count() == 1;
    let Some(mut current) = cost(g) else { return };
    loop {
        let mut best: Option<(usize, GraphLike)> = None;
        for u in g.spiders() {
            if !g.phase(u).is_pauli() || !one_boundary(g, u) {
                continue;
            }
            for v in g.spider_neighbors(u) {
                if v < u || !g.phase(v).is_pauli() || !one_boundary(g, v) {
                    continue;
                }
                let mut h = g.clone();
                boundary_edge_pivot(&mut h, u, v);
                let Some(c) = cost(&h) else { continue };
                if c < best.as_ref().map_or(current, |b| b.0) {
                    best = Some((c, h));
                }
            }
        }
        let Some((c, h)) = best else { break };
        *g = h;
        current = c;
    }
}

/// Pre-process for extraction. Levels 1-4 run local complementation and
/// pivoting on interior spiders of degree at most 2, 3, 4 and unbounded (a
/// pivot needs both ends within the bound). Level 5 adds identity removal
/// and boundary pivots.
pub fn simplify_level(g: &GraphLike, level: u8) -> GraphLike {
    let level = level.clamp(1, 5);
    let bound = level_bound(level);
    let mut out = g.clone();
    if level < 5 {
        while interior_pass(&mut out, bound) {}
        if level == 4 {
            reduce_boundary_czs(&mut out);
        }
        return out;
    }
    loop {
        while interior_pass(&mut out, None) | remove_identities(&mut out) {}
        if !boundary_pass(&mut out) {
            break;
        }
    }
    reduce_boundary_czs(&mut out);
    out
}
