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

//! # Agent rewrite rules
//!
//! Seven rules act on [`Diagram`]s, each in both colors:
//!
//! | rule           | anchor          | effect                                                       |
//! |----------------|-----------------|--------------------------------------------------------------|
//! | `Fuse`         | `[u, v]`        | merge same-color spiders joined by a plain wire, add phases  |
//! | `Unfuse`       | `[v]`           | replace a spider of degree > 3 by a complete graph           |
//! | `PiCommute`    | `[p, n]`        | push a degree-2 π spider through an opposite-color neighbor  |
//! | `ColorChange`  | `[v]`           | flip color, toggle every incident wire                       |
//! | `Bialgebra`    | `[u, v]`        | Z(0)–X(0) pair becomes a complete bipartite graph            |
//! | `EulerExpand`  | `[u, v]`        | one Hadamard wire becomes Z(π/2)–X(π/2)–Z(π/2)               |
//! | `EulerContract`| `[a, m, b]`     | inverse of `EulerExpand`                                     |
//!
//! Every application is followed by [`cleanup`]. Matches are only valid for
//! the exact diagram they were enumerated on; applying a stale match is an
//! error rather than a no-op.

mod cleanup;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::zx::{Diagram, EdgeCount, EdgeKind, Phase, VertexKind, V};

pub use cleanup::{cleanup, cleanup_in_place};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleKind {
    Fuse,
    Unfuse,
    PiCommute,
    ColorChange,
    Bialgebra,
    EulerExpand,
    EulerContract,
}

impl RuleKind {
    pub const ALL: [RuleKind; 7] = [
        RuleKind::Fuse,
        RuleKind::Unfuse,
        RuleKind::PiCommute,
        RuleKind::ColorChange,
        RuleKind::Bialgebra,
        RuleKind::EulerExpand,
        RuleKind::EulerContract,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Fuse => "fuse",
            RuleKind::Unfuse => "unfuse",
            RuleKind::PiCommute => "pi-commute",
            RuleKind::ColorChange => "color-change",
            RuleKind::Bialgebra => "bialgebra",
            RuleKind::EulerExpand => "euler-expand",
            RuleKind::EulerContract => "euler-contract",
        }
    }
}

/// An applicable rewrite: the action of the search.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Match {
    pub rule: RuleKind,
    pub anchor: Vec<V>,
}

impl Match {
    pub fn new(rule: RuleKind, anchor: Vec<V>) -> Match {
        Match { rule, anchor }
    }
}

impl fmt::Display for Match {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.anchor.iter().map(ToString::to_string).collect();
        write!(f, "{}:{}", self.rule.name(), ids.join("-"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("match {0} is not applicable to this diagram")]
    InvalidMatch(Match),
}

fn opposite(a: VertexKind, b: VertexKind) -> bool {
    a.is_spider() && b.is_spider() && a != b
}

/// Every `(neighbor, kind)` wire at `v`, one entry per parallel wire.
fn wires(d: &Diagram, v: V) -> Vec<(V, EdgeKind)> {
    d.neighbors(v).flat_map(|(w, e)| e.kinds().map(move |k| (w, k))).collect()
}

/// For a degree-2 spider whose two wires end at distinct vertices, those ends.
fn two_distinct_ends(d: &Diagram, v: V) -> Option<[(V, EdgeKind); 2]> {
    if d.degree(v) != 2 || !d.self_loops(v).is_empty() {
        return None;
    }
    match wires(d, v)[..] {
        [a, b] if a.0 != b.0 => Some([a, b]),
        _ => None,
    }
}

fn check_fuse(d: &Diagram, u: V, v: V) -> bool {
    u < v && d.is_spider(u) && d.kind(u) == d.kind(v) && d.edge(u, v).simple >= 1
}

fn check_unfuse(d: &Diagram, v: V) -> bool {
    d.is_spider(v) && d.self_loops(v).is_empty() && d.degree(v) > 3
}

fn check_pi_commute(d: &Diagram, p: V, n: V) -> bool {
    if !d.is_spider(p) || !d.phase(p).is_pi() || !opposite(d.kind(p), d.kind(n)) {
        return false;
    }
    let Some(ends) = two_distinct_ends(d, p) else { return false };
    ends.contains(&(n, EdgeKind::Simple)) && d.self_loops(n).is_empty()
}

fn check_bialgebra(d: &Diagram, u: V, v: V) -> bool {
    u < v
        && opposite(d.kind(u), d.kind(v))
        && d.phase(u).is_zero()
        && d.phase(v).is_zero()
        && d.edge(u, v) == EdgeCount::of(EdgeKind::Simple)
        && d.self_loops(u).is_empty()
        && d.self_loops(v).is_empty()
}

fn check_euler_expand(d: &Diagram, u: V, v: V) -> bool {
    u < v && d.edge(u, v).hadamard >= 1
}

fn check_euler_contract(d: &Diagram, a: V, m: V, b: V) -> bool {
    if !d.is_spider(m) || !d.phase(m).is_proper_clifford() || d.phase(m) != Phase::HALF_PI {
        return false;
    }
    let Some([(x, kx), (y, ky)]) = two_distinct_ends(d, m) else { return false };
    let ok_end = |e: V| opposite(d.kind(e), d.kind(m)) && d.phase(e) == Phase::HALF_PI;
    a < b
        && (x, y) == (a, b)
        && kx == EdgeKind::Simple
        && ky == EdgeKind::Simple
        && ok_end(a)
        && ok_end(b)
}

fn is_applicable(d: &Diagram, m: &Match) -> bool {
    let ids = &m.anchor;
    if ids.iter().any(|&v| !d.contains(v)) {
        return false;
    }
    match (m.rule, &ids[..]) {
        (RuleKind::Fuse, &[u, v]) => check_fuse(d, u, v),
        (RuleKind::Unfuse, &[v]) => check_unfuse(d, v),
        (RuleKind::PiCommute, &[p, n]) => check_pi_commute(d, p, n),
        (RuleKind::ColorChange, &[v]) => d.is_spider(v),
        (RuleKind::Bialgebra, &[u, v]) => check_bialgebra(d, u, v),
        (RuleKind::EulerExpand, &[u, v]) => check_euler_expand(d, u, v),
        (RuleKind::EulerContract, &[a, m, b]) => check_euler_contract(d, a, m, b),
        _ => false,
    }
}

/// All matches in canonical order (by rule, then anchor ids).
pub fn enumerate_matches(d: &Diagram) -> Vec<Match> {
    let mut out = Vec::new();
    for v in d.vertices() {
        let spider = d.is_spider(v);
        for (w, _) in d.neighbors(v) {
            if check_fuse(d, v, w) {
                out.push(Match::new(RuleKind::Fuse, vec![v, w]));
            }
            if check_pi_commute(d, v, w) {
                out.push(Match::new(RuleKind::PiCommute, vec![v, w]));
            }
            if check_bialgebra(d, v, w) {
                out.push(Match::new(RuleKind::Bialgebra, vec![v, w]));
            }
            if check_euler_expand(d, v, w) {
                out.push(Match::new(RuleKind::EulerExpand, vec![v, w]));
            }
        }
        if !spider {
            continue;
        }
        if check_unfuse(d, v) {
            out.push(Match::new(RuleKind::Unfuse, vec![v]));
        }
        out.push(Match::new(RuleKind::ColorChange, vec![v]));
        if let Some([(a, _), (b, _)]) = two_distinct_ends(d, v) {
            if check_euler_contract(d, a, v, b) {
                out.push(Match::new(RuleKind::EulerContract, vec![a, v, b]));
            }
        }
    }
    out.sort();
    out
}

/// Apply a match to a copy of `d`, then run [`cleanup`].
pub fn apply_rewrite(d: &Diagram, m: &Match) -> Result<Diagram, RewriteError> {
    if !is_applicable(d, m) {
        return Err(RewriteError::InvalidMatch(m.clone()));
    }
    let mut g = d.clone();
    match (m.rule, &m.anchor[..]) {
        (RuleKind::Fuse, &[u, v]) => fuse(&mut g, u, v),
        (RuleKind::Unfuse, &[v]) => unfuse(&mut g, v),
        (RuleKind::PiCommute, &[p, n]) => pi_commute(&mut g, p, n),
        (RuleKind::ColorChange, &[v]) => color_change(&mut g, v),
        (RuleKind::Bialgebra, &[u, v]) => bialgebra(&mut g, u, v),
        (RuleKind::EulerExpand, &[u, v]) => euler_expand(&mut g, u, v),
        (RuleKind::EulerContract, &[a, mid, b]) => euler_contract(&mut g, a, mid, b),
        _ => unreachable!("checked by is_applicable"),
    }
    cleanup_in_place(&mut g);
    Ok(g)
}

/// Merge `v` into `u`. Plain wires between them become plain self-loops,
/// Hadamard wires become Hadamard self-loops.
pub(crate) fn fuse(g: &mut Diagram, u: V, v: V) {
    let between = g.edge(u, v);
    let mut loops = g.self_loops(u);
    let vl = g.self_loops(v);
    loops.simple += vl.simple + between.simple;
    loops.hadamard += vl.hadamard + between.hadamard;
    g.add_to_phase(u, g.phase(v));
    let rest: Vec<(V, EdgeCount)> = g.neighbors(v).filter(|&(w, _)| w != u).collect();
    g.remove_vertex(v);
    for (w, e) in rest {
        g.add_edges(u, w, e);
    }
    g.set_edge(u, u, loops);
}

fn unfuse(g: &mut Diagram, v: V) {
    let kind = g.kind(v);
    let phase = g.phase(v);
    let ws = wires(g, v);
    g.remove_vertex(v);
    let fresh: Vec<V> = (0..ws.len())
        .map(|i| g.add_spider(kind, if i == 0 { phase } else { Phase::ZERO }))
        .collect();
    for (i, &a) in fresh.iter().enumerate() {
        for &b in &fresh[i + 1..] {
            g.add_edge(a, b, EdgeKind::Simple);
        }
    }
    for (&s, &(w, k)) in fresh.iter().zip(&ws) {
        g.add_edge(s, w, k);
    }
}

fn pi_commute(g: &mut Diagram, p: V, n: V) {
    let pkind = g.kind(p);
    let [e0, e1] = two_distinct_ends(g, p).expect("checked");
    let (a, ka) = if e0 == (n, EdgeKind::Simple) { e1 } else { e0 };
    g.remove_vertex(p);
    for (w, k) in wires(g, n) {
        g.remove_edge(n, w, k);
        let s = g.add_spider(pkind, Phase::PI);
        g.add_edge(n, s, EdgeKind::Simple);
        g.add_edge(s, w, k);
    }
    let neg = -g.phase(n);
    g.set_phase(n, neg);
    g.add_edge(a, n, ka);
}

pub(crate) fn color_change(g: &mut Diagram, v: V) {
    g.set_kind(v, g.kind(v).flipped());
    let nbrs: Vec<(V, EdgeCount)> = g.neighbors(v).collect();
    for (w, e) in nbrs {
        g.set_edge(v, w, e.toggled());
    }
}

fn bialgebra(g: &mut Diagram, u: V, v: V) {
    let u_wires: Vec<(V, EdgeKind)> = wires(g, u).into_iter().filter(|&(w, _)| w != v).collect();
    let v_wires: Vec<(V, EdgeKind)> = wires(g, v).into_iter().filter(|&(w, _)| w != u).collect();
    let (uk, vk) = (g.kind(u), g.kind(v));
    g.remove_vertex(u);
    g.remove_vertex(v);
    // each external wire of u lands on a new spider of v's color and vice versa
    let for_u: Vec<V> = u_wires.iter().map(|_| g.add_spider(vk, Phase::ZERO)).collect();
    let for_v: Vec<V> = v_wires.iter().map(|_| g.add_spider(uk, Phase::ZERO)).collect();
    for &a in &for_u {
        for &b in &for_v {
            g.add_edge(a, b, EdgeKind::Simple);
        }
    }
    for (&s, &(w, k)) in for_u.iter().zip(&u_wires).chain(for_v.iter().zip(&v_wires)) {
        g.add_edge(s, w, k);
    }
}

fn euler_expand(g: &mut Diagram, u: V, v: V) {
    g.remove_edge(u, v, EdgeKind::Hadamard);
    let a = g.add_spider(VertexKind::Z, Phase::HALF_PI);
    let m = g.add_spider(VertexKind::X, Phase::HALF_PI);
    let b = g.add_spider(VertexKind::Z, Phase::HALF_PI);
    g.add_edge(u, a, EdgeKind::Simple);
    g.add_edge(a, m, EdgeKind::Simple);
    g.add_edge(m, b, EdgeKind::Simple);
    g.add_edge(b, v, EdgeKind::Simple);
}

fn euler_contract(g: &mut Diagram, a: V, m: V, b: V) {
    g.remove_vertex(m);
    g.add_to_phase(a, Phase::MINUS_HALF_PI);
    g.add_to_phase(b, Phase::MINUS_HALF_PI);
    g.add_edge(a, b, EdgeKind::Hadamard);
}
