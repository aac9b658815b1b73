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

//! Automatic simplifications run after every agent rewrite.

use crate::zx::{Diagram, EdgeCount, EdgeKind, Phase, V};

/// Apply until nothing changes:
///
/// * phase-0 spiders with exactly two wires are removed and the wires spliced
/// * plain wire pairs between opposite-color spiders cancel (mod 2)
/// * plain self-loops are dropped
/// * each Hadamard self-loop is dropped and adds π to the phase
/// * spiders with no wires left are dropped (they are scalars)
pub fn cleanup(d: &Diagram) -> Diagram {
    let mut d = d.clone();
    cleanup_in_place(&mut d);
    d
}

pub fn cleanup_in_place(d: &mut Diagram) {
    loop {
        let mut changed = false;
        let spiders: Vec<V> = d.spiders().collect();
        for v in spiders {
            if !d.contains(v) {
                continue;
            }
            changed |= clean_vertex(d, v);
        }
        if !changed {
            break;
        }
    }
}

fn clean_vertex(d: &mut Diagram, v: V) -> bool {
    let mut changed = false;
    let loops = d.self_loops(v);
    if !loops.is_empty() {
        if loops.hadamard % 2 == 1 {
            d.add_to_phase(v, Phase::PI);
        }
        d.set_edge(v, v, EdgeCount::default());
        changed = true;
    }
    let kind = d.kind(v);
    let hopf: Vec<(V, EdgeCount)> = d
        .neighbors(v)
        .filter(|&(w, e)| d.is_spider(w) && d.kind(w) != kind && e.simple >= 2)
        .collect();
    for (w, mut e) in hopf {
        e.simple %= 2;
        d.set_edge(v, w, e);
        changed = true;
    }
    let deg = d.degree(v);
    if deg == 0 {
        d.remove_vertex(v);
        return true;
    }
    if deg == 2 && d.phase(v).is_zero() {
        let wires: Vec<(V, EdgeKind)> = d.neighbors(v).flat_map(|(w, e)| e.kinds().map(move |k| (w, k))).collect();
        let [(a, ka), (b, kb)] = wires[..] else { unreachable!("degree 2 without self-loops") };
        d.remove_vertex(v);
        d.add_edge(a, b, ka.compose(kb));
        changed = true;
    }
    changed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zx::{diagram_to_tensor, equal_up_to_scalar, VertexKind};

    fn line(kinds: &[(VertexKind, Phase)]) -> (Diagram, Vec<V>) {
        let mut d = Diagram::new();
        let i = d.add_input();
        let mut prev = i;
        let mut vs = vec![];
        for &(k, p) in kinds {
            let v = d.add_spider(k, p);
            d.add_edge(prev, v, EdgeKind::Simple);
            prev = v;
            vs.push(v);
        }
        let o = d.add_output();
        d.add_edge(prev, o, EdgeKind::Simple);
        (d, vs)
    }

    #[test]
    fn identity_spider_removed() {
        let (d, _) = line(&[(VertexKind::Z, Phase::ZERO)]);
        let c = cleanup(&d);
        assert_eq!(c.num_vertices(), 2);
        assert_eq!(c.edge(c.inputs()[0], c.outputs()[0]), EdgeCount::of(EdgeKind::Simple));
    }

    #[test]
    fn splice_composes_edge_kinds() {
        let (mut d, vs) = line(&[(VertexKind::Z, Phase::PI), (VertexKind::X, Phase::ZERO), (VertexKind::Z, Phase::PI)]);
        let (a, m, b) = (vs[0], vs[1], vs[2]);
        d.set_edge(a, m, EdgeCount::of(EdgeKind::Hadamard));
        let c = cleanup(&d);
        assert!(!c.contains(m));
        assert_eq!(c.edge(a, b), EdgeCount::of(EdgeKind::Hadamard));
        assert!(equal_up_to_scalar(&diagram_to_tensor(&c).unwrap(), &diagram_to_tensor(&d).unwrap(), 1e-12).unwrap());
    }

    #[test]
    fn opposite_color_wire_pairs_cancel() {
        let mut d = Diagram::new();
        let i0 = d.add_input();
        let i1 = d.add_input();
        let z = d.add_spider(VertexKind::Z, Phase::QUARTER_PI);
        let x = d.add_spider(VertexKind::X, Phase::QUARTER_PI);
        let o0 = d.add_output();
        let o1 = d.add_output();
        d.add_edge(i0, z, EdgeKind::Simple);
        d.add_edge(z, o0, EdgeKind::Simple);
        d.add_edge(i1, x, EdgeKind::Simple);
        d.add_edge(x, o1, EdgeKind::Simple);
        d.add_edges(z, x, EdgeCount { simple: 2, hadamard: 0 });
        let c = cleanup(&d);
        assert!(c.edge(z, x).is_empty());
        assert!(equal_up_to_scalar(&diagram_to_tensor(&c).unwrap(), &diagram_to_tensor(&d).unwrap(), 1e-12).unwrap());
    }

    #[test]
    fn self_loops_resolved() {
        let (mut d, vs) = line(&[(VertexKind::X, Phase::HALF_PI)]);
        d.add_edge(vs[0], vs[0], EdgeKind::Hadamard);
        d.add_edge(vs[0], vs[0], EdgeKind::Simple);
        let c = cleanup(&d);
        assert!(c.self_loops(vs[0]).is_empty());
        assert_eq!(c.phase(vs[0]), Phase::new(3, 2));
        assert!(equal_up_to_scalar(&diagram_to_tensor(&c).unwrap(), &diagram_to_tensor(&d).unwrap(), 1e-12).unwrap());
    }

    #[test]
    fn fixpoint_unchanged() {
        let (d, _) = line(&[(VertexKind::Z, Phase::QUARTER_PI), (VertexKind::X, Phase::HALF_PI)]);
        assert_eq!(cleanup(&d), d);
    }
}
