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

//! Right-to-left frontier extraction.

use std::collections::BTreeSet;

use super::graphlike::{detach_boundary, GraphLike};
use crate::zx::{Circuit, Diagram, EdgeCount, EdgeKind, Gate, Phase, VertexKind, V};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("diagram has {inputs} inputs but {outputs} outputs")]
    NotUnitary { inputs: usize, outputs: usize },
    #[error("extraction stuck with {remaining} spiders left")]
    Stuck { remaining: usize },
}

struct Extractor {
    g: Diagram,
    frontier: Vec<Option<V>>,
    /// Gates from the output side inwards.
    tail: Vec<Gate>,
}

impl Extractor {
    fn output_wire(&self, q: usize) -> (V, EdgeKind) {
        let (w, e) = self.g.neighbors(self.g.outputs()[q]).next().expect("dangling output");
        (w, e.kinds().next().expect("output wire"))
    }

    /// Make `w` the frontier spider of qubit `q`, pulling a Hadamard off the
    /// output wire if there is one.
    fn set_frontier(&mut self, q: usize) {
        let o = self.g.outputs()[q];
        let (w, kind) = self.output_wire(q);
        if !self.g.is_spider(w) {
            self.frontier[q] = None;
            return;
        }
        if kind == EdgeKind::Hadamard {
            self.tail.push(Gate::H(q));
            self.g.set_edge(o, w, EdgeCount::of(EdgeKind::Simple));
        }
        self.frontier[q] = Some(w);
    }

    fn spider_neighbors(&self, v: V) -> Vec<V> {
        self.g.neighbors(v).map(|(w, _)| w).filter(|&w| self.g.is_spider(w)).collect()
    }

    fn input_neighbor(&self, v: V) -> Option<V> {
        self.g.neighbors(v).map(|(w, _)| w).find(|&w| matches!(self.g.kind(w), VertexKind::Input(_)))
    }

    fn clean_frontier(&mut self) {
        let n = self.frontier.len();
        for q in 0..n {
            let Some(v) = self.frontier[q] else { continue };
            let p = self.g.phase(v);
            if !p.is_zero() {
                self.tail.push(Gate::Rz(q, p));
                self.g.set_phase(v, Phase::ZERO);
            }
        }
        for q in 0..n {
            for r in q + 1..n {
                let (Some(a), Some(b)) = (self.frontier[q], self.frontier[r]) else { continue };
                if self.g.edge(a, b).hadamard > 0 {
                    self.tail.push(Gate::Cz(q, r));
                    self.g.set_edge(a, b, EdgeCount::default());
                }
            }
        }
    }

    /// Frontier qubits that still have spiders behind them, after moving any
    /// input wire off such a spider.
    fn active_rows(&mut self) -> Vec<usize> {
        let mut rows = vec![];
        for q in 0..self.frontier.len() {
            let Some(v) = self.frontier[q] else { continue };
            if self.spider_neighbors(v).is_empty() {
                continue;
            }
            if let Some(i) = self.input_neighbor(v) {
                detach_boundary(&mut self.g, i, v);
            }
            rows.push(q);
        }
        rows
    }

    fn toggle(&mut self, a: V, b: V) {
        let e = if self.g.edge(a, b).hadamard > 0 { EdgeCount::default() } else { EdgeCount::of(EdgeKind::Hadamard) };
        self.g.set_edge(a, b, e);
    }

    /// Mirror row operations `row[t] ^= row[c]` in the diagram and emit
    /// them as CNOTs.
    fn apply_ops(&mut self, ops: &[(usize, usize)], rows: &[usize], cols: &[V]) {
        for &(t, c) in ops {
            let (vt, vc) = (self.frontier[rows[t]].unwrap(), self.frontier[rows[c]].unwrap());
            for &w in cols {
                if self.g.edge(vc, w).hadamard > 0 {
                    self.toggle(vt, w);
                }
            }
            self.tail.push(Gate::cnot(rows[t], rows[c]));
        }
    }

    /// Input index reached by qubit `q` if it is already finished.
    fn settled_input(&self, q: usize) -> Option<usize> {
        let i = match self.frontier[q] {
            None => self.output_wire(q).0,
            Some(v) if self.spider_neighbors(v).is_empty() => self.input_neighbor(v)?,
            Some(_) => return None,
        };
        match self.g.kind(i) {
            VertexKind::Input(p) => Some(p),
            _ => None,
        }
    }

    fn input_of(&self, w: V) -> Option<usize> {
        match self.input_neighbor(w).map(|i| self.g.kind(i)) {
            Some(VertexKind::Input(p)) => Some(p),
            _ => None,
        }
    }

    /// When every remaining column sits on an input, pick the column order
    /// whose elimination plus final swaps is cheapest.
    fn final_order(&self, m: &[Vec<bool>], rows: &[usize], cols: &[V]) -> Option<(Vec<usize>, Vec<(usize, usize)>)> {
        if cols.len() != rows.len() || rows.len() > MAX_ORDERED {
            return None;
        }
        let inputs: Vec<usize> = cols.iter().map(|&w| self.input_of(w)).collect::<Option<_>>()?;
        let mut perm: Vec<Option<usize>> = (0..self.frontier.len()).map(|q| self.settled_input(q)).collect();
        let mut best: Option<(usize, Vec<usize>, Vec<(usize, usize)>)> = None;
        for order in permutations(cols.len()) {
            let mut mm: Vec<Vec<bool>> = m.iter().map(|row| order.iter().map(|&j| row[j]).collect()).collect();
            let ops = match small_ops(&mm) {
                Some(ops) => ops,
                None => {
                    let ops = gauss_ops(&mut mm);
                    if (0..mm.len()).any(|r| !mm[r][r]) {
                        return None;
                    }
                    ops
                }
            };
            for (r, &q) in rows.iter().enumerate() {
                perm[q] = Some(inputs[order[r]]);
            }
            let Some(full) = perm.iter().copied().collect::<Option<Vec<usize>>>() else { return None };
            let cost = ops.len() + 3 * swap_count(&full);
            if best.as_ref().is_none_or(|(c, _, _)| cost < *c) {
                best = Some((cost, order, ops));
            }
        }
        best.map(|(_, order, ops)| (order, ops))
    }

    /// One round: returns the number of spiders moved past.
    fn step(&mut self) -> Option<usize> {
        self.clean_frontier();
        let rows = self.active_rows();
        if rows.is_empty() {
            return None;
        }
        let mut cols: Vec<V> = rows
            .iter()
            .flat_map(|&q| self.spider_neighbors(self.frontier[q].unwrap()))
            .collect::<BTreeSet<V>>()
            .into_iter()
            .collect();
        let mut m: Vec<Vec<bool>> = rows
            .iter()
            .map(|&q| {
                let v = self.frontier[q].unwrap();
                cols.iter().map(|&w| self.g.edge(v, w).hadamard > 0).collect()
            })
            .collect();
        let single = |row: &Vec<bool>| row.iter().filter(|&&b| b).count() == 1;
        if let Some((order, ops)) = self.final_order(&m, &rows, &cols) {
            cols = order.iter().map(|&j| cols[j]).collect();
            m = m.iter().map(|row| order.iter().map(|&j| row[j]).collect()).collect();
            apply_to_matrix(&mut m, &ops);
            self.apply_ops(&ops, &rows, &cols);
        } else if !m.iter().any(single) {
            let ops = match greedy_ops(&m) {
                Some(ops) => {
                    apply_to_matrix(&mut m, &ops);
                    ops
                }
                None => gauss_ops(&mut m),
            };
            self.apply_ops(&ops, &rows, &cols);
        }
        let mut used = BTreeSet::new();
        let mut moved = 0;
        for (r, &q) in rows.iter().enumerate() {
            if !single(&m[r]) {
                continue;
            }
            let j = m[r].iter().position(|&b| b).unwrap();
            if !used.insert(j) {
                continue;
            }
            let v = self.frontier[q].unwrap();
            let o = self.g.outputs()[q];
            self.g.remove_vertex(v);
            self.g.add_edge(o, cols[j], EdgeKind::Hadamard);
            self.set_frontier(q);
            moved += 1;
        }
        Some(moved)
    }

    fn finish(mut self) -> Result<Circuit, ExtractError> {
        let n = self.frontier.len();
        let mut perm = vec![usize::MAX; n];
        let mut hadamard = vec![false; n];
        let mut seen = BTreeSet::new();
        for q in 0..n {
            let (i, kind) = match self.frontier[q] {
                None => self.output_wire(q),
                Some(v) => {
                    let i = self.input_neighbor(v).filter(|_| self.g.degree(v) == 2);
                    let Some(i) = i else { return Err(self.stuck()) };
                    let k = self.g.edge(v, i).kinds().next().unwrap();
                    seen.insert(v);
                    (i, k)
                }
            };
            let VertexKind::Input(p) = self.g.kind(i) else { return Err(self.stuck()) };
            perm[q] = p;
            hadamard[p] = kind == EdgeKind::Hadamard;
        }
        if self.g.spiders().any(|v| !seen.contains(&v)) {
            return Err(self.stuck());
        }
        let mut gates: Vec<Gate> = (0..n).filter(|&p| hadamard[p]).map(Gate::H).collect();
        let mut at: Vec<usize> = (0..n).collect();
        for q in 0..n {
            if at[q] != perm[q] {
                let j = at.iter().position(|&p| p == perm[q]).unwrap();
                gates.push(Gate::Swap(q, j));
                at.swap(q, j);
            }
        }
        gates.extend(self.tail.drain(..).rev());
        Ok(Circuit { width: n, gates })
    }

    fn stuck(&self) -> ExtractError {
        ExtractError::Stuck { remaining: self.g.spiders().count() }
    }
}

/// Largest final elimination whose column order is searched exhaustively.
const MAX_ORDERED: usize = 6;

/// Row operations `row[t] ^= row[c]` of a Gauss-Jordan elimination: leftmost
/// column first, topmost pivot row, a missing pivot is filled by adding the
/// first row below that has it.
fn gauss_ops(m: &mut [Vec<bool>]) -> Vec<(usize, usize)> {
    let mut ops = vec![];
    let mut add = |m: &mut [Vec<bool>], t: usize, c: usize| {
        for j in 0..m[c].len() {
            if m[c][j] {
                m[t][j] ^= true;
            }
        }
        ops.push((t, c));
    };
    let mut pr = 0;
    for col in 0..m.first().map_or(0, Vec::len) {
        if pr == m.len() {
            break;
        }
        let Some(r) = (pr..m.len()).find(|&r| m[r][col]) else { continue };
        if r != pr {
            add(m, pr, r);
        }
        for r2 in 0..m.len() {
            if r2 != pr && m[r2][col] {
                add(m, r2, pr);
            }
        }
        pr += 1;
    }
    ops
}

/// Optimal elimination for at most four rows, from the shared distance table.
fn small_ops(m: &[Vec<bool>]) -> Option<Vec<(usize, usize)>> {
    use crate::zx::linear::{CnotDistanceTable, IDENTITY, WIDTH};
    let k = m.len();
    if k > WIDTH || m.iter().any(|row| row.len() != k) {
        return None;
    }
    let mut x = IDENTITY;
    for (r, row) in m.iter().enumerate() {
        x &= !(0xF << (4 * r));
        for (c, &b) in row.iter().enumerate() {
            if b {
                x |= 1 << (4 * r + c);
            }
        }
    }
    let ops = CnotDistanceTable::global().synthesize(x, k)?;
    Some(ops.into_iter().map(|(c, t)| (t, c)).collect())
}

fn apply_to_matrix(m: &mut [Vec<bool>], ops: &[(usize, usize)]) {
    for &(t, c) in ops {
        for j in 0..m[c].len() {
            if m[c][j] {
                m[t][j] ^= true;
            }
        }
    }
}

/// Largest row count for the subset search in [`greedy_ops`].
const MAX_GREEDY_ROWS: usize = 12;

/// Fewest row additions that leave some row with a single 1: the smallest set
/// of rows whose sum has weight one, all added onto its first member.
fn greedy_ops(m: &[Vec<bool>]) -> Option<Vec<(usize, usize)>> {
    let k = m.len();
    if k > MAX_GREEDY_ROWS {
        return None;
    }
    for size in 2..=k as u32 {
        for mask in 1u32..1 << k {
            if mask.count_ones() != size {
                continue;
            }
            let members: Vec<usize> = (0..k).filter(|&r| mask >> r & 1 == 1).collect();
            let weight = (0..m[0].len()).filter(|&j| members.iter().filter(|&&r| m[r][j]).count() % 2 == 1).count();
            if weight == 1 {
                return Some(members[1..].iter().map(|&c| (members[0], c)).collect());
            }
        }
    }
    None
}

/// Transpositions needed to realize `perm`.
fn swap_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for i in 0..perm.len() {
        if !seen[i] {
            cycles += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
            }
        }
    }
    perm.len() - cycles
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Extract a circuit from a graph-like diagram, working from the outputs
/// towards the inputs.
pub fn extract_circuit(g: &GraphLike) -> Result<Circuit, ExtractError> {
    let d: Diagram = (**g).clone();
    let (inputs, outputs) = (d.inputs().len(), d.outputs().len());
    if inputs != outputs {
        return Err(ExtractError::NotUnitary { inputs, outputs });
    }
    let mut ex = Extractor { g: d, frontier: vec![None; outputs], tail: vec![] };
    for q in 0..outputs {
        ex.set_frontier(q);
    }
    loop {
        match ex.step() {
            None => break,
            Some(0) => return Err(ex.stuck()),
            Some(_) => {}
        }
    }
    ex.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{random_circuit, GateRatios};
    use crate::extract::{extract_with_levels, simplify_level, to_graph_like};
    use crate::zx::{circuit_to_diagram, circuit_to_unitary, equal_up_to_scalar};

    fn same(a: &Circuit, b: &Circuit) -> bool {
        equal_up_to_scalar(&circuit_to_unitary(a).unwrap(), &circuit_to_unitary(b).unwrap(), 1e-9).unwrap()
    }

    #[test]
    fn identity_wire_is_empty() {
        let c = Circuit::new(2);
        let out = extract_circuit(&to_graph_like(&circuit_to_diagram(&c))).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn single_cnot() {
        for (a, b) in [(0, 1), (1, 0)] {
            let c = Circuit::with_gates(2, vec![Gate::cnot(a, b)]).unwrap();
            let out = extract_circuit(&to_graph_like(&circuit_to_diagram(&c))).unwrap();
            assert_eq!(out.two_qubit_count(), 1, "{out:?}");
            assert!(same(&c, &out), "{out:?}");
        }
    }

    #[test]
    fn random_round_trips_every_level() {
        for seed in 0..60 {
            let ratios = [GateRatios::mixed(), GateRatios::uniform(), GateRatios::cnot_only()][seed as usize % 3];
            let c = random_circuit(4, 30, &ratios, seed).unwrap();
            let g = to_graph_like(&circuit_to_diagram(&c));
            for level in 1..=5 {
                let out = extract_circuit(&simplify_level(&g, level)).unwrap();
                assert!(same(&c, &out), "seed {seed} level {level}");
            }
        }
    }

    #[test]
    fn plain_circuits_extract_at_level_one() {
        for seed in 0..20 {
            let c = random_circuit(5, 80, &GateRatios::mixed(), seed).unwrap();
            let r = extract_with_levels(&circuit_to_diagram(&c)).unwrap();
            assert_eq!(r.level_used, 1);
            assert!(same(&c, &r.circuit), "seed {seed}");
        }
    }
}
