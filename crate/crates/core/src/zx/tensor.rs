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

//! Dense linear-map semantics for diagrams and circuits.
//!
//! Used as ground truth for every rewrite and extraction. Rows are indexed by
//! output bits and columns by input bits, boundary 0 being the least
//! significant bit on both sides.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::circuit::{Circuit, Gate};
use super::diagram::{Diagram, EdgeKind, VertexKind, V};
use super::phase::Phase;

/// Largest boundary count accepted by [`diagram_to_tensor`].
pub const MAX_TENSOR_BOUNDARIES: usize = 16;
/// Largest circuit width accepted by [`circuit_to_unitary`].
pub const MAX_UNITARY_WIDTH: usize = 8;
/// Largest rank allowed for an intermediate tensor during contraction.
const MAX_INTERMEDIATE_RANK: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("too large for dense evaluation: {0}")]
    TooLarge(String),
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize), (usize, usize)),
}

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl Tensor {
    pub fn zeros(rows: usize, cols: usize) -> Tensor {
        Tensor { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Tensor {
        let mut t = Tensor::zeros(n, n);
        for i in 0..n {
            t.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        t
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: Complex64) -> Tensor {
        Tensor { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn matmul(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.cols, other.rows);
        let mut out = Tensor::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.data[k * other.cols + c];
                }
            }
        }
        out
    }
}

/// True iff some nonzero `λ` gives `‖a − λ·b‖∞ ≤ tol·‖a‖∞`, with `λ` fixed by
/// the largest-magnitude entry of `b`. Two zero tensors compare equal.
pub fn equal_up_to_scalar(a: &Tensor, b: &Tensor, tol: f64) -> Result<bool, TensorError> {
    if a.shape() != b.shape() {
        return Err(TensorError::ShapeMismatch(a.shape(), b.shape()));
    }
    let (idx, bmax) = b
        .data
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.norm()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    let amax = a.max_abs();
    if bmax == 0.0 || amax == 0.0 {
        return Ok(bmax == 0.0 && amax == 0.0);
    }
    let lambda = a.data[idx] / b.data[idx];
    if lambda.norm() == 0.0 {
        return Ok(false);
    }
    let err = a.data.iter().zip(&b.data).map(|(x, y)| (x - lambda * y).norm()).fold(0.0, f64::max);
    Ok(err <= tol * amax)
}

fn phase_factor(p: Phase) -> Complex64 {
    Complex64::from_polar(1.0, p.to_radians())
}

/// Unitary of a circuit. RZ(α) is diag(1, e^{iα}) and RX(α) = H·RZ(α)·H, which
/// agree with the standard gates up to global phase.
pub fn circuit_to_unitary(c: &Circuit) -> Result<Tensor, TensorError> {
    if c.width > MAX_UNITARY_WIDTH {
        return Err(TensorError::TooLarge(format!("circuit width {} > {}", c.width, MAX_UNITARY_WIDTH)));
    }
    let n = 1usize << c.width;
    let mut u = Tensor::identity(n);
    // columns evolve independently; keep the matrix column-major while applying gates
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| u.get(i, j)).collect()).collect();
    for g in &c.gates {
        for col in cols.iter_mut() {
            apply_gate(col, g);
        }
    }
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u.data[i * n + j] = *z;
        }
    }
    Ok(u)
}

fn apply_gate(state: &mut [Complex64], g: &Gate) {
    let n = state.len();
    let one_qubit = |state: &mut [Complex64], q: usize, m: [[Complex64; 2]; 2]| {
        let bit = 1 << q;
        for i in 0..n {
            if i & bit == 0 {
                let (a, b) = (state[i], state[i | bit]);
                state[i] = m[0][0] * a + m[0][1] * b;
                state[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    };
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match *g {
        Gate::H(q) => one_qubit(state, q, [[h, h], [h, -h]]),
        Gate::Rz(q, p) => one_qubit(state, q, [[one, zero], [zero, phase_factor(p)]]),
        Gate::Rx(q, p) => {
            let e = phase_factor(p);
            let a = (one + e) * 0.5;
            let b = (one - e) * 0.5;
            one_qubit(state, q, [[a, b], [b, a]])
        }
        Gate::Cnot { control, target } => {
            let (cb, tb) = (1 << control, 1 << target);
            for i in 0..n {
                if i & cb != 0 && i & tb == 0 {
                    state.swap(i, i | tb);
                }
            }
        }
        Gate::Cz(a, b) => {
            let m = (1 << a) | (1 << b);
            for (i, z) in state.iter_mut().enumerate() {
                if i & m == m {
                    *z = -*z;
                }
            }
        }
        Gate::Swap(a, b) => {
            let (ab, bb) = (1 << a, 1 << b);
            for i in 0..n {
                if i & ab != 0 && i & bb == 0 {
                    state.swap(i, (i & !ab) | bb);
                }
            }
        }
    }
}

/// A dense tensor whose `k`-th bit of the flat index is the value of `legs[k]`.
#[derive(Clone, Debug)]
struct Node {
    legs: Vec<usize>,
    data: Vec<Complex64>,
}

impl Node {
    fn spider(kind: VertexKind, phase: Phase, legs: Vec<usize>) -> Node {
        let d = legs.len();
        let e = phase_factor(phase);
        let mut data = vec![Complex64::new(0.0, 0.0); 1 << d];
        match kind {
            VertexKind::Z => {
                data[0] += 1.0;
                data[(1 << d) - 1] += e;
            }
            VertexKind::X => {
                let norm = FRAC_1_SQRT_2.powi(d as i32);
                for (i, z) in data.iter_mut().enumerate() {
                    let sign = if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    *z = (Complex64::new(1.0, 0.0) + e * sign) * norm;
                }
            }
            _ => unreachable!("boundaries are not tensors"),
        }
        Node { legs, data }
    }

    fn wire(kind: EdgeKind, a: usize, b: usize) -> Node {
        let data = match kind {
            EdgeKind::Simple => vec![1.0, 0.0, 0.0, 1.0],
            EdgeKind::Hadamard => vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        };
        Node { legs: vec![a, b], data: data.into_iter().map(|x| Complex64::new(x, 0.0)).collect() }
    }

    fn contract(&self, other: &Node) -> Node {
        let shared: Vec<usize> = self.legs.iter().copied().filter(|l| other.legs.contains(l)).collect();
        let mut legs: Vec<usize> = self.legs.iter().copied().filter(|l| !shared.contains(l)).collect();
        legs.extend(other.legs.iter().copied().filter(|l| !shared.contains(l)));
        let pos = |node: &Node, l: usize| node.legs.iter().position(|&x| x == l).unwrap();
        // offset tables: flat index contribution from result bits and from shared bits
        let table = |node: &Node, labels: &[usize]| -> Vec<usize> {
            let bits: Vec<Option<usize>> =
                labels.iter().map(|&l| node.legs.contains(&l).then(|| pos(node, l))).collect();
            (0..1usize << labels.len())
                .map(|r| {
                    bits.iter()
                        .enumerate()
                        .filter(|(k, b)| b.is_some() && r >> k & 1 == 1)
                        .map(|(_, b)| 1 << b.unwrap())
                        .sum()
                })
                .collect()
        };
        let (a_res, a_sh) = (table(self, &legs), table(self, &shared));
        let (b_res, b_sh) = (table(other, &legs), table(other, &shared));
        let mut data = vec![Complex64::new(0.0, 0.0); 1 << legs.len()];
        for (r, out) in data.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..a_sh.len() {
                acc += self.data[a_res[r] | a_sh[s]] * other.data[b_res[r] | b_sh[s]];
            }
            *out = acc;
        }
        Node { legs, data }
    }
}

/// Contract a diagram into its linear map (outputs index rows, inputs columns).
pub fn diagram_to_tensor(d: &Diagram) -> Result<Tensor, TensorError> {
    let n_in = d.inputs().len();
    let n_out = d.outputs().len();
    if n_in + n_out > MAX_TENSOR_BOUNDARIES {
        return Err(TensorError::TooLarge(format!(
            "{} boundaries > {}",
            n_in + n_out,
            MAX_TENSOR_BOUNDARIES
        )));
    }
    let mut next_label = 0usize;
    let mut fresh = || {
        next_label += 1;
        next_label - 1
    };
    // legs per vertex, filled while walking edges
    let mut legs: BTreeMap<V, Vec<usize>> = d.vertices().map(|v| (v, Vec::new())).collect();
    let mut nodes: Vec<Node> = Vec::new();
    for u in d.vertices() {
        let loops = d.self_loops(u);
        for kind in loops.kinds() {
            let (a, b) = (fresh(), fresh());
            nodes.push(Node::wire(kind, a, b));
            legs.get_mut(&u).unwrap().extend([a, b]);
        }
        for (v, e) in d.neighbors(u) {
            if v < u {
                continue;
            }
            for kind in e.kinds() {
                let plain = kind == EdgeKind::Simple && d.is_spider(u) && d.is_spider(v);
                if plain {
                    let l = fresh();
                    legs.get_mut(&u).unwrap().push(l);
                    legs.get_mut(&v).unwrap().push(l);
                } else {
                    let (a, b) = (fresh(), fresh());
                    nodes.push(Node::wire(kind, a, b));
                    legs.get_mut(&u).unwrap().push(a);
                    legs.get_mut(&v).unwrap().push(b);
                }
            }
        }
    }
    for v in d.spiders() {
        let kind = d.kind(v);
        let ls = &legs[&v];
        let phase = d.phase(v);
        let n = ls.len();
        if n <= 3 {
            nodes.push(Node::spider(kind, phase, ls.clone()));
            continue;
        }
        // split wide spiders into a chain of degree-3 pieces of the same color
        let mut link = fresh();
        nodes.push(Node::spider(kind, phase, vec![ls[0], ls[1], link]));
        for &l in &ls[2..n - 2] {
            let next = fresh();
            nodes.push(Node::spider(kind, Phase::ZERO, vec![link, l, next]));
            link = next;
        }
        nodes.push(Node::spider(kind, Phase::ZERO, vec![link, ls[n - 2], ls[n - 1]]));
    }
    let boundary_leg = |b: V| legs[&b][0];
    let out_legs: Vec<usize> = d.outputs().iter().map(|&b| boundary_leg(b)).collect();
    let in_legs: Vec<usize> = d.inputs().iter().map(|&b| boundary_leg(b)).collect();

    let result = contract_all(nodes)?;
    let mut t = Tensor::zeros(1 << n_out, 1 << n_in);
    let pos: Vec<usize> = out_legs
        .iter()
        .chain(&in_legs)
        .map(|l| result.legs.iter().position(|x| x == l).expect("open leg lost"))
        .collect();
    for r in 0..t.rows {
        for c in 0..t.cols {
            let mut flat = 0usize;
            for (k, &p) in pos.iter().enumerate() {
                let bit = if k < n_out { r >> k & 1 } else { c >> (k - n_out) & 1 };
                flat |= bit << p;
            }
            t.data[r * t.cols + c] = result.data[flat];
        }
    }
    Ok(t)
}

fn contract_all(mut nodes: Vec<Node>) -> Result<Node, TensorError> {
    let scalar = Node { legs: vec![], data: vec![Complex64::new(1.0, 0.0)] };
    loop {
        // best pair sharing a leg: smallest resulting rank, then lowest indices
        let mut owner: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, n) in nodes.iter().enumerate() {
            for &l in &n.legs {
                owner.entry(l).or_default().push(i);
            }
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for owners in owner.values() {
            if let [i, j] = owners[..] {
                if i == j {
                    continue;
                }
                let (a, b) = (&nodes[i], &nodes[j]);
                let shared = a.legs.iter().filter(|l| b.legs.contains(l)).count();
                let rank = a.legs.len() + b.legs.len() - 2 * shared;
                let cand = (rank, i.min(j), i.max(j));
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        let Some((rank, i, j)) = best else { break };
        if rank > MAX_INTERMEDIATE_RANK {
            return Err(TensorError::TooLarge(format!("intermediate tensor of rank {rank}")));
        }
        let b = nodes.swap_remove(j);
        let a = nodes.swap_remove(i);
        nodes.push(a.contract(&b));
    }
    // remaining pieces share no legs: take the outer product
    nodes.sort_by_key(|n| n.legs.len());
    let mut acc = scalar;
    for n in nodes {
        if acc.legs.len() + n.legs.len() > MAX_INTERMEDIATE_RANK {
            return Err(TensorError::TooLarge("disconnected product too large".into()));
        }
        acc = acc.contract(&n);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zx::diagram::circuit_to_diagram;

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn one_spider(kind: VertexKind, p: Phase) -> Diagram {
        let mut d = Diagram::new();
        let i = d.add_input();
        let s = d.add_spider(kind, p);
        let o = d.add_output();
        d.add_edge(i, s, EdgeKind::Simple);
        d.add_edge(s, o, EdgeKind::Simple);
        d
    }

    /// CNOT built from its definition, control 0 target 1, little endian.
    fn cnot01() -> Tensor {
        let mut t = Tensor::zeros(4, 4);
        for x in 0..4usize {
            let y = if x & 1 == 1 { x ^ 2 } else { x };
            t.data[y * 4 + x] = c64(1.0);
        }
        t
    }

    #[test]
    fn z_spider_semantics() {
        let t = diagram_to_tensor(&one_spider(VertexKind::Z, Phase::ZERO)).unwrap();
        assert!(equal_up_to_scalar(&t, &Tensor::identity(2), 1e-12).unwrap());
        let t = diagram_to_tensor(&one_spider(VertexKind::Z, Phase::PI)).unwrap();
        let mut z = Tensor::identity(2);
        z.data[3] = c64(-1.0);
        assert!(equal_up_to_scalar(&t, &z, 1e-12).unwrap());
        assert!((t.get(0, 0) - c64(1.0)).norm() < 1e-12);
        assert!((t.get(1, 1) - c64(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn cnot_diagram_matches_definition() {
        let c = Circuit { width: 2, gates: vec![Gate::cnot(0, 1)] };
        let t = diagram_to_tensor(&circuit_to_diagram(&c)).unwrap();
        assert!(equal_up_to_scalar(&t, &cnot01(), 1e-12).unwrap());
        assert!(equal_up_to_scalar(&circuit_to_unitary(&c).unwrap(), &cnot01(), 1e-12).unwrap());
    }

    #[test]
    fn scalar_comparison() {
        let m = circuit_to_unitary(&Circuit { width: 2, gates: vec![Gate::H(0), Gate::cnot(0, 1)] }).unwrap();
        assert!(equal_up_to_scalar(&m, &m.scaled(c64(2.0)), 1e-12).unwrap());
        assert!(equal_up_to_scalar(&m, &m.scaled(Complex64::new(0.0, -3.0)), 1e-12).unwrap());
        assert!(!equal_up_to_scalar(&Tensor::identity(4), &cnot01(), 1e-9).unwrap());
        assert!(matches!(
            equal_up_to_scalar(&Tensor::identity(2), &Tensor::identity(4), 1e-9),
            Err(TensorError::ShapeMismatch(..))
        ));
        let hh = Circuit { width: 1, gates: vec![Gate::H(0), Gate::H(0)] };
        let t = diagram_to_tensor(&circuit_to_diagram(&hh)).unwrap();
        assert!(equal_up_to_scalar(&t, &Tensor::identity(2), 1e-12).unwrap());
    }

    #[test]
    fn unitary_basics() {
        let u = circuit_to_unitary(&Circuit::new(2)).unwrap();
        assert_eq!(u, Tensor::identity(4));
        let u = circuit_to_unitary(&Circuit { width: 2, gates: vec![Gate::cnot(0, 1), Gate::cnot(0, 1)] }).unwrap();
        assert!(equal_up_to_scalar(&u, &Tensor::identity(4), 1e-12).unwrap());
        let swap = circuit_to_unitary(&Circuit { width: 2, gates: vec![Gate::Swap(0, 1)] }).unwrap();
        let three = circuit_to_unitary(&Circuit {
            width: 2,
            gates: vec![Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cnot(0, 1)],
        })
        .unwrap();
        // explicit product of the three CNOT matrices
        let c01 = cnot01();
        let mut c10 = Tensor::zeros(4, 4);
        for x in 0..4usize {
            let y = if x & 2 == 2 { x ^ 1 } else { x };
            c10.data[y * 4 + x] = c64(1.0);
        }
        let prod = c01.matmul(&c10).matmul(&c01);
        assert!(equal_up_to_scalar(&swap, &prod, 1e-12).unwrap());
        assert!(equal_up_to_scalar(&three, &prod, 1e-12).unwrap());
        assert!(circuit_to_unitary(&Circuit::new(9)).is_err());
    }

    #[test]
    fn wide_spiders_and_loops() {
        // Z spider with a Hadamard self-loop picks up a pi phase
        let mut d = one_spider(VertexKind::Z, Phase::HALF_PI);
        let s = d.spiders().next().unwrap();
        d.add_edge(s, s, EdgeKind::Hadamard);
        let e = one_spider(VertexKind::Z, Phase::new(3, 2));
        let t = diagram_to_tensor(&d).unwrap();
        assert!(equal_up_to_scalar(&t, &diagram_to_tensor(&e).unwrap(), 1e-12).unwrap());
        // a wide X spider split into pieces equals the direct formula
        let mut w = Diagram::new();
        let ins: Vec<V> = (0..3).map(|_| w.add_input()).collect();
        let x = w.add_spider(VertexKind::X, Phase::QUARTER_PI);
        let outs: Vec<V> = (0..3).map(|_| w.add_output()).collect();
        for &b in ins.iter().chain(&outs) {
            w.add_edge(b, x, EdgeKind::Simple);
        }
        let t = diagram_to_tensor(&w).unwrap();
        let direct = Node::spider(VertexKind::X, Phase::QUARTER_PI, (0..6).collect());
        for r in 0..8 {
            for c in 0..8 {
                let flat = r | c << 3;
                assert!((t.get(r, c) - direct.data[flat]).norm() < 1e-12);
            }
        }
    }
}
