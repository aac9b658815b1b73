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

//! Gate-level cancellation applied to extracted circuits.

use crate::zx::{Circuit, Gate};

fn shares(a: &Gate, b: &Gate) -> bool {
    let qb = b.qubits();
    a.qubits().iter().any(|q| qb.contains(q))
}

fn commute_one(g: &Gate, h: &Gate) -> bool {
    use Gate::*;
    match (*g, *h) {
        (Rz(..), Rz(..)) | (Rx(..), Rx(..)) | (Cz(..), Cz(..)) => true,
        (Rz(q, _), Cz(..)) => h.qubits().contains(&q),
        (Rz(q, _), Cnot { control, .. }) => q == control || !h.qubits().contains(&q),
        (Rx(q, _), Cnot { target, .. }) => q == target || !h.qubits().contains(&q),
        (Cnot { control: c1, target: t1 }, Cnot { control: c2, target: t2 }) => c1 != t2 && t1 != c2,
        (Cnot { target, .. }, Cz(a, b)) => target != a && target != b,
        _ => false,
    }
}

/// True if the two gates commute as operators (checked only when they share
/// a qubit).
fn commute(g: &Gate, h: &Gate) -> bool {
    !shares(g, h) || commute_one(g, h) || commute_one(h, g)
}

fn same_pair(a: (usize, usize), b: (usize, usize)) -> bool {
    a == b || (a.0 == b.1 && a.1 == b.0)
}

/// What `g` followed by `h` collapses to, if anything.
fn combine(g: &Gate, h: &Gate) -> Option<Option<Gate>> {
    use Gate::*;
    match (*g, *h) {
        (H(a), H(b)) if a == b => Some(None),
        (Cnot { control: c1, target: t1 }, Cnot { control: c2, target: t2 }) if (c1, t1) == (c2, t2) => Some(None),
        (Cz(a, b), Cz(c, d)) if same_pair((a, b), (c, d)) => Some(None),
        (Swap(a, b), Swap(c, d)) if same_pair((a, b), (c, d)) => Some(None),
        (Rz(a, p), Rz(b, r)) if a == b => Some(Some(Rz(a, p + r)).filter(|_| !(p + r).is_zero())),
        (Rx(a, p), Rx(b, r)) if a == b => Some(Some(Rx(a, p + r)).filter(|_| !(p + r).is_zero())),
        _ => None,
    }
}

fn neighbor_on(gates: &[Option<Gate>], i: usize, q: usize, forward: bool) -> Option<Gate> {
    let it: Box<dyn Iterator<Item = usize>> = if forward { Box::new(i + 1..gates.len()) } else { Box::new((0..i).rev()) };
    for j in it {
        if let Some(g) = gates[j] {
            if g.qubits().contains(&q) {
                return Some(g);
            }
        }
    }
    None
}

/// Turn a CZ next to a Hadamard into a CNOT between Hadamards so that the
/// Hadamards can cancel.
fn orient_czs(gates: &mut Vec<Option<Gate>>) -> bool {
    for i in 0..gates.len() {
        let Some(Gate::Cz(a, b)) = gates[i] else { continue };
        let has_h = |q: usize| {
            [true, false].iter().any(|&f| matches!(neighbor_on(gates, i, q, f), Some(Gate::H(x)) if x == q))
        };
        let target = if has_h(b) {
            b
        } else if has_h(a) {
            a
        } else {
            continue;
        };
        let control = if target == b { a } else { b };
        gates.splice(i..=i, [Some(Gate::H(target)), Some(Gate::cnot(control, target)), Some(Gate::H(target))]);
        return true;
    }
    false
}

/// A SWAP next to a CNOT on the same pair becomes three CNOTs oriented so that
/// one of them cancels.
fn split_swaps(gates: &mut Vec<Option<Gate>>) -> bool {
    for i in 0..gates.len() {
        let Some(Gate::Swap(a, b)) = gates[i] else { continue };
        for forward in [true, false] {
            let Some(Gate::Cnot { control, target }) = neighbor_on(gates, i, a, forward) else { continue };
            if neighbor_on(gates, i, b, forward) != Some(Gate::cnot(control, target)) {
                continue;
            }
            let (x, y) = (control, target);
            gates.splice(i..=i, [Some(Gate::cnot(x, y)), Some(Gate::cnot(y, x)), Some(Gate::cnot(x, y))]);
            return true;
        }
    }
    false
}

fn cancel_pass(gates: &mut [Option<Gate>]) -> bool {
    let mut changed = false;
    for i in 0..gates.len() {
        let Some(g) = gates[i] else { continue };
        for j in i + 1..gates.len() {
            let Some(h) = gates[j] else { continue };
            if !shares(&g, &h) {
                continue;
            }
            if let Some(merged) = combine(&g, &h) {
                gates[i] = merged;
                gates[j] = None;
                changed = true;
                break;
            }
            if !commute(&g, &h) {
                break;
            }
        }
    }
    changed
}

/// Cancel inverse pairs and merge rotations across commuting gates, turning
/// CZs into CNOTs where that exposes Hadamard pairs.
pub fn basic_optimization(c: &Circuit) -> Circuit {
    let mut gates: Vec<Option<Gate>> = c.gates.iter().copied().map(Some).collect();
    loop {
        let mut changed = cancel_pass(&mut gates);
        gates.retain(Option::is_some);
        changed |= orient_czs(&mut gates) || split_swaps(&mut gates);
        if !changed {
            break;
        }
    }
    Circuit { width: c.width, gates: gates.into_iter().flatten().collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zx::Phase;
    use crate::bench::{random_circuit, GateRatios};
    use crate::zx::{circuit_to_unitary, equal_up_to_scalar};

    #[test]
    fn cancels_across_commuting_gates() {
        let c = Circuit::with_gates(
            3,
            vec![Gate::cnot(0, 1), Gate::cnot(0, 2), Gate::Rz(0, Phase::QUARTER_PI), Gate::cnot(0, 1)],
        )
        .unwrap();
        let out = basic_optimization(&c);
        assert_eq!(out.two_qubit_count(), 1);
    }

    #[test]
    fn cz_between_hadamards() {
        let c = Circuit::with_gates(2, vec![Gate::H(1), Gate::Cz(0, 1), Gate::H(1), Gate::cnot(0, 1)]).unwrap();
        assert_eq!(basic_optimization(&c).two_qubit_count(), 0);
    }

    #[test]
    fn swap_absorbs_cnot() {
        let c = Circuit::with_gates(2, vec![Gate::cnot(1, 0), Gate::Swap(0, 1)]).unwrap();
        let out = basic_optimization(&c);
        assert_eq!(out.two_qubit_count(), 2);
        assert!(equal_up_to_scalar(&circuit_to_unitary(&c).unwrap(), &circuit_to_unitary(&out).unwrap(), 1e-9).unwrap());
    }

    #[test]
    fn random_preserved() {
        for seed in 0..200 {
            let ratios = [GateRatios::mixed(), GateRatios::uniform()][seed as usize % 2];
            let mut c = random_circuit(3, 30, &ratios, seed).unwrap();
            if seed % 3 == 0 {
                c.gates.insert(5, Gate::Cz(0, 2));
                c.gates.insert(9, Gate::Swap(1, 2));
            }
            let out = basic_optimization(&c);
            assert!(out.len() <= c.len());
            let (a, b) = (circuit_to_unitary(&c).unwrap(), circuit_to_unitary(&out).unwrap());
            assert!(equal_up_to_scalar(&a, &b, 1e-9).unwrap(), "seed {seed}");
        }
    }
}
