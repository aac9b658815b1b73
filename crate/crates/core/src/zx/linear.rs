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

//! Linear reversible maps on four wires.
//!
//! A 4×4 matrix over F2 is packed into a `u16`, row `r` in bits `4r..4r+4`
//! (bit `c` of a row is column `c`). Row `t` of the matrix of a circuit is the
//! parity of inputs that ends up on wire `t`.

use std::collections::VecDeque;
use std::sync::OnceLock;

pub const WIDTH: usize = 4;
pub const IDENTITY: u16 = 0b1000_0100_0010_0001;
const UNREACHED: u8 = u8::MAX;

fn row(m: u16, r: usize) -> u16 {
    (m >> (4 * r)) & 0xF
}

/// `row[target] ^= row[control]`.
pub fn apply_cnot(m: u16, control: usize, target: usize) -> u16 {
    m ^ (row(m, control) << (4 * target))
}

/// Matrix product `a · b`.
pub fn mat_mul(a: u16, b: u16) -> u16 {
    let mut out = 0;
    for r in 0..WIDTH {
        let mut acc = 0;
        for k in 0..WIDTH {
            if row(a, r) >> k & 1 == 1 {
                acc ^= row(b, k);
            }
        }
        out |= acc << (4 * r);
    }
    out
}

/// Breadth-first distances from the identity over the twelve CNOTs.
pub struct CnotDistanceTable {
    dist: Vec<u8>,
}

impl CnotDistanceTable {
    pub fn build() -> CnotDistanceTable {
        let mut dist = vec![UNREACHED; 1 << 16];
        dist[IDENTITY as usize] = 0;
        let mut queue = VecDeque::from([IDENTITY]);
        while let Some(m) = queue.pop_front() {
            let d = dist[m as usize];
            for c in 0..WIDTH {
                for t in 0..WIDTH {
                    if c == t {
                        continue;
                    }
                    let n = apply_cnot(m, c, t);
                    if dist[n as usize] == UNREACHED {
                        dist[n as usize] = d + 1;
                        queue.push_back(n);
                    }
                }
            }
        }
        CnotDistanceTable { dist }
    }

    /// Shared table, built on first use.
    pub fn global() -> &'static CnotDistanceTable {
        static TABLE: OnceLock<CnotDistanceTable> = OnceLock::new();
        TABLE.get_or_init(CnotDistanceTable::build)
    }

    /// Minimal CNOT count, `None` for singular matrices.
    pub fn distance(&self, m: u16) -> Option<u8> {
        Some(self.dist[m as usize]).filter(|&d| d != UNREACHED)
    }

    pub fn is_invertible(&self, m: u16) -> bool {
        self.distance(m).is_some()
    }

    pub fn reachable(&self) -> usize {
        self.dist.iter().filter(|&&d| d != UNREACHED).count()
    }

    pub fn max_distance(&self) -> u8 {
        self.dist.iter().copied().filter(|&d| d != UNREACHED).max().unwrap_or(0)
    }

    /// Shortest sequence of `(control, target)` CNOTs, using only the first
    /// `k` wires, that turns `m` into the identity. `None` when `m` is singular
    /// or every shortest route needs a wire outside the first `k`.
    pub fn synthesize(&self, mut m: u16, k: usize) -> Option<Vec<(usize, usize)>> {
        let mut d = self.distance(m)?;
        let mut ops = vec![];
        while d > 0 {
            let (c, t) = (0..k)
                .flat_map(|c| (0..k).map(move |t| (c, t)))
                .find(|&(c, t)| c != t && self.distance(apply_cnot(m, c, t)) == Some(d - 1))?;
            m = apply_cnot(m, c, t);
            ops.push((c, t));
            d -= 1;
        }
        Some(ops)
    }
}
