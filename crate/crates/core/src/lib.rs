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

//! Quantum circuit optimization by learned tree search over ZX-diagram rewrites.
//!
//! A circuit is turned into a ZX diagram ([`zx`]), rewritten with a small rule
//! set ([`rewrite`]), and turned back into a circuit by graph-like
//! simplification and frontier extraction ([`extract`]). A search tree of
//! equivalent diagrams ([`search`]) is grown under a node-selection policy that
//! is trained with clipped-surrogate policy optimization ([`policy`]). The
//! [`bench`] module holds dataset generators, a brute-force CNOT oracle, the
//! peephole partitioner and the benchmark runner.

pub mod zx;
pub mod bench;
pub mod config;
pub mod extract;
pub mod optimize;
pub mod rewrite;
pub mod policy;
pub mod search;
pub mod seed;
