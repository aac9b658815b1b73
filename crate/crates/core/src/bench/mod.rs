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

//! Datasets, the brute-force CNOT oracle, SWAP removal, peephole
//! partitioning and the benchmark runner.

pub mod bruteforce;
pub mod datasets;
pub mod peephole;
pub mod runner;

pub use bruteforce::{brute_force_cnot_count, brute_force_cnot_count_up_to_permutation, BruteForceError, CnotDistanceTable};
pub use datasets::{assemble_circuit, random_circuit, AssembleSpec, DatasetError, DatasetSpec, GateRatios};
pub use peephole::{partition_circuit, reassemble, remove_swaps, restore_permutation, Block, Partition, PermutationMode, ReassembleError};
pub use runner::{parse_methods, run_benchmark, write_csv, BenchConfig, BenchRow, Cell, Method};
