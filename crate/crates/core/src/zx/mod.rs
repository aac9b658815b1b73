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

//! Core data model: phases, circuits, ZX diagrams and their dense semantics.

pub mod circuit;
pub mod diagram;
pub mod linear;
pub mod phase;
pub mod tensor;

pub use circuit::{Circuit, CircuitError, CircuitStats, Gate};
pub use diagram::{circuit_to_diagram, Diagram, DiagramError, EdgeCount, EdgeKind, VertexKind, V};
pub use phase::Phase;
pub use tensor::{circuit_to_unitary, diagram_to_tensor, equal_up_to_scalar, Tensor, TensorError};
