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

//! Command-line behaviour: exit codes, diagnostics and outputs.

use std::path::Path;
use std::process::{Command, Output};

fn zxopt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zxopt")).current_dir(dir).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn verify_reflexive_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.qc", "qubits 2\ncnot 0 1\nh 0\n");
    write(dir.path(), "b.qc", "qubits 2\ncnot 1 0\nh 0\n");
    let same = zxopt(dir.path(), &["verify", "a.qc", "a.qc"]);
    assert_eq!(same.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&same.stdout).trim(), "PASS");
    let diff = zxopt(dir.path(), &["verify", "a.qc", "b.qc"]);
    assert_eq!(diff.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&diff.stdout).trim(), "FAIL");
}

#[test]
fn usage_and_config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(zxopt(dir.path(), &["frobnicate"]).status.code(), Some(2));
    write(dir.path(), "bad.toml", "[search]\nbudget = 0\n");
    let out = zxopt(dir.path(), &["gen", "-c", "bad.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[config]:"));
    write(dir.path(), "broken.qc", "qubits 2\nfoo 1\n");
    let out = zxopt(dir.path(), &["verify", "broken.qc", "broken.qc"]);
    assert_eq!(out.status.code(), Some(2));
    let out = zxopt(dir.path(), &["optimize", "missing.qc"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[io]:"));
}

#[test]
fn optimize_trained_checkpoint_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "cfg.toml", "seed = 4\n[dataset]\npreset = \"ii\"\ncount = 2\n[train]\nwidth = 3\ngates = 16\n[train.hyper]\ntotal_steps = 256\nbudget = 8\n");
    assert!(zxopt(dir.path(), &["gen", "-c", "cfg.toml", "-o", "data"]).status.success());
    assert!(dir.path().join("data/dataset.json").exists());
    assert!(zxopt(dir.path(), &["train", "-c", "cfg.toml", "-o", "t"]).status.success());
    let curve = std::fs::read_to_string(dir.path().join("t/curve.csv")).unwrap();
    assert!(curve.starts_with("update,step,"));
    let out = zxopt(dir.path(), &["optimize", "-c", "cfg.toml", "--checkpoint", "t/final.json", "--budget", "16", "--verify", "-o", "o.qc", "data/circuit_0000.qc"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains("verified=yes"), "{summary}");
    let field = |k: &str| -> usize {
        summary.split_whitespace().find_map(|t| t.strip_prefix(k)).unwrap().parse().unwrap()
    };
    assert!(field("output_two_qubit=") <= field("input_two_qubit="));
    assert!(zxopt(dir.path(), &["verify", "data/circuit_0000.qc", "o.qc"]).status.success());
}

#[test]
fn bench_writes_table_with_summary_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = zxopt(dir.path(), &["bench", "--preset", "ii", "--count", "4", "--methods", "level-4,brute-force", "-o", "b.csv", "--no-swaps"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 4 + 2);
    assert!(lines[0].starts_with("circuit_id,seed,width,gates,cnot_in,extract-level-4:cnot_out,"));
    assert!(lines[5].starts_with("mean,") && lines[6].starts_with("std,"));
}

#[test]
fn wide_input_uses_blocks_and_skips_tensor_check() {
    let dir = tempfile::tempdir().unwrap();
    assert!(zxopt(dir.path(), &["gen", "--assembled", "--preset", "ii", "--width", "12", "--gates", "120", "--count", "1", "-o", "w"]).status.success());
    let out = zxopt(dir.path(), &["optimize", "--budget", "4", "--restarts", "0", "--verify", "-o", "o.qc", "w/circuit_0000.qc"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning[verify]"));
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains("verified=skipped") && !summary.contains("blocks=1 "), "{summary}");
}
