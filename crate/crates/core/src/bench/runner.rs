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

//! Benchmark runner: every method on every circuit of a dataset, one CSV row
//! per circuit plus mean and std rows.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bruteforce::{brute_force_cnot_count, brute_force_cnot_count_up_to_permutation};
use super::datasets::DatasetSpec;
use super::peephole::remove_swaps;
use crate::extract::{extract_at_level, MAX_LEVEL};
use crate::policy::PolicyParams;
use crate::search::{run_with_restarts, SearchSettings};
use crate::zx::{circuit_to_diagram, Circuit};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Fixed extraction level 1..=4, or 5 for full simplification.
    Level(u8),
    Agent,
    BruteForce,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Level(MAX_LEVEL) => write!(f, "full-simplify"),
            Method::Level(l) => write!(f, "extract-level-{l}"),
            Method::Agent => write!(f, "rl-agent"),
            Method::BruteForce => write!(f, "brute-force"),
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Method, String> {
        match s {
            "full-simplify" | "extract-level-5" => Ok(Method::Level(MAX_LEVEL)),
            "rl-agent" => Ok(Method::Agent),
            "brute-force" => Ok(Method::BruteForce),
            _ => s
                .strip_prefix("extract-level-")
                .or_else(|| s.strip_prefix("level-"))
                .and_then(|l| l.parse().ok())
                .filter(|l| (1..MAX_LEVEL).contains(l))
                .map(Method::Level)
                .ok_or_else(|| {
                    format!("unknown method `{s}`; expected extract-level-1..4 (or level-k), full-simplify, rl-agent or brute-force")
                }),
        }
    }
}

/// Expand a range shorthand like `level-1..4` into methods.
pub fn parse_methods(list: &str) -> Result<Vec<Method>, String> {
    let mut out = vec![];
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some(range) = item.strip_prefix("level-").or_else(|| item.strip_prefix("extract-level-")).filter(|r| r.contains("..")) {
            let (a, b) = range.split_once("..").expect("checked");
            let (a, b): (u8, u8) = (a.parse().map_err(|_| format!("bad range `{item}`"))?, b.parse().map_err(|_| format!("bad range `{item}`"))?);
            if a < 1 || b > MAX_LEVEL || a > b {
                return Err(format!("bad range `{item}`"));
            }
            out.extend((a..=b).map(Method::Level));
        } else {
            out.push(item.parse()?);
        }
    }
    if out.is_empty() {
        return Err("no methods given".into());
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub dataset: DatasetSpec,
    pub methods: Vec<Method>,
    pub search: SearchSettings,
    /// Needed by the agent method; `None` means the uniform policy.
    pub params: Option<PolicyParams>,
    /// Record wall-clock times; off by default so output is reproducible.
    pub timing: bool,
}

/// One method's result on one circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub cnot_out: usize,
    pub cnot_out_noswap: usize,
    pub level_used: u8,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub circuit_id: usize,
    pub seed: u64,
    pub width: usize,
    pub gates: usize,
    pub cnot_in: usize,
    pub cells: Vec<Result<Cell, String>>,
}

fn run_method(m: &Method, c: &Circuit, cfg: &BenchConfig, seed_value: u64) -> Result<Cell, String> {
    let start = Instant::now();
    let (circuit, level_used) = match m {
        Method::Level(l) => (extract_at_level(&circuit_to_diagram(c), *l).map_err(|e| e.to_string())?, *l),
        Method::Agent => {
            let zero = PolicyParams::zeros();
            let params = cfg.params.as_ref().unwrap_or(&zero);
            let out = run_with_restarts(c, params, &cfg.search, seed_value).map_err(|e| e.to_string())?;
            (out.best.circuit, out.best.level_used)
        }
        Method::BruteForce => {
            let n = brute_force_cnot_count(c).map_err(|e| e.to_string())?;
            let free = brute_force_cnot_count_up_to_permutation(c).map_err(|e| e.to_string())?;
            let wall_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
            return Ok(Cell { cnot_out: n, cnot_out_noswap: free, level_used: 0, wall_ms });
        }
    };
    let wall_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    Ok(Cell {
        cnot_out: circuit.two_qubit_count(),
        cnot_out_noswap: remove_swaps(&circuit).0.two_qubit_count(),
        level_used,
        wall_ms,
    })
}

/// Run every method on every circuit. Method failures are kept per cell.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRow>, String> {
    let circuits = cfg.dataset.generate().map_err(|e| e.to_string())?;
    Ok(circuits
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let seed_value = cfg.dataset.circuit_seed(i);
            let cells = cfg
                .methods
                .iter()
                .map(|m| {
                    let r = run_method(m, c, cfg, seed_value);
                    if let Err(e) = &r {
                        log::warn!("circuit {i}, method {m}: {e}");
                    }
                    r
                })
                .collect();
            BenchRow { circuit_id: i, seed: seed_value, width: c.width, gates: c.len(), cnot_in: c.two_qubit_count(), cells }
        })
        .collect())
}

/// Mean and sample standard deviation; `None` when empty.
pub fn mean_std(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64 } else { 0.0 };
    Some((m, var.sqrt()))
}

/// Values of one method's column over rows that succeeded.
pub fn column(rows: &[BenchRow], method: usize, f: impl Fn(&Cell) -> f64) -> Vec<f64> {
    rows.iter().filter_map(|r| r.cells[method].as_ref().ok().map(&f)).collect()
}

/// Write the table. Failed cells hold `ERR`; the last two rows aggregate.
pub fn write_csv<W: Write>(rows: &[BenchRow], methods: &[Method], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["circuit_id", "seed", "width", "gates", "cnot_in"].map(String::from).to_vec();
    for m in methods {
        for col in ["cnot_out", "cnot_out_noswap", "level_used", "wall_ms"] {
            header.push(format!("{m}:{col}"));
        }
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.circuit_id.to_string(), r.seed.to_string(), r.width.to_string(), r.gates.to_string(), r.cnot_in.to_string()];
        for c in &r.cells {
            match c {
                Ok(c) => rec.extend([c.cnot_out.to_string(), c.cnot_out_noswap.to_string(), c.level_used.to_string(), c.wall_ms.to_string()]),
                Err(_) => rec.extend(["ERR"; 4].map(String::from)),
            }
        }
        w.write_record(&rec)?;
    }
    let fmt = |x: Option<(f64, f64)>, pick: fn((f64, f64)) -> f64| x.map_or(String::new(), |v| format!("{:.3}", pick(v)));
    for (label, pick) in [("mean", (|v: (f64, f64)| v.0) as fn((f64, f64)) -> f64), ("std", |v: (f64, f64)| v.1)] {
        let ins: Vec<f64> = rows.iter().map(|r| r.cnot_in as f64).collect();
        let mut rec = vec![label.to_string(), String::new(), String::new(), String::new(), fmt(mean_std(&ins), pick)];
        for i in 0..methods.len() {
            rec.push(fmt(mean_std(&column(rows, i, |c| c.cnot_out as f64)), pick));
            rec.push(fmt(mean_std(&column(rows, i, |c| c.cnot_out_noswap as f64)), pick));
            rec.push(fmt(mean_std(&column(rows, i, |c| c.level_used as f64)), pick));
            rec.push(fmt(mean_std(&column(rows, i, |c| c.wall_ms as f64)), pick));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
