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

//! `zxopt` command-line tool.
//!
//! Exit codes: 0 success, 1 verification mismatch or method failure,
//! 2 usage or configuration error. Diagnostics go to stderr as
//! `error[<kind>]: <message>`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zxopt::bench::{assemble_circuit, parse_methods, run_benchmark, write_csv, AssembleSpec, BenchConfig, Method};
use zxopt::bench::runner::{column, mean_std};
use zxopt::config::{Config, Preset};
use zxopt::optimize::{optimize_circuit, verify_equal, PeepholeMode, MAX_VERIFY_WIDTH};
use zxopt::policy::{train, Checkpoint, PolicyParams, TrainError};
use zxopt::zx::Circuit;

#[derive(Parser)]
#[command(name = "zxopt", version, about = "Reduce two-qubit gate counts by searching over ZX-diagram rewrites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML config file; command-line flags override it.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Root seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DatasetArgs {
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    gates: Option<usize>,
}

#[derive(Args)]
struct SearchArgs {
    /// Expansions per episode.
    #[arg(long)]
    budget: Option<usize>,
    /// Episodes re-rooted at the best circuit after the first.
    #[arg(long)]
    restarts: Option<usize>,
    /// Highest extraction level tried per node.
    #[arg(long)]
    level_cap: Option<u8>,
    /// Policy checkpoint; the uniform policy is used without one.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random dataset as text circuits plus a spec file.
    Gen {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        dataset: DatasetArgs,
        /// Build wide circuits from random blocks on contiguous qubit windows.
        #[arg(long)]
        assembled: bool,
        /// Gates per block in assembled mode.
        #[arg(long, default_value_t = 50)]
        block_gates: usize,
        /// Output directory (default: <output_dir>/dataset).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Train a policy; writes checkpoints and curve.csv.
    Train {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        total_steps: Option<usize>,
        /// Continue from this checkpoint's parameters.
        #[arg(long)]
        init: Option<PathBuf>,
        /// Output directory (default: <output_dir>/train).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Optimize one circuit file.
    Optimize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        search: SearchArgs,
        input: PathBuf,
        /// Output circuit file (default: stdout).
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Check unitary equality before writing (at most 8 qubits).
        #[arg(long)]
        verify: bool,
        /// Partition into blocks: auto partitions only above 8 qubits.
        #[arg(long, value_enum, default_value_t = PeepholeMode::Auto)]
        peephole: PeepholeMode,
        #[arg(long)]
        block_width: Option<usize>,
    },
    /// Run methods over a dataset and write a CSV table.
    Bench {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        dataset: DatasetArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Comma list: level-1..4, extract-level-k, full-simplify, rl-agent, brute-force.
        #[arg(long, default_value = "level-1..4,full-simplify,rl-agent")]
        methods: String,
        /// CSV path (default: <output_dir>/bench.csv).
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Record wall-clock times (makes the CSV nondeterministic).
        #[arg(long)]
        timing: bool,
        /// Summarize counts with SWAP gates removed.
        #[arg(long)]
        no_swaps: bool,
    },
    /// Check two circuits for equality up to a global scalar.
    Verify { a: PathBuf, b: PathBuf },
}

enum Failure {
    Usage(String),
    Io(String),
    Method(String),
    Mismatch,
}

impl Failure {
    fn report(&self) -> ExitCode {
        match self {
            Failure::Usage(m) => {
                eprintln!("error[config]: {m}");
                ExitCode::from(2)
            }
            Failure::Io(m) => {
                eprintln!("error[io]: {m}");
                ExitCode::from(2)
            }
            Failure::Method(m) => {
                eprintln!("error[method]: {m}");
                ExitCode::from(1)
            }
            Failure::Mismatch => ExitCode::from(1),
        }
    }
}

type Outcome = Result<(), Failure>;

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, bytes).map_err(io_err(path))
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Circuit::from_text(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_checkpoint(path: &Path) -> Result<Checkpoint, Failure> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let ck: Checkpoint = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    ck.validate().map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(ck)
}

fn load_config(common: &Common) -> Result<Config, Failure> {
    let mut cfg = match &common.config {
        Some(p) => Config::load(p).map_err(|e| Failure::Usage(e.to_string()))?,
        None => Config::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn apply_dataset(cfg: &mut Config, d: &DatasetArgs) {
    if let Some(p) = d.preset {
        cfg.dataset.preset = p;
    }
    if let Some(n) = d.count {
        cfg.dataset.count = n;
    }
    cfg.dataset.width = d.width.or(cfg.dataset.width);
    cfg.dataset.gates = d.gates.or(cfg.dataset.gates);
}

fn apply_search(cfg: &mut Config, s: &SearchArgs) -> Result<Option<PolicyParams>, Failure> {
    if let Some(b) = s.budget {
        cfg.search.budget = b;
    }
    if let Some(r) = s.restarts {
        cfg.search.restarts = r;
    }
    if let Some(l) = s.level_cap {
        cfg.search.level_cap = l;
    }
    s.checkpoint.as_deref().map(|p| load_checkpoint(p).map(|c| c.params)).transpose()
}

fn validate(cfg: &Config) -> Outcome {
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))
}

fn cmd_gen(common: &Common, d: &DatasetArgs, assembled: bool, block_gates: usize, out: Option<PathBuf>) -> Outcome {
    let mut cfg = load_config(common)?;
    apply_dataset(&mut cfg, d);
    validate(&cfg)?;
    let spec = cfg.dataset_spec();
    let dir = out.unwrap_or_else(|| cfg.output_dir.join("dataset"));
    let circuits: Vec<Circuit> = if assembled {
        let shape = AssembleSpec { width: spec.width, total_gates: spec.gates, block_width: cfg.peephole.block_width, block_gates };
        (0..spec.count).map(|i| assemble_circuit(&shape, &spec.ratios, spec.circuit_seed(i))).collect::<Result<_, _>>()
    } else {
        spec.generate()
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    for (i, c) in circuits.iter().enumerate() {
        write_file(&dir.join(format!("circuit_{i:04}.qc")), c.to_text().as_bytes())?;
    }
    let meta = serde_json::json!({ "spec": spec, "assembled": assembled, "block_width": cfg.peephole.block_width, "block_gates": block_gates });
    write_file(&dir.join("dataset.json"), serde_json::to_string_pretty(&meta).expect("json").as_bytes())?;
    println!("wrote {} circuits to {}", circuits.len(), dir.display());
    Ok(())
}

fn cmd_train(common: &Common, total_steps: Option<usize>, init: Option<PathBuf>, out: Option<PathBuf>) -> Outcome {
    let mut cfg = load_config(common)?;
    if let Some(n) = total_steps {
        cfg.train.hyper.total_steps = n;
    }
    validate(&cfg)?;
    let tc = cfg.train_config();
    let dir = out.unwrap_or_else(|| cfg.output_dir.join("train"));
    let init = init.as_deref().map(load_checkpoint).transpose()?.map(|c| c.params);
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let curve_path = dir.join("curve.csv");
    let mut curve = csv::Writer::from_path(&curve_path).map_err(|e| Failure::Io(format!("{}: {e}", curve_path.display())))?;
    let save = |ck: &Checkpoint| -> Result<(), TrainError> {
        let path = dir.join(format!("checkpoint_{:06}.json", ck.update));
        let text = serde_json::to_string(ck).expect("json");
        fs::write(&path, text).map_err(|e| TrainError::Config(format!("{}: {e}", path.display())))
    };
    let mut row_err = None;
    let result = train(&tc, init, save, |row| {
        if let Err(e) = curve.serialize(row).and_then(|_| curve.flush().map_err(Into::into)) {
            row_err.get_or_insert(e.to_string());
        }
    });
    if let Some(e) = row_err {
        return Err(Failure::Io(format!("{}: {e}", curve_path.display())));
    }
    let outcome = result.map_err(|e| Failure::Method(e.to_string()))?;
    let final_ck = Checkpoint { version: zxopt::policy::train::CHECKPOINT_VERSION, update: outcome.curve.len(), step: outcome.curve.len() * tc.hyper.batch, params: outcome.params, config: tc };
    write_file(&dir.join("final.json"), serde_json::to_string(&final_ck).expect("json").as_bytes())?;
    let mut ep = csv::Writer::from_writer(vec![]);
    ep.write_record(["step", "reward"]).expect("in-memory csv");
    for (s, r) in &outcome.episodes {
        ep.write_record([s.to_string(), r.to_string()]).expect("in-memory csv");
    }
    write_file(&dir.join("episodes.csv"), &ep.into_inner().expect("in-memory csv"))?;
    match zxopt::policy::train::reward_improvement(&outcome.episodes, 0.05) {
        Some((a, b)) => println!("trained {} steps; episodes {}; reward first 5% {a:.4}, last 5% {b:.4}", final_ck.step, outcome.episodes.len()),
        None => println!("trained {} steps; episodes {}", final_ck.step, outcome.episodes.len()),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_optimize(
    common: &Common,
    s: &SearchArgs,
    input: &Path,
    out: Option<PathBuf>,
    verify: bool,
    peephole: PeepholeMode,
    block_width: Option<usize>,
) -> Outcome {
    let mut cfg = load_config(common)?;
    let params = apply_search(&mut cfg, s)?.unwrap_or_else(PolicyParams::zeros);
    if let Some(w) = block_width {
        cfg.peephole.block_width = w;
    }
    validate(&cfg)?;
    let c = read_circuit(input)?;
    let result = optimize_circuit(&c, &params, &cfg.search, peephole, cfg.peephole.block_width, cfg.search_seed())
        .map_err(|e| Failure::Method(e.to_string()))?;
    let verified = if !verify {
        "no"
    } else if c.width > MAX_VERIFY_WIDTH {
        eprintln!("warning[verify]: width {} exceeds {MAX_VERIFY_WIDTH}; skipping tensor check", c.width);
        "skipped"
    } else {
        match verify_equal(&c, &result.circuit) {
            Ok(true) => "yes",
            Ok(false) => {
                eprintln!("error[mismatch]: optimized circuit differs from input");
                return Err(Failure::Mismatch);
            }
            Err(e) => return Err(Failure::Method(e.to_string())),
        }
    };
    let text = result.circuit.to_text();
    match &out {
        Some(p) => write_file(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    let summary = format!(
        "input_two_qubit={} output_two_qubit={} blocks={} improved={} verified={verified}",
        result.input_count, result.output_count, result.blocks, result.improved
    );
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(common: &Common, d: &DatasetArgs, s: &SearchArgs, methods: &str, out: Option<PathBuf>, timing: bool, no_swaps: bool) -> Outcome {
    let mut cfg = load_config(common)?;
    apply_dataset(&mut cfg, d);
    let params = apply_search(&mut cfg, s)?;
    validate(&cfg)?;
    let methods: Vec<Method> = parse_methods(methods).map_err(Failure::Usage)?;
    let bc = BenchConfig { dataset: cfg.dataset_spec(), methods: methods.clone(), search: cfg.search.clone(), params, timing };
    let rows = run_benchmark(&bc).map_err(Failure::Usage)?;
    let path = out.unwrap_or_else(|| cfg.output_dir.join("bench.csv"));
    let mut buf = vec![];
    write_csv(&rows, &methods, &mut buf).map_err(|e| Failure::Io(e.to_string()))?;
    write_file(&path, &buf)?;
    let input: Vec<f64> = rows.iter().map(|r| r.cnot_in as f64).collect();
    if let Some((m, sd)) = mean_std(&input) {
        println!("{:<16} {m:.2} ± {sd:.2}", "input");
    }
    let mut failed = 0;
    for (i, m) in methods.iter().enumerate() {
        failed += rows.iter().filter(|r| r.cells[i].is_err()).count();
        let xs = column(&rows, i, |c| if no_swaps { c.cnot_out_noswap } else { c.cnot_out } as f64);
        match mean_std(&xs) {
            Some((mean, sd)) => println!("{:<16} {mean:.2} ± {sd:.2}", m.to_string()),
            None => println!("{:<16} n/a", m.to_string()),
        }
    }
    println!("wrote {}", path.display());
    if failed > 0 {
        return Err(Failure::Method(format!("{failed} cells failed; marked ERR in the table")));
    }
    Ok(())
}

fn cmd_verify(a: &Path, b: &Path) -> Outcome {
    let (ca, cb) = (read_circuit(a)?, read_circuit(b)?);
    if ca.width != cb.width {
        println!("FAIL width {} vs {}", ca.width, cb.width);
        return Err(Failure::Mismatch);
    }
    if ca.width > MAX_VERIFY_WIDTH {
        return Err(Failure::Usage(format!("width {} exceeds the verifiable {MAX_VERIFY_WIDTH}", ca.width)));
    }
    match verify_equal(&ca, &cb) {
        Ok(true) => {
            println!("PASS");
            Ok(())
        }
        Ok(false) => {
            println!("FAIL");
            Err(Failure::Mismatch)
        }
        Err(e) => Err(Failure::Method(e.to_string())),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Gen { common, dataset, assembled, block_gates, out } => cmd_gen(&common, &dataset, assembled, block_gates, out),
        Command::Train { common, total_steps, init, out } => cmd_train(&common, total_steps, init, out),
        Command::Optimize { common, search, input, out, verify, peephole, block_width } => {
            cmd_optimize(&common, &search, &input, out, verify, peephole, block_width)
        }
        Command::Bench { common, dataset, search, methods, out, timing, no_swaps } => {
            cmd_bench(&common, &dataset, &search, &methods, out, timing, no_swaps)
        }
        Command::Verify { a, b } => cmd_verify(&a, &b),
    };
    let _ = std::io::stdout().flush();
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
