use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use offshell::bethe::Route;
use offshell::exact::Sampler;
use offshell::qsym::{enumerate_admissible_m, enumerate_admissible_s, Composition};
use offshell_cli::suites::{validate_task, Suite};
use offshell_cli::{parse_config, run_suite, with_threads, RunConfig};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "offshell",
    about = "Exact off-shell Bethe vectors and their verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(short = 'c', long = "config")]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (also settable in the config).
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides the trace-route size cap.
    #[arg(long = "max-cells")]
    max_cells: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Computes one Bethe task and prints the vector of every route.
    Compute(Common),
    /// Runs verification suites and prints the JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Restricts the run to these suites (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Adds per-record wall times (reports stop being byte-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Lists the admissible matrices of the configured n̄.
    Enumerate(Common),
    Version,
}

fn load(common: &Common) -> Result<RunConfig, String> {
    let text = match &common.config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => return Err("a configuration file is required (-c <file>)".into()),
    };
    let mut cfg = parse_config(&text).map_err(|e| format!("invalid configuration at {e}"))?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.threads {
        if t == 0 {
            return Err("--threads must be positive".into());
        }
        cfg.threads = Some(t);
    }
    if let Some(m) = common.max_cells {
        cfg.max_cells = m;
    }
    Ok(cfg)
}

fn config_error(msg: String) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn print(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn main() -> ExitCode {
    // Fixed filter: the thread count (RAYON_NUM_THREADS) is the only
    // setting read from the environment.
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Warn)
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match cli.command {
        Command::Version => {
            print(
                &json!({"tool": "offshell", "version": env!("CARGO_PKG_VERSION"), "report_schema": offshell_cli::report::REPORT_SCHEMA}),
            );
            ExitCode::SUCCESS
        }
        Command::Verify {
            common,
            suites,
            timings,
        } => {
            let mut cfg = match load(&common) {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            if !suites.is_empty() {
                let mut chosen = Vec::new();
                for s in &suites {
                    match s.parse::<Suite>() {
                        Ok(x) if !chosen.contains(&x) => chosen.push(x),
                        Ok(_) => {}
                        Err(e) => return config_error(e),
                    }
                }
                cfg.suites = chosen;
            }
            let report = match with_threads(cfg.threads, || run_suite(&cfg, timings)) {
                Ok(r) => r,
                Err(e) => return config_error(e),
            };
            println!("{}", report.to_json());
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Compute(common) => {
            let cfg = match load(&common) {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            let mut s = Sampler::new(cfg.seed, 0);
            let outcome = with_threads(cfg.threads, || validate_task(&cfg, &mut s));
            match outcome {
                Err(e) => config_error(e),
                Ok(Err((e, exhausted))) => {
                    eprintln!("error: {e}");
                    print(&json!({"error": e.to_string(), "exhausted": exhausted}));
                    ExitCode::from(if exhausted { 3 } else { 2 })
                }
                Ok(Ok((task, cv))) => {
                    let vectors: BTreeMap<&str, Vec<String>> = cv
                        .vectors
                        .iter()
                        .map(|v| {
                            (
                                v.route.label(),
                                v.coords.iter().map(|x| x.to_string()).collect(),
                            )
                        })
                        .collect();
                    let mismatch = cv.mismatch.map(|(a, b, i): (Route, Route, usize)| json!({"routes": [a.label(), b.label()], "coordinate": i}));
                    print(&json!({
                        "inputs": task.fingerprint(),
                        "vectors": vectors,
                        "agree": cv.mismatch.is_none(),
                        "mismatch": mismatch,
                        "weights_ok": cv.weights_ok,
                    }));
                    ExitCode::from(if cv.pass() { 0 } else { 1 })
                }
            }
        }
        Command::Enumerate(common) => {
            let cfg = match load(&common) {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            let comp = match Composition::new(cfg.rank, cfg.n.clone()) {
                Ok(c) => c,
                Err(e) => return config_error(e.to_string()),
            };
            let s: Vec<Vec<[usize; 3]>> = enumerate_admissible_s(&comp)
                .iter()
                .map(|x| x.entries().iter().map(|(&(b, a), &v)| [b, a, v]).collect())
                .collect();
            let m: Vec<Vec<[usize; 3]>> = enumerate_admissible_m(&comp)
                .iter()
                .map(|x| x.entries().iter().map(|(&(b, a), &v)| [b, a, v]).collect())
                .collect();
            print(
                &json!({"N": cfg.rank, "n": cfg.n, "entry_format": "[b, a, value]", "s": s, "m": m}),
            );
            ExitCode::SUCCESS
        }
    }
}
