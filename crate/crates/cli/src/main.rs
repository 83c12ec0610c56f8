//! Command-line front end for the simulation library.
//!
//! Exit codes: 0 success, 1 usage error, 2 gate verification failure,
//! 3 malformed input file.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use topoqec::decoder::{decode_trial, Metric};
use topoqec::distill;
use topoqec::fixtures::{load_fixture, FIXTURE_NAMES};
use topoqec::gate_verify::verify_gate;
use topoqec::noise::TrialRecord;
use topoqec::schedule::{render, Array2d};
use topoqec::threshold::{find_crossing, run_scan, ErrorModel};

const EXIT_USAGE: i32 = 1;
const EXIT_VERIFY: i32 = 2;
const EXIT_INPUT: i32 = 3;

#[derive(Parser)]
#[command(
    name = "topoqec",
    version,
    about = "Simulator for a measurement-based topological quantum memory"
)]
struct Cli {
    /// Worker threads for Monte-Carlo scans (results do not depend on this).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    /// Independent data and measurement flips at rate p.
    Phenomenological,
    /// Faulty preparations, Hadamards, CZs, and measurements at rate p.
    #[value(name = "circuit-level", alias = "circuit")]
    CircuitLevel,
}

impl From<ModelArg> for ErrorModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Phenomenological => ErrorModel::Phenomenological,
            ModelArg::CircuitLevel => ErrorModel::CircuitLevel,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Scan memory failure rates over lattice sizes and error rates.
    Threshold {
        /// Noise model to simulate.
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Lattice sizes, comma separated (e.g. 5,7,9).
        #[arg(long, value_delimiter = ',', required = true)]
        ls: Vec<usize>,
        /// Physical error rates, comma separated (e.g. 0.026,0.030).
        #[arg(long, value_delimiter = ',', required = true)]
        ps: Vec<f64>,
        /// Monte-Carlo trials per point.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Noisy measurement rounds per trial (default: one per lattice row).
        #[arg(long)]
        rounds: Option<usize>,
        /// Base seed; every reported number is reproducible from it.
        #[arg(long)]
        seed: u64,
        /// Write CSV here instead of stdout (relative paths resolve under
        /// TOPOQEC_OUT_DIR when that is set).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the periodic measurement schedule of the 2D array.
    Schedule {
        /// Lattice size (l >= 2).
        #[arg(long)]
        l: usize,
        /// Number of periods to print.
        #[arg(long, default_value_t = 1)]
        rounds: usize,
    },
    /// Decode a recorded trial (JSON) and report the logical outcome.
    Decode {
        /// Path to a trial record produced by the library.
        #[arg(long)]
        input: PathBuf,
    },
    /// Re-verify the bundled logical gate fixtures.
    VerifyGates,
    /// Plan a magic-state distillation cascade.
    Distill {
        /// Physical error rate.
        #[arg(long)]
        p: f64,
        /// Target output error per magic state.
        #[arg(long, default_value_t = 1e-15)]
        target: f64,
    },
}

fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("TOPOQEC_OUT_DIR") {
        Some(dir) => Path::new(&dir).join(path),
        None => path.to_path_buf(),
    }
}

fn cmd_threshold(
    model: ErrorModel,
    ls: &[usize],
    ps: &[f64],
    trials: usize,
    rounds: Option<usize>,
    seed: u64,
    out: Option<PathBuf>,
) -> i32 {
    if ls.is_empty() || ps.is_empty() || trials == 0 {
        eprintln!("error: need at least one lattice size, one error rate, and one trial");
        return EXIT_USAGE;
    }
    if ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
        eprintln!("error: error rates must lie in [0, 1]");
        return EXIT_USAGE;
    }
    if ls.iter().any(|l| *l < 2) {
        eprintln!("error: lattice sizes must be at least 2");
        return EXIT_USAGE;
    }
    let points = run_scan(model, ls, ps, rounds.unwrap_or(0), trials, seed);
    let mut csv = String::new();
    csv.push_str("# memory failure-rate scan\n");
    csv.push_str(&format!(
        "# model={} trials={} seed={} ci=wilson-95\n",
        model.name(),
        trials,
        seed
    ));
    csv.push_str("model,l,rounds,p,trials,failures,rate,ci_low,ci_high,seed\n");
    for pt in &points {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{}\n",
            pt.model.name(),
            pt.l,
            pt.rounds,
            pt.p,
            pt.trials,
            pt.failures,
            pt.rate,
            pt.ci_low,
            pt.ci_high,
            pt.seed
        ));
    }
    if let Some(est) = find_crossing(&points, 200, seed) {
        csv.push_str(&format!(
            "# crossing p={:.6} ci_low={:.6} ci_high={:.6}\n",
            est.p, est.ci_low, est.ci_high
        ));
    } else {
        csv.push_str("# crossing not bracketed by this grid\n");
    }
    match out {
        Some(path) => {
            let path = resolve_out(&path);
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    if let Err(e) = std::fs::create_dir_all(parent) {
                        eprintln!("error: cannot create {}: {e}", parent.display());
                        return EXIT_INPUT;
                    }
                }
            }
            if let Err(e) = std::fs::write(&path, csv) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
            eprintln!("wrote {}", path.display());
            0
        }
        None => {
            print!("{csv}");
            0
        }
    }
}

fn cmd_schedule(l: usize, rounds: usize) -> i32 {
    if l < 2 {
        eprintln!("error: lattice size must be at least 2");
        return EXIT_USAGE;
    }
    print!("{}", render(&Array2d::new(l), rounds));
    0
}

fn cmd_decode(input: &Path) -> i32 {
    let text = match std::fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", input.display());
            return EXIT_INPUT;
        }
    };
    let trial: TrialRecord = match serde_json::from_str(&text) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {} is not a trial record: {e}", input.display());
            return EXIT_INPUT;
        }
    };
    let outcome = decode_trial(&trial, Metric::default());
    for (name, record, sector) in [
        ("star", &trial.star, &outcome.star),
        ("plaquette", &trial.plaquette, &outcome.plaquette),
    ] {
        println!(
            "{name}: l={} layers={} defects={} matched_pairs={} correction_qubits={} wraps=[{},{}]",
            record.l,
            record.layers,
            record.defects.len(),
            sector.pairs.len(),
            sector.correction.len(),
            sector.wraps[0],
            sector.wraps[1]
        );
    }
    println!(
        "verdict: {}",
        if outcome.failed() {
            "logical failure"
        } else {
            "state preserved"
        }
    );
    0
}

fn cmd_verify_gates() -> i32 {
    let mut all_ok = true;
    for name in FIXTURE_NAMES {
        let Some(fixture) = load_fixture(name) else {
            eprintln!("error: fixture {name} failed to load");
            return EXIT_VERIFY;
        };
        let report = verify_gate(&fixture);
        for flow in &report.flows {
            match &flow.detail {
                Some(detail) if !flow.passed => {
                    println!("{name}: {} FAILED ({detail})", flow.name)
                }
                _ => println!(
                    "{name}: {} {}",
                    flow.name,
                    if flow.passed { "ok" } else { "FAILED" }
                ),
            }
            all_ok &= flow.passed;
        }
        if !report.commutation_consistent {
            println!("{name}: commutation consistency FAILED");
            all_ok = false;
        }
    }
    if all_ok {
        println!("all gate fixtures verified");
        0
    } else {
        EXIT_VERIFY
    }
}

fn cmd_distill(p: f64, target: f64) -> i32 {
    if !(0.0..1.0).contains(&p) || target <= 0.0 {
        eprintln!("error: need 0 <= p < 1 and target > 0");
        return EXIT_USAGE;
    }
    println!(
        "# injected error 6p = {:.6}; purification threshold p < {:.6}",
        distill::injection_error(p),
        distill::INJECTION_THRESHOLD
    );
    match distill::plan(p, target) {
        Some(rows) => {
            println!("level,error,raw_inputs");
            for row in rows {
                println!("{},{:.3e},{}", row.level, row.error, row.inputs);
            }
            0
        }
        None => {
            println!("no plan: the cascade does not converge at p = {p}");
            0
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            let _ = std::io::stdout().flush();
            std::process::exit(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            std::process::exit(EXIT_USAGE);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    let code = match cli.command {
        Command::Threshold {
            model,
            ls,
            ps,
            trials,
            rounds,
            seed,
            out,
        } => cmd_threshold(model.into(), &ls, &ps, trials, rounds, seed, out),
        Command::Schedule { l, rounds } => cmd_schedule(l, rounds),
        Command::Decode { input } => cmd_decode(&input),
        Command::VerifyGates => cmd_verify_gates(),
        Command::Distill { p, target } => cmd_distill(p, target),
    };
    std::process::exit(code);
}
