use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mesoacc::analysis::{run_suite, Suite};
use mesoacc::cluster::run;
use mesoacc::scenario::{compare, write_trace_file, Scenario};
use mesoacc::Error;

/// Default output directory when `--out` is not given.
const OUT_DIR_VAR: &str = "MESOACC_OUT_DIR";

#[derive(Parser)]
#[command(name = "mesoacc", version, about = "Hybrid-automaton ACC simulator with mesoscopic headways")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and write its trace and summary.
    Run {
        /// Scenario file, or `table2` / `table3` for a bundled one.
        scenario: String,
        #[arg(long, conflicts_with = "micro")]
        meso: bool,
        #[arg(long)]
        micro: bool,
        /// Integration step in seconds.
        #[arg(long, value_name = "S")]
        dt: Option<f64>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Stop at the first collision.
        #[arg(long)]
        fail_fast: bool,
    },
    /// Run the property-checking suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Run a scenario with and without mesoscopic headways and compare.
    Compare {
        scenario: String,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Partition,
    Brake,
    Equilibrium,
    Switches,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Partition => vec![Suite::Partition],
            SuiteArg::Brake => vec![Suite::Brake],
            SuiteArg::Equilibrium => vec![Suite::Equilibrium],
            SuiteArg::Switches => vec![Suite::Switches],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

enum Failure {
    Usage(String),
    Violations,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Collision { .. } => {
                eprintln!("{e}");
                Failure::Violations
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load(spec: &str) -> Result<Scenario, Failure> {
    match Scenario::bundled(spec) {
        Some(sc) => Ok(sc),
        None => Ok(Scenario::from_path(spec)?),
    }
}

fn out_dir(arg: Option<PathBuf>) -> Result<PathBuf, Failure> {
    let dir = arg
        .or_else(|| std::env::var_os(OUT_DIR_VAR).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

fn cmd_run(
    spec: &str,
    meso: bool,
    micro: bool,
    dt: Option<f64>,
    out: Option<PathBuf>,
    fail_fast: bool,
) -> Result<bool, Failure> {
    let mut sc = load(spec)?;
    if meso || micro {
        sc = sc.with_mesoscopic(meso);
    }
    if let Some(dt) = dt {
        if !(dt > 0.0 && dt <= sc.sample_interval) {
            return Err(Failure::Usage(format!(
                "--dt must lie in (0, {}] (the sample interval)",
                sc.sample_interval
            )));
        }
        sc.dt = dt;
    }
    sc.flags.fail_fast |= fail_fast;
    let dir = out_dir(out)?;
    let variant = if sc.flags.mesoscopic { "meso" } else { "micro" };
    let stem = format!("{}-{variant}", sc.name);
    let output = run(&sc)?;
    let trace_path = dir.join(format!("{stem}.trace.csv"));
    let bytes = write_trace_file(&output.trace, &trace_path)?;
    write_json(&dir.join(format!("{stem}.summary.json")), &output.summary)?;
    let s = &output.summary;
    println!("{stem}: {} records, {bytes} bytes -> {}", output.trace.len(), trace_path.display());
    println!(
        "collisions {}  min same-lane gap {:.3} m  max switches/s {}  all converged {}",
        s.collision_count,
        s.min_same_lane_gap(),
        s.max_switches_per_second,
        s.all_converged
    );
    Ok(s.collision_count == 0)
}

fn cmd_verify(suite: SuiteArg, seed: u64, out: Option<PathBuf>) -> Result<bool, Failure> {
    let dir = out_dir(out)?;
    let mut all = true;
    for s in suite.suites() {
        let report = run_suite(s, seed)?;
        println!("{}", report.headline());
        let name = serde_json::to_value(s).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        write_json(&dir.join(format!("verify-{name}.json")), &report)?;
        all &= report.passed();
    }
    Ok(all)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_owned(), |t| format!("{t:.2}"))
}

fn cmd_compare(spec: &str, out: Option<PathBuf>) -> Result<bool, Failure> {
    let sc = load(spec)?;
    let dir = out_dir(out)?;
    let c = compare(&sc)?;
    println!("{:>4} {:>10} {:>10} {:>8} {:>10} {:>10}", "id", "onset meso", "onset micro", "lead", "osc meso", "osc micro");
    for v in &c.vehicles {
        println!(
            "{:>4} {:>10} {:>11} {:>8} {:>10} {:>10}",
            v.id,
            fmt_opt(v.onset_meso),
            fmt_opt(v.onset_micro),
            fmt_opt(v.onset_lead),
            v.sign_changes_meso,
            v.sign_changes_micro
        );
    }
    println!("collisions: meso {}, micro {}", c.meso.collision_count, c.micro.collision_count);
    write_json(&dir.join(format!("{}-compare.json", c.scenario)), &c)?;
    Ok(c.meso.collision_count == 0 && c.micro.collision_count == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenario,
            meso,
            micro,
            dt,
            out,
            fail_fast,
        } => cmd_run(&scenario, meso, micro, dt, out, fail_fast),
        Command::Verify { suite, seed, out } => cmd_verify(suite, seed, out),
        Command::Compare { scenario, out } => cmd_compare(&scenario, out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) | Err(Failure::Violations) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
