//! `wcalc run` and `wcalc selftest`.
//!
//! Exit codes: 0 certified, 1 not certified, 2 inconclusive, 3 input error.
//! `WCALC_THREADS` sets the worker thread count.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use wcalc::certify::Verdict;
use wcalc::report::{Report, Timing};
use wcalc::scenario::Scenario;
use wcalc::selftest::{run_selftest, Fault};

#[derive(Parser)]
#[command(name = "wcalc", version, about = "Certificates for W(Y) classes and loop conjugacy obstructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the certificate pipeline of a scenario file.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Override the window bound of the scenario.
        #[arg(long)]
        window: Option<i64>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock timing in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Run the embedded verification suite.
    Selftest {
        #[arg(long, default_value_t = 2)]
        window: i64,
        /// Corrupt the pairing table (negative control).
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    Table,
}

const EXIT_ERROR: u8 = 3;

fn write_out(out: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(scenario: &Path, window: Option<i64>, out: Option<&PathBuf>, timing: bool) -> Result<u8, String> {
    let s = Scenario::load(scenario).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let cert = s.run(window).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut report = Report::new(&s, s.effective_window(window), cert);
    if timing {
        report.timing = Some(Timing { elapsed_us: elapsed.as_micros() as i64 });
    }
    write_out(out, &report.to_json())?;
    eprintln!("{}", report.summary());
    Ok(match report.verdict {
        Verdict::Certified => 0,
        Verdict::NotCertified => 1,
        Verdict::Inconclusive => 2,
    })
}

fn selftest(window: i64, fault: Option<FaultArg>, out: Option<&PathBuf>) -> Result<u8, String> {
    if window < 1 {
        return Err("window must be at least 1".into());
    }
    let report = run_selftest(window, fault.map(|FaultArg::Table| Fault::Table));
    for c in &report.checks {
        eprintln!("{} {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
    }
    write_out(out, &report.to_json())?;
    Ok(if report.passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    if let Some(n) = std::env::var("WCALC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = match &cli.command {
        Command::Run { scenario, window, out, timing } => run(scenario, *window, out.as_ref(), *timing),
        Command::Selftest { window, inject_fault, out } => selftest(*window, *inject_fault, out.as_ref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
