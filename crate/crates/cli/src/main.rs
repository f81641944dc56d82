//! `bext`: run the check suites on built-in or user-supplied towers.
//!
//! Exit status is 0 when every check passes (or is skipped with a reason),
//! 1 when some check fails and 2 for usage, parse or build errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bext::harness::{
    builtin, builtin_catalog, describe, emit_report, fuzz_towers, parse_scenario, run_checks, Format, FuzzBounds,
    Scenario, Suite,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bext", version, about = "Exact checks for finite field extensions in characteristic p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in scenarios.
    Catalog,
    /// Run the suites of a scenario file or built-in scenario.
    Verify {
        /// Path to a scenario file, or the name of a built-in scenario.
        scenario: String,
        /// Run only these suites instead of the scenario's `check` list.
        #[arg(long = "suite", value_name = "NAME", value_parser = parse_suite)]
        suites: Vec<Suite>,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run the core suites on random towers.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 16)]
        max_degree: usize,
        #[arg(long, default_value_t = 3)]
        max_steps: usize,
    },
    /// Degrees of a scenario's tower and dimensions of its distinguished subfields.
    Describe { scenario: String },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
        format!("unknown suite (expected one of {})", names.join(", "))
    })
}

fn load(target: &str) -> Result<Scenario, String> {
    let path = Path::new(target);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{target}: {e}"))?;
        return parse_scenario(&text).map_err(|e| format!("{target}: {e}"));
    }
    builtin(target).ok_or_else(|| format!("{target}: no such file or built-in scenario"))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Command) -> Result<bool, String> {
    match cmd {
        Command::Catalog => {
            for s in builtin_catalog() {
                let steps: Vec<&str> = s.steps.iter().map(|st| st.name.as_str()).collect();
                println!("{:<10} degree {:<3} steps {}", s.name, s.expect.get("degree").copied().unwrap_or(0), steps.join(","));
            }
            Ok(true)
        }
        Command::Verify { scenario, suites, seed, format, out } => {
            let s = load(&scenario)?;
            let suites = (!suites.is_empty()).then_some(suites.as_slice());
            let report = run_checks(&s, suites, seed).map_err(|e| e.to_string())?;
            write_out(out.as_deref(), &emit_report(&report, format))?;
            Ok(!report.failed())
        }
        Command::Fuzz { seed, count, max_degree, max_steps } => {
            let r = fuzz_towers(seed, count, FuzzBounds { max_degree, max_steps });
            println!("seed {seed}: {} passed, {} failed, {} discarded", r.passed, r.failed, r.discarded);
            for f in r.failures() {
                print!("{}", emit_report(f, Format::Text));
            }
            Ok(r.failed == 0)
        }
        Command::Describe { scenario } => {
            let s = load(&scenario)?;
            print!("{}", describe(&s).map_err(|e| e.to_string())?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
