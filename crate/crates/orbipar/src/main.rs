use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use orbipar::cli::{
    demo, parse_scenario, run_scenario, scenario_to_string, verify_scenario, Overrides, Report,
    Scenario, DEMOS,
};
use orbipar::Result;

#[derive(Parser)]
#[command(
    name = "orbipar",
    version,
    about = "Exact checks for orbifold bundles and parabolic data"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every command of a scenario file.
    Run {
        file: PathBuf,
        /// Also write the JSON report here (`-` for stdout).
        #[arg(long)]
        json_out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Run a built-in scenario, or write it out with `-o`.
    Demo {
        /// Omit to list the demos.
        name: Option<String>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Check the extensions and data of a scenario without running its commands.
    Verify {
        file: PathBuf,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        orbipar::OrbiparError::Config(format!("cannot read {}: {e}", path.display()))
    })?;
    parse_scenario(&text)
}

fn emit(rep: &Report, json_out: Option<&Path>) -> Result<u8> {
    match json_out {
        Some(p) if p == Path::new("-") => print!("{}", rep.to_canonical_string()),
        Some(p) => {
            std::fs::write(p, rep.to_canonical_string()).map_err(|e| {
                orbipar::OrbiparError::Config(format!("cannot write {}: {e}", p.display()))
            })?;
            print!("{}", rep.human());
        }
        None => print!("{}", rep.human()),
    }
    Ok(rep.exit_code() as u8)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Run {
            file,
            json_out,
            seed,
            precision,
        } => {
            let rep = run_scenario(load(&file)?, &Overrides { seed, precision })?;
            emit(&rep, json_out.as_deref())
        }
        Cmd::Verify { file, json_out } => {
            let rep = verify_scenario(load(&file)?, &Overrides::default())?;
            emit(&rep, json_out.as_deref())
        }
        Cmd::Demo { name: None, .. } => {
            for d in DEMOS {
                println!("{d}");
            }
            Ok(0)
        }
        Cmd::Demo {
            name: Some(name),
            output,
            json_out,
        } => {
            let sc = demo(&name)?;
            if let Some(out) = output {
                std::fs::write(&out, scenario_to_string(&sc)?).map_err(|e| {
                    orbipar::OrbiparError::Config(format!("cannot write {}: {e}", out.display()))
                })?;
                return Ok(0);
            }
            let rep = run_scenario(sc, &Overrides::default())?;
            emit(&rep, json_out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
