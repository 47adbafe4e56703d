use std::path::PathBuf;
use std::process::ExitCode;

use abdyn::{OrbitOptions, VerifyOptions};
use abdyn_core::oracle::DEFAULT_EXHAUSTIVE_BOUND;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "abdyn", version, about = "Dense orbits or invariant fibrations for affine endomorphisms of abelian varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the scenario and write a certificate.
    Analyze {
        scenario: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a certificate on torsion models A[N].
    Verify {
        scenario: PathBuf,
        certificate: PathBuf,
        /// Repeatable; defaults to 5, 7, 11 and 101.
        #[arg(long = "modulus")]
        moduli: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_BOUND)]
        exhaustive_bound: u64,
        /// Sampled points for the orbit-span check.
        #[arg(long, default_value_t = abdyn::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the orbit of a point in A[N].
    Orbit {
        scenario: PathBuf,
        /// `0`, a declared point name, or comma-separated lattice coordinates.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 101)]
        modulus: u64,
        #[arg(long, default_value_t = 1)]
        generator: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print unity power, splitting and minimalized generators.
    Normalize {
        scenario: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(text: &str, output: Option<&PathBuf>) -> anyhow::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| anyhow::anyhow!("writing {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

/// `Ok(true)` when the command computed or verified, `Ok(false)` when verification failed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Analyze { scenario, output } => {
            let s = abdyn::load_scenario(&scenario)?;
            let cert = abdyn::analyze(&s)?;
            emit(&with_newline(cert.to_json()), output.as_ref())?;
            Ok(true)
        }
        Command::Verify {
            scenario,
            certificate,
            moduli,
            seed,
            exhaustive_bound,
            trials,
            output,
        } => {
            let s = abdyn::load_scenario(&scenario)?;
            let cert = abdyn::load_certificate(&certificate)?;
            let mut opts = VerifyOptions {
                seed,
                exhaustive_bound,
                trials,
                ..VerifyOptions::default()
            };
            if !moduli.is_empty() {
                opts.moduli = moduli;
            }
            let res = abdyn::verify(&s, &cert, &opts)?;
            emit(&with_newline(res.to_json()), output.as_ref())?;
            if !res.passed {
                for m in &res.messages {
                    eprintln!("{m}");
                }
            }
            Ok(res.passed)
        }
        Command::Orbit {
            scenario,
            point,
            steps,
            modulus,
            generator,
            seed,
            output,
        } => {
            let s = abdyn::load_scenario(&scenario)?;
            let text = abdyn::orbit(
                &s,
                &OrbitOptions {
                    point,
                    steps,
                    modulus,
                    generator,
                    seed,
                },
            )?;
            emit(&text, output.as_ref())?;
            Ok(true)
        }
        Command::Normalize { scenario, output } => {
            let s = abdyn::load_scenario(&scenario)?;
            emit(&abdyn::normalization_report(&s)?, output.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
