use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use raywig_core::io::{self, read_oracle, read_ray, read_state};
use raywig_core::suites::{self, OutputFormat, RunConfig, Suite};
use raywig_core::{
    check_half_solid_angle, determine_chi, is_isometry_sampled, triangle_report, verify_w1_w2,
    wigner_lift, Error, Result, Tolerances,
};

/// Exit status of `verify` when a property fails.
const EXIT_PROPERTY_FAILED: u8 = 1;
/// Random pairs used by `classify` for the isometry check.
const CLASSIFY_PAIRS: usize = 256;
/// W1/W2 checks reported by `reconstruct`.
const RECONSTRUCT_CHECKS: usize = 100;

#[derive(Parser, Debug)]
#[command(
    name = "raywig",
    version,
    about = "Ray-space geometric phases and Wigner lifts"
)]
struct Cli {
    /// Overrides the equality tolerance (default 1e-10).
    #[arg(long, env = "RAYWIG_TOL", global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bargmann invariant and geodesic triangle of three states.
    Phase { a: PathBuf, b: PathBuf, c: PathBuf },
    /// Unitary or antiunitary type of an oracle.
    Classify {
        oracle: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reconstructs the operator behind an oracle.
    Reconstruct {
        oracle: PathBuf,
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, default_value = "lift.json")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Excess phase against half the Poincaré-sphere solid angle (two-state only).
    Poincare { a: PathBuf, b: PathBuf, c: PathBuf },
    /// Runs a property suite, or `all`.
    Verify {
        suite: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Spread trials over threads; the report is identical either way.
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

fn tolerances(eq_tol: Option<f64>) -> Result<Tolerances> {
    match eq_tol {
        Some(t) => Tolerances::default().with_eq_tol(t),
        None => Ok(Tolerances::default()),
    }
}

fn run(cli: Cli) -> Result<u8> {
    let tol = tolerances(cli.tol)?;
    match cli.command {
        Command::Phase { a, b, c } => {
            let (ra, rb, rc) = (
                read_ray(&a, &tol)?,
                read_ray(&b, &tol)?,
                read_ray(&c, &tol)?,
            );
            let report = triangle_report(&ra, &rb, &rc, &tol)?;
            println!("{}", io::to_json_string(&report));
        }
        Command::Classify { oracle, seed } => {
            let map = read_oracle(&oracle, &tol)?;
            if map.dim() < 2 {
                return Err(Error::UnsupportedDimension(
                    map.dim(),
                    "classification needs dim >= 2",
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let check = is_isometry_sampled(&map, CLASSIFY_PAIRS, &mut rng, &tol)?;
            if !check.is_isometry {
                return Err(Error::NotIsometry(check.max_deviation));
            }
            let chi = determine_chi(&map, &mut rng, &tol)?;
            println!(
                "{}",
                json!({ "chi": chi.as_str(), "max_deviation": check.max_deviation })
            );
        }
        Command::Reconstruct {
            oracle,
            reference,
            out,
            seed,
        } => {
            let map = read_oracle(&oracle, &tol)?;
            let reference = reference.map(|p| read_state(&p)).transpose()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lift = wigner_lift(&map, reference.as_ref(), &mut rng, &tol)?;
            let checks = verify_w1_w2(&map, &lift, RECONSTRUCT_CHECKS, &mut rng, &tol)?;
            io::write_file(&out, &io::lifted_to_json(&lift))?;
            let report = raywig_core::wigner::FidelityReport {
                chi: lift.chi(),
                fidelity: map.matrix().map(|(m, _)| lift.fidelity(m)),
                w1_max_residual: checks.w1_max_residual,
                w2_max_residual: checks.w2_max_residual,
            };
            println!("{}", io::to_json_string(&report));
        }
        Command::Poincare { a, b, c } => {
            let (ra, rb, rc) = (
                read_ray(&a, &tol)?,
                read_ray(&b, &tol)?,
                read_ray(&c, &tol)?,
            );
            let report = check_half_solid_angle(&ra, &rb, &rc, &tol)?;
            println!("{}", io::to_json_string(&report));
        }
        Command::Verify {
            suite,
            dim,
            trials,
            seed,
            format,
            parallel,
        } => {
            let selection = Suite::parse_selection(&suite)?;
            let cfg = RunConfig {
                seed,
                dim,
                trials,
                tol,
                format: format.into(),
                parallel,
            };
            let report = suites::run(&selection, &cfg)?;
            let text = report.render(cfg.format);
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            if !report.passed {
                return Ok(EXIT_PROPERTY_FAILED);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("raywig: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
