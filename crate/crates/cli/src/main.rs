//! Command-line front end for the state-family pipeline.
//!
//! Verbs:
//! - `enumerate d1 d2` — list the layouts of a grid.
//! - `run <layout> --config <file>` — full pipeline for one state.
//! - `batch --config <file>` — every layout of the configured dimensions.
//! - `report <master.csv>` — per-dimension plot data plus a violation summary.
//! - `validate <layout>` — structural checks on one constructed state.
//!
//! Exit codes: 0 ok, 1 usage or configuration error, 2 numerical fault,
//! 3 batch completed with individual failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bewitness::error::Error;
use bewitness::harness::{run_batch, run_layout, write_report, Settings};
use bewitness::herm::BipartiteDims;
use bewitness::tiles::{build_state, enumerate_layouts, validate_state, TileLayout};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser)]
#[command(name = "bewitness", about = "UPB bound entangled states, closest-separable-state projection, and entanglement witnesses", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all tile layouts for a d1 x d2 grid.
    Enumerate { d1: usize, d2: usize },
    /// Run the full pipeline for one layout.
    Run {
        /// Layout name, e.g. 3x3-2.2-2.2.
        layout: String,
        #[arg(long)]
        config: PathBuf,
        /// Override the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every layout of the configured dimensions.
    Batch {
        #[arg(long)]
        config: PathBuf,
        /// Override the configured dimension list, e.g. "3,4".
        #[arg(long)]
        dims: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for independent states.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Re-run states that already have record rows.
        #[arg(long)]
        force: bool,
    },
    /// Emit plot data files and a violation summary from a master CSV.
    Report {
        master: PathBuf,
        /// Output directory (defaults to the CSV's directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structurally validate one constructed state.
    Validate {
        layout: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Seesaw restarts for the product-overlap search.
        #[arg(long, default_value_t = 1000)]
        restarts: u32,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not errors.
            if err.use_stderr() {
                eprint!("{err}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parse(_) | Error::InvalidLayout(_) | Error::DimTooSmall(_) => {
            EXIT_USAGE
        }
        _ => EXIT_NUMERICAL,
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Enumerate { d1, d2 } => {
            if !(3..=12).contains(&d1) || !(3..=12).contains(&d2) {
                return Err(Error::Config(format!(
                    "grid sides must be between 3 and 12, got {d1}x{d2}"
                )));
            }
            let layouts = enumerate_layouts(BipartiteDims::new(d1, d2)?)?;
            for layout in &layouts {
                println!("{}", layout.name());
            }
            println!("total {}", layouts.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { layout, config, out } => {
            let layout = TileLayout::parse(&layout)?;
            let mut settings = Settings::from_file(&config)?;
            if let Some(dir) = out {
                settings.output_dir = dir;
            }
            std::fs::create_dir_all(&settings.output_dir)?;
            let outcome = run_layout(&layout, &settings)?;
            append_record(&settings, &outcome.record)?;
            println!("{}", outcome.record.csv_row());
            if !outcome.sandwich_ok {
                eprintln!(
                    "warning: {} violates the upper/estimate/lower ordering",
                    outcome.record.layout
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Batch {
            config,
            dims,
            out,
            parallel,
            force,
        } => {
            let mut settings = Settings::from_file(&config)?;
            if let Some(list) = dims {
                settings.dims = list
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|e| Error::Config(format!("bad dims entry `{s}`: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
            }
            if let Some(dir) = out {
                settings.output_dir = dir;
            }
            for &d in &settings.dims {
                if !(3..=12).contains(&d) {
                    return Err(Error::Config(format!("dimension {d} outside 3..=12")));
                }
            }
            let summary = run_batch(&settings, parallel, force)?;
            println!(
                "records {} skipped {} failures {} valid_witnesses {} beats_bgr {} sandwich_violations {}",
                summary.records,
                summary.skipped,
                summary.failures.len(),
                summary.valid_witnesses,
                summary.beats_bgr,
                summary.sandwich_violations
            );
            for (layout, message) in &summary.failures {
                eprintln!("failed {layout}: {message}");
            }
            if summary.failures.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_PARTIAL))
            }
        }
        Command::Report { master, out } => {
            let out_dir = out.unwrap_or_else(|| {
                master
                    .parent()
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("."))
            });
            let summary = write_report(&master, &out_dir)?;
            println!(
                "records {} dimensions {} sandwich_violations {} bgr_not_beaten {} invalid_witnesses {}",
                summary.records,
                summary.dimensions.len(),
                summary.sandwich_violations.len(),
                summary.bgr_not_beaten.len(),
                summary.invalid_witnesses.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            layout,
            seed,
            restarts,
        } => {
            let layout = TileLayout::parse(&layout)?;
            let state = build_state(&layout)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let report = validate_state(&state, restarts, 200, &mut rng)?;
            println!("layout {}", layout.name());
            println!("rank {}", report.rank);
            println!("ppt_min_eigenvalue {:.6e}", report.ppt_min_eigenvalue);
            println!("stopper_residual {:.6e}", report.stopper_residual);
            for (k, r) in report.tile_residuals.iter().enumerate() {
                println!("tile_{k}_residual {r:.6e}");
            }
            println!("max_product_overlap {:.10}", report.max_product_overlap);
            println!("ppt {}", report.ppt);
            println!("entangled_support {}", report.entangled_support);
            if report.ppt && report.entangled_support && report.rank == 4 {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Error::Numerical("state failed structural validation".into()))
            }
        }
    }
}

fn append_record(
    settings: &Settings,
    record: &bewitness::harness::ExperimentRecord,
) -> Result<(), Error> {
    use std::io::Write;
    let path = settings.output_dir.join("master.csv");
    let fresh = !path.exists();
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    if fresh {
        writeln!(file, "{}", bewitness::harness::CSV_HEADER)?;
    }
    writeln!(file, "{}", record.csv_row())?;
    Ok(())
}
