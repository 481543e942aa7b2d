//! Per-state pipeline and batch driver.
//!
//! One state's pipeline: build and structurally validate the state, run the
//! projection, fit the decay, construct both witnesses, compute hyperplane
//! distances, and persist artifacts under `<output_dir>/<layout>/`:
//!
//! ```text
//! trace.csv            correction,squared_distance
//! fit.csv              a,sqrt_a,b,r,classification
//! witness-gilbert.mat  operator in the standard text format
//! witness-gilbert.json metadata record
//! witness-bgr.mat / witness-bgr.json
//! checkpoint.txt       resumable projection state
//! ```
//!
//! The master CSV collects one record row per state; failed states leave a
//! `# error ...` comment row so the batch stays append-only and resumable.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decay::{fit_decay, DecayFit};
use crate::error::{Error, Result};
use crate::gilbert::{run_labeled, save_checkpoint, GilbertState};
use crate::herm::write_operator;
use crate::tiles::{build_state, enumerate_layouts, TileLayout};
use crate::witness::{bgr_witness, gilbert_witness, WitnessReport};

use super::record::{ExperimentRecord, CSV_HEADER};
use super::settings::Settings;

/// Everything produced for one state.
pub struct StateOutcome {
    pub record: ExperimentRecord,
    pub gilbert: GilbertState,
    pub fit: DecayFit,
    pub gilbert_witness: WitnessReport,
    pub bgr_witness: WitnessReport,
    pub sandwich_ok: bool,
}

/// Run the full pipeline for one layout and write its artifacts.
pub fn run_layout(layout: &TileLayout, settings: &Settings) -> Result<StateOutcome> {
    let started = Instant::now();
    let name = layout.name();
    let dims = layout.dims();
    let cfg = settings.gilbert_config(dims.d1().max(dims.d2()), &name);
    let seed = cfg.seed;

    let state = build_state(layout)?;
    let gilbert = run_labeled(&state.rho, dims, &cfg, &name)?;
    let fit = fit_decay(gilbert.trace())?;

    // Witness searches draw from a second stream of the per-state seed so
    // they are independent of the projection run but still reproducible.
    let mut witness_rng = ChaCha8Rng::seed_from_u64(seed);
    witness_rng.set_stream(1);
    let gw = gilbert_witness(
        &state.rho,
        gilbert.approximant(),
        dims,
        settings.lambda_restarts,
        settings.seesaw_iters,
        &mut witness_rng,
    )?;
    let bw = bgr_witness(
        &state,
        settings.lambda_restarts,
        settings.seesaw_iters,
        &mut witness_rng,
    )?;

    let record = ExperimentRecord {
        layout: name.clone(),
        tile_area: layout.central_area(),
        corrections: gilbert.trace().corrections_done,
        final_distance: gilbert.final_distance(),
        extrapolated_distance: fit.extrapolated_distance(),
        gilbert_witness_distance: gw.hyperplane_distance,
        bgr_distance: bw.hyperplane_distance,
        gilbert_valid: gw.valid,
        beats_bgr: gw.valid && gw.hyperplane_distance > bw.hyperplane_distance,
        seed,
        seconds: started.elapsed().as_secs_f64(),
    };
    let sandwich_ok = record.sandwich_holds();

    write_artifacts(&name, settings, &gilbert, &fit, &gw, &bw, seed)?;

    Ok(StateOutcome {
        record,
        gilbert,
        fit,
        gilbert_witness: gw,
        bgr_witness: bw,
        sandwich_ok,
    })
}

fn write_artifacts(
    name: &str,
    settings: &Settings,
    gilbert: &GilbertState,
    fit: &DecayFit,
    gw: &WitnessReport,
    bw: &WitnessReport,
    seed: u64,
) -> Result<()> {
    let dir = settings.output_dir.join(name);
    fs::create_dir_all(&dir)?;

    let mut trace = String::from("correction,squared_distance\n");
    for (c, sq) in &gilbert.trace().points {
        trace.push_str(&format!("{c},{sq:.16e}\n"));
    }
    fs::write(dir.join("trace.csv"), trace)?;

    let fit_csv = format!(
        "a,sqrt_a,b,r,classification\n{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
        fit.limit,
        fit.extrapolated_distance(),
        fit.exponent,
        fit.correlation,
        fit.classification
    );
    fs::write(dir.join("fit.csv"), fit_csv)?;

    for report in [gw, bw] {
        let stem = format!("witness-{}", report.kind.as_str());
        let mut mat = fs::File::create(dir.join(format!("{stem}.mat")))?;
        write_operator(&report.witness, &mut mat)?;
        let meta = serde_json::to_string_pretty(&report.metadata(name, seed))
            .map_err(|e| Error::Parse(format!("metadata serialization failed: {e}")))?;
        fs::write(dir.join(format!("{stem}.json")), meta + "\n")?;
    }

    let mut ckpt = fs::File::create(dir.join("checkpoint.txt"))?;
    save_checkpoint(gilbert, &mut ckpt)?;
    Ok(())
}

/// Batch results.
#[derive(Debug, Clone)]
pub struct BatchSummary {
    pub records: usize,
    pub skipped: usize,
    pub failures: Vec<(String, String)>,
    pub valid_witnesses: usize,
    pub beats_bgr: usize,
    pub sandwich_violations: usize,
}

/// Run every layout of every requested dimension, appending rows to
/// `master.csv` in the output directory.
///
/// Layouts that already have a record row are skipped unless `force` is set.
/// Individual failures do not abort the batch; they are reported in the
/// summary and leave `# error` comment rows.
pub fn run_batch(settings: &Settings, parallelism: usize, force: bool) -> Result<BatchSummary> {
    fs::create_dir_all(&settings.output_dir)?;
    let master_path = settings.output_dir.join("master.csv");
    let existing = read_completed(&master_path)?;

    let mut jobs: Vec<TileLayout> = Vec::new();
    let mut skipped = 0usize;
    for &d in &settings.dims {
        let dims = crate::herm::BipartiteDims::new(d, d)?;
        for layout in enumerate_layouts(dims)? {
            if !force && existing.contains(&layout.name()) {
                skipped += 1;
            } else {
                jobs.push(layout);
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    let results: Vec<(TileLayout, Result<StateOutcome>)> = pool.install(|| {
        jobs.par_iter()
            .map(|layout| (*layout, run_layout(layout, settings)))
            .collect()
    });

    let mut master = open_master(&master_path)?;
    let mut summary = BatchSummary {
        records: 0,
        skipped,
        failures: Vec::new(),
        valid_witnesses: 0,
        beats_bgr: 0,
        sandwich_violations: 0,
    };
    for (layout, result) in results {
        match result {
            Ok(outcome) => {
                writeln!(master, "{}", outcome.record.csv_row())?;
                summary.records += 1;
                if outcome.record.gilbert_valid {
                    summary.valid_witnesses += 1;
                }
                if outcome.record.beats_bgr {
                    summary.beats_bgr += 1;
                }
                if !outcome.sandwich_ok {
                    summary.sandwich_violations += 1;
                }
            }
            Err(e) => {
                writeln!(master, "# error layout={} {}", layout.name(), e)?;
                summary.failures.push((layout.name(), e.to_string()));
            }
        }
    }
    Ok(summary)
}

fn read_completed(master_path: &Path) -> Result<std::collections::HashSet<String>> {
    let mut done = std::collections::HashSet::new();
    if let Ok(text) = fs::read_to_string(master_path) {
        for line in text.lines().skip(1) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((layout, _)) = line.split_once(',') {
                done.insert(layout.to_string());
            }
        }
    }
    Ok(done)
}

fn open_master(path: &Path) -> Result<fs::File> {
    let fresh = !path.exists();
    let mut file = fs::OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(file, "{CSV_HEADER}")?;
    }
    Ok(file)
}
