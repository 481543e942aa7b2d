//! Plot-data emission from a master CSV.
//!
//! One whitespace-separated data file per dimension, rows sorted by central
//! tile area (the comparison is segregated by it), columns
//! `tile_area blue green black red`:
//! blue = final projection distance, green = extrapolated estimate,
//! black = projection-witness hyperplane distance, red = support-witness
//! hyperplane distance.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::record::ExperimentRecord;

#[derive(Debug, Clone, Default)]
pub struct ReportSummary {
    pub records: usize,
    pub dimensions: Vec<String>,
    pub sandwich_violations: Vec<String>,
    /// States where the support witness is at least as strong as the
    /// projection witness.
    pub bgr_not_beaten: Vec<String>,
    pub invalid_witnesses: Vec<String>,
}

/// Read `master_csv` and write per-dimension data files plus a text summary
/// into `out_dir`. An empty (or header-only) CSV produces an empty summary
/// and no data files.
pub fn write_report(master_csv: &Path, out_dir: &Path) -> Result<ReportSummary> {
    let text = fs::read_to_string(master_csv)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", master_csv.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        None => {}
        Some(header) if header == super::record::CSV_HEADER => {}
        Some(other) => {
            return Err(Error::Parse(format!(
                "unexpected master CSV header: `{other}`"
            )))
        }
    }

    let mut groups: BTreeMap<String, Vec<ExperimentRecord>> = BTreeMap::new();
    let mut summary = ReportSummary::default();
    for line in lines {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let record = ExperimentRecord::from_csv_row(line)?;
        if !record.sandwich_holds() {
            summary.sandwich_violations.push(record.layout.clone());
        }
        if !record.gilbert_valid {
            summary.invalid_witnesses.push(record.layout.clone());
        } else if !record.beats_bgr {
            summary.bgr_not_beaten.push(record.layout.clone());
        }
        summary.records += 1;
        let dim_key = record
            .layout
            .split('-')
            .next()
            .unwrap_or("unknown")
            .to_string();
        groups.entry(dim_key).or_default().push(record);
    }

    fs::create_dir_all(out_dir)?;
    for (dim_key, mut records) in groups {
        records.sort_by(|a, b| (a.tile_area, &a.layout).cmp(&(b.tile_area, &b.layout)));
        let mut data = String::new();
        for r in &records {
            data.push_str(&format!(
                "{} {:.12e} {:.12e} {:.12e} {:.12e}\n",
                r.tile_area,
                r.final_distance,
                r.extrapolated_distance,
                r.gilbert_witness_distance,
                r.bgr_distance
            ));
        }
        fs::write(out_dir.join(format!("plot-{dim_key}.dat")), data)?;
        summary.dimensions.push(dim_key);
    }

    let mut text = format!(
        "records {}\nsandwich_violations {}\nbgr_not_beaten {}\ninvalid_witnesses {}\n",
        summary.records,
        summary.sandwich_violations.len(),
        summary.bgr_not_beaten.len(),
        summary.invalid_witnesses.len()
    );
    for layout in &summary.sandwich_violations {
        text.push_str(&format!("violation {layout}\n"));
    }
    for layout in &summary.bgr_not_beaten {
        text.push_str(&format!("not_beaten {layout}\n"));
    }
    for layout in &summary.invalid_witnesses {
        text.push_str(&format!("invalid {layout}\n"));
    }
    fs::write(out_dir.join("report-summary.txt"), text)?;
    Ok(summary)
}
