//! Master CSV record, one row per state.

use crate::error::{Error, Result};

/// Header of the master CSV.
pub const CSV_HEADER: &str = "layout,tile_area,corrections,final_distance,extrapolated_distance,gilbert_witness_distance,bgr_distance,gilbert_valid,beats_bgr,seed,seconds";

/// Slack used when checking the upper-bound / estimate / lower-bound ordering.
pub const SANDWICH_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub layout: String,
    pub tile_area: usize,
    pub corrections: u64,
    /// Last distance reached by the projection (upper bound).
    pub final_distance: f64,
    /// Decay-fit estimate of the limit distance.
    pub extrapolated_distance: f64,
    /// Hyperplane distance of the projection-based witness (lower bound).
    pub gilbert_witness_distance: f64,
    /// Hyperplane distance of the support-projector witness.
    pub bgr_distance: f64,
    pub gilbert_valid: bool,
    pub beats_bgr: bool,
    pub seed: u64,
    pub seconds: f64,
}

impl ExperimentRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.12e},{:.12e},{:.12e},{:.12e},{},{},{},{:.3}",
            self.layout,
            self.tile_area,
            self.corrections,
            self.final_distance,
            self.extrapolated_distance,
            self.gilbert_witness_distance,
            self.bgr_distance,
            self.gilbert_valid,
            self.beats_bgr,
            self.seed,
            self.seconds
        )
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 11 {
            return Err(Error::Parse(format!(
                "record row has {} fields, expected 11: `{row}`",
                fields.len()
            )));
        }
        let num = |idx: usize| -> Result<f64> {
            fields[idx]
                .parse()
                .map_err(|e| Error::Parse(format!("bad number `{}`: {e}", fields[idx])))
        };
        let flag = |idx: usize| -> Result<bool> {
            fields[idx]
                .parse()
                .map_err(|e| Error::Parse(format!("bad flag `{}`: {e}", fields[idx])))
        };
        Ok(Self {
            layout: fields[0].to_string(),
            tile_area: fields[1]
                .parse()
                .map_err(|e| Error::Parse(format!("bad tile_area: {e}")))?,
            corrections: fields[2]
                .parse()
                .map_err(|e| Error::Parse(format!("bad corrections: {e}")))?,
            final_distance: num(3)?,
            extrapolated_distance: num(4)?,
            gilbert_witness_distance: num(5)?,
            bgr_distance: num(6)?,
            gilbert_valid: flag(7)?,
            beats_bgr: flag(8)?,
            seed: fields[9]
                .parse()
                .map_err(|e| Error::Parse(format!("bad seed: {e}")))?,
            seconds: num(10)?,
        })
    }

    /// Upper bound >= estimate >= witness lower bound, with slack; the lower
    /// bound only participates when the witness is valid.
    pub fn sandwich_holds(&self) -> bool {
        let upper_ok = self.final_distance + SANDWICH_SLACK >= self.extrapolated_distance;
        let lower_ok = !self.gilbert_valid
            || self.extrapolated_distance + SANDWICH_SLACK >= self.gilbert_witness_distance;
        upper_ok && lower_ok
    }
}
