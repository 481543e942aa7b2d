//! Checkpoint format for resumable projection runs.
//!
//! Text-based, versioned. Stores the run label, a content hash of the
//! reference state (the state itself is supplied by the caller on load and
//! verified against the hash), the counters, the exact generator state as
//! (seed, stream, word position), the distance trace, and the approximant in
//! the standard operator format. Loading a checkpoint and continuing with the
//! same config reproduces an uninterrupted run bit for bit.

use std::io::{BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::herm::{operator_hash, read_operator, write_operator, BipartiteDims, DensityMatrix};

use super::{GilbertState, GilbertTrace};

const FORMAT_HEADER: &str = "bewitness-checkpoint v1";

pub fn save_checkpoint<W: Write>(state: &GilbertState, writer: &mut W) -> Result<()> {
    writeln!(writer, "{FORMAT_HEADER}")?;
    writeln!(writer, "label {}", state.label)?;
    writeln!(writer, "dims {} {}", state.dims.d1(), state.dims.d2())?;
    writeln!(writer, "rho0_hash {:016x}", state.rho0_hash)?;
    writeln!(writer, "corrections {}", state.trace.corrections_done)?;
    writeln!(writer, "trials {}", state.trace.trials_used)?;
    writeln!(writer, "elapsed {:.6e}", state.elapsed_seconds)?;
    let mut seed_hex = String::with_capacity(64);
    for byte in state.rng_seed {
        seed_hex.push_str(&format!("{byte:02x}"));
    }
    writeln!(writer, "rng_seed {seed_hex}")?;
    writeln!(writer, "rng_stream {}", state.rng.get_stream())?;
    writeln!(writer, "rng_word_pos {}", state.rng.get_word_pos())?;
    writeln!(writer, "trace {}", state.trace.points.len())?;
    for (c, sq) in &state.trace.points {
        writeln!(writer, "{c} {sq:.16e}")?;
    }
    writeln!(writer, "rho1")?;
    write_operator(state.rho1.op(), writer)?;
    Ok(())
}

/// Restore a run against its reference state; rejects checkpoints written for
/// a different reference.
pub fn load_checkpoint<R: BufRead>(reader: &mut R, rho0: &DensityMatrix) -> Result<GilbertState> {
    let mut lines = Lines { reader };

    let header = lines.next_line()?;
    if header.trim() != FORMAT_HEADER {
        return Err(Error::Checkpoint(format!(
            "unrecognized header `{}`",
            header.trim()
        )));
    }
    let label = lines.field("label")?;
    let dims_line = lines.field("dims")?;
    let mut dims_it = dims_line.split_whitespace();
    let d1: usize = parse_tok(dims_it.next(), "dims d1")?;
    let d2: usize = parse_tok(dims_it.next(), "dims d2")?;
    let dims = BipartiteDims::new(d1, d2)?;

    let stored_hash = u64::from_str_radix(&lines.field("rho0_hash")?, 16)
        .map_err(|e| Error::Checkpoint(format!("bad rho0_hash: {e}")))?;
    let actual_hash = operator_hash(rho0.op());
    if stored_hash != actual_hash {
        return Err(Error::Checkpoint(format!(
            "checkpoint was written for a different reference state \
             (stored {stored_hash:016x}, supplied {actual_hash:016x})"
        )));
    }
    if rho0.dim() != dims.total() {
        return Err(Error::Checkpoint(format!(
            "reference dimension {} does not match checkpoint dims {}x{}",
            rho0.dim(),
            d1,
            d2
        )));
    }

    let corrections: u64 = parse_field(&lines.field("corrections")?, "corrections")?;
    let trials: u64 = parse_field(&lines.field("trials")?, "trials")?;
    let elapsed: f64 = parse_field(&lines.field("elapsed")?, "elapsed")?;

    let seed_hex = lines.field("rng_seed")?;
    if seed_hex.len() != 64 {
        return Err(Error::Checkpoint("rng_seed must be 32 bytes of hex".into()));
    }
    let mut rng_seed = [0u8; 32];
    for (k, chunk) in seed_hex.as_bytes().chunks(2).enumerate() {
        let s = std::str::from_utf8(chunk).map_err(|_| Error::Checkpoint("bad rng_seed".into()))?;
        rng_seed[k] =
            u8::from_str_radix(s, 16).map_err(|e| Error::Checkpoint(format!("bad rng_seed: {e}")))?;
    }
    let stream: u64 = parse_field(&lines.field("rng_stream")?, "rng_stream")?;
    let word_pos: u128 = parse_field(&lines.field("rng_word_pos")?, "rng_word_pos")?;

    let n_points: usize = parse_field(&lines.field("trace")?, "trace")?;
    let mut points = Vec::with_capacity(n_points);
    for _ in 0..n_points {
        let line = lines.next_line()?;
        let mut it = line.split_whitespace();
        let c: u64 = parse_tok(it.next(), "trace correction")?;
        let sq: f64 = parse_tok(it.next(), "trace distance")?;
        points.push((c, sq));
    }

    let marker = lines.next_line()?;
    if marker.trim() != "rho1" {
        return Err(Error::Checkpoint(format!(
            "expected `rho1` section, found `{}`",
            marker.trim()
        )));
    }
    let rho1_op = read_operator(lines.reader)?;
    if rho1_op.dim() != dims.total() {
        return Err(Error::Checkpoint(format!(
            "approximant dimension {} does not match dims {}x{}",
            rho1_op.dim(),
            d1,
            d2
        )));
    }
    let tr = rho1_op.trace();
    if (tr - 1.0).abs() > 1e-9 {
        return Err(Error::Checkpoint(format!("approximant trace is {tr}")));
    }

    let mut rng = ChaCha8Rng::from_seed(rng_seed);
    rng.set_stream(stream);
    rng.set_word_pos(word_pos);

    Ok(GilbertState {
        dims,
        rho0: rho0.clone(),
        rho1: DensityMatrix::trusted(rho1_op),
        trace: GilbertTrace {
            points,
            trials_used: trials,
            corrections_done: corrections,
        },
        rng,
        rng_seed,
        elapsed_seconds: elapsed,
        halt: None,
        rho0_hash: stored_hash,
        label,
    })
}

struct Lines<'a, R: BufRead> {
    reader: &'a mut R,
}

impl<R: BufRead> Lines<'_, R> {
    fn next_line(&mut self) -> Result<String> {
        let mut line = String::new();
        let n = self.reader.read_line(&mut line)?;
        if n == 0 {
            return Err(Error::Checkpoint("unexpected end of file".into()));
        }
        Ok(line.trim_end().to_string())
    }

    fn field(&mut self, key: &str) -> Result<String> {
        let line = self.next_line()?;
        line.strip_prefix(key)
            .map(|rest| rest.trim().to_string())
            .ok_or_else(|| Error::Checkpoint(format!("expected `{key}` line, found `{line}`")))
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, what: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse()
        .map_err(|e| Error::Checkpoint(format!("bad {what} `{s}`: {e}")))
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let s = tok.ok_or_else(|| Error::Checkpoint(format!("missing {what}")))?;
    parse_field(s, what)
}
