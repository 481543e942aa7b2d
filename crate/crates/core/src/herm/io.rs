//! Textual operator serialization.
//!
//! Format: first line is the dimension `D`; then `D` lines of `D` entries
//! `re,im` separated by whitespace. Values are written with 17 significant
//! digits, which round-trips f64 exactly.

use std::io::{BufRead, Write};

use num_complex::Complex;

use crate::error::{Error, Result};

use super::HermitianOp;

pub fn operator_to_string(op: &HermitianOp) -> String {
    let n = op.dim();
    let mut out = String::new();
    out.push_str(&format!("{n}\n"));
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(' ');
            }
            let z = op.entry(i, j);
            out.push_str(&format!("{:.16e},{:.16e}", z.re, z.im));
        }
        out.push('\n');
    }
    out
}

pub fn write_operator<W: Write>(op: &HermitianOp, writer: &mut W) -> Result<()> {
    writer.write_all(operator_to_string(op).as_bytes())?;
    Ok(())
}

pub fn operator_from_str(text: &str) -> Result<HermitianOp> {
    let mut lines = text.lines();
    let dim: usize = lines
        .next()
        .ok_or_else(|| Error::Parse("empty operator file".into()))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad dimension line: {e}")))?;
    let mut entries = Vec::with_capacity(dim * dim);
    for row in 0..dim {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing row {row}")))?;
        let mut count = 0usize;
        for tok in line.split_whitespace() {
            let (re, im) = tok
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("entry `{tok}` is not `re,im`")))?;
            let re: f64 = re
                .parse()
                .map_err(|e| Error::Parse(format!("bad real part `{re}`: {e}")))?;
            let im: f64 = im
                .parse()
                .map_err(|e| Error::Parse(format!("bad imaginary part `{im}`: {e}")))?;
            entries.push(Complex::new(re, im));
            count += 1;
        }
        if count != dim {
            return Err(Error::Parse(format!(
                "row {row} has {count} entries, expected {dim}"
            )));
        }
    }
    HermitianOp::from_entries(dim, entries)
}

pub fn read_operator<R: BufRead>(reader: &mut R) -> Result<HermitianOp> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    operator_from_str(&text)
}

/// FNV-1a over a byte string; used for stable content hashes and seed
/// derivation (stability across platforms and runs matters, cryptographic
/// strength does not).
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Content hash of an operator's canonical serialization.
pub fn operator_hash(op: &HermitianOp) -> u64 {
    fnv1a64(operator_to_string(op).as_bytes())
}
