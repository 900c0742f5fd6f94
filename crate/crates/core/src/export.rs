//! Deterministic file output: config hashes, curve bundles and JSON reports.

use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::curve::AmbiguityCurve;
use crate::error::{Error, Result};
use crate::geometry::fmt_sig9;

/// SHA-256 of the compact JSON form of `config`, as lowercase hex.
pub fn config_hash<T: Serialize>(config: &T) -> Result<String> {
    let text = serde_json::to_string(config)?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

/// Pretty JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Several curves on one grid in long format: one row per (sample, curve).
pub fn write_curves_csv<W: Write>(mut out: W, curves: &[&AmbiguityCurve], config_hash: &str) -> Result<()> {
    let Some(first) = curves.first() else {
        return Err(Error::InvalidGrid("no curves to write".into()));
    };
    if curves.iter().any(|c| c.grid.samples() != first.grid.samples()) {
        return Err(Error::GridMismatch("curves in one file must share a grid".into()));
    }
    writeln!(out, "# config_hash={config_hash}")?;
    writeln!(out, "d_lambda,value_linear,value_db,provenance")?;
    for c in curves {
        for ((d, v), db) in c.grid.samples().iter().zip(&c.values_linear).zip(&c.values_db) {
            writeln!(out, "{},{},{},{}", fmt_sig9(*d), fmt_sig9(*v), fmt_sig9(*db), c.provenance)?;
        }
    }
    Ok(())
}

/// Plain CSV table with a header and pre-formatted cells.
pub fn write_table_csv<W: Write>(mut out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
