//! Atomic file output that can be rolled back if a later step fails.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use nearfield_core::geometry::fmt_sig9;
use serde::Serialize;

use crate::CliError;

/// Files written by one invocation, in order.
pub struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    /// Write `name` through a temporary file that is renamed into place on success.
    pub fn write<F>(&mut self, name: &str, body: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut BufWriter<File>) -> Result<(), CliError>,
    {
        let path = self.dir.join(name);
        let tmp = self.dir.join(format!(".{name}.partial"));
        let result = (|| {
            let mut out = BufWriter::new(File::create(&tmp)?);
            body(&mut out)?;
            out.into_inner().map_err(|e| e.into_error())?.sync_all()?;
            std::fs::rename(&tmp, &path)?;
            Ok(())
        })();
        if result.is_err() {
            let _ = std::fs::remove_file(&tmp);
        } else {
            self.written.push(path);
        }
        result
    }

    /// CSV with a config-hash comment line, a header and pre-formatted rows.
    pub fn csv(&mut self, name: &str, hash: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        self.write(name, |out| {
            writeln!(out, "# config_hash={hash}")?;
            nearfield_core::export::write_table_csv(out, header, rows)?;
            Ok(())
        })
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        self.write(name, |out| Ok(nearfield_core::export::write_json(out, value)?))
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// Remove everything written so far.
    pub fn roll_back(self) {
        for p in self.written.iter().rev() {
            let _ = std::fs::remove_file(p);
        }
    }
}

/// Shorthand for 9-significant-digit cells.
pub fn f(v: f64) -> String {
    fmt_sig9(v)
}
