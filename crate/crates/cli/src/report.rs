//! JSON report envelope shared by every subcommand.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Limits;

#[derive(Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    fn of(path: &Path, bytes: &[u8]) -> Self {
        FileDigest {
            path: path.display().to_string(),
            sha256: format!("{:x}", Sha256::digest(bytes)),
        }
    }
}

/// Reads a file and remembers its digest for the report.
#[derive(Default)]
pub struct Io {
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

impl Io {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        self.inputs.push(FileDigest::of(path, &bytes));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn write(&mut self, path: &Path, text: &str) -> Result<()> {
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
        self.outputs.push(FileDigest::of(path, text.as_bytes()));
        Ok(())
    }
}

#[derive(Serialize)]
pub struct Report<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: Option<u64>,
    pub limits: &'a Limits,
    pub inputs: &'a [FileDigest],
    pub outputs: &'a [FileDigest],
    pub passed: bool,
    pub result: T,
}

pub struct Emit {
    pub json: bool,
    pub report: Option<PathBuf>,
}

impl Emit {
    /// Prints `summary` (or the JSON report with `--json`) and writes the
    /// report file when one was requested.
    pub fn finish<T: Serialize>(&self, report: &Report<T>, summary: &str) -> Result<()> {
        let text = serde_json::to_string_pretty(report)? + "\n";
        if let Some(p) = &self.report {
            fs::write(p, &text).with_context(|| format!("cannot write {}", p.display()))?;
        }
        if self.json {
            print!("{text}");
        } else {
            print!("{summary}");
        }
        Ok(())
    }
}
