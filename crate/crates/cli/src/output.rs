//! Report and plot-data files.

use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use miura_core::soliton::csv::snapshots_to_csv;
use miura_core::soliton::Snapshot;
use miura_core::Report;

use crate::error::CliError;

pub const REPORT_FILE: &str = "report.json";
pub const SNAPSHOT_FILE: &str = "snapshots.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

pub fn config_digest(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("values serialize");
    text.push('\n');
    write(path, &text)
}

pub fn write_report(dir: &Path, report: &Report) -> Result<(), CliError> {
    write_json(&dir.join(REPORT_FILE), report)
}

/// Snapshot CSV; an empty list still gets the column header.
pub fn emit_plot_data(path: &Path, snapshots: &[Snapshot]) -> Result<(), CliError> {
    write(path, &snapshots_to_csv(snapshots))
}
