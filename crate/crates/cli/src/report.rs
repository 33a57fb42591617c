//! Output writers: the scan CSV, JSON sidecars, and the config echo.
//!
//! Every file is a pure function of the resolved configuration — no
//! timestamps, hostnames, or iteration-order dependence — so identical
//! configurations produce byte-identical outputs.

use std::fs;
use std::path::{Path, PathBuf};

use eo_core::error::{Error, Result};
use eo_core::scanner::ScanReport;
use serde::Serialize;

/// Cross-check note attached to continuation outputs.
pub const NOTE_CONTINUATION: &str = eo_core::energy::EXTRAPOLATION_NOTE;

/// Note attached wherever the real-form dispersion expression appears.
pub const NOTE_REAL_DISPERSION: &str =
    "real-form dispersion reading uses omega^2/c^2 and is reported next to the complex jet residual, not asserted";

/// Note attached to the operator-derivative comparison.
pub const NOTE_PSI_LITERAL: &str =
    "the linear-in-order derivative expression is evaluated verbatim and reported; the jet value is authoritative";

/// Note attached to scan outputs.
pub const NOTE_SCAN_CONVENTION: &str =
    "scan cells integrate the squared real part of the operator chain; the real/complex order is set by `convention`";

/// Writes `content` to `<out_dir>/<name>`, creating the directory if needed.
pub fn write_output(out_dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    fs::create_dir_all(out_dir).map_err(|e| {
        Error::InvalidConfig(format!("cannot create output directory {}: {e}", out_dir.display()))
    })?;
    let path = out_dir.join(name);
    fs::write(&path, content)
        .map_err(|e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Renders the scan table: header `p,i,axis,energy,m_i,below_epsilon`,
/// scientific-notation floats, one row per cell. The level-0 row starts at
/// i = 1 (its i = 0 cell backs the level comparison but is not tabulated);
/// higher levels start at i = 0.
pub fn scan_csv(report: &ScanReport) -> String {
    let mut out = String::from("p,i,axis,energy,m_i,below_epsilon\n");
    for cell in &report.cells {
        if cell.p == 0 && cell.i == 0 {
            continue;
        }
        out.push_str(&format!(
            "{},{},{},{:e},{:e},{}\n",
            cell.p,
            cell.i,
            report.axis.as_str(),
            cell.energy,
            cell.m_value,
            cell.below_epsilon
        ));
    }
    out
}
