//! Run artifacts: results CSV, replayable manifest, and a plotting script.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use crate::config::SimConfig;
use crate::record::BerRecord;

#[derive(Debug)]
pub enum OutputError {
    NoRecords,
    Io(io::Error),
}

impl fmt::Display for OutputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputError::NoRecords => write!(f, "no records to write"),
            OutputError::Io(e) => write!(f, "output error: {e}"),
        }
    }
}

impl std::error::Error for OutputError {}

impl From<io::Error> for OutputError {
    fn from(e: io::Error) -> Self {
        OutputError::Io(e)
    }
}

pub fn results_csv(records: &[BerRecord]) -> String {
    let mut out = String::new();
    out.push_str(BerRecord::csv_header());
    out.push('\n');
    for rec in records {
        out.push_str(&rec.csv_row());
        out.push('\n');
    }
    out
}

/// Writes `results.csv`, `run_manifest.txt`, and `ber_plot.py` into `dir`,
/// creating it if needed. Identical inputs produce byte-identical files.
pub fn emit_outputs(
    records: &[BerRecord],
    cfg: &SimConfig,
    dir: &Path,
) -> Result<(), OutputError> {
    if records.is_empty() {
        return Err(OutputError::NoRecords);
    }
    fs::create_dir_all(dir)?;
    fs::write(dir.join("results.csv"), results_csv(records))?;
    fs::write(dir.join("run_manifest.txt"), cfg.manifest_text())?;
    fs::write(dir.join("ber_plot.py"), PLOT_SCRIPT)?;
    Ok(())
}

/// Standalone plotting companion; requires only matplotlib.
const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
"""Plot BER vs antenna count from results.csv (run next to this script)."""
import csv
import math
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "results.csv")

series = {}
with open(path, newline="") as f:
    for row in csv.DictReader(f):
        key = "{} (K={}, {} {} m)".format(
            row["scheme"], row["users"], row["placement"], row["meters"]
        )
        series.setdefault(key, []).append(
            (
                int(row["m"]),
                float(row["ber"]),
                float(row["wilson_lo"]),
                float(row["wilson_hi"]),
            )
        )

fig, ax = plt.subplots(figsize=(6.0, 4.2))
floor = 1e-12
for key in sorted(series):
    pts = sorted(series[key])
    m = [p[0] for p in pts]
    ber = [max(p[1], floor) for p in pts]
    lo = [max(p[1] - p[2], 0.0) for p in pts]
    hi = [max(p[3] - p[1], 0.0) for p in pts]
    ax.errorbar(m, ber, yerr=[lo, hi], marker="o", capsize=3, label=key)

ax.set_xscale("log", base=2)
ax.set_yscale("log")
ax.set_xlabel("receive antennas M")
ax.set_ylabel("bit error rate")
ax.grid(True, which="both", alpha=0.3)
ax.legend(fontsize=8)
fig.tight_layout()
out = os.path.join(os.path.dirname(path), "ber_plot.png")
fig.savefig(out, dpi=150)
print("wrote", out)
"#;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::BerRecord;

    fn sample() -> (Vec<BerRecord>, SimConfig) {
        let cfg = SimConfig::default();
        let rec = BerRecord::new(&cfg, 16, 1000, 4000, 57);
        (vec![rec], cfg)
    }

    #[test]
    fn emits_three_files() {
        let (records, cfg) = sample();
        let dir = tempfile::tempdir().unwrap();
        emit_outputs(&records, &cfg, dir.path()).unwrap();
        for name in ["results.csv", "run_manifest.txt", "ber_plot.py"] {
            assert!(dir.path().join(name).exists(), "{name} missing");
        }
        let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
        assert!(csv.starts_with(BerRecord::csv_header()));
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn rerun_is_byte_identical() {
        let (records, cfg) = sample();
        let dir = tempfile::tempdir().unwrap();
        emit_outputs(&records, &cfg, dir.path()).unwrap();
        let first = std::fs::read(dir.path().join("results.csv")).unwrap();
        emit_outputs(&records, &cfg, dir.path()).unwrap();
        let second = std::fs::read(dir.path().join("results.csv")).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn empty_records_rejected() {
        let (_, cfg) = sample();
        let dir = tempfile::tempdir().unwrap();
        let err = emit_outputs(&[], &cfg, dir.path()).unwrap_err();
        assert!(matches!(err, OutputError::NoRecords));
    }
}
