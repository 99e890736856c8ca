//! Plot-data reports assembled from prior run/sweep outputs.
//!
//! Reads whatever a results directory holds and emits plain CSV that a
//! plotting tool can consume directly:
//!
//! * `plot_write_distribution.csv`: per-block write counts from every
//!   `wear*.csv` found (block id on x, count on y).
//! * `plot_policy_comparison.csv`: per-cell sigma/mu/F bars from
//!   `sweep_aggregate.csv`.
//! * `plot_buffer_size.csv`: buffer capacity over checkpoints from every
//!   `buffer_timeline*.csv` found.

use crate::exports::AGGREGATE_FILE;
use crate::HarnessError;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const PLOT_WRITE_DISTRIBUTION: &str = "plot_write_distribution.csv";
pub const PLOT_POLICY_COMPARISON: &str = "plot_policy_comparison.csv";
pub const PLOT_BUFFER_SIZE: &str = "plot_buffer_size.csv";

fn find_prefixed(dir: &Path, prefix: &str) -> Result<Vec<PathBuf>, HarnessError> {
    let mut found = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(HarnessError::io(dir))? {
        let entry = entry.map_err(HarnessError::io(dir))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.starts_with(prefix) && name.ends_with(".csv") {
            found.push(entry.path());
        }
    }
    found.sort();
    Ok(found)
}

fn source_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Build the three plot files. Returns the paths written.
pub fn write_reports(results_dir: &Path, out_dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let wear_files = find_prefixed(results_dir, "wear")?;
    let buffer_files = find_prefixed(results_dir, "buffer_timeline")?;
    let aggregate = results_dir.join(AGGREGATE_FILE);
    let have_aggregate = aggregate.is_file();

    if wear_files.is_empty() && buffer_files.is_empty() && !have_aggregate {
        return Err(HarnessError::Report(format!(
            "nothing to report in {}: missing wear*.csv, buffer_timeline*.csv and {AGGREGATE_FILE}",
            results_dir.display()
        )));
    }

    std::fs::create_dir_all(out_dir).map_err(HarnessError::io(out_dir))?;
    let mut written = Vec::new();

    if !wear_files.is_empty() {
        let mut out = String::from("source,block_id,write_count\n");
        for path in &wear_files {
            let text = std::fs::read_to_string(path).map_err(HarnessError::io(path))?;
            let label = source_label(path);
            for line in text.lines().skip(1) {
                let mut cols = line.split(',');
                let (Some(block), Some(_status), Some(count)) =
                    (cols.next(), cols.next(), cols.next())
                else {
                    return Err(HarnessError::Report(format!(
                        "{}: malformed wear row \"{line}\"",
                        path.display()
                    )));
                };
                let _ = writeln!(out, "{label},{block},{count}");
            }
        }
        let path = out_dir.join(PLOT_WRITE_DISTRIBUTION);
        std::fs::write(&path, out).map_err(HarnessError::io(&path))?;
        written.push(path);
    }

    if have_aggregate {
        let text = std::fs::read_to_string(&aggregate).map_err(HarnessError::io(&aggregate))?;
        let mut out = String::from("pfr,cf,policy,sigma,mu,frag\n");
        for line in text.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() < 6 {
                return Err(HarnessError::Report(format!(
                    "{}: malformed aggregate row \"{line}\"",
                    aggregate.display()
                )));
            }
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                cols[0], cols[1], cols[2], cols[3], cols[4], cols[5]
            );
        }
        let path = out_dir.join(PLOT_POLICY_COMPARISON);
        std::fs::write(&path, out).map_err(HarnessError::io(&path))?;
        written.push(path);
    }

    if !buffer_files.is_empty() {
        let mut out = String::from("source,checkpoint_index,capacity_bytes\n");
        for path in &buffer_files {
            let text = std::fs::read_to_string(path).map_err(HarnessError::io(path))?;
            let label = source_label(path);
            for line in text.lines().skip(1) {
                let cols: Vec<&str> = line.split(',').collect();
                if cols.len() < 4 {
                    return Err(HarnessError::Report(format!(
                        "{}: malformed buffer timeline row \"{line}\"",
                        path.display()
                    )));
                }
                let _ = writeln!(out, "{label},{},{}", cols[0], cols[2]);
            }
        }
        let path = out_dir.join(PLOT_BUFFER_SIZE);
        std::fs::write(&path, out).map_err(HarnessError::io(&path))?;
        written.push(path);
    }

    Ok(written)
}
