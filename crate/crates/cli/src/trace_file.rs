//! Failure-trace file format.
//!
//! ```text
//! icfs-trace v1 pfr=0.2 seed=7
//! SSFSS...  (one character per outcome, 64 per line)
//! ```
//!
//! `S` is survive, `F` is fail; a trailing newline is required. Loading a
//! recorded trace replays the exact failure sequence, and the header carries
//! the pfr and seed that produced it so the rest of the run's randomness
//! lines up too.

use crate::HarnessError;
use icfs_wearsim_core::failure::{Outcome, Trace};
use std::fmt::Write as _;
use std::path::Path;

const LINE_WIDTH: usize = 64;

/// Render a trace in the on-disk format.
pub fn encode(trace: &Trace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "icfs-trace v1 pfr={} seed={}", trace.pfr, trace.seed);
    for chunk in trace.outcomes.chunks(LINE_WIDTH) {
        for outcome in chunk {
            out.push(match outcome {
                Outcome::Survive => 'S',
                Outcome::Fail => 'F',
            });
        }
        out.push('\n');
    }
    out
}

/// Parse the on-disk format. Errors carry 1-based line numbers.
pub fn decode(text: &str) -> Result<Trace, HarnessError> {
    let bad = |line: usize, what: String| {
        Err(HarnessError::Config(format!(
            "trace parse error at line {line}: {what}"
        )))
    };
    if !text.ends_with('\n') {
        return bad(
            text.lines().count().max(1),
            "missing trailing newline".into(),
        );
    }
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return bad(1, "empty file".into());
    };
    let mut parts = header.split(' ');
    if parts.next() != Some("icfs-trace") || parts.next() != Some("v1") {
        return bad(1, format!("bad header \"{header}\""));
    }
    let mut pfr: Option<f64> = None;
    let mut seed: Option<u64> = None;
    for part in parts {
        if let Some(v) = part.strip_prefix("pfr=") {
            pfr = v.parse().ok();
        } else if let Some(v) = part.strip_prefix("seed=") {
            seed = v.parse().ok();
        } else {
            return bad(1, format!("unexpected header field \"{part}\""));
        }
    }
    let (Some(pfr), Some(seed)) = (pfr, seed) else {
        return bad(1, "header needs pfr=<float> and seed=<u64>".into());
    };

    let mut outcomes = Vec::new();
    for (idx, line) in lines {
        if line.len() > LINE_WIDTH {
            return bad(idx + 1, format!("line longer than {LINE_WIDTH} outcomes"));
        }
        for c in line.chars() {
            outcomes.push(match c {
                'S' => Outcome::Survive,
                'F' => Outcome::Fail,
                other => return bad(idx + 1, format!("unexpected character '{other}'")),
            });
        }
    }
    Ok(Trace {
        pfr,
        seed,
        outcomes,
    })
}

pub fn save(trace: &Trace, path: &Path) -> Result<(), HarnessError> {
    std::fs::write(path, encode(trace)).map_err(HarnessError::io(path))
}

pub fn load(path: &Path) -> Result<Trace, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(HarnessError::io(path))?;
    decode(&text)
}
