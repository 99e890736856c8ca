//! CSV exports.
//!
//! Numeric formatting is fixed so identical runs produce byte-identical
//! files: `mu`/`sigma`/`frag` at two decimals (full precision stays in
//! memory), amplification at four.

use icfs_wearsim_core::detector::DetectorEvent;
use icfs_wearsim_core::engine::SimResult;
use std::fmt::Write;

pub const WEAR_FILE: &str = "wear.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const DETECTOR_FILE: &str = "detector_timeline.csv";
pub const BUFFER_FILE: &str = "buffer_timeline.csv";
pub const EVENTS_FILE: &str = "events.csv";
pub const RUNS_FILE: &str = "sweep_runs.csv";
pub const AGGREGATE_FILE: &str = "sweep_aggregate.csv";

pub const SUMMARY_HEADER: &str = "policy,pfr,cf,status,mu,sigma,frag,max_write_count,total_appends,max_interval_appends,amplification,seed";

/// Per-block wear histogram: `block_id,status,write_count,fill`.
pub fn wear_csv(result: &SimResult) -> String {
    let mut out = String::from("block_id,status,write_count,fill\n");
    for (id, b) in result.blocks.iter().enumerate() {
        let _ = writeln!(
            out,
            "{id},{},{},{}",
            b.status.as_str(),
            b.write_count,
            b.fill
        );
    }
    out
}

/// One summary row without the header.
pub fn summary_row(result: &SimResult) -> String {
    format!(
        "{},{},{},{},{:.2},{:.2},{:.2},{},{},{},{:.4},{}",
        result.policy,
        result.pfr,
        result.cf,
        result.status.as_str(),
        result.summary.mu,
        result.summary.sigma,
        result.summary.frag,
        result.summary.max_write_count,
        result.total_appends,
        result.max_interval_appends,
        result.amplification,
        result.seed
    )
}

pub fn summary_csv(result: &SimResult) -> String {
    format!("{SUMMARY_HEADER}\n{}\n", summary_row(result))
}

/// Detector transitions: `op_index,event,fail_count,success_count,buffer_status`.
pub fn detector_csv(result: &SimResult) -> String {
    let mut out = String::from("op_index,event,fail_count,success_count,buffer_status\n");
    for s in &result.detector_timeline {
        let event = match s.event {
            DetectorEvent::CheckpointSignal => "checkpoint_signal",
            DetectorEvent::RollbackToCommit => "rollback_to_commit",
        };
        let _ = writeln!(
            out,
            "{},{event},{},{},{}",
            s.op_index,
            s.fail_count,
            s.success_count,
            s.buffer_status.as_str()
        );
    }
    out
}

/// Buffer sizing per checkpoint:
/// `checkpoint_index,r_len_bytes,capacity_bytes,records_at_commit`.
pub fn buffer_csv(result: &SimResult) -> String {
    let mut out = String::from("checkpoint_index,r_len_bytes,capacity_bytes,records_at_commit\n");
    for s in &result.buffer_timeline {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            s.checkpoint_index, s.r_len_bytes, s.capacity_bytes, s.records_at_commit
        );
    }
    out
}

/// Raw event log: `op_index,kind,block,detail`.
pub fn events_csv(result: &SimResult) -> String {
    let mut out = String::from("op_index,kind,block,detail\n");
    for e in &result.events {
        let block = e.block.map(|b| b.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{block},units={} counted={}",
            e.op_index,
            e.kind.as_str(),
            e.units,
            e.counted_units
        );
    }
    out
}
