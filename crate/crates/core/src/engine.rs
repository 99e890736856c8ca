//! Single-run orchestration.
//!
//! A run preloads the file system failure-free, then appends the workload in
//! 16 B units. After every workload append one failure outcome is drawn; a
//! failure rolls the log back to the last commit, clears the volatile
//! buffer, and forces re-execution of the lost appends over the same blocks
//! and offsets. Every `cf` consecutive surviving appends trigger a
//! checkpoint: buffered records are written back atomically, the log
//! commits, the detector sees a success signal, and the buffer capacity is
//! re-estimated from file growth.
//!
//! A run ends `Completed` when the committed file reaches preload plus
//! workload, `Exhausted` when allocation finds no unallocated block, or
//! `Timeout` when the workload append count exceeds the op budget.

use crate::buffer::{Redirect, SizeEstimator, VolatileBuffer, RECORD_FOOTPRINT_BYTES};
use crate::detector::{BufferStatus, DetectorEvent, DetectorState};
use crate::failure::{expected_appends_per_interval, FailureError, FailureProcess, Outcome, Trace};
use crate::journal::{JournalError, LogSpace};
use crate::metrics::{self, MetricsError, StatsDenominator, WearSummary};
use crate::nvm::{BlockId, BlockTable, NvmError, NvmGeometry, WRITE_UNIT_BYTES};
use crate::policy::{self, PolicyError, PolicyKind, SwapOutcome};
use crate::rng::{splitmix64, RunRng};
use alloc::string::String;
use alloc::vec::Vec;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("block table: {0}")]
    Nvm(#[from] NvmError),
    #[error("journal: {0}")]
    Journal(#[from] JournalError),
    #[error("buffer: {0}")]
    Buffer(#[from] crate::buffer::BufferError),
    #[error("failure process: {0}")]
    Failure(#[from] FailureError),
    #[error("metrics: {0}")]
    Metrics(#[from] MetricsError),
}

impl From<PolicyError> for SimError {
    fn from(e: PolicyError) -> Self {
        match e {
            PolicyError::Exhausted => {
                SimError::InvalidConfig(String::from("exhaustion escaped status handling"))
            }
            PolicyError::Nvm(e) => SimError::Nvm(e),
        }
    }
}

/// Full parameterization of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub geometry: NvmGeometry,
    pub preload_bytes: u64,
    pub workload_bytes: u64,
    pub append_unit: u64,
    /// Appends per checkpoint interval.
    pub cf: u32,
    /// Per-append power failure probability.
    pub pfr: f64,
    pub policy: PolicyKind,
    pub swap_threshold: u64,
    pub fail_threshold: u32,
    pub success_threshold: u32,
    pub sram_budget: u64,
    pub log_capacity_records: u64,
    /// Timeout bound on workload appends (the "HD" condition).
    pub op_budget: u64,
    pub seed: u64,
    /// Count wear for preload writes (off: preload only shapes allocation).
    pub count_preload_wear: bool,
    /// Count wear for swap-migration copies.
    pub count_migration_wear: bool,
    /// Keep the buffer on from the first append, regardless of detector and
    /// policy (invariance experiments).
    pub force_buffer_active: bool,
    pub stats_denominator: StatsDenominator,
    pub record_timelines: bool,
    pub record_events: bool,
    pub record_trace: bool,
    /// Replay a recorded outcome sequence instead of drawing failures. The
    /// trace header's `pfr` and `seed` take effect for the run.
    pub replay: Option<Trace>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            geometry: NvmGeometry::default(),
            preload_bytes: 51_200,
            workload_bytes: 4_096,
            append_unit: WRITE_UNIT_BYTES,
            cf: 10,
            pfr: 0.2,
            policy: PolicyKind::Bl,
            swap_threshold: policy::DEFAULT_SWAP_THRESHOLD,
            fail_threshold: DetectorState::DEFAULT_FAIL_THRESHOLD,
            success_threshold: DetectorState::DEFAULT_SUCCESS_THRESHOLD,
            sram_budget: VolatileBuffer::DEFAULT_SRAM_BUDGET,
            log_capacity_records: LogSpace::DEFAULT_CAPACITY_RECORDS,
            op_budget: 10_000_000,
            seed: 0,
            count_preload_wear: false,
            count_migration_wear: true,
            force_buffer_active: false,
            stats_denominator: StatsDenominator::AllBlocks,
            record_timelines: true,
            record_events: false,
            record_trace: false,
            replay: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let fail = |msg: String| Err(SimError::InvalidConfig(msg));
        if self.append_unit != WRITE_UNIT_BYTES {
            return fail(alloc::format!(
                "append_unit must be {WRITE_UNIT_BYTES} (got {})",
                self.append_unit
            ));
        }
        if self.workload_bytes == 0 || !self.workload_bytes.is_multiple_of(self.append_unit) {
            return fail(alloc::format!(
                "workload_bytes {} must be a positive multiple of {}",
                self.workload_bytes,
                self.append_unit
            ));
        }
        if !self.preload_bytes.is_multiple_of(self.append_unit) {
            return fail(alloc::format!(
                "preload_bytes {} must be a multiple of {}",
                self.preload_bytes,
                self.append_unit
            ));
        }
        if !self.geometry.block_size().is_multiple_of(self.append_unit) {
            return fail(alloc::format!(
                "block_size {} must be a multiple of {}",
                self.geometry.block_size(),
                self.append_unit
            ));
        }
        if self.preload_bytes + self.workload_bytes > self.geometry.data_region_bytes() {
            return fail(alloc::format!(
                "preload + workload ({}) exceeds the data region ({})",
                self.preload_bytes + self.workload_bytes,
                self.geometry.data_region_bytes()
            ));
        }
        if self.cf == 0 {
            return fail(String::from("cf must be at least 1"));
        }
        if u64::from(self.cf) > self.log_capacity_records {
            return fail(alloc::format!(
                "cf {} exceeds log capacity {} records",
                self.cf,
                self.log_capacity_records
            ));
        }
        if !(0.0..=1.0).contains(&self.pfr) {
            return fail(alloc::format!("pfr {} outside [0, 1]", self.pfr));
        }
        if self.op_budget < self.workload_bytes / self.append_unit {
            return fail(alloc::format!(
                "op_budget {} below the workload's {} appends",
                self.op_budget,
                self.workload_bytes / self.append_unit
            ));
        }
        if self.swap_threshold == 0 {
            return fail(String::from("swap_threshold must be at least 1"));
        }
        if self.sram_budget < RECORD_FOOTPRINT_BYTES {
            return fail(alloc::format!(
                "sram_budget {} below one record footprint ({RECORD_FOOTPRINT_BYTES})",
                self.sram_budget
            ));
        }
        Ok(())
    }

    /// Effective failure probability (trace header wins under replay).
    pub fn effective_pfr(&self) -> f64 {
        self.replay.as_ref().map_or(self.pfr, |t| t.pfr)
    }

    /// Effective seed (trace header wins under replay).
    pub fn effective_seed(&self) -> u64 {
        self.replay.as_ref().map_or(self.seed, |t| t.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimStatus {
    Completed,
    Exhausted,
    Timeout,
}

impl SimStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SimStatus::Completed => "completed",
            SimStatus::Exhausted => "exhausted",
            SimStatus::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Allocate,
    AppendDirect,
    AppendBuffered,
    WriteThrough,
    WritebackRecords,
    Migration,
    Retire,
    Commit,
    Rollback,
    LogWriteback,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::Allocate => "allocate",
            EventKind::AppendDirect => "append_direct",
            EventKind::AppendBuffered => "append_buffered",
            EventKind::WriteThrough => "write_through",
            EventKind::WritebackRecords => "writeback_records",
            EventKind::Migration => "migration",
            EventKind::Retire => "retire",
            EventKind::Commit => "commit",
            EventKind::Rollback => "rollback",
            EventKind::LogWriteback => "log_writeback",
        }
    }
}

/// One entry of the run event log.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimEvent {
    pub op_index: u64,
    pub kind: EventKind,
    pub block: Option<BlockId>,
    /// Physical 16 B units written by this event.
    pub units: u64,
    /// Units that entered a wear counter (0 when accounting flags skip it).
    pub counted_units: u64,
}

/// Detector transition sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectorSample {
    pub op_index: u64,
    pub event: DetectorEvent,
    pub fail_count: u32,
    pub success_count: u32,
    pub buffer_status: BufferStatus,
}

/// Buffer sizing sample, one per checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BufferSample {
    pub checkpoint_index: u64,
    /// Last observed inter-checkpoint growth; -1 until two checkpoints have
    /// been seen since the last estimator reset.
    pub r_len_bytes: i64,
    pub capacity_bytes: u64,
    pub records_at_commit: u64,
}

/// Appends spent on one completed checkpoint interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalSample {
    pub appends: u64,
    /// 16 B units the checkpoint committed.
    pub units: u64,
}

/// Final state of one block, for the wear histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSnapshot {
    pub status: crate::nvm::BlockStatus,
    pub write_count: u64,
    pub fill: u64,
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub status: SimStatus,
    pub policy: PolicyKind,
    pub pfr: f64,
    pub cf: u32,
    pub seed: u64,
    /// Per-block write counters, block id ascending.
    pub wear: Vec<u64>,
    /// Per-block final state, block id ascending.
    pub blocks: Vec<BlockSnapshot>,
    pub summary: WearSummary,
    /// Workload appends, re-executions included.
    pub total_appends: u64,
    pub preload_appends: u64,
    pub intervals: Vec<IntervalSample>,
    pub max_interval_appends: u64,
    /// Physical 16 B units written to the data region during the workload.
    pub nvm_units_written: u64,
    /// nvm bytes written over workload bytes.
    pub amplification: f64,
    pub committed_bytes: u64,
    pub content_sha256: [u8; 32],
    pub checkpoints: u64,
    pub log_writebacks: u64,
    pub buffer_timeline: Vec<BufferSample>,
    pub detector_timeline: Vec<DetectorSample>,
    pub events: Vec<SimEvent>,
    pub recorded_trace: Option<Trace>,
}

/// Deterministic payload for the 16 B unit at `unit_index` of the file.
fn unit_payload(unit_index: u64) -> [u8; 16] {
    let a = splitmix64(unit_index);
    let b = splitmix64(unit_index ^ 0x5ee5_ee55_ee55_5ee5);
    let mut out = [0u8; 16];
    out[..8].copy_from_slice(&a.to_le_bytes());
    out[8..].copy_from_slice(&b.to_le_bytes());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Preload,
    Workload,
}

struct Engine {
    cfg: SimConfig,
    pfr: f64,
    seed: u64,
    rng: RunRng,
    process: FailureProcess,
    table: BlockTable,
    log: LogSpace,
    detector: DetectorState,
    buffer: VolatileBuffer,
    estimator: SizeEstimator,
    /// Block backing each 512 B extent of the file, in file order.
    segments: Vec<BlockId>,
    phase: Phase,
    streak: u32,
    op_index: u64,
    workload_appends: u64,
    preload_appends: u64,
    interval_appends: u64,
    last_committed: u64,
    checkpoint_index: u64,
    nvm_units_workload: u64,
    /// Append-time log compaction seen since the last checkpoint.
    writeback_pending: bool,
    intervals: Vec<IntervalSample>,
    buffer_timeline: Vec<BufferSample>,
    detector_timeline: Vec<DetectorSample>,
    events: Vec<SimEvent>,
    recorded: Vec<Outcome>,
}

impl Engine {
    fn new(cfg: SimConfig) -> Result<Self, SimError> {
        cfg.validate()?;
        let pfr = cfg.effective_pfr();
        let seed = cfg.effective_seed();
        let process = match &cfg.replay {
            Some(trace) => FailureProcess::replay(trace)?,
            None => FailureProcess::stochastic(pfr)?,
        };
        Ok(Self {
            rng: RunRng::from_seed(seed),
            process,
            table: BlockTable::new(cfg.geometry),
            log: LogSpace::new(cfg.log_capacity_records),
            detector: DetectorState::new(cfg.fail_threshold, cfg.success_threshold),
            buffer: VolatileBuffer::new(cfg.sram_budget),
            estimator: SizeEstimator::new(),
            segments: Vec::new(),
            phase: if cfg.preload_bytes == 0 {
                Phase::Workload
            } else {
                Phase::Preload
            },
            streak: 0,
            op_index: 0,
            workload_appends: 0,
            preload_appends: 0,
            interval_appends: 0,
            last_committed: 0,
            checkpoint_index: 0,
            nvm_units_workload: 0,
            writeback_pending: false,
            intervals: Vec::new(),
            buffer_timeline: Vec::new(),
            detector_timeline: Vec::new(),
            events: Vec::new(),
            recorded: Vec::new(),
            pfr,
            seed,
            cfg,
        })
    }

    fn push_event(&mut self, kind: EventKind, block: Option<BlockId>, units: u64, counted: u64) {
        if self.cfg.record_events {
            self.events.push(SimEvent {
                op_index: self.op_index,
                kind,
                block,
                units,
                counted_units: counted,
            });
        }
    }

    fn note_detector(&mut self, event: DetectorEvent) {
        if self.cfg.record_timelines {
            self.detector_timeline.push(DetectorSample {
                op_index: self.op_index,
                event,
                fail_count: self.detector.fail_count(),
                success_count: self.detector.success_count(),
                buffer_status: self.detector.buffer_status(),
            });
        }
    }

    fn in_workload(&self) -> bool {
        self.phase == Phase::Workload
    }

    fn count_wear_now(&self) -> bool {
        self.in_workload() || self.cfg.count_preload_wear
    }

    /// Committed file bytes that live in the extent backed by `seg`.
    fn committed_bytes_in_segment(&self, seg: usize) -> u64 {
        let block_size = self.cfg.geometry.block_size();
        let seg_start = seg as u64 * block_size;
        self.log
            .committed_file_len()
            .saturating_sub(seg_start)
            .min(block_size)
    }

    /// Write back, commit, signal the detector, and retune the buffer. The
    /// whole step is atomic with respect to power failure.
    fn checkpoint(&mut self, update_estimator: bool) -> Result<(), SimError> {
        let count_wear = self.count_wear_now();
        let records = self.buffer.writeback_on_checkpoint(&mut self.table, count_wear)?;
        if records > 0 {
            self.push_event(
                EventKind::WritebackRecords,
                None,
                records,
                if count_wear { records } else { 0 },
            );
            if self.in_workload() {
                self.nvm_units_workload += records;
            }
        }
        let commit = self.log.commit();
        self.push_event(EventKind::Commit, None, 0, 0);
        if commit.wrote_back {
            self.push_event(EventKind::LogWriteback, None, 0, 0);
        }
        let wrote_back = core::mem::take(&mut self.writeback_pending) || commit.wrote_back;
        self.detector.on_checkpoint_signal();
        self.note_detector(DetectorEvent::CheckpointSignal);
        self.checkpoint_index += 1;
        if update_estimator {
            if let Some(capacity) = self
                .estimator
                .update(self.log.committed_file_len(), wrote_back)?
            {
                self.buffer.set_capacity(capacity);
            }
        }
        if self.cfg.record_timelines {
            self.buffer_timeline.push(BufferSample {
                checkpoint_index: self.checkpoint_index,
                r_len_bytes: self.estimator.last_growth().map_or(-1, |g| g as i64),
                capacity_bytes: self.buffer.capacity_bytes(),
                records_at_commit: records,
            });
        }
        let committed = self.log.committed_file_len();
        if self.in_workload() {
            self.intervals.push(IntervalSample {
                appends: self.interval_appends,
                units: (committed - self.last_committed) / WRITE_UNIT_BYTES,
            });
            self.interval_appends = 0;
        }
        self.last_committed = committed;
        Ok(())
    }

    fn run(mut self) -> Result<SimResult, SimError> {
        let target_preload = self.cfg.preload_bytes;
        let target_total = self.cfg.preload_bytes + self.cfg.workload_bytes;
        let block_size = self.cfg.geometry.block_size();

        let status = loop {
            let pos = self.log.uncommitted_file_len();

            if self.phase == Phase::Preload && pos == target_preload {
                // setup ends with a clean commit; the estimator forgets the
                // (possibly partial) final preload interval
                if self.log.committed_file_len() < pos {
                    self.checkpoint(false)?;
                }
                self.estimator.reset();
                self.phase = Phase::Workload;
                self.streak = 0;
                self.interval_appends = 0;
                continue;
            }

            if pos == target_total {
                if self.log.committed_file_len() < pos {
                    self.checkpoint(true)?;
                }
                break SimStatus::Completed;
            }

            // make sure the extent for this position has a block
            let seg = (pos / block_size) as usize;
            if seg == self.segments.len() {
                match policy::select_next_block(self.cfg.policy, &mut self.table, &mut self.rng) {
                    Ok(block) => {
                        self.segments.push(block);
                        self.push_event(EventKind::Allocate, Some(block), 0, 0);
                    }
                    Err(PolicyError::Exhausted) => break SimStatus::Exhausted,
                    Err(e) => return Err(e.into()),
                }
            }
            let block = self.segments[seg];
            let offset = pos % block_size;
            let payload = unit_payload(pos / WRITE_UNIT_BYTES);
            let count_wear = self.count_wear_now();

            let buffer_on = self.cfg.force_buffer_active
                || (self.cfg.policy.buffers() && self.detector.is_active());
            let mut buffered = false;
            if buffer_on {
                match self.buffer.redirect_append(block, offset, &payload) {
                    Redirect::Buffered => {
                        buffered = true;
                        self.push_event(EventKind::AppendBuffered, Some(block), 0, 0);
                    }
                    Redirect::WriteThrough => {
                        self.table.record_write(block, offset, &payload, count_wear)?;
                        self.push_event(
                            EventKind::WriteThrough,
                            Some(block),
                            1,
                            u64::from(count_wear),
                        );
                    }
                }
            } else {
                self.table.record_write(block, offset, &payload, count_wear)?;
                self.push_event(
                    EventKind::AppendDirect,
                    Some(block),
                    1,
                    u64::from(count_wear),
                );
            }

            if !buffered {
                if self.in_workload() {
                    self.nvm_units_workload += 1;
                }
                if self.cfg.policy.swaps() {
                    let valid = self.committed_bytes_in_segment(seg);
                    let count_migration = self.cfg.count_migration_wear && count_wear;
                    match policy::maybe_swap(
                        self.cfg.policy,
                        self.cfg.swap_threshold,
                        &mut self.table,
                        block,
                        valid,
                        count_migration,
                        &mut self.rng,
                    ) {
                        Ok(SwapOutcome::NoSwap) => {}
                        Ok(SwapOutcome::Swapped {
                            from,
                            to,
                            migrated_bytes,
                            wear_units,
                        }) => {
                            self.segments[seg] = to;
                            let physical = migrated_bytes.div_ceil(WRITE_UNIT_BYTES);
                            self.push_event(
                                EventKind::Migration,
                                Some(to),
                                physical,
                                if count_migration { wear_units } else { 0 },
                            );
                            self.push_event(EventKind::Retire, Some(from), 0, 0);
                            if self.in_workload() {
                                self.nvm_units_workload += physical;
                            }
                        }
                        Err(PolicyError::Exhausted) => break SimStatus::Exhausted,
                        Err(e) => return Err(e.into()),
                    }
                }
            }

            if self.log.append_record(self.cfg.append_unit)? {
                self.writeback_pending = true;
                self.push_event(EventKind::LogWriteback, None, 0, 0);
            }
            self.op_index += 1;
            if self.in_workload() {
                self.workload_appends += 1;
                self.interval_appends += 1;
            } else {
                self.preload_appends += 1;
            }

            let outcome = if self.in_workload() {
                let outcome = self.process.next_outcome(&mut self.rng)?;
                if self.cfg.record_trace {
                    self.recorded.push(outcome);
                }
                outcome
            } else {
                Outcome::Survive
            };

            match outcome {
                Outcome::Fail => {
                    let rolled = self.log.rollback();
                    self.push_event(EventKind::Rollback, None, 0, 0);
                    self.buffer.on_power_failure();
                    debug_assert!(rolled.rolled_to_commit);
                    self.detector.on_rollback_to_commit();
                    self.note_detector(DetectorEvent::RollbackToCommit);
                    self.streak = 0;
                }
                Outcome::Survive => {
                    self.streak += 1;
                    if self.streak == self.cfg.cf {
                        self.checkpoint(true)?;
                        self.streak = 0;
                    }
                }
            }

            if self.in_workload() && self.workload_appends > self.cfg.op_budget {
                break SimStatus::Timeout;
            }
        };

        self.finish(status)
    }

    fn finish(self, status: SimStatus) -> Result<SimResult, SimError> {
        let wear = self.table.wear_vector();
        let blocks: Vec<BlockSnapshot> = self
            .table
            .blocks()
            .iter()
            .map(|b| BlockSnapshot {
                status: b.status,
                write_count: b.write_count,
                fill: b.fill,
            })
            .collect();
        let summary =
            WearSummary::from_wear(&wear, self.table.used_count(), self.cfg.stats_denominator)?;
        let committed = self.log.committed_file_len();
        let block_size = self.cfg.geometry.block_size();

        let mut content: Vec<u8> = Vec::with_capacity(committed as usize);
        for (seg, &block) in self.segments.iter().enumerate() {
            let start = seg as u64 * block_size;
            if start >= committed {
                break;
            }
            let len = (committed - start).min(block_size);
            self.table.read_into(block, 0, &mut content, len);
        }
        let content_sha256: [u8; 32] = Sha256::digest(&content).into();

        let ideal_units = self.cfg.workload_bytes / WRITE_UNIT_BYTES;
        let max_interval_appends = self.intervals.iter().map(|s| s.appends).max().unwrap_or(0);

        Ok(SimResult {
            status,
            policy: self.cfg.policy,
            pfr: self.pfr,
            cf: self.cfg.cf,
            seed: self.seed,
            wear,
            blocks,
            summary,
            total_appends: self.workload_appends,
            preload_appends: self.preload_appends,
            intervals: self.intervals,
            max_interval_appends,
            nvm_units_written: self.nvm_units_workload,
            amplification: metrics::amplification(self.nvm_units_workload, ideal_units),
            committed_bytes: committed,
            content_sha256,
            checkpoints: self.checkpoint_index,
            log_writebacks: self.log.writeback_events(),
            buffer_timeline: self.buffer_timeline,
            detector_timeline: self.detector_timeline,
            events: self.events,
            recorded_trace: if self.cfg.record_trace {
                Some(Trace {
                    pfr: self.pfr,
                    seed: self.seed,
                    outcomes: self.recorded,
                })
            } else {
                None
            },
        })
    }
}

/// Execute one experiment.
pub fn run(cfg: SimConfig) -> Result<SimResult, SimError> {
    Engine::new(cfg)?.run()
}

/// Per-interval wear report across many seeds at one configuration
/// (the "max writes between two checkpoints" experiment).
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationTwoReport {
    pub ideal_interval_bytes: u64,
    pub expected_interval_appends: f64,
    pub per_seed_max_interval_appends: Vec<u64>,
    pub per_seed_amplification: Vec<f64>,
    pub per_seed_mean_interval: Vec<f64>,
    pub pooled_interval_count: u64,
    pub pooled_mean_interval: f64,
    pub overall_max_interval_appends: u64,
}

/// Run the same configuration across seeds and pool interval statistics.
pub fn run_observation_two(
    base: &SimConfig,
    seeds: &[u64],
) -> Result<ObservationTwoReport, SimError> {
    let mut per_seed_max = Vec::with_capacity(seeds.len());
    let mut per_seed_amp = Vec::with_capacity(seeds.len());
    let mut per_seed_mean = Vec::with_capacity(seeds.len());
    let mut pooled_appends = 0u64;
    let mut pooled_count = 0u64;
    for &seed in seeds {
        let mut cfg = base.clone();
        cfg.seed = seed;
        cfg.record_timelines = false;
        cfg.record_events = false;
        let result = run(cfg)?;
        // only full-length intervals enter the pooled mean; the terminal
        // partial interval has a shorter target and would bias it
        let full: Vec<u64> = result
            .intervals
            .iter()
            .filter(|s| s.units == u64::from(base.cf))
            .map(|s| s.appends)
            .collect();
        pooled_appends += full.iter().sum::<u64>();
        pooled_count += full.len() as u64;
        per_seed_mean.push(if full.is_empty() {
            0.0
        } else {
            full.iter().sum::<u64>() as f64 / full.len() as f64
        });
        per_seed_max.push(result.max_interval_appends);
        per_seed_amp.push(result.amplification);
    }
    let overall_max_interval_appends = per_seed_max.iter().copied().max().unwrap_or(0);
    Ok(ObservationTwoReport {
        ideal_interval_bytes: u64::from(base.cf) * WRITE_UNIT_BYTES,
        expected_interval_appends: expected_appends_per_interval(base.pfr, base.cf)
            .unwrap_or(f64::from(base.cf)),
        per_seed_max_interval_appends: per_seed_max,
        per_seed_amplification: per_seed_amp,
        per_seed_mean_interval: per_seed_mean,
        pooled_interval_count: pooled_count,
        pooled_mean_interval: if pooled_count == 0 {
            0.0
        } else {
            pooled_appends as f64 / pooled_count as f64
        },
        overall_max_interval_appends,
    })
}
