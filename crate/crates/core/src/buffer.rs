//! Volatile staging buffer and dynamic capacity tuning.
//!
//! While the detector reports high-frequency failure, appends are redirected
//! to an SRAM buffer instead of NVM; a power failure simply clears the buffer
//! (it is volatile), so retried appends cost no NVM wear. At each checkpoint
//! the buffered records are written back to their target blocks atomically;
//! every committed record reaches NVM cells exactly once.
//!
//! Capacity follows file growth: the estimator differences the committed file
//! length across checkpoints and sizes the buffer for the observed
//! per-interval growth, clamped to the SRAM budget. Estimator state lives in
//! NVM metadata and therefore survives power failures; buffer contents do
//! not.

use crate::nvm::{BlockId, BlockTable, NvmError, WRITE_UNIT_BYTES};
use alloc::vec::Vec;
use thiserror::Error;

/// Bytes of stored target address accompanying each buffered record.
pub const RECORD_OVERHEAD_BYTES: u64 = 8;

/// SRAM footprint of one buffered 16 B record.
pub const RECORD_FOOTPRINT_BYTES: u64 = WRITE_UNIT_BYTES + RECORD_OVERHEAD_BYTES;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BufferError {
    #[error("committed length decreased from {prev} to {now} without a write-back")]
    ShrinkingFile { prev: u64, now: u64 },
    #[error("write-back hit an invalid target: {0}")]
    BadTarget(#[from] NvmError),
}

/// One staged append: target address plus payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BufferRecord {
    pub target_block: BlockId,
    pub offset: u64,
    payload: [u8; WRITE_UNIT_BYTES as usize],
}

impl BufferRecord {
    pub fn payload(&self) -> &[u8] {
        &self.payload
    }
}

/// Outcome of a redirected append.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Redirect {
    /// Record staged; no NVM wear.
    Buffered,
    /// No room; the caller writes directly to NVM with wear.
    WriteThrough,
}

#[derive(Debug, Clone)]
pub struct VolatileBuffer {
    records: Vec<BufferRecord>,
    capacity_bytes: u64,
    sram_budget: u64,
}

impl VolatileBuffer {
    pub const DEFAULT_SRAM_BUDGET: u64 = 8192;

    /// Starts with the whole SRAM budget; the estimator narrows it later.
    pub fn new(sram_budget: u64) -> Self {
        Self {
            records: Vec::new(),
            capacity_bytes: sram_budget,
            sram_budget,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn capacity_bytes(&self) -> u64 {
        self.capacity_bytes
    }

    pub fn sram_budget(&self) -> u64 {
        self.sram_budget
    }

    pub fn occupied_bytes(&self) -> u64 {
        self.records.len() as u64 * RECORD_FOOTPRINT_BYTES
    }

    /// Stage one append if it fits, else degrade to write-through.
    pub fn redirect_append(&mut self, target: BlockId, offset: u64, payload: &[u8]) -> Redirect {
        debug_assert_eq!(payload.len() as u64, WRITE_UNIT_BYTES);
        if self.occupied_bytes() + RECORD_FOOTPRINT_BYTES > self.capacity_bytes {
            return Redirect::WriteThrough;
        }
        let mut buf = [0u8; WRITE_UNIT_BYTES as usize];
        buf.copy_from_slice(payload);
        self.records.push(BufferRecord {
            target_block: target,
            offset,
            payload: buf,
        });
        Redirect::Buffered
    }

    /// Checkpoint write-back: every record lands on its target block exactly
    /// once (one wear unit per record when counted), then the buffer empties.
    /// Atomic with respect to power failure.
    ///
    /// Returns the number of records written back.
    pub fn writeback_on_checkpoint(
        &mut self,
        table: &mut BlockTable,
        count_wear: bool,
    ) -> Result<u64, BufferError> {
        let n = self.records.len() as u64;
        for rec in self.records.drain(..) {
            table.record_write(rec.target_block, rec.offset, &rec.payload, count_wear)?;
        }
        Ok(n)
    }

    /// SRAM is volatile: a power failure clears the records. Capacity and
    /// estimator state persist (they live in NVM metadata).
    pub fn on_power_failure(&mut self) {
        self.records.clear();
    }

    /// Clamp and apply a capacity request from the estimator.
    pub fn set_capacity(&mut self, requested_bytes: u64) {
        self.capacity_bytes = requested_bytes
            .max(RECORD_FOOTPRINT_BYTES)
            .min(self.sram_budget);
    }
}

/// File-growth estimator driving the buffer capacity.
///
/// `prev_len` remembers the committed length seen at the previous checkpoint
/// (`None` plays the pseudo-code's `-1` sentinel). The first observation
/// after a reset is warm-up: it primes `prev_len` and leaves the capacity
/// alone. A log write-back resets the estimator.
#[derive(Debug, Clone, Default)]
pub struct SizeEstimator {
    prev_len: Option<u64>,
    last_growth: Option<u64>,
}

impl SizeEstimator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Last observed inter-checkpoint growth in bytes (`r_len`), if any.
    pub fn last_growth(&self) -> Option<u64> {
        self.last_growth
    }

    /// Forget the reference length (used when a run phase boundary makes the
    /// next delta meaningless).
    pub fn reset(&mut self) {
        self.prev_len = None;
    }

    /// Observe one checkpoint commit. Returns the new capacity in bytes when
    /// a fresh growth estimate was formed.
    ///
    /// Capacity request: one record footprint per 16 B of observed growth,
    /// floored at one record; the buffer clamps to its SRAM budget.
    pub fn update(
        &mut self,
        committed_len: u64,
        writeback_happened: bool,
    ) -> Result<Option<u64>, BufferError> {
        if writeback_happened {
            self.prev_len = None;
            return Ok(None);
        }
        match self.prev_len {
            None => {
                self.prev_len = Some(committed_len);
                Ok(None)
            }
            Some(prev) => {
                if committed_len < prev {
                    return Err(BufferError::ShrinkingFile {
                        prev,
                        now: committed_len,
                    });
                }
                let growth = committed_len - prev;
                self.prev_len = Some(committed_len);
                self.last_growth = Some(growth);
                let records = growth.div_ceil(WRITE_UNIT_BYTES).max(1);
                Ok(Some(records * RECORD_FOOTPRINT_BYTES))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nvm::NvmGeometry;

    fn table() -> BlockTable {
        let mut t = BlockTable::new(NvmGeometry::default());
        for id in 0..4 {
            t.allocate(id).unwrap();
        }
        t
    }

    #[test]
    fn redirect_stages_without_wear() {
        let mut t = table();
        let mut buf = VolatileBuffer::new(8192);
        assert_eq!(buf.redirect_append(0, 0, &[1u8; 16]), Redirect::Buffered);
        assert_eq!(buf.len(), 1);
        assert_eq!(t.block(0).unwrap().write_count, 0);
        // wear appears only at write-back
        buf.writeback_on_checkpoint(&mut t, true).unwrap();
        assert_eq!(t.block(0).unwrap().write_count, 1);
    }

    #[test]
    fn full_buffer_degrades_to_write_through() {
        let mut buf = VolatileBuffer::new(8192);
        buf.set_capacity(2 * RECORD_FOOTPRINT_BYTES);
        assert_eq!(buf.redirect_append(0, 0, &[0u8; 16]), Redirect::Buffered);
        assert_eq!(buf.redirect_append(0, 16, &[0u8; 16]), Redirect::Buffered);
        assert_eq!(
            buf.redirect_append(0, 32, &[0u8; 16]),
            Redirect::WriteThrough
        );
        assert_eq!(buf.len(), 2);
    }

    #[test]
    fn writeback_counts_one_unit_per_record() {
        let mut t = table();
        let mut buf = VolatileBuffer::new(8192);
        for i in 0..10u64 {
            assert_eq!(
                buf.redirect_append(1, i * 16, &[i as u8; 16]),
                Redirect::Buffered
            );
        }
        let n = buf.writeback_on_checkpoint(&mut t, true).unwrap();
        assert_eq!(n, 10);
        assert!(buf.is_empty());
        assert_eq!(t.block(1).unwrap().write_count, 10);
        assert_eq!(t.block(1).unwrap().bytes()[9 * 16], 9);
    }

    #[test]
    fn empty_writeback_is_a_noop() {
        let mut t = table();
        let mut buf = VolatileBuffer::new(8192);
        assert_eq!(buf.writeback_on_checkpoint(&mut t, true).unwrap(), 0);
    }

    #[test]
    fn writeback_spanning_blocks_charges_each_block() {
        // last two units of block 0, first three of block 1
        let mut buf = VolatileBuffer::new(8192);
        buf.redirect_append(0, 480, &[0u8; 16]);
        buf.redirect_append(0, 496, &[0u8; 16]);
        buf.redirect_append(1, 0, &[0u8; 16]);
        buf.redirect_append(1, 16, &[0u8; 16]);
        buf.redirect_append(1, 32, &[0u8; 16]);
        // block 0 needs contiguous fill up to the buffered offsets
        let mut t = table();
        for i in 0..30u64 {
            t.record_write(0, i * 16, &[0u8; 16], false).unwrap();
        }
        buf.writeback_on_checkpoint(&mut t, true).unwrap();
        assert_eq!(t.block(0).unwrap().write_count, 2);
        assert_eq!(t.block(1).unwrap().write_count, 3);
    }

    #[test]
    fn writeback_to_retired_block_is_hard_error() {
        let mut t = table();
        t.retire(2).unwrap();
        let mut buf = VolatileBuffer::new(8192);
        buf.redirect_append(2, 0, &[0u8; 16]);
        assert!(buf.writeback_on_checkpoint(&mut t, true).is_err());
    }

    #[test]
    fn power_failure_clears_records_only() {
        let mut buf = VolatileBuffer::new(8192);
        buf.set_capacity(240);
        for i in 0..5u64 {
            buf.redirect_append(0, i * 16, &[0u8; 16]);
        }
        buf.on_power_failure();
        assert!(buf.is_empty());
        assert_eq!(buf.capacity_bytes(), 240);
        buf.on_power_failure();
        assert!(buf.is_empty());
    }

    #[test]
    fn estimator_warms_up_then_sizes_from_growth() {
        let mut est = SizeEstimator::new();
        // first checkpoint ever: warm-up, no capacity change
        assert_eq!(est.update(160, false).unwrap(), None);
        // second: growth 160 B -> 10 records
        let cap = est.update(320, false).unwrap().unwrap();
        assert_eq!(cap, 10 * RECORD_FOOTPRINT_BYTES);
        assert_eq!(est.last_growth(), Some(160));
    }

    #[test]
    fn estimator_resets_on_writeback() {
        let mut est = SizeEstimator::new();
        est.update(160, false).unwrap();
        est.update(320, false).unwrap();
        assert_eq!(est.update(480, true).unwrap(), None);
        // warm-up again after the reset
        assert_eq!(est.update(640, false).unwrap(), None);
        assert_eq!(
            est.update(800, false).unwrap(),
            Some(10 * RECORD_FOOTPRINT_BYTES)
        );
    }

    #[test]
    fn estimator_rejects_shrinking_file() {
        let mut est = SizeEstimator::new();
        est.update(320, false).unwrap();
        assert!(matches!(
            est.update(160, false),
            Err(BufferError::ShrinkingFile { prev: 320, now: 160 })
        ));
    }

    #[test]
    fn zero_growth_floors_at_one_record() {
        let mut est = SizeEstimator::new();
        est.update(160, false).unwrap();
        assert_eq!(
            est.update(160, false).unwrap(),
            Some(RECORD_FOOTPRINT_BYTES)
        );
    }

    #[test]
    fn capacity_clamps_to_sram_budget() {
        let mut buf = VolatileBuffer::new(480);
        buf.set_capacity(100_000);
        assert_eq!(buf.capacity_bytes(), 480);
        buf.set_capacity(0);
        assert_eq!(buf.capacity_bytes(), RECORD_FOOTPRINT_BYTES);
    }
}
