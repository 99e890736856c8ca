//! High-frequency power-failure detection.
//!
//! Checkpoint signals count as successes, rollbacks that return the log
//! cursor to the commit record count as failures, and each kind zeroes the
//! other's counter. A failure streak reaching the failure threshold turns the
//! buffer on; a success streak reaching the success threshold turns it off.
//! Counters grow until the opposite event resets them.

/// Buffer mode controlled by the detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BufferStatus {
    Active,
    Inactive,
}

impl BufferStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            BufferStatus::Active => "active",
            BufferStatus::Inactive => "inactive",
        }
    }
}

/// Events the detector reacts to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorEvent {
    CheckpointSignal,
    RollbackToCommit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectorState {
    fail_count: u32,
    success_count: u32,
    fail_threshold: u32,
    success_threshold: u32,
    buffer_status: BufferStatus,
}

impl DetectorState {
    pub const DEFAULT_FAIL_THRESHOLD: u32 = 3;
    pub const DEFAULT_SUCCESS_THRESHOLD: u32 = 3;

    pub fn new(fail_threshold: u32, success_threshold: u32) -> Self {
        Self {
            fail_count: 0,
            success_count: 0,
            fail_threshold,
            success_threshold,
            buffer_status: BufferStatus::Inactive,
        }
    }

    pub fn fail_count(&self) -> u32 {
        self.fail_count
    }

    pub fn success_count(&self) -> u32 {
        self.success_count
    }

    pub fn buffer_status(&self) -> BufferStatus {
        self.buffer_status
    }

    pub fn is_active(&self) -> bool {
        self.buffer_status == BufferStatus::Active
    }

    /// A checkpoint signal arrived: one more success, failures reset, and at
    /// the success threshold the buffer turns off.
    pub fn on_checkpoint_signal(&mut self) {
        self.success_count += 1;
        self.fail_count = 0;
        if self.success_count >= self.success_threshold {
            self.buffer_status = BufferStatus::Inactive;
        }
    }

    /// A rollback left the cursor on the commit record: one more failure,
    /// successes reset, and at the failure threshold the buffer turns on.
    pub fn on_rollback_to_commit(&mut self) {
        self.fail_count += 1;
        self.success_count = 0;
        if self.fail_count >= self.fail_threshold {
            self.buffer_status = BufferStatus::Active;
        }
    }

    pub fn apply(&mut self, event: DetectorEvent) {
        match event {
            DetectorEvent::CheckpointSignal => self.on_checkpoint_signal(),
            DetectorEvent::RollbackToCommit => self.on_rollback_to_commit(),
        }
    }
}
