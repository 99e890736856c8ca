//! Log-space model: commit records, cursor rollback, and write-back.
//!
//! Metadata changes (one record per 16 B append) accumulate in a bounded log.
//! A checkpoint moves the commit marker to the cursor; a power failure moves
//! the cursor back to the commit marker, discarding uncommitted records and
//! reverting the observable file length. When the log fills up, committed
//! records are written back to the metadata area and the log is compacted;
//! the buffer-sizing estimator treats every write-back as a reset signal.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JournalError {
    #[error("append of zero bytes")]
    EmptyAppend,
    #[error("log full with no committed records to write back (capacity {0})")]
    FullWithoutCommit(u64),
    #[error("committed file length decreased without a write-back")]
    LengthRegression,
}

/// Result of one commit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommitOutcome {
    /// Whole log written back and reset during this commit.
    pub wrote_back: bool,
}

/// Result of one rollback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RollbackOutcome {
    /// The cursor now sits on the commit record. True even when the cursor
    /// had not moved since the commit (a failure right after a checkpoint
    /// still counts as a detected failure).
    pub rolled_to_commit: bool,
}

#[derive(Debug, Clone)]
pub struct LogSpace {
    cursor_pos: u64,
    commit_pos: u64,
    committed_file_len: u64,
    uncommitted_file_len: u64,
    capacity_records: u64,
    writeback_events: u64,
}

impl LogSpace {
    /// Default capacity: 256 records, write-back threshold = capacity.
    pub const DEFAULT_CAPACITY_RECORDS: u64 = 256;

    pub fn new(capacity_records: u64) -> Self {
        Self {
            cursor_pos: 0,
            commit_pos: 0,
            committed_file_len: 0,
            uncommitted_file_len: 0,
            capacity_records,
            writeback_events: 0,
        }
    }

    pub fn cursor_pos(&self) -> u64 {
        self.cursor_pos
    }

    pub fn commit_pos(&self) -> u64 {
        self.commit_pos
    }

    pub fn committed_file_len(&self) -> u64 {
        self.committed_file_len
    }

    pub fn uncommitted_file_len(&self) -> u64 {
        self.uncommitted_file_len
    }

    pub fn capacity_records(&self) -> u64 {
        self.capacity_records
    }

    pub fn writeback_events(&self) -> u64 {
        self.writeback_events
    }

    /// Record one append of `delta_len` bytes.
    ///
    /// A full log is a signal, not a failure: the committed prefix is written
    /// back to the metadata area and the uncommitted tail is compacted to the
    /// front, then the append proceeds. Only a log that is full of purely
    /// uncommitted records (an interval longer than the whole log) errors.
    ///
    /// Returns true when a write-back happened.
    pub fn append_record(&mut self, delta_len: u64) -> Result<bool, JournalError> {
        if delta_len == 0 {
            return Err(JournalError::EmptyAppend);
        }
        let mut wrote_back = false;
        if self.cursor_pos == self.capacity_records {
            if self.commit_pos == 0 {
                return Err(JournalError::FullWithoutCommit(self.capacity_records));
            }
            self.cursor_pos -= self.commit_pos;
            self.commit_pos = 0;
            self.writeback_events += 1;
            wrote_back = true;
        }
        self.cursor_pos += 1;
        self.uncommitted_file_len += delta_len;
        Ok(wrote_back)
    }

    /// Checkpoint: move the commit marker to the cursor. Committing with no
    /// new records is a no-op apart from the (idempotent) marker move. At or
    /// above the write-back threshold (= capacity) the whole log is written
    /// back and reset.
    pub fn commit(&mut self) -> CommitOutcome {
        self.commit_pos = self.cursor_pos;
        self.committed_file_len = self.uncommitted_file_len;
        let wrote_back = self.cursor_pos >= self.capacity_records;
        if wrote_back {
            self.cursor_pos = 0;
            self.commit_pos = 0;
            self.writeback_events += 1;
        }
        CommitOutcome { wrote_back }
    }

    /// Power failure: the cursor goes back to the commit record and the
    /// observable file length reverts. Idempotent.
    pub fn rollback(&mut self) -> RollbackOutcome {
        self.cursor_pos = self.commit_pos;
        self.uncommitted_file_len = self.committed_file_len;
        RollbackOutcome {
            rolled_to_commit: true,
        }
    }
}
