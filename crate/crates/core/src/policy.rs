//! Block selection and swap strategies.
//!
//! * `bl` is the baseline: a uniformly random unallocated block per
//!   allocation.
//! * `tp` swaps on a threshold: once a block's write counter reaches it,
//!   the block is exchanged for a random zero-visit unallocated block,
//!   falling back to below-threshold unallocated blocks, then any
//!   unallocated block.
//! * `tm` is `tp` with the replacement always taken as the unallocated
//!   block with the least writes.
//! * `bf` buffers and allocates greedily: each new block is the unallocated
//!   one with the minimum access count; it never swaps.
//!
//! Swapped-out blocks are retired and never return to the free pool, so
//! sustained rollback rewriting drives `tp`/`tm` toward free-block
//! exhaustion.

use crate::nvm::{BlockId, BlockStatus, BlockTable, NvmError, WRITE_UNIT_BYTES};
use crate::rng::RunRng;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolicyError {
    #[error("no unallocated block available")]
    Exhausted,
    #[error("block table: {0}")]
    Nvm(#[from] NvmError),
}

/// Wear policy selector (CLI/config enum).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    Bl,
    Tp,
    Tm,
    Bf,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [PolicyKind::Bl, PolicyKind::Tp, PolicyKind::Tm, PolicyKind::Bf];

    pub fn as_str(&self) -> &'static str {
        match self {
            PolicyKind::Bl => "bl",
            PolicyKind::Tp => "tp",
            PolicyKind::Tm => "tm",
            PolicyKind::Bf => "bf",
        }
    }

    /// Whether this policy swaps worn blocks out.
    pub fn swaps(&self) -> bool {
        matches!(self, PolicyKind::Tp | PolicyKind::Tm)
    }

    /// Whether redirected buffering is part of this policy.
    pub fn buffers(&self) -> bool {
        matches!(self, PolicyKind::Bf)
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = UnknownPolicy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bl" => Ok(PolicyKind::Bl),
            "tp" => Ok(PolicyKind::Tp),
            "tm" => Ok(PolicyKind::Tm),
            "bf" => Ok(PolicyKind::Bf),
            _ => Err(UnknownPolicy),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown policy (expected bl, tp, tm or bf)")]
pub struct UnknownPolicy;

pub const DEFAULT_SWAP_THRESHOLD: u64 = 30;

/// Unallocated block with the minimum write count, ties to the lowest id.
fn min_access_unallocated(table: &BlockTable) -> Option<BlockId> {
    let mut best: Option<(u64, BlockId)> = None;
    for b in table.blocks() {
        if b.status == BlockStatus::Unallocated {
            match best {
                Some((count, _)) if b.write_count >= count => {}
                _ => best = Some((b.write_count, b.id)),
            }
        }
    }
    best.map(|(_, id)| id)
}

fn random_unallocated(table: &BlockTable, rng: &mut RunRng) -> Option<BlockId> {
    let ids: Vec<BlockId> = table.unallocated_ids().collect();
    if ids.is_empty() {
        None
    } else {
        Some(ids[rng.pick(ids.len())])
    }
}

fn random_unallocated_where(
    table: &BlockTable,
    rng: &mut RunRng,
    pred: impl Fn(u64) -> bool,
) -> Option<BlockId> {
    let ids: Vec<BlockId> = table
        .blocks()
        .iter()
        .filter(|b| b.status == BlockStatus::Unallocated && pred(b.write_count))
        .map(|b| b.id)
        .collect();
    if ids.is_empty() {
        None
    } else {
        Some(ids[rng.pick(ids.len())])
    }
}

/// Pick and allocate the next append target.
///
/// `bl`, `tp` and `tm` take a uniformly random unallocated block; `bf` takes
/// the one with the minimum access count (ties to the lowest id). The caller
/// resets its written-bytes counter for the fresh block.
pub fn select_next_block(
    kind: PolicyKind,
    table: &mut BlockTable,
    rng: &mut RunRng,
) -> Result<BlockId, PolicyError> {
    let chosen = match kind {
        PolicyKind::Bf => min_access_unallocated(table),
        PolicyKind::Bl | PolicyKind::Tp | PolicyKind::Tm => random_unallocated(table, rng),
    }
    .ok_or(PolicyError::Exhausted)?;
    table.allocate(chosen)?;
    Ok(chosen)
}

/// Result of a swap check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapOutcome {
    NoSwap,
    Swapped {
        from: BlockId,
        to: BlockId,
        /// Bytes copied to the replacement (the old block's fill).
        migrated_bytes: u64,
        /// Wear units charged to the replacement for the committed portion.
        wear_units: u64,
    },
}

/// Swap the current block out if its write counter has reached the
/// threshold. Checked after every direct write under `tp`/`tm`; `bl`/`bf`
/// never swap.
///
/// The whole fill is copied so the replacement holds every byte appended so
/// far, but only the committed portion (`valid_bytes`) counts as migration
/// wear: the in-flight tail is provisional until the next checkpoint.
/// The old block is retired and never returns to the free pool.
pub fn maybe_swap(
    kind: PolicyKind,
    swap_threshold: u64,
    table: &mut BlockTable,
    current: BlockId,
    valid_bytes: u64,
    count_wear: bool,
    rng: &mut RunRng,
) -> Result<SwapOutcome, PolicyError> {
    if !kind.swaps() {
        return Ok(SwapOutcome::NoSwap);
    }
    if table.block(current)?.write_count < swap_threshold {
        return Ok(SwapOutcome::NoSwap);
    }
    let replacement = match kind {
        PolicyKind::Tp => random_unallocated_where(table, rng, |c| c == 0)
            .or_else(|| random_unallocated_where(table, rng, |c| c < swap_threshold))
            .or_else(|| random_unallocated(table, rng)),
        PolicyKind::Tm => min_access_unallocated(table),
        _ => unreachable!(),
    }
    .ok_or(PolicyError::Exhausted)?;

    let fill = table.block(current)?.fill;
    table.allocate(replacement)?;
    if fill > 0 {
        table.copy_for_migration(current, replacement, fill)?;
    }
    let wear_units = valid_bytes.div_ceil(WRITE_UNIT_BYTES);
    if count_wear && wear_units > 0 {
        table.charge_wear(replacement, wear_units)?;
    }
    table.retire(current)?;
    Ok(SwapOutcome::Swapped {
        from: current,
        to: replacement,
        migrated_bytes: fill,
        wear_units,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nvm::NvmGeometry;
    use alloc::vec;

    fn small_table(wear: &[u64]) -> BlockTable {
        let g = NvmGeometry::new(4096, 2048, 512).unwrap(); // 4 blocks
        BlockTable::with_initial_wear(g, wear)
    }

    #[test]
    fn bf_selects_min_count_lowest_id() {
        let mut t = small_table(&[5, 0, 3, 0]);
        let mut rng = RunRng::from_seed(1);
        let chosen = select_next_block(PolicyKind::Bf, &mut t, &mut rng).unwrap();
        assert_eq!(chosen, 1);
        assert_eq!(t.block(1).unwrap().status, BlockStatus::Allocated);
    }

    #[test]
    fn bl_takes_the_single_free_block_regardless_of_wear() {
        let mut t = small_table(&[0, 900, 0, 0]);
        for id in [0, 2, 3] {
            t.allocate(id).unwrap();
        }
        let mut rng = RunRng::from_seed(7);
        let chosen = select_next_block(PolicyKind::Bl, &mut t, &mut rng).unwrap();
        assert_eq!(chosen, 1);
    }

    #[test]
    fn select_on_full_table_exhausts() {
        let mut t = small_table(&[0, 0, 0, 0]);
        for id in 0..4 {
            t.allocate(id).unwrap();
        }
        let mut rng = RunRng::from_seed(0);
        assert!(matches!(
            select_next_block(PolicyKind::Bf, &mut t, &mut rng),
            Err(PolicyError::Exhausted)
        ));
    }

    #[test]
    fn tp_prioritizes_zero_visit_blocks() {
        // current block 0 worn to threshold; candidates: id 1 (wear 4),
        // id 2 (wear 0), id 3 (wear 40)
        let mut t = small_table(&[30, 4, 0, 40]);
        t.allocate(0).unwrap();
        t.record_write(0, 0, &[1u8; 16], true).unwrap();
        let mut rng = RunRng::from_seed(3);
        let out = maybe_swap(PolicyKind::Tp, 30, &mut t, 0, 16, true, &mut rng).unwrap();
        match out {
            SwapOutcome::Swapped { from, to, .. } => {
                assert_eq!(from, 0);
                assert_eq!(to, 2, "zero-visit block wins");
            }
            other => panic!("expected swap, got {other:?}"),
        }
        assert_eq!(t.block(0).unwrap().status, BlockStatus::Retired);
    }

    #[test]
    fn tp_falls_back_to_below_threshold_then_any() {
        let mut t = small_table(&[30, 4, 7, 40]);
        t.allocate(0).unwrap();
        t.record_write(0, 0, &[1u8; 16], true).unwrap();
        let mut rng = RunRng::from_seed(3);
        let out = maybe_swap(PolicyKind::Tp, 30, &mut t, 0, 16, true, &mut rng).unwrap();
        match out {
            SwapOutcome::Swapped { to, .. } => assert!(to == 1 || to == 2),
            other => panic!("expected swap, got {other:?}"),
        }

        let mut t = small_table(&[30, 77, 66, 0]);
        t.allocate(0).unwrap();
        t.allocate(3).unwrap();
        t.record_write(0, 0, &[1u8; 16], true).unwrap();
        let out = maybe_swap(PolicyKind::Tp, 30, &mut t, 0, 16, true, &mut rng).unwrap();
        match out {
            SwapOutcome::Swapped { to, .. } => assert!(to == 1 || to == 2, "any unallocated"),
            other => panic!("expected swap, got {other:?}"),
        }
    }

    #[test]
    fn tm_takes_least_written_with_lowest_id_tie_break() {
        let mut t = small_table(&[12, 9, 4, 4]);
        t.allocate(0).unwrap();
        for i in 0..30u64 {
            t.record_write(0, i * 16, &[0u8; 16], true).unwrap();
        }
        let mut rng = RunRng::from_seed(11);
        let out = maybe_swap(PolicyKind::Tm, 30, &mut t, 0, 480, true, &mut rng).unwrap();
        match out {
            SwapOutcome::Swapped {
                to,
                migrated_bytes,
                wear_units,
                ..
            } => {
                assert_eq!(to, 2, "first of the count-4 blocks");
                assert_eq!(migrated_bytes, 480);
                assert_eq!(wear_units, 30);
                assert_eq!(t.block(2).unwrap().write_count, 4 + 30);
            }
            other => panic!("expected swap, got {other:?}"),
        }
    }

    #[test]
    fn below_threshold_means_no_swap() {
        let mut t = small_table(&[0, 0, 0, 0]);
        t.allocate(0).unwrap();
        for i in 0..29u64 {
            t.record_write(0, i * 16, &[0u8; 16], true).unwrap();
        }
        let mut rng = RunRng::from_seed(5);
        assert_eq!(
            maybe_swap(PolicyKind::Tp, 30, &mut t, 0, 0, true, &mut rng).unwrap(),
            SwapOutcome::NoSwap
        );
    }

    #[test]
    fn bl_and_bf_never_swap() {
        let mut t = small_table(&[500, 0, 0, 0]);
        t.allocate(0).unwrap();
        let mut rng = RunRng::from_seed(5);
        for kind in [PolicyKind::Bl, PolicyKind::Bf] {
            assert_eq!(
                maybe_swap(kind, 30, &mut t, 0, 0, true, &mut rng).unwrap(),
                SwapOutcome::NoSwap
            );
        }
    }

    #[test]
    fn swap_with_no_free_block_exhausts() {
        let mut t = small_table(&[30, 0, 0, 0]);
        for id in 0..4 {
            t.allocate(id).unwrap();
        }
        t.record_write(0, 0, &[1u8; 16], true).unwrap();
        let mut rng = RunRng::from_seed(5);
        assert!(matches!(
            maybe_swap(PolicyKind::Tm, 30, &mut t, 0, 16, true, &mut rng),
            Err(PolicyError::Exhausted)
        ));
    }

    #[test]
    fn migration_copies_content() {
        let mut t = small_table(&[0, 0, 0, 0]);
        t.allocate(3).unwrap();
        let mut payload = vec![0u8; 16];
        for i in 0..30u64 {
            payload.fill(i as u8);
            t.record_write(3, i * 16, &payload, true).unwrap();
        }
        let mut rng = RunRng::from_seed(5);
        let out = maybe_swap(PolicyKind::Tm, 30, &mut t, 3, 480, true, &mut rng).unwrap();
        let SwapOutcome::Swapped { to, .. } = out else {
            panic!("expected swap");
        };
        assert_eq!(t.block(to).unwrap().bytes()[17 * 16], 17);
        assert_eq!(t.block(to).unwrap().fill, 480);
    }

    #[test]
    fn uncounted_migration_still_copies() {
        let mut t = small_table(&[0, 0, 0, 0]);
        t.allocate(0).unwrap();
        for i in 0..30u64 {
            t.record_write(0, i * 16, &[9u8; 16], true).unwrap();
        }
        let mut rng = RunRng::from_seed(5);
        let out = maybe_swap(PolicyKind::Tm, 30, &mut t, 0, 480, false, &mut rng).unwrap();
        let SwapOutcome::Swapped { to, wear_units, .. } = out else {
            panic!("expected swap");
        };
        assert_eq!(wear_units, 30);
        assert_eq!(t.block(to).unwrap().write_count, 0);
        assert_eq!(t.block(to).unwrap().bytes()[0], 9);
    }

    #[test]
    fn policy_kind_round_trips_strings() {
        for kind in PolicyKind::ALL {
            assert_eq!(kind.as_str().parse::<PolicyKind>().unwrap(), kind);
        }
        assert!("xx".parse::<PolicyKind>().is_err());
    }
}
