//! Non-volatile block region: geometry, allocation state, and per-block wear.
//!
//! Wear is counted in 16-byte write units: every 16 bytes physically written
//! to a block increments its counter by one, whether the bytes are a fresh
//! append, a post-rollback rewrite of the same cells, a buffer write-back, or
//! a migration copy. Counters survive allocation changes: wear is physical.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

/// Size of one atomic write unit in bytes. One wear increment per unit.
pub const WRITE_UNIT_BYTES: u64 = 16;

/// Block index within the data region.
pub type BlockId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NvmError {
    #[error("geometry: block size {block_size} does not divide data region {data_region_bytes}")]
    GeometryNotDivisible {
        block_size: u64,
        data_region_bytes: u64,
    },
    #[error("geometry: data region {data_region_bytes} exceeds total {total_bytes}")]
    GeometryOversized {
        data_region_bytes: u64,
        total_bytes: u64,
    },
    #[error("write to unallocated block {0}")]
    WriteToUnallocated(BlockId),
    #[error("write to retired block {0}")]
    WriteToRetired(BlockId),
    #[error("write beyond block bounds: block {block}, offset {offset}, len {len}")]
    WriteOutOfBounds {
        block: BlockId,
        offset: u64,
        len: u64,
    },
    #[error("write leaves a gap: block {block}, offset {offset}, fill {fill}")]
    WriteGap {
        block: BlockId,
        offset: u64,
        fill: u64,
    },
    #[error("allocate on non-unallocated block {0}")]
    AlreadyAllocated(BlockId),
    #[error("retire on non-allocated block {0}")]
    RetireNotAllocated(BlockId),
    #[error("block id {0} out of range")]
    NoSuchBlock(BlockId),
}

/// Layout of the simulated NVM file system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NvmGeometry {
    total_bytes: u64,
    data_region_bytes: u64,
    block_size: u64,
}

impl NvmGeometry {
    pub fn new(total_bytes: u64, data_region_bytes: u64, block_size: u64) -> Result<Self, NvmError> {
        if block_size == 0 || !data_region_bytes.is_multiple_of(block_size) {
            return Err(NvmError::GeometryNotDivisible {
                block_size,
                data_region_bytes,
            });
        }
        if data_region_bytes > total_bytes {
            return Err(NvmError::GeometryOversized {
                data_region_bytes,
                total_bytes,
            });
        }
        Ok(Self {
            total_bytes,
            data_region_bytes,
            block_size,
        })
    }

    pub fn total_bytes(&self) -> u64 {
        self.total_bytes
    }

    pub fn data_region_bytes(&self) -> u64 {
        self.data_region_bytes
    }

    pub fn block_size(&self) -> u64 {
        self.block_size
    }

    /// Number of data blocks (the `T` of the fragmentation metric).
    pub fn block_count(&self) -> usize {
        (self.data_region_bytes / self.block_size) as usize
    }
}

impl Default for NvmGeometry {
    /// 128 KB file system, 100 KB data region, 512 B blocks (200 blocks).
    fn default() -> Self {
        Self::new(131_072, 102_400, 512).expect("default geometry is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockStatus {
    Unallocated,
    Allocated,
    Retired,
}

impl BlockStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            BlockStatus::Unallocated => "unallocated",
            BlockStatus::Allocated => "allocated",
            BlockStatus::Retired => "retired",
        }
    }
}

/// One entry of the visit-information table.
///
/// `fill` is the high-water mark of bytes ever appended into the block during
/// the current allocation; rollback does not lower it (the stale bytes remain
/// physically present and are rewritten in place on re-execution).
#[derive(Debug, Clone)]
pub struct BlockState {
    pub id: BlockId,
    pub status: BlockStatus,
    pub fill: u64,
    pub write_count: u64,
    data: Vec<u8>,
}

impl BlockState {
    pub fn bytes(&self) -> &[u8] {
        &self.data
    }
}

/// The user-data block region.
#[derive(Debug, Clone)]
pub struct BlockTable {
    geometry: NvmGeometry,
    blocks: Vec<BlockState>,
    used: usize,
}

impl BlockTable {
    pub fn new(geometry: NvmGeometry) -> Self {
        let block_size = geometry.block_size() as usize;
        let blocks = (0..geometry.block_count())
            .map(|id| BlockState {
                id,
                status: BlockStatus::Unallocated,
                fill: 0,
                write_count: 0,
                data: vec![0u8; block_size],
            })
            .collect();
        Self {
            geometry,
            blocks,
            used: 0,
        }
    }

    /// Table carrying wear from earlier experiments (counters persist only
    /// when the same table is reused; a fresh table starts at zero).
    pub fn with_initial_wear(geometry: NvmGeometry, wear: &[u64]) -> Self {
        let mut table = Self::new(geometry);
        for (block, &count) in table.blocks.iter_mut().zip(wear) {
            block.write_count = count;
        }
        table
    }

    pub fn geometry(&self) -> &NvmGeometry {
        &self.geometry
    }

    pub fn block(&self, id: BlockId) -> Result<&BlockState, NvmError> {
        self.blocks.get(id).ok_or(NvmError::NoSuchBlock(id))
    }

    pub fn blocks(&self) -> &[BlockState] {
        &self.blocks
    }

    /// `U`: number of blocks that are not unallocated. Monotone within a run.
    pub fn used_count(&self) -> usize {
        self.used
    }

    pub fn unallocated_count(&self) -> usize {
        self.blocks.len() - self.used
    }

    /// Ids of unallocated blocks, ascending.
    pub fn unallocated_ids(&self) -> impl Iterator<Item = BlockId> + '_ {
        self.blocks
            .iter()
            .filter(|b| b.status == BlockStatus::Unallocated)
            .map(|b| b.id)
    }

    pub fn wear_vector(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| b.write_count).collect()
    }

    /// Mark an unallocated block as allocated. The wear counter is preserved:
    /// wear is physical and survives reallocation.
    pub fn allocate(&mut self, id: BlockId) -> Result<(), NvmError> {
        let block = self.blocks.get_mut(id).ok_or(NvmError::NoSuchBlock(id))?;
        if block.status != BlockStatus::Unallocated {
            return Err(NvmError::AlreadyAllocated(id));
        }
        block.status = BlockStatus::Allocated;
        block.fill = 0;
        self.used += 1;
        Ok(())
    }

    /// Permanently remove an allocated block from the free pool. The block
    /// still counts toward `U`.
    pub fn retire(&mut self, id: BlockId) -> Result<(), NvmError> {
        let block = self.blocks.get_mut(id).ok_or(NvmError::NoSuchBlock(id))?;
        if block.status != BlockStatus::Allocated {
            return Err(NvmError::RetireNotAllocated(id));
        }
        block.status = BlockStatus::Retired;
        Ok(())
    }

    /// Physically write `data` into `id` at `offset`.
    ///
    /// Appends must be contiguous (`offset <= fill`); rewrites of already
    /// filled cells after a rollback are permitted and wear exactly like
    /// fresh appends. When `count_wear` is false the bytes land but the wear
    /// counter is left alone (preload accounting).
    ///
    /// Returns the number of 16 B write units.
    pub fn record_write(
        &mut self,
        id: BlockId,
        offset: u64,
        data: &[u8],
        count_wear: bool,
    ) -> Result<u64, NvmError> {
        let block = self.blocks.get_mut(id).ok_or(NvmError::NoSuchBlock(id))?;
        match block.status {
            BlockStatus::Unallocated => return Err(NvmError::WriteToUnallocated(id)),
            BlockStatus::Retired => return Err(NvmError::WriteToRetired(id)),
            BlockStatus::Allocated => {}
        }
        let len = data.len() as u64;
        debug_assert!(len > 0);
        if offset + len > self.geometry.block_size() {
            return Err(NvmError::WriteOutOfBounds {
                block: id,
                offset,
                len,
            });
        }
        if offset > block.fill {
            return Err(NvmError::WriteGap {
                block: id,
                offset,
                fill: block.fill,
            });
        }
        block.data[offset as usize..(offset + len) as usize].copy_from_slice(data);
        block.fill = block.fill.max(offset + len);
        let units = len.div_ceil(WRITE_UNIT_BYTES);
        if count_wear {
            block.write_count += units;
        }
        Ok(units)
    }

    /// Copy the first `len` bytes of `src` into `dst` without touching wear
    /// counters; the caller charges migration wear separately.
    pub fn copy_for_migration(
        &mut self,
        src: BlockId,
        dst: BlockId,
        len: u64,
    ) -> Result<(), NvmError> {
        if src >= self.blocks.len() || dst >= self.blocks.len() {
            return Err(NvmError::NoSuchBlock(src.max(dst)));
        }
        if self.blocks[dst].status != BlockStatus::Allocated {
            return Err(NvmError::WriteToUnallocated(dst));
        }
        let bytes: Vec<u8> = self.blocks[src].data[..len as usize].to_vec();
        let dst_block = &mut self.blocks[dst];
        dst_block.data[..len as usize].copy_from_slice(&bytes);
        dst_block.fill = dst_block.fill.max(len);
        Ok(())
    }

    /// Charge wear units to a block (migration accounting).
    pub fn charge_wear(&mut self, id: BlockId, units: u64) -> Result<(), NvmError> {
        let block = self.blocks.get_mut(id).ok_or(NvmError::NoSuchBlock(id))?;
        if block.status != BlockStatus::Allocated {
            return Err(NvmError::WriteToUnallocated(id));
        }
        block.write_count += units;
        Ok(())
    }

    pub fn read_into(&self, id: BlockId, offset: u64, out: &mut Vec<u8>, len: u64) {
        let block = &self.blocks[id];
        out.extend_from_slice(&block.data[offset as usize..(offset + len) as usize]);
    }
}
