//! Simulation core for data-block wear in an intermittently powered NVM file
//! system.
//!
//! The crate models a small FeRAM-backed file system that appends sensor data
//! in 16-byte units, checkpoints every `cf` appends, and loses all
//! post-checkpoint progress whenever power fails. Every lost append must be
//! re-executed after recovery, so the same NVM cells are rewritten over and
//! over; the per-block write counters here quantify that wear.
//!
//! Modules map one-to-one onto the moving parts of the system:
//!
//! * [`nvm`]: the block table (geometry, allocation state, per-block wear).
//! * [`journal`]: the log space (commit records, cursor rollback, write-back).
//! * [`failure`]: seeded Bernoulli power-failure process and trace replay.
//! * [`detector`]: streak counter that toggles buffer mode on failure bursts.
//! * [`buffer`]: volatile staging buffer with atomic checkpoint write-back
//!   and file-growth-driven capacity tuning.
//! * [`policy`]: block selection and swap strategies (`bl`, `tp`, `tm`, `bf`).
//! * [`engine`]: single-run orchestration producing a [`engine::SimResult`].
//! * [`metrics`]: wear statistics (mean, population std, fragmentation,
//!   write amplification).
//!
//! Everything is `no_std` + `alloc` and strictly deterministic: a run is a
//! pure function of its [`engine::SimConfig`] (including the seed).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod buffer;
pub mod detector;
pub mod engine;
pub mod failure;
pub mod journal;
pub mod metrics;
pub mod nvm;
pub mod policy;
pub mod rng;

pub use engine::{run, SimConfig, SimResult, SimStatus};
pub use policy::PolicyKind;
