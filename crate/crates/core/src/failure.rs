//! Stochastic power-failure process with trace record/replay.
//!
//! Failure is evaluated once after each completed 16 B append: an independent
//! Bernoulli draw with probability `pfr` from the run's seeded generator. A
//! recorded outcome sequence can be replayed for exact reproduction; replay
//! consumes generator draws at the same points as the recording run so that
//! every other random decision (block picks) stays aligned.

use crate::rng::RunRng;
use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FailureError {
    #[error("pfr {0} outside [0, 1]")]
    PfrOutOfRange(f64),
    #[error("expected interval length undefined for pfr = 1")]
    CertainFailure,
    #[error("replay trace exhausted after {0} outcomes (trace/workload mismatch)")]
    TraceExhausted(usize),
}

/// Result of one failure evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Survive,
    Fail,
}

/// A recorded outcome sequence together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub pfr: f64,
    pub seed: u64,
    pub outcomes: Vec<Outcome>,
}

#[derive(Debug, Clone)]
enum Mode {
    Stochastic,
    Replay { trace: Vec<Outcome>, pos: usize },
}

/// Power-failure source for one run.
#[derive(Debug, Clone)]
pub struct FailureProcess {
    pfr: f64,
    mode: Mode,
}

impl FailureProcess {
    pub fn stochastic(pfr: f64) -> Result<Self, FailureError> {
        if !(0.0..=1.0).contains(&pfr) {
            return Err(FailureError::PfrOutOfRange(pfr));
        }
        Ok(Self {
            pfr,
            mode: Mode::Stochastic,
        })
    }

    pub fn replay(trace: &Trace) -> Result<Self, FailureError> {
        if !(0.0..=1.0).contains(&trace.pfr) {
            return Err(FailureError::PfrOutOfRange(trace.pfr));
        }
        Ok(Self {
            pfr: trace.pfr,
            mode: Mode::Replay {
                trace: trace.outcomes.clone(),
                pos: 0,
            },
        })
    }

    pub fn pfr(&self) -> f64 {
        self.pfr
    }

    /// Evaluate the outcome of one append.
    ///
    /// Always consumes one generator draw, replay or not, so downstream draw
    /// positions match between a recording run and its replay.
    pub fn next_outcome(&mut self, rng: &mut RunRng) -> Result<Outcome, FailureError> {
        let drawn = if rng.draw_failure(self.pfr) {
            Outcome::Fail
        } else {
            Outcome::Survive
        };
        match &mut self.mode {
            Mode::Stochastic => Ok(drawn),
            Mode::Replay { trace, pos } => {
                let out = trace
                    .get(*pos)
                    .copied()
                    .ok_or(FailureError::TraceExhausted(trace.len()))?;
                *pos += 1;
                Ok(out)
            }
        }
    }
}

/// Expected appends until `cf` consecutive survivals:
/// `((1 - pfr)^(-cf) - 1) / pfr`.
///
/// `pfr = 0` returns `cf` (no failures, documented special case); `pfr = 1`
/// is a domain error (the interval never completes).
pub fn expected_appends_per_interval(pfr: f64, cf: u32) -> Result<f64, FailureError> {
    if !(0.0..=1.0).contains(&pfr) {
        return Err(FailureError::PfrOutOfRange(pfr));
    }
    if pfr == 0.0 {
        return Ok(f64::from(cf));
    }
    if pfr == 1.0 {
        return Err(FailureError::CertainFailure);
    }
    let q = 1.0 - pfr;
    Ok((libm::pow(q, -f64::from(cf)) - 1.0) / pfr)
}
