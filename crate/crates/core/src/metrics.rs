//! Wear statistics.
//!
//! `mu` is the arithmetic mean of per-block write counts, `sigma` the
//! population standard deviation (divisor `n`, not `n - 1`), and
//! fragmentation `F = 1 - U/T` where `U` counts used (non-unallocated)
//! blocks out of `T` total. Write amplification relates physically written
//! units to the workload's ideal unit count.

use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("statistic of an empty count vector")]
    EmptyCounts,
    #[error("fragmentation: U={u} exceeds T={t}")]
    UsedExceedsTotal { u: usize, t: usize },
    #[error("fragmentation undefined for zero total blocks")]
    ZeroTotal,
}

/// Which blocks enter the mean/std denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StatsDenominator {
    /// All `T` blocks, including never-touched ones.
    #[default]
    AllBlocks,
    /// Only blocks with a nonzero write count.
    TouchedOnly,
}

impl StatsDenominator {
    pub fn as_str(&self) -> &'static str {
        match self {
            StatsDenominator::AllBlocks => "all",
            StatsDenominator::TouchedOnly => "touched",
        }
    }
}

/// Mean writes per block.
pub fn mean_writes(counts: &[u64]) -> Result<f64, MetricsError> {
    if counts.is_empty() {
        return Err(MetricsError::EmptyCounts);
    }
    let sum: u64 = counts.iter().sum();
    Ok(sum as f64 / counts.len() as f64)
}

/// Population standard deviation of writes per block.
pub fn std_writes(counts: &[u64]) -> Result<f64, MetricsError> {
    let mu = mean_writes(counts)?;
    let var = counts
        .iter()
        .map(|&x| {
            let d = x as f64 - mu;
            d * d
        })
        .sum::<f64>()
        / counts.len() as f64;
    Ok(libm::sqrt(var))
}

/// Block fragmentation `F = 1 - U/T`.
pub fn fragmentation(used: usize, total: usize) -> Result<f64, MetricsError> {
    if total == 0 {
        return Err(MetricsError::ZeroTotal);
    }
    if used > total {
        return Err(MetricsError::UsedExceedsTotal { u: used, t: total });
    }
    Ok(1.0 - used as f64 / total as f64)
}

/// Write amplification: physically written units over ideal units.
pub fn amplification(total_written_units: u64, ideal_units: u64) -> f64 {
    debug_assert!(ideal_units > 0);
    total_written_units as f64 / ideal_units as f64
}

/// Summary of one run's wear state.
#[derive(Debug, Clone, PartialEq)]
pub struct WearSummary {
    pub mu: f64,
    pub sigma: f64,
    pub frag: f64,
    /// Denominator actually used for `mu`/`sigma`.
    pub n: usize,
    pub used: usize,
    pub total: usize,
    pub max_write_count: u64,
}

impl WearSummary {
    pub fn from_wear(
        wear: &[u64],
        used: usize,
        denominator: StatsDenominator,
    ) -> Result<Self, MetricsError> {
        let total = wear.len();
        let filtered: Vec<u64>;
        let counts: &[u64] = match denominator {
            StatsDenominator::AllBlocks => wear,
            StatsDenominator::TouchedOnly => {
                filtered = wear.iter().copied().filter(|&c| c > 0).collect();
                &filtered
            }
        };
        let (mu, sigma, n) = if counts.is_empty() {
            (0.0, 0.0, 0)
        } else {
            (mean_writes(counts)?, std_writes(counts)?, counts.len())
        };
        Ok(Self {
            mu,
            sigma,
            frag: fragmentation(used, total)?,
            n,
            used,
            total,
            max_write_count: wear.iter().copied().max().unwrap_or(0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mean_of_zeros_is_zero() {
        assert_eq!(mean_writes(&[0, 0, 0, 0]).unwrap(), 0.0);
    }

    #[test]
    fn mean_of_two_and_four_is_three() {
        assert_eq!(mean_writes(&[2, 4]).unwrap(), 3.0);
    }

    #[test]
    fn empty_counts_are_a_domain_error() {
        assert!(mean_writes(&[]).is_err());
        assert!(std_writes(&[]).is_err());
    }

    #[test]
    fn constant_vector_has_zero_std() {
        assert_eq!(std_writes(&[7, 7, 7]).unwrap(), 0.0);
    }

    #[test]
    fn std_of_zero_two_is_one() {
        assert_eq!(std_writes(&[0, 2]).unwrap(), 1.0);
    }

    #[test]
    fn frag_boundaries() {
        assert_eq!(fragmentation(200, 200).unwrap(), 0.0);
        assert_eq!(fragmentation(0, 200).unwrap(), 1.0);
        let f = fragmentation(22, 200).unwrap();
        assert!((f - 0.89).abs() < 1e-12);
        assert!(fragmentation(5, 0).is_err());
        assert!(fragmentation(7, 6).is_err());
    }

    #[test]
    fn amplification_examples() {
        // 2208 B rewritten for 160 B of progress in one interval
        assert!((amplification(138, 10) - 13.8).abs() < 1e-12);
        assert_eq!(amplification(256, 256), 1.0);
    }

    #[test]
    fn touched_only_denominator_filters_zeros() {
        let wear = [0, 0, 32, 32, 0];
        let s = WearSummary::from_wear(&wear, 3, StatsDenominator::TouchedOnly).unwrap();
        assert_eq!(s.n, 2);
        assert_eq!(s.mu, 32.0);
        assert_eq!(s.sigma, 0.0);
        let s = WearSummary::from_wear(&wear, 3, StatsDenominator::AllBlocks).unwrap();
        assert_eq!(s.n, 5);
        assert_eq!(s.max_write_count, 32);
    }

    /// Independent two-pass references written against plain f64 loops.
    fn oracle_mean(counts: &[u64]) -> f64 {
        let mut acc = 0.0;
        for &c in counts {
            acc += c as f64;
        }
        acc / counts.len() as f64
    }

    fn oracle_std(counts: &[u64]) -> f64 {
        let m = oracle_mean(counts);
        let mut acc = 0.0;
        for &c in counts {
            acc += (c as f64 - m) * (c as f64 - m);
        }
        libm::sqrt(acc / counts.len() as f64)
    }

    proptest! {
        #[test]
        fn mean_matches_oracle(counts in proptest::collection::vec(0u64..100_000, 1..1000)) {
            let got = mean_writes(&counts).unwrap();
            let want = oracle_mean(&counts);
            prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));
        }

        #[test]
        fn std_matches_oracle(counts in proptest::collection::vec(0u64..100_000, 1..1000)) {
            let got = std_writes(&counts).unwrap();
            let want = oracle_std(&counts);
            prop_assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));
        }

        /// mean(c + k) = mean(c) + k and std is translation invariant.
        #[test]
        fn translation_properties(
            counts in proptest::collection::vec(0u64..10_000, 1..200),
            k in 0u64..1000,
        ) {
            let shifted: std::vec::Vec<u64> = counts.iter().map(|&c| c + k).collect();
            let dm = mean_writes(&shifted).unwrap() - mean_writes(&counts).unwrap();
            prop_assert!((dm - k as f64).abs() < 1e-6);
            let ds = std_writes(&shifted).unwrap() - std_writes(&counts).unwrap();
            prop_assert!(ds.abs() < 1e-6);
        }

        /// std = 0 iff all elements equal.
        #[test]
        fn zero_std_iff_constant(counts in proptest::collection::vec(0u64..50, 1..100)) {
            let s = std_writes(&counts).unwrap();
            let constant = counts.iter().all(|&c| c == counts[0]);
            prop_assert_eq!(s == 0.0, constant);
        }

        /// F strictly decreases as U grows at fixed T.
        #[test]
        fn frag_strictly_decreasing_in_used(t in 1usize..500, u in 0usize..499) {
            prop_assume!(u < t);
            let f1 = fragmentation(u, t).unwrap();
            let f2 = fragmentation(u + 1, t).unwrap();
            prop_assert!(f2 < f1);
        }
    }
}
