//! The process itself: transient probabilities of the chain truncated at
//! `N` states, decay-rate fits, and stochastic simulation.

mod decay;
mod generator;
mod gillespie;
mod uniformization;

pub use decay::{
    estimate_decay_uniformization, geometric_times, log_linear_slope, stable_window,
    two_point_slopes, DecayEstimate, DecayMethod, DecayOptions,
};
pub use generator::TruncatedGenerator;
pub use gillespie::{
    estimate_decay_monte_carlo, gillespie_paths, SimConfig, SurvivalSamples, DEFAULT_STATE_CAP,
};
pub use uniformization::{survival, transient, transition_p11, TransientPoint};

use crate::error::Result;
use crate::law::BranchingLaw;
use crate::Scalar;

/// Shorthand for [`TruncatedGenerator::new`].
pub fn build_generator<T: Scalar>(
    law: &BranchingLaw<T>,
    n: usize,
) -> Result<TruncatedGenerator<T>> {
    TruncatedGenerator::new(law, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::validate_law;

    #[test]
    fn hand_entries() {
        let law = validate_law(&[2.0f64, -3.0, 1.0]).unwrap();
        let g = build_generator(&law, 10).unwrap();
        assert_eq!(g.entry(2, 1), 8.0);
        assert_eq!(g.entry(2, 3), 4.0);
        assert_eq!(g.entry(2, 2), -12.0);
        assert_eq!(g.entry(1, 0), 2.0);
        assert_eq!(g.entry(1, 2), 1.0);
        assert_eq!(g.entry(1, 1), -3.0);
        assert_eq!(g.entry(0, 0), 0.0);
        assert_eq!(g.entry(3, 1), 0.0);
        assert!(build_generator(&law, 5).is_err());
    }

    #[test]
    fn row_sums_and_defects() {
        let law = validate_law(&[1.0f64, -1.6, 0.3, 0.3]).unwrap();
        let g = build_generator(&law, 12).unwrap();
        for i in 1..=12 {
            let row: f64 = (0..=12).map(|j| g.entry(i, j)).sum();
            let i2 = (i * i) as f64;
            if i + 2 <= 12 {
                assert!(row.abs() < 1e-12 * i2, "row {i}");
                assert_eq!(g.row_defect(i), 0.0);
            } else {
                assert!((row + g.row_defect(i)).abs() < 1e-12 * i2);
                assert!(g.row_defect(i) > 0.0);
            }
            for j in 0..=12 {
                if j != i {
                    assert!(g.entry(i, j) >= 0.0);
                }
                if j + 1 < i || j > i + 2 {
                    assert_eq!(g.entry(i, j), 0.0);
                }
            }
        }
        assert_eq!(g.coo_dump().lines().count(), 10 * 4 + 3 + 2);
    }
}
