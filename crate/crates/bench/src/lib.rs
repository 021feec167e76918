//! Shared fixtures for the pipeline benchmarks.

use omega3_core::engine::{case_entry_factors, CaseFactors, CaseLabel};

/// The heaviest single summand: one gradient slot of the order -2 case.
pub fn case_b_slot() -> CaseFactors {
    case_entry_factors(CaseLabel::B, &[0, 0, 0], &[1, 0, 0], &[0, 1, 0])
        .expect("valid star-case slot")
}
