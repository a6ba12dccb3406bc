//! Property classification and stability checks.

mod classify;
mod stability;

pub(crate) use classify::tabulate;
pub use classify::{
    classify, classify_sampled, Budget, Property, PropertyReport, Verdict, Witness, CLASSIFY_EXHAUSTIVE_CAP,
};
pub use stability::{
    enumerate_stable, find_blocker, is_individually_rational, is_stable, range_equals_fixed_points, verify_witnesses,
    Instability, StabilityMethod, StabilityVerdict, CONSISTENT_WITNESS_CAP, DEFINITIONAL_CAP, ENUMERATE_REVEALING_CAP,
    ENUMERATE_WITNESS_CAP,
};
