use thiserror::Error;

/// Errors raised by universe construction, set algebra, choice-map construction,
/// and the analysis and solver routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate label {0}")]
    DuplicateLabel(String),

    #[error("unknown contract label {0}")]
    UnknownLabel(String),

    #[error("contract index {index} out of range for a universe of {size} contracts")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("sets belong to different contract universes")]
    UniverseMismatch,

    #[error("choice map returned {chosen} for offered set {offered}, which is not a subset")]
    NotAChoice { offered: String, chosen: String },

    #[error("preference list contains {0} more than once")]
    DuplicatePreference(String),

    #[error(
        "quota groups {first} and {second} share {shared} inside the acceptable set; \
         overlapping groups can break revealed preference (with a>b>c, groups {{a,b}},{{b,c}}, \
         q=2, q1=q2=1: C({{b,c}})={{b}} but C({{a,b,c}})={{a,c}}); pass the overlap flag to allow them"
    )]
    OverlappingGroups { first: String, second: String, shared: String },

    #[error("blocks do not partition the universe (overlap: {overlap}; uncovered: {gap})")]
    NotAPartition { overlap: String, gap: String },

    #[error("explicit choice tables are limited to {cap} contracts, got {size}")]
    TableTooLarge { size: usize, cap: usize },

    #[error("choice table has no entry for {0}")]
    TableMissingEntry(String),

    #[error("choice table maps {offered} to {chosen}, which is not a subset")]
    TableNotSubset { offered: String, chosen: String },

    #[error("{operation} is limited to {cap} contracts, got {size}{hint}")]
    CapExceeded { operation: &'static str, size: usize, cap: usize, hint: &'static str },

    #[error("{method} stability check requires {property} choice maps; the {side} map is not known to be {property}")]
    Precondition { method: &'static str, property: &'static str, side: &'static str },

    #[error("fixed-point iteration did not settle within {steps} steps; input is not a monotone choice map")]
    NonTermination { steps: usize },

    #[error("{0}")]
    Schedule(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
