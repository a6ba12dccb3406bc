//! Stable sets of contracts for two-sided markets.
//!
//! Workers and firms each evaluate offered sets of contracts through a choice
//! map. When both maps are revealing, the monotone map
//! `f(A, B) = (X ∖ R_F(B), X ∖ R_W(A))` has fixed points whose intersections
//! `A ∩ B` are exactly the stable sets; iterating `f` from the top or the
//! bottom of the lattice yields the worker-optimal and firm-optimal stable sets.
//!
//! Modules:
//! - [`universe`], [`choice`]: contract sets and the choice-function interface.
//! - [`choicemaps`]: greedy quota maps, the partition combinator, lookup tables.
//! - [`analysis`]: property classifiers and stability verifiers.
//! - [`solver`]: the fixed-point iteration.
//! - [`schedule`]: worker/firm/day markets and the working-hours encoding.

pub mod analysis;
pub mod choice;
pub mod choicemaps;
pub mod error;
pub mod masks;
pub mod schedule;
pub mod solver;
pub mod universe;

pub use choice::{rejection, ChoiceFunction, ChoiceRule, Guarantee, RejectionView};
pub use error::{Error, Result};
pub use universe::{make_universe, ContractSet, ContractUniverse};

/// One side of the market.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Side {
    #[default]
    Worker,
    Firm,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Worker => "worker",
            Side::Firm => "firm",
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Worker => Side::Firm,
            Side::Firm => Side::Worker,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
