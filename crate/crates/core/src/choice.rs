//! The abstract choice-function interface.
//!
//! A choice map `C` selects `C(A) ⊆ A` from every offered set `A`. Concrete
//! rules implement [`ChoiceRule`]; [`ChoiceFunction`] wraps a rule, pins it to
//! a universe and checks the inclusion on every evaluation.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::universe::{ContractSet, ContractUniverse};

/// A deterministic selection rule over one universe.
///
/// Rules may fail when they delegate to other choice functions; plain closures
/// are wrapped through [`ChoiceFunction::from_fn`].
pub trait ChoiceRule: Send + Sync {
    fn choose(&self, offered: &ContractSet) -> Result<ContractSet>;
}

struct FnRule<F>(F);

impl<F> ChoiceRule for FnRule<F>
where
    F: Fn(&ContractSet) -> ContractSet + Send + Sync,
{
    fn choose(&self, offered: &ContractSet) -> Result<ContractSet> {
        Ok((self.0)(offered))
    }
}

/// What the construction of a choice function guarantees about it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Guarantee {
    /// Revealing (and therefore consistent and persistent).
    Revealing,
    /// Consistent, not guaranteed revealing.
    Consistent,
    /// Nothing is known without classification.
    Unknown,
}

impl Guarantee {
    pub fn is_revealing(self) -> bool {
        self == Guarantee::Revealing
    }

    pub fn is_consistent(self) -> bool {
        matches!(self, Guarantee::Revealing | Guarantee::Consistent)
    }

    /// Weakest of the two guarantees.
    pub fn meet(self, other: Guarantee) -> Guarantee {
        use Guarantee::*;
        match (self, other) {
            (Revealing, Revealing) => Revealing,
            (Unknown, _) | (_, Unknown) => Unknown,
            _ => Consistent,
        }
    }
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Guarantee::Revealing => "revealing",
            Guarantee::Consistent => "consistent, not guaranteed revealing",
            Guarantee::Unknown => "unclassified",
        })
    }
}

/// A choice map `A ↦ C(A)` over a fixed universe.
#[derive(Clone)]
pub struct ChoiceFunction {
    universe: ContractUniverse,
    rule: Arc<dyn ChoiceRule>,
    guarantee: Guarantee,
}

impl ChoiceFunction {
    pub fn new<R>(universe: &ContractUniverse, rule: R, guarantee: Guarantee) -> Self
    where
        R: ChoiceRule + 'static,
    {
        Self { universe: universe.clone(), rule: Arc::new(rule), guarantee }
    }

    /// Wrap an arbitrary closure; nothing is assumed about its properties.
    pub fn from_fn<F>(universe: &ContractUniverse, f: F) -> Self
    where
        F: Fn(&ContractSet) -> ContractSet + Send + Sync + 'static,
    {
        Self::new(universe, FnRule(f), Guarantee::Unknown)
    }

    /// `C(A) = A`.
    pub fn identity(universe: &ContractUniverse) -> Self {
        Self::new(universe, FnRule(|a: &ContractSet| a.clone()), Guarantee::Revealing)
    }

    /// `C(A) = A ∩ Y`: everything acceptable is accepted.
    pub fn acceptable(acceptable: &ContractSet) -> Self {
        let y = acceptable.clone();
        Self::new(acceptable.universe(), FnRule(move |a: &ContractSet| a & &y), Guarantee::Revealing)
    }

    pub fn universe(&self) -> &ContractUniverse {
        &self.universe
    }

    pub fn guarantee(&self) -> Guarantee {
        self.guarantee
    }

    /// Replace the recorded guarantee, e.g. after an exhaustive classification.
    pub fn with_guarantee(mut self, guarantee: Guarantee) -> Self {
        self.guarantee = guarantee;
        self
    }

    /// Evaluate `C(offered)`, failing if the rule returns something outside
    /// the offered set or the set belongs to another universe.
    pub fn choose(&self, offered: &ContractSet) -> Result<ContractSet> {
        if !offered.universe().same_as(&self.universe) {
            return Err(Error::UniverseMismatch);
        }
        let chosen = self.rule.choose(offered)?;
        match chosen.is_subset(offered) {
            Ok(true) => Ok(chosen),
            _ => Err(Error::NotAChoice { offered: offered.to_string(), chosen: chosen.to_string() }),
        }
    }

    /// `R(A) = A ∖ C(A)`.
    pub fn reject(&self, offered: &ContractSet) -> Result<ContractSet> {
        let chosen = self.choose(offered)?;
        Ok(offered - &chosen)
    }

    pub fn rejection_view(&self) -> RejectionView {
        RejectionView { base: self.clone() }
    }
}

impl fmt::Debug for ChoiceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChoiceFunction")
            .field("contracts", &self.universe.len())
            .field("guarantee", &self.guarantee)
            .finish()
    }
}

/// The rejection map `R(A) = A ∖ C(A)` of a choice function.
#[derive(Clone, Debug)]
pub struct RejectionView {
    base: ChoiceFunction,
}

impl RejectionView {
    pub fn base(&self) -> &ChoiceFunction {
        &self.base
    }

    pub fn evaluate(&self, offered: &ContractSet) -> Result<ContractSet> {
        self.base.reject(offered)
    }
}

/// `R(A) = A ∖ C(A)`.
pub fn rejection(choice: &ChoiceFunction, offered: &ContractSet) -> Result<ContractSet> {
    choice.reject(offered)
}
