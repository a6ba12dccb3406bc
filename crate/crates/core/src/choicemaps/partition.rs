//! Combining per-block choice maps over a partition of the universe.

use crate::choice::{ChoiceFunction, ChoiceRule, Guarantee};
use crate::error::{Error, Result};
use crate::universe::{ContractSet, ContractUniverse};

struct PartitionRule {
    children: Vec<(ContractSet, ChoiceFunction)>,
}

impl ChoiceRule for PartitionRule {
    fn choose(&self, offered: &ContractSet) -> Result<ContractSet> {
        let mut chosen = offered.universe().empty_set();
        for (block, child) in &self.children {
            let part = child.choose(&(offered & block))?;
            chosen = &chosen | &(&part & block);
        }
        Ok(chosen)
    }
}

/// `C(A) = ⋃ C_i(A ∩ X_i)` for a partition `X = ⋃ X_i`.
///
/// The combined map is revealing exactly when every child is, so its
/// guarantee is the weakest guarantee among the children.
pub fn combine_partition(
    universe: &ContractUniverse,
    children: Vec<(ContractSet, ChoiceFunction)>,
) -> Result<ChoiceFunction> {
    let mut covered = universe.empty_set();
    let mut overlap = universe.empty_set();
    for (block, child) in &children {
        if !block.universe().same_as(universe) || !child.universe().same_as(universe) {
            return Err(Error::UniverseMismatch);
        }
        overlap = &overlap | &(&covered & block);
        covered = &covered | block;
    }
    let gap = covered.complement();
    if !overlap.is_empty() || !gap.is_empty() {
        return Err(Error::NotAPartition { overlap: overlap.to_string(), gap: gap.to_string() });
    }
    let guarantee = children.iter().fold(Guarantee::Revealing, |g, (_, c)| g.meet(c.guarantee()));
    Ok(ChoiceFunction::new(universe, PartitionRule { children }, guarantee))
}
