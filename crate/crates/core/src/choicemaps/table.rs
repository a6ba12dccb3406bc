//! Choice maps given by an explicit table over every subset of a small universe.

use crate::choice::{ChoiceFunction, ChoiceRule, Guarantee};
use crate::error::{Error, Result};
use crate::universe::{ContractSet, ContractUniverse};

/// Largest universe accepted for explicit tables (1024 entries).
pub const TABLE_CAP: usize = 10;

/// A lookup table `A ↦ C(A)`, indexed by subset mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableChoiceSpec {
    universe: ContractUniverse,
    entries: Vec<Option<ContractSet>>,
}

impl TableChoiceSpec {
    pub fn new(universe: &ContractUniverse) -> Result<Self> {
        if universe.len() > TABLE_CAP {
            return Err(Error::TableTooLarge { size: universe.len(), cap: TABLE_CAP });
        }
        Ok(Self { universe: universe.clone(), entries: vec![None; 1 << universe.len()] })
    }

    /// Table with every entry computed by `f`.
    pub fn from_fn<F>(universe: &ContractUniverse, f: F) -> Result<Self>
    where
        F: Fn(&ContractSet) -> ContractSet,
    {
        let mut table = Self::new(universe)?;
        for offered in universe.subsets() {
            let chosen = f(&offered);
            table.insert(&offered, chosen)?;
        }
        Ok(table)
    }

    pub fn insert(&mut self, offered: &ContractSet, chosen: ContractSet) -> Result<()> {
        if !offered.universe().same_as(&self.universe) || !chosen.universe().same_as(&self.universe) {
            return Err(Error::UniverseMismatch);
        }
        let mask = offered.to_mask().expect("table universes are small") as usize;
        self.entries[mask] = Some(chosen);
        Ok(())
    }

    pub fn universe(&self) -> &ContractUniverse {
        &self.universe
    }

    pub fn get(&self, offered: &ContractSet) -> Option<&ContractSet> {
        let mask = offered.to_mask()? as usize;
        self.entries.get(mask)?.as_ref()
    }

    /// `(A, C(A))` for every filled entry, in mask order.
    pub fn entries(&self) -> impl Iterator<Item = (ContractSet, &ContractSet)> + '_ {
        self.entries.iter().enumerate().filter_map(move |(mask, chosen)| {
            chosen.as_ref().map(|c| (ContractSet::from_mask(&self.universe, mask as u64), c))
        })
    }
}

struct TableRule {
    entries: Vec<ContractSet>,
}

impl ChoiceRule for TableRule {
    fn choose(&self, offered: &ContractSet) -> Result<ContractSet> {
        let mask = offered.to_mask().expect("table universes are small") as usize;
        Ok(self.entries[mask].clone())
    }
}

/// Build a lookup choice function; the table must be total and satisfy `C(A) ⊆ A`.
pub fn build_table_choice(spec: &TableChoiceSpec) -> Result<ChoiceFunction> {
    let mut entries = Vec::with_capacity(spec.entries.len());
    for (mask, entry) in spec.entries.iter().enumerate() {
        let offered = ContractSet::from_mask(&spec.universe, mask as u64);
        let chosen = entry.clone().ok_or_else(|| Error::TableMissingEntry(offered.to_string()))?;
        if !chosen.subset_of(&offered) {
            return Err(Error::TableNotSubset { offered: offered.to_string(), chosen: chosen.to_string() });
        }
        entries.push(chosen);
    }
    Ok(ChoiceFunction::new(&spec.universe, TableRule { entries }, Guarantee::Unknown))
}
