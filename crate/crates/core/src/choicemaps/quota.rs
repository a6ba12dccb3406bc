//! Greedy quota choice maps.
//!
//! An agent lists its acceptable contracts `Y` in strict preference order and
//! sets a global quota `q` plus sub-quotas `q_n` on groups `Y_n`. Scanning `Y`
//! from the most preferred contract down, a contract is accepted when it is
//! offered, fewer than `q` contracts have been accepted so far, and every group
//! containing it still has room. With pairwise disjoint groups (inside `Y`) the
//! result is revealing; with overlapping groups it is still consistent.

use crate::choice::{ChoiceFunction, ChoiceRule, Guarantee};
use crate::error::{Error, Result};
use crate::universe::{ContractSet, ContractUniverse};

/// One sub-quota group `(Y_n, q_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotaGroup {
    pub members: ContractSet,
    pub quota: usize,
    /// Human-readable name used in error messages.
    pub name: Option<String>,
}

impl QuotaGroup {
    pub fn new(members: ContractSet, quota: usize) -> Self {
        Self { members, quota, name: None }
    }

    pub fn named(members: ContractSet, quota: usize, name: impl Into<String>) -> Self {
        Self { members, quota, name: Some(name.into()) }
    }

    fn describe(&self, position: usize) -> String {
        match &self.name {
            Some(name) => name.clone(),
            None => format!("group #{} {}", position + 1, self.members),
        }
    }
}

/// Preference list, global quota and sub-quota groups of one agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotaChoiceSpec {
    pub universe: ContractUniverse,
    /// Indices of the acceptable contracts, most preferred first.
    pub preference: Vec<usize>,
    pub global_quota: usize,
    pub groups: Vec<QuotaGroup>,
}

impl QuotaChoiceSpec {
    /// Spec with no groups and a non-binding global quota `|Y|`.
    pub fn new(universe: &ContractUniverse, preference: Vec<usize>) -> Self {
        let global_quota = preference.len();
        Self { universe: universe.clone(), preference, global_quota, groups: Vec::new() }
    }

    pub fn from_labels<I, S>(universe: &ContractUniverse, preference: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let preference =
            preference.into_iter().map(|label| universe.index_of(label.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(universe, preference))
    }

    pub fn with_quota(mut self, quota: usize) -> Self {
        self.global_quota = quota;
        self
    }

    pub fn with_group(mut self, members: ContractSet, quota: usize) -> Self {
        self.groups.push(QuotaGroup::new(members, quota));
        self
    }

    /// The acceptable set `Y`.
    pub fn acceptable(&self) -> ContractSet {
        let mut y = self.universe.empty_set();
        for &i in &self.preference {
            if i < self.universe.len() {
                y.insert(i);
            }
        }
        y
    }

    /// Checks indices, universes, and (unless `allow_overlap`) disjointness of
    /// the effective groups inside `Y`.
    pub fn validate(&self, allow_overlap: bool) -> Result<()> {
        let size = self.universe.len();
        let mut seen = vec![false; size];
        for &i in &self.preference {
            if i >= size {
                return Err(Error::IndexOutOfRange { index: i, size });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::DuplicatePreference(self.universe.label(i).to_string()));
            }
        }
        for group in &self.groups {
            if !group.members.universe().same_as(&self.universe) {
                return Err(Error::UniverseMismatch);
            }
        }
        if !allow_overlap {
            self.check_disjoint()?;
        }
        Ok(())
    }

    /// True when the effective groups are pairwise disjoint inside `Y`.
    pub fn has_disjoint_groups(&self) -> bool {
        self.check_disjoint().is_ok()
    }

    fn check_disjoint(&self) -> Result<()> {
        let normalized = self.normalized();
        for (i, first) in normalized.groups.iter().enumerate() {
            for (j, second) in normalized.groups.iter().enumerate().skip(i + 1) {
                let shared = &first.members & &second.members;
                if !shared.is_empty() {
                    return Err(Error::OverlappingGroups {
                        first: first.describe(i),
                        second: second.describe(j),
                        shared: shared.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Equivalent spec with every group intersected with `Y` and groups that
    /// can never bind removed (`q_n ≥ q`, `q_n ≥ |Y|` or `q_n ≥ |Y_n ∩ Y|`).
    pub fn normalized(&self) -> QuotaChoiceSpec {
        let y = self.acceptable();
        let groups = self
            .groups
            .iter()
            .filter_map(|group| {
                let members = group.members.intersection(&y).ok()?;
                let binding = group.quota < self.global_quota && group.quota < y.len() && group.quota < members.len();
                binding.then(|| QuotaGroup { members, quota: group.quota, name: group.name.clone() })
            })
            .collect();
        QuotaChoiceSpec {
            universe: self.universe.clone(),
            preference: self.preference.clone(),
            global_quota: self.global_quota,
            groups,
        }
    }

    /// The greedy recursion with every intermediate state `C_0(A) ⊆ C_1(A) ⊆ ⋯`.
    /// The last entry is `C(A)`. No validation is performed.
    pub fn choose_steps(&self, offered: &ContractSet) -> Vec<ContractSet> {
        let mut states = Vec::with_capacity(self.preference.len() + 1);
        let mut accepted = self.universe.empty_set();
        states.push(accepted.clone());
        let mut group_counts = vec![0usize; self.groups.len()];
        for &y in &self.preference {
            if self.admits(offered, y, accepted.len(), &group_counts) {
                accepted.insert(y);
                for (count, group) in group_counts.iter_mut().zip(&self.groups) {
                    if group.members.contains(y) {
                        *count += 1;
                    }
                }
            }
            states.push(accepted.clone());
        }
        states
    }

    fn admits(&self, offered: &ContractSet, y: usize, accepted: usize, group_counts: &[usize]) -> bool {
        offered.contains(y)
            && accepted < self.global_quota
            && self
                .groups
                .iter()
                .zip(group_counts)
                .all(|(group, &count)| !group.members.contains(y) || count < group.quota)
    }
}

/// Compiled evaluator: group membership is resolved per preference position.
struct QuotaRule {
    preference: Vec<usize>,
    memberships: Vec<Vec<usize>>,
    group_quotas: Vec<usize>,
    global_quota: usize,
}

impl QuotaRule {
    fn compile(spec: &QuotaChoiceSpec) -> Self {
        let memberships = spec
            .preference
            .iter()
            .map(|&y| spec.groups.iter().enumerate().filter(|(_, g)| g.members.contains(y)).map(|(n, _)| n).collect())
            .collect();
        Self {
            preference: spec.preference.clone(),
            memberships,
            group_quotas: spec.groups.iter().map(|g| g.quota).collect(),
            global_quota: spec.global_quota,
        }
    }
}

impl ChoiceRule for QuotaRule {
    fn choose(&self, offered: &ContractSet) -> Result<ContractSet> {
        let mut chosen = offered.universe().empty_set();
        let mut accepted = 0;
        let mut counts = vec![0usize; self.group_quotas.len()];
        for (&y, groups) in self.preference.iter().zip(&self.memberships) {
            if accepted >= self.global_quota {
                break;
            }
            if offered.contains(y) && groups.iter().all(|&n| counts[n] < self.group_quotas[n]) {
                chosen.insert(y);
                accepted += 1;
                for &n in groups {
                    counts[n] += 1;
                }
            }
        }
        Ok(chosen)
    }
}

/// Build the greedy quota choice function.
///
/// Overlapping groups are refused unless `allow_overlapping_groups` is set, in
/// which case the function is only guaranteed consistent.
pub fn build_quota_choice(spec: &QuotaChoiceSpec, allow_overlapping_groups: bool) -> Result<ChoiceFunction> {
    spec.validate(allow_overlapping_groups)?;
    let normalized = spec.normalized();
    let guarantee = if normalized.has_disjoint_groups() { Guarantee::Revealing } else { Guarantee::Consistent };
    Ok(ChoiceFunction::new(&spec.universe, QuotaRule::compile(&normalized), guarantee))
}

/// Evaluate the greedy recursion once, on the spec exactly as given.
pub fn quota_choose(
    spec: &QuotaChoiceSpec,
    offered: &ContractSet,
    allow_overlapping_groups: bool,
) -> Result<ContractSet> {
    spec.validate(allow_overlapping_groups)?;
    if !offered.universe().same_as(&spec.universe) {
        return Err(Error::UniverseMismatch);
    }
    Ok(spec.choose_steps(offered).pop().expect("at least the initial state"))
}
