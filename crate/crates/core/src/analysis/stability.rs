//! Stability verification and enumeration of stable sets.
//!
//! A set `S` is stable when there are witnesses `S_W`, `S_F` with
//! `S_W ∪ S_F = X` such that `C_W(A) = S` for every `S ⊆ A ⊆ S_W` and
//! `C_F(A) = S` for every `S ⊆ A ⊆ S_F`. Three checks are offered:
//!
//! - `Definitional` searches the witnesses directly and works for any maps.
//! - `ConsistentWitness` needs consistent maps and only checks `C_W(S_W) = S = C_F(S_F)`
//!   with `S_W ∩ S_F = S`.
//! - `RevealingFast` needs revealing maps and checks individual rationality plus
//!   the absence of a blocking contract.

use std::fmt;

use super::classify::{classify, Budget, CLASSIFY_EXHAUSTIVE_CAP};
use crate::choice::ChoiceFunction;
use crate::error::{Error, Result};
use crate::universe::ContractSet;
use crate::Side;

/// Largest `|X ∖ S|` for the definitional witness search.
pub const DEFINITIONAL_CAP: usize = 15;
/// Largest `|X ∖ S|` for the consistent-witness search.
pub const CONSISTENT_WITNESS_CAP: usize = 20;
/// Largest universe swept by [`enumerate_stable`] with the revealing check.
pub const ENUMERATE_REVEALING_CAP: usize = 20;
/// Largest universe swept by [`enumerate_stable`] with the witness searches.
pub const ENUMERATE_WITNESS_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StabilityMethod {
    Definitional,
    ConsistentWitness,
    RevealingFast,
}

impl StabilityMethod {
    pub fn name(self) -> &'static str {
        match self {
            StabilityMethod::Definitional => "definitional",
            StabilityMethod::ConsistentWitness => "consistent-witness",
            StabilityMethod::RevealingFast => "revealing-fast",
        }
    }
}

impl fmt::Display for StabilityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a set is not stable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instability {
    /// `C(S) ≠ S` for the given side.
    NotIndividuallyRational(Side),
    /// Contract `x ∉ S` with `C_W(S ∪ {x}) ≠ S` and `C_F(S ∪ {x}) ≠ S`.
    Blocked(usize),
    /// No pair of witnesses covers the universe.
    NoWitnessCover,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilityVerdict {
    Stable { method: StabilityMethod, worker_witness: ContractSet, firm_witness: ContractSet },
    Unstable { method: StabilityMethod, reason: Instability },
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityVerdict::Stable { .. })
    }

    pub fn method(&self) -> StabilityMethod {
        match self {
            StabilityVerdict::Stable { method, .. } | StabilityVerdict::Unstable { method, .. } => *method,
        }
    }

    pub fn witnesses(&self) -> Option<(&ContractSet, &ContractSet)> {
        match self {
            StabilityVerdict::Stable { worker_witness, firm_witness, .. } => Some((worker_witness, firm_witness)),
            StabilityVerdict::Unstable { .. } => None,
        }
    }

    pub fn reason(&self) -> Option<&Instability> {
        match self {
            StabilityVerdict::Unstable { reason, .. } => Some(reason),
            StabilityVerdict::Stable { .. } => None,
        }
    }
}

fn same_universe(cw: &ChoiceFunction, cf: &ChoiceFunction, s: &ContractSet) -> Result<()> {
    if cw.universe().same_as(cf.universe()) && s.universe().same_as(cw.universe()) {
        Ok(())
    } else {
        Err(Error::UniverseMismatch)
    }
}

/// `C_W(S) = S = C_F(S)`.
pub fn is_individually_rational(cw: &ChoiceFunction, cf: &ChoiceFunction, s: &ContractSet) -> Result<bool> {
    same_universe(cw, cf, s)?;
    Ok(cw.choose(s)? == *s && cf.choose(s)? == *s)
}

/// First contract `x ∉ S`, in universe order, that both sides would take up:
/// `C_W(S ∪ {x}) ≠ S` and `C_F(S ∪ {x}) ≠ S`.
pub fn find_blocker(cw: &ChoiceFunction, cf: &ChoiceFunction, s: &ContractSet) -> Result<Option<usize>> {
    same_universe(cw, cf, s)?;
    for x in s.complement().iter() {
        let extended = s.with(x);
        if cw.choose(&extended)? != *s && cf.choose(&extended)? != *s {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Check the witness conditions literally: `S ⊆ S_W`, `S ⊆ S_F`,
/// `S_W ∪ S_F = X`, and every set between `S` and a witness chooses `S`.
/// Intended for replaying verdicts; cost is `2^|S_W ∖ S| + 2^|S_F ∖ S|`.
pub fn verify_witnesses(
    cw: &ChoiceFunction,
    cf: &ChoiceFunction,
    s: &ContractSet,
    worker_witness: &ContractSet,
    firm_witness: &ContractSet,
) -> Result<bool> {
    same_universe(cw, cf, s)?;
    if !s.is_subset(worker_witness)? || !s.is_subset(firm_witness)? {
        return Ok(false);
    }
    if !worker_witness.union(firm_witness)?.complement().is_empty() {
        return Ok(false);
    }
    for (choice, witness) in [(cw, worker_witness), (cf, firm_witness)] {
        for extra in (witness - s).subsets() {
            if choice.choose(&(s | &extra))? != *s {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Decide whether `S` is stable with the given method.
///
/// The witness-based methods require consistent maps and the fast check
/// requires revealing maps; a map whose construction does not guarantee the
/// property is classified exhaustively (universes of at most 12 contracts),
/// otherwise the call fails with [`Error::Precondition`].
pub fn is_stable(
    cw: &ChoiceFunction,
    cf: &ChoiceFunction,
    s: &ContractSet,
    method: StabilityMethod,
) -> Result<StabilityVerdict> {
    same_universe(cw, cf, s)?;
    check_preconditions(cw, cf, method)?;
    stability_unchecked(cw, cf, s, method)
}

fn stability_unchecked(
    cw: &ChoiceFunction,
    cf: &ChoiceFunction,
    s: &ContractSet,
    method: StabilityMethod,
) -> Result<StabilityVerdict> {
    match method {
        StabilityMethod::Definitional => definitional(cw, cf, s),
        StabilityMethod::ConsistentWitness => consistent_witness(cw, cf, s),
        StabilityMethod::RevealingFast => revealing_fast(cw, cf, s),
    }
}

fn check_preconditions(cw: &ChoiceFunction, cf: &ChoiceFunction, method: StabilityMethod) -> Result<()> {
    let property = match method {
        StabilityMethod::Definitional => return Ok(()),
        StabilityMethod::ConsistentWitness => "consistent",
        StabilityMethod::RevealingFast => "revealing",
    };
    for (side, c) in [(Side::Worker, cw), (Side::Firm, cf)] {
        let known = match method {
            StabilityMethod::ConsistentWitness => c.guarantee().is_consistent(),
            _ => c.guarantee().is_revealing(),
        };
        if known {
            continue;
        }
        let holds = c.universe().len() <= CLASSIFY_EXHAUSTIVE_CAP && {
            let report = classify(c, Budget::Exhaustive)?;
            match method {
                StabilityMethod::ConsistentWitness => report.is_consistent.holds(),
                _ => report.is_revealing.holds(),
            }
        };
        if !holds {
            return Err(Error::Precondition { method: method.name(), property, side: side.name() });
        }
    }
    Ok(())
}

fn individual_rationality(cw: &ChoiceFunction, cf: &ChoiceFunction, s: &ContractSet) -> Result<Option<Side>> {
    if cw.choose(s)? != *s {
        return Ok(Some(Side::Worker));
    }
    if cf.choose(s)? != *s {
        return Ok(Some(Side::Firm));
    }
    Ok(None)
}

fn outside_indices(s: &ContractSet, cap: usize, operation: &'static str) -> Result<Vec<usize>> {
    let rest: Vec<usize> = s.complement().iter().collect();
    if rest.len() > cap {
        return Err(Error::CapExceeded { operation, size: rest.len(), cap, hint: " contracts outside S" });
    }
    Ok(rest)
}

fn extend(s: &ContractSet, rest: &[usize], mask: u64) -> ContractSet {
    let mut set = s.clone();
    for (bit, &i) in rest.iter().enumerate() {
        if mask >> bit & 1 == 1 {
            set.insert(i);
        }
    }
    set
}

/// Witness search for the definition itself. `good[p]` records that every
/// set between `S` and `S ∪ p` chooses `S`; it is computed bottom-up over the
/// contracts outside `S`. Since the property passes to subsets, the firm
/// witness can always be taken as `S` plus whatever the worker witness leaves
/// uncovered.
fn definitional(cw: &ChoiceFunction, cf: &ChoiceFunction, s: &ContractSet) -> Result<StabilityVerdict> {
    let method = StabilityMethod::Definitional;
    let rest = outside_indices(s, DEFINITIONAL_CAP, "definitional stability check")?;
    if let Some(side) = individual_rationality(cw, cf, s)? {
        return Ok(StabilityVerdict::Unstable { method, reason: Instability::NotIndividuallyRational(side) });
    }
    let full = crate::masks::full_mask(rest.len());
    let downward_good = |c: &ChoiceFunction| -> Result<Vec<bool>> {
        let mut good = vec![false; 1usize << rest.len()];
        for p in 0..=full {
            let below = (0..rest.len()).filter(|bit| p >> bit & 1 == 1).all(|bit| good[(p & !(1 << bit)) as usize]);
            good[p as usize] = below && c.choose(&extend(s, &rest, p))? == *s;
        }
        Ok(good)
    };
    let good_worker = downward_good(cw)?;
    let good_firm = downward_good(cf)?;
    for p in 0..=full {
        if good_worker[p as usize] && good_firm[(full & !p) as usize] {
            return Ok(StabilityVerdict::Stable {
                method,
                worker_witness: extend(s, &rest, p),
                firm_witness: extend(s, &rest, full & !p),
            });
        }
    }
    Ok(StabilityVerdict::Unstable { method, reason: Instability::NoWitnessCover })
}

/// For consistent maps it suffices to find `S_W ⊇ S` with `C_W(S_W) = S` and
/// `C_F(S ∪ (X ∖ S_W)) = S`.
fn consistent_witness(cw: &ChoiceFunction, cf: &ChoiceFunction, s: &ContractSet) -> Result<StabilityVerdict> {
    let method = StabilityMethod::ConsistentWitness;
    let rest = outside_indices(s, CONSISTENT_WITNESS_CAP, "consistent-witness stability check")?;
    if let Some(side) = individual_rationality(cw, cf, s)? {
        return Ok(StabilityVerdict::Unstable { method, reason: Instability::NotIndividuallyRational(side) });
    }
    let full = crate::masks::full_mask(rest.len());
    for p in 0..=full {
        let worker_witness = extend(s, &rest, p);
        if cw.choose(&worker_witness)? != *s {
            continue;
        }
        let firm_witness = extend(s, &rest, full & !p);
        if cf.choose(&firm_witness)? == *s {
            return Ok(StabilityVerdict::Stable { method, worker_witness, firm_witness });
        }
    }
    Ok(StabilityVerdict::Unstable { method, reason: Instability::NoWitnessCover })
}

/// Individually rational and unblocked. Witnesses are the contracts each
/// side would not add: `S_W = {x : C_W(S ∪ {x}) = S}`, likewise `S_F`.
fn revealing_fast(cw: &ChoiceFunction, cf: &ChoiceFunction, s: &ContractSet) -> Result<StabilityVerdict> {
    let method = StabilityMethod::RevealingFast;
    if let Some(side) = individual_rationality(cw, cf, s)? {
        return Ok(StabilityVerdict::Unstable { method, reason: Instability::NotIndividuallyRational(side) });
    }
    let mut worker_witness = s.clone();
    let mut firm_witness = s.clone();
    for x in s.complement().iter() {
        let extended = s.with(x);
        let worker_declines = cw.choose(&extended)? == *s;
        let firm_declines = cf.choose(&extended)? == *s;
        if !worker_declines && !firm_declines {
            return Ok(StabilityVerdict::Unstable { method, reason: Instability::Blocked(x) });
        }
        if worker_declines {
            worker_witness.insert(x);
        }
        if firm_declines {
            firm_witness.insert(x);
        }
    }
    Ok(StabilityVerdict::Stable { method, worker_witness, firm_witness })
}

/// All stable sets, in canonical (mask) order.
pub fn enumerate_stable(cw: &ChoiceFunction, cf: &ChoiceFunction, method: StabilityMethod) -> Result<Vec<ContractSet>> {
    if !cw.universe().same_as(cf.universe()) {
        return Err(Error::UniverseMismatch);
    }
    let universe = cw.universe();
    let cap = match method {
        StabilityMethod::RevealingFast => ENUMERATE_REVEALING_CAP,
        _ => ENUMERATE_WITNESS_CAP,
    };
    if universe.len() > cap {
        return Err(Error::CapExceeded { operation: "stable-set enumeration", size: universe.len(), cap, hint: "" });
    }
    check_preconditions(cw, cf, method)?;
    let mut stable = Vec::new();
    for s in universe.subsets() {
        // Every method rejects sets that are not individually rational.
        if individual_rationality(cw, cf, &s)?.is_some() {
            continue;
        }
        if stability_unchecked(cw, cf, &s, method)?.is_stable() {
            stable.push(s);
        }
    }
    Ok(stable)
}

/// Whether the range of `C` equals its set of fixed points `{A : C(A) = A}`.
pub fn range_equals_fixed_points(c: &ChoiceFunction) -> Result<bool> {
    let table = crate::analysis::tabulate(c, "range/fixed-point comparison", CLASSIFY_EXHAUSTIVE_CAP)?;
    let mut in_range = vec![false; table.len()];
    for &chosen in &table {
        in_range[chosen as usize] = true;
    }
    Ok(table.iter().enumerate().all(|(a, &chosen)| in_range[a] == (chosen == a as u64)))
}
