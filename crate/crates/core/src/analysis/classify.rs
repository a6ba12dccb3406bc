//! Classification of choice maps: revealing, consistent, persistent,
//! idempotent, and monotonicity of the rejection map.
//!
//! Exhaustive classification tabulates `C` over every subset (as bit masks)
//! and checks each property independently. Sampled classification draws random
//! pairs and exhausts random restrictions to at most five contracts; it can
//! only falsify, so unfalsified properties are reported as "true (sampled)".

use std::fmt;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};

use crate::choice::{ChoiceFunction, Guarantee};
use crate::error::{Error, Result};
use crate::masks::{full_mask, submasks};
use crate::universe::ContractSet;

/// Largest universe classified exhaustively (4^12 pairs).
pub const CLASSIFY_EXHAUSTIVE_CAP: usize = 12;

const SAMPLE_SEED: u64 = 0x005e_edc4_01ce;
const RESTRICTIONS: usize = 8;
const RESTRICTION_SIZE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    Exhaustive,
    /// Random pairs plus exhaustive sweeps of a few random small restrictions.
    Sampled(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    ChoiceMap,
    Revealing,
    Consistent,
    Persistent,
    Idempotent,
    RejectionMonotone,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::ChoiceMap,
        Property::Revealing,
        Property::Consistent,
        Property::Persistent,
        Property::Idempotent,
        Property::RejectionMonotone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::ChoiceMap => "choice map",
            Property::Revealing => "revealing",
            Property::Consistent => "consistent",
            Property::Persistent => "persistent",
            Property::Idempotent => "idempotent",
            Property::RejectionMonotone => "rejection monotone",
        }
    }

    /// Re-evaluate `c` on the witness; `true` when the witness still falsifies
    /// the property.
    pub fn replay(self, c: &ChoiceFunction, witness: &Witness) -> Result<bool> {
        match (self, witness) {
            (Property::ChoiceMap, Witness::Set(a)) => Ok(matches!(c.choose(a), Err(Error::NotAChoice { .. }))),
            (Property::Idempotent, Witness::Set(a)) => {
                let ca = c.choose(a)?;
                Ok(c.choose(&ca)? != ca)
            }
            (Property::Revealing, Witness::Pair(a, b)) => {
                let ca = c.choose(a)?;
                Ok(ca.subset_of(b) && !(a & &c.choose(b)?).subset_of(&ca))
            }
            (Property::Consistent, Witness::Pair(a, b)) => {
                let ca = c.choose(a)?;
                Ok(ca.subset_of(b) && b.subset_of(a) && c.choose(b)? != ca)
            }
            (Property::Persistent, Witness::Pair(a, b)) => {
                Ok(a.subset_of(b) && !(a & &c.choose(b)?).subset_of(&c.choose(a)?))
            }
            (Property::RejectionMonotone, Witness::Pair(a, b)) => {
                Ok(a.subset_of(b) && !c.reject(a)?.subset_of(&c.reject(b)?))
            }
            _ => Ok(false),
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Concrete counterexample to a property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Set(ContractSet),
    Pair(ContractSet, ContractSet),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Set(a) => write!(f, "A = {a}"),
            Witness::Pair(a, b) => write!(f, "A = {a}, B = {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// No counterexample found by sampling.
    HoldsSampled,
    Fails(Witness),
    NotEvaluated,
}

impl Verdict {
    /// True for both proven and sampled verdicts.
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds | Verdict::HoldsSampled)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails(w) => Some(w),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("true"),
            Verdict::HoldsSampled => f.write_str("true (sampled)"),
            Verdict::Fails(w) => write!(f, "false ({w})"),
            Verdict::NotEvaluated => f.write_str("not evaluated"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub is_choice_map: Verdict,
    pub is_revealing: Verdict,
    pub is_consistent: Verdict,
    pub is_persistent: Verdict,
    pub is_idempotent: Verdict,
    pub rejection_monotone: Verdict,
}

impl PropertyReport {
    fn not_evaluated() -> Self {
        Self {
            is_choice_map: Verdict::NotEvaluated,
            is_revealing: Verdict::NotEvaluated,
            is_consistent: Verdict::NotEvaluated,
            is_persistent: Verdict::NotEvaluated,
            is_idempotent: Verdict::NotEvaluated,
            rejection_monotone: Verdict::NotEvaluated,
        }
    }

    pub fn verdict(&self, property: Property) -> &Verdict {
        match property {
            Property::ChoiceMap => &self.is_choice_map,
            Property::Revealing => &self.is_revealing,
            Property::Consistent => &self.is_consistent,
            Property::Persistent => &self.is_persistent,
            Property::Idempotent => &self.is_idempotent,
            Property::RejectionMonotone => &self.rejection_monotone,
        }
    }

    fn verdict_mut(&mut self, property: Property) -> &mut Verdict {
        match property {
            Property::ChoiceMap => &mut self.is_choice_map,
            Property::Revealing => &mut self.is_revealing,
            Property::Consistent => &mut self.is_consistent,
            Property::Persistent => &mut self.is_persistent,
            Property::Idempotent => &mut self.is_idempotent,
            Property::RejectionMonotone => &mut self.rejection_monotone,
        }
    }

    /// Strongest guarantee established without sampling.
    pub fn proven_guarantee(&self) -> Guarantee {
        if self.is_revealing == Verdict::Holds {
            Guarantee::Revealing
        } else if self.is_consistent == Verdict::Holds {
            Guarantee::Consistent
        } else {
            Guarantee::Unknown
        }
    }

    /// Whether the verdicts respect the known implications between the
    /// properties: revealing = consistent ∧ persistent, persistent = monotone
    /// rejection, and consistent or persistent implies idempotent.
    pub fn is_coherent(&self) -> bool {
        let evaluated = Property::ALL[1..].iter().all(|&p| *self.verdict(p) != Verdict::NotEvaluated);
        if !evaluated {
            return true;
        }
        let r = self.is_revealing.holds();
        let c = self.is_consistent.holds();
        let p = self.is_persistent.holds();
        let i = self.is_idempotent.holds();
        let m = self.rejection_monotone.holds();
        r == (c && p) && p == m && (!(c || p) || i)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for property in Property::ALL {
            writeln!(f, "{:<19} {}", format!("{}:", property.name()), self.verdict(property))?;
        }
        Ok(())
    }
}

/// Classify a choice function.
pub fn classify(c: &ChoiceFunction, budget: Budget) -> Result<PropertyReport> {
    match budget {
        Budget::Exhaustive => classify_exhaustive(c),
        Budget::Sampled(samples) => classify_sampled(c, samples, SAMPLE_SEED),
    }
}

/// Sampled classification with an explicit random seed.
pub fn classify_sampled(c: &ChoiceFunction, samples: usize, seed: u64) -> Result<PropertyReport> {
    let universe = c.universe();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = PropertyReport::not_evaluated();

    // Exhaustive sweeps over random small restrictions come first; their
    // witnesses are the smallest ones we can offer.
    let mut indices: Vec<usize> = (0..universe.len()).collect();
    for _ in 0..RESTRICTIONS {
        indices.shuffle(&mut rng);
        let take = rng.random_range(0..=RESTRICTION_SIZE.min(indices.len()));
        let mut local: Vec<usize> = indices[..take].to_vec();
        local.sort_unstable();
        let to_set = |mask: u64| {
            ContractSet::from_indices(
                universe,
                local.iter().enumerate().filter(|(bit, _)| mask >> bit & 1 == 1).map(|(_, &i)| i),
            )
            .expect("indices come from the universe")
        };
        let table = match tabulate_with(c, 1u64 << take, to_set, |set| {
            local.iter().enumerate().filter(|(_, &i)| set.contains(i)).fold(0u64, |m, (bit, _)| m | 1 << bit)
        })? {
            Ok(table) => table,
            Err(bad) => return Ok(not_a_choice(to_set(bad))),
        };
        let sweep = Sweep { table: &table, full: full_mask(take) };
        for property in &Property::ALL[1..] {
            if report.verdict(*property).fails() {
                continue;
            }
            if let Some(witness) = sweep.first_failure(*property) {
                *report.verdict_mut(*property) = Verdict::Fails(match witness {
                    (a, None) => Witness::Set(to_set(a)),
                    (a, Some(b)) => Witness::Pair(to_set(a), to_set(b)),
                });
            }
        }
    }

    for _ in 0..samples {
        let random_set = |rng: &mut StdRng| {
            ContractSet::from_indices(universe, (0..universe.len()).filter(|_| rng.random_bool(0.5)))
                .expect("indices come from the universe")
        };
        let a = random_set(&mut rng);
        let b = random_set(&mut rng);
        let ca = match c.choose(&a) {
            Err(Error::NotAChoice { .. }) => return Ok(not_a_choice(a)),
            other => other?,
        };
        let record = |report: &mut PropertyReport, property: Property, witness: Witness| {
            let verdict = report.verdict_mut(property);
            if !verdict.fails() {
                *verdict = Verdict::Fails(witness);
            }
        };
        let superset = &b | &ca;
        if !(&a & &c.choose(&superset)?).subset_of(&ca) {
            record(&mut report, Property::Revealing, Witness::Pair(a.clone(), superset));
        }
        let between = &ca | &(&a & &b);
        if c.choose(&between)? != ca {
            record(&mut report, Property::Consistent, Witness::Pair(a.clone(), between));
        }
        let inner = &a & &b;
        let c_inner = c.choose(&inner)?;
        let cb = c.choose(&b)?;
        if !(&inner & &cb).subset_of(&c_inner) {
            record(&mut report, Property::Persistent, Witness::Pair(inner.clone(), b.clone()));
        }
        if !(&inner - &c_inner).subset_of(&(&b - &cb)) {
            record(&mut report, Property::RejectionMonotone, Witness::Pair(inner, b.clone()));
        }
        if c.choose(&ca)? != ca {
            record(&mut report, Property::Idempotent, Witness::Set(a));
        }
    }

    report.is_choice_map = Verdict::HoldsSampled;
    for property in &Property::ALL[1..] {
        let verdict = report.verdict_mut(*property);
        if !verdict.fails() {
            *verdict = Verdict::HoldsSampled;
        }
    }
    reconcile(c, &mut report)?;
    Ok(report)
}

fn not_a_choice(offered: ContractSet) -> PropertyReport {
    PropertyReport { is_choice_map: Verdict::Fails(Witness::Set(offered)), ..PropertyReport::not_evaluated() }
}

/// Propagate sampled counterexamples along the implications between the
/// properties, deriving a replayable witness for each implied failure.
fn reconcile(c: &ChoiceFunction, report: &mut PropertyReport) -> Result<()> {
    if let Some(Witness::Set(a)) = report.is_idempotent.witness().cloned() {
        let ca = c.choose(&a)?;
        if !report.is_consistent.fails() {
            report.is_consistent = Verdict::Fails(Witness::Pair(a.clone(), ca.clone()));
        }
        if !report.is_persistent.fails() {
            report.is_persistent = Verdict::Fails(Witness::Pair(ca, a));
        }
    }
    match (report.is_persistent.witness().cloned(), report.rejection_monotone.witness().cloned()) {
        (Some(w), None) => report.rejection_monotone = Verdict::Fails(w),
        (None, Some(w)) => report.is_persistent = Verdict::Fails(w),
        _ => {}
    }
    if !report.is_revealing.fails() {
        if let Some(w) = report.is_persistent.witness().cloned() {
            report.is_revealing = Verdict::Fails(w);
        } else if let Some(Witness::Pair(a, b)) = report.is_consistent.witness().cloned() {
            let forward = Witness::Pair(a.clone(), b.clone());
            let witness = if Property::Revealing.replay(c, &forward)? { forward } else { Witness::Pair(b, a) };
            report.is_revealing = Verdict::Fails(witness);
        }
    } else if !report.is_consistent.fails() && !report.is_persistent.fails() {
        if let Some(Witness::Pair(a, b)) = report.is_revealing.witness().cloned() {
            let union = &a | &b;
            let persistence = Witness::Pair(a, union.clone());
            if Property::Persistent.replay(c, &persistence)? {
                report.is_persistent = Verdict::Fails(persistence.clone());
                report.rejection_monotone = Verdict::Fails(persistence);
            } else {
                report.is_consistent = Verdict::Fails(Witness::Pair(union, b));
            }
        }
    }
    Ok(())
}

fn classify_exhaustive(c: &ChoiceFunction) -> Result<PropertyReport> {
    let n = c.universe().len();
    if n > CLASSIFY_EXHAUSTIVE_CAP {
        return Err(Error::CapExceeded {
            operation: "exhaustive classification",
            size: n,
            cap: CLASSIFY_EXHAUSTIVE_CAP,
            hint: "; use a sampled budget instead",
        });
    }
    let universe = c.universe();
    let to_set = |mask: u64| ContractSet::from_mask(universe, mask);
    let table = match tabulate_with(c, 1u64 << n, to_set, |s| s.to_mask().expect("small universe"))? {
        Ok(table) => table,
        Err(bad) => return Ok(not_a_choice(to_set(bad))),
    };
    let sweep = Sweep { table: &table, full: full_mask(n) };
    let mut report = PropertyReport { is_choice_map: Verdict::Holds, ..PropertyReport::not_evaluated() };
    for property in &Property::ALL[1..] {
        *report.verdict_mut(*property) = match sweep.first_failure(*property) {
            None => Verdict::Holds,
            Some((a, None)) => Verdict::Fails(Witness::Set(to_set(a))),
            Some((a, Some(b))) => Verdict::Fails(Witness::Pair(to_set(a), to_set(b))),
        };
    }
    Ok(report)
}

/// Evaluate `c` on `count` local masks. The inner `Err` carries the first mask
/// on which `c` violated `C(A) ⊆ A`.
fn tabulate_with<S, M>(
    c: &ChoiceFunction,
    count: u64,
    to_set: S,
    to_mask: M,
) -> Result<std::result::Result<Vec<u64>, u64>>
where
    S: Fn(u64) -> ContractSet,
    M: Fn(&ContractSet) -> u64,
{
    let mut table = Vec::with_capacity(count as usize);
    for mask in 0..count {
        match c.choose(&to_set(mask)) {
            Ok(chosen) => table.push(to_mask(&chosen)),
            Err(Error::NotAChoice { .. }) => return Ok(Err(mask)),
            Err(e) => return Err(e),
        }
    }
    Ok(Ok(table))
}

/// Tabulate `c` over every subset of a universe of at most 20 contracts.
pub(crate) fn tabulate(c: &ChoiceFunction, operation: &'static str, cap: usize) -> Result<Vec<u64>> {
    let n = c.universe().len();
    if n > cap {
        return Err(Error::CapExceeded { operation, size: n, cap, hint: "" });
    }
    let universe = c.universe();
    (0..1u64 << n)
        .map(|mask| Ok(c.choose(&ContractSet::from_mask(universe, mask))?.to_mask().expect("small universe")))
        .collect()
}

/// Property sweeps over a tabulated choice map. Each returns the first
/// counterexample in (A, B) mask order.
struct Sweep<'a> {
    table: &'a [u64],
    full: u64,
}

impl Sweep<'_> {
    fn choose(&self, mask: u64) -> u64 {
        self.table[mask as usize]
    }

    fn first_failure(&self, property: Property) -> Option<(u64, Option<u64>)> {
        match property {
            Property::ChoiceMap => None,
            Property::Revealing => self.pairs(
                |a| self.choose(a),
                |a| self.full & !self.choose(a),
                |a, b| a & self.choose(b) & !self.choose(a) != 0,
            ),
            Property::Consistent => {
                self.pairs(|a| self.choose(a), |a| a & !self.choose(a), |a, b| self.choose(b) != self.choose(a))
            }
            Property::Persistent => {
                self.pairs(|a| a, |a| self.full & !a, |a, b| a & self.choose(b) & !self.choose(a) != 0)
            }
            Property::RejectionMonotone => self.pairs(
                |a| a,
                |a| self.full & !a,
                |a, b| {
                    let ra = a & !self.choose(a);
                    let rb = b & !self.choose(b);
                    ra & !rb != 0
                },
            ),
            Property::Idempotent => (0..=self.full)
                .find(|&a| {
                    let ca = self.choose(a);
                    self.choose(ca) != ca
                })
                .map(|a| (a, None)),
        }
    }

    /// For each `A` in mask order, tries `B = base(A) | s` for every submask
    /// `s` of `free(A)`: supersets of `C(A)` for revealing, sets between `C(A)`
    /// and `A` for consistency, supersets of `A` for persistence.
    fn pairs<B, F, V>(&self, base: B, free: F, violates: V) -> Option<(u64, Option<u64>)>
    where
        B: Fn(u64) -> u64,
        F: Fn(u64) -> u64,
        V: Fn(u64, u64) -> bool,
    {
        for a in 0..=self.full {
            let fixed = base(a);
            for s in submasks(free(a)) {
                let b = fixed | s;
                if violates(a, b) {
                    return Some((a, Some(b)));
                }
            }
        }
        None
    }
}
