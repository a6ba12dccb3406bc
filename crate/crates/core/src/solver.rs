//! Fixed-point iteration for worker-optimal and firm-optimal stable sets.
//!
//! The map `f(A, B) = (X ∖ R_F(B), X ∖ R_W(A))` is monotone for the order
//! `(A, B) ≤ (A′, B′) ⟺ A ⊆ A′ ∧ B ⊇ B′` whenever both rejection maps are
//! monotone. Iterating from the top `(X, ∅)` reaches the greatest fixed point
//! (worker-optimal), from the bottom `(∅, X)` the least one (firm-optimal).

use std::fmt;

use crate::analysis::{classify, tabulate, Budget, CLASSIFY_EXHAUSTIVE_CAP};
use crate::choice::ChoiceFunction;
use crate::error::{Error, Result};
use crate::universe::ContractSet;
use crate::Side;

/// Largest universe accepted by [`enumerate_fixed_points`].
pub const FIXED_POINT_CAP: usize = 10;

/// Random pairs used by `check_revealing` above the exhaustive cap.
const CHECK_SAMPLES: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Style {
    /// Iterate `f` on pairs until the pair repeats.
    Pair,
    /// Alternate `Y_{n+1} = (X ∖ X_n) ∪ C_W(X_n)` and
    /// `X_{n+1} = (X ∖ Y_n) ∪ C_F(Y_n)`, computing only every other iterate.
    #[default]
    Alternating,
}

impl Style {
    pub fn name(self) -> &'static str {
        match self {
            Style::Pair => "pair",
            Style::Alternating => "alternating",
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SolveOptions {
    /// `Worker` starts from `(X, ∅)`, `Firm` from `(∅, X)`.
    pub side: Side,
    pub style: Style,
    /// Classify both maps before solving (exhaustive up to 12 contracts,
    /// sampled above).
    pub check_revealing: bool,
}

impl SolveOptions {
    pub fn new(side: Side, style: Style) -> Self {
        Self { side, style, check_revealing: false }
    }

    pub fn checked(mut self) -> Self {
        self.check_revealing = true;
        self
    }
}

/// How much is known about the stability of a solver result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assurance {
    /// Both maps are revealing by construction.
    Guaranteed,
    /// Both maps were classified revealing exhaustively.
    Verified,
    /// Sampling found no counterexample to revealingness.
    Sampled,
    /// The requested revealingness check failed for this side.
    Unverified(Side),
    /// Not checked and not known; the result is only a fixed point of `f`.
    FixedPointOnly,
}

impl Assurance {
    pub fn is_stable_guaranteed(&self) -> bool {
        matches!(self, Assurance::Guaranteed | Assurance::Verified)
    }
}

impl fmt::Display for Assurance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assurance::Guaranteed => f.write_str("stable (revealing by construction)"),
            Assurance::Verified => f.write_str("stable (revealing verified exhaustively)"),
            Assurance::Sampled => f.write_str("stable if revealing (sampled check passed)"),
            Assurance::Unverified(side) => write!(f, "unverified: the {side} map is not revealing"),
            Assurance::FixedPointOnly => f.write_str("fixed point; stability not guaranteed"),
        }
    }
}

/// One iterate. Pair-style entries carry both components; alternating-style
/// entries carry only the one that was computed at that index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: usize,
    /// `X_n`, the worker-side component.
    pub worker_side: Option<ContractSet>,
    /// `Y_n`, the firm-side component.
    pub firm_side: Option<ContractSet>,
}

impl TraceEntry {
    /// Column heading, e.g. `X_2`, `Y_3`, or `(X_1,Y_1)`.
    pub fn label(&self) -> String {
        match (&self.worker_side, &self.firm_side) {
            (Some(_), Some(_)) => format!("(X_{0},Y_{0})", self.step),
            (Some(_), None) => format!("X_{}", self.step),
            _ => format!("Y_{}", self.step),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationTrace {
    pub style: Style,
    pub entries: Vec<TraceEntry>,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub stable_set: ContractSet,
    /// `S_W`, the worker component of the fixed point.
    pub worker_witness: ContractSet,
    /// `S_F`, the firm component of the fixed point.
    pub firm_witness: ContractSet,
    pub trace: IterationTrace,
    /// Pair style: applications of `f`. Alternating style: the index `n`
    /// at which the stop condition held.
    pub iterations: usize,
    pub side: Side,
    pub style: Style,
    pub assurance: Assurance,
}

fn check_universe(cw: &ChoiceFunction, cf: &ChoiceFunction, sets: &[&ContractSet]) -> Result<()> {
    if !cw.universe().same_as(cf.universe()) || sets.iter().any(|s| !s.universe().same_as(cw.universe())) {
        return Err(Error::UniverseMismatch);
    }
    Ok(())
}

/// `f(A, B) = (X ∖ R_F(B), X ∖ R_W(A))`.
pub fn step(
    cw: &ChoiceFunction,
    cf: &ChoiceFunction,
    a: &ContractSet,
    b: &ContractSet,
) -> Result<(ContractSet, ContractSet)> {
    check_universe(cw, cf, &[a, b])?;
    Ok((cf.reject(b)?.complement(), cw.reject(a)?.complement()))
}

/// `(A, B) ≤ (A′, B′) ⟺ A ⊆ A′ ∧ B ⊇ B′`.
pub fn pair_le(lower: (&ContractSet, &ContractSet), upper: (&ContractSet, &ContractSet)) -> Result<bool> {
    Ok(lower.0.is_subset(upper.0)? && upper.1.is_subset(lower.1)?)
}

fn step_cap(cw: &ChoiceFunction) -> usize {
    2 * cw.universe().len() + 4
}

/// Compute the worker-optimal or firm-optimal fixed point.
pub fn solve(cw: &ChoiceFunction, cf: &ChoiceFunction, options: SolveOptions) -> Result<SolveOutcome> {
    check_universe(cw, cf, &[])?;
    let assurance = assess(cw, cf, options.check_revealing)?;
    let (stable_set, worker_witness, firm_witness, entries, iterations) = match options.style {
        Style::Pair => solve_pair(cw, cf, options.side)?,
        Style::Alternating => solve_alternating(cw, cf, options.side)?,
    };
    Ok(SolveOutcome {
        stable_set,
        worker_witness,
        firm_witness,
        trace: IterationTrace { style: options.style, entries },
        iterations,
        side: options.side,
        style: options.style,
        assurance,
    })
}

type Solved = (ContractSet, ContractSet, ContractSet, Vec<TraceEntry>, usize);

fn solve_pair(cw: &ChoiceFunction, cf: &ChoiceFunction, side: Side) -> Result<Solved> {
    let universe = cw.universe();
    let (mut a, mut b) = match side {
        Side::Worker => (universe.full_set(), universe.empty_set()),
        Side::Firm => (universe.empty_set(), universe.full_set()),
    };
    let cap = step_cap(cw);
    let mut entries = vec![TraceEntry { step: 0, worker_side: Some(a.clone()), firm_side: Some(b.clone()) }];
    for n in 1..=cap {
        let (next_a, next_b) = step(cw, cf, &a, &b)?;
        if next_a == a && next_b == b {
            let s = &a & &b;
            return Ok((s, a, b, entries, n));
        }
        a = next_a;
        b = next_b;
        entries.push(TraceEntry { step: n, worker_side: Some(a.clone()), firm_side: Some(b.clone()) });
    }
    Err(Error::NonTermination { steps: cap })
}

/// Worker side computes `X_0, Y_1, X_2, …` and stops at the first
/// `X_{n-1} = X_{n+1}`; the firm side mirrors this from `Y_0 = X`.
fn solve_alternating(cw: &ChoiceFunction, cf: &ChoiceFunction, side: Side) -> Result<Solved> {
    let full = cw.universe().full_set();
    // `start` alternates with `other`; `start` is X for the worker side.
    let (start_choice, other_choice) = match side {
        Side::Worker => (cw, cf),
        Side::Firm => (cf, cw),
    };
    let entry = |step: usize, set: &ContractSet, is_start: bool| {
        let worker = (side == Side::Worker) == is_start;
        TraceEntry { step, worker_side: worker.then(|| set.clone()), firm_side: (!worker).then(|| set.clone()) }
    };
    let cap = step_cap(cw);
    let mut previous_start = full.clone();
    let mut entries = vec![entry(0, &previous_start, true)];
    let mut n = 0;
    loop {
        // Index n holds a start-side iterate; compute the other side at n+1
        // and the next start-side iterate at n+2.
        let other = &(&full - &previous_start) | &start_choice.choose(&previous_start)?;
        entries.push(entry(n + 1, &other, false));
        let next_start = &(&full - &other) | &other_choice.choose(&other)?;
        entries.push(entry(n + 2, &next_start, true));
        if next_start == previous_start {
            let s = start_choice.choose(&previous_start)?;
            let (worker_witness, firm_witness) = match side {
                Side::Worker => (previous_start, other),
                Side::Firm => (other, previous_start),
            };
            return Ok((s, worker_witness, firm_witness, entries, n + 1));
        }
        previous_start = next_start;
        n += 2;
        if n > cap {
            return Err(Error::NonTermination { steps: cap });
        }
    }
}

fn assess(cw: &ChoiceFunction, cf: &ChoiceFunction, check: bool) -> Result<Assurance> {
    if cw.guarantee().is_revealing() && cf.guarantee().is_revealing() {
        return Ok(Assurance::Guaranteed);
    }
    if !check {
        return Ok(Assurance::FixedPointOnly);
    }
    let exhaustive = cw.universe().len() <= CLASSIFY_EXHAUSTIVE_CAP;
    for (side, c) in [(Side::Worker, cw), (Side::Firm, cf)] {
        if c.guarantee().is_revealing() {
            continue;
        }
        let budget = if exhaustive { Budget::Exhaustive } else { Budget::Sampled(CHECK_SAMPLES) };
        if !classify(c, budget)?.is_revealing.holds() {
            return Ok(Assurance::Unverified(side));
        }
    }
    Ok(if exhaustive { Assurance::Verified } else { Assurance::Sampled })
}

/// Every fixed point `(A, B)` of `f`, ordered by the mask of `A`.
///
/// A fixed point is determined by `A` alone since `B = X ∖ R_W(A)`, so this
/// sweeps `2^|X|` candidates rather than all pairs.
pub fn enumerate_fixed_points(cw: &ChoiceFunction, cf: &ChoiceFunction) -> Result<Vec<(ContractSet, ContractSet)>> {
    check_universe(cw, cf, &[])?;
    let operation = "fixed-point enumeration";
    let worker = tabulate(cw, operation, FIXED_POINT_CAP)?;
    let firm = tabulate(cf, operation, FIXED_POINT_CAP)?;
    let universe = cw.universe();
    let full = crate::masks::full_mask(universe.len());
    let mut points = Vec::new();
    for a in 0..=full {
        let b = (full & !a) | worker[a as usize];
        if (full & !b) | firm[b as usize] == a {
            points.push((ContractSet::from_mask(universe, a), ContractSet::from_mask(universe, b)));
        }
    }
    Ok(points)
}
