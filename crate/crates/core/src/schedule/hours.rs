//! Working hours as discrete contracts.
//!
//! A worker willing to work up to `q` hours at a firm is offered contracts
//! `(w, f, 1), …, (w, f, q)`; the hours worked are the largest `k` with
//! `(w, f, k)` in the stable set. Rankings of counterparts extend
//! lexicographically: all hours at the first choice, then all hours at the
//! second, and so on.

use std::collections::HashMap;
use std::fmt;

use super::{build_market, AgentSpec, CompiledMarket, ScheduleProblem};
use crate::error::{Error, Result};
use crate::universe::ContractSet;

/// One agent's ranking of counterparts with the maximum hours accepted from each.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HoursAgent {
    pub agent: String,
    /// Most preferred counterpart first.
    pub ranking: Vec<(String, usize)>,
    /// Optional cap on total hours over all counterparts.
    pub total: Option<usize>,
}

impl HoursAgent {
    pub fn new(agent: impl Into<String>) -> Self {
        Self { agent: agent.into(), ..Self::default() }
    }

    pub fn rank(mut self, counterpart: impl Into<String>, max_hours: usize) -> Self {
        self.ranking.push((counterpart.into(), max_hours));
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HoursEncoding {
    pub workers: Vec<HoursAgent>,
    pub firms: Vec<HoursAgent>,
}

fn caps(agents: &[HoursAgent], kind: &str) -> Result<HashMap<(String, String), usize>> {
    let mut caps = HashMap::new();
    for agent in agents {
        for (counterpart, hours) in &agent.ranking {
            if caps.insert((agent.agent.clone(), counterpart.clone()), *hours).is_some() {
                return Err(Error::Schedule(format!("{kind} {} ranks {counterpart} twice", agent.agent)));
            }
        }
    }
    Ok(caps)
}

fn hour_name(k: usize) -> String {
    k.to_string()
}

impl HoursEncoding {
    /// `(worker cap, firm cap)` for a pair, zero when unranked.
    pub fn caps(&self, worker: &str, firm: &str) -> (usize, usize) {
        let find = |agents: &[HoursAgent], agent: &str, counterpart: &str| {
            agents
                .iter()
                .find(|a| a.agent == agent)
                .and_then(|a| a.ranking.iter().find(|(c, _)| c == counterpart))
                .map_or(0, |&(_, hours)| hours)
        };
        (find(&self.workers, worker, firm), find(&self.firms, firm, worker))
    }
}

/// The schedule problem whose days are hour slots `1, 2, …`.
///
/// Only mutually acceptable pairs (both rank each other with a positive cap)
/// get contracts, for hours up to the larger of the two caps; each side lists
/// hours only up to its own cap.
pub fn expand_hours(enc: &HoursEncoding) -> Result<ScheduleProblem> {
    let worker_caps = caps(&enc.workers, "worker")?;
    let firm_caps = caps(&enc.firms, "firm")?;
    let workers: Vec<String> = enc.workers.iter().map(|a| a.agent.clone()).collect();
    let firms: Vec<String> = enc.firms.iter().map(|a| a.agent.clone()).collect();
    for (kind, agents, others) in [("worker", &enc.workers, &firms), ("firm", &enc.firms, &workers)] {
        for agent in agents.iter() {
            if let Some((c, _)) = agent.ranking.iter().find(|(c, _)| !others.contains(c)) {
                return Err(Error::Schedule(format!("{kind} {} ranks unknown counterpart {c}", agent.agent)));
            }
        }
    }

    let pair_hours = |w: &str, f: &str| -> usize {
        let key = (w.to_string(), f.to_string());
        let qw = worker_caps.get(&key).copied().unwrap_or(0);
        let qf = firm_caps.get(&(key.1, key.0)).copied().unwrap_or(0);
        if qw > 0 && qf > 0 {
            qw.max(qf)
        } else {
            0
        }
    };
    let mut contracts = Vec::new();
    let mut slots = 0;
    for w in &workers {
        for f in &firms {
            let hours = pair_hours(w, f);
            slots = slots.max(hours);
            contracts.extend((1..=hours).map(|k| (w.clone(), f.clone(), hour_name(k))));
        }
    }

    let spec = |agent: &HoursAgent, mutual: &dyn Fn(&str) -> bool| AgentSpec {
        agent: agent.agent.clone(),
        preferences: agent
            .ranking
            .iter()
            .filter(|(c, _)| mutual(c))
            .flat_map(|(c, hours)| (1..=*hours).map(move |k| (c.clone(), hour_name(k))))
            .collect(),
        quota: agent.total,
        day_quotas: Vec::new(),
        counterpart_quotas: Vec::new(),
    };
    let worker_specs = enc.workers.iter().map(|a| spec(a, &|f| pair_hours(&a.agent, f) > 0)).collect();
    let firm_specs = enc.firms.iter().map(|a| spec(a, &|w| pair_hours(w, &a.agent) > 0)).collect();
    Ok(ScheduleProblem {
        workers,
        firms,
        days: (1..=slots).map(hour_name).collect(),
        worker_specs,
        firm_specs,
        contracts: Some(contracts),
    })
}

/// Build the market of an hours encoding directly.
pub fn build_hours_market(enc: &HoursEncoding) -> Result<CompiledMarket> {
    build_market(&expand_hours(enc)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoursEntry {
    pub worker: String,
    pub firm: String,
    pub hours: usize,
}

/// Hours per (worker, firm) pair, in (worker, firm) order, zero included.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HoursTable {
    pub entries: Vec<HoursEntry>,
    /// Pairs whose hour contracts have gaps below the maximum.
    pub warnings: Vec<String>,
}

impl HoursTable {
    pub fn hours(&self, worker: &str, firm: &str) -> usize {
        self.entries.iter().find(|e| e.worker == worker && e.firm == firm).map_or(0, |e| e.hours)
    }
}

impl fmt::Display for HoursTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = |column: &dyn Fn(&HoursEntry) -> usize, title: &str| {
            self.entries.iter().map(column).max().unwrap_or(0).max(title.len())
        };
        let ww = width(&|e| e.worker.len(), "worker");
        let fw = width(&|e| e.firm.len(), "firm");
        writeln!(f, "{:<ww$}  {:<fw$}  hours", "worker", "firm")?;
        for e in &self.entries {
            writeln!(f, "{:<ww$}  {:<fw$}  {}", e.worker, e.firm, e.hours)?;
        }
        for warning in &self.warnings {
            writeln!(f, "warning: {warning}")?;
        }
        Ok(())
    }
}

/// `hours(w, f) = max {k : (w, f, k) ∈ S}`, or 0.
pub fn interpret_hours(s: &ContractSet, enc: &HoursEncoding) -> Result<HoursTable> {
    let problem = expand_hours(enc)?;
    let layout = super::MarketLayout::new(&problem)?;
    if !s.universe().same_as(&layout.universe) {
        return Err(Error::UniverseMismatch);
    }
    let mut held: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for i in s.iter() {
        let key = layout.keys[i];
        // Day `k - 1` is hour slot `k`.
        held.entry((key.worker, key.firm)).or_default().push(key.day + 1);
    }
    let mut table = HoursTable::default();
    for (wi, w) in problem.workers.iter().enumerate() {
        for (fi, f) in problem.firms.iter().enumerate() {
            let hours = held.get(&(wi, fi)).map_or(&[][..], Vec::as_slice);
            let max = hours.iter().copied().max().unwrap_or(0);
            if hours.len() < max {
                let missing: Vec<String> = (1..=max).filter(|k| !hours.contains(k)).map(|k| k.to_string()).collect();
                table.warnings.push(format!(
                    "non-contiguous hours for ({w},{f}): hour {max} held without hour {}",
                    missing.join(", ")
                ));
            }
            table.entries.push(HoursEntry { worker: w.clone(), firm: f.clone(), hours: max });
        }
    }
    Ok(table)
}
