//! Worker/firm/day markets.
//!
//! Every agent declares its acceptable (counterpart, day) pairs in preference
//! order together with quotas. Each agent compiles to a greedy quota map on its
//! own block of contracts, and the blocks are combined into the global worker
//! and firm choice maps.

mod hours;

use std::collections::{HashMap, HashSet};

use crate::choice::ChoiceFunction;
use crate::choicemaps::{build_quota_choice, combine_partition, QuotaChoiceSpec, QuotaGroup};
use crate::error::{Error, Result};
use crate::universe::{ContractSet, ContractUniverse};
use crate::Side;

pub use hours::{build_hours_market, expand_hours, interpret_hours, HoursAgent, HoursEncoding, HoursEntry, HoursTable};

/// One agent's requirements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AgentSpec {
    pub agent: String,
    /// Acceptable (counterpart, day) pairs, most preferred first.
    pub preferences: Vec<(String, String)>,
    /// Global quota; `None` means no limit.
    pub quota: Option<usize>,
    /// At most this many contracts on the given day.
    pub day_quotas: Vec<(String, usize)>,
    /// At most this many contracts with the given counterpart.
    pub counterpart_quotas: Vec<(String, usize)>,
}

impl AgentSpec {
    pub fn new(agent: impl Into<String>) -> Self {
        Self { agent: agent.into(), ..Self::default() }
    }

    pub fn prefer(mut self, counterpart: impl Into<String>, day: impl Into<String>) -> Self {
        self.preferences.push((counterpart.into(), day.into()));
        self
    }

    pub fn with_quota(mut self, quota: usize) -> Self {
        self.quota = Some(quota);
        self
    }

    pub fn with_day_quota(mut self, day: impl Into<String>, quota: usize) -> Self {
        self.day_quotas.push((day.into(), quota));
        self
    }

    pub fn with_counterpart_quota(mut self, counterpart: impl Into<String>, quota: usize) -> Self {
        self.counterpart_quotas.push((counterpart.into(), quota));
        self
    }
}

/// A contract `(worker, firm, day)` by position in the problem's lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContractKey {
    pub worker: usize,
    pub firm: usize,
    pub day: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScheduleProblem {
    pub workers: Vec<String>,
    pub firms: Vec<String>,
    pub days: Vec<String>,
    /// Agents without a spec accept nothing.
    pub worker_specs: Vec<AgentSpec>,
    pub firm_specs: Vec<AgentSpec>,
    /// Restrict the universe to these (worker, firm, day) triples instead of
    /// the full product.
    pub contracts: Option<Vec<(String, String, String)>>,
}

/// Label of a contract, e.g. `(w1,f2,d3)`.
pub fn contract_label(worker: &str, firm: &str, day: &str) -> String {
    format!("({worker},{firm},{day})")
}

fn position(names: &[String], kind: &str) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if map.insert(name.clone(), i).is_some() {
            return Err(Error::Schedule(format!("{kind} {name} is declared twice")));
        }
    }
    Ok(map)
}

/// Contract positions of a problem, before any choice map is built.
#[derive(Clone, Debug)]
pub struct MarketLayout {
    pub universe: ContractUniverse,
    pub keys: Vec<ContractKey>,
    lookup: HashMap<ContractKey, usize>,
    workers: HashMap<String, usize>,
    firms: HashMap<String, usize>,
    days: HashMap<String, usize>,
}

impl MarketLayout {
    pub fn new(problem: &ScheduleProblem) -> Result<Self> {
        let workers = position(&problem.workers, "worker")?;
        let firms = position(&problem.firms, "firm")?;
        let days = position(&problem.days, "day")?;
        let mut keys = Vec::new();
        match &problem.contracts {
            None => {
                for worker in 0..problem.workers.len() {
                    for firm in 0..problem.firms.len() {
                        for day in 0..problem.days.len() {
                            keys.push(ContractKey { worker, firm, day });
                        }
                    }
                }
            }
            Some(triples) => {
                for (w, f, d) in triples {
                    let lookup = |map: &HashMap<String, usize>, name: &str, kind: &str| {
                        map.get(name).copied().ok_or_else(|| {
                            Error::Schedule(format!("contract {}: unknown {kind} {name}", contract_label(w, f, d)))
                        })
                    };
                    keys.push(ContractKey {
                        worker: lookup(&workers, w, "worker")?,
                        firm: lookup(&firms, f, "firm")?,
                        day: lookup(&days, d, "day")?,
                    });
                }
                keys.sort_unstable();
                if let Some(pair) = keys.windows(2).find(|pair| pair[0] == pair[1]) {
                    let k = pair[0];
                    return Err(Error::Schedule(format!(
                        "contract {} is listed twice",
                        contract_label(&problem.workers[k.worker], &problem.firms[k.firm], &problem.days[k.day])
                    )));
                }
            }
        }
        let labels = keys
            .iter()
            .map(|k| contract_label(&problem.workers[k.worker], &problem.firms[k.firm], &problem.days[k.day]));
        let universe = ContractUniverse::new(labels)?;
        let lookup = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        Ok(Self { universe, keys, lookup, workers, firms, days })
    }

    pub fn index(&self, key: ContractKey) -> Option<usize> {
        self.lookup.get(&key).copied()
    }

    /// Contracts of one agent.
    pub fn block(&self, side: Side, agent: usize) -> ContractSet {
        let members = self.keys.iter().enumerate().filter(|(_, k)| match side {
            Side::Worker => k.worker == agent,
            Side::Firm => k.firm == agent,
        });
        ContractSet::from_indices(&self.universe, members.map(|(i, _)| i)).expect("indices come from the layout")
    }

    /// Translate one agent's spec into a quota map specification on the
    /// whole universe. Group names are `day <d>`, `firm <f>` or `worker <w>`.
    pub fn compile_agent(&self, spec: &AgentSpec, side: Side) -> Result<QuotaChoiceSpec> {
        let (own, other, other_kind) = match side {
            Side::Worker => (&self.workers, &self.firms, "firm"),
            Side::Firm => (&self.firms, &self.workers, "worker"),
        };
        let context = |message: String| Error::Schedule(format!("{side} {}: {message}", spec.agent));
        let agent = *own.get(&spec.agent).ok_or_else(|| context(format!("not a declared {side}")))?;
        let counterpart =
            |name: &str| other.get(name).copied().ok_or_else(|| context(format!("unknown {other_kind} {name}")));
        let day = |name: &str| self.days.get(name).copied().ok_or_else(|| context(format!("unknown day {name}")));
        let key = |counterpart: usize, day: usize| match side {
            Side::Worker => ContractKey { worker: agent, firm: counterpart, day },
            Side::Firm => ContractKey { worker: counterpart, firm: agent, day },
        };

        let mut preference = Vec::with_capacity(spec.preferences.len());
        let mut seen = HashSet::new();
        for (c, d) in &spec.preferences {
            let index = self
                .index(key(counterpart(c)?, day(d)?))
                .ok_or_else(|| context(format!("({c},{d}) is not a contract of this market")))?;
            if !seen.insert(index) {
                return Err(context(format!("({c},{d}) appears twice in the preference list")));
            }
            preference.push(index);
        }

        let block = self.block(side, agent);
        let mut groups = Vec::new();
        let mut declared = HashSet::new();
        for (d, quota) in &spec.day_quotas {
            let d_index = day(d)?;
            if !declared.insert(("day", d_index)) {
                return Err(context(format!("day {d} has two quotas")));
            }
            let members = block.iter().filter(|&i| self.keys[i].day == d_index);
            let members = ContractSet::from_indices(&self.universe, members)?;
            groups.push(QuotaGroup::named(members, *quota, format!("day {d}")));
        }
        for (c, quota) in &spec.counterpart_quotas {
            let c_index = counterpart(c)?;
            if !declared.insert((other_kind, c_index)) {
                return Err(context(format!("{other_kind} {c} has two quotas")));
            }
            let members = block.iter().filter(|&i| match side {
                Side::Worker => self.keys[i].firm == c_index,
                Side::Firm => self.keys[i].worker == c_index,
            });
            let members = ContractSet::from_indices(&self.universe, members)?;
            groups.push(QuotaGroup::named(members, *quota, format!("{other_kind} {c}")));
        }

        let global_quota = spec.quota.unwrap_or(preference.len());
        let compiled = QuotaChoiceSpec { universe: self.universe.clone(), preference, global_quota, groups };
        compiled.validate(false).map_err(|err| match err {
            Error::OverlappingGroups { first, second, shared } => context(format!(
                "quota groups {first} and {second} both bind and share {shared}; \
                 per-day and per-{other_kind} quotas can only be combined when one of them never binds"
            )),
            other => context(other.to_string()),
        })?;
        Ok(compiled)
    }
}

/// A problem compiled into its two global choice maps.
#[derive(Clone, Debug)]
pub struct CompiledMarket {
    pub layout: MarketLayout,
    pub workers: Vec<String>,
    pub firms: Vec<String>,
    pub days: Vec<String>,
    pub worker_specs: Vec<QuotaChoiceSpec>,
    pub firm_specs: Vec<QuotaChoiceSpec>,
    pub worker_choice: ChoiceFunction,
    pub firm_choice: ChoiceFunction,
}

impl CompiledMarket {
    pub fn universe(&self) -> &ContractUniverse {
        &self.layout.universe
    }

    pub fn key(&self, index: usize) -> ContractKey {
        self.layout.keys[index]
    }

    /// Names of the worker, firm and day of a contract.
    pub fn names(&self, index: usize) -> (&str, &str, &str) {
        let k = self.key(index);
        (&self.workers[k.worker], &self.firms[k.firm], &self.days[k.day])
    }

    pub fn choice(&self, side: Side) -> &ChoiceFunction {
        match side {
            Side::Worker => &self.worker_choice,
            Side::Firm => &self.firm_choice,
        }
    }
}

/// Compile one agent of a problem by name.
pub fn compile_agent(problem: &ScheduleProblem, side: Side, agent: &str) -> Result<QuotaChoiceSpec> {
    let layout = MarketLayout::new(problem)?;
    let specs = match side {
        Side::Worker => &problem.worker_specs,
        Side::Firm => &problem.firm_specs,
    };
    let spec = specs.iter().find(|s| s.agent == agent).cloned().unwrap_or_else(|| AgentSpec::new(agent));
    layout.compile_agent(&spec, side)
}

/// Compile every agent and combine each side over its blocks.
pub fn build_market(problem: &ScheduleProblem) -> Result<CompiledMarket> {
    let layout = MarketLayout::new(problem)?;
    let mut sides = Vec::with_capacity(2);
    for side in [Side::Worker, Side::Firm] {
        let (agents, specs) = match side {
            Side::Worker => (&problem.workers, &problem.worker_specs),
            Side::Firm => (&problem.firms, &problem.firm_specs),
        };
        let mut by_agent: HashMap<&str, &AgentSpec> = HashMap::new();
        for spec in specs {
            if by_agent.insert(spec.agent.as_str(), spec).is_some() {
                return Err(Error::Schedule(format!("{side} {} has two specifications", spec.agent)));
            }
        }
        let mut compiled = Vec::with_capacity(agents.len());
        let mut children = Vec::with_capacity(agents.len());
        for (i, agent) in agents.iter().enumerate() {
            let spec = by_agent.remove(agent.as_str()).cloned().unwrap_or_else(|| AgentSpec::new(agent.clone()));
            let quota_spec = layout.compile_agent(&spec, side)?;
            children.push((layout.block(side, i), build_quota_choice(&quota_spec, false)?));
            compiled.push(quota_spec);
        }
        if let Some(stray) = by_agent.keys().next() {
            return Err(Error::Schedule(format!("{side} {stray} has a specification but is not declared")));
        }
        sides.push((compiled, combine_partition(&layout.universe, children)?));
    }
    let (firm_specs, firm_choice) = sides.pop().expect("two sides");
    let (worker_specs, worker_choice) = sides.pop().expect("two sides");
    Ok(CompiledMarket {
        layout,
        workers: problem.workers.clone(),
        firms: problem.firms.clone(),
        days: problem.days.clone(),
        worker_specs,
        firm_specs,
        worker_choice,
        firm_choice,
    })
}
