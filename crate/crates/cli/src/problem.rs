//! Validated problems: a document together with its compiled choice maps.

use std::collections::{BTreeMap, HashSet};

use schedmatch::choicemaps::{build_quota_choice, build_table_choice, QuotaChoiceSpec, TableChoiceSpec};
use schedmatch::schedule::{build_market, expand_hours, CompiledMarket, HoursEncoding, ScheduleProblem};
use schedmatch::{make_universe, ChoiceFunction, ContractSet, ContractUniverse, Side};

use crate::document::{
    parse_document, AgentDocument, ChoiceDocument, HoursAgentDocument, ProblemDocument, QuotaDocument, RawDocument,
    ScheduleDocument, TableDocument,
};
use crate::error::{CliError, Result};

/// How the contracts of a problem are named.
#[derive(Debug)]
pub enum Shape {
    /// Contracts are `(worker, firm, day)` triples.
    Schedule(CompiledMarket),
    /// Contracts are `(worker, firm, hour)` triples of an hours encoding.
    Hours(HoursEncoding, CompiledMarket),
    /// Contracts are opaque labels.
    Raw,
}

#[derive(Debug)]
pub struct Problem {
    /// Canonical form of the input: parsing its rendering gives it back.
    pub document: ProblemDocument,
    pub universe: ContractUniverse,
    pub worker_choice: ChoiceFunction,
    pub firm_choice: ChoiceFunction,
    pub shape: Shape,
}

impl Problem {
    pub fn choice(&self, side: Side) -> &ChoiceFunction {
        match side {
            Side::Worker => &self.worker_choice,
            Side::Firm => &self.firm_choice,
        }
    }

    pub fn market(&self) -> Option<&CompiledMarket> {
        match &self.shape {
            Shape::Schedule(m) | Shape::Hours(_, m) => Some(m),
            Shape::Raw => None,
        }
    }

    pub fn from_document(document: ProblemDocument) -> Result<Problem> {
        match document {
            ProblemDocument::Schedule(doc) => {
                check_schedule(&doc)?;
                let market = build_market(&ScheduleProblem::from(&doc))?;
                Ok(Problem::from_market(ProblemDocument::Schedule(doc), market, None))
            }
            ProblemDocument::Hours(doc) => {
                check_hours(&doc.workers, &doc.firms, "workers", "firm")?;
                check_hours(&doc.firms, &doc.workers, "firms", "worker")?;
                let enc = HoursEncoding::from(&doc);
                let market = build_market(&expand_hours(&enc)?)?;
                Ok(Problem::from_market(ProblemDocument::Hours(doc), market, Some(enc)))
            }
            ProblemDocument::Raw(doc) => raw_problem(doc),
        }
    }

    fn from_market(document: ProblemDocument, market: CompiledMarket, hours: Option<HoursEncoding>) -> Problem {
        let universe = market.universe().clone();
        let worker_choice = market.worker_choice.clone();
        let firm_choice = market.firm_choice.clone();
        let shape = match hours {
            Some(enc) => Shape::Hours(enc, market),
            None => Shape::Schedule(market),
        };
        Problem { document, universe, worker_choice, firm_choice, shape }
    }

    /// Read a set of this problem's contracts: a JSON array of labels or
    /// whitespace-separated labels.
    pub fn parse_set(&self, text: &str, path: &str) -> Result<ContractSet> {
        let labels: Vec<String> = if text.trim_start().starts_with('[') {
            serde_json::from_str(text).map_err(|e| CliError::Syntax(format!("{path}: invalid JSON: {e}")))?
        } else {
            text.split_whitespace().map(String::from).collect()
        };
        let mut set = self.universe.empty_set();
        for label in &labels {
            let index = self
                .universe
                .index_of(label)
                .map_err(|_| CliError::invalid(path, format!("{label} is not a contract of this problem")))?;
            set.insert(index);
        }
        Ok(set)
    }
}

/// Parse and validate a document.
pub fn parse_problem(text: &str) -> Result<Problem> {
    Problem::from_document(parse_document(text)?)
}

fn check_unique(names: &[String], path: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for (i, name) in names.iter().enumerate() {
        if !seen.insert(name) {
            return Err(CliError::invalid(format!("{path}[{i}]"), format!("{name} is declared twice")));
        }
    }
    Ok(())
}

fn check_agents(
    specs: &[AgentDocument],
    path: &str,
    agents: &[String],
    counterparts: &[String],
    counterpart_kind: &str,
    days: &[String],
) -> Result<()> {
    for (i, spec) in specs.iter().enumerate() {
        let at = |field: &str| format!("{path}[{i}].{field}");
        if !agents.contains(&spec.agent) {
            return Err(CliError::invalid(at("agent"), format!("{} is not declared", spec.agent)));
        }
        let mut seen = HashSet::new();
        for (j, (c, d)) in spec.preferences.iter().enumerate() {
            let at = at(&format!("preferences[{j}]"));
            if !counterparts.contains(c) {
                return Err(CliError::invalid(at, format!("unknown {counterpart_kind} {c}")));
            }
            if !days.contains(d) {
                return Err(CliError::invalid(at, format!("unknown day {d}")));
            }
            if !seen.insert((c, d)) {
                return Err(CliError::invalid(at, format!("duplicate preference entry ({c}, {d})")));
            }
        }
        for (j, (d, _)) in spec.day_quotas.iter().enumerate() {
            if !days.contains(d) {
                return Err(CliError::invalid(at(&format!("day_quotas[{j}]")), format!("unknown day {d}")));
            }
        }
        for (j, (c, _)) in spec.counterpart_quotas.iter().enumerate() {
            if !counterparts.contains(c) {
                return Err(CliError::invalid(
                    at(&format!("counterpart_quotas[{j}]")),
                    format!("unknown {counterpart_kind} {c}"),
                ));
            }
        }
    }
    Ok(())
}

fn check_schedule(doc: &ScheduleDocument) -> Result<()> {
    check_unique(&doc.workers, "workers")?;
    check_unique(&doc.firms, "firms")?;
    check_unique(&doc.days, "days")?;
    check_agents(&doc.worker_specs, "worker_specs", &doc.workers, &doc.firms, "firm", &doc.days)?;
    check_agents(&doc.firm_specs, "firm_specs", &doc.firms, &doc.workers, "worker", &doc.days)?;
    for (i, (w, f, d)) in doc.contracts.iter().flatten().enumerate() {
        let at = format!("contracts[{i}]");
        for (name, names, kind) in [(w, &doc.workers, "worker"), (f, &doc.firms, "firm"), (d, &doc.days, "day")] {
            if !names.contains(name) {
                return Err(CliError::invalid(at, format!("unknown {kind} {name}")));
            }
        }
    }
    Ok(())
}

fn check_hours(
    agents: &[HoursAgentDocument],
    others: &[HoursAgentDocument],
    path: &str,
    other_kind: &str,
) -> Result<()> {
    let names: Vec<String> = agents.iter().map(|a| a.agent.clone()).collect();
    check_unique(&names, path)?;
    for (i, agent) in agents.iter().enumerate() {
        let mut seen = HashSet::new();
        for (j, (c, _)) in agent.ranking.iter().enumerate() {
            let at = format!("{path}[{i}].ranking[{j}]");
            if !others.iter().any(|o| &o.agent == c) {
                return Err(CliError::invalid(at, format!("unknown {other_kind} {c}")));
            }
            if !seen.insert(c) {
                return Err(CliError::invalid(at, format!("duplicate preference entry {c}")));
            }
        }
    }
    Ok(())
}

/// Canonical key for a set: labels in universe order, comma-separated.
pub fn set_key(set: &ContractSet) -> String {
    set.labels().join(",")
}

fn parse_key(u: &ContractUniverse, key: &str, path: &str) -> Result<ContractSet> {
    if key.trim().is_empty() {
        return Ok(u.empty_set());
    }
    let mut set = u.empty_set();
    for label in key.split(',').map(str::trim) {
        let index = u.index_of(label).map_err(|_| CliError::invalid(path, format!("unknown label {label}")))?;
        if set.contains(index) {
            return Err(CliError::invalid(path, format!("{label} appears twice")));
        }
        set.insert(index);
    }
    Ok(set)
}

fn labels_to_set(u: &ContractUniverse, labels: &[String], path: &str) -> Result<ContractSet> {
    let mut set = u.empty_set();
    for (i, label) in labels.iter().enumerate() {
        let index = u
            .index_of(label)
            .map_err(|_| CliError::invalid(format!("{path}[{i}]"), format!("unknown label {label}")))?;
        set.insert(index);
    }
    Ok(set)
}

fn quota_choice(u: &ContractUniverse, doc: &QuotaDocument, path: &str) -> Result<ChoiceFunction> {
    let mut preference = Vec::new();
    for (i, label) in doc.preference.iter().enumerate() {
        let at = format!("{path}.preference[{i}]");
        let index = u.index_of(label).map_err(|_| CliError::invalid(&at, format!("unknown label {label}")))?;
        if preference.contains(&index) {
            return Err(CliError::invalid(at, format!("duplicate preference entry {label}")));
        }
        preference.push(index);
    }
    let mut spec = QuotaChoiceSpec::new(u, preference);
    if let Some(q) = doc.q {
        spec = spec.with_quota(q.0);
    }
    for (i, group) in doc.groups.iter().enumerate() {
        let members = labels_to_set(u, &group.members, &format!("{path}.groups[{i}].members"))?;
        spec = spec.with_group(members, group.q.0);
    }
    build_quota_choice(&spec, doc.allow_overlap).map_err(|e| match e {
        e @ schedmatch::Error::OverlappingGroups { .. } => CliError::invalid(format!("{path}.groups"), e),
        e => CliError::Core(e),
    })
}

/// Build a table map and return the canonical form of its entries.
fn table_choice(u: &ContractUniverse, doc: &TableDocument, path: &str) -> Result<(ChoiceFunction, TableDocument)> {
    let mut spec = TableChoiceSpec::new(u)?;
    let mut canonical = BTreeMap::new();
    for (key, value) in &doc.entries {
        let at = format!("{path}.entries[{key:?}]");
        let offered = parse_key(u, key, &at)?;
        let chosen = parse_key(u, value, &at)?;
        if spec.get(&offered).is_some() {
            return Err(CliError::invalid(at, format!("second entry for {offered}")));
        }
        if !chosen.subset_of(&offered) {
            return Err(CliError::invalid(at, format!("chosen set {chosen} is not a subset of {offered}")));
        }
        canonical.insert(set_key(&offered), set_key(&chosen));
        spec.insert(&offered, chosen)?;
    }
    for offered in u.subsets() {
        if spec.get(&offered).is_none() {
            return Err(CliError::invalid(
                format!("{path}.entries"),
                format!("no entry for {offered} (key {:?})", set_key(&offered)),
            ));
        }
    }
    Ok((build_table_choice(&spec)?, TableDocument { entries: canonical }))
}

fn raw_choice(u: &ContractUniverse, doc: &ChoiceDocument, path: &str) -> Result<(ChoiceFunction, ChoiceDocument)> {
    match doc {
        ChoiceDocument::Quota(q) => Ok((quota_choice(u, q, path)?, doc.clone())),
        ChoiceDocument::Table(t) => {
            let (c, canonical) = table_choice(u, t, path)?;
            Ok((c, ChoiceDocument::Table(canonical)))
        }
    }
}

fn raw_problem(doc: RawDocument) -> Result<Problem> {
    check_unique(&doc.labels, "labels")?;
    for (i, label) in doc.labels.iter().enumerate() {
        if label.trim().is_empty() || label.contains(',') || label != label.trim() {
            return Err(CliError::invalid(
                format!("labels[{i}]"),
                format!("{label:?}: labels must be non-empty, without commas or surrounding spaces"),
            ));
        }
    }
    let universe = make_universe(doc.labels.iter().cloned())?;
    let (worker_choice, worker_doc) = raw_choice(&universe, &doc.worker_choice, "worker_choice")?;
    let (firm_choice, firm_doc) = raw_choice(&universe, &doc.firm_choice, "firm_choice")?;
    let document =
        ProblemDocument::Raw(RawDocument { labels: doc.labels, worker_choice: worker_doc, firm_choice: firm_doc });
    Ok(Problem { document, universe, worker_choice, firm_choice, shape: Shape::Raw })
}
