//! Text, CSV and JSON output.

use std::fmt::Write as _;

use serde_json::{json, Value};

use schedmatch::analysis::{Instability, Property, PropertyReport, StabilityVerdict, Verdict};
use schedmatch::schedule::{interpret_hours, HoursTable};
use schedmatch::solver::SolveOutcome;
use schedmatch::{ContractSet, Side};

use crate::problem::{Problem, Shape};

/// Column headings that identify a contract.
fn key_headers(problem: &Problem) -> Vec<&'static str> {
    match problem.shape {
        Shape::Schedule(_) => vec!["worker", "firm", "day"],
        Shape::Hours(..) => vec!["worker", "firm", "hour"],
        Shape::Raw => vec!["contract"],
    }
}

fn key_cells(problem: &Problem, index: usize) -> Vec<String> {
    match problem.market() {
        Some(m) => {
            let (w, f, d) = m.names(index);
            vec![w.to_string(), f.to_string(), d.to_string()]
        }
        None => vec![problem.universe.label(index).to_string()],
    }
}

/// Index of the worker of a contract, used to draw rules between workers.
fn group_of(problem: &Problem, index: usize) -> Option<usize> {
    problem.market().map(|m| m.key(index).worker)
}

/// The iterates as labelled columns, followed by `S`.
fn trace_columns(outcome: &SolveOutcome) -> Vec<(String, &ContractSet)> {
    let mut columns = Vec::new();
    for entry in &outcome.trace.entries {
        if let Some(x) = &entry.worker_side {
            columns.push((format!("X_{}", entry.step), x));
        }
        if let Some(y) = &entry.firm_side {
            columns.push((format!("Y_{}", entry.step), y));
        }
    }
    columns.push(("S".to_string(), &outcome.stable_set));
    columns
}

fn centered(text: &str, width: usize) -> String {
    format!("{text:^width$}")
}

/// One row per contract, one column per iterate, `x` for membership.
pub fn trace_table(problem: &Problem, outcome: &SolveOutcome) -> String {
    let headers = key_headers(problem);
    let columns = trace_columns(outcome);
    let n = problem.universe.len();
    let keys: Vec<Vec<String>> = (0..n).map(|i| key_cells(problem, i)).collect();
    let key_widths: Vec<usize> =
        (0..headers.len()).map(|c| keys.iter().map(|k| k[c].len()).chain([headers[c].len()]).max().unwrap()).collect();
    let iterate_widths: Vec<usize> = columns.iter().map(|(label, _)| label.len()).collect();

    let line = |keys: Vec<String>, marks: Vec<String>| {
        let left: Vec<String> = keys.iter().zip(&key_widths).map(|(k, &w)| format!("{k:<w$}")).collect();
        let (iterates, last) = marks.split_at(marks.len() - 1);
        let mid: Vec<String> = iterates.iter().zip(&iterate_widths).map(|(m, &w)| centered(m, w)).collect();
        let text = format!(
            "{} | {} | {}",
            left.join("  "),
            mid.join("  "),
            centered(&last[0], iterate_widths[marks.len() - 1])
        );
        text.trim_end().to_string()
    };
    let header =
        line(headers.iter().map(|h| h.to_string()).collect(), columns.iter().map(|(label, _)| label.clone()).collect());
    let rule = |fill: char| -> String { header.chars().map(|c| if c == '|' { '+' } else { fill }).collect() };

    let mut out = String::new();
    writeln!(out, "{header}").unwrap();
    writeln!(out, "{}", rule('=')).unwrap();
    for (i, key) in keys.into_iter().enumerate() {
        if i > 0 && group_of(problem, i) != group_of(problem, i - 1) {
            writeln!(out, "{}", rule('-')).unwrap();
        }
        let marks = columns.iter().map(|(_, set)| if set.contains(i) { "x" } else { "" }.to_string()).collect();
        writeln!(out, "{}", line(key, marks)).unwrap();
    }
    out
}

fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// The trace table as CSV.
pub fn trace_csv(problem: &Problem, outcome: &SolveOutcome) -> String {
    let columns = trace_columns(outcome);
    let mut out = String::new();
    let header: Vec<String> =
        key_headers(problem).into_iter().map(String::from).chain(columns.iter().map(|(l, _)| l.clone())).collect();
    writeln!(out, "{}", header.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(",")).unwrap();
    for i in 0..problem.universe.len() {
        let row: Vec<String> = key_cells(problem, i)
            .into_iter()
            .chain(columns.iter().map(|(_, set)| if set.contains(i) { "x" } else { "" }.to_string()))
            .collect();
        writeln!(out, "{}", row.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")).unwrap();
    }
    out
}

fn labels(set: &ContractSet) -> Value {
    json!(set.labels())
}

/// Machine-readable solve outcome, trace included.
pub fn outcome_json(problem: &Problem, outcome: &SolveOutcome) -> Value {
    let trace: Vec<Value> = trace_columns(outcome)
        .iter()
        .rev()
        .skip(1)
        .rev()
        .map(|(label, set)| json!({"label": label, "set": labels(set)}))
        .collect();
    let mut value = json!({
        "side": outcome.side.name(),
        "style": outcome.style.name(),
        "iterations": outcome.iterations,
        "assurance": outcome.assurance.to_string(),
        "stable_guaranteed": outcome.assurance.is_stable_guaranteed(),
        "stable_set": labels(&outcome.stable_set),
        "worker_witness": labels(&outcome.worker_witness),
        "firm_witness": labels(&outcome.firm_witness),
        "trace": trace,
    });
    if let Some(table) = hours_table(problem, &outcome.stable_set) {
        value["hours"] =
            table.entries.iter().map(|e| json!({"worker": e.worker, "firm": e.firm, "hours": e.hours})).collect();
        value["warnings"] = json!(table.warnings);
    }
    value
}

pub fn hours_table(problem: &Problem, set: &ContractSet) -> Option<HoursTable> {
    match &problem.shape {
        Shape::Hours(enc, _) => Some(interpret_hours(set, enc).expect("the set belongs to the problem")),
        _ => None,
    }
}

/// `d1-d3, d5` style list of day indices.
fn day_runs(days: &[String], indices: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut k = 0;
    while k < indices.len() {
        let start = k;
        while k + 1 < indices.len() && indices[k + 1] == indices[k] + 1 {
            k += 1;
        }
        if k == start {
            parts.push(days[indices[start]].clone());
        } else {
            parts.push(format!("{}-{}", days[indices[start]], days[indices[k]]));
        }
        k += 1;
    }
    parts.join(", ")
}

/// Contracts of a schedule grouped by (worker, firm).
pub fn schedule_listing(problem: &Problem, set: &ContractSet) -> Option<String> {
    let Shape::Schedule(market) = &problem.shape else { return None };
    let mut rows: Vec<(String, String, String)> = Vec::new();
    let mut current: Option<(usize, usize, Vec<usize>)> = None;
    let mut flush = |current: &mut Option<(usize, usize, Vec<usize>)>| {
        if let Some((w, f, days)) = current.take() {
            rows.push((market.workers[w].clone(), market.firms[f].clone(), day_runs(&market.days, &days)));
        }
    };
    for i in set.iter() {
        let k = market.key(i);
        match &mut current {
            Some((w, f, days)) if *w == k.worker && *f == k.firm => days.push(k.day),
            _ => {
                flush(&mut current);
                current = Some((k.worker, k.firm, vec![k.day]));
            }
        }
    }
    flush(&mut current);
    let ww = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max("worker".len());
    let fw = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max("firm".len());
    let mut out = String::new();
    writeln!(out, "{:<ww$}  {:<fw$}  days", "worker", "firm").unwrap();
    for (w, f, d) in rows {
        writeln!(out, "{w:<ww$}  {f:<fw$}  {d}").unwrap();
    }
    Some(out)
}

/// Human-readable solve outcome.
pub fn outcome_text(problem: &Problem, outcome: &SolveOutcome) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{}-optimal stable set ({} style, {} iteration{})",
        outcome.side,
        outcome.style,
        outcome.iterations,
        if outcome.iterations == 1 { "" } else { "s" }
    )
    .unwrap();
    writeln!(out, "assurance: {}", outcome.assurance).unwrap();
    writeln!(out, "S = {} ({} contracts)", outcome.stable_set, outcome.stable_set.len()).unwrap();
    if let Some(listing) = schedule_listing(problem, &outcome.stable_set) {
        out.push_str(&listing);
    }
    if let Some(table) = hours_table(problem, &outcome.stable_set) {
        write!(out, "{table}").unwrap();
    }
    out
}

fn reason_text(problem: &Problem, reason: &Instability) -> String {
    match reason {
        Instability::NotIndividuallyRational(side) => {
            format!("not individually rational: the {side} map rejects part of S")
        }
        Instability::Blocked(x) => format!("blocked by {}", problem.universe.label(*x)),
        Instability::NoWitnessCover => "no pair of witnesses covers all contracts".to_string(),
    }
}

pub fn verdict_text(problem: &Problem, set: &ContractSet, verdict: &StabilityVerdict) -> String {
    let mut out = String::new();
    writeln!(out, "S = {set}").unwrap();
    match verdict {
        StabilityVerdict::Stable { method, worker_witness, firm_witness } => {
            writeln!(out, "stable ({method})").unwrap();
            writeln!(out, "worker witness: {worker_witness}").unwrap();
            writeln!(out, "firm witness:   {firm_witness}").unwrap();
        }
        StabilityVerdict::Unstable { method, reason } => {
            writeln!(out, "unstable ({method}): {}", reason_text(problem, reason)).unwrap();
        }
    }
    out
}

pub fn verdict_json(problem: &Problem, set: &ContractSet, verdict: &StabilityVerdict) -> Value {
    match verdict {
        StabilityVerdict::Stable { method, worker_witness, firm_witness } => json!({
            "set": labels(set),
            "stable": true,
            "method": method.name(),
            "worker_witness": labels(worker_witness),
            "firm_witness": labels(firm_witness),
        }),
        StabilityVerdict::Unstable { method, reason } => {
            let mut value = json!({
                "set": labels(set),
                "stable": false,
                "method": method.name(),
                "reason": reason_text(problem, reason),
            });
            if let Instability::Blocked(x) = reason {
                value["blocker"] = json!(problem.universe.label(*x));
            }
            value
        }
    }
}

pub fn report_text(side: Side, report: &PropertyReport) -> String {
    format!("{side} choice map\n{report}")
}

pub fn report_json(side: Side, report: &PropertyReport) -> Value {
    let mut properties = serde_json::Map::new();
    for property in Property::ALL {
        let verdict = report.verdict(property);
        let (state, witness) = match verdict {
            Verdict::Holds => ("holds", None),
            Verdict::HoldsSampled => ("holds-sampled", None),
            Verdict::Fails(w) => ("fails", Some(w.to_string())),
            Verdict::NotEvaluated => ("not-evaluated", None),
        };
        properties.insert(property.name().to_string(), json!({"verdict": state, "witness": witness}));
    }
    json!({"map": side.name(), "properties": properties})
}

pub fn stable_sets_text(problem: &Problem, sets: &[ContractSet], method: &str) -> String {
    let mut out = String::new();
    writeln!(out, "{} stable set{} ({method})", sets.len(), if sets.len() == 1 { "" } else { "s" }).unwrap();
    for (k, s) in sets.iter().enumerate() {
        writeln!(out, "{}. {s}", k + 1).unwrap();
        if let Some(listing) = schedule_listing(problem, s) {
            for line in listing.lines() {
                writeln!(out, "   {line}").unwrap();
            }
        }
    }
    out
}

pub fn stable_sets_json(sets: &[ContractSet], method: &str) -> Value {
    json!({"method": method, "count": sets.len(), "stable_sets": sets.iter().map(labels).collect::<Vec<_>>()})
}
