//! Paper instances built directly in Rust, plus small helpers.
#![allow(dead_code)]

use schedmatch::schedule::{AgentSpec, CompiledMarket, ScheduleProblem};
use schedmatch::{ContractSet, ContractUniverse};

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Spec from `(counterpart, day)` index pairs, 1-based.
fn agent(name: String, counterpart: &str, pairs: &[(usize, usize)]) -> AgentSpec {
    pairs.iter().fold(AgentSpec::new(name), |spec, &(c, d)| spec.prefer(format!("{counterpart}{c}"), format!("d{d}")))
}

/// `(i, j, k)` triples of a worker list, projected to `(j, k)`.
fn worker_pairs(triples: &[(usize, usize, usize)]) -> Vec<(usize, usize)> {
    triples.iter().map(|&(_, j, k)| (j, k)).collect()
}

fn firm_pairs(triples: &[(usize, usize, usize)]) -> Vec<(usize, usize)> {
    triples.iter().map(|&(i, _, k)| (i, k)).collect()
}

/// The marriage instance: one day, every quota 1.
pub fn section2() -> ScheduleProblem {
    let worker_rankings = [[1, 2, 3], [2, 3, 1], [3, 1, 2]];
    let firm_rankings = [[2, 3, 1], [3, 1, 2], [1, 2, 3]];
    let spec = |name: String, kind: &str, ranking: &[usize; 3]| {
        let pairs: Vec<_> = ranking.iter().map(|&c| (c, 1)).collect();
        agent(name, kind, &pairs).with_quota(1)
    };
    ScheduleProblem {
        workers: names("w", 3),
        firms: names("f", 3),
        days: names("d", 1),
        worker_specs: (0..3).map(|i| spec(format!("w{}", i + 1), "f", &worker_rankings[i])).collect(),
        firm_specs: (0..3).map(|j| spec(format!("f{}", j + 1), "w", &firm_rankings[j])).collect(),
        contracts: None,
    }
}

/// The three-worker, three-firm, two-day job market.
pub fn section4() -> ScheduleProblem {
    let worker_lists: [&[(usize, usize, usize)]; 3] = [
        &[(1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2), (1, 3, 1), (1, 3, 2)],
        &[(2, 2, 1), (2, 2, 2), (2, 3, 1), (2, 3, 2), (2, 1, 1), (2, 1, 2)],
        &[(3, 3, 1), (3, 3, 2), (3, 1, 1), (3, 1, 2), (3, 2, 1), (3, 2, 2)],
    ];
    // f1 ranks w2 > w3 > w1, preferring day 2.
    let firm_lists: [&[(usize, usize, usize)]; 3] = [
        &[(2, 1, 2), (2, 1, 1), (3, 1, 2), (3, 1, 1), (1, 1, 2), (1, 1, 1)],
        &[(3, 2, 2), (3, 2, 1), (1, 2, 2), (1, 2, 1), (2, 2, 2), (2, 2, 1)],
        &[(1, 3, 2), (1, 3, 1), (2, 3, 2), (2, 3, 1), (3, 3, 2), (3, 3, 1)],
    ];
    let worker_specs = (0..3)
        .map(|i| {
            agent(format!("w{}", i + 1), "f", &worker_pairs(worker_lists[i]))
                .with_quota(6)
                .with_day_quota("d1", 1)
                .with_day_quota("d2", 1)
        })
        .collect();
    let firm_specs = (0..3)
        .map(|j| {
            (1..=3).fold(agent(format!("f{}", j + 1), "w", &firm_pairs(firm_lists[j])).with_quota(2), |spec, i| {
                spec.with_counterpart_quota(format!("w{i}"), 1)
            })
        })
        .collect();
    ScheduleProblem {
        workers: names("w", 3),
        firms: names("f", 3),
        days: names("d", 2),
        worker_specs,
        firm_specs,
        contracts: None,
    }
}

/// `(firm, day)` pairs where every firm in `firms` is tried for each day in turn.
fn interleaved(firms: &[usize], days: impl IntoIterator<Item = usize>) -> Vec<(usize, usize)> {
    days.into_iter().flat_map(|d| firms.iter().map(move |&f| (f, d))).collect()
}

/// Each counterpart in turn, with its days in the given order.
fn blocks(order: &[usize], days: &[usize]) -> Vec<(usize, usize)> {
    order.iter().flat_map(|&c| days.iter().map(move |&d| (c, d))).collect()
}

/// The seven-day problems of the larger examples; `n` in 1..=4.
pub fn weekly(n: usize) -> ScheduleProblem {
    let week: Vec<usize> = (1..=7).collect();
    let w1 = interleaved(&[2, 3], 1..=7);
    let w2 = blocks(&[1, 2, 3], &week);
    let mut w3 = vec![(2, 2), (2, 3), (3, 2), (3, 3), (1, 2), (1, 3)];
    w3.extend([(2, 4), (2, 5), (2, 6), (1, 4), (1, 5), (1, 6), (3, 6), (3, 4), (3, 5)]);
    let w4 = blocks(&[1, 2, 3], &week);
    let f1 = blocks(&[1, 2, 3], &[1, 2, 3, 4, 5, 6]);
    let f2 = blocks(&[3, 4, 1, 2], &[7, 6, 5, 4, 3, 2, 1]);
    let f3 = blocks(&[4, 3, 2, 1], &[1, 2, 3, 4, 5]);

    let days_quota = |spec: AgentSpec| (1..=7).fold(spec, |spec, k| spec.with_day_quota(format!("d{k}"), 1));
    let w3_quota = if n == 2 { 4 } else { 2 };
    let worker_specs = vec![
        days_quota(agent("w1".into(), "f", &w1).with_quota(4)),
        days_quota(agent("w2".into(), "f", &w2).with_quota(3)),
        days_quota(agent("w3".into(), "f", &w3).with_quota(w3_quota)),
        days_quota(agent("w4".into(), "f", &w4).with_quota(7)),
    ];
    let mut f1 = agent("f1".into(), "w", &f1).with_quota(24);
    let mut f2 = agent("f2".into(), "w", &f2).with_quota(28);
    let f3 = agent("f3".into(), "w", &f3).with_quota(20);
    if n == 3 {
        f2 = days_quota(f2);
    }
    if n == 4 {
        f1 = (1..=4).fold(f1, |spec, i| spec.with_counterpart_quota(format!("w{i}"), 2));
        f2 = f2.with_counterpart_quota("w1", 3).with_counterpart_quota("w4", 3);
    }
    ScheduleProblem {
        workers: names("w", 4),
        firms: names("f", 3),
        days: names("d", 7),
        worker_specs,
        firm_specs: vec![f1, f2, f3],
        contracts: None,
    }
}

/// Set from `(i, j, k)` index triples.
pub fn triples(universe: &ContractUniverse, items: &[(usize, usize, usize)]) -> ContractSet {
    ContractSet::from_labels(universe, items.iter().map(|(i, j, k)| format!("(w{i},f{j},d{k})"))).unwrap()
}

/// Set from schedule entries like `("w4", "f2", "1,4-7")`.
pub fn schedule(market: &CompiledMarket, entries: &[(&str, &str, &str)]) -> ContractSet {
    let mut labels = Vec::new();
    for (w, f, days) in entries {
        for part in days.split(',') {
            let (lo, hi) = match part.split_once('-') {
                Some((lo, hi)) => (lo.parse::<usize>().unwrap(), hi.parse::<usize>().unwrap()),
                None => (part.parse().unwrap(), part.parse().unwrap()),
            };
            labels.extend((lo..=hi).map(|d| format!("({w},{f},d{d})")));
        }
    }
    ContractSet::from_labels(market.universe(), labels).unwrap()
}

use schedmatch::choicemaps::{build_table_choice, TableChoiceSpec};
use schedmatch::ChoiceFunction;

/// Universe of one-letter labels, e.g. `letters("abc")`.
pub fn letters(s: &str) -> ContractUniverse {
    schedmatch::make_universe(s.chars().map(String::from)).unwrap()
}

/// Set of one-letter labels.
pub fn set(u: &ContractUniverse, s: &str) -> ContractSet {
    ContractSet::from_labels(u, s.chars().map(String::from)).unwrap()
}

/// Table map with `rows[mask]` the chosen letters for the subset with that mask.
pub fn table(u: &ContractUniverse, rows: &[&str]) -> ChoiceFunction {
    let mut spec = TableChoiceSpec::new(u).unwrap();
    for (mask, row) in rows.iter().enumerate() {
        spec.insert(&ContractSet::from_mask(u, mask as u64), set(u, row)).unwrap();
    }
    build_table_choice(&spec).unwrap()
}

/// The four two-point maps C_1 … C_4, rows in mask order ∅, {a}, {b}, {a,b}.
pub fn two_point_maps() -> (ContractUniverse, [ChoiceFunction; 4]) {
    let u = letters("ab");
    let maps = [
        table(&u, &["", "a", "b", "a"]),
        table(&u, &["", "", "b", ""]),
        table(&u, &["", "", "", "ab"]),
        table(&u, &["", "", "", "a"]),
    ];
    (u, maps)
}

/// C_5 on {a,b,c}: C({a}) = ∅, C(X) = {b}, identity otherwise.
pub fn idempotent_three_point() -> (ContractUniverse, ChoiceFunction) {
    let u = letters("abc");
    let c = table(&u, &["", "", "b", "ab", "c", "ac", "bc", "b"]);
    (u, c)
}
