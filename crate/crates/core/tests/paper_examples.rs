mod common;

use common::{schedule, section2, section4, triples, weekly};
use schedmatch::analysis::{enumerate_stable, find_blocker, is_stable, StabilityMethod};
use schedmatch::schedule::{build_market, compile_agent};
use schedmatch::solver::{enumerate_fixed_points, solve, SolveOptions, Style};
use schedmatch::{ContractSet, Side};

/// Column membership of a trace, as rows of `x`/` ` marks in universe order.
fn pattern(columns: &[ContractSet]) -> Vec<String> {
    let n = columns[0].universe().len();
    (0..n).map(|i| columns.iter().map(|c| if c.contains(i) { 'x' } else { ' ' }).collect()).collect()
}

fn trace_columns(out: &schedmatch::solver::SolveOutcome) -> Vec<ContractSet> {
    out.trace
        .entries
        .iter()
        .map(|e| e.worker_side.clone().or_else(|| e.firm_side.clone()).unwrap())
        .chain(std::iter::once(out.stable_set.clone()))
        .collect()
}

#[test]
fn job_market_worker_optimal_table() {
    let market = build_market(&section4()).unwrap();
    let out =
        solve(&market.worker_choice, &market.firm_choice, SolveOptions::new(Side::Worker, Style::Alternating)).unwrap();
    let expected = triples(market.universe(), &[(1, 1, 2), (1, 2, 1), (2, 2, 2), (2, 3, 1), (3, 1, 1), (3, 3, 2)]);
    assert_eq!(out.stable_set, expected);
    let labels: Vec<String> = out.trace.entries.iter().map(|e| e.label()).collect();
    assert_eq!(labels, ["X_0", "Y_1", "X_2", "Y_3", "X_4"]);
    // Columns X_0 Y_1 X_2 Y_3 X_4 S, rows (1,1,1) … (3,3,2).
    let table = [
        "xx x  ", "xxxxxx", "x xxxx", "x x x ", "x x x ", "x x x ", "x x x ", "x x x ", "xx x  ", "xxxxxx", "x xxxx",
        "x x x ", "x xxxx", "x x x ", "x x x ", "x x x ", "xx x  ", "xxxxxx",
    ];
    assert_eq!(pattern(&trace_columns(&out)), table);
    assert_eq!(out.trace.entries[2].worker_side, out.trace.entries[4].worker_side);
}

#[test]
fn job_market_firm_optimal_table() {
    let market = build_market(&section4()).unwrap();
    let out =
        solve(&market.worker_choice, &market.firm_choice, SolveOptions::new(Side::Firm, Style::Alternating)).unwrap();
    let expected = triples(market.universe(), &[(1, 2, 2), (1, 3, 1), (2, 1, 1), (2, 3, 2), (3, 1, 2), (3, 2, 1)]);
    assert_eq!(out.stable_set, expected);
    let labels: Vec<String> = out.trace.entries.iter().map(|e| e.label()).collect();
    assert_eq!(labels, ["Y_0", "X_1", "Y_2", "X_3", "Y_4"]);
    let table = [
        "x x x ", "x x x ", "x x x ", "xxxxxx", "x xxxx", "xx x  ", "x xxxx", "xx x  ", "x x x ", "x x x ", "x x x ",
        "xxxxxx", "x x x ", "xxxxxx", "x xxxx", "xx x  ", "x x x ", "x x x ",
    ];
    assert_eq!(pattern(&trace_columns(&out)), table);
}

#[test]
fn job_market_agents_compile_as_described() {
    let spec = compile_agent(&section4(), Side::Worker, "w1").unwrap();
    assert_eq!(spec.global_quota, 6);
    assert_eq!(spec.groups.iter().map(|g| g.quota).collect::<Vec<_>>(), [1, 1]);
    let first: Vec<&str> = spec.preference.iter().take(2).map(|&i| spec.universe.label(i)).collect();
    assert_eq!(first, ["(w1,f1,d1)", "(w1,f1,d2)"]);
}

#[test]
fn marriage_has_three_stable_matchings() {
    let market = build_market(&section2()).unwrap();
    let u = market.universe();
    let women_first = triples(u, &[(1, 1, 1), (2, 2, 1), (3, 3, 1)]);
    let men_first = triples(u, &[(1, 3, 1), (2, 1, 1), (3, 2, 1)]);
    let second = triples(u, &[(1, 2, 1), (2, 3, 1), (3, 1, 1)]);
    let (cw, cf) = (&market.worker_choice, &market.firm_choice);
    for method in [StabilityMethod::RevealingFast, StabilityMethod::ConsistentWitness, StabilityMethod::Definitional] {
        let mut stable = enumerate_stable(cw, cf, method).unwrap();
        stable.sort();
        let mut expected = vec![women_first.clone(), men_first.clone(), second.clone()];
        expected.sort();
        assert_eq!(stable, expected, "{method}");
    }
    for style in [Style::Pair, Style::Alternating] {
        assert_eq!(solve(cw, cf, SolveOptions::new(Side::Worker, style)).unwrap().stable_set, women_first);
        assert_eq!(solve(cw, cf, SolveOptions::new(Side::Firm, style)).unwrap().stable_set, men_first);
    }
    let points = enumerate_fixed_points(cw, cf).unwrap();
    assert_eq!(points.len(), 3);
    for (a, b) in &points {
        assert!(is_stable(cw, cf, &(a & b), StabilityMethod::RevealingFast).unwrap().is_stable());
    }
}

fn check_weekly(n: usize, worker: &[(&str, &str, &str)], firm: &[(&str, &str, &str)]) {
    let market = build_market(&weekly(n)).unwrap();
    assert_eq!(market.universe().len(), 84);
    let (cw, cf) = (&market.worker_choice, &market.firm_choice);
    for style in [Style::Alternating, Style::Pair] {
        let w = solve(cw, cf, SolveOptions::new(Side::Worker, style)).unwrap();
        let f = solve(cw, cf, SolveOptions::new(Side::Firm, style)).unwrap();
        assert_eq!(w.stable_set, schedule(&market, worker), "problem {n} worker side, {style}");
        assert_eq!(f.stable_set, schedule(&market, firm), "problem {n} firm side, {style}");
        assert!(is_stable(cw, cf, &w.stable_set, StabilityMethod::RevealingFast).unwrap().is_stable());
    }
}

#[test]
fn weekly_problem_1() {
    let s = [("w1", "f2", "1-4"), ("w2", "f1", "1-3"), ("w3", "f2", "2-3"), ("w4", "f2", "1-7")];
    check_weekly(1, &s, &s);
}

#[test]
fn weekly_problem_2() {
    let s = [("w1", "f2", "1-4"), ("w2", "f1", "1-3"), ("w3", "f2", "2-5"), ("w4", "f2", "1-7")];
    check_weekly(2, &s, &s);
}

#[test]
fn weekly_problem_3() {
    let s = [("w1", "f3", "1-4"), ("w2", "f1", "1-3"), ("w3", "f2", "2-3"), ("w4", "f2", "1,4-7"), ("w4", "f3", "2-3")];
    check_weekly(3, &s, &s);
}

#[test]
fn weekly_problem_4() {
    let common = [
        ("w1", "f3", "1"),
        ("w2", "f1", "1-2"),
        ("w2", "f2", "3"),
        ("w3", "f2", "2-3"),
        ("w4", "f2", "5-7"),
        ("w4", "f3", "1-4"),
    ];
    let mut worker = vec![("w1", "f2", "2-4")];
    worker.extend(common);
    // Both sides reach the same set, so it is the only stable schedule.
    check_weekly(4, &worker, &worker);
}

#[test]
fn weekly_problem_4_alternative_schedule_is_blocked() {
    // w1 working at f2 on days 5-7 instead of 2-4 is individually rational but
    // blocked: w1 ranks (f3,d2) above (f2,d7) and f3 has room.
    let market = build_market(&weekly(4)).unwrap();
    let (cw, cf) = (&market.worker_choice, &market.firm_choice);
    let s = schedule(
        &market,
        &[
            ("w1", "f2", "5-7"),
            ("w1", "f3", "1"),
            ("w2", "f1", "1-2"),
            ("w2", "f2", "3"),
            ("w3", "f2", "2-3"),
            ("w4", "f2", "5-7"),
            ("w4", "f3", "1-4"),
        ],
    );
    assert_eq!(cw.choose(&s).unwrap(), s);
    assert_eq!(cf.choose(&s).unwrap(), s);
    let blocker = find_blocker(cw, cf, &s).unwrap().unwrap();
    assert_eq!(market.universe().label(blocker), "(w1,f3,d2)");
}

#[test]
fn weekly_firm_with_sixty_contracts_compiles_without_groups() {
    let spec = compile_agent(&weekly(1), Side::Firm, "f3").unwrap();
    assert_eq!(spec.preference.len(), 20);
    assert_eq!(spec.global_quota, 20);
    assert!(spec.normalized().groups.is_empty());
}
