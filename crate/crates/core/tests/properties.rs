mod common;

use proptest::prelude::*;
use proptest::test_runner::Config;

use common::{letters, table};
use schedmatch::analysis::{classify, enumerate_stable, is_stable, verify_witnesses, Budget, StabilityMethod};
use schedmatch::choicemaps::{build_quota_choice, combine_partition, quota_choose, QuotaChoiceSpec};
use schedmatch::masks::full_mask;
use schedmatch::schedule::{
    build_market, expand_hours, interpret_hours, AgentSpec, HoursAgent, HoursEncoding, ScheduleProblem,
};
use schedmatch::solver::{enumerate_fixed_points, pair_le, solve, step, SolveOptions, Style};
use schedmatch::{make_universe, ChoiceFunction, ContractSet, ContractUniverse, Side};

// ---- independent oracles over tabulated maps -------------------------------

fn tabulate(c: &ChoiceFunction) -> Vec<u64> {
    let u = c.universe();
    (0..1u64 << u.len()).map(|m| c.choose(&ContractSet::from_mask(u, m)).unwrap().to_mask().unwrap()).collect()
}

fn sub(a: u64, b: u64) -> bool {
    a & !b == 0
}

fn pairs(n: usize) -> impl Iterator<Item = (u64, u64)> {
    let count = 1u64 << n;
    (0..count).flat_map(move |a| (0..count).map(move |b| (a, b)))
}

fn revealing(t: &[u64], n: usize) -> bool {
    pairs(n).all(|(a, b)| !sub(t[a as usize], b) || sub(a & t[b as usize], t[a as usize]))
}

fn consistent(t: &[u64], n: usize) -> bool {
    pairs(n).all(|(a, b)| !(sub(t[a as usize], b) && sub(b, a)) || t[b as usize] == t[a as usize])
}

fn persistent(t: &[u64], n: usize) -> bool {
    pairs(n).all(|(a, b)| !sub(a, b) || sub(a & t[b as usize], t[a as usize]))
}

fn idempotent(t: &[u64]) -> bool {
    t.iter().all(|&c| t[c as usize] == c)
}

fn rejection_monotone(t: &[u64], n: usize) -> bool {
    pairs(n).all(|(a, b)| !sub(a, b) || sub(a & !t[a as usize], b & !t[b as usize]))
}

fn oracle(c: &ChoiceFunction) -> [bool; 5] {
    let n = c.universe().len();
    let t = tabulate(c);
    [revealing(&t, n), consistent(&t, n), persistent(&t, n), idempotent(&t), rejection_monotone(&t, n)]
}

fn classified(c: &ChoiceFunction) -> [bool; 5] {
    let r = classify(c, Budget::Exhaustive).unwrap();
    [
        r.is_revealing.holds(),
        r.is_consistent.holds(),
        r.is_persistent.holds(),
        r.is_idempotent.holds(),
        r.rejection_monotone.holds(),
    ]
}

/// Lexicographically greatest feasible subset of `A ∩ Y` by brute force;
/// the greedy scan must find it since feasibility is closed under subsets.
fn quota_oracle(spec: &QuotaChoiceSpec, offered: u64) -> u64 {
    let y: u64 = spec.preference.iter().fold(0, |m, &i| m | 1 << i);
    let rank = |set: u64| -> Vec<bool> { spec.preference.iter().map(|&i| set >> i & 1 == 1).collect() };
    let groups: Vec<(u64, usize)> = spec.groups.iter().map(|g| (g.members.to_mask().unwrap(), g.quota)).collect();
    let mut best: Option<u64> = None;
    let avail = offered & y;
    let mut s = avail;
    loop {
        let feasible = (s.count_ones() as usize) <= spec.global_quota
            && groups.iter().all(|&(g, q)| ((s & g).count_ones() as usize) <= q);
        if feasible && best.is_none_or(|b| rank(s) > rank(b)) {
            best = Some(s);
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & avail;
    }
    best.unwrap()
}

// ---- generators -------------------------------------------------------------

fn universe(n: usize) -> ContractUniverse {
    make_universe((0..n).map(|i| format!("x{i}"))).unwrap()
}

/// Random quota spec over `n` contracts. With `disjoint`, groups are blocks of a
/// random labelling; otherwise groups are arbitrary subsets.
fn quota_spec(n: usize, disjoint: bool) -> impl Strategy<Value = QuotaChoiceSpec> {
    let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
    (perm, 0..=n, 0..=n + 1, proptest::collection::vec((0..4usize, 0u64..1 << n, 0..=3usize), 0..4)).prop_map(
        move |(perm, y_len, q, raw_groups)| {
            let u = universe(n);
            let preference = perm[..y_len].to_vec();
            let mut spec = QuotaChoiceSpec::new(&u, preference).with_quota(q);
            for (label, mask, quota) in raw_groups {
                let members = if disjoint {
                    // Group `label` holds the contracts whose index is ≡ label (mod 4).
                    ContractSet::from_indices(&u, (0..n).filter(|i| i % 4 == label)).unwrap()
                } else {
                    ContractSet::from_mask(&u, mask)
                };
                if disjoint && spec.groups.iter().any(|g| g.members == members) {
                    continue;
                }
                spec = spec.with_group(members, quota);
            }
            spec
        },
    )
}

/// A random two-sided market on up to `max` contracts: each contract gets a
/// worker and a firm, each agent a random quota map on its block.
#[derive(Clone, Debug)]
struct Instance {
    n: usize,
    worker_of: Vec<usize>,
    firm_of: Vec<usize>,
    worker_prefs: Vec<Vec<usize>>,
    firm_prefs: Vec<Vec<usize>>,
    quotas: Vec<usize>,
    day_of: Vec<usize>,
}

fn instance(max: usize) -> impl Strategy<Value = Instance> {
    (1..=max).prop_flat_map(|n| {
        (
            proptest::collection::vec(0..3usize, n),
            proptest::collection::vec(0..3usize, n),
            proptest::collection::vec(0..2usize, n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(0..4usize, 6),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(worker_of, firm_of, day_of, wp, fp, quotas, drop)| {
                // Preferences: the shuffled order restricted to the block, minus a few
                // unacceptable contracts.
                let prefs = |owner: &[usize], order: &[usize], agents: usize, offset: usize| {
                    (0..agents)
                        .map(|a| {
                            order.iter().copied().filter(|&i| owner[i] == a && !(drop[i] && i % 3 == offset)).collect()
                        })
                        .collect::<Vec<Vec<usize>>>()
                };
                Instance {
                    n,
                    worker_prefs: prefs(&worker_of, &wp, 3, 0),
                    firm_prefs: prefs(&firm_of, &fp, 3, 1),
                    worker_of,
                    firm_of,
                    quotas,
                    day_of,
                }
            })
    })
}

impl Instance {
    fn maps(&self) -> (ChoiceFunction, ChoiceFunction) {
        let u = universe(self.n);
        let side = |owner: &[usize], prefs: &[Vec<usize>], quota_offset: usize| {
            let children = (0..3)
                .map(|a| {
                    let block = ContractSet::from_indices(&u, (0..self.n).filter(|&i| owner[i] == a)).unwrap();
                    let mut spec =
                        QuotaChoiceSpec::new(&u, prefs[a].clone()).with_quota(self.quotas[quota_offset + a].max(1));
                    // Per-day sub-quota of 1 inside the block; day groups are disjoint.
                    for day in 0..2 {
                        let members =
                            ContractSet::from_indices(&u, block.iter().filter(|&i| self.day_of[i] == day)).unwrap();
                        if (a + day) % 2 == 0 {
                            spec = spec.with_group(members, 1);
                        }
                    }
                    (block, build_quota_choice(&spec, false).unwrap())
                })
                .collect();
            combine_partition(&u, children).unwrap()
        };
        (side(&self.worker_of, &self.worker_prefs, 0), side(&self.firm_of, &self.firm_prefs, 3))
    }
}

fn any_table(n: usize) -> impl Strategy<Value = ChoiceFunction> {
    let count = 1usize << n;
    proptest::collection::vec(any::<u64>(), count).prop_map(move |raw| {
        let u = letters(&"abcdef"[..n]);
        let rows: Vec<String> = raw
            .iter()
            .enumerate()
            .map(|(mask, r)| {
                let chosen = (mask as u64) & r;
                (0..n).filter(|i| chosen >> i & 1 == 1).map(|i| (b'a' + i as u8) as char).collect()
            })
            .collect();
        let rows: Vec<&str> = rows.iter().map(String::as_str).collect();
        table(&u, &rows)
    })
}

// ---- classifier -------------------------------------------------------------

#[test]
fn classifier_matches_oracle_on_every_two_point_map() {
    let u = letters("ab");
    for a in ["", "a"] {
        for b in ["", "b"] {
            for ab in ["", "a", "b", "ab"] {
                let c = table(&u, &["", a, b, ab]);
                let o = oracle(&c);
                assert_eq!(classified(&c), o);
                let [r, con, p, i, m] = o;
                assert_eq!(r, con && p);
                assert_eq!(p, m);
                assert!(!(con || p) || i);
            }
        }
    }
}

proptest! {
    #![proptest_config(Config::with_cases(300))]

    #[test]
    fn classifier_matches_oracle_on_three_points(c in any_table(3)) {
        let o = oracle(&c);
        prop_assert_eq!(classified(&c), o);
        let [r, con, p, i, m] = o;
        prop_assert_eq!(r, con && p);
        prop_assert_eq!(p, m);
        prop_assert!(!(con || p) || i);
    }

    #[test]
    fn sampled_classification_never_contradicts_exhaustive(c in any_table(4), seed in any::<u64>()) {
        let exact = classify(&c, Budget::Exhaustive).unwrap();
        let sampled = schedmatch::analysis::classify_sampled(&c, 64, seed).unwrap();
        for property in schedmatch::analysis::Property::ALL {
            let v = sampled.verdict(property);
            if let Some(w) = v.witness() {
                prop_assert!(property.replay(&c, w).unwrap());
                prop_assert!(exact.verdict(property).fails());
            }
        }
    }

    // ---- quota maps ---------------------------------------------------------

    #[test]
    fn greedy_is_the_best_feasible_subset(spec in (1..=7usize).prop_flat_map(|n| quota_spec(n, false))) {
        let n = spec.universe.len();
        for offered in 0..1u64 << n {
            let a = ContractSet::from_mask(&spec.universe, offered);
            let chosen = quota_choose(&spec, &a, true).unwrap().to_mask().unwrap();
            prop_assert_eq!(chosen, quota_oracle(&spec, offered));
        }
    }

    #[test]
    fn disjoint_quota_maps_are_revealing(spec in (1..=8usize).prop_flat_map(|n| quota_spec(n, true))) {
        let c = build_quota_choice(&spec, false).unwrap();
        prop_assert!(c.guarantee().is_revealing());
        let t = tabulate(&c);
        prop_assert!(revealing(&t, spec.universe.len()));
    }

    #[test]
    fn overlapping_quota_maps_are_consistent(spec in (1..=7usize).prop_flat_map(|n| quota_spec(n, false))) {
        let c = build_quota_choice(&spec, true).unwrap();
        let t = tabulate(&c);
        prop_assert!(consistent(&t, spec.universe.len()));
        prop_assert!(idempotent(&t));
    }

    #[test]
    fn quota_bounds_hold(spec in (1..=8usize).prop_flat_map(|n| quota_spec(n, false)), offered in any::<u64>()) {
        let n = spec.universe.len();
        let a = ContractSet::from_mask(&spec.universe, offered & full_mask(n));
        let chosen = quota_choose(&spec, &a, true).unwrap();
        prop_assert!(chosen.subset_of(&(&a & &spec.acceptable())));
        prop_assert!(chosen.len() <= spec.global_quota);
        for g in &spec.groups {
            prop_assert!((&chosen & &g.members).len() <= g.quota);
        }
        let steps = spec.choose_steps(&a);
        prop_assert!(steps.windows(2).all(|w| w[0].subset_of(&w[1])));
    }

    #[test]
    fn normalization_keeps_the_map(spec in (1..=7usize).prop_flat_map(|n| quota_spec(n, false))) {
        let normalized = spec.normalized();
        for a in spec.universe.subsets() {
            prop_assert_eq!(quota_choose(&spec, &a, true).unwrap(), quota_choose(&normalized, &a, true).unwrap());
        }
    }
}

// ---- stability and the solver -------------------------------------------------

proptest! {
    #![proptest_config(Config::with_cases(120))]

    #[test]
    fn solver_output_is_stable_and_methods_agree(inst in instance(8)) {
        let (cw, cf) = inst.maps();
        let methods = [StabilityMethod::Definitional, StabilityMethod::ConsistentWitness, StabilityMethod::RevealingFast];
        let mut results = Vec::new();
        for side in [Side::Worker, Side::Firm] {
            let pair = solve(&cw, &cf, SolveOptions::new(side, Style::Pair)).unwrap();
            let alt = solve(&cw, &cf, SolveOptions::new(side, Style::Alternating)).unwrap();
            prop_assert_eq!(&pair.stable_set, &alt.stable_set);
            prop_assert!(pair.trace.entries.len() <= 2 * inst.n + 2);
            for out in [&pair, &alt] {
                prop_assert_eq!(&(&out.worker_witness & &out.firm_witness), &out.stable_set);
                prop_assert!((&out.worker_witness | &out.firm_witness).complement().is_empty());
                prop_assert_eq!(cw.choose(&out.worker_witness).unwrap(), out.stable_set.clone());
                prop_assert_eq!(cf.choose(&out.firm_witness).unwrap(), out.stable_set.clone());
                prop_assert!(verify_witnesses(&cw, &cf, &out.stable_set, &out.worker_witness, &out.firm_witness).unwrap());
            }
            for method in methods {
                prop_assert!(is_stable(&cw, &cf, &pair.stable_set, method).unwrap().is_stable());
            }
            results.push(pair);
        }
        for s in cw.universe().subsets() {
            let verdicts: Vec<_> = methods.iter().map(|&m| is_stable(&cw, &cf, &s, m).unwrap()).collect();
            prop_assert!(verdicts.iter().all(|v| v.is_stable() == verdicts[0].is_stable()), "{}", s);
            for v in &verdicts {
                if let Some((sw, sf)) = v.witnesses() {
                    prop_assert!(verify_witnesses(&cw, &cf, &s, sw, sf).unwrap());
                }
            }
        }
        // Extremality among fixed points.
        let points = enumerate_fixed_points(&cw, &cf).unwrap();
        let top = (&results[0].worker_witness, &results[0].firm_witness);
        let bottom = (&results[1].worker_witness, &results[1].firm_witness);
        prop_assert!(points.iter().any(|(a, b)| (a, b) == top));
        prop_assert!(points.iter().any(|(a, b)| (a, b) == bottom));
        for (a, b) in &points {
            prop_assert!(pair_le((a, b), top).unwrap());
            prop_assert!(pair_le(bottom, (a, b)).unwrap());
        }
        let stable = enumerate_stable(&cw, &cf, StabilityMethod::RevealingFast).unwrap();
        let mut from_points: Vec<ContractSet> = points.iter().map(|(a, b)| a & b).collect();
        from_points.sort();
        from_points.dedup();
        prop_assert_eq!(stable, from_points);
    }

    #[test]
    fn step_is_monotone(inst in instance(7), masks in proptest::collection::vec(any::<u64>(), 4)) {
        let (cw, cf) = inst.maps();
        let u = cw.universe();
        let full = full_mask(inst.n);
        let a = ContractSet::from_mask(u, masks[0] & masks[1] & full);
        let a2 = ContractSet::from_mask(u, masks[0] & full);
        let b2 = ContractSet::from_mask(u, masks[2] & masks[3] & full);
        let b = ContractSet::from_mask(u, masks[2] & full);
        let lo = step(&cw, &cf, &a, &b).unwrap();
        let hi = step(&cw, &cf, &a2, &b2).unwrap();
        prop_assert!(pair_le((&a, &b), (&a2, &b2)).unwrap());
        prop_assert!(pair_le((&lo.0, &lo.1), (&hi.0, &hi.1)).unwrap());
    }

    #[test]
    fn fixed_points_are_characterized(cw in any_table(3), cf in any_table(3)) {
        let u = cw.universe().clone();
        let cf = rebase(&cf, &u);
        let x = u.full_set();
        let mut found = Vec::new();
        for a in u.subsets() {
            for b in u.subsets() {
                let fixed = step(&cw, &cf, &a, &b).unwrap() == (a.clone(), b.clone());
                let ab = &a & &b;
                let characterized = (&a | &b) == x && cw.choose(&a).unwrap() == ab && cf.choose(&b).unwrap() == ab;
                prop_assert_eq!(fixed, characterized);
                if fixed {
                    found.push((a.clone(), b.clone()));
                }
            }
        }
        prop_assert_eq!(found, enumerate_fixed_points(&cw, &cf).unwrap());
    }

    #[test]
    fn witness_check_matches_definition_for_consistent_maps(
        sw in quota_spec(4, false),
        sf in quota_spec(4, false),
    ) {
        // Overlapping quota groups give consistent maps that need not be
        // persistent, so only the consistent-witness check applies.
        let cw = build_quota_choice(&sw, true).unwrap();
        let cf = rebase(&build_quota_choice(&sf, true).unwrap(), cw.universe());
        for s in cw.universe().subsets() {
            let definitional = is_stable(&cw, &cf, &s, StabilityMethod::Definitional).unwrap();
            let witness = is_stable(&cw, &cf, &s, StabilityMethod::ConsistentWitness).unwrap();
            prop_assert_eq!(definitional.is_stable(), witness.is_stable(), "{}", s);
        }
    }
}

/// The same table on another copy of an identical universe.
fn rebase(c: &ChoiceFunction, u: &ContractUniverse) -> ChoiceFunction {
    let c = c.clone();
    ChoiceFunction::from_fn(u, move |a| c.choose(a).unwrap())
}

// ---- schedule markets --------------------------------------------------------

fn small_problem() -> impl Strategy<Value = ScheduleProblem> {
    (1..=3usize, 1..=2usize, 1..=3usize).prop_flat_map(|(nw, nf, nd)| {
        let pairs = nf * nd;
        let worker_pairs = nw * nd;
        (
            proptest::collection::vec(Just((0..pairs).collect::<Vec<_>>()).prop_shuffle(), nw),
            proptest::collection::vec(Just((0..worker_pairs).collect::<Vec<_>>()).prop_shuffle(), nf),
            proptest::collection::vec(0..=pairs, nw),
            proptest::collection::vec(1..=4usize, nf + nw),
        )
            .prop_map(move |(wp, fp, cut, quotas)| {
                let workers: Vec<String> = (1..=nw).map(|i| format!("w{i}")).collect();
                let firms: Vec<String> = (1..=nf).map(|i| format!("f{i}")).collect();
                let days: Vec<String> = (1..=nd).map(|i| format!("d{i}")).collect();
                let worker_specs = (0..nw)
                    .map(|i| {
                        let spec =
                            wp[i][..cut[i]].iter().fold(AgentSpec::new(&workers[i]).with_quota(quotas[i]), |s, &p| {
                                s.prefer(&firms[p / nd], &days[p % nd])
                            });
                        days.iter().fold(spec, |s, d| s.with_day_quota(d, 1))
                    })
                    .collect();
                let firm_specs = (0..nf)
                    .map(|j| {
                        fp[j].iter().fold(AgentSpec::new(&firms[j]).with_quota(quotas[nw + j]), |s, &p| {
                            s.prefer(&workers[p / nd], &days[p % nd])
                        })
                    })
                    .collect();
                ScheduleProblem { workers, firms, days, worker_specs, firm_specs, contracts: None }
            })
    })
}

proptest! {
    #![proptest_config(Config::with_cases(100))]

    #[test]
    fn day_quota_one_means_one_contract_per_day(problem in small_problem()) {
        let market = build_market(&problem).unwrap();
        if market.universe().len() <= 5 {
            prop_assert!(classify(&market.worker_choice, Budget::Exhaustive).unwrap().is_revealing.holds());
            prop_assert!(classify(&market.firm_choice, Budget::Exhaustive).unwrap().is_revealing.holds());
        }
        for side in [Side::Worker, Side::Firm] {
            let out = solve(&market.worker_choice, &market.firm_choice, SolveOptions::new(side, Style::Alternating)).unwrap();
            let mut seen = std::collections::HashSet::new();
            for i in out.stable_set.iter() {
                let k = market.key(i);
                prop_assert!(seen.insert((k.worker, k.day)), "worker {} twice on day {}", k.worker, k.day);
            }
        }
    }

    #[test]
    fn hours_never_exceed_either_cap(caps in proptest::collection::vec((0..=3usize, 0..=3usize), 4), flip in any::<bool>()) {
        // Two workers, two firms; caps[2i + j] = (worker cap, firm cap).
        let mut workers = vec![HoursAgent::new("w1"), HoursAgent::new("w2")];
        let mut firms = vec![HoursAgent::new("f1"), HoursAgent::new("f2")];
        for i in 0..2 {
            for j in 0..2 {
                let (qw, qf) = caps[2 * i + j];
                let j_ranked = if flip { 1 - j } else { j };
                workers[i] = workers[i].clone().rank(format!("f{}", j_ranked + 1), if j_ranked == j { qw } else { caps[2 * i + j_ranked].0 });
                firms[j] = firms[j].clone().rank(format!("w{}", i + 1), qf);
            }
        }
        let enc = HoursEncoding { workers, firms };
        let market = build_market(&expand_hours(&enc).unwrap()).unwrap();
        for side in [Side::Worker, Side::Firm] {
            let out = solve(&market.worker_choice, &market.firm_choice, SolveOptions::new(side, Style::Pair)).unwrap();
            let hours = interpret_hours(&out.stable_set, &enc).unwrap();
            for e in &hours.entries {
                let (qw, qf) = enc.caps(&e.worker, &e.firm);
                prop_assert!(e.hours <= qw.min(qf));
            }
        }
    }
}

#[test]
fn asymmetric_caps_stop_at_the_firm_cap() {
    let enc = HoursEncoding {
        workers: vec![HoursAgent::new("w1").rank("f1", 3)],
        firms: vec![HoursAgent::new("f1").rank("w1", 1)],
    };
    let market = build_market(&expand_hours(&enc).unwrap()).unwrap();
    assert_eq!(market.universe().len(), 3);
    for side in [Side::Worker, Side::Firm] {
        let out = solve(&market.worker_choice, &market.firm_choice, SolveOptions::new(side, Style::Pair)).unwrap();
        assert_eq!(out.stable_set.labels(), vec!["(w1,f1,1)"]);
        assert_eq!(interpret_hours(&out.stable_set, &enc).unwrap().hours("w1", "f1"), 1);
    }
}
