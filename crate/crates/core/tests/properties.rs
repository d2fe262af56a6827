mod common;

use std::collections::BTreeSet;

use common::costs;
use proptest::prelude::*;
use proptest::sample::Index;
use qcg_core::coalition::{best_response_cost, punishing_strategy, value_trace};
use qcg_core::generators::{self, StageGameConfig};
use qcg_core::metrics::{pump, Price, WorstUtil};
use qcg_core::oracle::oracle_ne_po;
use qcg_core::{
    check_ne, coalition_values, compute_ne_po, expand, ne_po_joint_uniform, outcome_cost, parse_game, pos_poa,
    threshold_ne, ActionProfile, Analysis, Arena, CostValue, CostVector, FrontierConfig, Game, GameBuilder, Lasso,
    PlayerId, Step,
};

/// Explicit-table game: one rule per state and profile.
#[derive(Clone, Debug)]
struct TableSpec {
    radices: Vec<usize>,
    states: usize,
    targets: Vec<Vec<bool>>,
    table: Vec<(usize, Vec<u64>)>,
}

fn profile_count(radices: &[usize]) -> usize {
    radices.iter().product()
}

fn decode(radices: &[usize], mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = idx % r;
        idx /= r;
    }
    out
}

fn builder(radices: &[usize], states: usize, targets: &[Vec<bool>]) -> GameBuilder {
    let players: Vec<String> = (0..radices.len()).map(|p| format!("p{p}")).collect();
    let mut b = GameBuilder::new(&players);
    for (p, &r) in radices.iter().enumerate() {
        let names: Vec<String> = (0..r).map(|a| format!("a{a}")).collect();
        b = b.actions(&players[p], &names);
    }
    for s in 0..states {
        b = b.state(format!("s{s}"));
    }
    b = b.initial("s0");
    for (p, row) in targets.iter().enumerate() {
        for (s, _) in row.iter().enumerate().filter(|(_, &t)| t) {
            b = b.target(format!("s{s}"), &[&players[p]]);
        }
    }
    b
}

impl TableSpec {
    fn build(&self) -> Game {
        let mut b = builder(&self.radices, self.states, &self.targets);
        let n = profile_count(&self.radices);
        for s in 0..self.states {
            for idx in 0..n {
                let (to, cost) = &self.table[s * n + idx];
                let pattern: Vec<String> = decode(&self.radices, idx).iter().map(|a| format!("a{a}")).collect();
                b = b.rule(format!("s{s}"), &pattern, format!("s{to}"), cost);
            }
        }
        b.build().unwrap()
    }
}

fn table_spec(players: std::ops::RangeInclusive<usize>, states: usize, actions: usize, cost: u64) -> impl Strategy<Value = TableSpec> {
    (players, 1..=states)
        .prop_flat_map(move |(np, ns)| (prop::collection::vec(1..=actions, np), Just(ns)))
        .prop_flat_map(move |(radices, ns)| {
            let np = radices.len();
            let cells = ns * profile_count(&radices);
            (
                Just(radices),
                Just(ns),
                prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.3), ns), np),
                prop::collection::vec((0..ns, prop::collection::vec(0..=cost, np)), cells),
            )
        })
        .prop_map(|(radices, states, targets, table)| TableSpec {
            radices,
            states,
            targets,
            table,
        })
}

fn small_game() -> impl Strategy<Value = Game> {
    table_spec(1..=3, 4, 2, 3).prop_map(|s| s.build())
}

fn two_player_game() -> impl Strategy<Value = Game> {
    table_spec(2..=2, 4, 2, 3).prop_map(|s| s.build())
}

fn stage_game() -> impl Strategy<Value = Game> {
    (any::<u64>(), 2..=3usize, 1..=3usize, 0.0..0.3f64).prop_map(|(seed, players, stages, private)| {
        let cfg = StageGameConfig {
            stages: if players == 3 { stages.min(2) } else { stages },
            players,
            private_targets: private,
            ..StageGameConfig::default()
        };
        generators::random_stage_game(&mut common::rng(seed), &cfg)
    })
}

/// Pattern, target state, cost.
type Rule = (Vec<Option<usize>>, usize, Vec<u64>);

/// Games with rule patterns and wildcards, closed by a catch-all per state.
#[derive(Clone, Debug)]
struct PatternSpec {
    radices: Vec<usize>,
    states: usize,
    rules: Vec<Vec<Rule>>,
}

fn pattern_spec() -> impl Strategy<Value = PatternSpec> {
    (1..=4usize, 1..=3usize)
        .prop_flat_map(|(np, ns)| (prop::collection::vec(1..=3usize, np), Just(ns)))
        .prop_flat_map(|(radices, ns)| {
            let np = radices.len();
            let slot = radices
                .iter()
                .map(|&r| prop::option::of(0..r))
                .collect::<Vec<_>>();
            let rule = (slot, 0..ns, prop::collection::vec(0..=2u64, np));
            (
                Just(radices),
                Just(ns),
                prop::collection::vec(prop::collection::vec(rule, 0..4), ns),
            )
        })
        .prop_map(|(radices, states, rules)| PatternSpec { radices, states, rules })
}

impl PatternSpec {
    fn build(&self) -> Game {
        let np = self.radices.len();
        let mut b = builder(&self.radices, self.states, &vec![vec![false; self.states]; np]);
        for (s, rules) in self.rules.iter().enumerate() {
            for (pattern, to, cost) in rules {
                let pat: Vec<String> = pattern
                    .iter()
                    .map(|a| a.map_or("*".to_owned(), |a| format!("a{a}")))
                    .collect();
                b = b.rule(format!("s{s}"), &pat, format!("s{to}"), cost);
            }
            b = b.rule(format!("s{s}"), &vec!["*"; np], format!("s{s}"), &vec![0; np]);
        }
        b.build().unwrap()
    }

    /// First matching rule, or the catch-all.
    fn expected(&self, state: usize, profile: &[usize]) -> (usize, Vec<u64>) {
        self.rules[state]
            .iter()
            .find(|(pattern, _, _)| pattern.iter().zip(profile).all(|(p, a)| p.is_none_or(|p| p == *a)))
            .map(|(_, to, cost)| (*to, cost.clone()))
            .unwrap_or((state, vec![0; self.radices.len()]))
    }
}

/// Plays profiles chosen by `picks` from the initial expanded state until
/// some expanded state repeats, and cuts the walk into a lasso there.
fn random_lasso(g: &Game, picks: &[Index]) -> Lasso {
    let e = expand(g).unwrap();
    let profiles = g.profiles().len();
    let mut order = vec![usize::MAX; e.state_count()];
    let mut steps = Vec::new();
    let mut x = e.initial_state();
    let mut k = 0;
    while order[x] == usize::MAX {
        order[x] = steps.len();
        let p = picks[k % picks.len()].index(profiles);
        k += 1;
        steps.push(Step {
            state: e.state(x).base,
            profile: p,
        });
        x = e.successor_of(x, p);
    }
    let cycle = steps.split_off(order[x]);
    Lasso::new(steps, cycle)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn successor_is_the_first_matching_rule(spec in pattern_spec()) {
        let g = spec.build();
        for s in 0..spec.states {
            for idx in 0..g.profiles().len() {
                let profile = g.profiles().decode(idx);
                let t = g.successor(s, &profile);
                let (to, cost) = spec.expected(s, &profile.0);
                prop_assert_eq!(t.target, to);
                prop_assert_eq!(t.cost, CostVector::finite(&cost));
            }
        }
    }

    #[test]
    fn text_round_trip(spec in pattern_spec(), table in table_spec(1..=3, 4, 3, 9)) {
        for g in [spec.build(), table.build()] {
            let text = g.to_text();
            let back = parse_game(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn reached_sets_only_grow(g in small_game()) {
        let e = expand(&g).unwrap();
        for x in 0..e.state_count() {
            for p in 0..g.profiles().len() {
                let y = e.successor_of(x, p);
                prop_assert!(e.reached(x).is_subset(e.reached(y)));
                prop_assert_eq!(e.reached(y), e.reached(x).union(g.reached_at(e.state(y).base)));
            }
        }
    }

    #[test]
    fn expanded_costs_stop_at_the_first_visit(g in small_game(), walk in prop::collection::vec(any::<Index>(), 0..12)) {
        let e = expand(&g).unwrap();
        let players = g.players().len();
        let mut base = g.initial();
        let mut x = e.initial_state();
        let mut visited: Vec<bool> = g.player_ids().map(|p| g.in_target(base, p)).collect();
        let mut direct = vec![0u64; players];
        let mut expanded = vec![0u64; players];
        for pick in &walk {
            let p = pick.index(g.profiles().len());
            for alpha in g.player_ids() {
                if !visited[alpha.0] {
                    direct[alpha.0] += g.cost_of(base, p, alpha);
                }
                expanded[alpha.0] += e.cost_of(x, p, alpha);
            }
            base = g.successor_of(base, p);
            x = e.successor_of(x, p);
            prop_assert_eq!(e.state(x).base, base);
            for alpha in g.player_ids() {
                visited[alpha.0] |= g.in_target(base, alpha);
            }
        }
        prop_assert_eq!(direct, expanded);
    }

    #[test]
    fn value_iteration_descends_to_an_early_fixpoint(g in small_game()) {
        let e = expand(&g).unwrap();
        for alpha in g.player_ids() {
            for trace in [value_trace(&g, alpha), value_trace(&e, alpha)] {
                for w in trace.iterates.windows(2) {
                    prop_assert!(w[1].iter().zip(&w[0]).all(|(a, b)| a <= b));
                }
                let n = trace.iterates[0].len();
                prop_assert!(trace.fixpoint_round() <= n);
            }
        }
    }

    #[test]
    fn punishment_is_tight(g in small_game()) {
        let e = expand(&g).unwrap();
        for alpha in g.player_ids() {
            let c = coalition_values(&g, alpha);
            let table = punishing_strategy(&g, alpha);
            for u in 0..g.states().len() {
                prop_assert_eq!(best_response_cost(&g, &table, u), c.get(u));
            }
            let c = coalition_values(&e, alpha);
            let table = punishing_strategy(&e, alpha);
            for x in 0..e.state_count() {
                prop_assert_eq!(best_response_cost(&e, &table, x), c.get(x));
            }
        }
    }

    #[test]
    fn local_and_global_deviation_checks_agree(g in small_game(), picks in prop::collection::vec(any::<Index>(), 1..8)) {
        let a = Analysis::new(&g, FrontierConfig::default()).unwrap();
        let lasso = random_lasso(&g, &picks);
        let r = lasso.resolve(&a.egame).unwrap();
        let total = outcome_cost(&a.egame, &lasso).unwrap();
        let everyone = a.egame.everyone();
        let mut paid = vec![0u64; g.players().len()];
        let mut local = true;
        for (&x, &p) in r.states.iter().zip(&r.profiles) {
            local &= a.safety().is_safe(x, p, r.winners, everyone);
            for alpha in r.winners.iter() {
                let CostValue::Finite(t) = total.entries()[alpha.0] else { unreachable!() };
                let suffix = CostValue::Finite(t - paid[alpha.0]);
                local &= suffix <= a.deviation_payoff(x, p, alpha);
            }
            for alpha in g.player_ids() {
                paid[alpha.0] += a.egame.cost_of(x, p, alpha);
            }
        }
        prop_assert_eq!(local, a.check(&lasso).unwrap().is_ne());
    }

    #[test]
    fn fragment_matches_the_general_search(seed in any::<u64>(), players in 1..=3usize) {
        let g = generators::random_game(&mut common::rng(seed), &common::joint_uniform(players, 5));
        prop_assert_eq!(costs(&ne_po_joint_uniform(&g).unwrap()), costs(&compute_ne_po(&g).unwrap()));
    }
}

fn check_frontier(g: &Game) -> Result<(), TestCaseError> {
    let a = Analysis::new(g, FrontierConfig::default()).unwrap();
    let f = a.frontier().unwrap();
    for x in &f {
        for y in &f {
            prop_assert!(!x.cost.dominates(&y.cost), "{:?} dominates {:?}", x.cost, y.cost);
        }
        let v = check_ne(&a.egame, &x.witness, &a.punish).unwrap();
        prop_assert!(v.is_ne());
        prop_assert_eq!(&v.cost, &x.cost);
    }
    prop_assert_eq!(costs(&f), costs(&oracle_ne_po(g).unwrap()));
    Ok(())
}

fn check_thresholds(g: &Game, probes: &[Vec<u64>]) -> Result<(), TestCaseError> {
    let f = costs(&compute_ne_po(g).unwrap());
    let n = g.players().len();
    for raw in probes {
        let bound = CostVector::finite(&raw[..n]);
        let hit = threshold_ne(g, &bound).unwrap();
        prop_assert_eq!(hit.is_some(), f.iter().any(|c| c.le(&bound)));
        if let Some(hit) = hit {
            prop_assert!(hit.cost.le(&bound));
            let looser = CostVector::finite(&raw[..n].iter().map(|v| v + 1).collect::<Vec<_>>());
            prop_assert!(threshold_ne(g, &looser).unwrap().is_some());
        }
    }
    Ok(())
}

fn check_prices(g: &Game) -> Result<(), TestCaseError> {
    let m = pos_poa(g).unwrap();
    let a = Analysis::new(g, FrontierConfig::default()).unwrap();
    if let Some(l) = &m.pump_witness {
        prop_assert!(a.check(l).unwrap().is_ne());
    }
    if let Some(best) = m.best_ne_util {
        prop_assert!(m.social_optimum <= best);
    }
    if let WorstUtil::Exact(w) | WorstUtil::AtLeast(w) = m.worst_ne_util {
        prop_assert!(m.social_optimum <= w);
    }
    let finite = |p: Price| match p {
        Price::Exact(r) | Price::AtLeast(r) => Some(r),
        _ => None,
    };
    if let Some(pos) = finite(m.pos) {
        if m.social_optimum >= CostValue::Finite(1) {
            prop_assert!(pos.num >= pos.den);
        }
        if let Some(poa) = finite(m.poa) {
            prop_assert!(pos.num as u128 * poa.den as u128 <= poa.num as u128 * pos.den as u128);
        }
    }
    if m.pos == Price::NoEquilibrium {
        prop_assert_eq!(m.poa, Price::NoEquilibrium);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frontiers_are_verified_antichains(g in two_player_game()) {
        check_frontier(&g)?;
    }

    #[test]
    fn stage_frontiers_are_verified_antichains(g in stage_game()) {
        check_frontier(&g)?;
    }

    #[test]
    fn thresholds_are_monotone(g in stage_game(), probes in prop::collection::vec(prop::collection::vec(0..12u64, 3), 1..5)) {
        check_thresholds(&g, &probes)?;
    }

    #[test]
    fn prices_are_consistent(g in small_game()) {
        check_prices(&g)?;
    }

    #[test]
    fn stage_prices_are_consistent(g in stage_game()) {
        check_prices(&g)?;
    }

    #[test]
    fn pumped_plays_stay_equilibria(g in stage_game()) {
        let a = Analysis::new(&g, FrontierConfig::default()).unwrap();
        for e in a.frontier().unwrap() {
            if let Some(l) = pump(&a, &e.witness).unwrap() {
                let v = a.check(&l).unwrap();
                prop_assert!(v.is_ne());
                prop_assert!(v.cost.util() > e.cost.util());
            }
        }
    }

    #[test]
    fn answers_do_not_depend_on_declaration_order(spec in table_spec(2..=2, 4, 2, 3), rot in 0..4usize) {
        let g = spec.build();
        // Same game with the non-initial states declared in rotated order.
        let text = g.to_text();
        let (states, rest): (Vec<&str>, Vec<&str>) = text.lines().partition(|l| l.starts_with("state "));
        let (head, tail) = states.split_at(1);
        let mut tail = tail.to_vec();
        if !tail.is_empty() {
            let k = rot % tail.len();
            tail.rotate_left(k);
        }
        let mut lines: Vec<&str> = rest.iter().copied().filter(|l| !l.starts_with("trans ")).collect();
        lines.extend(head);
        lines.extend(tail);
        lines.extend(rest.iter().copied().filter(|l| l.starts_with("trans ")));
        let h = parse_game(&lines.join("\n")).unwrap();
        prop_assert_eq!(costs(&compute_ne_po(&g).unwrap()), costs(&compute_ne_po(&h).unwrap()));
        prop_assert_eq!(costs(&oracle_ne_po(&g).unwrap()), costs(&oracle_ne_po(&h).unwrap()));
    }
}

#[test]
fn unary_frontiers_respect_the_size_bound() {
    let cfg = StageGameConfig {
        stages: 3,
        players: 2,
        max_cost: 2,
        ..StageGameConfig::default()
    };
    let mut sizes = BTreeSet::new();
    for g in common::stage_games(42, 60, &cfg) {
        let f = compute_ne_po(&g).unwrap();
        let bound = (g.max_cost().max(1) as usize * 2 * g.states().len()).pow(2);
        assert!(f.len() <= bound);
        sizes.insert(f.len());
    }
    assert!(sizes.len() > 1);
}

#[test]
fn profile_helpers_agree() {
    let g = generators::exp_ne(2).unwrap();
    let p = ActionProfile(vec![1, 0]);
    assert_eq!(g.profiles().decode(g.profiles().encode(&p)), p);
    assert_eq!(g.profile_names(&p), ["b", "a"]);
    assert_eq!(decode(&[2, 2], g.profiles().encode(&p)), p.0);
    let _ = PlayerId(0);
}
