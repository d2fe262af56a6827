//! The winner-set dynamic program that enumerates equilibrium cost vectors.
//!
//! For each candidate set of winners `W`, plays are restricted to
//! transitions that are safe for `W` (no loser can escape punishment), and
//! end in a region where exactly `W` has been reached and the play can stay
//! forever. Backwards from that region, each state collects suffix cost
//! vectors of paths along which no winner can gain by deviating.

use std::collections::HashMap;

use super::{check_ne, Lasso, NeVerdict, Step};
use crate::coalition::{coalition_values, ValueMap};
use crate::cost::{pareto_filter, CostValue, CostVector};
use crate::error::{Error, Result};
use crate::expand::{ExpandedGame, SafeRestriction, SafetyTable};
use crate::game::{Arena, Game, PlayerId, PlayerSet};

/// Default limit on players, since the program loops over all `2^n` winner sets.
pub const DEFAULT_PLAYER_CAP: usize = 12;

/// Default limit on the total number of table entries in one winner-set run.
pub const DEFAULT_ENTRY_CAP: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierConfig {
    pub player_cap: usize,
    pub entry_cap: usize,
}

impl Default for FrontierConfig {
    fn default() -> Self {
        FrontierConfig {
            player_cap: DEFAULT_PLAYER_CAP,
            entry_cap: DEFAULT_ENTRY_CAP,
        }
    }
}

/// An equilibrium cost vector with a lasso whose outcome realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierEntry {
    pub cost: CostVector,
    pub witness: Lasso,
}

/// How the per-state tables are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpMode {
    /// Only componentwise-minimal vectors; runs to a fixpoint.
    Pareto,
    /// Every distinct vector, for at most `round_cap` rounds.
    All { round_cap: usize },
}

/// Vectors found at the initial state over all winner sets.
#[derive(Clone, Debug)]
pub struct DpRun {
    /// Sorted by cost; in `Pareto` mode, an antichain.
    pub entries: Vec<FrontierEntry>,
    /// `false` if the round cap stopped some run before its fixpoint.
    pub fixpoint: bool,
}

#[derive(Clone, Debug)]
struct Entry {
    cost: CostVector,
    back: Option<(usize, usize, usize)>,
    dominated: bool,
}

/// The expanded game with everything the equilibrium search needs:
/// punishment values, safety masks and deviation payoffs.
#[derive(Debug)]
pub struct Analysis<'g> {
    pub egame: ExpandedGame<'g>,
    pub punish: Vec<ValueMap>,
    safety: SafetyTable,
    deviation: Vec<CostValue>,
    config: FrontierConfig,
}

impl<'g> Analysis<'g> {
    pub fn new(game: &'g Game, config: FrontierConfig) -> Result<Self> {
        let players = game.players().len();
        if players > config.player_cap {
            return Err(Error::cap("player", config.player_cap as u64, players as u64));
        }
        let egame = ExpandedGame::new(game)?;
        let punish: Vec<ValueMap> = game.player_ids().map(|p| coalition_values(&egame, p)).collect();
        Ok(Self::with_values(egame, punish, config))
    }

    /// Uses externally computed punishment values.
    pub fn with_values(egame: ExpandedGame<'g>, punish: Vec<ValueMap>, config: FrontierConfig) -> Self {
        let safety = SafetyTable::new(&egame, &punish);
        let space = egame.profile_space();
        let players = egame.player_count();
        let mut deviation = Vec::with_capacity(egame.state_count() * space.len() * players);
        for x in 0..egame.state_count() {
            for p in 0..space.len() {
                for alpha in (0..players).map(PlayerId) {
                    let played = space.action_of(p, alpha);
                    let best = (0..space.actions(alpha))
                        .filter(|&a| a != played)
                        .map(|a| {
                            let q = space.replace(p, alpha, a);
                            punish[alpha.0].values[egame.successor_of(x, q)] + egame.cost_of(x, q, alpha)
                        })
                        .min()
                        .unwrap_or(CostValue::Infinite);
                    deviation.push(best);
                }
            }
        }
        Analysis {
            egame,
            punish,
            safety,
            deviation,
            config,
        }
    }

    pub fn game(&self) -> &'g Game {
        self.egame.game()
    }

    /// Cheapest total `alpha` can secure by switching its own action in
    /// `(state, profile)`: the step cost plus the punishment value of where it lands.
    pub fn deviation_payoff(&self, state: usize, profile: usize, alpha: PlayerId) -> CostValue {
        let players = self.egame.player_count();
        self.deviation[(state * self.egame.profile_space().len() + profile) * players + alpha.0]
    }

    pub fn safety(&self) -> &SafetyTable {
        &self.safety
    }

    pub fn check(&self, lasso: &Lasso) -> Result<NeVerdict> {
        check_ne(&self.egame, lasso, &self.punish)
    }

    /// Pareto-optimal equilibrium cost vectors with verified witnesses.
    pub fn frontier(&self) -> Result<Vec<FrontierEntry>> {
        Ok(self.run(DpMode::Pareto)?.entries)
    }

    pub fn run(&self, mode: DpMode) -> Result<DpRun> {
        let players = self.egame.player_count();
        let mut entries = Vec::new();
        let mut fixpoint = true;
        for bits in 0..(1u64 << players) {
            let winners = PlayerSet::from_bits(bits as u32);
            let (found, done) = self.run_winners(winners, mode)?;
            fixpoint &= done;
            entries.extend(found);
        }
        entries.sort_by(|a, b| a.cost.cmp(&b.cost));
        if mode == DpMode::Pareto {
            let keep = pareto_filter(entries.iter().map(|e| e.cost.clone()))
                .ok_or_else(|| Error::Internal("mixed cost vector lengths".into()))?;
            entries.retain(|e| keep.binary_search(&e.cost).is_ok());
        }
        entries.dedup_by(|a, b| a.cost == b.cost);
        Ok(DpRun { entries, fixpoint })
    }

    /// States of the `W`-region that can stay inside it forever using safe transitions.
    fn alive_region(&self, r: &SafeRestriction, winners: PlayerSet) -> Vec<bool> {
        let mut alive = vec![false; self.egame.state_count()];
        for &x in r.states() {
            alive[x] = self.egame.reached(x) == winners;
        }
        loop {
            let mut changed = false;
            for &x in r.states() {
                if alive[x] && !r.edges(x).iter().any(|&(_, y)| alive[y]) {
                    alive[x] = false;
                    changed = true;
                }
            }
            if !changed {
                return alive;
            }
        }
    }

    fn run_winners(&self, winners: PlayerSet, mode: DpMode) -> Result<(Vec<FrontierEntry>, bool)> {
        let e = &self.egame;
        let n = e.state_count();
        let players = e.player_count();
        let r = self.safety.restrict(e, winners);
        let alive = self.alive_region(&r, winners);
        if !alive.iter().any(|&a| a) {
            return Ok((Vec::new(), true));
        }
        let within = |x: usize| e.reached(x).is_subset(winners);
        let states: Vec<usize> = r.states().iter().copied().filter(|&x| within(x)).collect();
        let seed: CostVector = (0..players)
            .map(|p| {
                if winners.contains(PlayerId(p)) {
                    CostValue::ZERO
                } else {
                    CostValue::Infinite
                }
            })
            .collect();

        let mut table: Vec<Vec<Entry>> = vec![Vec::new(); n];
        let mut index: Vec<HashMap<CostVector, usize>> = vec![HashMap::new(); n];
        let mut total = 0usize;
        for &x in &states {
            if alive[x] {
                index[x].insert(seed.clone(), 0);
                table[x].push(Entry {
                    cost: seed.clone(),
                    back: None,
                    dominated: false,
                });
                total += 1;
            }
        }

        let mut round = 0;
        let mut extended = vec![0usize; n];
        let fixpoint = loop {
            round += 1;
            if let DpMode::All { round_cap } = mode {
                if round > round_cap {
                    break false;
                }
            }
            let snapshot: Vec<usize> = table.iter().map(Vec::len).collect();
            let mut added = false;
            for &x in &states {
                let mut candidates = Vec::new();
                for &(p, y) in r.edges(x) {
                    if !within(y) {
                        continue;
                    }
                    for (k, entry) in table[y]
                        .iter()
                        .enumerate()
                        .take(snapshot[y])
                        .skip(extended[y])
                    {
                        if entry.dominated {
                            continue;
                        }
                        let cost: CostVector = (0..players)
                            .map(|a| entry.cost[a] + e.cost_of(x, p, PlayerId(a)))
                            .collect();
                        let stable = winners
                            .iter()
                            .all(|a| cost[a.0] <= self.deviation_payoff(x, p, a));
                        if stable {
                            candidates.push((cost, (p, y, k)));
                        }
                    }
                }
                for (cost, back) in candidates {
                    let inserted = match mode {
                        DpMode::Pareto => insert_minimal(&mut table[x], cost, back),
                        DpMode::All { .. } => {
                            if index[x].contains_key(&cost) {
                                false
                            } else {
                                index[x].insert(cost.clone(), table[x].len());
                                table[x].push(Entry {
                                    cost,
                                    back: Some(back),
                                    dominated: false,
                                });
                                true
                            }
                        }
                    };
                    if inserted {
                        added = true;
                        total += 1;
                        if total > self.config.entry_cap {
                            return Err(Error::cap(
                                "equilibrium table entry",
                                self.config.entry_cap as u64,
                                total as u64,
                            ));
                        }
                    }
                }
            }
            extended = snapshot;
            if !added {
                break true;
            }
        };

        let start = e.initial_state();
        let mut found = Vec::new();
        for (k, entry) in table[start].iter().enumerate() {
            if entry.dominated {
                continue;
            }
            let witness = self.reconstruct(&table, &r, &alive, start, k);
            let verdict = self.check(&witness)?;
            if !verdict.is_ne() || verdict.cost != entry.cost {
                return Err(Error::Internal(format!(
                    "witness for {} failed verification (cost {}, violation {:?})",
                    entry.cost, verdict.cost, verdict.violation
                )));
            }
            found.push(FrontierEntry {
                cost: entry.cost.clone(),
                witness,
            });
        }
        Ok((found, fixpoint))
    }

    /// Follows back-pointers to the region, then walks the first
    /// region-preserving safe transition from each state until one repeats.
    fn reconstruct(
        &self,
        table: &[Vec<Entry>],
        r: &SafeRestriction,
        alive: &[bool],
        start: usize,
        entry: usize,
    ) -> Lasso {
        let base = |x: usize| self.egame.state(x).base;
        let mut prefix = Vec::new();
        let (mut x, mut k) = (start, entry);
        while let Some((p, y, next)) = table[x][k].back {
            prefix.push(Step {
                state: base(x),
                profile: p,
            });
            x = y;
            k = next;
        }
        let mut walk: Vec<(usize, usize)> = Vec::new();
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut cur = x;
        let split = loop {
            if let Some(&i) = seen.get(&cur) {
                break i;
            }
            seen.insert(cur, walk.len());
            let &(p, y) = r
                .edges(cur)
                .iter()
                .find(|&&(_, y)| alive[y])
                .expect("alive states keep a successor in the region");
            walk.push((cur, p));
            cur = y;
        };
        let to_step = |&(x, p): &(usize, usize)| Step {
            state: base(x),
            profile: p,
        };
        prefix.extend(walk[..split].iter().map(to_step));
        Lasso {
            prefix,
            cycle: walk[split..].iter().map(to_step).collect(),
        }
    }
}

/// Inserts `cost` unless an entry already at most as large exists; entries
/// it strictly improves on are flagged and no longer extended.
fn insert_minimal(entries: &mut Vec<Entry>, cost: CostVector, back: (usize, usize, usize)) -> bool {
    if entries.iter().any(|e| !e.dominated && e.cost.le(&cost)) {
        return false;
    }
    for e in entries.iter_mut() {
        if !e.dominated && cost.le(&e.cost) {
            e.dominated = true;
        }
    }
    entries.push(Entry {
        cost,
        back: Some(back),
        dominated: false,
    });
    true
}

/// Pareto-optimal equilibrium cost vectors of `game`, each with a lasso
/// witness that has been re-checked against the deviation criterion.
///
/// An empty result means the game has no equilibrium. A vector of all `∞`
/// stands for an equilibrium in which nobody reaches its target.
///
/// ```
/// use qcg_core::{compute_ne_po, generators, CostVector};
///
/// let frontier = compute_ne_po(&generators::infinite_ne()).unwrap();
/// assert_eq!(frontier.len(), 1);
/// assert_eq!(frontier[0].cost, CostVector::finite(&[1, 1]));
/// ```
pub fn compute_ne_po(game: &Game) -> Result<Vec<FrontierEntry>> {
    compute_ne_po_with(game, FrontierConfig::default())
}

pub fn compute_ne_po_with(game: &Game, config: FrontierConfig) -> Result<Vec<FrontierEntry>> {
    Analysis::new(game, config)?.frontier()
}

/// An equilibrium whose cost is componentwise at most `bound`, if any.
pub fn threshold_ne(game: &Game, bound: &CostVector) -> Result<Option<FrontierEntry>> {
    let players = game.players().len();
    if bound.len() != players {
        return Err(Error::LengthMismatch {
            expected: players,
            got: bound.len(),
        });
    }
    Ok(compute_ne_po(game)?.into_iter().find(|e| e.cost.le(bound)))
}

pub fn ne_exists(game: &Game) -> Result<bool> {
    Ok(!compute_ne_po(game)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn costs(frontier: &[FrontierEntry]) -> Vec<CostVector> {
        frontier.iter().map(|e| e.cost.clone()).collect()
    }

    #[test]
    fn xor_has_no_equilibrium() {
        assert!(compute_ne_po(&generators::xor()).unwrap().is_empty());
        assert!(!ne_exists(&generators::xor()).unwrap());
    }

    #[test]
    fn exp_ne_frontier_is_every_split() {
        for n in 1..=3u32 {
            let top = (1u64 << n) - 1;
            let expected: Vec<CostVector> = (0..=top).map(|x| CostVector::finite(&[x, top - x])).collect();
            let got = costs(&compute_ne_po(&generators::exp_ne(n).unwrap()).unwrap());
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn threshold_queries() {
        let g = generators::infinite_ne();
        assert!(threshold_ne(&g, &CostVector::finite(&[1, 1])).unwrap().is_some());
        assert!(threshold_ne(&g, &CostVector::finite(&[0, 0])).unwrap().is_none());
        assert!(threshold_ne(&generators::xor(), &CostVector::finite(&[9, 9])).unwrap().is_none());
        assert!(matches!(
            threshold_ne(&g, &CostVector::finite(&[1])),
            Err(Error::LengthMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn nobody_wins_when_targets_are_unreachable() {
        let g = crate::GameBuilder::new(&["p1", "p2"])
            .actions("p1", &["a"])
            .actions("p2", &["a"])
            .state("s")
            .state("t")
            .initial("s")
            .target("t", &["p1"])
            .rule("s", &["*", "*"], "s", &[1, 1])
            .rule("t", &["*", "*"], "t", &[0, 0])
            .build()
            .unwrap();
        let f = compute_ne_po(&g).unwrap();
        assert_eq!(costs(&f), vec![CostVector::new(vec![CostValue::Infinite; 2])]);
    }

    #[test]
    fn player_cap_is_enforced() {
        let g = generators::exp_ne(1).unwrap();
        let cfg = FrontierConfig {
            player_cap: 1,
            ..FrontierConfig::default()
        };
        assert!(matches!(compute_ne_po_with(&g, cfg), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn all_mode_finds_the_pumped_family() {
        let g = generators::infinite_ne();
        let a = Analysis::new(&g, FrontierConfig::default()).unwrap();
        let run = a.run(DpMode::All { round_cap: 6 }).unwrap();
        assert!(!run.fixpoint);
        assert!(run.entries.len() >= 5);
        for e in &run.entries {
            assert!(a.check(&e.witness).unwrap().is_ne());
        }
    }
}
