//! Brute-force reference implementations, exponentially slower than the
//! main algorithms and written independently of them, for cross-checking on
//! small instances.
//!
//! Coalition values are found by trying every memoryless coalition
//! strategy, and equilibria by enumerating every lasso whose prefix is a
//! simple path; both restrictions lose nothing, since memoryless punishment
//! is optimal and shortening a prefix loop never breaks an equilibrium or
//! raises its cost.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use crate::coalition::ValueMap;
use crate::cost::{pareto_filter, CostValue, CostVector};
use crate::equilibrium::{check_ne, FrontierEntry, Lasso, Step};
use crate::error::{Error, Result};
use crate::expand::ExpandedGame;
use crate::game::{Arena, Game, PlayerId, ProfileSpace};
use crate::generators::{Cnf, Digraph};

/// Default limit on memoryless coalition strategies.
pub const DEFAULT_STRATEGY_CAP: u64 = 1_000_000;

/// Default limit on explored paths.
pub const DEFAULT_PATH_CAP: u64 = 10_000_000;

/// Cheapest cost to a target of `alpha` from every state when the coalition
/// move at `u` is `moves[u]`; reverse Dijkstra from the targets.
fn best_responses(game: &Game, alpha: PlayerId, moves: &[usize]) -> Vec<CostValue> {
    let n = game.states().len();
    let space = game.profiles();
    let mut incoming: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for u in 0..n {
        for a in 0..space.actions(alpha) {
            let p = space.replace(moves[u], alpha, a);
            incoming[game.successor_of(u, p)].push((u, game.cost_of(u, p, alpha)));
        }
    }
    let mut dist = vec![CostValue::Infinite; n];
    let mut heap = BinaryHeap::new();
    for &t in game.targets(alpha) {
        dist[t] = CostValue::ZERO;
        heap.push(Reverse((0u64, t)));
    }
    while let Some(Reverse((d, v))) = heap.pop() {
        if CostValue::Finite(d) > dist[v] {
            continue;
        }
        for &(u, c) in &incoming[v] {
            if game.in_target(u, alpha) {
                continue;
            }
            let nd = d + c;
            if CostValue::Finite(nd) < dist[u] {
                dist[u] = CostValue::Finite(nd);
                heap.push(Reverse((nd, u)));
            }
        }
    }
    dist
}

/// Punishment values on the base game: the per-state maximum, over every
/// memoryless coalition strategy, of the deviator's best-response cost.
pub fn oracle_coalition_values(game: &Game, alpha: PlayerId) -> Result<ValueMap> {
    oracle_coalition_values_capped(game, alpha, DEFAULT_STRATEGY_CAP)
}

pub fn oracle_coalition_values_capped(game: &Game, alpha: PlayerId, cap: u64) -> Result<ValueMap> {
    let n = game.states().len();
    let space = game.profiles();
    let options: Vec<usize> = space.coalition_moves(alpha).collect();
    let count = (options.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::cap("coalition strategy", cap, count.min(u64::MAX as u128) as u64));
    }
    let mut choice = vec![0usize; n];
    let mut values = vec![CostValue::ZERO; n];
    loop {
        let moves: Vec<usize> = choice.iter().map(|&c| options[c]).collect();
        for (v, d) in values.iter_mut().zip(best_responses(game, alpha, &moves)) {
            *v = (*v).max(d);
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(ValueMap {
                    player: alpha,
                    values,
                });
            }
            choice[k] += 1;
            if choice[k] < options.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Base-game values moved onto the expanded game: a player that has
/// reached its target is owed nothing.
fn lift(egame: &ExpandedGame<'_>, base: &ValueMap) -> ValueMap {
    ValueMap {
        player: base.player,
        values: egame
            .states()
            .iter()
            .map(|s| {
                if s.reached.contains(base.player) {
                    CostValue::ZERO
                } else {
                    base.values[s.base]
                }
            })
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCaps {
    pub strategies: u64,
    pub paths: u64,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            strategies: DEFAULT_STRATEGY_CAP,
            paths: DEFAULT_PATH_CAP,
        }
    }
}

/// Pareto-optimal equilibrium cost vectors by exhaustive lasso enumeration.
pub fn oracle_ne_po(game: &Game) -> Result<Vec<FrontierEntry>> {
    oracle_ne_po_capped(game, OracleCaps::default())
}

struct Search<'a, 'g> {
    egame: &'a ExpandedGame<'g>,
    punish: &'a [ValueMap],
    /// Per state, one representative profile per distinct
    /// (successor, step cost, deviation payoffs) signature.
    moves: Vec<Vec<(usize, usize)>>,
    /// Per state, deviation payoff of every player under each kept move.
    deviation: Vec<Vec<Vec<CostValue>>>,
    cycles: BTreeMap<usize, Vec<Vec<(usize, usize)>>>,
    paths: u64,
    cap: u64,
    found: BTreeMap<CostVector, Lasso>,
}

impl Search<'_, '_> {
    fn new<'a, 'g>(egame: &'a ExpandedGame<'g>, punish: &'a [ValueMap], cap: u64) -> Search<'a, 'g> {
        let space: &ProfileSpace = egame.profile_space();
        let players = egame.player_count();
        let mut moves = Vec::new();
        let mut deviation = Vec::new();
        for x in 0..egame.state_count() {
            let mut seen = HashSet::new();
            let mut keep = Vec::new();
            let mut devs = Vec::new();
            for p in 0..space.len() {
                let y = egame.successor_of(x, p);
                let cost: Vec<u64> = (0..players).map(|a| egame.cost_of(x, p, PlayerId(a))).collect();
                let dev: Vec<CostValue> = (0..players)
                    .map(PlayerId)
                    .map(|a| {
                        let played = space.action_of(p, a);
                        (0..space.actions(a))
                            .filter(|&b| b != played)
                            .map(|b| {
                                let q = space.replace(p, a, b);
                                punish[a.0].values[egame.successor_of(x, q)] + egame.cost_of(x, q, a)
                            })
                            .min()
                            .unwrap_or(CostValue::Infinite)
                    })
                    .collect();
                if seen.insert((y, cost, dev.clone())) {
                    keep.push((p, y));
                    devs.push(dev);
                }
            }
            moves.push(keep);
            deviation.push(devs);
        }
        Search {
            egame,
            punish,
            moves,
            deviation,
            cycles: BTreeMap::new(),
            paths: 0,
            cap,
            found: BTreeMap::new(),
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.paths += 1;
        if self.paths > self.cap {
            return Err(Error::cap("lasso path", self.cap, self.paths));
        }
        Ok(())
    }

    /// Every simple cycle through `x`, as `(state, profile)` steps starting at `x`.
    fn cycles_at(&mut self, x: usize) -> Result<Vec<Vec<(usize, usize)>>> {
        if let Some(c) = self.cycles.get(&x) {
            return Ok(c.clone());
        }
        let mut out = Vec::new();
        let mut path = Vec::new();
        let mut on_path = vec![false; self.egame.state_count()];
        on_path[x] = true;
        self.cycle_dfs(x, x, &mut path, &mut on_path, &mut out)?;
        self.cycles.insert(x, out.clone());
        Ok(out)
    }

    fn cycle_dfs(
        &mut self,
        root: usize,
        cur: usize,
        path: &mut Vec<(usize, usize)>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<(usize, usize)>>,
    ) -> Result<()> {
        for k in 0..self.moves[cur].len() {
            let (p, y) = self.moves[cur][k];
            self.tick()?;
            path.push((cur, p));
            if y == root {
                out.push(path.clone());
            } else if !on_path[y] {
                on_path[y] = true;
                self.cycle_dfs(root, y, path, on_path, out)?;
                on_path[y] = false;
            }
            path.pop();
        }
        Ok(())
    }

    /// Extends the simple prefix ending in `cur`; `paid` is what each player
    /// has paid so far and `bound` the cheapest deviation seen so far.
    fn prefix_dfs(
        &mut self,
        cur: usize,
        prefix: &mut Vec<(usize, usize)>,
        on_path: &mut [bool],
        paid: &[CostValue],
        bound: &[CostValue],
    ) -> Result<()> {
        for cycle in self.cycles_at(cur)? {
            self.tick()?;
            self.try_lasso(prefix, &cycle)?;
        }
        let players = self.egame.player_count();
        for k in 0..self.moves[cur].len() {
            let (p, y) = self.moves[cur][k];
            if on_path[y] {
                continue;
            }
            self.tick()?;
            let mut next_paid = paid.to_vec();
            let mut next_bound = bound.to_vec();
            for a in 0..players {
                next_bound[a] = next_bound[a].min(paid[a] + self.deviation[cur][k][a]);
                next_paid[a] = paid[a] + self.egame.cost_of(cur, p, PlayerId(a));
            }
            // paying more than a deviation already guarantees can only get worse
            if (0..players).any(|a| next_paid[a] > next_bound[a]) {
                continue;
            }
            on_path[y] = true;
            prefix.push((cur, p));
            self.prefix_dfs(y, prefix, on_path, &next_paid, &next_bound)?;
            prefix.pop();
            on_path[y] = false;
        }
        Ok(())
    }

    fn try_lasso(&mut self, prefix: &[(usize, usize)], cycle: &[(usize, usize)]) -> Result<()> {
        let step = |&(x, p): &(usize, usize)| Step {
            state: self.egame.state(x).base,
            profile: p,
        };
        let lasso = Lasso::new(prefix.iter().map(step).collect(), cycle.iter().map(step).collect());
        let verdict = check_ne(self.egame, &lasso, self.punish)?;
        if verdict.is_ne() {
            self.found.entry(verdict.cost).or_insert(lasso);
        }
        Ok(())
    }
}

pub fn oracle_ne_po_capped(game: &Game, caps: OracleCaps) -> Result<Vec<FrontierEntry>> {
    let egame = ExpandedGame::new(game)?;
    let punish: Vec<ValueMap> = game
        .player_ids()
        .map(|p| oracle_coalition_values_capped(game, p, caps.strategies).map(|v| lift(&egame, &v)))
        .collect::<Result<_>>()?;
    let players = game.players().len();
    let mut search = Search::new(&egame, &punish, caps.paths);
    let start = egame.initial_state();
    let mut on_path = vec![false; egame.state_count()];
    on_path[start] = true;
    search.prefix_dfs(
        start,
        &mut Vec::new(),
        &mut on_path,
        &vec![CostValue::ZERO; players],
        &vec![CostValue::Infinite; players],
    )?;
    let minimal = pareto_filter(search.found.keys().cloned())
        .ok_or_else(|| Error::Internal("mixed cost vector lengths".into()))?;
    Ok(minimal
        .into_iter()
        .map(|cost| FrontierEntry {
            witness: search.found[&cost].clone(),
            cost,
        })
        .collect())
}

/// A source-problem instance for [`oracle_decision`].
#[derive(Clone, Debug)]
pub enum DecisionInstance {
    Partition(Vec<u64>),
    Sat(Cnf),
    Hampath(Digraph),
}

pub const PARTITION_MAX: usize = 20;
pub const SAT_MAX_ASSIGNMENT_VARS: usize = 4;
pub const HAMPATH_MAX: usize = 8;

/// Decides the source problem by exhaustive search.
pub fn oracle_decision(instance: &DecisionInstance) -> Result<bool> {
    match instance {
        DecisionInstance::Partition(xs) => {
            if xs.len() > PARTITION_MAX {
                return Err(Error::cap("partition element", PARTITION_MAX as u64, xs.len() as u64));
            }
            let total: u64 = xs.iter().sum();
            Ok(total.is_multiple_of(2)
                && (0u32..1 << xs.len()).any(|mask| {
                    xs.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, x)| x)
                        .sum::<u64>()
                        * 2
                        == total
                }))
        }
        DecisionInstance::Sat(cnf) => {
            if cnf.vars > SAT_MAX_ASSIGNMENT_VARS {
                return Err(Error::cap("boolean variable", SAT_MAX_ASSIGNMENT_VARS as u64, cnf.vars as u64));
            }
            Ok((0u32..1 << cnf.vars).any(|mask| {
                let assignment: Vec<bool> = (0..cnf.vars).map(|i| mask >> i & 1 == 1).collect();
                cnf.satisfied_by(&assignment)
            }))
        }
        DecisionInstance::Hampath(g) => {
            if g.vertices > HAMPATH_MAX {
                return Err(Error::cap("vertex", HAMPATH_MAX as u64, g.vertices as u64));
            }
            fn extend(g: &Digraph, at: usize, visited: &mut Vec<bool>, count: usize) -> bool {
                if count == g.vertices {
                    return true;
                }
                for &(_, v) in g.edges.range((at, 0)..(at + 1, 0)) {
                    if !visited[v] {
                        visited[v] = true;
                        if extend(g, v, visited, count + 1) {
                            return true;
                        }
                        visited[v] = false;
                    }
                }
                false
            }
            let mut visited = vec![false; g.vertices];
            visited[g.start] = true;
            Ok(extend(g, g.start, &mut visited, 1))
        }
    }
}
