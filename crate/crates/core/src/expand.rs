//! The expanded game: the product of a game with the set of players that
//! have already visited their targets, and its restriction to transitions
//! that are safe for a given set of winners.

use std::collections::HashMap;

use crate::coalition::ValueMap;
use crate::cost::CostValue;
use crate::error::{Error, Result};
use crate::game::{Arena, Game, PlayerId, PlayerSet, ProfileSpace};

/// Most `(state, profile)` pairs the expanded transition table may hold.
pub const EXPANDED_TABLE_CAP: u64 = 1 << 27;

/// A base state paired with the players that have reached their targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpandedState {
    pub base: usize,
    pub reached: PlayerSet,
}

/// Reachable part of the expanded game.
///
/// Moving from `(v, S)` under a profile to base state `v'` leads to
/// `(v', S ∪ {α : v' ∈ F(α)})`, and player `α` is charged nothing once
/// `α ∈ S`. The initial state is `(v₀, {α : v₀ ∈ F(α)})`. States are numbered
/// in breadth-first discovery order with profiles tried in declaration order.
#[derive(Clone, Debug)]
pub struct ExpandedGame<'g> {
    game: &'g Game,
    states: Vec<ExpandedState>,
    index: HashMap<ExpandedState, usize>,
    successors: Vec<u32>,
}

impl<'g> ExpandedGame<'g> {
    pub fn new(game: &'g Game) -> Result<Self> {
        let profiles = game.profiles().len();
        let initial = ExpandedState {
            base: game.initial(),
            reached: game.reached_at(game.initial()),
        };
        let mut states = vec![initial];
        let mut index = HashMap::from([(initial, 0usize)]);
        let mut successors: Vec<u32> = Vec::new();
        let mut next = 0;
        while next < states.len() {
            let total = (states.len() as u64) * profiles as u64;
            if total > EXPANDED_TABLE_CAP {
                return Err(Error::cap("expanded transition table", EXPANDED_TABLE_CAP, total));
            }
            let here = states[next];
            for p in 0..profiles {
                let base = game.successor_of(here.base, p);
                let succ = ExpandedState {
                    base,
                    reached: here.reached.union(game.reached_at(base)),
                };
                let id = *index.entry(succ).or_insert_with(|| {
                    states.push(succ);
                    states.len() - 1
                });
                successors.push(id as u32);
            }
            next += 1;
        }
        Ok(ExpandedGame {
            game,
            states,
            index,
            successors,
        })
    }

    pub fn game(&self) -> &'g Game {
        self.game
    }

    pub fn states(&self) -> &[ExpandedState] {
        &self.states
    }

    pub fn state(&self, id: usize) -> ExpandedState {
        self.states[id]
    }

    pub fn id_of(&self, state: ExpandedState) -> Option<usize> {
        self.index.get(&state).copied()
    }

    pub fn reached(&self, id: usize) -> PlayerSet {
        self.states[id].reached
    }

    /// All players, as a set.
    pub fn everyone(&self) -> PlayerSet {
        PlayerSet::full(self.game.players().len())
    }
}

impl Arena for ExpandedGame<'_> {
    fn player_count(&self) -> usize {
        self.game.players().len()
    }

    fn state_count(&self) -> usize {
        self.states.len()
    }

    fn profile_space(&self) -> &ProfileSpace {
        self.game.profiles()
    }

    fn initial_state(&self) -> usize {
        0
    }

    fn successor_of(&self, state: usize, profile: usize) -> usize {
        self.successors[state * self.game.profiles().len() + profile] as usize
    }

    fn cost_of(&self, state: usize, profile: usize, player: PlayerId) -> u64 {
        let s = self.states[state];
        if s.reached.contains(player) {
            0
        } else {
            self.game.rule_at(s.base, profile).cost[player.0]
        }
    }

    fn in_target(&self, state: usize, player: PlayerId) -> bool {
        self.states[state].reached.contains(player)
    }

    fn state_label(&self, state: usize) -> String {
        let s = self.states[state];
        let names: Vec<&str> = s
            .reached
            .iter()
            .map(|p| self.game.player_name(p))
            .collect();
        format!("({},{{{}}})", self.game.state_name(s.base), names.join(","))
    }
}

/// For every expanded transition, the players whose unilateral deviations
/// (including not deviating at all) all land where their punishment value is
/// `∞`.
///
/// A transition is safe for winners `W` iff every player outside `W` is in
/// its mask.
#[derive(Clone, Debug)]
pub struct SafetyTable {
    masks: Vec<PlayerSet>,
    profiles: usize,
}

impl SafetyTable {
    /// `punish[α]` must be the value map of player `α` on `egame`.
    pub fn new(egame: &ExpandedGame<'_>, punish: &[ValueMap]) -> Self {
        let space = egame.profile_space();
        let players = egame.player_count();
        let mut masks = Vec::with_capacity(egame.state_count() * space.len());
        for x in 0..egame.state_count() {
            for p in 0..space.len() {
                let mut mask = PlayerSet::EMPTY;
                for alpha in (0..players).map(PlayerId) {
                    let all_infinite = (0..space.actions(alpha)).all(|a| {
                        let q = space.replace(p, alpha, a);
                        punish[alpha.0].values[egame.successor_of(x, q)] == CostValue::Infinite
                    });
                    if all_infinite {
                        mask = mask.with(alpha);
                    }
                }
                masks.push(mask);
            }
        }
        SafetyTable {
            masks,
            profiles: space.len(),
        }
    }

    pub fn mask(&self, state: usize, profile: usize) -> PlayerSet {
        self.masks[state * self.profiles + profile]
    }

    pub fn is_safe(&self, state: usize, profile: usize, winners: PlayerSet, everyone: PlayerSet) -> bool {
        let losers = PlayerSet::from_bits(everyone.bits() & !winners.bits());
        losers.is_subset(self.mask(state, profile))
    }

    /// The safe subgraph for `winners`, pruned to what the initial state reaches.
    pub fn restrict(&self, egame: &ExpandedGame<'_>, winners: PlayerSet) -> SafeRestriction {
        let everyone = egame.everyone();
        let n = egame.state_count();
        let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut order = Vec::new();
        let mut queue = std::collections::VecDeque::from([egame.initial_state()]);
        seen[egame.initial_state()] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for p in 0..self.profiles {
                if self.is_safe(x, p, winners, everyone) {
                    let y = egame.successor_of(x, p);
                    edges[x].push((p, y));
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        order.sort_unstable();
        SafeRestriction {
            winners,
            states: order,
            edges,
        }
    }
}

/// Safe transitions for a set of winners, restricted to those reachable from
/// the initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafeRestriction {
    pub winners: PlayerSet,
    states: Vec<usize>,
    edges: Vec<Vec<(usize, usize)>>,
}

impl SafeRestriction {
    /// Reachable states, ascending. The initial state is always listed.
    pub fn states(&self) -> &[usize] {
        &self.states
    }

    /// `(profile, successor)` pairs of the safe transitions leaving `state`.
    pub fn edges(&self, state: usize) -> &[(usize, usize)] {
        &self.edges[state]
    }

    pub fn contains(&self, state: usize, profile: usize) -> bool {
        self.edges[state].iter().any(|&(p, _)| p == profile)
    }

    pub fn transition_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// No safe transition leaves the initial state.
    pub fn is_empty(&self) -> bool {
        self.transition_count() == 0
    }
}

/// Safe subgraph of `egame` for `winners`.
pub fn safe_restrict(egame: &ExpandedGame<'_>, winners: PlayerSet, punish: &[ValueMap]) -> SafeRestriction {
    SafetyTable::new(egame, punish).restrict(egame, winners)
}
