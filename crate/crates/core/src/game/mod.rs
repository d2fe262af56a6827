//! The game model: players, action alphabets, states, targets and an ordered
//! list of pattern rules that defines the transition and cost functions.

mod builder;
mod parse;

pub use builder::GameBuilder;
pub use parse::parse_game;

use std::fmt;

use crate::cost::CostVector;
use crate::error::{Error, Result};

/// Most players a game may declare; player sets are 32-bit masks.
pub const MAX_PLAYERS: usize = 32;

/// Largest value any cost sum is allowed to reach.
const COST_CEILING: u128 = 1 << 62;

/// Extra cycle repetitions the metrics pump test may splice into a play.
pub(crate) const PUMP_ALLOWANCE: u128 = 4;

/// 0-based ordinal into the player list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerId(pub usize);

impl PlayerId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A set of players as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerSet(u32);

impl PlayerSet {
    pub const EMPTY: PlayerSet = PlayerSet(0);

    pub fn full(players: usize) -> Self {
        if players >= 32 {
            PlayerSet(u32::MAX)
        } else {
            PlayerSet((1u32 << players) - 1)
        }
    }

    pub fn from_bits(bits: u32) -> Self {
        PlayerSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, p: PlayerId) -> bool {
        self.0 >> p.0 & 1 == 1
    }

    pub fn with(self, p: PlayerId) -> Self {
        PlayerSet(self.0 | 1 << p.0)
    }

    pub fn union(self, other: PlayerSet) -> Self {
        PlayerSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: PlayerSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = PlayerId> {
        (0..32).filter(move |&i| self.0 >> i & 1 == 1).map(PlayerId)
    }
}

impl FromIterator<PlayerId> for PlayerSet {
    fn from_iter<I: IntoIterator<Item = PlayerId>>(iter: I) -> Self {
        iter.into_iter().fold(PlayerSet::EMPTY, PlayerSet::with)
    }
}

/// One action index per player.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionProfile(pub Vec<usize>);

impl ActionProfile {
    pub fn action(&self, p: PlayerId) -> usize {
        self.0[p.0]
    }

    pub fn with_action(&self, p: PlayerId, action: usize) -> ActionProfile {
        let mut actions = self.0.clone();
        actions[p.0] = action;
        ActionProfile(actions)
    }
}

/// Mixed-radix numbering of all action profiles.
///
/// Player 0 is the most significant digit, so increasing indices enumerate
/// profiles in lexicographic (declaration) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileSpace {
    radices: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl ProfileSpace {
    pub fn new(radices: Vec<usize>) -> Option<Self> {
        let mut strides = vec![0; radices.len()];
        let mut total: usize = 1;
        for i in (0..radices.len()).rev() {
            strides[i] = total;
            total = total.checked_mul(radices[i])?;
        }
        Some(ProfileSpace {
            radices,
            strides,
            total,
        })
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn players(&self) -> usize {
        self.radices.len()
    }

    pub fn actions(&self, p: PlayerId) -> usize {
        self.radices[p.0]
    }

    pub fn encode(&self, profile: &ActionProfile) -> usize {
        profile
            .0
            .iter()
            .zip(&self.strides)
            .map(|(a, s)| a * s)
            .sum()
    }

    pub fn decode(&self, index: usize) -> ActionProfile {
        ActionProfile(
            self.radices
                .iter()
                .zip(&self.strides)
                .map(|(r, s)| index / s % r)
                .collect(),
        )
    }

    /// The action of `p` in the profile numbered `index`.
    pub fn action_of(&self, index: usize, p: PlayerId) -> usize {
        index / self.strides[p.0] % self.radices[p.0]
    }

    /// The profile obtained from `index` by switching `p` to `action`.
    pub fn replace(&self, index: usize, p: PlayerId, action: usize) -> usize {
        let current = self.action_of(index, p);
        index - current * self.strides[p.0] + action * self.strides[p.0]
    }

    /// Profiles in which `p` plays action 0: one per coalition move against `p`,
    /// in declaration order.
    pub fn coalition_moves(&self, p: PlayerId) -> impl Iterator<Item = usize> + '_ {
        (0..self.total).filter(move |&i| self.action_of(i, p) == 0)
    }
}

/// One action symbol (or wildcard) per player.
pub type Pattern = Vec<Option<usize>>;

/// `source [pattern] -> target cost [...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionRule {
    pub source: usize,
    pub pattern: Pattern,
    pub target: usize,
    pub cost: Vec<u64>,
}

impl TransitionRule {
    pub fn matches(&self, profile: &ActionProfile) -> bool {
        self.pattern
            .iter()
            .zip(&profile.0)
            .all(|(pat, &a)| pat.is_none_or(|p| p == a))
    }
}

/// A resolved step `(source, profile, target)` with its cost vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: usize,
    pub profile: ActionProfile,
    pub target: usize,
    pub cost: CostVector,
}

/// Read-only view shared by [`Game`] and the expanded game, so that the
/// coalition solver runs on either.
pub trait Arena {
    fn player_count(&self) -> usize;
    fn state_count(&self) -> usize;
    fn profile_space(&self) -> &ProfileSpace;
    fn initial_state(&self) -> usize;
    fn successor_of(&self, state: usize, profile: usize) -> usize;
    fn cost_of(&self, state: usize, profile: usize, player: PlayerId) -> u64;
    fn in_target(&self, state: usize, player: PlayerId) -> bool;
    fn state_label(&self, state: usize) -> String;
}

/// A quantitative concurrent game with reachability objectives.
///
/// The transition function is total and deterministic: for every state and
/// profile the first matching rule wins. This is checked on construction and
/// cached in a dense `(state, profile) -> rule` table.
#[derive(Clone, Debug)]
pub struct Game {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    states: Vec<String>,
    initial: usize,
    targets: Vec<Vec<usize>>,
    reached_at: Vec<PlayerSet>,
    rules: Vec<TransitionRule>,
    profiles: ProfileSpace,
    table: Vec<u32>,
    max_cost: u64,
}

impl PartialEq for Game {
    fn eq(&self, other: &Self) -> bool {
        self.players == other.players
            && self.actions == other.actions
            && self.states == other.states
            && self.initial == other.initial
            && self.targets == other.targets
            && self.rules == other.rules
    }
}

impl Eq for Game {}

impl Game {
    /// Validates the components and builds the rule table.
    ///
    /// `targets[p]` lists the target states of player `p`.
    pub fn new(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        states: Vec<String>,
        initial: usize,
        targets: Vec<Vec<usize>>,
        rules: Vec<TransitionRule>,
    ) -> Result<Game> {
        let n = players.len();
        if n == 0 {
            return Err(Error::InvalidGame("at least one player is required".into()));
        }
        if n > MAX_PLAYERS {
            return Err(Error::InvalidGame(format!(
                "{n} players declared, at most {MAX_PLAYERS} are supported"
            )));
        }
        if actions.len() != n || targets.len() != n {
            return Err(Error::InvalidGame(
                "every player needs an action alphabet and a target set".into(),
            ));
        }
        for (p, alphabet) in actions.iter().enumerate() {
            if alphabet.is_empty() {
                return Err(Error::InvalidGame(format!(
                    "player `{}` has an empty action alphabet",
                    players[p]
                )));
            }
        }
        if states.is_empty() || initial >= states.len() {
            return Err(Error::InvalidGame("initial state is not declared".into()));
        }
        let mut reached_at = vec![PlayerSet::EMPTY; states.len()];
        let mut sorted_targets = Vec::with_capacity(n);
        for (p, set) in targets.into_iter().enumerate() {
            let mut set = set;
            set.sort_unstable();
            set.dedup();
            for &s in &set {
                if s >= states.len() {
                    return Err(Error::InvalidGame(format!(
                        "target of player `{}` is not a declared state",
                        players[p]
                    )));
                }
                reached_at[s] = reached_at[s].with(PlayerId(p));
            }
            sorted_targets.push(set);
        }
        let mut max_cost = 0;
        for rule in &rules {
            if rule.source >= states.len() || rule.target >= states.len() {
                return Err(Error::InvalidGame("rule refers to an undeclared state".into()));
            }
            if rule.pattern.len() != n || rule.cost.len() != n {
                return Err(Error::InvalidGame(format!(
                    "rule from `{}` needs exactly {n} pattern and cost entries",
                    states[rule.source]
                )));
            }
            for (p, pat) in rule.pattern.iter().enumerate() {
                if let Some(a) = pat {
                    if *a >= actions[p].len() {
                        return Err(Error::InvalidGame("rule uses an undeclared action".into()));
                    }
                }
            }
            max_cost = rule.cost.iter().copied().fold(max_cost, u64::max);
        }

        let bound = max_cost as u128
            * (n as u128 + 1)
            * states.len() as u128
            * n as u128
            * PUMP_ALLOWANCE;
        if bound >= COST_CEILING {
            return Err(Error::CostOverflow { bound });
        }

        let profiles = ProfileSpace::new(actions.iter().map(Vec::len).collect())
            .ok_or_else(|| Error::InvalidGame("too many action profiles".into()))?;
        let table_len = profiles
            .len()
            .checked_mul(states.len())
            .filter(|&len| len <= 1 << 28)
            .ok_or_else(|| Error::InvalidGame("transition table too large".into()))?;

        let mut table = vec![u32::MAX; table_len];
        for (r, rule) in rules.iter().enumerate() {
            let base = rule.source * profiles.len();
            for_each_match(&profiles, &rule.pattern, |p| {
                let slot = &mut table[base + p];
                if *slot == u32::MAX {
                    *slot = r as u32;
                }
            });
        }
        if let Some(missing) = table.iter().position(|&r| r == u32::MAX) {
            let state = missing / profiles.len();
            let profile = profiles.decode(missing % profiles.len());
            return Err(Error::NotTotal {
                state: states[state].clone(),
                profile: profile
                    .0
                    .iter()
                    .enumerate()
                    .map(|(p, &a)| actions[p][a].as_str())
                    .collect::<Vec<_>>()
                    .join(","),
            });
        }

        Ok(Game {
            players,
            actions,
            states,
            initial,
            targets: sorted_targets,
            reached_at,
            rules,
            profiles,
            table,
            max_cost,
        })
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn player_ids(&self) -> impl Iterator<Item = PlayerId> {
        (0..self.players.len()).map(PlayerId)
    }

    pub fn player_name(&self, p: PlayerId) -> &str {
        &self.players[p.0]
    }

    pub fn player_by_name(&self, name: &str) -> Option<PlayerId> {
        self.players.iter().position(|n| n == name).map(PlayerId)
    }

    pub fn actions(&self, p: PlayerId) -> &[String] {
        &self.actions[p.0]
    }

    pub fn action_by_name(&self, p: PlayerId, name: &str) -> Option<usize> {
        self.actions[p.0].iter().position(|a| a == name)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn state_by_name(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|n| n == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Target states of `p`, sorted.
    pub fn targets(&self, p: PlayerId) -> &[usize] {
        &self.targets[p.0]
    }

    /// Players whose target set contains `state`.
    pub fn reached_at(&self, state: usize) -> PlayerSet {
        self.reached_at[state]
    }

    pub fn rules(&self) -> &[TransitionRule] {
        &self.rules
    }

    pub fn profiles(&self) -> &ProfileSpace {
        &self.profiles
    }

    /// Largest cost entry over all rules.
    pub fn max_cost(&self) -> u64 {
        self.max_cost
    }

    /// Index of the rule that fires in `state` under the numbered profile.
    pub fn rule_index(&self, state: usize, profile: usize) -> usize {
        self.table[state * self.profiles.len() + profile] as usize
    }

    pub fn rule_at(&self, state: usize, profile: usize) -> &TransitionRule {
        &self.rules[self.rule_index(state, profile)]
    }

    /// The transition taken from `state` under `profile` (first matching rule).
    pub fn successor(&self, state: usize, profile: &ActionProfile) -> Transition {
        let rule = self.rule_at(state, self.profiles.encode(profile));
        Transition {
            source: state,
            profile: profile.clone(),
            target: rule.target,
            cost: CostVector::finite(&rule.cost),
        }
    }

    /// Looks up a profile given by action names in player order.
    pub fn profile_by_names<S: AsRef<str>>(&self, names: &[S]) -> Option<ActionProfile> {
        if names.len() != self.players.len() {
            return None;
        }
        names
            .iter()
            .enumerate()
            .map(|(p, n)| self.action_by_name(PlayerId(p), n.as_ref()))
            .collect::<Option<Vec<_>>>()
            .map(ActionProfile)
    }

    pub fn profile_names(&self, profile: &ActionProfile) -> Vec<String> {
        profile
            .0
            .iter()
            .enumerate()
            .map(|(p, &a)| self.actions[p][a].clone())
            .collect()
    }

    /// All players share one target set.
    pub fn is_joint_target(&self) -> bool {
        self.targets.windows(2).all(|w| w[0] == w[1])
    }

    /// Every rule charges 1 to every player.
    pub fn has_uniform_costs(&self) -> bool {
        self.rules.iter().all(|r| r.cost.iter().all(|&c| c == 1))
    }

    /// Serializes to the line-oriented game format.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Arena for Game {
    fn player_count(&self) -> usize {
        self.players.len()
    }

    fn state_count(&self) -> usize {
        self.states.len()
    }

    fn profile_space(&self) -> &ProfileSpace {
        &self.profiles
    }

    fn initial_state(&self) -> usize {
        self.initial
    }

    fn successor_of(&self, state: usize, profile: usize) -> usize {
        self.rule_at(state, profile).target
    }

    fn cost_of(&self, state: usize, profile: usize, player: PlayerId) -> u64 {
        self.rule_at(state, profile).cost[player.0]
    }

    fn in_target(&self, state: usize, player: PlayerId) -> bool {
        self.reached_at[state].contains(player)
    }

    fn state_label(&self, state: usize) -> String {
        self.states[state].clone()
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "players {}", self.players.join(" "))?;
        for (p, alphabet) in self.actions.iter().enumerate() {
            writeln!(f, "actions {}: {}", self.players[p], alphabet.join(" "))?;
        }
        for (s, name) in self.states.iter().enumerate() {
            write!(f, "state {name}")?;
            if s == self.initial {
                f.write_str(" init")?;
            }
            let owners: Vec<&str> = self
                .reached_at(s)
                .iter()
                .map(|p| self.players[p.0].as_str())
                .collect();
            if !owners.is_empty() {
                write!(f, " target: {}", owners.join(" "))?;
            }
            writeln!(f)?;
        }
        for rule in &self.rules {
            let pattern: Vec<&str> = rule
                .pattern
                .iter()
                .enumerate()
                .map(|(p, a)| a.map_or("*", |a| self.actions[p][a].as_str()))
                .collect();
            let cost: Vec<String> = rule.cost.iter().map(u64::to_string).collect();
            writeln!(
                f,
                "trans {} [{}] -> {} cost [{}]",
                self.states[rule.source],
                pattern.join(","),
                self.states[rule.target],
                cost.join(",")
            )?;
        }
        Ok(())
    }
}

/// Calls `f` with the index of every profile matched by `pattern`.
fn for_each_match(space: &ProfileSpace, pattern: &Pattern, mut f: impl FnMut(usize)) {
    let fixed: usize = pattern
        .iter()
        .enumerate()
        .filter_map(|(p, a)| a.map(|a| a * space.strides[p]))
        .sum();
    let free: Vec<usize> = (0..pattern.len()).filter(|&p| pattern[p].is_none()).collect();
    let mut digits = vec![0usize; free.len()];
    loop {
        let index = fixed
            + free
                .iter()
                .zip(&digits)
                .map(|(&p, &d)| d * space.strides[p])
                .sum::<usize>();
        f(index);
        let mut k = free.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < space.radices[free[k]] {
                break;
            }
            digits[k] = 0;
        }
    }
}
