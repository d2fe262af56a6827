use std::collections::HashMap;

use super::{Game, TransitionRule};
use crate::error::{Error, Result};

/// Name-based construction of a [`Game`].
///
/// Errors (unknown names, duplicate declarations) are deferred to
/// [`GameBuilder::build`] so that calls can be chained.
///
/// ```
/// use qcg_core::GameBuilder;
///
/// let game = GameBuilder::new(&["p"])
///     .actions("p", &["go"])
///     .state("s")
///     .state("t")
///     .initial("s")
///     .target("t", &["p"])
///     .rule("s", &["*"], "t", &[1])
///     .rule("t", &["*"], "t", &[0])
///     .build()
///     .unwrap();
/// assert_eq!(game.states().len(), 2);
/// ```
#[derive(Clone, Debug, Default)]
pub struct GameBuilder {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    states: Vec<String>,
    state_index: HashMap<String, usize>,
    initial: Option<String>,
    targets: Vec<(String, Vec<String>)>,
    rules: Vec<(String, Vec<String>, String, Vec<u64>)>,
    errors: Vec<String>,
}

impl GameBuilder {
    pub fn new<S: AsRef<str>>(players: &[S]) -> Self {
        let players: Vec<String> = players.iter().map(|p| p.as_ref().to_owned()).collect();
        let mut builder = GameBuilder {
            actions: vec![Vec::new(); players.len()],
            ..GameBuilder::default()
        };
        for (i, p) in players.iter().enumerate() {
            if players[..i].contains(p) {
                builder.errors.push(format!("player `{p}` declared twice"));
            }
        }
        builder.players = players;
        builder
    }

    pub fn actions<S: AsRef<str>>(mut self, player: &str, symbols: &[S]) -> Self {
        match self.players.iter().position(|p| p == player) {
            Some(i) => {
                self.actions[i] = symbols.iter().map(|s| s.as_ref().to_owned()).collect();
            }
            None => self.errors.push(format!("unknown player `{player}`")),
        }
        self
    }

    pub fn state(mut self, name: impl Into<String>) -> Self {
        let name = name.into();
        if self.state_index.contains_key(&name) {
            self.errors.push(format!("state `{name}` declared twice"));
        } else {
            self.state_index.insert(name.clone(), self.states.len());
            self.states.push(name);
        }
        self
    }

    pub fn initial(mut self, name: impl Into<String>) -> Self {
        let name = name.into();
        if self.initial.is_some() {
            self.errors.push("initial state declared twice".into());
        }
        self.initial = Some(name);
        self
    }

    /// Adds `state` to the target set of each listed player.
    pub fn target<S: AsRef<str>>(mut self, state: impl Into<String>, players: &[S]) -> Self {
        self.targets.push((
            state.into(),
            players.iter().map(|p| p.as_ref().to_owned()).collect(),
        ));
        self
    }

    /// Appends a rule; `"*"` in the pattern is a wildcard.
    pub fn rule<S: AsRef<str>>(
        mut self,
        source: impl Into<String>,
        pattern: &[S],
        target: impl Into<String>,
        cost: &[u64],
    ) -> Self {
        self.rules.push((
            source.into(),
            pattern.iter().map(|s| s.as_ref().to_owned()).collect(),
            target.into(),
            cost.to_vec(),
        ));
        self
    }

    pub fn build(self) -> Result<Game> {
        if let Some(e) = self.errors.into_iter().next() {
            return Err(Error::InvalidGame(e));
        }
        let lookup = |name: &str| {
            self.state_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidGame(format!("undeclared state `{name}`")))
        };
        let player = |name: &str| {
            self.players
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| Error::InvalidGame(format!("undeclared player `{name}`")))
        };
        let initial = self
            .initial
            .as_deref()
            .ok_or_else(|| Error::InvalidGame("no initial state".into()))
            .and_then(lookup)?;
        let mut targets = vec![Vec::new(); self.players.len()];
        for (state, owners) in &self.targets {
            let s = lookup(state)?;
            for owner in owners {
                targets[player(owner)?].push(s);
            }
        }
        let mut rules = Vec::with_capacity(self.rules.len());
        for (source, pattern, target, cost) in &self.rules {
            if pattern.len() != self.players.len() {
                return Err(Error::InvalidGame(format!(
                    "rule from `{source}` has {} pattern entries, expected {}",
                    pattern.len(),
                    self.players.len()
                )));
            }
            let pattern = pattern
                .iter()
                .enumerate()
                .map(|(p, sym)| {
                    if sym == "*" {
                        Ok(None)
                    } else {
                        self.actions[p]
                            .iter()
                            .position(|a| a == sym)
                            .map(Some)
                            .ok_or_else(|| {
                                Error::InvalidGame(format!(
                                    "undeclared action `{sym}` for player `{}`",
                                    self.players[p]
                                ))
                            })
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rules.push(TransitionRule {
                source: lookup(source)?,
                pattern,
                target: lookup(target)?,
                cost: cost.clone(),
            });
        }
        Game::new(
            self.players,
            self.actions,
            self.states,
            initial,
            targets,
            rules,
        )
    }
}
