//! Lasso-shaped plays, their cost vectors, and the deviation check that
//! decides whether a play is the outcome of a Nash equilibrium.

mod fragments;
mod frontier;

pub use fragments::ne_po_joint_uniform;
pub use frontier::{
    compute_ne_po, compute_ne_po_with, ne_exists, threshold_ne, Analysis, DpMode, DpRun,
    FrontierConfig, FrontierEntry, DEFAULT_ENTRY_CAP, DEFAULT_PLAYER_CAP,
};

use crate::coalition::ValueMap;
use crate::cost::{CostValue, CostVector};
use crate::error::{Error, Result};
use crate::expand::ExpandedGame;
use crate::game::{Arena, PlayerId, PlayerSet};

/// One move of a play: the base state it leaves and the profile played.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub state: usize,
    pub profile: usize,
}

/// A play that follows `prefix` from the initial state and then repeats
/// `cycle` forever.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lasso {
    pub prefix: Vec<Step>,
    pub cycle: Vec<Step>,
}

/// A lasso replayed in the expanded game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedLasso {
    /// Expanded state left by each step of the prefix followed by the cycle.
    pub states: Vec<usize>,
    pub profiles: Vec<usize>,
    pub prefix_len: usize,
    /// Players whose targets the play visits.
    pub winners: PlayerSet,
}

impl ResolvedLasso {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

impl Lasso {
    pub fn new(prefix: Vec<Step>, cycle: Vec<Step>) -> Self {
        Lasso { prefix, cycle }
    }

    fn steps(&self) -> impl Iterator<Item = &Step> {
        self.prefix.iter().chain(&self.cycle)
    }

    /// Replays the lasso from the initial state of `egame`.
    ///
    /// Fails if a step leaves a state other than the one the play is in,
    /// if the cycle is empty, does not return to its first state, or visits
    /// a state twice.
    pub fn resolve(&self, egame: &ExpandedGame<'_>) -> Result<ResolvedLasso> {
        if self.cycle.is_empty() {
            return Err(Error::MalformedLasso("the cycle is empty".into()));
        }
        let game = egame.game();
        let profiles = game.profiles().len();
        let mut x = egame.initial_state();
        let mut states = Vec::with_capacity(self.prefix.len() + self.cycle.len());
        for (k, step) in self.steps().enumerate() {
            if step.profile >= profiles {
                return Err(Error::MalformedLasso(format!("step {k} uses an unknown profile")));
            }
            let here = egame.state(x).base;
            if step.state != here {
                return Err(Error::MalformedLasso(format!(
                    "step {k} leaves `{}` but the play is in `{}`",
                    game.states().get(step.state).map_or("?", String::as_str),
                    game.state_name(here)
                )));
            }
            states.push(x);
            x = egame.successor_of(x, step.profile);
        }
        let start = states[self.prefix.len()];
        if x != start {
            return Err(Error::MalformedLasso(
                "the cycle does not return to its first state".into(),
            ));
        }
        let mut seen = states[self.prefix.len()..].to_vec();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedLasso("the cycle is not simple".into()));
        }
        Ok(ResolvedLasso {
            winners: egame.reached(start),
            prefix_len: self.prefix.len(),
            profiles: self.steps().map(|s| s.profile).collect(),
            states,
        })
    }
}

/// Cost vector of the play: for every player that visits its target, the
/// sum of its costs up to the first visit; `∞` for the others.
pub fn outcome_cost(egame: &ExpandedGame<'_>, lasso: &Lasso) -> Result<CostVector> {
    let r = lasso.resolve(egame)?;
    Ok(resolved_cost(egame, &r))
}

fn resolved_cost(egame: &ExpandedGame<'_>, r: &ResolvedLasso) -> CostVector {
    (0..egame.player_count())
        .map(PlayerId)
        .map(|p| {
            if r.winners.contains(p) {
                (0..r.prefix_len)
                    .map(|k| egame.cost_of(r.states[k], r.profiles[k], p))
                    .fold(CostValue::ZERO, |acc, c| acc + c)
            } else {
                CostValue::Infinite
            }
        })
        .collect()
}

/// A profitable unilateral deviation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Index into prefix followed by cycle.
    pub position: usize,
    pub deviator: PlayerId,
    pub action: usize,
    /// How much the deviator saves; `∞` when it would otherwise lose.
    pub improvement: CostValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeVerdict {
    pub cost: CostVector,
    pub violation: Option<Violation>,
}

impl NeVerdict {
    pub fn is_ne(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks the deviation criterion along the prefix and one pass of the
/// cycle: a player switching its action at position `j` pays what it paid
/// before `j`, the cost of the deviating step, and then its punishment value
/// from wherever that step lands. The play is an equilibrium iff no such
/// total is strictly below the player's own outcome cost.
///
/// `punish[α]` must hold the punishment values of player `α` on `egame`.
/// The first violation in (position, player, action) order is reported.
pub fn check_ne(egame: &ExpandedGame<'_>, lasso: &Lasso, punish: &[ValueMap]) -> Result<NeVerdict> {
    let r = lasso.resolve(egame)?;
    let cost = resolved_cost(egame, &r);
    let space = egame.profile_space();
    let players = egame.player_count();
    let mut paid = vec![CostValue::ZERO; players];
    for (j, (&x, &p)) in r.states.iter().zip(&r.profiles).enumerate() {
        for alpha in (0..players).map(PlayerId) {
            let played = space.action_of(p, alpha);
            for a in (0..space.actions(alpha)).filter(|&a| a != played) {
                let q = space.replace(p, alpha, a);
                let total = paid[alpha.0] + egame.cost_of(x, q, alpha)
                    + punish[alpha.0].values[egame.successor_of(x, q)];
                if total < cost[alpha.0] {
                    let improvement = match (cost[alpha.0], total) {
                        (CostValue::Finite(c), CostValue::Finite(t)) => CostValue::Finite(c - t),
                        _ => CostValue::Infinite,
                    };
                    return Ok(NeVerdict {
                        cost,
                        violation: Some(Violation {
                            position: j,
                            deviator: alpha,
                            action: a,
                            improvement,
                        }),
                    });
                }
            }
            paid[alpha.0] = paid[alpha.0] + egame.cost_of(x, p, alpha);
        }
    }
    Ok(NeVerdict {
        cost,
        violation: None,
    })
}
