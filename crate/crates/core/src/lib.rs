//! Nash equilibria of quantitative concurrent games with reachability
//! objectives.
//!
//! A [`Game`] is played on a finite graph: in every round all players pick an
//! action at once, the profile selects a transition, and each player is
//! charged its entry of the transition's cost vector until it first visits
//! its target set. The crate computes punishment values, checks candidate
//! equilibria given as lassos, enumerates the Pareto-optimal equilibrium
//! costs, and measures the price of stability and anarchy.
//!
//! ```
//! use qcg_core::{compute_ne_po, parse_game, CostVector};
//!
//! let game = parse_game(
//!     "players p1 p2
//!      actions p1: a b
//!      actions p2: a b
//!      state s init
//!      state t target: p1 p2
//!      state sink
//!      trans s [a,a] -> s cost [1,1]
//!      trans s [b,b] -> t cost [1,1]
//!      trans s [*,*] -> sink cost [0,0]
//!      trans t [*,*] -> t cost [0,0]
//!      trans sink [*,*] -> sink cost [0,0]",
//! )
//! .unwrap();
//! let frontier = compute_ne_po(&game).unwrap();
//! assert_eq!(frontier[0].cost, CostVector::finite(&[1, 1]));
//! ```

pub mod coalition;
pub mod cost;
pub mod equilibrium;
pub mod error;
pub mod expand;
pub mod game;
pub mod generators;
pub mod metrics;
pub mod oracle;

pub use coalition::{best_response_cost, coalition_values, punishing_strategy, PunishmentTable, ValueMap};
pub use cost::{pareto_filter, CostValue, CostVector};
pub use equilibrium::{
    check_ne, compute_ne_po, compute_ne_po_with, ne_exists, ne_po_joint_uniform, outcome_cost,
    threshold_ne, Analysis, FrontierConfig, FrontierEntry, Lasso, NeVerdict, Step, Violation,
};
pub use error::{Error, Result};
pub use expand::{safe_restrict, ExpandedGame, ExpandedState};
pub use game::{parse_game, ActionProfile, Arena, Game, GameBuilder, PlayerId, PlayerSet, Transition};
pub use metrics::{pos_poa, social_optimum, MetricsReport};

/// Builds the expanded game of `game`.
pub fn expand(game: &Game) -> Result<ExpandedGame<'_>> {
    ExpandedGame::new(game)
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    struct Overview;
    #[doc = include_str!("../../../book/src/game-format.md")]
    struct GameFormat;
    #[doc = include_str!("../../../book/src/expansion.md")]
    struct Expansion;
    #[doc = include_str!("../../../book/src/punishment.md")]
    struct Punishment;
    #[doc = include_str!("../../../book/src/equilibria.md")]
    struct Equilibria;
    #[doc = include_str!("../../../book/src/frontier.md")]
    struct Frontier;
    #[doc = include_str!("../../../book/src/metrics.md")]
    struct Metrics;
    #[doc = include_str!("../../../book/src/reductions.md")]
    struct Reductions;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
    #[doc = include_str!("../../../README.md")]
    struct Readme;
}
