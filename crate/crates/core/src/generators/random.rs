use rand::Rng;

use crate::game::{Game, GameBuilder, ProfileSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetMode {
    /// Each player draws its own target set.
    PerPlayer,
    /// One target set shared by all players.
    Joint,
}

/// Shape of the small games drawn by [`random_game`].
#[derive(Clone, Debug)]
pub struct RandomGameConfig {
    pub min_states: usize,
    pub max_states: usize,
    pub players: usize,
    pub max_actions: usize,
    /// Costs are drawn from `0..=max_cost`; ignored when `uniform_costs`.
    pub max_cost: u64,
    pub uniform_costs: bool,
    pub targets: TargetMode,
    /// Chance that a state belongs to a target set.
    pub target_density: f64,
}

impl Default for RandomGameConfig {
    fn default() -> Self {
        RandomGameConfig {
            min_states: 1,
            max_states: 4,
            players: 2,
            max_actions: 2,
            max_cost: 3,
            uniform_costs: false,
            targets: TargetMode::PerPlayer,
            target_density: 0.3,
        }
    }
}

/// Draws a game with one explicit rule per `(state, profile)`.
///
/// Every player gets between 1 and `max_actions` actions; the initial state
/// is `s0`.
pub fn random_game<R: Rng + ?Sized>(rng: &mut R, cfg: &RandomGameConfig) -> Game {
    let states = rng.gen_range(cfg.min_states.max(1)..=cfg.max_states.max(cfg.min_states).max(1));
    let players: Vec<String> = (1..=cfg.players).map(|p| format!("p{p}")).collect();
    let radices: Vec<usize> = (0..cfg.players)
        .map(|_| rng.gen_range(1..=cfg.max_actions.max(1)))
        .collect();
    let mut b = GameBuilder::new(&players);
    for (p, &k) in players.iter().zip(&radices) {
        let names: Vec<String> = (0..k).map(|a| format!("a{a}")).collect();
        b = b.actions(p, &names);
    }
    let name = |s: usize| format!("s{s}");
    for s in 0..states {
        b = b.state(name(s));
    }
    b = b.initial(name(0));
    let mut draw_targets = || -> Vec<String> {
        (0..states)
            .filter(|_| rng.gen_bool(cfg.target_density))
            .map(name)
            .collect()
    };
    match cfg.targets {
        TargetMode::Joint => {
            for s in draw_targets() {
                b = b.target(s, &players);
            }
        }
        TargetMode::PerPlayer => {
            for p in &players {
                for s in draw_targets() {
                    b = b.target(s, &[p]);
                }
            }
        }
    }
    let space = ProfileSpace::new(radices).expect("small profile space");
    for s in 0..states {
        for idx in 0..space.len() {
            let pattern: Vec<String> = space.decode(idx).0.iter().map(|a| format!("a{a}")).collect();
            let cost: Vec<u64> = (0..cfg.players)
                .map(|_| {
                    if cfg.uniform_costs {
                        1
                    } else {
                        rng.gen_range(0..=cfg.max_cost)
                    }
                })
                .collect();
            b = b.rule(name(s), &pattern, name(rng.gen_range(0..states)), &cost);
        }
    }
    b.build().expect("random games are total by construction")
}

/// Shape of the games drawn by [`random_stage_game`].
#[derive(Clone, Debug)]
pub struct StageGameConfig {
    pub stages: usize,
    pub players: usize,
    pub max_cost: u64,
    /// Chance that a profile jumps back to an earlier or the same stage.
    pub back_edge: f64,
    /// Chance that a stage is also a private target of a given player.
    pub private_targets: f64,
}

impl Default for StageGameConfig {
    fn default() -> Self {
        StageGameConfig {
            stages: 3,
            players: 2,
            max_cost: 3,
            back_edge: 0.15,
            private_targets: 0.0,
        }
    }
}

/// Draws a chain of matrix stages `s0 ... sN` ending in the shared target
/// `t`. Every player has actions `a` and `b`; each profile at a stage moves
/// forward to a random later stage (or `t` from the last one), or with
/// probability `back_edge` back to a random stage no later than itself.
///
/// These games tend to have several incomparable equilibrium costs, unlike
/// the uniform draws of [`random_game`].
pub fn random_stage_game<R: Rng + ?Sized>(rng: &mut R, cfg: &StageGameConfig) -> Game {
    let players: Vec<String> = (1..=cfg.players).map(|p| format!("p{p}")).collect();
    let mut b = GameBuilder::new(&players);
    for p in &players {
        b = b.actions(p, &["a", "b"]);
    }
    let last = cfg.stages;
    for i in 0..=last {
        b = b.state(format!("s{i}"));
    }
    b = b.state("t").initial("s0").target("t", &players);
    for i in 1..=last {
        for p in &players {
            if rng.gen_bool(cfg.private_targets) {
                b = b.target(format!("s{i}"), &[p]);
            }
        }
    }
    let space = ProfileSpace::new(vec![2; cfg.players]).expect("small profile space");
    for i in 0..=last {
        for idx in 0..space.len() {
            let pattern: Vec<&str> = space.decode(idx).0.iter().map(|&a| ["a", "b"][a]).collect();
            let to = if rng.gen_bool(cfg.back_edge) {
                format!("s{}", rng.gen_range(0..=i))
            } else if i == last {
                "t".to_owned()
            } else {
                format!("s{}", rng.gen_range(i + 1..=last))
            };
            let cost: Vec<u64> = (0..cfg.players).map(|_| rng.gen_range(0..=cfg.max_cost)).collect();
            b = b.rule(format!("s{i}"), &pattern, to, &cost);
        }
    }
    let free = vec![0; cfg.players];
    b.rule("t", &vec!["*"; cfg.players], "t", &free)
        .build()
        .expect("stage games are total by construction")
}
