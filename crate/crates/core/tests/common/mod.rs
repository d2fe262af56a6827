#![allow(dead_code)]

use std::collections::BTreeSet;

use qcg_core::generators::{self, RandomGameConfig, StageGameConfig, TargetMode};
use qcg_core::{CostVector, FrontierEntry, Game};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn fixtures() -> Vec<(&'static str, Game)> {
    vec![
        ("xor", generators::xor()),
        ("exp_ne(1)", generators::exp_ne(1).unwrap()),
        ("exp_ne(2)", generators::exp_ne(2).unwrap()),
        ("exp_ne(3)", generators::exp_ne(3).unwrap()),
        ("infinite_ne", generators::infinite_ne()),
        ("pos(1)", generators::pos(1).unwrap()),
        ("pos(5)", generators::pos(5).unwrap()),
        ("partition(2,2)", generators::partition(&[2, 2]).unwrap()),
        ("partition(2,4)", generators::partition(&[2, 4]).unwrap()),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` games drawn from one seeded stream.
pub fn random_games(seed: u64, count: usize, cfg: &RandomGameConfig) -> Vec<Game> {
    let mut r = rng(seed);
    (0..count).map(|_| generators::random_game(&mut r, cfg)).collect()
}

/// `count` stage-chain games drawn from one seeded stream.
pub fn stage_games(seed: u64, count: usize, cfg: &StageGameConfig) -> Vec<Game> {
    let mut r = rng(seed);
    (0..count).map(|_| generators::random_stage_game(&mut r, cfg)).collect()
}

pub fn stages(players: usize, private_targets: f64) -> StageGameConfig {
    StageGameConfig {
        stages: if players > 2 { 2 } else { 3 },
        players,
        private_targets,
        ..StageGameConfig::default()
    }
}

pub fn small(players: usize, max_states: usize) -> RandomGameConfig {
    RandomGameConfig {
        min_states: 1,
        max_states,
        players,
        max_actions: 2,
        max_cost: 3,
        uniform_costs: false,
        targets: TargetMode::PerPlayer,
        target_density: 0.35,
    }
}

pub fn joint_uniform(players: usize, max_states: usize) -> RandomGameConfig {
    RandomGameConfig {
        uniform_costs: true,
        targets: TargetMode::Joint,
        ..small(players, max_states)
    }
}

pub fn costs(entries: &[FrontierEntry]) -> BTreeSet<CostVector> {
    entries.iter().map(|e| e.cost.clone()).collect()
}
