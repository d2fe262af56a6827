//! Fixture games and reduction families.
//!
//! Every constructor returns a validated [`Game`]. Two-player fixtures name
//! their players `p1` and `p2`.

mod random;
mod reductions;

pub use random::{random_game, random_stage_game, RandomGameConfig, StageGameConfig, TargetMode};
pub use reductions::{hampath, partition, three_sat, Cnf, Digraph};

use crate::error::{Error, Result};
use crate::game::{Game, GameBuilder};

/// Largest stage count accepted by [`exp_ne`].
pub const EXP_NE_MAX: u32 = 20;

const AB: [&str; 2] = ["a", "b"];

fn two_players() -> GameBuilder {
    GameBuilder::new(&["p1", "p2"]).actions("p1", &AB).actions("p2", &AB)
}

/// Adds a matching-pennies step: equal actions pay `same`, different ones
/// pay `diff`, both moving to `to`.
fn xor_step(b: GameBuilder, from: &str, to: &str, same: [u64; 2], diff: [u64; 2]) -> GameBuilder {
    b.rule(from, &["a", "a"], to, &same)
        .rule(from, &["b", "b"], to, &same)
        .rule(from, &["*", "*"], to, &diff)
}

/// Two states; from `s` every profile moves to the shared target `t`, with
/// matching actions charging `(0,1)` and mismatched ones `(1,0)`. No
/// equilibrium exists.
pub fn xor() -> Game {
    let b = two_players()
        .state("s")
        .state("t")
        .initial("s")
        .target("t", &["p1", "p2"]);
    xor_step(b, "s", "t", [0, 1], [1, 0])
        .rule("t", &["*", "*"], "t", &[0, 0])
        .build()
        .expect("fixture is valid")
}

/// A chain of `n` matching-pennies stages `s0 -> ... -> sn` where stage `i`
/// charges `2^i` to one player, followed by a final step from `sn` to `t`
/// that is free under `(b,b)` and costs `(2^n,2^n)` otherwise.
///
/// Every split `(x, 2^n-1-x)` is an equilibrium cost.
pub fn exp_ne(n: u32) -> Result<Game> {
    if n == 0 || n > EXP_NE_MAX {
        return Err(Error::InvalidInstance(format!(
            "stage count must be in 1..={EXP_NE_MAX}, got {n}"
        )));
    }
    let mut b = two_players();
    for i in 0..=n {
        b = b.state(format!("s{i}"));
    }
    b = b.state("t").initial("s0").target("t", &["p1", "p2"]);
    for i in 0..n {
        let w = 1u64 << i;
        b = xor_step(b, &format!("s{i}"), &format!("s{}", i + 1), [0, w], [w, 0]);
    }
    let top = 1u64 << n;
    let last = format!("s{n}");
    b.rule(last.as_str(), &["b", "b"], "t", &[0, 0])
        .rule(last.as_str(), &["*", "*"], "t", &[top, top])
        .rule("t", &["*", "*"], "t", &[0, 0])
        .build()
}

/// `(a,a)` loops on `s`, `(b,b)` moves to the target `t`, and any other
/// profile drops into `sink`. Every transition costs `(1,1)`.
pub fn infinite_ne() -> Game {
    two_players()
        .state("s")
        .state("t")
        .state("sink")
        .initial("s")
        .target("t", &["p1", "p2"])
        .rule("s", &["a", "a"], "s", &[1, 1])
        .rule("s", &["b", "b"], "t", &[1, 1])
        .rule("s", &["*", "*"], "sink", &[1, 1])
        .rule("t", &["*", "*"], "t", &[1, 1])
        .rule("sink", &["*", "*"], "sink", &[1, 1])
        .build()
        .expect("fixture is valid")
}

/// Price-of-stability example with actions `0` and `1`.
///
/// From `s0`, `(0,0)` leads to a free matching-pennies step `s1 -> s2`
/// costing `(0,1)` or `(1,0)`. Anything else costs `(w,w)` and enters `s3`,
/// which repeats that charge until both play `0` and move to `s4`.
pub fn pos(w: u64) -> Result<Game> {
    if w == 0 {
        return Err(Error::InvalidInstance("weight must be positive".into()));
    }
    let bits = ["0", "1"];
    GameBuilder::new(&["p1", "p2"])
        .actions("p1", &bits)
        .actions("p2", &bits)
        .state("s0")
        .state("s1")
        .state("s2")
        .state("s3")
        .state("s4")
        .initial("s0")
        .target("s2", &["p1", "p2"])
        .target("s4", &["p1", "p2"])
        .rule("s0", &["0", "0"], "s1", &[0, 0])
        .rule("s0", &["*", "*"], "s3", &[w, w])
        .rule("s1", &["0", "0"], "s2", &[0, 1])
        .rule("s1", &["1", "1"], "s2", &[0, 1])
        .rule("s1", &["*", "*"], "s2", &[1, 0])
        .rule("s2", &["*", "*"], "s2", &[0, 0])
        .rule("s3", &["0", "0"], "s4", &[0, 0])
        .rule("s3", &["*", "*"], "s3", &[w, w])
        .rule("s4", &["*", "*"], "s4", &[0, 0])
        .build()
}
