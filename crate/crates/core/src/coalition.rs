//! Punishment values: the cost the other players, acting as one coalition,
//! can force on a single player, computed by min-max value iteration.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::cost::CostValue;
use crate::game::{Arena, PlayerId};

/// `values[u]` is the cost the coalition can force on `player` from `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueMap {
    pub player: PlayerId,
    pub values: Vec<CostValue>,
}

impl ValueMap {
    pub fn get(&self, state: usize) -> CostValue {
        self.values[state]
    }
}

/// Every iterate of the value iteration, from the initial map to the fixpoint.
///
/// The last two entries are equal.
#[derive(Clone, Debug)]
pub struct ValueTrace {
    pub player: PlayerId,
    pub iterates: Vec<Vec<CostValue>>,
}

impl ValueTrace {
    /// Index of the first iterate that equals its successor.
    pub fn fixpoint_round(&self) -> usize {
        self.iterates.len() - 2
    }

    pub fn into_values(mut self) -> ValueMap {
        ValueMap {
            player: self.player,
            values: self.iterates.pop().unwrap_or_default(),
        }
    }
}

/// Best outcome for `alpha` against coalition move `b` from `state`, given
/// the current value estimates.
fn reply_value<A: Arena>(arena: &A, alpha: PlayerId, state: usize, b: usize, values: &[CostValue]) -> CostValue {
    let space = arena.profile_space();
    (0..space.actions(alpha))
        .map(|a| {
            let p = space.replace(b, alpha, a);
            values[arena.successor_of(state, p)] + arena.cost_of(state, p, alpha)
        })
        .min()
        .unwrap_or(CostValue::Infinite)
}

/// Runs the iteration to its fixpoint, keeping every iterate.
///
/// Starts from 0 on the targets of `alpha` and `∞` elsewhere; target states
/// stay at 0.
pub fn value_trace<A: Arena>(arena: &A, alpha: PlayerId) -> ValueTrace {
    let n = arena.state_count();
    let space = arena.profile_space();
    let first: Vec<CostValue> = (0..n)
        .map(|u| {
            if arena.in_target(u, alpha) {
                CostValue::ZERO
            } else {
                CostValue::Infinite
            }
        })
        .collect();
    let mut iterates = vec![first];
    loop {
        let current = iterates.last().unwrap();
        let next: Vec<CostValue> = (0..n)
            .map(|u| {
                if arena.in_target(u, alpha) {
                    return CostValue::ZERO;
                }
                space
                    .coalition_moves(alpha)
                    .map(|b| reply_value(arena, alpha, u, b, current))
                    .max()
                    .unwrap_or(CostValue::Infinite)
            })
            .collect();
        let done = &next == current;
        iterates.push(next);
        if done {
            break;
        }
    }
    ValueTrace {
        player: alpha,
        iterates,
    }
}

/// Punishment values of `alpha` on every state of `arena`.
///
/// ```
/// use qcg_core::{coalition_values, generators, CostValue, PlayerId};
///
/// let game = generators::xor();
/// let c = coalition_values(&game, PlayerId(0));
/// assert_eq!(c.values, vec![CostValue::Finite(0), CostValue::Finite(0)]);
/// ```
pub fn coalition_values<A: Arena>(arena: &A, alpha: PlayerId) -> ValueMap {
    value_trace(arena, alpha).into_values()
}

/// A memoryless coalition strategy against one deviator.
///
/// `moves[u]` is a profile index in which the deviator plays its first
/// action; the other coordinates are the coalition's move at `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PunishmentTable {
    pub player: PlayerId,
    pub moves: Vec<usize>,
}

impl PunishmentTable {
    /// Realizes the outer maximum of the fixpoint equation at every state.
    /// Ties go to the first coalition move in declaration order.
    pub fn from_values<A: Arena>(arena: &A, values: &ValueMap) -> Self {
        let alpha = values.player;
        let space = arena.profile_space();
        let moves = (0..arena.state_count())
            .map(|u| {
                let mut best = None;
                for b in space.coalition_moves(alpha) {
                    if arena.in_target(u, alpha) {
                        return b;
                    }
                    let v = reply_value(arena, alpha, u, b, &values.values);
                    if best.is_none_or(|(_, bv)| v > bv) {
                        best = Some((b, v));
                    }
                }
                best.map_or(0, |(b, _)| b)
            })
            .collect();
        PunishmentTable {
            player: alpha,
            moves,
        }
    }

    /// Action index of coalition member `beta` at `state`.
    pub fn coalition_action<A: Arena>(&self, arena: &A, state: usize, beta: PlayerId) -> usize {
        arena.profile_space().action_of(self.moves[state], beta)
    }
}

pub fn punishing_strategy<A: Arena>(arena: &A, alpha: PlayerId) -> PunishmentTable {
    PunishmentTable::from_values(arena, &coalition_values(arena, alpha))
}

/// Cheapest cost for the deviator to reach its target from `from` when the
/// coalition follows `table`; `∞` if it cannot.
pub fn best_response_cost<A: Arena>(arena: &A, table: &PunishmentTable, from: usize) -> CostValue {
    let alpha = table.player;
    let space = arena.profile_space();
    let mut dist = vec![CostValue::Infinite; arena.state_count()];
    let mut heap = BinaryHeap::from([Reverse((0u64, from))]);
    dist[from] = CostValue::ZERO;
    while let Some(Reverse((d, u))) = heap.pop() {
        if CostValue::Finite(d) > dist[u] {
            continue;
        }
        if arena.in_target(u, alpha) {
            return CostValue::Finite(d);
        }
        for a in 0..space.actions(alpha) {
            let p = space.replace(table.moves[u], alpha, a);
            let v = arena.successor_of(u, p);
            let nd = d + arena.cost_of(u, p, alpha);
            if CostValue::Finite(nd) < dist[v] {
                dist[v] = CostValue::Finite(nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    CostValue::Infinite
}
