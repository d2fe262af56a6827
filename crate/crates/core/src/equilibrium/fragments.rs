use std::collections::VecDeque;

use super::{FrontierEntry, Lasso, Step};
use crate::cost::{CostValue, CostVector};
use crate::error::{Error, Result};
use crate::game::{Arena, Game};

/// Frontier of a game where all players share one target set and every
/// transition costs 1 to everyone: the single vector `(ℓ,...,ℓ)` for `ℓ` the
/// length of a shortest path to the targets, or `(∞,...,∞)` when they are
/// unreachable. Runs in time linear in the transition table.
///
/// ```
/// use qcg_core::{generators, ne_po_joint_uniform, CostVector};
///
/// let f = ne_po_joint_uniform(&generators::infinite_ne()).unwrap();
/// assert_eq!(f[0].cost, CostVector::finite(&[1, 1]));
/// ```
pub fn ne_po_joint_uniform(game: &Game) -> Result<Vec<FrontierEntry>> {
    if !game.is_joint_target() {
        return Err(Error::FragmentInapplicable(
            "players do not share a single target set".into(),
        ));
    }
    if !game.has_uniform_costs() {
        return Err(Error::FragmentInapplicable(
            "some transition does not cost 1 to every player".into(),
        ));
    }
    let players = game.players().len();
    let n = game.states().len();
    let profiles = game.profiles().len();
    let in_target = |s: usize| !game.reached_at(s).is_empty();

    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([game.initial()]);
    seen[game.initial()] = true;
    let mut goal = None;
    while let Some(u) = queue.pop_front() {
        if in_target(u) {
            goal = Some(u);
            break;
        }
        for p in 0..profiles {
            let v = game.successor_of(u, p);
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some((u, p));
                queue.push_back(v);
            }
        }
    }

    let mut prefix = Vec::new();
    let end = match goal {
        Some(t) => {
            let mut v = t;
            while let Some((u, p)) = parent[v] {
                prefix.push(Step {
                    state: u,
                    profile: p,
                });
                v = u;
            }
            prefix.reverse();
            t
        }
        None => game.initial(),
    };
    let cost = match goal {
        Some(_) => CostVector::finite(&vec![prefix.len() as u64; players]),
        None => CostVector::new(vec![CostValue::Infinite; players]),
    };

    // Any cycle will do once the outcome is settled; take the first profile.
    let mut order = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut cur = end;
    while order[cur] == usize::MAX {
        order[cur] = walk.len();
        walk.push(Step {
            state: cur,
            profile: 0,
        });
        cur = game.successor_of(cur, 0);
    }
    let split = order[cur];
    prefix.extend_from_slice(&walk[..split]);
    Ok(vec![FrontierEntry {
        cost,
        witness: Lasso::new(prefix, walk[split..].to_vec()),
    }])
}
