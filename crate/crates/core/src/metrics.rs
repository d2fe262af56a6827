//! Social optimum, price of stability and price of anarchy.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use crate::cost::CostValue;
use crate::equilibrium::{Analysis, DpMode, FrontierConfig, Lasso, ResolvedLasso, Step};
use crate::error::Result;
use crate::expand::ExpandedGame;
use crate::game::{Arena, Game, PlayerId};

/// Most cycle-search steps the pump test spends per insertion point.
const PUMP_SEARCH_CAP: u64 = 200_000;

/// A non-negative fraction in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A price of stability or anarchy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Price {
    /// The game has no equilibrium.
    NoEquilibrium,
    /// No play reaches every target, so the ratio has no meaning.
    Undefined,
    Exact(Ratio),
    AtLeast(Ratio),
    Infinite,
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Price::NoEquilibrium => f.write_str("no NE"),
            Price::Undefined => f.write_str("undefined"),
            Price::Exact(r) => write!(f, "{r}"),
            Price::AtLeast(r) => write!(f, ">= {r}"),
            Price::Infinite => f.write_str("inf"),
        }
    }
}

/// Largest equilibrium social utility.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorstUtil {
    NoEquilibrium,
    Exact(CostValue),
    /// The search stopped at its round cap; larger utilities may exist.
    AtLeast(CostValue),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricsReport {
    pub social_optimum: CostValue,
    pub best_ne_util: Option<CostValue>,
    pub worst_ne_util: WorstUtil,
    pub pos: Price,
    pub poa: Price,
    /// Some equilibrium leaves a player short of its target.
    pub losing_equilibrium: bool,
    /// An equilibrium stays one when a costly cycle is repeated any number
    /// of times; this is such a play with the cycle inserted once.
    pub pump_witness: Option<Lasso>,
}

/// Cheapest total cost of a play in which every player reaches its target.
pub fn social_optimum(game: &Game) -> Result<CostValue> {
    let egame = ExpandedGame::new(game)?;
    Ok(social_optimum_in(&egame))
}

fn social_optimum_in(egame: &ExpandedGame<'_>) -> CostValue {
    let everyone = egame.everyone();
    let space = egame.profile_space();
    let players = egame.player_count();
    let mut dist = vec![CostValue::Infinite; egame.state_count()];
    let start = egame.initial_state();
    dist[start] = CostValue::ZERO;
    let mut heap = BinaryHeap::from([Reverse((0u64, start))]);
    while let Some(Reverse((d, x))) = heap.pop() {
        if CostValue::Finite(d) > dist[x] {
            continue;
        }
        if egame.reached(x) == everyone {
            return CostValue::Finite(d);
        }
        for p in 0..space.len() {
            let y = egame.successor_of(x, p);
            let w: u64 = (0..players).map(|a| egame.cost_of(x, p, PlayerId(a))).sum();
            if CostValue::Finite(d + w) < dist[y] {
                dist[y] = CostValue::Finite(d + w);
                heap.push(Reverse((d + w, y)));
            }
        }
    }
    CostValue::Infinite
}

fn price(util: CostValue, so: CostValue, lower_bound: bool) -> Price {
    match (util, so) {
        (_, CostValue::Infinite) => Price::Undefined,
        (CostValue::Infinite, _) => Price::Infinite,
        (CostValue::Finite(0), CostValue::Finite(0)) => Price::Exact(Ratio::new(1, 1)),
        (CostValue::Finite(_), CostValue::Finite(0)) => Price::Infinite,
        (CostValue::Finite(u), CostValue::Finite(s)) => {
            if lower_bound {
                Price::AtLeast(Ratio::new(u, s))
            } else {
                Price::Exact(Ratio::new(u, s))
            }
        }
    }
}

/// Social optimum, best and worst equilibrium utilities, and the two prices.
///
/// The worst utility is unbounded when an equilibrium leaves some player
/// without its target, or when the pump test finds a costly cycle that can
/// be repeated inside an equilibrium play without breaking it. Otherwise the
/// exhaustive search either reaches a fixpoint (exact) or stops after
/// `(|Ω|+1)·|V|` rounds (lower bound).
///
/// ```
/// use qcg_core::{generators, metrics::{pos_poa, Price, Ratio}, CostValue};
///
/// let report = pos_poa(&generators::pos(5).unwrap()).unwrap();
/// assert_eq!(report.social_optimum, CostValue::Finite(1));
/// assert_eq!(report.pos, Price::Exact(Ratio::new(10, 1)));
/// assert_eq!(report.poa, Price::Infinite);
/// ```
pub fn pos_poa(game: &Game) -> Result<MetricsReport> {
    pos_poa_with(game, FrontierConfig::default())
}

pub fn pos_poa_with(game: &Game, config: FrontierConfig) -> Result<MetricsReport> {
    let analysis = Analysis::new(game, config)?;
    let so = social_optimum_in(&analysis.egame);
    let frontier = analysis.frontier()?;
    if frontier.is_empty() {
        return Ok(MetricsReport {
            social_optimum: so,
            best_ne_util: None,
            worst_ne_util: WorstUtil::NoEquilibrium,
            pos: Price::NoEquilibrium,
            poa: Price::NoEquilibrium,
            losing_equilibrium: false,
            pump_witness: None,
        });
    }
    let best = frontier.iter().map(|e| e.cost.util()).min().unwrap_or(CostValue::Infinite);

    let rounds = (game.players().len() + 1) * game.states().len();
    let all = analysis.run(DpMode::All { round_cap: rounds })?;
    let losing_equilibrium = all.entries.iter().any(|e| !e.cost.util().is_finite());
    let mut pump_witness = None;
    let mut by_util: Vec<_> = all.entries.iter().filter(|e| e.cost.util().is_finite()).collect();
    by_util.sort_by_key(|e| Reverse(e.cost.util()));
    for entry in by_util {
        if let Some(l) = pump(&analysis, &entry.witness)? {
            pump_witness = Some(l);
            break;
        }
    }
    let max_found = all.entries.iter().map(|e| e.cost.util()).max().unwrap_or(CostValue::ZERO);
    let (worst, poa) = if losing_equilibrium || pump_witness.is_some() {
        let poa = if so.is_finite() { Price::Infinite } else { Price::Undefined };
        (WorstUtil::Unbounded, poa)
    } else if all.fixpoint {
        (WorstUtil::Exact(max_found), price(max_found, so, false))
    } else {
        (WorstUtil::AtLeast(max_found), price(max_found, so, true))
    };
    Ok(MetricsReport {
        social_optimum: so,
        best_ne_util: Some(best),
        worst_ne_util: worst,
        pos: price(best, so, false),
        poa,
        losing_equilibrium,
        pump_witness,
    })
}

/// Looks for a simple cycle of positive total cost that can be spliced into
/// the prefix of `lasso` any number of times with the play remaining an
/// equilibrium, and returns the play with one copy inserted.
///
/// One copy must pass the full deviation check. In addition, every player
/// charged on the cycle must have no finite deviation anywhere up to the end
/// of the inserted copy, since repeating the cycle raises its outcome cost
/// but not what those deviations would earn.
pub fn pump(analysis: &Analysis<'_>, lasso: &Lasso) -> Result<Option<Lasso>> {
    let e = &analysis.egame;
    let r = lasso.resolve(e)?;
    let players = e.player_count();
    for j in 0..r.prefix_len {
        let x = r.states[j];
        for cycle in positive_cycles(e, x) {
            let charged: Vec<PlayerId> = (0..players)
                .map(PlayerId)
                .filter(|&a| cycle.iter().any(|&(y, p)| e.cost_of(y, p, a) > 0))
                .collect();
            let steps: Vec<(usize, usize)> = r.states[..j]
                .iter()
                .copied()
                .zip(r.profiles[..j].iter().copied())
                .chain(cycle.iter().copied())
                .collect();
            if !no_escape(analysis, &steps, &charged) {
                continue;
            }
            let base = |(x, p): (usize, usize)| Step {
                state: e.state(x).base,
                profile: p,
            };
            let prefix: Vec<Step> = steps
                .iter()
                .copied()
                .chain(resolved_steps(&r, j, r.prefix_len))
                .map(base)
                .collect();
            let pumped = Lasso::new(prefix, lasso.cycle.clone());
            if analysis.check(&pumped)?.is_ne() {
                return Ok(Some(pumped));
            }
        }
    }
    Ok(None)
}

fn resolved_steps(r: &ResolvedLasso, from: usize, to: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    (from..to).map(move |k| (r.states[k], r.profiles[k]))
}

fn no_escape(analysis: &Analysis<'_>, steps: &[(usize, usize)], charged: &[PlayerId]) -> bool {
    steps
        .iter()
        .all(|&(x, p)| charged.iter().all(|&a| analysis.deviation_payoff(x, p, a) == CostValue::Infinite))
}

/// Simple cycles through `x` with positive total cost, in discovery order.
fn positive_cycles(e: &ExpandedGame<'_>, x: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut budget = PUMP_SEARCH_CAP;
    let mut on_path = vec![false; e.state_count()];
    on_path[x] = true;
    let mut path = Vec::new();
    cycle_search(e, x, x, &mut path, &mut on_path, &mut out, &mut budget);
    out
}

fn cycle_search(
    e: &ExpandedGame<'_>,
    root: usize,
    cur: usize,
    path: &mut Vec<(usize, usize)>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<(usize, usize)>>,
    budget: &mut u64,
) {
    let players = e.player_count();
    for p in 0..e.profile_space().len() {
        if *budget == 0 {
            return;
        }
        *budget -= 1;
        let y = e.successor_of(cur, p);
        path.push((cur, p));
        if y == root {
            let util: u64 = path
                .iter()
                .map(|&(z, q)| (0..players).map(|a| e.cost_of(z, q, PlayerId(a))).sum::<u64>())
                .sum();
            if util > 0 {
                out.push(path.clone());
            }
        } else if !on_path[y] {
            on_path[y] = true;
            cycle_search(e, root, y, path, on_path, out, budget);
            on_path[y] = false;
        }
        path.pop();
    }
}
