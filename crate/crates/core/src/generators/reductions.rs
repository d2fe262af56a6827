//! Games built from PARTITION, 3SAT and HAMPATH instances. Each one has an
//! equilibrium iff the source instance is a yes-instance.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::game::{Game, GameBuilder, ProfileSpace};

/// Most variables accepted by [`three_sat`] (the player count is `2n+1`).
pub const SAT_MAX_VARS: usize = 15;

/// Most vertices accepted by [`hampath`]; profiles grow as `n^n`.
pub const HAMPATH_MAX_VERTICES: usize = 6;

/// Two-player game whose equilibria, if any, all cost `(S,S)` where `2S`
/// is the (evened) total; they exist iff the numbers split into two halves
/// of equal sum.
///
/// If some number is odd all numbers are doubled first. From `s` the
/// players either enter the chain `v1 ... vn`, where each step gives one of
/// them `x_i`, or escape through `t1` to `t2` for `S` plus a 0/1 split. The
/// chain ends at `r1`, which is free only if both players play `a` and costs
/// `S+2` each otherwise.
///
/// ```
/// use qcg_core::{generators, ne_exists};
///
/// assert!(ne_exists(&generators::partition(&[1, 1]).unwrap()).unwrap());
/// assert!(!ne_exists(&generators::partition(&[2, 4]).unwrap()).unwrap());
/// ```
pub fn partition(numbers: &[u64]) -> Result<Game> {
    if numbers.is_empty() || numbers.contains(&0) {
        return Err(Error::InvalidInstance(
            "partition needs at least one positive number".into(),
        ));
    }
    let factor = if numbers.iter().any(|x| x % 2 == 1) { 2 } else { 1 };
    let xs: Vec<u64> = numbers.iter().map(|x| x * factor).collect();
    let half = xs.iter().sum::<u64>() / 2;
    let n = xs.len();
    let mut b = GameBuilder::new(&["p1", "p2"])
        .actions("p1", &["a", "b"])
        .actions("p2", &["a", "b"])
        .state("s")
        .state("t1")
        .state("t2");
    for i in 1..=n {
        b = b.state(format!("v{i}"));
    }
    b = b
        .state("r1")
        .state("r2")
        .initial("s")
        .target("t2", &["p1", "p2"])
        .target("r2", &["p1", "p2"])
        .rule("s", &["a", "a"], "v1", &[0, 0])
        .rule("s", &["b", "b"], "v1", &[0, 0])
        .rule("s", &["*", "*"], "t1", &[half, half])
        .rule("t1", &["a", "a"], "t2", &[0, 1])
        .rule("t1", &["b", "b"], "t2", &[0, 1])
        .rule("t1", &["*", "*"], "t2", &[1, 0]);
    for (i, &x) in xs.iter().enumerate() {
        let from = format!("v{}", i + 1);
        let to = if i + 1 == n { "r1".to_string() } else { format!("v{}", i + 2) };
        b = b
            .rule(from.as_str(), &["a", "a"], to.as_str(), &[x, 0])
            .rule(from.as_str(), &["b", "b"], to.as_str(), &[x, 0])
            .rule(from.as_str(), &["*", "*"], to.as_str(), &[0, x]);
    }
    b.rule("r1", &["a", "a"], "r2", &[0, 0])
        .rule("r1", &["*", "*"], "r2", &[half + 2, half + 2])
        .rule("t2", &["*", "*"], "t2", &[0, 0])
        .rule("r2", &["*", "*"], "r2", &[0, 0])
        .build()
}

/// A CNF formula with exactly three literals per clause.
///
/// Literals are nonzero integers: `i` stands for variable `i` and `-i` for
/// its negation; variables are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl Cnf {
    /// The variable count is the largest variable mentioned.
    pub fn new(clauses: Vec<[i32; 3]>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::InvalidInstance("formula has no clauses".into()));
        }
        if clauses.iter().flatten().any(|&l| l == 0 || l == i32::MIN) {
            return Err(Error::InvalidInstance("literal 0 is not allowed".into()));
        }
        let vars = clauses
            .iter()
            .flatten()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        Ok(Cnf { vars, clauses })
    }

    /// Parses `"1,2,-3;-1,2,3"`: clauses separated by `;`, literals by `,`.
    pub fn parse(text: &str) -> Result<Self> {
        let clauses = text
            .split(';')
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .map(|clause| {
                let lits: Vec<i32> = clause
                    .split(',')
                    .map(|l| {
                        l.trim().parse::<i32>().map_err(|_| {
                            Error::InvalidInstance(format!("bad literal `{}`", l.trim()))
                        })
                    })
                    .collect::<Result<_>>()?;
                <[i32; 3]>::try_from(lits).map_err(|l| {
                    Error::InvalidInstance(format!(
                        "clause `{clause}` has {} literals, expected 3",
                        l.len()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Cnf::new(clauses)
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = assignment[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    v
                } else {
                    !v
                }
            })
        })
    }
}

/// Game with players `p0`, `t1`, `f1`, ..., `tn`, `fn` whose equilibria
/// correspond to satisfying assignments.
///
/// Clause states `c1 ... cm` let `p0` pick one of the three literals (action
/// `l1`, `l2` or `l3`). At a literal state `p0` and the player guarding that
/// literal (`ti` for `xi`, `fi` for `¬xi`) play matching pennies, where `l1`
/// counts as `a` and the other two as `b`: a match continues to the next
/// clause and charges 2 to the opposite variable player, a mismatch stops
/// the game in the guard's own state and charges 1 to the guard and `p0`.
/// `c(m+1)` and every stop state are targets of all players.
pub fn three_sat(cnf: &Cnf) -> Result<Game> {
    let n = cnf.vars;
    let m = cnf.clauses.len();
    if n == 0 || n > SAT_MAX_VARS {
        return Err(Error::InvalidInstance(format!(
            "formula must use between 1 and {SAT_MAX_VARS} variables"
        )));
    }
    let mut players = vec!["p0".to_string()];
    for i in 1..=n {
        players.push(format!("t{i}"));
        players.push(format!("f{i}"));
    }
    let np = players.len();
    let guard = |lit: i32| {
        let i = lit.unsigned_abs() as usize;
        if lit > 0 {
            2 * i - 1
        } else {
            2 * i
        }
    };
    let other = |lit: i32| guard(-lit);
    let lit_state = |lit: i32, j: usize| {
        let i = lit.unsigned_abs();
        if lit > 0 {
            format!("x{i}_{j}")
        } else {
            format!("nx{i}_{j}")
        }
    };
    let stop_state = |lit: i32| {
        let i = lit.unsigned_abs();
        if lit > 0 {
            format!("T{i}")
        } else {
            format!("F{i}")
        }
    };

    let mut b = GameBuilder::new(&players).actions("p0", &["l1", "l2", "l3"]);
    for p in &players[1..] {
        b = b.actions(p, &["a", "b"]);
    }
    for j in 1..=m + 1 {
        b = b.state(format!("c{j}"));
    }
    for i in 1..=n as i32 {
        for j in 1..=m {
            b = b.state(lit_state(i, j)).state(lit_state(-i, j));
        }
    }
    let all: Vec<&str> = players.iter().map(String::as_str).collect();
    for i in 1..=n as i32 {
        b = b
            .state(stop_state(i))
            .state(stop_state(-i))
            .target(stop_state(i), &all)
            .target(stop_state(-i), &all);
    }
    b = b.initial("c1").target(format!("c{}", m + 1), &all);

    let pattern = |fixed: &[(usize, &'static str)]| {
        let mut p = vec!["*"; np];
        for &(who, sym) in fixed {
            p[who] = sym;
        }
        p
    };
    let zeros = vec![0u64; np];
    for (j, clause) in cnf.clauses.iter().enumerate() {
        let j = j + 1;
        for (k, &lit) in clause.iter().enumerate() {
            let pick = ["l1", "l2", "l3"][k];
            b = b.rule(format!("c{j}"), &pattern(&[(0, pick)]), lit_state(lit, j), &zeros);
        }
    }
    for i in 1..=n as i32 {
        for lit in [i, -i] {
            let g = guard(lit);
            let mut go_on = zeros.clone();
            go_on[other(lit)] = 2;
            let mut stop = zeros.clone();
            stop[g] = 1;
            stop[0] = 1;
            for j in 1..=m {
                let here = lit_state(lit, j);
                let next = format!("c{}", j + 1);
                b = b
                    .rule(here.as_str(), &pattern(&[(0, "l1"), (g, "a")]), next.as_str(), &go_on)
                    .rule(here.as_str(), &pattern(&[(0, "l1")]), stop_state(lit), &stop)
                    .rule(here.as_str(), &pattern(&[(g, "b")]), next.as_str(), &go_on)
                    .rule(here.as_str(), &pattern(&[]), stop_state(lit), &stop);
            }
        }
    }
    b = b.rule(format!("c{}", m + 1), &pattern(&[]), format!("c{}", m + 1), &zeros);
    for i in 1..=n as i32 {
        for lit in [i, -i] {
            b = b.rule(stop_state(lit), &pattern(&[]), stop_state(lit), &zeros);
        }
    }
    b.build()
}

/// A directed graph on vertices `0..n` with a designated start vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    pub vertices: usize,
    pub edges: BTreeSet<(usize, usize)>,
    pub start: usize,
}

impl Digraph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>, start: usize) -> Result<Self> {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if vertices == 0 || start >= vertices {
            return Err(Error::InvalidInstance("start must be one of the vertices".into()));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::InvalidInstance(format!("edge ({u},{v}) leaves the vertex range")));
        }
        Ok(Digraph {
            vertices,
            edges,
            start,
        })
    }

    /// Parses `"0-1,1-2"`.
    pub fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>> {
        text.split(',')
            .map(str::trim)
            .filter(|e| !e.is_empty())
            .map(|e| {
                let (u, v) = e
                    .split_once('-')
                    .ok_or_else(|| Error::InvalidInstance(format!("bad edge `{e}`")))?;
                let num = |s: &str| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidInstance(format!("bad vertex `{s}`")))
                };
                Ok((num(u)?, num(v)?))
            })
            .collect()
    }
}

/// Game with one player per vertex (`v0`, `v1`, ...), all transitions
/// costing 1 to everyone, that has an equilibrium iff the graph has a
/// Hamiltonian path from its start vertex.
///
/// At `q0` the parity of the sum of all actions decides between the start
/// vertex (even) and the escape chain `q1 -> ... -> q(2n+1)` (odd). At a
/// vertex state, if every player names the same successor `u` along an
/// edge the play passes through the edge state and on to `u`; otherwise it
/// enters `r0_f` for `f` the action sum mod `n`, and runs down a chain of
/// length `2n+3` to `r(2n+3)_f`. Player `v` targets its vertex, `q(2n-1)`
/// and `r(2n+3)_v`, so escaping costs `2n-1` while a Hamiltonian walk
/// reaches every vertex within `2n-1` steps.
pub fn hampath(graph: &Digraph) -> Result<Game> {
    let n = graph.vertices;
    if n > HAMPATH_MAX_VERTICES {
        return Err(Error::InvalidInstance(format!(
            "at most {HAMPATH_MAX_VERTICES} vertices are supported, got {n}"
        )));
    }
    let players: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
    let actions: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    let q = |k: usize| format!("q{k}");
    let r = |k: usize, v: usize| format!("r{k}_{v}");
    let edge = |u: usize, v: usize| format!("e{u}_{v}");
    let chain = 2 * n + 3;
    let ones = vec![1u64; n];

    let mut b = GameBuilder::new(&players);
    for p in &players {
        b = b.actions(p, &actions);
    }
    for v in 0..n {
        b = b.state(format!("v{v}"));
    }
    for &(u, v) in &graph.edges {
        b = b.state(edge(u, v));
    }
    for k in 0..=2 * n + 1 {
        b = b.state(q(k));
    }
    for v in 0..n {
        for k in 0..=chain {
            b = b.state(r(k, v));
        }
    }
    b = b.initial(q(0));
    for (v, player) in players.iter().enumerate().take(n) {
        b = b.target(format!("v{v}"), &[player]).target(r(chain, v), &[player]);
    }
    let all: Vec<&str> = players.iter().map(String::as_str).collect();
    b = b.target(q(2 * n - 1), &all);

    let space = ProfileSpace::new(vec![n; n])
        .ok_or_else(|| Error::InvalidInstance("too many profiles".into()))?;
    let explicit = |idx: usize| -> Vec<String> {
        space.decode(idx).0.iter().map(|a| a.to_string()).collect()
    };
    let sum_of = |idx: usize| space.decode(idx).0.iter().sum::<usize>();
    let any = vec!["*"; n];

    for idx in (0..space.len()).filter(|&i| sum_of(i) % 2 == 1) {
        b = b.rule(q(0), &explicit(idx), q(1), &ones);
    }
    b = b.rule(q(0), &any, format!("v{}", graph.start), &ones);
    for k in 1..=2 * n + 1 {
        b = b.rule(q(k), &any, q((k + 1).min(2 * n + 1)), &ones);
    }
    for v in 0..n {
        let here = format!("v{v}");
        for &(_, u) in graph.edges.range((v, 0)..(v + 1, 0)) {
            b = b.rule(here.as_str(), &vec![u.to_string(); n], edge(v, u), &ones);
        }
        for idx in (0..space.len()).filter(|&i| sum_of(i) % n != n - 1) {
            b = b.rule(here.as_str(), &explicit(idx), r(0, sum_of(idx) % n), &ones);
        }
        b = b.rule(here.as_str(), &any, r(0, n - 1), &ones);
        for k in 0..=chain {
            b = b.rule(r(k, v), &any, r((k + 1).min(chain), v), &ones);
        }
    }
    for &(u, v) in &graph.edges {
        b = b.rule(edge(u, v), &any, format!("v{v}"), &ones);
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Arena, PlayerId};

    #[test]
    fn partition_state_count_and_costs() {
        let g = partition(&[2, 4, 6]).unwrap();
        assert_eq!(g.states().len(), 3 + 3 + 2);
        let s = g.state_by_name("s").unwrap();
        let ab = g.successor(s, &g.profile_by_names(&["a", "b"]).unwrap());
        assert_eq!(ab.cost, crate::CostVector::finite(&[6, 6]));
        // odd numbers are doubled
        let g = partition(&[1, 1]).unwrap();
        let v1 = g.state_by_name("v1").unwrap();
        assert_eq!(g.max_cost(), 2 + 2);
        assert_eq!(g.cost_of(v1, 0, PlayerId(0)), 2);
    }

    #[test]
    fn cnf_parsing() {
        let f = Cnf::parse("1,2,-3; -1,-1,2").unwrap();
        assert_eq!(f.vars, 3);
        assert_eq!(f.clauses[1], [-1, -1, 2]);
        assert!(Cnf::parse("1,2").is_err());
        assert!(Cnf::parse("1,0,2").is_err());
        assert!(f.satisfied_by(&[true, true, false]));
    }

    #[test]
    fn three_sat_size() {
        let f = Cnf::parse("1,2,-3;-1,-2,3").unwrap();
        let g = three_sat(&f).unwrap();
        let (n, m) = (3, 2);
        assert_eq!(g.states().len(), (m + 1) + 2 * n * m + 2 * n);
        assert_eq!(g.players().len(), 2 * n + 1);
        assert!(g.max_cost() <= 2);
    }

    #[test]
    fn three_sat_literal_step() {
        let f = Cnf::parse("1,1,1").unwrap();
        let g = three_sat(&f).unwrap();
        let x = g.state_by_name("x1_1").unwrap();
        let go = g.successor(x, &g.profile_by_names(&["l3", "b", "a"]).unwrap());
        assert_eq!(g.state_name(go.target), "c2");
        assert_eq!(go.cost, crate::CostVector::finite(&[0, 0, 2]));
        let stop = g.successor(x, &g.profile_by_names(&["l1", "b", "a"]).unwrap());
        assert_eq!(g.state_name(stop.target), "T1");
        assert_eq!(stop.cost, crate::CostVector::finite(&[1, 1, 0]));
    }

    #[test]
    fn hampath_size_and_uniform_costs() {
        let d = Digraph::new(3, [(0, 1), (1, 2)], 0).unwrap();
        let g = hampath(&d).unwrap();
        let n = 3;
        assert_eq!(g.states().len(), n + 2 + (2 * n + 2) + (2 * n + 4) * n);
        assert!(g.has_uniform_costs());
        let v0 = g.state_by_name("v0").unwrap();
        let ones = g.successor(v0, &g.profile_by_names(&["1", "1", "1"]).unwrap());
        assert_eq!(g.state_name(ones.target), "e0_1");
        let mixed = g.successor(v0, &g.profile_by_names(&["1", "1", "0"]).unwrap());
        assert_eq!(g.state_name(mixed.target), "r0_2");
        let q0 = g.initial();
        let odd = g.successor(q0, &g.profile_by_names(&["1", "0", "0"]).unwrap());
        assert_eq!(g.state_name(odd.target), "q1");
    }

    #[test]
    fn digraph_validation() {
        assert!(Digraph::new(2, [(0, 2)], 0).is_err());
        assert!(Digraph::new(2, [], 2).is_err());
        assert_eq!(Digraph::parse_edges("0-1, 1-2").unwrap(), vec![(0, 1), (1, 2)]);
    }
}
