//! Line-oriented game format.
//!
//! ```text
//! players <name>+
//! actions <player>: <symbol>+
//! state <name> [init] [target: <player>+]
//! trans <state> [<sym-or-*>(,<sym-or-*>)*] -> <state> cost [<nat>(,<nat>)*]
//! ```
//!
//! `#` starts a comment. Patterns and cost lists follow player declaration
//! order. States may be declared after the rules that mention them.

use std::collections::HashMap;

use super::{Game, TransitionRule};
use crate::error::{Error, Result};

struct RawRule {
    line: usize,
    source: String,
    pattern: Vec<String>,
    target: String,
    cost: Vec<u64>,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '[' | ']' | ',' | ':' | '#' | '*'))
}

fn check_name(line: usize, s: &str, what: &str) -> Result<()> {
    if valid_name(s) {
        Ok(())
    } else {
        Err(err(line, format!("invalid {what} name `{s}`")))
    }
}

/// Splits `[x, y, z] rest` into the bracket items and the remaining text.
fn bracket_list(line: usize, text: &str) -> Result<(Vec<String>, &str)> {
    let text = text.trim_start();
    let inner = text
        .strip_prefix('[')
        .ok_or_else(|| err(line, "expected `[`"))?;
    let close = inner.find(']').ok_or_else(|| err(line, "missing `]`"))?;
    let items = inner[..close]
        .split(',')
        .map(|s| s.trim().to_owned())
        .collect::<Vec<_>>();
    if items.iter().any(String::is_empty) {
        return Err(err(line, "empty entry in bracket list"));
    }
    Ok((items, &inner[close + 1..]))
}

fn parse_cost(line: usize, s: &str) -> Result<u64> {
    if s.starts_with('-') {
        return Err(err(line, format!("negative cost `{s}`")));
    }
    s.parse::<u64>()
        .map_err(|_| err(line, format!("cost `{s}` is not a natural number")))
}

fn parse_trans(line: usize, rest: &str) -> Result<RawRule> {
    let open = rest
        .find('[')
        .ok_or_else(|| err(line, "expected `[` after the source state"))?;
    let source = rest[..open].trim();
    check_name(line, source, "state")?;
    let (pattern, rest) = bracket_list(line, &rest[open..])?;
    let rest = rest
        .trim_start()
        .strip_prefix("->")
        .ok_or_else(|| err(line, "expected `->`"))?;
    let mut words = rest.trim_start().splitn(2, char::is_whitespace);
    let target = words.next().unwrap_or_default();
    check_name(line, target, "state")?;
    let rest = words.next().unwrap_or_default().trim_start();
    let rest = rest
        .strip_prefix("cost")
        .ok_or_else(|| err(line, "expected `cost`"))?;
    let (cost, tail) = bracket_list(line, rest)?;
    if !tail.trim().is_empty() {
        return Err(err(line, format!("unexpected trailing text `{}`", tail.trim())));
    }
    let cost = cost
        .iter()
        .map(|c| parse_cost(line, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(RawRule {
        line,
        source: source.to_owned(),
        pattern,
        target: target.to_owned(),
        cost,
    })
}

/// Parses and validates a game document.
///
/// Fails with a line-numbered [`Error::Parse`] for syntax errors and
/// undeclared names, and with [`Error::NotTotal`] when some state and profile
/// match no rule.
pub fn parse_game(text: &str) -> Result<Game> {
    let mut players: Option<Vec<String>> = None;
    let mut actions: Vec<Option<Vec<String>>> = Vec::new();
    let mut states: Vec<String> = Vec::new();
    let mut state_index: HashMap<String, usize> = HashMap::new();
    let mut initial: Option<usize> = None;
    let mut targets: Vec<Vec<usize>> = Vec::new();
    let mut raw_rules = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or_default().trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let rest = rest.trim();
        match keyword {
            "players" => {
                if players.is_some() {
                    return Err(err(line, "`players` declared twice"));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
                if names.is_empty() {
                    return Err(err(line, "at least one player is required"));
                }
                for (k, n) in names.iter().enumerate() {
                    check_name(line, n, "player")?;
                    if names[..k].contains(n) {
                        return Err(err(line, format!("player `{n}` declared twice")));
                    }
                }
                actions = vec![None; names.len()];
                targets = vec![Vec::new(); names.len()];
                players = Some(names);
            }
            "actions" => {
                let names = players
                    .as_ref()
                    .ok_or_else(|| err(line, "`actions` before `players`"))?;
                let (who, symbols) = rest
                    .split_once(':')
                    .ok_or_else(|| err(line, "expected `actions <player>: <symbol>+`"))?;
                let who = who.trim();
                let p = names
                    .iter()
                    .position(|n| n == who)
                    .ok_or_else(|| err(line, format!("undeclared player `{who}`")))?;
                if actions[p].is_some() {
                    return Err(err(line, format!("actions of `{who}` declared twice")));
                }
                let symbols: Vec<String> = symbols.split_whitespace().map(str::to_owned).collect();
                if symbols.is_empty() {
                    return Err(err(line, format!("player `{who}` has no actions")));
                }
                for (k, s) in symbols.iter().enumerate() {
                    check_name(line, s, "action")?;
                    if symbols[..k].contains(s) {
                        return Err(err(line, format!("action `{s}` declared twice")));
                    }
                }
                actions[p] = Some(symbols);
            }
            "state" => {
                let names = players
                    .as_ref()
                    .ok_or_else(|| err(line, "`state` before `players`"))?;
                let (head, owners) = match rest.split_once("target:") {
                    Some((h, o)) => (h, Some(o)),
                    None => (rest, None),
                };
                let mut words = head.split_whitespace();
                let name = words
                    .next()
                    .ok_or_else(|| err(line, "expected a state name"))?;
                check_name(line, name, "state")?;
                if state_index.contains_key(name) {
                    return Err(err(line, format!("state `{name}` declared twice")));
                }
                let s = states.len();
                state_index.insert(name.to_owned(), s);
                states.push(name.to_owned());
                for w in words {
                    match w {
                        "init" => {
                            if initial.is_some() {
                                return Err(err(line, "more than one `init` state"));
                            }
                            initial = Some(s);
                        }
                        other => return Err(err(line, format!("unexpected `{other}`"))),
                    }
                }
                if let Some(owners) = owners {
                    let owners: Vec<&str> = owners.split_whitespace().collect();
                    if owners.is_empty() {
                        return Err(err(line, "`target:` needs at least one player"));
                    }
                    for o in owners {
                        let p = names
                            .iter()
                            .position(|n| n == o)
                            .ok_or_else(|| err(line, format!("undeclared player `{o}`")))?;
                        targets[p].push(s);
                    }
                }
            }
            "trans" => {
                if players.is_none() {
                    return Err(err(line, "`trans` before `players`"));
                }
                raw_rules.push(parse_trans(line, rest)?);
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }

    let players = players.ok_or_else(|| err(0, "missing `players` line"))?;
    let actions = actions
        .into_iter()
        .enumerate()
        .map(|(p, a)| a.ok_or_else(|| err(0, format!("no actions declared for `{}`", players[p]))))
        .collect::<Result<Vec<_>>>()?;
    let initial = initial.ok_or_else(|| err(0, "no state marked `init`"))?;

    let mut rules = Vec::with_capacity(raw_rules.len());
    for r in raw_rules {
        let lookup = |name: &str| {
            state_index
                .get(name)
                .copied()
                .ok_or_else(|| err(r.line, format!("undeclared state `{name}`")))
        };
        if r.pattern.len() != players.len() {
            return Err(err(
                r.line,
                format!("pattern has {} entries, expected {}", r.pattern.len(), players.len()),
            ));
        }
        if r.cost.len() != players.len() {
            return Err(err(
                r.line,
                format!("cost has {} entries, expected {}", r.cost.len(), players.len()),
            ));
        }
        let pattern = r
            .pattern
            .iter()
            .enumerate()
            .map(|(p, sym)| {
                if sym == "*" {
                    Ok(None)
                } else {
                    actions[p].iter().position(|a| a == sym).map(Some).ok_or_else(|| {
                        err(
                            r.line,
                            format!("undeclared action `{sym}` for player `{}`", players[p]),
                        )
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rules.push(TransitionRule {
            source: lookup(&r.source)?,
            pattern,
            target: lookup(&r.target)?,
            cost: r.cost,
        });
    }

    Game::new(players, actions, states, initial, targets, rules)
}
