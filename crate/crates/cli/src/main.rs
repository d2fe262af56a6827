//! `qcg`: equilibria, punishment values and prices of anarchy for games
//! in the line-oriented game format.
//!
//! Exit status: 0 on success, 1 when the answer is negative (no
//! equilibrium, no equilibrium under the bound, a lasso that is not an
//! equilibrium, a negative source instance), 2 on bad input, 3 when a
//! search limit is hit.

mod args;
mod output;

use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use qcg_core::generators::{self, Cnf, Digraph, RandomGameConfig, StageGameConfig, TargetMode};
use qcg_core::oracle::{self, DecisionInstance, OracleCaps};
use qcg_core::{coalition_values, expand, metrics, parse_game, Analysis, Arena, CostValue, CostVector, FrontierConfig, Game};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use args::{Caps, Cli, Command, Family, Format, GenLine, Input, OracleCapArgs, OracleQuery};
use output::*;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qcg_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: invalid JSON: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(qcg_core::Error::CapExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

/// What a successful run prints, and whether the answer was positive.
struct Report {
    text: String,
    positive: bool,
}

fn render<T: Serialize>(format: Format, doc: &T, table: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
            s.push('\n');
            s
        }
        Format::Table => table(doc),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn generate(family: &Family) -> Result<Game, CliError> {
    Ok(match family {
        Family::Xor => generators::xor(),
        Family::Expne { n } => generators::exp_ne(*n)?,
        Family::Infne => generators::infinite_ne(),
        Family::Pos { w } => generators::pos(*w)?,
        Family::Partition { numbers } => generators::partition(numbers)?,
        Family::Sat { cnf } => generators::three_sat(&Cnf::parse(cnf)?)?,
        Family::Hampath { vertices, edges, start } => {
            generators::hampath(&Digraph::new(*vertices, Digraph::parse_edges(edges)?, *start)?)?
        }
        Family::Random {
            seed,
            states,
            players,
            actions,
            max_cost,
        } => {
            if *players == 0 || *players > qcg_core::game::MAX_PLAYERS || *states == 0 || *actions == 0 {
                return Err(CliError::Usage("random games need at least one state, player and action".into()));
            }
            let cfg = RandomGameConfig {
                min_states: *states,
                max_states: *states,
                players: *players,
                max_actions: *actions,
                max_cost: *max_cost,
                uniform_costs: false,
                targets: TargetMode::PerPlayer,
                target_density: 0.3,
            };
            generators::random_game(&mut ChaCha8Rng::seed_from_u64(*seed), &cfg)
        }
        Family::Stage {
            seed,
            stages,
            players,
            max_cost,
        } => {
            if *players == 0 || *players > 8 {
                return Err(CliError::Usage("stage games take between 1 and 8 players".into()));
            }
            let cfg = StageGameConfig {
                stages: *stages,
                players: *players,
                max_cost: *max_cost,
                ..StageGameConfig::default()
            };
            generators::random_stage_game(&mut ChaCha8Rng::seed_from_u64(*seed), &cfg)
        }
    })
}

fn load(input: &Input) -> Result<Game, CliError> {
    match (&input.path, &input.gen) {
        (_, Some(line)) => {
            let family = GenLine::try_parse_from(line.split_whitespace())
                .map_err(|e| CliError::Usage(format!("bad --gen value `{line}`: {e}")))?;
            generate(&family.family)
        }
        (Some(path), None) => Ok(parse_game(&read_text(path)?)?),
        (None, None) => Err(CliError::Usage("no game given".into())),
    }
}

fn analysis<'g>(game: &'g Game, caps: &Caps) -> Result<Analysis<'g>, CliError> {
    let config = FrontierConfig {
        player_cap: caps.player_cap,
        entry_cap: caps.entry_cap,
    };
    Ok(Analysis::new(game, config)?)
}

fn player(game: &Game, name: &str) -> Result<qcg_core::PlayerId, CliError> {
    game.player_by_name(name)
        .ok_or_else(|| CliError::Usage(format!("unknown player `{name}`")))
}

fn parse_bound(text: &str, players: usize) -> Result<CostVector, CliError> {
    let entries = text
        .split(',')
        .map(|s| match s.trim() {
            "inf" => Ok(CostValue::Infinite),
            v => v
                .parse::<u64>()
                .map(CostValue::Finite)
                .map_err(|_| CliError::Usage(format!("bad cost entry `{v}`"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if entries.len() != players {
        return Err(qcg_core::Error::LengthMismatch {
            expected: players,
            got: entries.len(),
        }
        .into());
    }
    Ok(CostVector::new(entries))
}

/// Accepts a bare lasso, a document with a `witness` or `pump_witness`
/// field, or a `frontier` list (entry `index`, default 0).
fn lasso_doc(path: &Path, index: Option<usize>) -> Result<LassoDoc, CliError> {
    let text = read_text(path)?;
    let json = |source| CliError::Json {
        path: path.display().to_string(),
        source,
    };
    let mut value: Value = serde_json::from_str(&text).map_err(json)?;
    if let Some(list) = value.get("frontier").and_then(Value::as_array) {
        let k = index.unwrap_or(0);
        value = list
            .get(k)
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("the frontier has no entry {k}")))?;
    }
    for key in ["witness", "pump_witness"] {
        if let Some(w) = value.get(key) {
            if w.is_null() {
                return Err(CliError::Usage(format!("`{key}` is null")));
            }
            value = w.clone();
            break;
        }
    }
    serde_json::from_value(value).map_err(json)
}

fn values_doc(game: &Game, p: qcg_core::PlayerId, labels: Vec<String>, values: &[CostValue]) -> CoalitionDoc {
    CoalitionDoc {
        player: game.player_name(p).to_owned(),
        values: labels
            .into_iter()
            .zip(values)
            .map(|(state, &v)| ValueRow {
                state,
                value: cost_value(v),
            })
            .collect(),
    }
}

fn expanded_labels(e: &qcg_core::ExpandedGame<'_>) -> Vec<String> {
    (0..e.state_count()).map(|x| e.state_label(x)).collect()
}

fn run(command: Command) -> Result<Report, CliError> {
    let ok = |text| Report { text, positive: true };
    match command {
        Command::Validate { input } => {
            let game = load(&input)?;
            let e = expand(&game)?;
            let doc = ValidateDoc {
                valid: true,
                players: game.players().to_vec(),
                states: game.states().len(),
                rules: game.rules().len(),
                profiles: game.profiles().len(),
                expanded_states: e.state_count(),
            };
            Ok(ok(render(input.format, &doc, ValidateDoc::table)))
        }
        Command::Coalition { input, player: name, expanded } => {
            let game = load(&input)?;
            let p = player(&game, &name)?;
            let doc = if expanded {
                let e = expand(&game)?;
                values_doc(&game, p, expanded_labels(&e), &coalition_values(&e, p).values)
            } else {
                values_doc(&game, p, game.states().to_vec(), &coalition_values(&game, p).values)
            };
            Ok(ok(render(input.format, &doc, CoalitionDoc::table)))
        }
        Command::Check { input, lasso, index, caps } => {
            let game = load(&input)?;
            let lasso = lasso_doc(&lasso, index)?.to_lasso(&game)?;
            let a = analysis(&game, &caps)?;
            let v = a.check(&lasso)?;
            let doc = CheckDoc {
                is_ne: v.is_ne(),
                cost: cost_vector(&v.cost),
                violation: v.violation.map(|x| ViolationDoc {
                    position: x.position,
                    deviator: game.player_name(x.deviator).to_owned(),
                    action: game.actions(x.deviator)[x.action].clone(),
                    improvement: cost_value(x.improvement),
                }),
            };
            Ok(Report {
                positive: doc.is_ne,
                text: render(input.format, &doc, CheckDoc::table),
            })
        }
        Command::Pareto { input, caps } => {
            let game = load(&input)?;
            let f = analysis(&game, &caps)?.frontier()?;
            let doc = FrontierDoc {
                frontier: f.iter().map(|e| EntryDoc::new(&game, &e.cost, &e.witness)).collect(),
            };
            Ok(ok(render(input.format, &doc, FrontierDoc::table)))
        }
        Command::Exists { input, caps } => {
            let game = load(&input)?;
            let f = analysis(&game, &caps)?.frontier()?;
            let first = f.first();
            let doc = ExistsDoc {
                ne_exists: first.is_some(),
                witness: first.map(|e| LassoDoc::from_lasso(&game, &e.witness)),
                cost: first.map(|e| cost_vector(&e.cost)),
            };
            Ok(Report {
                positive: doc.ne_exists,
                text: render(input.format, &doc, ExistsDoc::table),
            })
        }
        Command::Threshold { input, cost, caps } => {
            let game = load(&input)?;
            let bound = parse_bound(&cost, game.players().len())?;
            let f = analysis(&game, &caps)?.frontier()?;
            let hit = f.iter().find(|e| e.cost.le(&bound));
            let doc = ThresholdDoc {
                bound: cost_vector(&bound),
                found: hit.is_some(),
                cost: hit.map(|e| cost_vector(&e.cost)),
                witness: hit.map(|e| LassoDoc::from_lasso(&game, &e.witness)),
            };
            Ok(Report {
                positive: doc.found,
                text: render(input.format, &doc, ThresholdDoc::table),
            })
        }
        Command::Metrics { input, caps } => {
            let game = load(&input)?;
            let config = FrontierConfig {
                player_cap: caps.player_cap,
                entry_cap: caps.entry_cap,
            };
            let m = metrics::pos_poa_with(&game, config)?;
            let doc = MetricsDoc::new(&game, &m);
            Ok(ok(render(input.format, &doc, MetricsDoc::table)))
        }
        Command::Gen { family } => Ok(ok(generate(&family)?.to_text())),
        Command::Oracle { query } => run_oracle(query),
    }
}

fn oracle_caps(caps: &OracleCapArgs) -> OracleCaps {
    OracleCaps {
        strategies: caps.strategy_cap,
        paths: caps.path_cap,
    }
}

fn run_oracle(query: OracleQuery) -> Result<Report, CliError> {
    match query {
        OracleQuery::Pareto { input, caps } => {
            let game = load(&input)?;
            let f = oracle::oracle_ne_po_capped(&game, oracle_caps(&caps))?;
            let doc = FrontierDoc {
                frontier: f.iter().map(|e| EntryDoc::new(&game, &e.cost, &e.witness)).collect(),
            };
            Ok(Report {
                positive: true,
                text: render(input.format, &doc, FrontierDoc::table),
            })
        }
        OracleQuery::Coalition { input, player: name, caps } => {
            let game = load(&input)?;
            let p = player(&game, &name)?;
            let values = oracle::oracle_coalition_values_capped(&game, p, caps.strategy_cap)?;
            let doc = values_doc(&game, p, game.states().to_vec(), &values.values);
            Ok(Report {
                positive: true,
                text: render(input.format, &doc, CoalitionDoc::table),
            })
        }
        OracleQuery::Decide { family } => {
            let instance = match family {
                Family::Partition { numbers } => DecisionInstance::Partition(numbers),
                Family::Sat { cnf } => DecisionInstance::Sat(Cnf::parse(&cnf)?),
                Family::Hampath { vertices, edges, start } => {
                    DecisionInstance::Hampath(Digraph::new(vertices, Digraph::parse_edges(&edges)?, start)?)
                }
                _ => return Err(CliError::Usage("only partition, 3sat and hampath have a source problem".into())),
            };
            let positive = oracle::oracle_decision(&instance)?;
            let text = serde_json::to_string_pretty(&serde_json::json!({ "positive": positive })).expect("serializes");
            Ok(Report {
                positive,
                text: text + "\n",
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.text);
            ExitCode::from(if report.positive { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
