//! JSON documents printed by the subcommands, and their table renderings.
//!
//! Costs are JSON numbers, or the string `"inf"` for an unreached target.

use std::fmt::Write as _;

use qcg_core::metrics::{MetricsReport, Price, Ratio, WorstUtil};
use qcg_core::{CostValue, CostVector, Error, Game, Lasso, Step};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub fn cost_value(c: CostValue) -> Value {
    match c {
        CostValue::Finite(v) => Value::from(v),
        CostValue::Infinite => Value::from("inf"),
    }
}

pub fn cost_vector(c: &CostVector) -> Vec<Value> {
    c.iter().map(cost_value).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StepDoc {
    pub state: String,
    pub profile: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LassoDoc {
    pub prefix: Vec<StepDoc>,
    pub cycle: Vec<StepDoc>,
}

impl LassoDoc {
    pub fn from_lasso(game: &Game, lasso: &Lasso) -> Self {
        let step = |s: &Step| StepDoc {
            state: game.state_name(s.state).to_owned(),
            profile: game.profile_names(&game.profiles().decode(s.profile)),
        };
        LassoDoc {
            prefix: lasso.prefix.iter().map(step).collect(),
            cycle: lasso.cycle.iter().map(step).collect(),
        }
    }

    pub fn to_lasso(&self, game: &Game) -> Result<Lasso, CliError> {
        let step = |s: &StepDoc| -> Result<Step, CliError> {
            let state = game
                .state_by_name(&s.state)
                .ok_or_else(|| Error::MalformedLasso(format!("unknown state `{}`", s.state)))?;
            let profile = game.profile_by_names(&s.profile).ok_or_else(|| {
                Error::MalformedLasso(format!("unknown profile ({})", s.profile.join(",")))
            })?;
            Ok(Step {
                state,
                profile: game.profiles().encode(&profile),
            })
        };
        Ok(Lasso::new(
            self.prefix.iter().map(step).collect::<Result<_, _>>()?,
            self.cycle.iter().map(step).collect::<Result<_, _>>()?,
        ))
    }

    fn show(&self) -> String {
        let part = |steps: &[StepDoc]| {
            steps
                .iter()
                .map(|s| format!("{} ({})", s.state, s.profile.join(",")))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("{} | {}", part(&self.prefix), part(&self.cycle))
            .trim()
            .to_owned()
    }
}

#[derive(Debug, Serialize)]
pub struct EntryDoc {
    pub cost: Vec<Value>,
    pub util: Value,
    pub witness: LassoDoc,
}

impl EntryDoc {
    pub fn new(game: &Game, cost: &CostVector, witness: &Lasso) -> Self {
        EntryDoc {
            cost: cost_vector(cost),
            util: cost_value(cost.util()),
            witness: LassoDoc::from_lasso(game, witness),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ValidateDoc {
    pub valid: bool,
    pub players: Vec<String>,
    pub states: usize,
    pub rules: usize,
    pub profiles: usize,
    pub expanded_states: usize,
}

#[derive(Debug, Serialize)]
pub struct ValueRow {
    pub state: String,
    pub value: Value,
}

#[derive(Debug, Serialize)]
pub struct CoalitionDoc {
    pub player: String,
    pub values: Vec<ValueRow>,
}

#[derive(Debug, Serialize)]
pub struct ViolationDoc {
    pub position: usize,
    pub deviator: String,
    pub action: String,
    pub improvement: Value,
}

#[derive(Debug, Serialize)]
pub struct CheckDoc {
    pub is_ne: bool,
    pub cost: Vec<Value>,
    pub violation: Option<ViolationDoc>,
}

#[derive(Debug, Serialize)]
pub struct FrontierDoc {
    pub frontier: Vec<EntryDoc>,
}

#[derive(Debug, Serialize)]
pub struct ExistsDoc {
    pub ne_exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LassoDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<Vec<Value>>,
}

#[derive(Debug, Serialize)]
pub struct ThresholdDoc {
    pub bound: Vec<Value>,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LassoDoc>,
}

#[derive(Debug, Serialize)]
pub struct RatioDoc {
    pub num: u64,
    pub den: u64,
    pub decimal: f64,
}

impl From<Ratio> for RatioDoc {
    fn from(r: Ratio) -> Self {
        RatioDoc {
            num: r.num,
            den: r.den,
            decimal: r.to_f64(),
        }
    }
}

/// `kind` is one of `exact`, `lower_bound`, `inf`, `undefined`, `no_ne`.
#[derive(Debug, Serialize)]
pub struct PriceDoc {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<RatioDoc>,
}

impl From<Price> for PriceDoc {
    fn from(p: Price) -> Self {
        let (kind, value) = match p {
            Price::Exact(r) => ("exact", Some(r.into())),
            Price::AtLeast(r) => ("lower_bound", Some(r.into())),
            Price::Infinite => ("inf", None),
            Price::Undefined => ("undefined", None),
            Price::NoEquilibrium => ("no_ne", None),
        };
        PriceDoc { kind, value }
    }
}

#[derive(Debug, Serialize)]
pub struct MetricsDoc {
    pub social_optimum: Value,
    pub best_ne_util: Option<Value>,
    /// `kind` is `exact`, `lower_bound`, `unbounded` or `no_ne`.
    pub worst_ne_util: Value,
    pub pos: PriceDoc,
    pub poa: PriceDoc,
    pub losing_equilibrium: bool,
    pub pump_witness: Option<LassoDoc>,
}

impl MetricsDoc {
    pub fn new(game: &Game, m: &MetricsReport) -> Self {
        let worst = match m.worst_ne_util {
            WorstUtil::Exact(u) => serde_json::json!({"kind": "exact", "value": cost_value(u)}),
            WorstUtil::AtLeast(u) => serde_json::json!({"kind": "lower_bound", "value": cost_value(u)}),
            WorstUtil::Unbounded => serde_json::json!({"kind": "unbounded"}),
            WorstUtil::NoEquilibrium => serde_json::json!({"kind": "no_ne"}),
        };
        MetricsDoc {
            social_optimum: cost_value(m.social_optimum),
            best_ne_util: m.best_ne_util.map(cost_value),
            worst_ne_util: worst,
            pos: m.pos.into(),
            poa: m.poa.into(),
            losing_equilibrium: m.losing_equilibrium,
            pump_witness: m.pump_witness.as_ref().map(|l| LassoDoc::from_lasso(game, l)),
        }
    }
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in rows {
        line(row);
    }
    out
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn kv(rows: &[(&str, String)]) -> String {
    let rows: Vec<Vec<String>> = rows.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
    table(&["field", "value"], &rows)
}

pub fn show_costs(values: &[Value]) -> String {
    format!("({})", values.iter().map(plain).collect::<Vec<_>>().join(","))
}

impl ValidateDoc {
    pub fn table(&self) -> String {
        kv(&[
            ("valid", self.valid.to_string()),
            ("players", self.players.join(" ")),
            ("states", self.states.to_string()),
            ("rules", self.rules.to_string()),
            ("profiles", self.profiles.to_string()),
            ("expanded_states", self.expanded_states.to_string()),
        ])
    }
}

impl CoalitionDoc {
    pub fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .values
            .iter()
            .map(|r| vec![r.state.clone(), plain(&r.value)])
            .collect();
        table(&["state", &format!("value({})", self.player)], &rows)
    }
}

impl CheckDoc {
    pub fn table(&self) -> String {
        let mut rows = vec![("is_ne", self.is_ne.to_string()), ("cost", show_costs(&self.cost))];
        if let Some(v) = &self.violation {
            rows.push((
                "violation",
                format!(
                    "{} plays {} at step {} and saves {}",
                    v.deviator,
                    v.action,
                    v.position,
                    plain(&v.improvement)
                ),
            ));
        }
        kv(&rows)
    }
}

impl FrontierDoc {
    pub fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .frontier
            .iter()
            .map(|e| vec![show_costs(&e.cost), plain(&e.util), e.witness.show()])
            .collect();
        table(&["cost", "util", "witness (prefix | cycle)"], &rows)
    }
}

impl ExistsDoc {
    pub fn table(&self) -> String {
        let mut rows = vec![("ne_exists", self.ne_exists.to_string())];
        if let (Some(c), Some(w)) = (&self.cost, &self.witness) {
            rows.push(("cost", show_costs(c)));
            rows.push(("witness", w.show()));
        }
        kv(&rows)
    }
}

impl ThresholdDoc {
    pub fn table(&self) -> String {
        let mut rows = vec![("bound", show_costs(&self.bound)), ("found", self.found.to_string())];
        if let (Some(c), Some(w)) = (&self.cost, &self.witness) {
            rows.push(("cost", show_costs(c)));
            rows.push(("witness", w.show()));
        }
        kv(&rows)
    }
}

fn show_price(p: &PriceDoc) -> String {
    match (&p.value, p.kind) {
        (Some(r), "lower_bound") => format!(">= {}/{} ({:.4})", r.num, r.den, r.decimal),
        (Some(r), _) => format!("{}/{} ({:.4})", r.num, r.den, r.decimal),
        (None, kind) => kind.to_owned(),
    }
}

impl MetricsDoc {
    pub fn table(&self) -> String {
        let worst = match (self.worst_ne_util.get("kind"), self.worst_ne_util.get("value")) {
            (Some(k), Some(v)) if k == "lower_bound" => format!(">= {}", plain(v)),
            (_, Some(v)) => plain(v),
            (Some(k), None) => plain(k),
            _ => String::new(),
        };
        kv(&[
            ("social_optimum", plain(&self.social_optimum)),
            ("best_ne_util", self.best_ne_util.as_ref().map_or("-".into(), plain)),
            ("worst_ne_util", worst),
            ("pos", show_price(&self.pos)),
            ("poa", show_price(&self.poa)),
            ("losing_equilibrium", self.losing_equilibrium.to_string()),
            ("pump_witness", self.pump_witness.as_ref().map_or("-".into(), LassoDoc::show)),
        ])
    }
}
