//! Scenario files (TOML) and trajectory output (CSV, JSON).
//!
//! A scenario file has three tables:
//!
//! ```toml
//! [consumer]
//! p_a = 100.0
//! alpha = 0.25
//! beta = 0.0        # optional, default 0
//! gamma = 0.25
//! # m = 3           # optional wealth-levy year
//! law = { a = 0.15, n = 2 }
//!
//! [debt]
//! r = 0.05
//! D0 = 100.0
//! schedule = { kind = "constant", g0 = 30.0 }
//! # schedule = { kind = "linear", g1 = 30.0, deltaG = 0.5 }
//! # schedule = { kind = "explicit", values = [30.0, 31.0] }
//!
//! [run]
//! b0 = 18.0         # optional, defaults to the fixed point
//! horizon = 10
//! ```
//!
//! Unknown keys are rejected.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::ModelError;
use crate::format::g12;
use crate::model::{
    ConsumerParams, ConsumptionLaw, DebtParams, ExpenditureSchedule, InitialBudget, Scenario, Trajectory,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("parse error{}: {message}", location(*line, *column))]
    Parse {
        line: Option<usize>,
        column: Option<usize>,
        message: String,
    },
    #[error("validation error: {field}: {reason}")]
    Validation { field: String, reason: String },
    #[error(transparent)]
    Model(ModelError),
}

fn location(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {l}, column {c}"),
        (Some(l), None) => format!(" at line {l}"),
        _ => String::new(),
    }
}

impl From<ModelError> for ScenarioError {
    fn from(err: ModelError) -> Self {
        match err {
            ModelError::InvalidParameter { field, reason } => ScenarioError::Validation { field, reason },
            other => ScenarioError::Model(other),
        }
    }
}

impl ScenarioError {
    fn parse_at(text: &str, offset: Option<usize>, message: impl Into<String>) -> Self {
        let (line, column) = match offset {
            Some(offset) => {
                let before = &text[..offset.min(text.len())];
                let line = before.matches('\n').count() + 1;
                let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                (Some(line), Some(column))
            }
            None => (None, None),
        };
        ScenarioError::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

/// On-disk scenario layout. Mirrors [`Scenario`] one table per section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub consumer: ConsumerSection,
    pub debt: DebtSection,
    pub run: RunSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsumerSection {
    pub p_a: f64,
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub law: LawSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSection {
    pub a: f64,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DebtSection {
    pub r: f64,
    #[serde(rename = "D0")]
    pub d0: f64,
    pub schedule: ScheduleSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ScheduleSection {
    Constant {
        g0: f64,
    },
    Linear {
        g1: f64,
        #[serde(rename = "deltaG")]
        delta_g: f64,
    },
    Explicit {
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<f64>,
    pub horizon: u32,
}

impl ScenarioFile {
    /// Converts to a [`Scenario`], re-checking every invariant.
    pub fn into_scenario(self) -> Result<Scenario, ScenarioError> {
        let c = self.consumer;
        let consumer = ConsumerParams {
            p_a: c.p_a,
            alpha: c.alpha,
            beta: c.beta,
            gamma: c.gamma,
            wealth_tax_year: c.m,
            law: ConsumptionLaw { a: c.law.a, n: c.law.n },
        };
        let schedule = match self.debt.schedule {
            ScheduleSection::Constant { g0 } => ExpenditureSchedule::Constant { g0 },
            ScheduleSection::Linear { g1, delta_g } => ExpenditureSchedule::Linear { g1, delta_g },
            ScheduleSection::Explicit { values } => ExpenditureSchedule::Explicit { values },
        };
        let scenario = Scenario {
            consumer,
            debt: DebtParams {
                r: self.debt.r,
                d0: self.debt.d0,
                schedule,
            },
            b0: self.run.b0.map_or(InitialBudget::FixedPoint, InitialBudget::Value),
            horizon: self.run.horizon,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        let c = &s.consumer;
        ScenarioFile {
            consumer: ConsumerSection {
                p_a: c.p_a,
                alpha: c.alpha,
                beta: c.beta,
                gamma: c.gamma,
                m: c.wealth_tax_year,
                law: LawSection { a: c.law.a, n: c.law.n },
            },
            debt: DebtSection {
                r: s.debt.r,
                d0: s.debt.d0,
                schedule: match &s.debt.schedule {
                    ExpenditureSchedule::Constant { g0 } => ScheduleSection::Constant { g0: *g0 },
                    ExpenditureSchedule::Linear { g1, delta_g } => ScheduleSection::Linear {
                        g1: *g1,
                        delta_g: *delta_g,
                    },
                    ExpenditureSchedule::Explicit { values } => ScheduleSection::Explicit { values: values.clone() },
                },
            },
            run: RunSection {
                b0: match s.b0 {
                    InitialBudget::FixedPoint => None,
                    InitialBudget::Value(b0) => Some(b0),
                },
                horizon: s.horizon,
            },
        }
    }
}

/// Parses and validates a TOML scenario document.
pub fn load_scenario(document: &str) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile = toml::from_str(document)
        .map_err(|e| ScenarioError::parse_at(document, e.span().map(|s| s.start), e.message()))?;
    file.into_scenario()
}

/// Renders a scenario back to TOML.
pub fn scenario_to_toml(scenario: &Scenario) -> String {
    toml::to_string(&ScenarioFile::from(scenario)).expect("scenario tables always serialize")
}

/// Output encoding for trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

pub const CSV_HEADER: &str = "k,b,c,tau,delta,D";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryJson {
    scenario: ScenarioFile,
    k: Vec<u32>,
    b: Vec<f64>,
    c: Vec<Option<f64>>,
    tau: Vec<Option<f64>>,
    delta: Vec<Option<f64>>,
    #[serde(rename = "D")]
    debt: Vec<f64>,
}

/// Serializes a trajectory. CSV rows run over `k = 0..=K` with 12
/// significant digits and empty flow cells at `k = 0`. JSON keeps full
/// precision and embeds the scenario.
pub fn write_trajectory(traj: &Trajectory, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::with_capacity(64 * traj.b.len());
            out.push_str(CSV_HEADER);
            out.push('\n');
            let cell = |v: Option<f64>| v.map(g12).unwrap_or_default();
            for k in 0..traj.b.len() {
                out.push_str(&format!(
                    "{k},{},{},{},{},{}\n",
                    g12(traj.b[k]),
                    cell(traj.c[k]),
                    cell(traj.tau[k]),
                    cell(traj.delta[k]),
                    g12(traj.debt[k]),
                ));
            }
            out
        }
        Format::Json => {
            let doc = TrajectoryJson {
                scenario: ScenarioFile::from(&traj.scenario),
                k: (0..traj.b.len() as u32).collect(),
                b: traj.b.clone(),
                c: traj.c.clone(),
                tau: traj.tau.clone(),
                delta: traj.delta.clone(),
                debt: traj.debt.clone(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("finite trajectory serializes");
            s.push('\n');
            s
        }
    }
}

/// Reads back the JSON form produced by [`write_trajectory`].
pub fn read_trajectory_json(text: &str) -> Result<Trajectory, ScenarioError> {
    let doc: TrajectoryJson = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        line: Some(e.line()),
        column: Some(e.column()),
        message: e.to_string(),
    })?;
    let scenario = doc.scenario.into_scenario()?;
    let len = doc.b.len();
    let shape = |field: &str, n: usize| {
        if n == len {
            Ok(())
        } else {
            Err(ScenarioError::Validation {
                field: field.into(),
                reason: format!("expected {len} entries, found {n}"),
            })
        }
    };
    if len == 0 {
        return Err(ScenarioError::Validation {
            field: "b".into(),
            reason: "must hold at least the year-0 entry".into(),
        });
    }
    shape("k", doc.k.len())?;
    shape("c", doc.c.len())?;
    shape("tau", doc.tau.len())?;
    shape("delta", doc.delta.len())?;
    shape("D", doc.debt.len())?;
    if doc.k.iter().copied().ne(0..len as u32) {
        return Err(ScenarioError::Validation {
            field: "k".into(),
            reason: "must count 0, 1, ..., K".into(),
        });
    }
    for (name, series) in [("c", &doc.c), ("tau", &doc.tau), ("delta", &doc.delta)] {
        if series[0].is_some() || series[1..].iter().any(Option::is_none) {
            return Err(ScenarioError::Validation {
                field: name.into(),
                reason: "must be null at k = 0 and defined afterwards".into(),
            });
        }
    }
    Ok(Trajectory {
        scenario,
        b: doc.b,
        c: doc.c,
        tau: doc.tau,
        delta: doc.delta,
        debt: doc.debt,
    })
}
