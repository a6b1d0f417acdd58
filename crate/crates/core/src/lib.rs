//! Discrete-time model of an average consumer's budget coupled to the
//! per-capita public debt.
//!
//! The consumer's budget follows the implicit recursion
//! `(1 + gamma) a b_k^n + (1 + beta [k = m]) b_k - b_{k-1} = (1 - alpha) p_a`,
//! and the debt follows `D_k = (1 + r) D_{k-1} + Delta_k` where `Delta_k` is
//! public expenditure net of the taxes the consumer pays.
//!
//! - [`model`]: parameter types, tax and drift, single steps.
//! - [`analysis`]: fixed point, simulation, closed forms, decrease condition.
//! - [`sweep`]: one-parameter sweeps.
//! - [`scenario_io`]: scenario files and trajectory output.

pub mod analysis;
pub mod error;
pub mod format;
pub mod model;
pub mod scenario_io;
pub mod solver;
pub mod sweep;

pub use analysis::{
    debt_closed_form_fixed_point, debt_closed_form_general, debt_closed_form_schedule, decrease_condition, fixed_point,
    simulate, ConditionReport, FixedPoint, Regime,
};
pub use error::{ModelError, Result};
pub use model::{
    consumer_step, debt_drift, debt_step, tax, ConsumerParams, ConsumptionLaw, DebtParams, ExpenditureSchedule,
    InitialBudget, Scenario, Trajectory,
};
pub use scenario_io::{load_scenario, read_trajectory_json, write_trajectory, Format, ScenarioError};
pub use sweep::{sweep, SweepAxis, SweepEntry};
