//! One-parameter sweeps of the decrease condition and terminal debt.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analysis::{decrease_condition, simulate, ConditionReport};
use crate::error::{ModelError, Result};
use crate::model::{ExpenditureSchedule, Scenario};

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Income tax rate. When the base scenario has `alpha == gamma` the
    /// consumption tax follows it, so the fixed-point condition stays defined.
    Alpha,
    /// Constant expenditure `g0`, or `g1` for a linear schedule.
    G0,
    R,
    D0,
    Income,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 5] = [
        SweepAxis::Alpha,
        SweepAxis::G0,
        SweepAxis::R,
        SweepAxis::D0,
        SweepAxis::Income,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Alpha => "alpha",
            SweepAxis::G0 => "g0",
            SweepAxis::R => "r",
            SweepAxis::D0 => "D0",
            SweepAxis::Income => "p_a",
        }
    }

    /// Copy of `base` with this parameter set to `value`, re-validated.
    pub fn apply(&self, base: &Scenario, value: f64) -> Result<Scenario> {
        let mut s = base.clone();
        match self {
            SweepAxis::Alpha => {
                if s.consumer.alpha == s.consumer.gamma {
                    s.consumer.gamma = value;
                }
                s.consumer.alpha = value;
            }
            SweepAxis::G0 => match &mut s.debt.schedule {
                ExpenditureSchedule::Constant { g0 } => *g0 = value,
                ExpenditureSchedule::Linear { g1, .. } => *g1 = value,
                ExpenditureSchedule::Explicit { .. } => {
                    return Err(ModelError::invalid(
                        "debt.schedule",
                        "g0 sweeps need a constant or linear schedule",
                    ))
                }
            },
            SweepAxis::R => s.debt.r = value,
            SweepAxis::D0 => s.debt.d0 = value,
            SweepAxis::Income => s.consumer.p_a = value,
        }
        s.validate()?;
        Ok(s)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SweepAxis::ALL
            .into_iter()
            .find(|axis| axis.name() == s)
            .ok_or_else(|| format!("unknown sweep axis `{s}` (expected one of alpha, g0, r, D0, p_a)"))
    }
}

/// Result for one grid value. Failures are kept per entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub value: f64,
    pub report: Result<ConditionReport>,
    pub final_debt: Result<f64>,
}

/// Evaluates the decrease condition at `year` and the simulated terminal debt
/// for every grid value, in grid order.
pub fn sweep(base: &Scenario, axis: SweepAxis, grid: &[f64], year: u32) -> Vec<SweepEntry> {
    grid.par_iter()
        .map(|&value| match axis.apply(base, value) {
            Ok(s) => SweepEntry {
                value,
                report: decrease_condition(&s.consumer, &s.debt, year),
                final_debt: simulate(&s).map(|t| t.final_debt()),
            },
            Err(e) => SweepEntry {
                value,
                report: Err(e.clone()),
                final_debt: Err(e),
            },
        })
        .collect()
}
