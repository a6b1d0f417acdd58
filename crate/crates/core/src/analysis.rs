//! Fixed points, closed-form debt paths and the debt-decrease condition.
//!
//! The closed forms here assume the consumer sits at the fixed point of the
//! budget map with `alpha == gamma` and no wealth levy. In that regime every
//! year's drift collapses to `g_k - 2 alpha p_a / (1 + alpha)`, independent of
//! the consumption coefficient. Off that regime use [`simulate`] together with
//! [`debt_closed_form_general`].

use crate::error::{ModelError, Result};
use crate::model::{
    consumer_step, debt_drift, debt_step, tax, ConsumerParams, DebtParams, ExpenditureSchedule, Scenario, Trajectory,
};

/// Budget level mapped to itself by the no-levy consumer map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub b_lambda: f64,
}

impl FixedPoint {
    /// Slope of the budget map at the fixed point,
    /// `1 / (n (1 + gamma) a b^(n-1) + 1)`.
    pub fn contraction_factor(&self, params: &ConsumerParams) -> f64 {
        map_slope(params, self.b_lambda)
    }
}

/// Derivative of the no-levy budget map, expressed at its output budget `b`.
pub fn map_slope(params: &ConsumerParams, budget: f64) -> f64 {
    let n = params.law.n;
    1.0 / (f64::from(n) * (1.0 + params.gamma) * params.law.a * budget.powi(n as i32 - 1) + 1.0)
}

/// `b = ((1 - alpha) p_a / ((1 + gamma) a))^(1/n)`. The wealth levy is ignored.
pub fn fixed_point(params: &ConsumerParams) -> FixedPoint {
    let base = params.net_income() / ((1.0 + params.gamma) * params.law.a);
    let b_lambda = match params.law.n {
        2 => base.sqrt(),
        3 => base.cbrt(),
        n => base.powf(1.0 / f64::from(n)),
    };
    FixedPoint { b_lambda }
}

/// Runs the coupled consumer and debt recursions for `scenario.horizon` years.
pub fn simulate(scenario: &Scenario) -> Result<Trajectory> {
    scenario.validate()?;
    let horizon = scenario.horizon;
    if let Some(available) = scenario.debt.schedule.covered_years() {
        if available < horizon as usize {
            return Err(ModelError::ScheduleTooShort {
                needed: horizon as usize,
                available,
            });
        }
    }

    let consumer = &scenario.consumer;
    let debt = &scenario.debt;
    let mut traj = Trajectory::start(scenario.clone());
    let mut budget = traj.b[0];
    let mut level = traj.debt[0];
    for year in 1..=horizon {
        budget = consumer_step(consumer, budget, year)?;
        let consumption = consumer.law.consumption(budget);
        let tau = tax(consumer, budget, consumption, year);
        let expenditure = debt.schedule.value(year)?;
        let drift = debt_drift(consumer, expenditure, budget, year);
        level = debt_step(debt, level, drift);
        traj.push(budget, consumption, tau, drift, level);
    }
    Ok(traj)
}

/// `sum_{i=1}^{k} (1 + r)^(-i) = ((1 + r)^k - 1) / (r (1 + r)^k)`.
///
/// Evaluated through `expm1`/`ln_1p` so small rates keep full precision.
pub fn discount_sum(r: f64, years: u32) -> f64 {
    if r == 0.0 {
        return f64::from(years);
    }
    -(-f64::from(years) * r.ln_1p()).exp_m1() / r
}

/// `((1 + r)^k - 1) / r`.
pub fn accumulation_sum(r: f64, years: u32) -> f64 {
    if r == 0.0 {
        return f64::from(years);
    }
    (f64::from(years) * r.ln_1p()).exp_m1() / r
}

/// `D_k = (1 + r)^k [D0 + sum_{i<=k} Delta_i / (1 + r)^i]` for `k = 1..=K`,
/// where `K = drifts.len()`.
pub fn debt_closed_form_general(debt: &DebtParams, drifts: &[f64]) -> Vec<f64> {
    let growth = debt.growth();
    let mut discounted = 0.0;
    drifts
        .iter()
        .zip(1..)
        .map(|(drift, year)| {
            let compound = growth.powi(year);
            discounted += drift / compound;
            compound * (debt.d0 + discounted)
        })
        .collect()
}

/// Income-side quantity `2 alpha p_a / (1 + alpha)`: the yearly tax take of a
/// consumer at the fixed point when `alpha == gamma`.
pub fn fixed_point_revenue(consumer: &ConsumerParams) -> f64 {
    2.0 * consumer.alpha * consumer.p_a / (1.0 + consumer.alpha)
}

fn require_fixed_point_regime(consumer: &ConsumerParams) -> Result<()> {
    if consumer.alpha != consumer.gamma {
        return Err(ModelError::UnequalRates {
            alpha: consumer.alpha,
            gamma: consumer.gamma,
        });
    }
    if consumer.beta != 0.0 {
        return Err(ModelError::WealthTaxPresent { beta: consumer.beta });
    }
    Ok(())
}

fn require_positive_rate(debt: &DebtParams) -> Result<()> {
    if debt.r == 0.0 {
        Err(ModelError::RateIsZero)
    } else {
        Ok(())
    }
}

/// `D_k = (1 + r)^k D0 + (g0 - 2 alpha p_a / (1 + alpha)) ((1 + r)^k - 1) / r`
/// for a constant schedule with the consumer at the fixed point.
pub fn debt_closed_form_fixed_point(debt: &DebtParams, consumer: &ConsumerParams, year: u32) -> Result<f64> {
    require_fixed_point_regime(consumer)?;
    require_positive_rate(debt)?;
    let ExpenditureSchedule::Constant { g0 } = debt.schedule else {
        return Err(ModelError::ScheduleNotConstant);
    };
    let drift = g0 - fixed_point_revenue(consumer);
    Ok(debt.growth().powi(year as i32) * debt.d0 + drift * accumulation_sum(debt.r, year))
}

/// `D_k = (1 + r)^k D0 - (2 alpha p_a / ((1 + alpha) r)) ((1 + r)^k - 1)
///        + (1 + r)^k sum_{i<=k} g_i / (1 + r)^i`
/// for any schedule with the consumer at the fixed point.
pub fn debt_closed_form_schedule(debt: &DebtParams, consumer: &ConsumerParams, year: u32) -> Result<f64> {
    require_fixed_point_regime(consumer)?;
    require_positive_rate(debt)?;
    let growth = debt.growth();
    let mut spending = 0.0;
    for i in 1..=year {
        spending += debt.schedule.value(i)? / growth.powi(i as i32);
    }
    let compound = growth.powi(year as i32);
    Ok(compound * debt.d0 - fixed_point_revenue(consumer) * accumulation_sum(debt.r, year) + compound * spending)
}

/// Which form of the decrease condition produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Constant expenditure; the condition does not depend on the year.
    FixedPointConstantG,
    FixedPointLinearG {
        year: u32,
    },
    GeneralSchedule {
        year: u32,
    },
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::FixedPointConstantG => "fixed-point-constant-g",
            Regime::FixedPointLinearG { .. } => "fixed-point-linear-g",
            Regime::GeneralSchedule { .. } => "general-schedule",
        }
    }

    pub fn year(&self) -> Option<u32> {
        match *self {
            Regime::FixedPointConstantG => None,
            Regime::FixedPointLinearG { year } | Regime::GeneralSchedule { year } => Some(year),
        }
    }
}

/// Decrease condition `lhs > rhs` evaluated for one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    /// `2 alpha p_a / (1 + alpha)`.
    pub lhs: f64,
    /// Expenditure plus interest threshold.
    pub rhs: f64,
    /// `lhs - rhs`.
    pub margin: f64,
    /// `margin > 0`. The inequality is strict, so a zero margin does not hold.
    pub holds: bool,
    pub regime: Regime,
    /// For linear schedules, the threshold as the year goes to infinity:
    /// `g1 + r D0 + delta_g / r`.
    pub asymptotic_rhs: Option<f64>,
}

impl ConditionReport {
    fn new(lhs: f64, rhs: f64, regime: Regime, asymptotic_rhs: Option<f64>) -> Self {
        let margin = lhs - rhs;
        ConditionReport {
            lhs,
            rhs,
            margin,
            holds: margin > 0.0,
            regime,
            asymptotic_rhs,
        }
    }
}

/// Evaluates whether the per-capita debt falls, with the consumer at the
/// fixed point.
///
/// For a constant schedule the condition `2 alpha p_a / (1 + alpha) > g0 + r D0`
/// is year-independent and `year` is ignored. For other schedules the
/// threshold is `g1 + r D0 + sum_{j=1}^{k-1} (g_{j+1} - g_j) / (1 + r)^j`; a
/// report that holds at year `k` certifies `D_k < D_{k-1}`.
pub fn decrease_condition(consumer: &ConsumerParams, debt: &DebtParams, year: u32) -> Result<ConditionReport> {
    require_fixed_point_regime(consumer)?;
    if consumer.alpha == 0.0 {
        return Err(ModelError::AlphaIsZero);
    }
    let lhs = fixed_point_revenue(consumer);
    let interest = debt.r * debt.d0;
    match &debt.schedule {
        ExpenditureSchedule::Constant { g0 } => Ok(ConditionReport::new(
            lhs,
            g0 + interest,
            Regime::FixedPointConstantG,
            None,
        )),
        ExpenditureSchedule::Linear { g1, delta_g } => {
            if year == 0 {
                return Err(ModelError::InvalidYear(year));
            }
            require_positive_rate(debt)?;
            let trend = delta_g * discount_sum(debt.r, year - 1);
            let asymptotic = g1 + interest + delta_g / debt.r;
            Ok(ConditionReport::new(
                lhs,
                g1 + interest + trend,
                Regime::FixedPointLinearG { year },
                Some(asymptotic),
            ))
        }
        ExpenditureSchedule::Explicit { .. } => {
            if year == 0 {
                return Err(ModelError::InvalidYear(year));
            }
            let schedule = &debt.schedule;
            let growth = debt.growth();
            let mut trend = 0.0;
            for j in 1..year {
                trend += (schedule.value(j + 1)? - schedule.value(j)?) / growth.powi(j as i32);
            }
            Ok(ConditionReport::new(
                lhs,
                schedule.value(1)? + interest + trend,
                Regime::GeneralSchedule { year },
                None,
            ))
        }
    }
}

/// Gross magnitude of the debt recursion, `S_k = (1 + r) S_{k-1} + |Delta_k|`
/// with `S_0 = |D0|`, for `k = 1..=K`. This bounds every partial sum in both
/// the recursion and the closed form, so deviations measured against it stay
/// meaningful when `D_k` crosses zero.
pub fn gross_debt_scale(debt: &DebtParams, drifts: &[f64]) -> Vec<f64> {
    let mut level = debt.d0.abs();
    drifts
        .iter()
        .map(|drift| {
            level = debt.growth() * level + drift.abs();
            level
        })
        .collect()
}

/// `max_k |a_k - b_k| / max(|a_k|, |b_k|, scale_k)`.
pub fn max_relative_deviation(a: &[f64], b: &[f64], scale: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    assert_eq!(a.len(), scale.len());
    a.iter()
        .zip(b)
        .zip(scale)
        .map(|((x, y), s)| {
            let denom = x.abs().max(y.abs()).max(*s);
            if denom == 0.0 {
                0.0
            } else {
                (x - y).abs() / denom
            }
        })
        .fold(0.0, f64::max)
}
