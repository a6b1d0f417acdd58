//! Domain types and single-step dynamics.
//!
//! Year `0` carries the initial conditions `(b0, D0)`; the dynamics run for
//! years `1..=K`. All currency quantities are per capita.

use crate::error::{ModelError, Result};
use crate::solver::{self, Tolerance};

/// Consumption as a power of the budget: `c = a * b^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsumptionLaw {
    pub a: f64,
    pub n: u32,
}

impl ConsumptionLaw {
    pub fn new(a: f64, n: u32) -> Result<Self> {
        let law = ConsumptionLaw { a, n };
        law.validate()?;
        Ok(law)
    }

    pub fn quadratic(a: f64) -> Result<Self> {
        Self::new(a, 2)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(ModelError::invalid(
                "consumer.law.a",
                format!("must be finite and > 0, got {}", self.a),
            ));
        }
        if self.n < 2 {
            return Err(ModelError::invalid(
                "consumer.law.n",
                format!("must be >= 2, got {}", self.n),
            ));
        }
        if self.n > i32::MAX as u32 {
            return Err(ModelError::invalid(
                "consumer.law.n",
                format!("must be <= {}, got {}", i32::MAX, self.n),
            ));
        }
        Ok(())
    }

    /// `a * b^n`.
    pub fn consumption(&self, budget: f64) -> f64 {
        self.a * budget.powi(self.n as i32)
    }
}

/// Income, taxation rates and the consumption law of the average consumer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsumerParams {
    /// Yearly income.
    pub p_a: f64,
    /// Income tax rate.
    pub alpha: f64,
    /// One-time tax rate on the bank deposit, levied in `wealth_tax_year`.
    pub beta: f64,
    /// Consumption tax rate.
    pub gamma: f64,
    /// Year `m` of the wealth levy. `None` disables the levy entirely.
    pub wealth_tax_year: Option<u32>,
    pub law: ConsumptionLaw,
}

impl ConsumerParams {
    /// Consumer with every tax rate at zero.
    pub fn untaxed(p_a: f64, law: ConsumptionLaw) -> Self {
        ConsumerParams {
            p_a,
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
            wealth_tax_year: None,
            law,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_a.is_finite() && self.p_a > 0.0) {
            return Err(ModelError::invalid(
                "consumer.p_a",
                format!("must be finite and > 0, got {}", self.p_a),
            ));
        }
        if !(self.alpha.is_finite() && (0.0..1.0).contains(&self.alpha)) {
            return Err(ModelError::invalid(
                "consumer.alpha",
                format!("must be in [0, 1), got {}", self.alpha),
            ));
        }
        if !(self.beta.is_finite() && (0.0..1.0).contains(&self.beta)) {
            return Err(ModelError::invalid(
                "consumer.beta",
                format!("must be in [0, 1), got {}", self.beta),
            ));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(ModelError::invalid(
                "consumer.gamma",
                format!("must be finite and >= 0, got {}", self.gamma),
            ));
        }
        if self.wealth_tax_year == Some(0) {
            return Err(ModelError::invalid("consumer.m", "must be >= 1, got 0"));
        }
        self.law.validate()
    }

    /// Kronecker delta `[k = m]`.
    pub fn wealth_tax_fires(&self, year: u32) -> bool {
        self.wealth_tax_year == Some(year)
    }

    fn wealth_rate(&self, year: u32) -> f64 {
        if self.wealth_tax_fires(year) {
            self.beta
        } else {
            0.0
        }
    }

    /// Disposable income left after the income tax: `(1 - alpha) * p_a`.
    pub fn net_income(&self) -> f64 {
        (1.0 - self.alpha) * self.p_a
    }
}

/// Per-capita public expenditure `g_k` over the years `k >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExpenditureSchedule {
    Constant {
        g0: f64,
    },
    /// `g_j = (j - 1) * delta_g + g1`.
    Linear {
        g1: f64,
        delta_g: f64,
    },
    /// `values[j - 1]` is the expenditure of year `j`.
    Explicit {
        values: Vec<f64>,
    },
}

impl ExpenditureSchedule {
    pub fn validate(&self) -> Result<()> {
        match self {
            ExpenditureSchedule::Constant { g0 } => {
                if !(g0.is_finite() && *g0 >= 0.0) {
                    return Err(ModelError::invalid(
                        "debt.schedule.g0",
                        format!("must be finite and >= 0, got {g0}"),
                    ));
                }
            }
            ExpenditureSchedule::Linear { g1, delta_g } => {
                if !(g1.is_finite() && *g1 > 0.0) {
                    return Err(ModelError::invalid(
                        "debt.schedule.g1",
                        format!("must be finite and > 0, got {g1}"),
                    ));
                }
                if !delta_g.is_finite() {
                    return Err(ModelError::invalid(
                        "debt.schedule.deltaG",
                        format!("must be finite, got {delta_g}"),
                    ));
                }
            }
            ExpenditureSchedule::Explicit { values } => {
                if values.is_empty() {
                    return Err(ModelError::invalid("debt.schedule.values", "must be nonempty"));
                }
                if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                    return Err(ModelError::invalid(
                        format!("debt.schedule.values[{i}]"),
                        format!("must be finite, got {v}"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Expenditure of year `k` (`k >= 1`).
    pub fn value(&self, year: u32) -> Result<f64> {
        if year == 0 {
            return Err(ModelError::InvalidYear(year));
        }
        match self {
            ExpenditureSchedule::Constant { g0 } => Ok(*g0),
            ExpenditureSchedule::Linear { g1, delta_g } => Ok(f64::from(year - 1) * delta_g + g1),
            ExpenditureSchedule::Explicit { values } => {
                values
                    .get(year as usize - 1)
                    .copied()
                    .ok_or(ModelError::ScheduleTooShort {
                        needed: year as usize,
                        available: values.len(),
                    })
            }
        }
    }

    /// Number of years covered, `None` for unbounded schedules.
    pub fn covered_years(&self) -> Option<usize> {
        match self {
            ExpenditureSchedule::Explicit { values } => Some(values.len()),
            _ => None,
        }
    }

    /// Expands the first `years` values into an explicit schedule.
    pub fn expand(&self, years: u32) -> Result<ExpenditureSchedule> {
        let values = (1..=years).map(|k| self.value(k)).collect::<Result<Vec<_>>>()?;
        Ok(ExpenditureSchedule::Explicit { values })
    }
}

/// Rate of return on debt, initial per-capita debt and the expenditure path.
#[derive(Debug, Clone, PartialEq)]
pub struct DebtParams {
    pub r: f64,
    pub d0: f64,
    pub schedule: ExpenditureSchedule,
}

impl DebtParams {
    /// `r = 0` is accepted here; only the closed forms reject it.
    pub fn validate(&self) -> Result<()> {
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(ModelError::invalid(
                "debt.r",
                format!("must be finite and >= 0, got {}", self.r),
            ));
        }
        if !(self.d0.is_finite() && self.d0 >= 0.0) {
            return Err(ModelError::invalid(
                "debt.D0",
                format!("must be finite and >= 0, got {}", self.d0),
            ));
        }
        self.schedule.validate()
    }

    pub fn growth(&self) -> f64 {
        1.0 + self.r
    }
}

/// Initial budget of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialBudget {
    /// Start at the consumer's fixed point.
    FixedPoint,
    Value(f64),
}

/// Everything needed to run the coupled dynamics for `horizon` years.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub consumer: ConsumerParams,
    pub debt: DebtParams,
    pub b0: InitialBudget,
    pub horizon: u32,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.consumer.validate()?;
        self.debt.validate()?;
        if let InitialBudget::Value(b0) = self.b0 {
            if !(b0.is_finite() && b0 > 0.0) {
                return Err(ModelError::invalid(
                    "run.b0",
                    format!("must be finite and > 0, got {b0}"),
                ));
            }
        }
        if self.horizon == 0 {
            return Err(ModelError::invalid("run.horizon", "must be >= 1, got 0"));
        }
        Ok(())
    }

    /// Resolved `b0`; the fixed-point default is the no-levy fixed point.
    pub fn initial_budget(&self) -> f64 {
        match self.b0 {
            InitialBudget::FixedPoint => crate::analysis::fixed_point(&self.consumer).b_lambda,
            InitialBudget::Value(b0) => b0,
        }
    }
}

/// Per-year series of a run. Index `0` holds the initial conditions; the
/// flow series (`c`, `tau`, `delta`) are `None` there.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub scenario: Scenario,
    pub b: Vec<f64>,
    pub c: Vec<Option<f64>>,
    pub tau: Vec<Option<f64>>,
    pub delta: Vec<Option<f64>>,
    pub debt: Vec<f64>,
}

impl Trajectory {
    /// Zero-length trajectory holding only the year-0 state.
    pub fn start(scenario: Scenario) -> Self {
        let b0 = scenario.initial_budget();
        let d0 = scenario.debt.d0;
        Trajectory {
            scenario,
            b: vec![b0],
            c: vec![None],
            tau: vec![None],
            delta: vec![None],
            debt: vec![d0],
        }
    }

    /// Number of simulated years `K`.
    pub fn years(&self) -> u32 {
        (self.b.len() - 1) as u32
    }

    pub fn push(&mut self, b: f64, c: f64, tau: f64, delta: f64, debt: f64) {
        self.b.push(b);
        self.c.push(Some(c));
        self.tau.push(Some(tau));
        self.delta.push(Some(delta));
        self.debt.push(debt);
    }

    /// Drifts `Delta_1..Delta_K`.
    pub fn drifts(&self) -> Vec<f64> {
        self.delta.iter().flatten().copied().collect()
    }

    pub fn final_debt(&self) -> f64 {
        *self.debt.last().expect("trajectory always holds year 0")
    }
}

/// Tax paid in year `k`: `alpha p_a + beta [k = m] b_k + gamma c_k`.
pub fn tax(params: &ConsumerParams, budget: f64, consumption: f64, year: u32) -> f64 {
    params.alpha * params.p_a + params.wealth_rate(year) * budget + params.gamma * consumption
}

/// Budget of year `k` given last year's budget: the positive root of
/// `(1 + gamma) a b^n + (1 + beta [k = m]) b = (1 - alpha) p_a + b_prev`.
pub fn consumer_step(params: &ConsumerParams, b_prev: f64, year: u32) -> Result<f64> {
    let rhs = params.net_income() + b_prev;
    if rhs.is_nan() || rhs <= 0.0 {
        return Err(ModelError::NonPositiveBudget { year, rhs });
    }
    let lead = (1.0 + params.gamma) * params.law.a;
    let linear = 1.0 + params.wealth_rate(year);
    let n = params.law.n as i32;
    let residual = |b: f64| {
        let pow = b.powi(n - 1);
        (lead * pow * b + linear * b - rhs, f64::from(n) * lead * pow + linear)
    };

    // f(0) = -rhs < 0 and f(rhs) >= a (1 + gamma) rhs^n > 0.
    let fixed = crate::analysis::fixed_point(params).b_lambda;
    let upper = rhs.max(2.0 * fixed);
    let tol = Tolerance::default();
    solver::solve_increasing(residual, 0.0, upper, tol)
        .map(|root| root.x)
        .ok_or(ModelError::SolverDidNotConverge {
            year,
            iterations: tol.max_iterations,
        })
}

/// Non-interest change of the debt in year `k`:
/// `(g_k - alpha p_a) - beta [k = m] b_k - gamma a b_k^n`.
pub fn debt_drift(params: &ConsumerParams, expenditure: f64, budget: f64, year: u32) -> f64 {
    (expenditure - params.alpha * params.p_a)
        - params.wealth_rate(year) * budget
        - params.gamma * params.law.consumption(budget)
}

/// `D_k = (1 + r) D_{k-1} + Delta_k`.
pub fn debt_step(debt: &DebtParams, d_prev: f64, drift: f64) -> f64 {
    debt.growth() * d_prev + drift
}
