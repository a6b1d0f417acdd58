use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use debt_dynamics::analysis::{gross_debt_scale, max_relative_deviation};
use debt_dynamics::format::g12;
use debt_dynamics::{
    debt_closed_form_fixed_point, debt_closed_form_schedule, decrease_condition, fixed_point, load_scenario, simulate,
    sweep, write_trajectory, ConditionReport, ExpenditureSchedule, Format, InitialBudget, Scenario, SweepAxis,
};
use serde_json::json;

mod grid;

use grid::Grid;

/// Consumer-budget / public-debt simulator.
#[derive(Debug, Parser)]
#[command(name = "debtsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the coupled recursions and print the per-year trajectory.
    Simulate(Common),
    /// Compare the fixed-point closed-form debt path with the recursion started at the fixed point.
    ClosedForm(Common),
    /// Evaluate the debt-decrease condition at the fixed point.
    Condition {
        #[command(flatten)]
        common: Common,
        /// Year k for linear or explicit schedules (ignored for constant ones).
        #[arg(short = 'k', long)]
        year: Option<u32>,
    },
    /// Sweep one parameter and report the condition and terminal debt per value.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to vary: alpha, g0, r, D0 or p_a.
        #[arg(long)]
        axis: SweepAxis,
        /// Grid values: `start:stop:count` (linear spacing, inclusive) or `v1,v2,...`.
        #[arg(long)]
        grid: Grid,
        /// Year k for linear or explicit schedules.
        #[arg(short = 'k', long)]
        year: Option<u32>,
    },
    /// Print the consumer's fixed-point budget.
    FixedPoint(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file (TOML).
    scenario: PathBuf,
    /// Write output here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Output format.
    #[arg(short, long, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
    Ok(load_scenario(&text)?)
}

/// Year for the condition on non-constant schedules, or a usage error.
fn condition_year(scenario: &Scenario, year: Option<u32>, subcommand: &str) -> u32 {
    match (&scenario.debt.schedule, year) {
        (ExpenditureSchedule::Constant { .. }, y) => y.unwrap_or(1),
        (_, Some(y)) => y,
        (_, None) => Cli::command()
            .error(
                ErrorKind::MissingRequiredArgument,
                format!("`{subcommand}` on a linear or explicit schedule requires --year"),
            )
            .exit(),
    }
}

fn simulate_cmd(common: &Common) -> Result<String, Failure> {
    let traj = simulate(&load(&common.scenario)?)?;
    Ok(write_trajectory(&traj, common.format))
}

fn closed_form_cmd(common: &Common) -> Result<String, Failure> {
    let scenario = load(&common.scenario)?;
    let (consumer, debt) = (&scenario.consumer, &scenario.debt);
    let closed = (1..=scenario.horizon)
        .map(|k| match debt.schedule {
            ExpenditureSchedule::Constant { .. } => debt_closed_form_fixed_point(debt, consumer, k),
            _ => debt_closed_form_schedule(debt, consumer, k),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let at_fixed_point = Scenario {
        b0: InitialBudget::FixedPoint,
        ..scenario.clone()
    };
    let traj = simulate(&at_fixed_point)?;
    let recursion = &traj.debt[1..];
    let scale = gross_debt_scale(debt, &traj.drifts());
    let deviations: Vec<f64> = (0..closed.len())
        .map(|i| max_relative_deviation(&closed[i..=i], &recursion[i..=i], &scale[i..=i]))
        .collect();
    let max_dev = deviations.iter().copied().fold(0.0, f64::max);
    eprintln!("max relative deviation: {}", g12(max_dev));

    Ok(match common.format {
        Format::Csv => {
            let mut out = String::from("k,D_closed,D_recursion,rel_dev\n");
            for (i, ((c, r), d)) in closed.iter().zip(recursion).zip(&deviations).enumerate() {
                writeln!(out, "{},{},{},{}", i + 1, g12(*c), g12(*r), g12(*d)).unwrap();
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "k": (1..=scenario.horizon).collect::<Vec<_>>(),
                "D_closed": closed,
                "D_recursion": recursion,
                "rel_dev": deviations,
                "max_relative_deviation": max_dev,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
    })
}

fn verdict_line(report: &ConditionReport) -> String {
    let (word, cmp) = if report.holds { ("yes", ">") } else { ("no", "<=") };
    let at = report
        .regime
        .year()
        .map(|k| format!(" at year {k}"))
        .unwrap_or_default();
    format!(
        "debt decreases{at}: {word} (2*alpha*p_a/(1+alpha) = {} {cmp} {} = threshold)",
        g12(report.lhs),
        g12(report.rhs)
    )
}

fn condition_cmd(common: &Common, year: Option<u32>) -> Result<String, Failure> {
    let scenario = load(&common.scenario)?;
    let year = condition_year(&scenario, year, "condition");
    let report = decrease_condition(&scenario.consumer, &scenario.debt, year)?;
    Ok(match common.format {
        Format::Csv => {
            let mut out = verdict_line(&report);
            out.push('\n');
            writeln!(out, "lhs={}", g12(report.lhs)).unwrap();
            writeln!(out, "rhs={}", g12(report.rhs)).unwrap();
            writeln!(out, "margin={}", g12(report.margin)).unwrap();
            writeln!(out, "holds={}", report.holds).unwrap();
            writeln!(out, "regime={}", report.regime.name()).unwrap();
            if let Some(k) = report.regime.year() {
                writeln!(out, "year={k}").unwrap();
            }
            if let Some(a) = report.asymptotic_rhs {
                writeln!(out, "asymptotic_rhs={}", g12(a)).unwrap();
            }
            out
        }
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report_json(&report))?),
    })
}

fn report_json(report: &ConditionReport) -> serde_json::Value {
    json!({
        "lhs": report.lhs,
        "rhs": report.rhs,
        "margin": report.margin,
        "holds": report.holds,
        "regime": report.regime.name(),
        "year": report.regime.year(),
        "asymptotic_rhs": report.asymptotic_rhs,
    })
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn sweep_cmd(common: &Common, axis: SweepAxis, grid: &Grid, year: Option<u32>) -> Result<String, Failure> {
    let scenario = load(&common.scenario)?;
    let year = condition_year(&scenario, year, "sweep");
    let entries = sweep(&scenario, axis, grid.values(), year);
    Ok(match common.format {
        Format::Csv => {
            let mut out = format!("{axis},lhs,rhs,margin,holds,final_D,error\n");
            for e in &entries {
                let (lhs, rhs, margin, holds) = match &e.report {
                    Ok(r) => (g12(r.lhs), g12(r.rhs), g12(r.margin), r.holds.to_string()),
                    Err(_) => Default::default(),
                };
                let final_d = e.final_debt.as_ref().map(|d| g12(*d)).unwrap_or_default();
                let mut errors: Vec<String> = [e.report.as_ref().err(), e.final_debt.as_ref().err()]
                    .into_iter()
                    .flatten()
                    .map(ToString::to_string)
                    .collect();
                errors.dedup();
                writeln!(
                    out,
                    "{},{lhs},{rhs},{margin},{holds},{final_d},{}",
                    g12(e.value),
                    csv_quote(&errors.join("; "))
                )
                .unwrap();
            }
            out
        }
        Format::Json => {
            let rows: Vec<_> = entries
                .iter()
                .map(|e| {
                    json!({
                        "value": e.value,
                        "report": e.report.as_ref().map(report_json).unwrap_or(serde_json::Value::Null),
                        "report_error": e.report.as_ref().err().map(ToString::to_string),
                        "final_D": e.final_debt.as_ref().ok(),
                        "simulation_error": e.final_debt.as_ref().err().map(ToString::to_string),
                    })
                })
                .collect();
            let doc = json!({ "axis": axis.name(), "year": year, "entries": rows });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
    })
}

fn fixed_point_cmd(common: &Common) -> Result<String, Failure> {
    let scenario = load(&common.scenario)?;
    let fp = fixed_point(&scenario.consumer);
    let slope = fp.contraction_factor(&scenario.consumer);
    Ok(match common.format {
        Format::Csv => format!("b_lambda,contraction_factor\n{},{}\n", g12(fp.b_lambda), g12(slope)),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({ "b_lambda": fp.b_lambda, "contraction_factor": slope }))?
        ),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::Simulate(c) => (c, simulate_cmd(c)),
        Command::ClosedForm(c) => (c, closed_form_cmd(c)),
        Command::Condition { common, year } => (common, condition_cmd(common, *year)),
        Command::Sweep {
            common,
            axis,
            grid,
            year,
        } => (common, sweep_cmd(common, *axis, grid, *year)),
        Command::FixedPoint(c) => (c, fixed_point_cmd(c)),
    };
    let text = match result {
        Ok(text) => text,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match &common.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
