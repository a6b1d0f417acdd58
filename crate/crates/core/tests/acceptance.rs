//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any
//! failure.

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use debt_dynamics::analysis::{gross_debt_scale, max_relative_deviation};
use debt_dynamics::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn baseline_consumer() -> ConsumerParams {
    ConsumerParams {
        p_a: 100.0,
        alpha: 0.25,
        beta: 0.0,
        gamma: 0.25,
        wealth_tax_year: None,
        law: ConsumptionLaw::quadratic(0.15).unwrap(),
    }
}

fn constant_debt(r: f64, d0: f64, g0: f64) -> DebtParams {
    DebtParams {
        r,
        d0,
        schedule: ExpenditureSchedule::Constant { g0 },
    }
}

fn fixed_point_value() -> Outcome {
    let b = fixed_point(&baseline_consumer()).b_lambda;
    let rel = (b - 20.0).abs() / 20.0;
    check(rel <= 1e-12, format!("b_lambda = {b}, rel err {rel:e}"))?;
    Ok(format!("b_lambda = {b}"))
}

fn baseline_reproduction() -> Outcome {
    let run = |b0: f64| {
        simulate(&Scenario {
            consumer: baseline_consumer(),
            debt: constant_debt(0.05, 100.0, 30.0),
            b0: InitialBudget::Value(b0),
            horizon: 10,
        })
        .map_err(|e| e.to_string())
    };
    let still = run(20.0)?;
    let worst = still.b.iter().map(|b| (b - 20.0).abs()).fold(0.0, f64::max);
    check(worst <= 1e-10, format!("b0=20 drifts by {worst:e}"))?;

    let mut detail = Vec::new();
    for b0 in [18.0, 22.0] {
        let traj = run(b0)?;
        let errs: Vec<f64> = traj.b.iter().map(|b| (b - 20.0).abs()).collect();
        check(
            errs.windows(2).all(|w| w[1] < w[0] || w[0] < 1e-12),
            format!("b0={b0} not monotone"),
        )?;
        let side_ok = traj.b.iter().all(|&b| if b0 < 20.0 { b <= 20.0 } else { b >= 20.0 });
        check(side_ok, format!("b0={b0} overshoots the fixed point"))?;
        check(errs[5] < 1e-3, format!("b0={b0}: |b_5 - 20| = {:e}", errs[5]))?;
        detail.push(format!("b0={b0}: |b_5-20|={:.2e}", errs[5]));
    }
    Ok(detail.join(", "))
}

fn closed_form_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let horizon = 100;
    let mut worst_fixed = 0.0f64;
    for _ in 0..200 {
        let p_a = rng.gen_range(10.0..1000.0);
        let alpha = rng.gen_range(0.05..=0.5);
        let consumer = ConsumerParams {
            p_a,
            alpha,
            beta: 0.0,
            gamma: alpha,
            wealth_tax_year: None,
            law: ConsumptionLaw::new(rng.gen_range(0.01..1.0), rng.gen_range(2..=4)).unwrap(),
        };
        let r = 0.2 * (1.0 - rng.gen::<f64>()); // (0, 0.2]
        let debt = constant_debt(r, rng.gen_range(0.0..=10.0 * p_a), rng.gen_range(0.0..p_a));
        let traj = simulate(&Scenario {
            consumer,
            debt: debt.clone(),
            b0: InitialBudget::FixedPoint,
            horizon,
        })
        .map_err(|e| e.to_string())?;
        let closed = (1..=horizon)
            .map(|k| debt_closed_form_fixed_point(&debt, &consumer, k))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        let dev = max_relative_deviation(&closed, &traj.debt[1..], &gross_debt_scale(&debt, &traj.drifts()));
        worst_fixed = worst_fixed.max(dev);
    }

    let mut worst_general = 0.0f64;
    for _ in 0..200 {
        let p_a = rng.gen_range(10.0..1000.0);
        let consumer = ConsumerParams {
            p_a,
            alpha: rng.gen_range(0.0..0.9),
            beta: rng.gen_range(0.01..0.9),
            gamma: rng.gen_range(0.0..1.0),
            wealth_tax_year: Some(rng.gen_range(1..=horizon)),
            law: ConsumptionLaw::new(rng.gen_range(0.01..1.0), rng.gen_range(2..=4)).unwrap(),
        };
        let debt = constant_debt(
            0.2 * (1.0 - rng.gen::<f64>()),
            rng.gen_range(0.0..=10.0 * p_a),
            rng.gen_range(0.0..p_a),
        );
        let traj = simulate(&Scenario {
            consumer,
            debt: debt.clone(),
            b0: InitialBudget::Value(rng.gen_range(0.01..2.0 * p_a)),
            horizon,
        })
        .map_err(|e| e.to_string())?;
        let drifts = traj.drifts();
        let closed = debt_closed_form_general(&debt, &drifts);
        worst_general = worst_general.max(max_relative_deviation(
            &closed,
            &traj.debt[1..],
            &gross_debt_scale(&debt, &drifts),
        ));
    }
    check(
        worst_fixed < 1e-9,
        format!("fixed-point closed form deviates by {worst_fixed:e}"),
    )?;
    check(
        worst_general < 1e-9,
        format!("general closed form deviates by {worst_general:e}"),
    )?;
    Ok(format!(
        "max dev fixed-point {worst_fixed:.1e}, general {worst_general:.1e}"
    ))
}

/// 5x5 grid straddling `r D0 + g0 = 40` for `alpha = 1/4`, `r = 1/20`, `p_a = 100`.
fn condition_grid() -> Vec<(f64, f64)> {
    let mut grid = Vec::new();
    for d0 in [0.0, 40.0, 80.0, 120.0, 160.0] {
        for g0 in [32.0, 34.0, 36.0, 38.0, 40.0] {
            grid.push((d0, g0));
        }
    }
    grid
}

fn quarter_consumer(p_a: f64) -> ConsumerParams {
    ConsumerParams {
        p_a,
        ..baseline_consumer()
    }
}

fn condition_instance() -> Outcome {
    let consumer = quarter_consumer(100.0);
    let (mut held, mut failed) = (0, 0);
    for (d0, g0) in condition_grid() {
        let report = decrease_condition(&consumer, &constant_debt(1.0 / 20.0, d0, g0), 1).map_err(|e| e.to_string())?;
        let expected = consumer.p_a > 2.5 * (d0 / 20.0 + g0);
        check(
            report.holds == expected,
            format!("D0={d0}, g0={g0}: holds={} expected {expected}", report.holds),
        )?;
        if report.holds {
            held += 1;
        } else {
            failed += 1;
        }
    }
    for share in [0.0, 0.1, 0.2, 0.3, 0.39, 0.399, 0.4, 0.401, 0.41, 0.5, 0.9] {
        let p_a = 100.0;
        let g0 = share * p_a;
        let report =
            decrease_condition(&consumer, &constant_debt(1.0 / 20.0, 0.0, g0), 1).map_err(|e| e.to_string())?;
        check(
            report.holds == (g0 < 0.4 * p_a),
            format!("D0=0, g0={g0}: holds={}", report.holds),
        )?;
    }
    Ok(format!(
        "grid: {held} hold, {failed} fail; D0=0 corollary g0 < 0.4 p_a confirmed"
    ))
}

fn condition_monotonicity() -> Outcome {
    let consumer = quarter_consumer(100.0);
    let mut boundary = 0;
    for (d0, g0) in condition_grid() {
        let debt = constant_debt(1.0 / 20.0, d0, g0);
        let report = decrease_condition(&consumer, &debt, 1).map_err(|e| e.to_string())?;
        let traj = simulate(&Scenario {
            consumer,
            debt,
            b0: InitialBudget::FixedPoint,
            horizon: 50,
        })
        .map_err(|e| e.to_string())?;
        let d = &traj.debt;
        let at = format!("D0={d0}, g0={g0}, margin={:e}", report.margin);
        if report.holds {
            check(
                d.windows(2).all(|w| w[1] < w[0]),
                format!("{at}: not strictly decreasing"),
            )?;
        } else if report.margin < -1e-9 {
            check(d.windows(2).all(|w| w[1] >= w[0]), format!("{at}: decreases somewhere"))?;
        } else if report.margin == 0.0 {
            boundary += 1;
            let worst = d.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
            check(worst <= 1e-9, format!("{at}: D moves by {worst:e}"))?;
        } else {
            return Err(format!("{at}: margin neither zero nor clear of the boundary"));
        }
    }
    check(boundary > 0, "no exactly-zero margin point in the grid")?;
    Ok(format!(
        "25 points consistent, {boundary} exact-boundary points constant"
    ))
}

fn generalizations() -> Outcome {
    let cubic = ConsumerParams {
        law: ConsumptionLaw::new(0.15, 3).unwrap(),
        ..baseline_consumer()
    };
    let b = fixed_point(&cubic).b_lambda;
    let image = consumer_step(&cubic, b, 1).map_err(|e| e.to_string())?;
    check(
        (image - b).abs() <= 1e-10,
        format!("n=3 fixed point {b} maps to {image}"),
    )?;

    let consumer = baseline_consumer();
    let (g1, r, d0) = (30.0, 0.05, 100.0);
    let mut worst = 0.0f64;
    for delta_g in [-2.0, -0.5, 0.25, 1.0, 3.0] {
        let debt = DebtParams {
            r,
            d0,
            schedule: ExpenditureSchedule::Linear { g1, delta_g },
        };
        for k in 1..=30u32 {
            let report = decrease_condition(&consumer, &debt, k).map_err(|e| e.to_string())?;
            let g = |j: u32| (f64::from(j) - 1.0) * delta_g + g1;
            let brute: f64 = (1..k).map(|j| (g(j + 1) - g(j)) / (1.0 + r).powi(j as i32)).sum();
            let want = g1 + r * d0 + brute;
            worst = worst.max((report.rhs - want).abs() / want.abs());
        }
    }
    check(
        worst <= 1e-12,
        format!("linear condition vs partial sum: rel dev {worst:e}"),
    )?;

    let tiny = 1e-6 * g1;
    let flat = DebtParams {
        r,
        d0,
        schedule: ExpenditureSchedule::Linear { g1, delta_g: 0.0 },
    };
    for delta_g in [tiny, -tiny] {
        let tilted = DebtParams {
            schedule: ExpenditureSchedule::Linear { g1, delta_g },
            ..flat.clone()
        };
        for k in [1u32, 2, 10, 30, 1000] {
            let a = decrease_condition(&consumer, &flat, k).map_err(|e| e.to_string())?;
            let b = decrease_condition(&consumer, &tilted, k).map_err(|e| e.to_string())?;
            check(
                (a.rhs - b.rhs).abs() < tiny / r,
                format!("k={k}: rhs moves by {:e}", (a.rhs - b.rhs).abs()),
            )?;
        }
    }
    Ok(format!(
        "n=3 b_lambda={b:.10}, linear rel dev {worst:.1e}, |dG|=1e-6 g1 negligible"
    ))
}

fn accounting_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let consumer = ConsumerParams {
            p_a: rng.gen_range(0.1..1e4),
            alpha: rng.gen_range(0.0..1.0),
            beta: rng.gen_range(0.0..1.0),
            gamma: rng.gen_range(0.0..3.0),
            wealth_tax_year: if rng.gen_bool(0.5) {
                Some(rng.gen_range(1..5))
            } else {
                None
            },
            law: ConsumptionLaw::new(rng.gen_range(1e-4..5.0), rng.gen_range(2..=6)).unwrap(),
        };
        let b_prev = rng.gen_range(1e-3..1e4);
        let year = rng.gen_range(1..5);
        let b = consumer_step(&consumer, b_prev, year).map_err(|e| e.to_string())?;
        let c = consumer.law.consumption(b);
        let tau = tax(&consumer, b, c, year);
        let scale = consumer.p_a + b_prev + b + c + tau;
        worst = worst.max(((b - b_prev) - (consumer.p_a - tau - c)).abs() / scale);
    }
    check(worst <= 1e-9, format!("worst relative residual {worst:e}"))?;
    Ok(format!("1000 steps, worst relative residual {worst:.1e}"))
}

fn io_contract() -> Outcome {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let doc = fs::read_to_string(fixtures.join("baseline_b0_18.toml")).map_err(|e| e.to_string())?;
    let render = || -> std::result::Result<String, String> {
        let scenario = load_scenario(&doc).map_err(|e| e.to_string())?;
        let traj = simulate(&scenario).map_err(|e| e.to_string())?;
        Ok(write_trajectory(&traj, Format::Csv))
    };
    let first = render()?;
    check(first == render()?, "CSV differs between runs")?;
    let golden = fs::read_to_string(fixtures.join("baseline_b0_18.csv")).map_err(|e| e.to_string())?;
    check(first == golden, "CSV differs from the golden file")?;

    let traj = simulate(&load_scenario(&doc).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let back = read_trajectory_json(&write_trajectory(&traj, Format::Json)).map_err(|e| e.to_string())?;
    check(back == traj, "JSON round-trip is not exact")?;

    let mut count = 0;
    let mut paths: Vec<_> = fs::read_dir(fixtures.join("malformed"))
        .map_err(|e| e.to_string())?
        .map(|e| e.map(|e| e.path()).map_err(|e| e.to_string()))
        .collect::<std::result::Result<_, _>>()?;
    paths.sort();
    for path in paths {
        let doc = fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let expect = doc
            .lines()
            .next()
            .and_then(|l| l.strip_prefix("# expect: "))
            .unwrap_or_default();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let ok = match (load_scenario(&doc), expect.split_whitespace().next()) {
            (Err(ScenarioError::Parse { .. }), Some("parse")) => true,
            (Err(ScenarioError::Validation { field, .. }), Some("validation")) => {
                expect.split_whitespace().nth(1) == Some(field.as_str())
            }
            _ => false,
        };
        check(ok, format!("{name}: does not yield `{expect}`"))?;
        count += 1;
    }
    check(count >= 10, format!("malformed corpus has only {count} files"))?;
    Ok(format!(
        "golden CSV stable, JSON exact, {count} malformed files rejected as documented"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 fixed-point value", fixed_point_value),
        ("2 budget dynamics from b0 in {18, 20, 22}", baseline_reproduction),
        ("3 closed form vs recursion", closed_form_oracle),
        ("4 decrease condition with alpha = 1/4, r = 1/20", condition_instance),
        ("5 condition vs simulated monotonicity", condition_monotonicity),
        ("6 general consumption law and linear expenditure", generalizations),
        ("7 accounting identity", accounting_identity),
        ("8 io contract", io_contract),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    if failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
