//! Subcommand implementations.

use std::error::Error;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use repqec::physoracle::{even_weight_syndrome_bijection, tomography_logical_rptm, xx_checks};
use repqec::recurse::{coherence_table, recurse_exact, CoherenceRow};
use repqec::repcode::{exact_logical_params, syndrome_classes, CodeDistance};
use repqec::{CouplingSet, ErrorParams, InfidelityMode, SampledChannel, TrajectoryConfig};

use crate::table::{Cell, Table};
use crate::{Command, OutputArgs, RecursionMode};

pub enum Outcome {
    Success,
    CheckFailed(String),
}

type CmdResult = Result<Outcome, Box<dyn Error>>;

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Recurse {
            d,
            d_list,
            epsilon,
            q,
            n_max,
            mode,
            out,
        } => recurse_cmd(d, d_list, epsilon, q, n_max, mode, &out),
        Command::Metrics {
            epsilon,
            q,
            threshold,
            out,
        } => metrics_cmd(epsilon, q, threshold, &out),
        Command::Simulate {
            d,
            epsilon,
            q,
            samples,
            m_max,
            seed,
            theta,
            workers,
            out,
        } => simulate_cmd(d, epsilon, q, samples, m_max, seed, theta, workers, &out),
        Command::OracleCheck {
            n,
            grid,
            tolerance,
            out,
        } => oracle_check_cmd(n, grid, tolerance, &out),
        Command::ZzCheck {
            n_max,
            sets,
            seed,
            tolerance,
            out,
        } => zz_check_cmd(n_max, sets, seed, tolerance, &out),
        Command::Sweep {
            d,
            epsilon_min,
            epsilon_max,
            epsilon_steps,
            q_min,
            q_max,
            q_steps,
            out,
        } => sweep_cmd(
            d,
            (epsilon_min, epsilon_max, epsilon_steps),
            (q_min, q_max, q_steps),
            &out,
        ),
    }
}

/// Honor the SEED environment variable when the flag is absent.
fn resolve_seed(flag: Option<u64>) -> Result<u64, Box<dyn Error>> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("SEED") {
        Ok(text) => text.parse::<u64>().map_err(|_| {
            format!("SEED environment variable {text:?} is not a 64-bit integer").into()
        }),
        Err(_) => Ok(0),
    }
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, Box<dyn Error>> {
    if steps == 0 {
        return Err("grid must have at least one point per axis".into());
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

const RECURSE_COLUMNS: [&str; 10] = [
    "d",
    "n",
    "epsilon",
    "q",
    "log10_epsilon",
    "log10_q",
    "r",
    "diamond",
    "d_over_r",
    "eps_over_q",
];

fn coherence_row_cells(row: &CoherenceRow) -> Vec<Cell> {
    vec![
        Cell::UInt(row.distance as u64),
        Cell::UInt(row.level as u64),
        Cell::Float(row.epsilon),
        Cell::Float(row.q),
        Cell::Float(row.log10_epsilon),
        Cell::Float(row.log10_q),
        Cell::Float(row.infidelity),
        Cell::Float(row.diamond),
        Cell::OptFloat(row.diamond_over_infidelity),
        Cell::OptFloat(row.eps_over_q),
    ]
}

fn recurse_cmd(
    d: Option<u32>,
    d_list: Vec<u32>,
    epsilon: f64,
    q: f64,
    n_max: u32,
    mode: RecursionMode,
    out: &OutputArgs,
) -> CmdResult {
    let raw: Vec<u32> = match (d, d_list.is_empty()) {
        (Some(single), true) => vec![single],
        (None, false) => d_list,
        (None, true) => return Err("one of --d or --d-list is required".into()),
        (Some(_), false) => unreachable!("clap rejects --d with --d-list"),
    };
    let distances = raw
        .into_iter()
        .map(CodeDistance::new)
        .collect::<Result<Vec<_>, _>>()?;
    let params = ErrorParams::new(epsilon, q)?;

    let rows = match mode {
        RecursionMode::Leading => coherence_table(&distances, params, n_max)?,
        RecursionMode::Exact => {
            let mut rows = Vec::new();
            for &distance in &distances {
                let trace = recurse_exact(distance, params, n_max)?;
                for level in &trace.levels {
                    rows.push(CoherenceRow {
                        distance: distance.get(),
                        level: level.level,
                        epsilon: level.params.epsilon(),
                        q: level.params.q(),
                        log10_epsilon: level.log10_epsilon,
                        log10_q: level.log10_q,
                        infidelity: level.metrics.infidelity,
                        diamond: level.metrics.diamond,
                        diamond_over_infidelity: level.metrics.coherence_ratio,
                        eps_over_q: level.eps_over_q,
                    });
                }
            }
            rows
        }
    };

    let mut table = Table::new(RECURSE_COLUMNS.to_vec());
    for row in &rows {
        table.push_row(coherence_row_cells(row));
    }
    table.emit(out.output.as_deref(), out.format.into())?;
    Ok(Outcome::Success)
}

fn metrics_cmd(epsilon: f64, q: f64, threshold: f64, out: &OutputArgs) -> CmdResult {
    let params = ErrorParams::new(epsilon, q)?;
    let metrics = params.metrics();
    let prediction = params.predict(threshold)?;
    let twirled = params.pauli_twirl();

    let mut table = Table::new(vec![
        "epsilon",
        "q",
        "r",
        "diamond",
        "d_over_r",
        "d_over_r_approx",
        "q_twirled",
        "m_crit",
        "m_fail",
    ]);
    table.push_row(vec![
        Cell::Float(epsilon),
        Cell::Float(q),
        Cell::Float(metrics.infidelity),
        Cell::Float(metrics.diamond),
        Cell::OptFloat(metrics.coherence_ratio),
        Cell::OptFloat(metrics.coherence_ratio_approx),
        Cell::Float(twirled.q()),
        Cell::OptUInt(prediction.crossover_cycle),
        Cell::OptUInt(prediction.failure_cycle),
    ]);
    table.emit(out.output.as_deref(), out.format.into())?;
    Ok(Outcome::Success)
}

#[allow(clippy::too_many_arguments)]
fn simulate_cmd(
    d: u32,
    epsilon: f64,
    q: f64,
    samples: usize,
    m_max: usize,
    seed: Option<u64>,
    theta: f64,
    workers: Option<usize>,
    out: &OutputArgs,
) -> CmdResult {
    let distance = CodeDistance::new(d)?;
    let physical = ErrorParams::new(epsilon, q)?;
    let channel = syndrome_classes(distance, physical);
    let seed = resolve_seed(seed)?;

    let cfg = TrajectoryConfig {
        channel: SampledChannel::from_logical(&channel),
        cycles: m_max,
        samples,
        seed,
        theta,
    };
    let curve = match workers {
        Some(workers) => repqec::mcsim::run_failure_curve_with_workers(&cfg, workers)?,
        None => repqec::mcsim::run_failure_curve(&cfg)?,
    };

    // Analytic overlays: the leading-order level-1 parameters feed the two
    // reporting formulas; the exact level-1 parameters feed the exact
    // channel composition.
    let leading = repqec::recurse::recurse_leading(distance, physical, 1)?.levels[1].params;
    let exact = exact_logical_params(distance, physical)?;

    let mut table = Table::new(vec!["m", "mc_mean", "mc_stderr", "eq16", "eq17", "exact"]);
    for point in &curve.points {
        let m = point.cycle as u64;
        table.push_row(vec![
            Cell::UInt(m),
            Cell::Float(point.mean),
            Cell::Float(point.stderr),
            Cell::Float(leading.worst_case_infidelity(m, InfidelityMode::FirstOrder)),
            Cell::Float(leading.worst_case_infidelity(m, InfidelityMode::Quadratic)),
            Cell::Float(exact.worst_case_infidelity(m, InfidelityMode::Exact)),
        ]);
    }
    table.emit(out.output.as_deref(), out.format.into())?;
    Ok(Outcome::Success)
}

fn oracle_check_cmd(n: usize, grid: usize, tolerance: f64, out: &OutputArgs) -> CmdResult {
    let distance = CodeDistance::new(n as u32)?;
    let epsilons = linspace(0.0, 0.3, grid)?;
    let qs = linspace(0.0, 0.1, grid)?;

    let mut table = Table::new(vec!["epsilon", "q", "deviation"]);
    let mut max_deviation = 0.0f64;
    for &epsilon in &epsilons {
        for &q in &qs {
            let params = ErrorParams::new(epsilon, q)?;
            let oracle = tomography_logical_rptm(n, params)?;
            let closed = syndrome_classes(distance, params).reduced_ptm();
            let deviation = oracle.max_abs_diff(&closed);
            max_deviation = max_deviation.max(deviation);
            table.push_row(vec![
                Cell::Float(epsilon),
                Cell::Float(q),
                Cell::Float(deviation),
            ]);
        }
    }
    table.emit(out.output.as_deref(), out.format.into())?;

    let status = if max_deviation <= tolerance {
        "pass"
    } else {
        "fail"
    };
    println!(
        "oracle-check: n={n} grid={grid} max_deviation={max_deviation:.3e} tolerance={tolerance:.3e} status={status}"
    );
    if max_deviation <= tolerance {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::CheckFailed(format!(
            "oracle-check failed: max deviation {max_deviation:.3e} exceeds tolerance {tolerance:.3e}"
        )))
    }
}

fn zz_check_cmd(
    n_max: usize,
    sets: usize,
    seed: Option<u64>,
    tolerance: f64,
    out: &OutputArgs,
) -> CmdResult {
    if n_max < 3 || n_max.is_multiple_of(2) || n_max > repqec::physoracle::MAX_BIJECTION_QUBITS {
        return Err(format!(
            "--n-max {n_max} must be an odd integer in 3..={}",
            repqec::physoracle::MAX_BIJECTION_QUBITS
        )
        .into());
    }
    let seed = resolve_seed(seed)?;

    let mut table = Table::new(vec!["n", "bijection", "min_fidelity"]);
    let mut all_bijections = true;
    let mut min_fidelity = f64::INFINITY;
    for n in (3..=n_max).step_by(2) {
        let bijection = even_weight_syndrome_bijection(n)?;
        all_bijections &= bijection;

        let fidelity = if n <= repqec::physoracle::MAX_ORACLE_QUBITS {
            let mut worst = f64::INFINITY;
            for set_index in 0..sets {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(((n as u64) << 32) | set_index as u64);
                let angles: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.5..1.5)).collect();
                let couplings = CouplingSet::chain(&angles)?;
                let check = xx_checks(n, &couplings)?;
                worst = worst.min(check.fidelity);
            }
            min_fidelity = min_fidelity.min(worst);
            Some(worst)
        } else {
            None
        };
        table.push_row(vec![
            Cell::UInt(n as u64),
            Cell::Bool(bijection),
            Cell::OptFloat(fidelity),
        ]);
    }
    table.emit(out.output.as_deref(), out.format.into())?;

    let fidelity_ok = min_fidelity >= 1.0 - tolerance;
    let status = if all_bijections && fidelity_ok {
        "pass"
    } else {
        "fail"
    };
    println!(
        "zz-check: n_max={n_max} sets={sets} bijection={all_bijections} min_fidelity={min_fidelity:.15} status={status}"
    );
    if all_bijections && fidelity_ok {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::CheckFailed(format!(
            "zz-check failed: bijection={all_bijections}, min fidelity {min_fidelity:.15}"
        )))
    }
}

fn sweep_cmd(
    d: u32,
    (epsilon_min, epsilon_max, epsilon_steps): (f64, f64, usize),
    (q_min, q_max, q_steps): (f64, f64, usize),
    out: &OutputArgs,
) -> CmdResult {
    let distance = CodeDistance::new(d)?;
    let epsilons = linspace(epsilon_min, epsilon_max, epsilon_steps)?;
    let qs = linspace(q_min, q_max, q_steps)?;

    let mut table = Table::new(vec![
        "d",
        "epsilon",
        "q",
        "logical_epsilon",
        "logical_q",
        "logical_r",
        "logical_diamond",
    ]);
    for &epsilon in &epsilons {
        for &q in &qs {
            let physical = ErrorParams::new(epsilon, q)?;
            let logical = exact_logical_params(distance, physical)?;
            let metrics = logical.metrics();
            table.push_row(vec![
                Cell::UInt(d as u64),
                Cell::Float(epsilon),
                Cell::Float(q),
                Cell::Float(logical.epsilon()),
                Cell::Float(logical.q()),
                Cell::Float(metrics.infidelity),
                Cell::Float(metrics.diamond),
            ]);
        }
    }
    table.emit(out.output.as_deref(), out.format.into())?;
    Ok(Outcome::Success)
}
