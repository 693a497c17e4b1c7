//! Seeded Monte Carlo trajectory engine over the logical channel.
//!
//! Each trajectory holds a pure logical state and, once per QEC cycle,
//! draws a syndrome class from the channel mixture, applies its X rotation,
//! and flips with the class probability. Averaging the squared-overlap
//! failure over trajectories converges to the exact channel composition,
//! which is what [`validate_against_analytic`] checks.
//!
//! Reproducibility contract: trajectory `i` draws from a counter-based
//! stream derived from `(seed, i)`, and accumulation is an ordered
//! reduction over fixed-size trajectory chunks, so results are bit
//! identical for any worker count.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::errchan::{ErrorParams, InfidelityMode};
use crate::error::{Error, Result};
use crate::repcode::LogicalChannel;

/// Trajectories per parallel work unit. Fixed so that chunk boundaries,
/// and therefore summation order, never depend on the thread count.
const TRAJECTORY_CHUNK: usize = 64;

/// Mixture weights are expected to sum to 1 within this bound; larger
/// deviations are silently renormalized but indicate a broken channel.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// A pure logical qubit state `alpha |0> + beta |1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalState {
    alpha: Complex64,
    beta: Complex64,
}

impl LogicalState {
    /// Requires `|alpha|^2 + |beta|^2 = 1` within 1e-12; the stored state
    /// is renormalized exactly.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::StateNorm((norm_sq - 1.0).abs()));
        }
        let norm = norm_sq.sqrt();
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    /// `cos(theta) |0> - i sin(theta) |1>`: the family of states whose
    /// Bloch vector lies in the y-z plane, maximally affected by X
    /// rotations. `theta = 0` is logical |0>.
    pub fn worst_case(theta: f64) -> Self {
        Self {
            alpha: Complex64::new(theta.cos(), 0.0),
            beta: Complex64::new(0.0, -theta.sin()),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// Squared overlap `|<self|other>|^2`.
    pub fn overlap(&self, other: &Self) -> f64 {
        (self.alpha.conj() * other.alpha + self.beta.conj() * other.beta).norm_sqr()
    }
}

/// A logical channel prepared for trajectory sampling: cumulative class
/// weights plus per-class rotation angles and flip probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledChannel {
    cumulative: Vec<f64>,
    rotations: Vec<f64>,
    flips: Vec<f64>,
    weight_deviation: f64,
}

impl SampledChannel {
    /// Prepare the exact logical channel for sampling. Weights are
    /// renormalized; the recorded deviation from 1 should stay below
    /// [`WEIGHT_SUM_TOL`] for any valid channel.
    pub fn from_logical(channel: &LogicalChannel) -> Self {
        let weights: Vec<f64> = channel.classes().iter().map(|c| c.weight).collect();
        let rotations = channel.classes().iter().map(|c| c.rotation).collect();
        let flips = channel.classes().iter().map(|c| c.flip).collect();
        Self::from_parts(weights, rotations, flips)
    }

    /// Single-class channel for direct level-n sampling: the logical qubit
    /// sees the plain single-qubit channel with the given parameters.
    pub fn from_params(p: ErrorParams) -> Self {
        Self::from_parts(vec![1.0], vec![p.epsilon()], vec![p.q()])
    }

    fn from_parts(weights: Vec<f64>, rotations: Vec<f64>, flips: Vec<f64>) -> Self {
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Self {
            cumulative,
            rotations,
            flips,
            weight_deviation: (total - 1.0).abs(),
        }
    }

    pub fn weight_deviation(&self) -> f64 {
        self.weight_deviation
    }

    fn class_index(&self, u: f64) -> usize {
        self.cumulative
            .partition_point(|&c| c < u)
            .min(self.cumulative.len() - 1)
    }
}

/// One QEC cycle of a single trajectory: draw a class, rotate, maybe flip.
/// Output is renormalized.
pub fn sample_cycle<R: Rng>(
    state: &LogicalState,
    channel: &SampledChannel,
    rng: &mut R,
) -> LogicalState {
    let class = channel.class_index(rng.gen());
    let half = 0.5 * channel.rotations[class];
    let (c, s) = (half.cos(), half.sin());
    let rot_alpha = c * state.alpha - Complex64::i() * s * state.beta;
    let rot_beta = c * state.beta - Complex64::i() * s * state.alpha;

    let flip: f64 = rng.gen();
    let (alpha, beta) = if flip < channel.flips[class] {
        (rot_beta, rot_alpha)
    } else {
        (rot_alpha, rot_beta)
    };

    let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    LogicalState {
        alpha: alpha / norm,
        beta: beta / norm,
    }
}

/// Configuration of a failure-curve run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryConfig {
    pub channel: SampledChannel,
    pub cycles: usize,
    pub samples: usize,
    pub seed: u64,
    /// Initial-state parameter of the worst-case family; 0 is logical |0>.
    pub theta: f64,
}

impl TrajectoryConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.cycles == 0 {
            return Err(Error::Config("cycle count must be at least 1".into()));
        }
        Ok(())
    }
}

/// Mean failure probability and its binomial standard error per cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailurePoint {
    pub cycle: usize,
    pub mean: f64,
    pub stderr: f64,
}

/// Per-cycle failure estimates averaged over all trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct FailureCurve {
    pub points: Vec<FailurePoint>,
}

/// Run the failure curve from the worst-case initial state of the config.
pub fn run_failure_curve(cfg: &TrajectoryConfig) -> Result<FailureCurve> {
    run_failure_curve_from_state(cfg, LogicalState::worst_case(cfg.theta))
}

/// Run the failure curve from an explicit initial state, recording
/// `1 - |<psi(0)|psi(m)>|^2` per cycle, averaged over trajectories.
pub fn run_failure_curve_from_state(
    cfg: &TrajectoryConfig,
    initial: LogicalState,
) -> Result<FailureCurve> {
    cfg.validate()?;
    let chunks = cfg.samples.div_ceil(TRAJECTORY_CHUNK);

    let partials: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut sums = vec![0.0; cfg.cycles];
            let lo = chunk * TRAJECTORY_CHUNK;
            let hi = ((chunk + 1) * TRAJECTORY_CHUNK).min(cfg.samples);
            for trajectory in lo..hi {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(trajectory as u64);
                let mut state = initial;
                for sum in sums.iter_mut() {
                    state = sample_cycle(&state, &cfg.channel, &mut rng);
                    *sum += (1.0 - initial.overlap(&state)).clamp(0.0, 1.0);
                }
            }
            sums
        })
        .collect();

    let mut totals = vec![0.0; cfg.cycles];
    for partial in &partials {
        for (total, value) in totals.iter_mut().zip(partial) {
            *total += value;
        }
    }

    let samples = cfg.samples as f64;
    let points = totals
        .iter()
        .enumerate()
        .map(|(i, total)| {
            let mean = total / samples;
            FailurePoint {
                cycle: i + 1,
                mean,
                stderr: (mean * (1.0 - mean) / samples).sqrt(),
            }
        })
        .collect();
    Ok(FailureCurve { points })
}

/// Like [`run_failure_curve`], but inside a dedicated thread pool of the
/// given size. Results are bit identical for any worker count.
pub fn run_failure_curve_with_workers(
    cfg: &TrajectoryConfig,
    workers: usize,
) -> Result<FailureCurve> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_failure_curve(cfg))
}

/// One z-score row; `z` is absent where the binomial standard error is
/// undefined (estimated mean exactly 0 or 1) unless the residual is also
/// exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZScoreRow {
    pub cycle: usize,
    pub z: Option<f64>,
}

/// Statistical comparison of a Monte Carlo curve against the exact
/// composed-channel prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub rows: Vec<ZScoreRow>,
    pub max_abs_z: f64,
    pub fraction_above_four: f64,
    pub excluded: usize,
}

/// Per-cycle z-scores of the curve against the exact composition of the
/// single-qubit channel `p` (which must describe the same level the curve
/// was sampled at).
pub fn validate_against_analytic(curve: &FailureCurve, p: ErrorParams) -> ValidationReport {
    let mut rows = Vec::with_capacity(curve.points.len());
    let mut max_abs_z: f64 = 0.0;
    let mut above = 0usize;
    let mut excluded = 0usize;
    for point in &curve.points {
        let expected = p.worst_case_infidelity(point.cycle as u64, InfidelityMode::Exact);
        let residual = point.mean - expected;
        let z = if point.stderr > 0.0 {
            Some(residual / point.stderr)
        } else if residual == 0.0 {
            Some(0.0)
        } else {
            None
        };
        match z {
            Some(z) => {
                max_abs_z = max_abs_z.max(z.abs());
                if z.abs() > 4.0 {
                    above += 1;
                }
            }
            None => excluded += 1,
        }
        rows.push(ZScoreRow {
            cycle: point.cycle,
            z,
        });
    }
    let defined = rows.len() - excluded;
    ValidationReport {
        rows,
        max_abs_z,
        fraction_above_four: if defined > 0 {
            above as f64 / defined as f64
        } else {
            0.0
        },
        excluded,
    }
}
