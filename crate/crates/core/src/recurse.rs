//! Concatenation-level iteration of the error parameters.
//!
//! Two modes: the leading-order recursion
//!
//! ```text
//! eps_{n+1} = 2 C(d-1, (d-1)/2) (eps_n / 2)^d
//! q_{n+1}   = C(d, (d-1)/2) (eps_n^2 / 4 + q_n)^{(d+1)/2}
//! ```
//!
//! and the exact mode, which iterates the full one-level map from
//! [`crate::repcode::exact_logical_params`]. Both shrink doubly
//! exponentially, so the leading recursion also runs in the log domain and
//! keeps reporting once the linear values underflow; linear fields carry
//! zero past that point.

use crate::errchan::{ChannelMetrics, ErrorParams};
use crate::error::{Error, Result};
use crate::repcode::{binomial, exact_logical_params, CodeDistance};

/// Depth cap for the leading-order recursion.
pub const MAX_LEADING_LEVELS: u32 = 10;
/// Depth cap for the exact recursion; beyond this the doubly exponential
/// shrinkage underflows even the log-domain bookkeeping of intermediates.
pub const MAX_EXACT_LEVELS: u32 = 4;

/// Smallest magnitude reported through the linear fields; below this the
/// log10 fields are the only meaningful record.
const LINEAR_FLOOR: f64 = 1e-300;

/// One concatenation level: the effective parameters, their base-10 logs
/// (always populated; negative infinity for exact zeros), channel metrics,
/// and the coherence ratio `eps_n / q_n` (absent when `q_n = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct LevelRow {
    pub level: u32,
    pub params: ErrorParams,
    pub log10_epsilon: f64,
    pub log10_q: f64,
    pub metrics: ChannelMetrics,
    pub eps_over_q: Option<f64>,
}

/// Per-level trace of a recursion run; `levels[0]` is the physical input.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTrace {
    pub distance: CodeDistance,
    pub levels: Vec<LevelRow>,
}

/// One row of the per-level coherence table behind the figures.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceRow {
    pub distance: u32,
    pub level: u32,
    pub epsilon: f64,
    pub q: f64,
    pub log10_epsilon: f64,
    pub log10_q: f64,
    pub infidelity: f64,
    pub diamond: f64,
    pub diamond_over_infidelity: Option<f64>,
    pub eps_over_q: Option<f64>,
}

/// log10(x + y) given log10 x and log10 y.
fn log10_sum(lx: f64, ly: f64) -> f64 {
    if lx == f64::NEG_INFINITY {
        return ly;
    }
    if ly == f64::NEG_INFINITY {
        return lx;
    }
    let hi = lx.max(ly);
    let lo = lx.min(ly);
    hi + (1.0 + 10f64.powf(lo - hi)).log10()
}

fn build_row(
    level: u32,
    sign: f64,
    eps_linear: f64,
    q_linear: f64,
    log10_epsilon: f64,
    log10_q: f64,
) -> Result<LevelRow> {
    let eps = if eps_linear.abs() >= LINEAR_FLOOR {
        eps_linear
    } else {
        0.0
    };
    let q = if q_linear >= LINEAR_FLOOR {
        q_linear
    } else {
        0.0
    };
    let params = ErrorParams::new(eps, q).map_err(|_| {
        Error::Config(format!(
            "recursion left the physical domain at level {level} (eps = {eps_linear}, q = {q_linear}); \
             the leading-order map is only meaningful for small inputs"
        ))
    })?;
    // Ratio from the log fields so it survives underflow of the linear ones.
    let eps_over_q =
        (log10_q != f64::NEG_INFINITY).then(|| sign * 10f64.powf(log10_epsilon - log10_q));
    Ok(LevelRow {
        level,
        params,
        log10_epsilon,
        log10_q,
        metrics: params.metrics(),
        eps_over_q,
    })
}

/// Iterate the leading-order recursion for `n_max` levels.
pub fn recurse_leading(d: CodeDistance, p0: ErrorParams, n_max: u32) -> Result<LevelTrace> {
    if n_max > MAX_LEADING_LEVELS {
        return Err(Error::LevelCount {
            requested: n_max,
            max: MAX_LEADING_LEVELS,
        });
    }
    let n = d.get();
    let half = d.half();
    let eps_coeff = 2.0 * binomial(n - 1, half) as f64;
    let q_coeff = binomial(n, half) as f64;
    let q_exponent = n.div_ceil(2) as i32;

    let sign = if p0.epsilon() < 0.0 { -1.0 } else { 1.0 };
    let mut eps = p0.epsilon();
    let mut q = p0.q();
    let mut log_eps = p0.epsilon().abs().log10();
    let mut log_q = p0.q().log10();

    let mut levels = Vec::with_capacity(n_max as usize + 1);
    levels.push(build_row(0, sign, eps, q, log_eps, log_q)?);

    for level in 1..=n_max {
        // Linear recursion (underflows gracefully to zero) ...
        let next_eps = eps_coeff * (0.5 * eps).powi(n as i32);
        let next_q = q_coeff * (0.25 * eps * eps + q).powi(q_exponent);
        // ... and the same step in the log domain.
        let next_log_eps = eps_coeff.log10() + n as f64 * (log_eps - std::f64::consts::LOG10_2);
        let next_log_q =
            q_coeff.log10() + q_exponent as f64 * log10_sum(2.0 * log_eps - 4f64.log10(), log_q);

        eps = next_eps;
        q = next_q;
        log_eps = next_log_eps;
        log_q = next_log_q;
        levels.push(build_row(level, sign, eps, q, log_eps, log_q)?);
    }

    Ok(LevelTrace {
        distance: d,
        levels,
    })
}

/// Iterate the exact one-level map for `n_max` levels.
pub fn recurse_exact(d: CodeDistance, p0: ErrorParams, n_max: u32) -> Result<LevelTrace> {
    if n_max > MAX_EXACT_LEVELS {
        return Err(Error::LevelCount {
            requested: n_max,
            max: MAX_EXACT_LEVELS,
        });
    }
    let mut levels = Vec::with_capacity(n_max as usize + 1);
    let mut p = p0;
    for level in 0..=n_max {
        if level > 0 {
            p = exact_logical_params(d, p)?;
        }
        let sign = if p.epsilon() < 0.0 { -1.0 } else { 1.0 };
        levels.push(build_row(
            level,
            sign,
            p.epsilon(),
            p.q(),
            p.epsilon().abs().log10(),
            p.q().log10(),
        )?);
    }
    Ok(LevelTrace {
        distance: d,
        levels,
    })
}

/// Combine leading-order recursions over several distances into the flat
/// table behind the coherence figures. Rows are ordered by (distance,
/// level).
pub fn coherence_table(
    d_list: &[CodeDistance],
    p0: ErrorParams,
    n_max: u32,
) -> Result<Vec<CoherenceRow>> {
    let mut rows = Vec::new();
    for &d in d_list {
        let trace = recurse_leading(d, p0, n_max)?;
        for row in &trace.levels {
            rows.push(CoherenceRow {
                distance: d.get(),
                level: row.level,
                epsilon: row.params.epsilon(),
                q: row.params.q(),
                log10_epsilon: row.log10_epsilon,
                log10_q: row.log10_q,
                infidelity: row.metrics.infidelity,
                diamond: row.metrics.diamond,
                diamond_over_infidelity: row.metrics.coherence_ratio,
                eps_over_q: row.eps_over_q,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn d(n: u32) -> CodeDistance {
        CodeDistance::new(n).unwrap()
    }

    fn params(eps: f64, q: f64) -> ErrorParams {
        ErrorParams::new(eps, q).unwrap()
    }

    #[test]
    fn leading_level_one_reference() {
        let trace = recurse_leading(d(3), params(0.1, 0.0), 1).unwrap();
        let l1 = &trace.levels[1];
        assert_relative_eq!(l1.params.epsilon(), 5.0e-4, max_relative = 1e-12);
        assert_relative_eq!(l1.params.q(), 1.875e-5, max_relative = 1e-12);
    }

    #[test]
    fn leading_level_two_reference() {
        let trace = recurse_leading(d(3), params(0.1, 0.0), 2).unwrap();
        let l2 = &trace.levels[2];
        assert_relative_eq!(l2.params.epsilon(), 6.25e-11, max_relative = 1e-11);
        assert_relative_eq!(l2.params.q(), 1.0617e-9, max_relative = 1e-4);
        let ratio = l2.eps_over_q.unwrap();
        assert_relative_eq!(ratio, 0.0589, max_relative = 1e-2);
        assert!(ratio < 0.1);
    }

    #[test]
    fn stochastic_input_stays_stochastic() {
        let trace = recurse_leading(d(5), params(0.0, 0.03), 6).unwrap();
        for row in &trace.levels[1..] {
            assert_eq!(row.params.epsilon(), 0.0);
            assert_eq!(row.log10_epsilon, f64::NEG_INFINITY);
        }
    }

    #[test]
    fn level_zero_is_input() {
        let p = params(0.07, 0.002);
        for trace in [
            recurse_leading(d(3), p, 3).unwrap(),
            recurse_exact(d(3), p, 2).unwrap(),
        ] {
            assert_eq!(trace.levels[0].params, p);
            assert_eq!(trace.levels[0].level, 0);
        }
    }

    #[test]
    fn exact_agrees_with_leading_at_small_epsilon() {
        let exact = recurse_exact(d(3), params(0.01, 0.0), 1).unwrap();
        let leading = recurse_leading(d(3), params(0.01, 0.0), 1).unwrap();
        let (e, l) = (&exact.levels[1].params, &leading.levels[1].params);
        assert_relative_eq!(e.epsilon(), l.epsilon(), max_relative = 0.05);
        assert_relative_eq!(e.q(), l.q(), max_relative = 0.05);
    }

    #[test]
    fn exact_majority_vote_level_one() {
        let trace = recurse_exact(d(3), params(0.0, 0.01), 1).unwrap();
        assert_relative_eq!(trace.levels[1].params.q(), 0.000298, max_relative = 1e-12);
    }

    #[test]
    fn depth_caps_enforced() {
        assert!(matches!(
            recurse_leading(d(3), params(0.1, 0.0), 11),
            Err(Error::LevelCount { .. })
        ));
        assert!(matches!(
            recurse_exact(d(3), params(0.1, 0.0), 5),
            Err(Error::LevelCount { .. })
        ));
    }

    #[test]
    fn log_fields_survive_underflow() {
        // d = 5 from eps = 0.1 underflows the linear fields well before
        // level 10; the log fields keep decreasing monotonically.
        let trace = recurse_leading(d(5), params(0.1, 0.0), 10).unwrap();
        let deep = &trace.levels[10];
        assert_eq!(deep.params.epsilon(), 0.0);
        assert_eq!(deep.params.q(), 0.0);
        assert!(deep.log10_epsilon.is_finite());
        assert!(deep.log10_q.is_finite());
        for pair in trace.levels.windows(2).skip(1) {
            assert!(pair[1].log10_epsilon < pair[0].log10_epsilon);
            assert!(pair[1].log10_q < pair[0].log10_q);
        }
    }

    #[test]
    fn log_fields_match_linear_while_representable() {
        let trace = recurse_leading(d(3), params(0.08, 0.004), 4).unwrap();
        for row in &trace.levels {
            if row.params.q() > 1e-290 {
                assert_relative_eq!(
                    row.log10_epsilon,
                    row.params.epsilon().abs().log10(),
                    max_relative = 1e-10
                );
                assert_relative_eq!(row.log10_q, row.params.q().log10(), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn negative_rotation_keeps_sign_in_ratio() {
        let trace = recurse_leading(d(3), params(-0.1, 0.0), 1).unwrap();
        let l1 = &trace.levels[1];
        assert!(l1.params.epsilon() < 0.0);
        assert!(l1.eps_over_q.unwrap() < 0.0);
    }

    #[test]
    fn coherence_table_reference_ratios() {
        let rows = coherence_table(&[d(3), d(5)], params(0.1, 0.0), 2).unwrap();
        let row = |dist: u32, level: u32| {
            rows.iter()
                .find(|r| r.distance == dist && r.level == level)
                .unwrap()
        };
        // eps_1 / q_1 = 2 (d+1) / (d eps) at q = 0
        assert_relative_eq!(
            row(3, 1).eps_over_q.unwrap(),
            80.0 / 3.0,
            max_relative = 1e-10
        );
        assert_relative_eq!(row(5, 1).eps_over_q.unwrap(), 24.0, max_relative = 1e-10);
        assert_eq!(rows.len(), 6);
    }

    #[test]
    fn two_levels_suffice_for_incoherence() {
        for n in [3u32, 5, 7] {
            for eps in [0.01, 0.05, 0.1] {
                for q in [0.0, 0.02, 0.1] {
                    let trace = recurse_leading(d(n), params(eps, q), 2).unwrap();
                    let l2 = &trace.levels[2];
                    let ratio = l2.eps_over_q.unwrap().abs();
                    assert!(ratio < 0.1, "d={n} eps={eps} q={q}: ratio {ratio}");
                    if let Some(dr) = l2.metrics.coherence_ratio {
                        assert_abs_diff_eq!(dr, 1.5, epsilon = 1e-3);
                    }
                }
            }
        }
    }

    #[test]
    fn coherence_ratio_is_maximized_at_zero_flip_input() {
        for q0 in [0.001, 0.01, 0.05, 0.1] {
            for level in 1..=3 {
                let bound = recurse_leading(d(3), params(0.1, 0.0), level).unwrap();
                let other = recurse_leading(d(3), params(0.1, q0), level).unwrap();
                let bound_ratio = bound.levels[level as usize].eps_over_q.unwrap();
                let ratio = other.levels[level as usize].eps_over_q.unwrap();
                assert!(
                    ratio <= bound_ratio * (1.0 + 1e-12),
                    "q0={q0} level={level}: {ratio} > {bound_ratio}"
                );
            }
        }
    }

    #[test]
    fn rejects_parameters_outside_contraction_regime() {
        // Leading-order map is meaningless here: q_1 would exceed 1/2.
        let result = recurse_leading(d(3), params(0.5, 0.45), 1);
        assert!(matches!(result, Err(Error::Config(_))));
    }
}
