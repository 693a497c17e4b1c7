//! Algebra and metrics for the single-qubit X-type error channel.
//!
//! The channel acts on a qubit density matrix as
//!
//! ```text
//! rho -> (1-q) U rho U' + q X U rho U' X,    U = exp(-i epsilon X / 2)
//! ```
//!
//! i.e. a systematic rotation about the X axis composed with a stochastic
//! bit flip. The channel leaves the span of {1, X} invariant, so its Pauli
//! transfer matrix is fully described by the 2x2 block acting on the {Y, Z}
//! plane. That block is a scaled rotation `[[a, -b], [b, a]]`, closed under
//! products and convex sums, which makes exact multi-cycle composition
//! cheap: it is just complex multiplication of `a + i b`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Tolerance on `a^2 + b^2 <= 1` for [`ReducedPtm`] blocks; absorbs
/// round-off accumulated by long compositions.
pub const BLOCK_NORM_TOL: f64 = 1e-12;

/// Round-trip cap for the doubling search in [`ErrorParams::predict`].
const DOUBLING_CAP: u64 = 1 << 62;

/// Coherent rotation angle and stochastic flip probability of the
/// single-qubit X-type channel.
///
/// `q` is the probability of a stochastic bit flip per cycle and `epsilon`
/// the angle of the systematic rotation, constant in time. The same pair
/// also describes the effective logical channel at any concatenation
/// level, with renormalized values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorParams {
    epsilon: f64,
    q: f64,
}

impl ErrorParams {
    /// Validates `q` in `[0, 1/2]` and `epsilon` in `(-pi, pi]`.
    ///
    /// The branch is half-open at `-pi` so that extraction from a reduced
    /// block (which uses the two-argument arctangent) is total.
    pub fn new(epsilon: f64, q: f64) -> Result<Self> {
        if !q.is_finite() || !(0.0..=0.5).contains(&q) {
            return Err(Error::FlipProbability(q));
        }
        if !epsilon.is_finite() || epsilon <= -PI || epsilon > PI {
            return Err(Error::RotationAngle(epsilon));
        }
        Ok(Self { epsilon, q })
    }

    /// The identity channel, `(epsilon, q) = (0, 0)`.
    pub fn noiseless() -> Self {
        Self {
            epsilon: 0.0,
            q: 0.0,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_noiseless(&self) -> bool {
        self.epsilon == 0.0 && self.q == 0.0
    }

    /// Map physical rates to per-cycle channel parameters:
    /// `epsilon = omega * tau`, `q = (1 - exp(-2 gamma tau)) / 2`.
    pub fn from_physical_rates(rates: PhysicalRates) -> Result<Self> {
        let epsilon = rates.omega() * rates.tau();
        if !epsilon.is_finite() || epsilon.abs() >= PI {
            return Err(Error::RotationAngle(epsilon));
        }
        let q = 0.5 * (1.0 - (-2.0 * rates.gamma() * rates.tau()).exp());
        Self::new(epsilon, q)
    }

    /// The 2x2 transfer-matrix block on the {Y, Z} plane:
    /// `a = (1-2q) cos(epsilon)`, `b = (1-2q) sin(epsilon)`.
    pub fn reduced_ptm(&self) -> ReducedPtm {
        let gain = 1.0 - 2.0 * self.q;
        ReducedPtm {
            a: gain * self.epsilon.cos(),
            b: gain * self.epsilon.sin(),
        }
    }

    /// Keep only the diagonal of the reduced block: the twirled channel is
    /// purely stochastic with `q_tw = (1 - (1-2q) cos(epsilon)) / 2`.
    pub fn pauli_twirl(&self) -> Self {
        let q_tw = 0.5 * (1.0 - (1.0 - 2.0 * self.q) * self.epsilon.cos());
        Self {
            epsilon: 0.0,
            q: q_tw,
        }
    }

    /// Average infidelity, diamond distance, and their ratio.
    ///
    /// The diamond distance is evaluated as
    /// `sqrt(q^2 + (1-2q) sin^2(epsilon/2))`, which is algebraically equal
    /// to `sqrt((3/2) r - q (1-q))` but does not cancel catastrophically
    /// when `epsilon` is many orders of magnitude below `q`.
    pub fn metrics(&self) -> ChannelMetrics {
        let s2 = (0.5 * self.epsilon).sin().powi(2);
        let infidelity = (2.0 / 3.0) * (self.q * self.epsilon.cos() + s2);
        let diamond = (self.q * self.q + (1.0 - 2.0 * self.q) * s2).sqrt();
        let coherence_ratio = (infidelity > 0.0).then(|| diamond / infidelity);
        let coherence_ratio_approx = if self.q < 0.1 && self.epsilon.abs() < 0.1 {
            let quarter = 0.25 * self.epsilon * self.epsilon;
            let denom = self.q + quarter;
            (denom > 0.0).then(|| 1.5 * (self.q * self.q + quarter).sqrt() / denom)
        } else {
            None
        };
        ChannelMetrics {
            infidelity,
            diamond,
            coherence_ratio,
            coherence_ratio_approx,
        }
    }

    /// Worst-case infidelity after `m` cycles, maximized over initial
    /// states (attained on states whose Bloch vector lies in the y-z
    /// plane).
    ///
    /// `Exact` composes the channel with itself `m` times and is
    /// authoritative; the other two are reporting formulas: `FirstOrder`
    /// is first order in `m*q` (exact in the rotation), `Quadratic` is the
    /// small-parameter limit, a plain sum of the two error rates.
    pub fn worst_case_infidelity(&self, m: u64, mode: InfidelityMode) -> f64 {
        let mf = m as f64;
        match mode {
            InfidelityMode::FirstOrder => {
                mf * self.q * (mf * self.epsilon).cos() + (0.5 * mf * self.epsilon).sin().powi(2)
            }
            InfidelityMode::Quadratic => mf * self.q + (0.5 * mf * self.epsilon).powi(2),
            InfidelityMode::Exact => {
                let composed = self
                    .reduced_ptm()
                    .power(m)
                    .extract_params()
                    .expect("powers of a physical block stay physical");
                composed.q * composed.epsilon.cos() + (0.5 * composed.epsilon).sin().powi(2)
            }
        }
    }

    /// Linear-growth diamond distance after `m` cycles, `m * D(1)`.
    ///
    /// A reporting formula only: it is first order in the per-cycle error,
    /// and for mixed coherent/stochastic channels the composed channel's
    /// diamond distance falls below it as `m` grows. Use
    /// [`ErrorParams::worst_case_infidelity`] in `Exact` mode for
    /// authoritative multi-cycle numbers.
    pub fn diamond_distance_linear(&self, m: u64) -> f64 {
        m as f64 * self.metrics().diamond
    }

    /// Failure prediction with the exact-composition infidelity. See
    /// [`ErrorParams::predict_with_mode`].
    pub fn predict(&self, threshold: f64) -> Result<FailurePrediction> {
        self.predict_with_mode(threshold, InfidelityMode::Exact)
    }

    /// Predict the stochastic-to-coherent crossover cycle
    /// `ceil(2q / epsilon^2)` (absent for a purely stochastic channel) and
    /// the first cycle at which the worst-case infidelity reaches
    /// `threshold`, found by doubling plus bisection (absent for the
    /// noiseless channel, or when the infidelity never reaches the
    /// threshold; a purely stochastic channel saturates at 1/2 in `Exact`
    /// mode).
    pub fn predict_with_mode(
        &self,
        threshold: f64,
        mode: InfidelityMode,
    ) -> Result<FailurePrediction> {
        if !threshold.is_finite() || threshold <= 0.0 || threshold >= 1.0 {
            return Err(Error::Config(format!(
                "failure threshold {threshold} must lie in (0, 1)"
            )));
        }
        let crossover_cycle = (self.epsilon != 0.0).then(|| {
            (2.0 * self.q / (self.epsilon * self.epsilon))
                .ceil()
                .max(1.0) as u64
        });
        let failure_cycle = if self.is_noiseless() {
            None
        } else {
            self.first_crossing(threshold, mode)
        };
        Ok(FailurePrediction {
            crossover_cycle,
            failure_cycle,
            threshold,
        })
    }

    fn first_crossing(&self, threshold: f64, mode: InfidelityMode) -> Option<u64> {
        let w = |m: u64| self.worst_case_infidelity(m, mode);
        if w(1) >= threshold {
            return Some(1);
        }
        let mut hi = 1u64;
        loop {
            if hi >= DOUBLING_CAP {
                return None;
            }
            hi *= 2;
            if w(hi) >= threshold {
                break;
            }
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if w(mid) >= threshold {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }
}

/// Which worst-case-infidelity formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfidelityMode {
    /// `m q cos(m epsilon) + sin^2(m epsilon / 2)`: first order in `m q`.
    FirstOrder,
    /// `m q + (m epsilon / 2)^2`: sum of the two error rates.
    Quadratic,
    /// The channel composed with itself `m` times; authoritative.
    Exact,
}

/// Physical dephasing rate `gamma`, systematic rotation rate `omega`, and
/// QEC cycle time `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalRates {
    omega: f64,
    gamma: f64,
    tau: f64,
}

impl PhysicalRates {
    pub fn new(omega: f64, gamma: f64, tau: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::Config(format!(
                "rotation rate omega = {omega} not finite"
            )));
        }
        if gamma.is_nan() || gamma < 0.0 {
            return Err(Error::DephasingRate(gamma));
        }
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::CycleTime(tau));
        }
        Ok(Self { omega, gamma, tau })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// The 2x2 real block `[[a, -b], [b, a]]` of the Pauli transfer matrix on
/// the {Y, Z} plane. The upper `1 (+) X` block of the full transfer matrix
/// is trivial for this channel family and never materialized.
///
/// Composition of channels is multiplication of these blocks, i.e. complex
/// multiplication of `a + i b`; any product or convex sum of valid blocks
/// is again of this form with `a^2 + b^2 <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPtm {
    a: f64,
    b: f64,
}

impl ReducedPtm {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let norm_sq = a * a + b * b;
        if !norm_sq.is_finite() || norm_sq > 1.0 + BLOCK_NORM_TOL {
            return Err(Error::NonPhysicalBlock(norm_sq));
        }
        Ok(Self { a, b })
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Matrix product of the two blocks.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a - self.b * other.b,
            b: self.a * other.b + self.b * other.a,
        }
    }

    /// The block composed with itself `m` times; `power(0)` is the
    /// identity. Square-and-multiply, so large cycle counts stay cheap.
    pub fn power(&self, m: u64) -> Self {
        let mut result = Self::identity();
        let mut base = *self;
        let mut exp = m;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.compose(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.compose(&base);
            }
        }
        result
    }

    /// Invert the canonical form: `q = (1 - sqrt(a^2 + b^2)) / 2` clamped
    /// into `[0, 1/2]`, `epsilon` the angle of `(a, b)` on the principal
    /// branch `(-pi, pi]`. Rejects blocks with `a^2 + b^2 > 1` beyond
    /// [`BLOCK_NORM_TOL`].
    pub fn extract_params(&self) -> Result<ErrorParams> {
        let norm_sq = self.a * self.a + self.b * self.b;
        if !norm_sq.is_finite() || norm_sq > 1.0 + BLOCK_NORM_TOL {
            return Err(Error::NonPhysicalBlock(norm_sq));
        }
        let q = (0.5 * (1.0 - norm_sq.min(1.0).sqrt())).clamp(0.0, 0.5);
        let mut epsilon = self.b.atan2(self.a);
        if epsilon == -PI {
            epsilon = PI;
        }
        ErrorParams::new(epsilon, q)
    }

    /// Largest entrywise difference between the two blocks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.a - other.a).abs().max((self.b - other.b).abs())
    }
}

/// Average infidelity `r`, diamond distance `D`, and the coherence ratio
/// `D / r` (absent exactly when `r = 0`). `coherence_ratio_approx` is the
/// small-parameter closed form `(3/2) sqrt(q^2 + eps^2/4) / (q + eps^2/4)`,
/// reported when both `q` and `|epsilon|` are below 0.1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMetrics {
    pub infidelity: f64,
    pub diamond: f64,
    pub coherence_ratio: Option<f64>,
    pub coherence_ratio_approx: Option<f64>,
}

/// Predicted cycle counts: `crossover_cycle` is where coherent behavior
/// overtakes stochastic behavior, `failure_cycle` where the worst-case
/// infidelity first reaches `threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailurePrediction {
    pub crossover_cycle: Option<u64>,
    pub failure_cycle: Option<u64>,
    pub threshold: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn physical_rates_pure_dephasing() {
        let rates = PhysicalRates::new(0.0, 1.0, 0.1).unwrap();
        let p = ErrorParams::from_physical_rates(rates).unwrap();
        assert_eq!(p.epsilon(), 0.0);
        // (1 - e^{-0.2}) / 2
        assert_relative_eq!(p.q(), 0.09063462346100909, max_relative = 1e-14);
    }

    #[test]
    fn physical_rates_pure_rotation() {
        let rates = PhysicalRates::new(1.0, 0.0, 0.1).unwrap();
        let p = ErrorParams::from_physical_rates(rates).unwrap();
        assert_relative_eq!(p.epsilon(), 0.1, max_relative = 1e-15);
        assert_eq!(p.q(), 0.0);
    }

    #[test]
    fn physical_rates_depolarized_limit() {
        let rates = PhysicalRates::new(0.0, 1e300, 1.0).unwrap();
        let p = ErrorParams::from_physical_rates(rates).unwrap();
        assert_eq!(p.q(), 0.5);
    }

    #[test]
    fn physical_rates_rejects_bad_inputs() {
        assert!(PhysicalRates::new(0.0, 1.0, 0.0).is_err());
        assert!(PhysicalRates::new(0.0, 1.0, -1.0).is_err());
        assert!(PhysicalRates::new(0.0, -1.0, 1.0).is_err());
        // |omega * tau| >= pi
        let rates = PhysicalRates::new(10.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            ErrorParams::from_physical_rates(rates),
            Err(Error::RotationAngle(_))
        ));
    }

    #[test]
    fn params_rejects_out_of_range() {
        assert!(ErrorParams::new(0.0, -0.1).is_err());
        assert!(ErrorParams::new(0.0, 0.6).is_err());
        assert!(ErrorParams::new(4.0, 0.0).is_err());
        assert!(ErrorParams::new(f64::NAN, 0.0).is_err());
        assert!(ErrorParams::new(PI, 0.0).is_ok());
        assert!(ErrorParams::new(-PI, 0.0).is_err());
    }

    #[test]
    fn reduced_ptm_reference_points() {
        let id = ErrorParams::new(0.0, 0.0).unwrap().reduced_ptm();
        assert_eq!((id.a(), id.b()), (1.0, 0.0));

        let mixed = ErrorParams::new(0.0, 0.5).unwrap().reduced_ptm();
        assert_eq!((mixed.a(), mixed.b()), (0.0, 0.0));

        let p = ErrorParams::new(0.1, 0.01).unwrap().reduced_ptm();
        assert_relative_eq!(p.a(), 0.98 * 0.1f64.cos(), max_relative = 1e-15);
        assert_relative_eq!(p.b(), 0.98 * 0.1f64.sin(), max_relative = 1e-15);
    }

    #[test]
    fn power_adds_rotation_angles() {
        let x = ErrorParams::new(0.02, 0.0).unwrap().reduced_ptm();
        let p = x.power(7).extract_params().unwrap();
        assert_relative_eq!(p.epsilon(), 0.14, max_relative = 1e-12);
        assert_abs_diff_eq!(p.q(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn power_of_flip_channel_is_closed_form() {
        let q = 0.03;
        let x = ErrorParams::new(0.0, q).unwrap().reduced_ptm();
        for m in [0u64, 1, 2, 5, 17, 100] {
            let block = x.power(m);
            assert_relative_eq!(
                block.a(),
                (1.0 - 2.0 * q).powi(m as i32),
                max_relative = 1e-12
            );
            assert_eq!(block.b(), 0.0);
        }
    }

    #[test]
    fn compose_identity_is_neutral() {
        let x = ErrorParams::new(0.3, 0.1).unwrap().reduced_ptm();
        let composed = ReducedPtm::identity().compose(&x);
        assert_eq!(composed, x);
    }

    #[test]
    fn extract_reference_points() {
        let p = ReducedPtm::new(1.0, 0.0).unwrap().extract_params().unwrap();
        assert_eq!((p.epsilon(), p.q()), (0.0, 0.0));

        let p = ReducedPtm::new(0.9, 0.0).unwrap().extract_params().unwrap();
        assert_eq!(p.epsilon(), 0.0);
        assert_relative_eq!(p.q(), 0.05, max_relative = 1e-14);

        assert!(ReducedPtm::new(1.0, 0.1).is_err());
    }

    #[test]
    fn extract_roundtrip() {
        let p = ErrorParams::new(0.3, 0.02).unwrap();
        let back = p.reduced_ptm().extract_params().unwrap();
        assert_abs_diff_eq!(back.epsilon(), 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(back.q(), 0.02, epsilon = 1e-14);
    }

    #[test]
    fn twirl_reference_points() {
        let p = ErrorParams::new(0.0, 0.2).unwrap();
        assert_eq!(p.pauli_twirl(), p);

        let tw = ErrorParams::new(0.1, 0.0).unwrap().pauli_twirl();
        assert_eq!(tw.epsilon(), 0.0);
        assert_relative_eq!(tw.q(), 0.05f64.sin().powi(2), max_relative = 1e-12);

        let p = ErrorParams::new(0.4, 0.07).unwrap();
        assert_eq!(p.pauli_twirl().pauli_twirl(), p.pauli_twirl());
    }

    #[test]
    fn metrics_reference_points() {
        let m = ErrorParams::new(0.0, 0.01).unwrap().metrics();
        assert_relative_eq!(m.infidelity, 0.006666666666666667, max_relative = 1e-14);
        assert_relative_eq!(m.diamond, 0.01, max_relative = 1e-14);
        assert_relative_eq!(m.coherence_ratio.unwrap(), 1.5, max_relative = 1e-12);

        let m = ErrorParams::new(0.1, 0.0).unwrap().metrics();
        assert_relative_eq!(
            m.infidelity,
            (2.0 / 3.0) * 0.05f64.sin().powi(2),
            max_relative = 1e-14
        );
        assert_relative_eq!(m.diamond, 0.05f64.sin(), max_relative = 1e-14);
        assert_relative_eq!(m.coherence_ratio.unwrap(), 30.0, max_relative = 1e-3);
        // reported strictly inside the small-parameter window, where the
        // closed form with q = 0 reduces to 3 / epsilon
        assert!(m.coherence_ratio_approx.is_none());
        let m = ErrorParams::new(0.08, 0.0).unwrap().metrics();
        assert_relative_eq!(
            m.coherence_ratio_approx.unwrap(),
            37.5,
            max_relative = 1e-12
        );

        let m = ErrorParams::noiseless().metrics();
        assert_eq!((m.infidelity, m.diamond), (0.0, 0.0));
        assert!(m.coherence_ratio.is_none());
        assert!(m.coherence_ratio_approx.is_none());
    }

    #[test]
    fn diamond_matches_direct_expression_in_moderate_range() {
        // sqrt((3/2) r - q (1-q)) rewritten as sqrt(q^2 + (1-2q) sin^2(e/2));
        // check the two expressions agree where no cancellation occurs.
        for &eps in &[0.0, 0.05, 0.2, 0.8, -0.4] {
            for &q in &[0.0, 0.01, 0.1, 0.3, 0.5] {
                let p = ErrorParams::new(eps, q).unwrap();
                let m = p.metrics();
                let direct = (1.5 * m.infidelity - q * (1.0 - q)).max(0.0).sqrt();
                assert_abs_diff_eq!(m.diamond, direct, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn purely_stochastic_channel_has_collinear_metrics() {
        // For epsilon = 0: D = q and D = (3/2) r, for every q.
        for i in 0..=50 {
            let q = 0.5 * i as f64 / 50.0;
            let m = ErrorParams::new(0.0, q).unwrap().metrics();
            assert_eq!(m.diamond, q);
            assert_abs_diff_eq!(1.5 * m.infidelity, q, epsilon = 1e-16);
        }
    }

    #[test]
    fn linear_diamond_growth_is_first_order_only() {
        let p = ErrorParams::new(0.01, 0.0).unwrap();
        // Composed diamond distance of a pure rotation is |sin(m eps / 2)|.
        let composed = |m: u64| {
            let c = p.reduced_ptm().power(m).extract_params().unwrap();
            (0.5 * c.epsilon()).sin().abs()
        };
        assert_relative_eq!(
            p.diamond_distance_linear(10),
            composed(10),
            max_relative = 1e-3
        );
        // ... but the linear formula overshoots once m eps is order one.
        let m = 200;
        assert!(p.diamond_distance_linear(m) > 1.05 * composed(m));
    }

    #[test]
    fn infidelity_zero_cycles_is_zero() {
        let p = ErrorParams::new(0.2, 0.1).unwrap();
        for mode in [
            InfidelityMode::FirstOrder,
            InfidelityMode::Quadratic,
            InfidelityMode::Exact,
        ] {
            assert_eq!(p.worst_case_infidelity(0, mode), 0.0);
        }
    }

    #[test]
    fn infidelity_coherent_reference() {
        let p = ErrorParams::new(0.1, 0.0).unwrap();
        let w = p.worst_case_infidelity(100, InfidelityMode::FirstOrder);
        assert_relative_eq!(w, 5.0f64.sin().powi(2), max_relative = 1e-12);
        assert_relative_eq!(w, 0.9195357645382262, max_relative = 1e-12);
    }

    #[test]
    fn infidelity_stochastic_first_order_vs_exact() {
        let p = ErrorParams::new(0.0, 1e-4).unwrap();
        let first = p.worst_case_infidelity(100, InfidelityMode::FirstOrder);
        assert_relative_eq!(first, 0.01, max_relative = 1e-12);
        let exact = p.worst_case_infidelity(100, InfidelityMode::Exact);
        let closed = 0.5 * (1.0 - (1.0 - 2e-4f64).powi(100));
        assert_relative_eq!(exact, closed, max_relative = 1e-10);
        assert_relative_eq!(exact, 0.009901, max_relative = 1e-4);
    }

    // Level-1 leading-order parameters of (d=3, epsilon=0.1, q=0); used by
    // several predictor tests below.
    const EPS1: f64 = 5.0e-4;
    const Q1: f64 = 1.875e-5;

    #[test]
    fn predict_crossover_cycle() {
        let p = ErrorParams::new(EPS1, Q1).unwrap();
        let pred = p.predict(0.5).unwrap();
        assert_eq!(pred.crossover_cycle, Some(150));
    }

    #[test]
    fn predict_failure_cycle_matches_linear_scan() {
        let p = ErrorParams::new(EPS1, Q1).unwrap();
        let pred = p.predict(0.5).unwrap();
        let found = pred.failure_cycle.unwrap();

        // Independent route: linear scan of the closed-form composition.
        let w = |m: u64| {
            let qm = 0.5 * (1.0 - (1.0 - 2.0 * Q1).powi(m as i32));
            let em = m as f64 * EPS1;
            qm * em.cos() + (0.5 * em).sin().powi(2)
        };
        let scan = (1..10_000).find(|&m| w(m) >= 0.5).unwrap();
        assert_eq!(found, scan);
        // sin^2(m eps / 2) alone crosses 1/2 at m eps = pi/2, i.e. ~3142;
        // the stochastic admixture pulls the crossing slightly earlier.
        assert!((3100..=3142).contains(&found), "failure cycle {found}");
    }

    #[test]
    fn predict_noiseless_has_no_predictions() {
        let pred = ErrorParams::noiseless().predict(0.5).unwrap();
        assert_eq!(pred.crossover_cycle, None);
        assert_eq!(pred.failure_cycle, None);
    }

    #[test]
    fn predict_stochastic_never_reaches_half_in_exact_mode() {
        // A purely stochastic channel saturates at 1/2 from below.
        let p = ErrorParams::new(0.0, 0.01).unwrap();
        let pred = p.predict(0.6).unwrap();
        assert_eq!(pred.crossover_cycle, None);
        assert_eq!(pred.failure_cycle, None);
        // ... but a sub-saturation threshold is reached.
        let pred = p.predict(0.25).unwrap();
        let m = pred.failure_cycle.unwrap();
        let w = |m: u64| 0.5 * (1.0 - 0.98f64.powi(m as i32));
        assert!(w(m) >= 0.25 && w(m - 1) < 0.25);
    }

    #[test]
    fn predict_first_order_mode_for_twirled_channel() {
        let p = ErrorParams::new(0.0, Q1).unwrap();
        let pred = p
            .predict_with_mode(0.5, InfidelityMode::FirstOrder)
            .unwrap();
        assert_eq!(pred.failure_cycle, Some(26_667));
    }

    #[test]
    fn predict_rejects_bad_threshold() {
        let p = ErrorParams::new(0.1, 0.0).unwrap();
        assert!(p.predict(0.0).is_err());
        assert!(p.predict(1.0).is_err());
        assert!(p.predict(f64::NAN).is_err());
    }
}
