//! Exact effective logical channel of the distance-d repetition code.
//!
//! A tensor product of single-qubit X-type channels, followed by syndrome
//! projection, majority-vote recovery, and decoding, collapses to a finite
//! mixture over syndrome classes `j = 0 ..= (d-1)/2`. Class `j` occurs with
//! weight `C(d, j) * p_j` and acts as a logical X rotation by `eps_j`
//! composed with a logical flip of probability `q_j`. All class data are
//! computed here combinatorially; the N-qubit operators themselves are
//! never materialized (the brute-force route lives in `physoracle`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::errchan::{ErrorParams, ReducedPtm};
use crate::error::{Error, Result};

/// Maximum supported code distance. Binomial coefficients up to this size
/// are computed exactly in 128-bit integers.
pub const MAX_DISTANCE: u32 = 61;

/// Odd code distance `d >= 3` (the qubit count of the register).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CodeDistance(u32);

impl CodeDistance {
    pub fn new(d: u32) -> Result<Self> {
        if !(3..=MAX_DISTANCE).contains(&d) || d.is_multiple_of(2) {
            return Err(Error::CodeDistance(d));
        }
        Ok(Self(d))
    }

    pub fn get(&self) -> u32 {
        self.0
    }

    /// Number of correctable flips, `(d - 1) / 2`.
    pub fn half(&self) -> u32 {
        (self.0 - 1) / 2
    }
}

/// Exact binomial coefficient in 128-bit arithmetic; every intermediate
/// product stays integral, so this is exact for all `n` used here.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=k as u128 {
        result = result * (n as u128 - k as u128 + i) / i;
    }
    result
}

/// Per-syndrome-class data of the exact logical channel.
///
/// `probability` is the coherent-expansion weight `p_j`; the class appears
/// in the mixture with weight `C(d, j) * p_j`. Conditioned on the class,
/// the logical qubit suffers a rotation by `rotation` and a logical flip
/// with probability `flip`; `keep` is the complementary no-flip
/// probability, so `keep + flip = 1` (an exact combinatorial identity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyndromeClass {
    pub j: u32,
    pub probability: f64,
    pub flip: f64,
    pub keep: f64,
    pub rotation: f64,
    pub weight: f64,
}

/// The exact logical channel: a mixture of rotation-plus-flip classes.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalChannel {
    distance: CodeDistance,
    classes: Vec<SyndromeClass>,
}

impl LogicalChannel {
    pub fn distance(&self) -> CodeDistance {
        self.distance
    }

    /// Classes sorted by `j`.
    pub fn classes(&self) -> &[SyndromeClass] {
        &self.classes
    }

    /// Sum of mixture weights; equals 1 up to round-off by the binomial
    /// theorem.
    pub fn weight_sum(&self) -> f64 {
        self.classes.iter().map(|c| c.weight).sum()
    }

    /// Collapse the mixture to its reduced transfer-matrix block:
    /// `a = sum_j w_j (1 - 2 q_j) cos(eps_j)`, `b` likewise with `sin`.
    pub fn reduced_ptm(&self) -> ReducedPtm {
        let mut a = 0.0;
        let mut b = 0.0;
        for class in &self.classes {
            let gain = class.weight * (1.0 - 2.0 * class.flip);
            a += gain * class.rotation.cos();
            b += gain * class.rotation.sin();
        }
        ReducedPtm::new(a, b).expect("mixture of physical classes is physical")
    }
}

/// Build the exact logical channel of the distance-d code for physical
/// parameters `p`.
///
/// With `c = cos(eps/2)`, `s = sin(eps/2)`:
///
/// - `p_j = c^{2(d-j)} s^{2j} + c^{2j} s^{2(d-j)}`
/// - `tan(eps_j / 2) = (-1)^{(d-1)/2 + j} tan^{d-2j}(eps / 2)`
/// - `keep_j` / `flip_j` from the double sum over stochastic flip weight
///   `k` and overlap `n`, gated on whether the combined error weight
///   `j + k - 2n` is still correctable.
pub fn syndrome_classes(d: CodeDistance, p: ErrorParams) -> LogicalChannel {
    let n = d.get();
    let half = d.half();
    let c2 = (0.5 * p.epsilon()).cos().powi(2);
    let s2 = (0.5 * p.epsilon()).sin().powi(2);
    let tan_half = (0.5 * p.epsilon()).tan();

    let classes = (0..=half)
        .map(|j| {
            let probability = c2.powi((n - j) as i32) * s2.powi(j as i32)
                + c2.powi(j as i32) * s2.powi((n - j) as i32);
            let sign = if (half + j) % 2 == 1 { -1.0 } else { 1.0 };
            let rotation = 2.0 * (sign * tan_half.powi((n - 2 * j) as i32)).atan();
            let (keep, flip) = stochastic_weights(d, j, p.q());
            let weight = binomial(n, j) as f64 * probability;
            SyndromeClass {
                j,
                probability,
                flip,
                keep,
                rotation,
                weight,
            }
        })
        .collect();

    LogicalChannel {
        distance: d,
        classes,
    }
}

/// No-flip and flip probabilities `(keep_j, flip_j)` of syndrome class `j`.
///
/// The sum runs over the stochastic flip weight `k <= (d-1)/2` and over
/// every overlap `n` for which the combinatorial coefficients are defined
/// (`0 <= n <= min(j, k)`; `k - n <= d - j` holds automatically). Exactly
/// one of the two step-function gates fires per term: combined weight
/// still correctable contributes the direct term, otherwise the two
/// branches swap.
pub fn stochastic_weights(d: CodeDistance, j: u32, q: f64) -> (f64, f64) {
    let n = d.get();
    let half = d.half();
    let mut keep = 0.0;
    let mut flip = 0.0;
    for k in 0..=half {
        // q^k (1-q)^{d-k} and its weight-reflected partner
        let direct = q.powi(k as i32) * (1.0 - q).powi((n - k) as i32);
        let reflected = q.powi((n - k) as i32) * (1.0 - q).powi(k as i32);
        for overlap in 0..=j.min(k) {
            let coeff = (binomial(j, overlap) * binomial(n - j, k - overlap)) as f64;
            if j + k - 2 * overlap <= half {
                keep += coeff * direct;
                flip += coeff * reflected;
            } else {
                keep += coeff * reflected;
                flip += coeff * direct;
            }
        }
    }
    (keep, flip)
}

/// Exact-rational version of [`stochastic_weights`], for zero-tolerance
/// identity checks when `q` is rational. `keep + flip = 1` holds exactly
/// here (Vandermonde convolution of the binomial coefficients).
pub fn stochastic_weights_exact(
    d: CodeDistance,
    j: u32,
    q: &BigRational,
) -> (BigRational, BigRational) {
    let n = d.get();
    let half = d.half();
    let one = BigRational::one();
    let mut keep = BigRational::zero();
    let mut flip = BigRational::zero();
    for k in 0..=half {
        let direct = q.pow(k as i32) * (&one - q).pow((n - k) as i32);
        let reflected = q.pow((n - k) as i32) * (&one - q).pow(k as i32);
        for overlap in 0..=j.min(k) {
            let coeff = BigRational::from_integer(BigInt::from(
                binomial(j, overlap) * binomial(n - j, k - overlap),
            ));
            if j + k - 2 * overlap <= half {
                keep += &coeff * &direct;
                flip += &coeff * &reflected;
            } else {
                keep += &coeff * &reflected;
                flip += &coeff * &direct;
            }
        }
    }
    (keep, flip)
}

/// Number of ways a weight-j and a weight-k X-product multiply into each
/// weight-`j + k - 2n` product:
/// `C(d,k) C(k,n) C(d-k, j-n) / C(d, k+j-2n)`, always an integer.
pub fn overlap_coefficient(d: CodeDistance, j: u32, k: u32, n: u32) -> Result<u128> {
    let dd = d.get();
    let bad = j > dd || k > dd || n > j.min(k) || j - n > dd - k;
    if bad {
        return Err(Error::OverlapIndex { d: dd, j, k, n });
    }
    let numerator = binomial(dd, k) * binomial(k, n) * binomial(dd - k, j - n);
    let denominator = binomial(dd, k + j - 2 * n);
    debug_assert_eq!(numerator % denominator, 0);
    Ok(numerator / denominator)
}

/// The exact one-level parameter map `(eps, q) -> (eps_bar, q_bar)`:
/// extract canonical parameters from the collapsed logical block.
pub fn exact_logical_params(d: CodeDistance, p: ErrorParams) -> Result<ErrorParams> {
    syndrome_classes(d, p).reduced_ptm().extract_params()
}
