//! Brute-force physical-level density-matrix simulation.
//!
//! Everything the combinatorial channel construction claims is re-derived
//! here the expensive way: encode into the N-qubit register, apply the
//! product noise qubit by qubit, project onto every syndrome sector, apply
//! the table-driven recovery, and decode back to one logical qubit. Process
//! tomography of that pipeline must reproduce the closed-form reduced
//! block entry by entry.
//!
//! The module also carries the two-qubit XX-interaction analysis: a
//! commuting product of XX rotations expands over even-weight X supports,
//! each of which lands in its own syndrome sector, so a decoder tailored
//! to even-weight corrections recovers the input perfectly.

use num_complex::Complex64;

use crate::errchan::{ErrorParams, ReducedPtm};
use crate::error::{Error, Result};

/// Largest register simulated as a full density matrix.
pub const MAX_ORACLE_QUBITS: usize = 7;
/// Largest register for the combinatorial syndrome-bijection check.
pub const MAX_BIJECTION_QUBITS: usize = 15;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn check_register_size(n: usize, max: usize) -> Result<()> {
    if !(3..=max).contains(&n) || n.is_multiple_of(2) {
        return Err(Error::QubitCount(n, max));
    }
    Ok(())
}

/// Dense `2^N x 2^N` complex density matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    fn zeros(qubits: usize) -> Self {
        let dim = 1 << qubits;
        Self {
            qubits,
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Outer product |psi><psi| of a pure state vector.
    pub fn from_pure(qubits: usize, amplitudes: &[Complex64]) -> Result<Self> {
        check_register_size(qubits, MAX_ORACLE_QUBITS)?;
        let dim = 1usize << qubits;
        if amplitudes.len() != dim {
            return Err(Error::Config(format!(
                "state vector length {} does not match 2^{qubits}",
                amplitudes.len()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-9 {
            return Err(Error::StateNorm((norm_sq - 1.0).abs()));
        }
        let mut rho = Self::zeros(qubits);
        for row in 0..dim {
            for col in 0..dim {
                rho.data[row * dim + col] = amplitudes[row] * amplitudes[col].conj();
            }
        }
        Ok(rho)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn purity(&self) -> f64 {
        let mut total = Complex64::new(0.0, 0.0);
        for row in 0..self.dim {
            for col in 0..self.dim {
                total += self.get(row, col) * self.get(col, row);
            }
        }
        total.re
    }

    /// Largest deviation from `rho = rho'`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for row in 0..self.dim {
            for col in row..self.dim {
                worst = worst.max((self.get(row, col) - self.get(col, row).conj()).norm());
            }
        }
        worst
    }

    /// Apply the rotation `exp(-i theta X_mask)` where `X_mask` is the
    /// product of X over the set bits of `mask`:
    /// `rho' = (c - i s V) rho (c + i s V)` with `V` the permutation
    /// `|x> -> |x ^ mask>`.
    fn apply_x_string_rotation(&self, mask: usize, theta: f64) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        let cs = c * s;
        let (c2, s2) = (c * c, s * s);
        let i = Complex64::i();
        let mut out = Self::zeros(self.qubits);
        for row in 0..self.dim {
            for col in 0..self.dim {
                let value = c2 * self.get(row, col) - i * cs * self.get(row ^ mask, col)
                    + i * cs * self.get(row, col ^ mask)
                    + s2 * self.get(row ^ mask, col ^ mask);
                out.data[row * self.dim + col] = value;
            }
        }
        out
    }

    /// Mix in a flip of the masked qubits: `(1-q) rho + q V rho V`.
    fn apply_flip_mix(&self, mask: usize, q: f64) -> Self {
        let mut out = Self::zeros(self.qubits);
        for row in 0..self.dim {
            for col in 0..self.dim {
                out.data[row * self.dim + col] =
                    (1.0 - q) * self.get(row, col) + q * self.get(row ^ mask, col ^ mask);
            }
        }
        out
    }

    /// Overlap `<psi| rho |psi>` with a pure state.
    pub fn expectation(&self, amplitudes: &[Complex64]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for row in 0..self.dim {
            if amplitudes[row] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for col in 0..self.dim {
                total += amplitudes[row].conj() * self.get(row, col) * amplitudes[col];
            }
        }
        total
    }
}

/// Encode `alpha |0...0> + beta |1...1>`.
pub fn encode(alpha: Complex64, beta: Complex64, qubits: usize) -> Result<DensityMatrix> {
    check_register_size(qubits, MAX_ORACLE_QUBITS)?;
    let dim = 1usize << qubits;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[0] = alpha;
    amplitudes[dim - 1] = beta;
    DensityMatrix::from_pure(qubits, &amplitudes)
}

/// Codeword amplitudes of `alpha |0...0> + beta |1...1>`, for overlaps.
fn codeword_vector(alpha: Complex64, beta: Complex64, qubits: usize) -> Vec<Complex64> {
    let dim = 1usize << qubits;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[0] = alpha;
    amplitudes[dim - 1] = beta;
    amplitudes
}

/// Apply the same single-qubit X-type channel to every qubit: per qubit,
/// rotate by `epsilon` about X, then flip with probability `q`.
pub fn apply_product_noise(rho: &DensityMatrix, p: ErrorParams) -> DensityMatrix {
    let mut out = rho.clone();
    for qubit in 0..rho.qubits() {
        let mask = 1usize << qubit;
        out = out.apply_x_string_rotation(mask, 0.5 * p.epsilon());
        if p.q() > 0.0 {
            out = out.apply_flip_mix(mask, p.q());
        }
    }
    out
}

/// Syndrome of a computational-basis flip pattern: bit `i` is set when
/// qubits `i` and `i+1` disagree (stabilizer eigenvalue -1).
pub fn syndrome_of(pattern: usize, qubits: usize) -> usize {
    let mut syndrome = 0usize;
    for i in 0..qubits - 1 {
        if ((pattern >> i) ^ (pattern >> (i + 1))) & 1 == 1 {
            syndrome |= 1 << i;
        }
    }
    syndrome
}

/// Recovery table: one correction support (as a qubit bitmask) per
/// syndrome. Exactly two flip patterns produce any given syndrome and they
/// are bit complements, so with odd N one has weight below `(N-1)/2` and
/// one above, and exactly one of them has even weight.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderTable {
    qubits: usize,
    corrections: Vec<usize>,
}

impl DecoderTable {
    fn build(qubits: usize, pick: impl Fn(usize, usize) -> usize) -> Result<Self> {
        check_register_size(qubits, MAX_BIJECTION_QUBITS)?;
        let full = (1usize << qubits) - 1;
        let corrections = (0..1usize << (qubits - 1))
            .map(|syndrome| {
                // reconstruct the pattern with qubit 0 unflipped
                let mut pattern = 0usize;
                for i in 0..qubits - 1 {
                    let next = ((pattern >> i) & 1) ^ ((syndrome >> i) & 1);
                    pattern |= next << (i + 1);
                }
                debug_assert_eq!(syndrome_of(pattern, qubits), syndrome);
                pick(pattern, pattern ^ full)
            })
            .collect();
        Ok(Self {
            qubits,
            corrections,
        })
    }

    /// Minimum-weight (majority-vote) corrections. Ties are impossible for
    /// odd N.
    pub fn standard(qubits: usize) -> Result<Self> {
        Self::build(qubits, |a, b| {
            if a.count_ones() <= b.count_ones() {
                a
            } else {
                b
            }
        })
    }

    /// Even-weight corrections, tailored to XX-interaction noise.
    pub fn tailored(qubits: usize) -> Result<Self> {
        Self::build(qubits, |a, b| if a.count_ones() % 2 == 0 { a } else { b })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.corrections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corrections.is_empty()
    }

    pub fn correction(&self, syndrome: usize) -> usize {
        self.corrections[syndrome]
    }
}

/// One full QEC cycle: project onto every syndrome sector, apply the
/// table's correction, and sum. Drops inter-sector coherences, preserves
/// the trace, and leaves codespace states untouched.
pub fn qec_cycle(rho: &DensityMatrix, table: &DecoderTable) -> DensityMatrix {
    assert_eq!(rho.qubits(), table.qubits(), "table size mismatch");
    let dim = rho.dim();
    let syndromes: Vec<usize> = (0..dim).map(|x| syndrome_of(x, rho.qubits())).collect();
    let mut out = DensityMatrix::zeros(rho.qubits());
    for row in 0..dim {
        let correction = table.correction(syndromes[row]);
        for col in 0..dim {
            if syndromes[row] == syndromes[col] {
                out.data[(row ^ correction) * dim + (col ^ correction)] += rho.get(row, col);
            }
        }
    }
    out
}

/// Project a codespace-supported register state back to one logical qubit.
pub fn decode_logical(rho: &DensityMatrix) -> [Complex64; 4] {
    let last = rho.dim() - 1;
    [
        rho.get(0, 0),
        rho.get(0, last),
        rho.get(last, 0),
        rho.get(last, last),
    ]
}

fn bloch_yz(logical: &[Complex64; 4]) -> (f64, f64) {
    let y = -2.0 * logical[1].im;
    let z = (logical[0] - logical[3]).re;
    (y, z)
}

/// Process tomography of encode -> product noise -> QEC cycle -> decode,
/// reconstructing the reduced transfer-matrix block from the images of the
/// +y and +z Bloch axes (sufficient for an X-type channel). Fails if the
/// reconstructed block is not a scaled rotation.
pub fn tomography_logical_rptm(qubits: usize, p: ErrorParams) -> Result<ReducedPtm> {
    check_register_size(qubits, MAX_ORACLE_QUBITS)?;
    let table = DecoderTable::standard(qubits)?;
    let run = |alpha: Complex64, beta: Complex64| -> Result<(f64, f64)> {
        let encoded = encode(alpha, beta, qubits)?;
        let noisy = apply_product_noise(&encoded, p);
        let recovered = qec_cycle(&noisy, &table);
        Ok(bloch_yz(&decode_logical(&recovered)))
    };
    // +y eigenstate (|0> + i|1>)/sqrt(2), then +z eigenstate |0>
    let (m_yy, m_zy) = run(
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, FRAC_1_SQRT_2),
    )?;
    let (m_yz, m_zz) = run(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))?;

    let form_deviation = (m_yy - m_zz).abs().max((m_yz + m_zy).abs());
    if form_deviation > 1e-12 {
        return Err(Error::TomographyForm(form_deviation));
    }
    ReducedPtm::new(0.5 * (m_yy + m_zz), 0.5 * (m_zy - m_yz))
}

/// XX couplings along the data-qubit chain: entries `(i, i+1, angle)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSet {
    pairs: Vec<(usize, usize, f64)>,
}

impl CouplingSet {
    /// Validates chain adjacency (`hi = lo + 1`) and `|angle| < pi/2`.
    pub fn new(pairs: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(lo, hi, angle) in &pairs {
            if hi != lo + 1 {
                return Err(Error::Coupling(format!(
                    "({lo}, {hi}) is not an adjacent chain pair"
                )));
            }
            if !angle.is_finite() || angle.abs() >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::Coupling(format!(
                    "coupling angle {angle} outside (-pi/2, pi/2)"
                )));
            }
        }
        Ok(Self { pairs })
    }

    /// Full chain on `qubits` qubits with the given per-edge angles.
    pub fn chain(angles: &[f64]) -> Result<Self> {
        Self::new(
            angles
                .iter()
                .enumerate()
                .map(|(i, &angle)| (i, i + 1, angle))
                .collect(),
        )
    }

    pub fn pairs(&self) -> &[(usize, usize, f64)] {
        &self.pairs
    }
}

/// Apply the commuting product of two-qubit XX rotations
/// `prod exp(-i angle_ij X_i X_j)`.
pub fn xx_apply(rho: &DensityMatrix, couplings: &CouplingSet) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    for &(lo, hi, angle) in couplings.pairs() {
        if hi >= rho.qubits() {
            return Err(Error::Coupling(format!(
                "pair ({lo}, {hi}) outside a {}-qubit register",
                rho.qubits()
            )));
        }
        out = out.apply_x_string_rotation((1 << lo) | (1 << hi), angle);
    }
    Ok(out)
}

/// Check that the `2^{N-1}` even-weight supports hit all `2^{N-1}`
/// syndromes exactly once. Pure combinatorics; valid up to
/// [`MAX_BIJECTION_QUBITS`].
pub fn even_weight_syndrome_bijection(qubits: usize) -> Result<bool> {
    check_register_size(qubits, MAX_BIJECTION_QUBITS)?;
    let mut seen = vec![false; 1 << (qubits - 1)];
    for pattern in 0..1usize << qubits {
        if pattern.count_ones() % 2 != 0 {
            continue;
        }
        let syndrome = syndrome_of(pattern, qubits);
        if seen[syndrome] {
            return Ok(false);
        }
        seen[syndrome] = true;
    }
    Ok(seen.iter().all(|&s| s))
}

/// Result of the XX-interaction correctability check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XxCheck {
    pub bijection: bool,
    /// Worst post-correction overlap with the input over the probe states.
    pub fidelity: f64,
}

/// Verify the tailored decoder against XX-interaction noise: syndrome
/// bijection plus post-correction fidelity of
/// encode -> XX rotations -> tailored QEC cycle over three probe states
/// (`|0>`, `(|0>+|1>)/sqrt(2)`, `(|0>+i|1>)/sqrt(2)`).
pub fn xx_checks(qubits: usize, couplings: &CouplingSet) -> Result<XxCheck> {
    check_register_size(qubits, MAX_ORACLE_QUBITS)?;
    let bijection = even_weight_syndrome_bijection(qubits)?;
    let table = DecoderTable::tailored(qubits)?;
    let probes = [
        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        (
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        ),
        (
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, FRAC_1_SQRT_2),
        ),
    ];
    let mut fidelity = f64::INFINITY;
    for (alpha, beta) in probes {
        let encoded = encode(alpha, beta, qubits)?;
        let noisy = xx_apply(&encoded, couplings)?;
        let recovered = qec_cycle(&noisy, &table);
        let overlap = recovered.expectation(&codeword_vector(alpha, beta, qubits));
        fidelity = fidelity.min(overlap.re);
    }
    Ok(XxCheck {
        bijection,
        fidelity,
    })
}
