//! Exact logical error channels of the bit-flip repetition code under
//! combined coherent (systematic X rotation) and stochastic (probabilistic
//! bit flip) physical noise.
//!
//! The crate is a small pipeline of independent, cross-checked pieces:
//!
//! - [`errchan`] — algebra and metrics of the single-qubit X-type channel:
//!   construction, composition, twirling, infidelity / diamond-distance
//!   metrics, and failure-time predictors.
//! - [`repcode`] — the exact effective logical channel of the distance-d
//!   repetition code, built combinatorially from per-syndrome-class weights.
//! - [`recurse`] — concatenation-level iteration of the error parameters in
//!   leading-order and exact modes, plus per-level coherence tables.
//! - [`mcsim`] — seeded, reproducible Monte Carlo trajectories sampling the
//!   logical channel once per QEC cycle.
//! - [`physoracle`] — brute-force density-matrix simulation of
//!   encode → noise → syndrome projection → recovery → decode for small
//!   qubit counts; the independent oracle the combinatorial construction is
//!   validated against, plus the two-qubit XX-interaction analysis.
//!
//! All values are plain immutable data and every operation is a pure
//! function of its inputs, so everything here is safe to share across
//! threads.

pub mod errchan;
pub mod error;
pub mod mcsim;
pub mod physoracle;
pub mod recurse;
pub mod repcode;

pub use errchan::{
    ChannelMetrics, ErrorParams, FailurePrediction, InfidelityMode, PhysicalRates, ReducedPtm,
};
pub use error::{Error, Result};
pub use mcsim::{FailureCurve, LogicalState, SampledChannel, TrajectoryConfig, ValidationReport};
pub use physoracle::{CouplingSet, DecoderTable, DensityMatrix, XxCheck};
pub use recurse::{CoherenceRow, LevelRow, LevelTrace};
pub use repcode::{CodeDistance, LogicalChannel, SyndromeClass};
