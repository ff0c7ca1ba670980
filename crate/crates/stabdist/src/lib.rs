//! Exact entanglement statistics of uniformly random pure stabilizer states.
//!
//! The library has three layers:
//!
//! - [`gf2`], [`pauli`], [`state`]: bit-packed binary-symplectic
//!   representation of Pauli strings and stabilizer states, GF(2) rank,
//!   entanglement across a bipartite cut, canonical forms.
//! - [`counts`]: the closed-form state counts and probabilities for every
//!   entanglement value, in exact big-integer/rational arithmetic, with
//!   log-domain evaluation, averages, tail probabilities, Gaussian tail
//!   bounds and the Haar-random (Page) comparison value.
//! - [`sampling`]: an exactly uniform stabilizer-state sampler, an
//!   exhaustive small-N enumerator, and chi-square machinery that verifies
//!   the closed forms against both.
//!
//! [`report`] serializes results to a stable JSON/CSV schema
//! (`stabdist/1`); the `stabdist` binary exposes everything on the command
//! line.

pub mod counts;
pub mod error;
pub mod gf2;
pub mod pauli;
pub mod report;
pub mod sampling;
pub mod state;

pub use counts::{
    average_entanglement, average_lower_bound, count_states, distribution, mode_ratio,
    n_separable, n_total, page_average, page_average_float, probability, probability_log2,
    tail_bound_gaussian, tail_probability, BoundConstants, EntanglementDistribution,
    Log2Probability, PageAverage, TailMode, TailReport,
};
pub use error::{Error, Result};
pub use pauli::{PauliLetter, PauliOperator, Sign};
pub use sampling::{
    brute_force_counts, chi_square_gof, chi_square_test, empirical_distribution,
    enumerate_all_states, sample_uniform_state, ChiSquare, EmpiricalHistogram, SamplerConfig,
    ENUMERATION_MAX_QUBITS, SAMPLER_VERSION,
};
pub use state::{state_from_strs, validate_generators, CutSpec, Side, StabilizerState, Violation};
