//! Lee-Yang tensors: multilinear generating polynomials of binary-index
//! tensors, zero-free polydisk checks, interpolation-based amplitude
//! estimation, EPR-like Hamiltonians and the numerical studies built on them.
//!
//! Bit strings are written `x₁x₂…x_n` with `x₁` the most significant bit of
//! the flat index. Operators are stored bra-first: entry `<x|A|y>` sits at
//! flat index `x · 2^m + y`.

// `!(x > 0.0)` style guards are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod barvinok;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod hamiltonian;
pub mod linalg;
pub mod ly;
pub mod poly;
pub mod sixvertex;
pub mod study;
pub mod tensor;

pub use num_complex::Complex64;

pub use barvinok::{
    estimate_x_amplitude, grover_rudolph_emulate, interpolate_estimate, log_derivs, xbasis_coeffs, AmplitudeEstimate,
    GroverRudolphResult, ResourceEntry, TaylorLog,
};
pub use enumerate::{enum_connected, enum_trees};
pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use hamiltonian::{
    build_epr_like, build_phase_shifted, build_xxz, gibbs, spectral_data, star_spectrum_analytic, Hamiltonian,
    HamiltonianSpec, Parity, SfSpec, SpectralData,
};
pub use ly::{
    assess_ly, check_pauli_channel, check_sf_sufficient, check_single_qubit, check_two_qubit_ly1, equatorial_poly,
    falsify_ly, min_equatorial_root_modulus, Budget, CriterionReport, LyVerdict, VerdictKind, Witness,
};
pub use poly::{poly_roots, RootSet, UnivariatePoly};
pub use sixvertex::{
    circuit_to_six_vertex, eulerian_partition, trotter_trace, trotterize, EdgeOrderedGraph, Regime, SixVertexParams,
    TrotterCircuit,
};
pub use study::{run_study, Family, StudyConfig, StudyKind, StudyRecord};
pub use tensor::{MultiRadius, OperatorTensor, StateTensor};
