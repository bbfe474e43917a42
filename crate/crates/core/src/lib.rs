//! Pauli channel simulation and tomography.
//!
//! The crate covers the binary-symplectic Pauli algebra, GF(2^n) structure
//! matrices, the mutually unbiased stabilizer cover of the n-qubit Pauli
//! group, Born-rule measurement simulation, a non-adaptive learner built on
//! that cover, and numerical checks of the hard channel families used in
//! sample-complexity lower bounds.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix the two
//! scalar types used in practice: `f64` for simulation and [`Rational`]
//! for exact identities.

pub mod channel;
pub mod cover;
pub mod dense;
pub mod error;
pub mod experiment;
pub mod gf2;
pub mod hard;
pub mod measurement;
pub mod pauli;
pub mod rng;
pub mod scalar;
pub mod simplex;
pub mod tomography;
pub mod verify;
pub mod walsh;

pub use channel::{
    apply_channel, apply_sequence, diamond_distance, eigenvalues, inverse_transform, tv_distance, ChannelFile,
    ChannelSequence, EigenvalueVector, Intertwiner, PauliChannel,
};
pub use cover::{
    build_cover, build_measurement, coset_representatives, group_elements, StabilizerGroup, StabilizerMeasurement,
};
pub use dense::{CMatrix, DensityMatrix};
pub use error::{Error, Result};
pub use gf2::{gf2n_mul, structure_matrices, FieldSpec, GF2Matrix};
pub use measurement::{
    born_distribution, induced_group_distribution, sample_outcomes, OutcomeDistribution, SampleBatch,
};
pub use pauli::{conjugate_density, PauliOperator, Phase};
pub use scalar::{rational, Rational, Rational64, RealScalar, Scalar};
pub use simplex::project_to_simplex;
pub use tomography::{
    estimate_group_eigenvalues, learn_pauli_channel, reconstruct_distribution, required_samples, ChannelOracle,
    SampleRule, TomographyConfig,
};

/// Pauli channel over `f64`.
pub type Channel = PauliChannel<f64>;
/// Pauli channel with exact rational probabilities.
pub type ExactChannel = PauliChannel<Rational>;
/// Density matrix over `f64`.
pub type State = DensityMatrix<f64>;
/// Density matrix with exact rational entries.
pub type ExactState = DensityMatrix<Rational>;
/// Dense complex matrix over `f64`.
pub type Matrix = CMatrix<f64>;
/// Dense complex matrix with exact rational entries.
pub type ExactMatrix = CMatrix<Rational>;
/// Eigenvalue vector over `f64`.
pub type Eigenvalues = EigenvalueVector<f64>;
