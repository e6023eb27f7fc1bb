//! Multiplicative Schur maps.
//!
//! The Schur map `S_A(B) = A ∘ B` multiplies entrywise. This crate decides
//! when such a map is also an algebra homomorphism for the ordinary matrix
//! product, factors the coefficient matrix as `a_ij = f(i)/f(j)` when it is,
//! enumerates and parametrizes the *-preserving ones, completes partially
//! specified coefficient matrices, and probes infinite coefficient matrices
//! through their finite corners.
//!
//! ```
//! use schurlab::{certify_multiplicative, ComplexMatrix, Tolerance, C64};
//!
//! let i = C64::new(0.0, 1.0);
//! let one = C64::new(1.0, 0.0);
//! let a = ComplexMatrix::from_rows(&[vec![one, i], vec![-i, one]]).unwrap();
//! let cert = certify_multiplicative(&a, Tolerance::default(), 8, 0).unwrap();
//! assert!(cert.verdict);
//! ```

pub mod completion;
pub mod error;
pub mod extreme;
pub mod group;
pub mod infinite;
pub mod matrix;
pub mod multiplicative;
pub mod random;
pub mod spectral;
pub mod star;

pub use completion::{complete_partial, log_coordinates, CompletionReport, CompletionStatus, PartialMatrix, Violation};
pub use error::{Result, SchurError};
pub use extreme::{correlation_check, isometry_check, CorrelationVerdict, IsometryVerdict};
pub use group::{
    enumerate_real_positive, enumerate_sign_matrices, group_product, toeplitz_member, torus_param, SignMatrix,
    MAX_ENUMERATION_N,
};
pub use infinite::{
    compact_bound_check, corner, l2_multiplier_factor_check, unboundedness_witness, CoefficientGenerator,
    CompactBoundReport, L2FactorReport, ProbeOutcome, UnboundednessWitness,
};
pub use matrix::{schur_inverse, schur_map, schur_product, ComplexMatrix, Tolerance, C64};
pub use multiplicative::{
    build_from_scaling, certify_multiplicative, check_cocycle, factor_scaling, numerical_range_samples, schur_map_norm,
    spectrum_distance, CocycleCheck, Condition, ConditionResult, MultiplicativityCertificate, ScalingVector,
};
pub use spectral::{eigenvalues, numerical_rank, operator_norm, singular_values, spectral_radius};
pub use star::{
    certify_star_multiplicative, is_positive_semidefinite, is_unimodular, norm_equals_dimension, projection_check,
    StarCertificate, StarCondition, StarResult,
};
