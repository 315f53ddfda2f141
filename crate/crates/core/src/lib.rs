//! Rotation numbers of circle dynamics.
//!
//! This crate computes rotation numbers of
//!
//! - single orientation-preserving circle homeomorphisms (classical
//!   iteration and ordered lifted orbits),
//! - compositions of stationary random homeomorphisms (lift-composition,
//!   pointwise-orbit and ergodic occupation-measure estimators),
//! - products of random matrices in GL+(2,R) through the projective circle
//!   action, with the closed-form eigenvalue formula as an exact oracle,
//! - continuous linear cocycles on R^2 (deterministic flows, real-noise
//!   ODEs, Stratonovich SDEs) with exact tracking of the continuous
//!   unwrapped angle,
//!
//! and verifies that sampling a continuous cocycle at period T recovers the
//! continuous rotation number as T -> 0 (exactly below the Nyquist rate in
//! the deterministic case), including the distribution of the sampled
//! displacement and winding-count diagnostics.
//!
//! All angles are in turns (1 turn = 2 pi radians); mod-1 representatives
//! live in the half-open symmetric interval (-1/2, 1/2].

pub mod circle;
pub mod compose;
pub mod error;
pub mod estimate;
pub mod flows;
pub mod linear;
pub mod measure;
pub mod noise;
pub mod sampling;

pub use circle::{
    circle_distance, classical_rotation_number, conjugate, lift_compose, normalize_lift,
    orbit_rotation_number, ordered_lifted_orbit, wrap1, wrap_turn, CircleHomeo, Lift,
    OrbitSequence, WrappedTurn,
};
pub use compose::{
    beta_displacement, compose_rotation_number, ergodic_rotation_via_occupation,
    invariant_average_check, mean_displacement, piecewise_four_cycle, pointwise_rotation,
    BetaDisplacement, HomeoSampler, IidHomeos, InvariantAverage, PeriodicCycle, RotationDriver,
};
pub use error::{CoreError, Result};
pub use estimate::RotationEstimate;
pub use flows::{
    angular_drift, continuous_rotation_number, flow_deterministic, integrate, integrate_real_noise,
    integrate_sde, Coeff2, CocycleSpec, RealNoiseDriver, SdeConfig, Trajectory,
};
pub use linear::{
    eigen_rotation_number, matrix_homeo, matrix_lift, matrix_rotation_number,
    product_rotation_number, projective_action,
    stationary_measure_estimate, ConstantMatrix, Eigen2, IidRotations, IidTriangular, Mat2,
    MatrixSampler, ProjectiveHomeos, ProjectivePoint, SampledMatrices,
};
pub use measure::EmpiricalMeasure;
pub use sampling::{
    beta_t_samples, convergence_study, erratum_identity_check, nyquist_check, sample_matrices,
    sampled_rotation_number, winding_counts, wrapped_gaussian_bin_masses, wrapped_gaussian_density,
    wrapped_gaussian_mean, BetaStudy, ConvergenceRow, ConvergenceTable, ErratumCheck,
    NyquistReport, SamplingStudy, WindingRecord, WindingStudy,
};
