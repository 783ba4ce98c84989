//! Benchmark problems and application flows.

pub mod data;
pub mod duffing;
pub mod rigid_body;
pub mod stiefel;
pub mod torus;

pub use data::{random_rotation, random_stiefel, random_unit_quaternion, synthetic_covariance};
pub use duffing::{duffing_problem, DuffingFrame, DuffingParams, DuffingProblem};
pub use rigid_body::frb_s2_problem;
pub use stiefel::{
    lyapunov_exponents, lyapunov_problem, pca_objective, pca_problem, stiefel_pca_flow,
    StiefelFlavor, StiefelFlowProblem,
};
pub use torus::{torus_cost, torus_descent, torus_problem};
