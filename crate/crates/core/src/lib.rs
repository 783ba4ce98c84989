//! Lie group integrators for ODEs on manifolds.
//!
//! The crate is organised bottom-up:
//!
//! - [`lie`]: algebras, groups, exponentials, dexp/dexpinv and the semidirect product `G x| g*`.
//! - [`actions`]: group actions, generators and frozen-field problems `f: M -> g`.
//! - [`integrators`]: Lie-Euler, Heun variants, RKMK, RKMK4 and CF4.
//! - [`symplectic`]: symplectic schemes on `G x| g*` and the heavy top.
//! - [`discrete_gradient`]: trivialized discrete differentials and integral-preserving steps.
//! - [`problems`]: Duffing, rigid body, torus, Stiefel PCA and Lyapunov flows.

pub mod actions;
pub mod diagnostics;
pub mod discrete_gradient;
pub mod error;
pub mod integrators;
pub mod lie;
pub mod problems;
pub mod solver;
pub mod symplectic;

pub use error::{Error, Result};
