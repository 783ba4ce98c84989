//! Lie algebra and Lie group primitives.

pub mod affine;
pub mod algebra;
pub mod group;
pub mod matrix;
pub mod quaternion;
pub mod semidirect;
pub mod so3;

pub use affine::{affine_exp, phi1, AffineAlgebraElement, AffineGroupElement};
pub use algebra::{
    bernoulli_numbers, commutator, dexp_series, dexpinv_series, dual_dexp, dual_dexp_series,
    dual_dexpinv_series, Abelian, Covector, LieAlgebra, DEFAULT_SERIES_ORDER,
};
pub use group::{LieGroup, LogMap};
pub use matrix::{cayley, expm, MatrixAlgebraElement, MatrixGroupElement, MatrixKind};
pub use quaternion::{
    euler_rodrigues, quat_conj, quat_exp, quat_log, quat_mul, PureQuaternion, UnitQuaternion,
};
pub use semidirect::{
    semidirect_exp, semidirect_inv, semidirect_mul, SemidirectAlgebraElement,
    SemidirectGroupElement,
};
pub use so3::{
    dexp_so3_exact, dexpinv_so3_exact, expm_so3, hat, logm_so3, vee, RotationMatrix, So3Vector,
};
