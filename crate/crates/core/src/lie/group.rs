use std::fmt::Debug;

use nalgebra::DVector;

use super::algebra::{Abelian, Covector, LieAlgebra};
use crate::error::Result;

/// A Lie group with a distinguished exponential map from its algebra.
pub trait LieGroup: Clone + Debug {
    type Algebra: LieAlgebra;

    fn identity_like(&self) -> Self;

    fn mul(&self, other: &Self) -> Self;

    fn inverse(&self) -> Self;

    fn exp(xi: &Self::Algebra) -> Self;

    /// Zero element of the algebra matching this group element's shape.
    fn algebra_zero(&self) -> Self::Algebra;

    /// `Ad_self xi`.
    fn adjoint(&self, xi: &Self::Algebra) -> Self::Algebra;

    /// `coAd(self, mu)`, defined by `<coAd(g, mu), xi> = <mu, Ad_g xi>`.
    fn co_adjoint(&self, mu: &Covector) -> Covector {
        let basis = self.algebra_zero().basis();
        let v: Vec<f64> = basis
            .iter()
            .map(|e| mu.0.dot(&self.adjoint(e).coords()))
            .collect();
        Covector::from_slice(&v)
    }

    /// Flat coordinates of the group element, used for output and tangents.
    fn coords(&self) -> DVector<f64>;

    /// `d/dt coords(exp(t xi) * self)` at `t = 0`.
    fn right_tangent(&self, xi: &Self::Algebra) -> DVector<f64>;
}

/// Groups with a local inverse of the exponential near the identity.
pub trait LogMap: LieGroup {
    fn log(&self) -> Result<Self::Algebra>;
}

impl LieGroup for Abelian {
    type Algebra = Abelian;

    fn identity_like(&self) -> Self {
        Abelian::zeros(self.0.len())
    }

    fn mul(&self, other: &Self) -> Self {
        Abelian(&self.0 + &other.0)
    }

    fn inverse(&self) -> Self {
        Abelian(-&self.0)
    }

    fn exp(xi: &Abelian) -> Self {
        xi.clone()
    }

    fn algebra_zero(&self) -> Abelian {
        Abelian::zeros(self.0.len())
    }

    fn adjoint(&self, xi: &Abelian) -> Abelian {
        xi.clone()
    }

    fn co_adjoint(&self, mu: &Covector) -> Covector {
        mu.clone()
    }

    fn coords(&self) -> DVector<f64> {
        self.0.clone()
    }

    fn right_tangent(&self, xi: &Abelian) -> DVector<f64> {
        xi.0.clone()
    }
}

impl LogMap for Abelian {
    fn log(&self) -> Result<Abelian> {
        Ok(self.clone())
    }
}
