//! The semidirect product `G x| g*` on the right-trivialized cotangent bundle.

use nalgebra::DVector;

use super::algebra::{Covector, LieAlgebra};
use super::group::LieGroup;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SemidirectGroupElement<G> {
    pub g: G,
    pub mu: Covector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SemidirectAlgebraElement<A> {
    pub xi: A,
    pub nu: Covector,
}

impl<G: LieGroup> SemidirectGroupElement<G> {
    pub fn new(g: G, mu: Covector) -> Self {
        SemidirectGroupElement { g, mu }
    }
}

impl<A: LieAlgebra> SemidirectAlgebraElement<A> {
    pub fn new(xi: A, nu: Covector) -> Self {
        SemidirectAlgebraElement { xi, nu }
    }
}

/// `(g1, mu1)(g2, mu2) = (g1 g2, mu1 + coAd(g1^{-1}, mu2))`.
pub fn semidirect_mul<G: LieGroup>(
    a: &SemidirectGroupElement<G>,
    b: &SemidirectGroupElement<G>,
) -> SemidirectGroupElement<G> {
    SemidirectGroupElement {
        g: a.g.mul(&b.g),
        mu: &a.mu + &a.g.inverse().co_adjoint(&b.mu),
    }
}

/// `(g, mu)^{-1} = (g^{-1}, -coAd(g, mu))`.
pub fn semidirect_inv<G: LieGroup>(a: &SemidirectGroupElement<G>) -> SemidirectGroupElement<G> {
    SemidirectGroupElement {
        g: a.g.inverse(),
        mu: -a.g.co_adjoint(&a.mu),
    }
}

/// `exp(xi, nu) = (exp xi, (dexp_{-xi})^* nu)`.
pub fn semidirect_exp<G: LieGroup>(
    x: &SemidirectAlgebraElement<G::Algebra>,
) -> SemidirectGroupElement<G> {
    SemidirectGroupElement {
        g: G::exp(&x.xi),
        mu: x
            .xi
            .scale(-1.0)
            .dual_dexp(&x.nu)
            .expect("covector matches algebra dimension"),
    }
}

impl<A: LieAlgebra> LieAlgebra for SemidirectAlgebraElement<A> {
    fn dim(&self) -> usize {
        2 * self.xi.dim()
    }

    fn coords(&self) -> DVector<f64> {
        let d = self.xi.dim();
        DVector::from_iterator(2 * d, self.xi.coords().iter().chain(self.nu.0.iter()).copied())
    }

    fn with_coords(&self, c: &[f64]) -> Self {
        let d = self.xi.dim();
        SemidirectAlgebraElement {
            xi: self.xi.with_coords(&c[..d]),
            nu: Covector::from_slice(&c[d..]),
        }
    }

    fn compatible(&self, other: &Self) -> bool {
        self.xi.compatible(&other.xi) && self.nu.dim() == other.nu.dim()
    }

    /// `[(xi1, nu1), (xi2, nu2)] = ([xi1, xi2], coad(xi2, nu1) - coad(xi1, nu2))`.
    fn bracket(&self, other: &Self) -> Result<Self> {
        if !self.compatible(other) {
            return Err(Error::AlgebraMismatch("semidirect algebra elements".into()));
        }
        Ok(SemidirectAlgebraElement {
            xi: self.xi.bracket(&other.xi)?,
            nu: other.xi.coad(&self.nu)? - self.xi.coad(&other.nu)?,
        })
    }

    fn zero_like(&self) -> Self {
        SemidirectAlgebraElement {
            xi: self.xi.zero_like(),
            nu: Covector::zeros(self.nu.dim()),
        }
    }

    fn axpy(&self, a: f64, x: &Self) -> Self {
        SemidirectAlgebraElement {
            xi: self.xi.axpy(a, &x.xi),
            nu: &self.nu + &(&x.nu * a),
        }
    }

    fn scale(&self, s: f64) -> Self {
        SemidirectAlgebraElement {
            xi: self.xi.scale(s),
            nu: &self.nu * s,
        }
    }
}

impl<G: LieGroup> LieGroup for SemidirectGroupElement<G> {
    type Algebra = SemidirectAlgebraElement<G::Algebra>;

    fn identity_like(&self) -> Self {
        SemidirectGroupElement {
            g: self.g.identity_like(),
            mu: Covector::zeros(self.mu.dim()),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        semidirect_mul(self, other)
    }

    fn inverse(&self) -> Self {
        semidirect_inv(self)
    }

    fn exp(x: &Self::Algebra) -> Self {
        semidirect_exp(x)
    }

    fn algebra_zero(&self) -> Self::Algebra {
        SemidirectAlgebraElement {
            xi: self.g.algebra_zero(),
            nu: Covector::zeros(self.mu.dim()),
        }
    }

    /// `Ad_(g, mu)(xi, nu) = (Ad_g xi, coAd(g^{-1}, nu) + coad(Ad_g xi, mu))`.
    fn adjoint(&self, x: &Self::Algebra) -> Self::Algebra {
        let axi = self.g.adjoint(&x.xi);
        let nu = &self.g.inverse().co_adjoint(&x.nu)
            + &axi.coad(&self.mu).expect("covector matches algebra dimension");
        SemidirectAlgebraElement { xi: axi, nu }
    }

    fn coords(&self) -> DVector<f64> {
        let gc = self.g.coords();
        DVector::from_iterator(gc.len() + self.mu.dim(), gc.iter().chain(self.mu.0.iter()).copied())
    }

    /// Tangent of `exp(t x) (g, mu)`: `(xi g, nu - coad(xi, mu))`.
    fn right_tangent(&self, x: &Self::Algebra) -> DVector<f64> {
        let dg = self.g.right_tangent(&x.xi);
        let dmu = &x.nu - &x.xi.coad(&self.mu).expect("covector matches algebra dimension");
        DVector::from_iterator(dg.len() + dmu.dim(), dg.iter().chain(dmu.0.iter()).copied())
    }
}
