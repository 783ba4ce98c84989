//! The affine group `GL(n) x| R^n` acting on `R^n` by `x -> A x + b`.

use nalgebra::{DMatrix, DVector};

use super::algebra::LieAlgebra;
use super::group::LieGroup;
use super::matrix::expm;
use crate::error::{Error, Result};

const PHI_SERIES_NORM: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct AffineAlgebraElement {
    pub xi: DMatrix<f64>,
    pub c: DVector<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineGroupElement {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
}

/// `phi(Z) = (exp(Z) - I) / Z`.
///
/// For larger `Z` the value is read off the top-right block of
/// `exp([[Z, I], [0, 0]])`, which stays well defined when `Z` is singular.
pub fn phi1(z: &DMatrix<f64>) -> DMatrix<f64> {
    let n = z.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    if z.norm() < PHI_SERIES_NORM {
        let z2 = z * z;
        return &id + z * 0.5 + &z2 / 6.0 + &z2 * z / 24.0;
    }
    let mut aug = DMatrix::zeros(2 * n, 2 * n);
    aug.view_mut((0, 0), (n, n)).copy_from(z);
    aug.view_mut((0, n), (n, n)).copy_from(&id);
    expm(&aug).view((0, n), (n, n)).into_owned()
}

/// `exp(t (L, b)) = (exp(tL), phi(tL) t b)`.
pub fn affine_exp(t: f64, l: &DMatrix<f64>, b: &DVector<f64>) -> AffineGroupElement {
    let tl = l * t;
    AffineGroupElement {
        a: expm(&tl),
        b: phi1(&tl) * b * t,
    }
}

impl AffineAlgebraElement {
    pub fn new(xi: DMatrix<f64>, c: DVector<f64>) -> Result<Self> {
        if !xi.is_square() || xi.nrows() != c.len() {
            return Err(Error::InvalidInput(format!(
                "affine element needs n x n matrix and n-vector, got {}x{} and {}",
                xi.nrows(),
                xi.ncols(),
                c.len()
            )));
        }
        Ok(AffineAlgebraElement { xi, c })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// `(n+1) x (n+1)` homogeneous matrix `[[xi, c], [0, 0]]`.
    pub fn to_homogeneous(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(&self.xi);
        m.view_mut((0, n), (n, 1)).copy_from(&self.c);
        m
    }
}

impl AffineGroupElement {
    pub fn identity(n: usize) -> Self {
        AffineGroupElement {
            a: DMatrix::identity(n, n),
            b: DVector::zeros(n),
        }
    }

    pub fn to_homogeneous(&self) -> DMatrix<f64> {
        let n = self.b.len();
        let mut m = DMatrix::identity(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(&self.a);
        m.view_mut((0, n), (n, 1)).copy_from(&self.b);
        m
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x + &self.b
    }
}

impl LieAlgebra for AffineAlgebraElement {
    fn dim(&self) -> usize {
        let n = self.n();
        n * n + n
    }

    fn coords(&self) -> DVector<f64> {
        let n = self.n();
        DVector::from_iterator(
            n * n + n,
            self.xi.transpose().iter().chain(self.c.iter()).copied(),
        )
    }

    fn with_coords(&self, c: &[f64]) -> Self {
        let n = self.n();
        AffineAlgebraElement {
            xi: DMatrix::from_row_slice(n, n, &c[..n * n]),
            c: DVector::from_column_slice(&c[n * n..]),
        }
    }

    fn compatible(&self, other: &Self) -> bool {
        self.n() == other.n()
    }

    fn bracket(&self, other: &Self) -> Result<Self> {
        if !self.compatible(other) {
            return Err(Error::AlgebraMismatch(format!(
                "affine algebras of size {} and {}",
                self.n(),
                other.n()
            )));
        }
        Ok(AffineAlgebraElement {
            xi: &self.xi * &other.xi - &other.xi * &self.xi,
            c: &self.xi * &other.c - &other.xi * &self.c,
        })
    }

    fn zero_like(&self) -> Self {
        let n = self.n();
        AffineAlgebraElement {
            xi: DMatrix::zeros(n, n),
            c: DVector::zeros(n),
        }
    }

    fn axpy(&self, a: f64, x: &Self) -> Self {
        AffineAlgebraElement {
            xi: &self.xi + &x.xi * a,
            c: &self.c + &x.c * a,
        }
    }

    fn scale(&self, s: f64) -> Self {
        AffineAlgebraElement {
            xi: &self.xi * s,
            c: &self.c * s,
        }
    }
}

impl LieGroup for AffineGroupElement {
    type Algebra = AffineAlgebraElement;

    fn identity_like(&self) -> Self {
        AffineGroupElement::identity(self.b.len())
    }

    fn mul(&self, other: &Self) -> Self {
        AffineGroupElement {
            a: &self.a * &other.a,
            b: &self.a * &other.b + &self.b,
        }
    }

    fn inverse(&self) -> Self {
        let ai = self
            .a
            .clone()
            .try_inverse()
            .expect("affine group element with invertible linear part");
        let b = -(&ai * &self.b);
        AffineGroupElement { a: ai, b }
    }

    fn exp(xi: &AffineAlgebraElement) -> Self {
        affine_exp(1.0, &xi.xi, &xi.c)
    }

    fn algebra_zero(&self) -> AffineAlgebraElement {
        let n = self.b.len();
        AffineAlgebraElement {
            xi: DMatrix::zeros(n, n),
            c: DVector::zeros(n),
        }
    }

    fn adjoint(&self, x: &AffineAlgebraElement) -> AffineAlgebraElement {
        let ai = self
            .a
            .clone()
            .try_inverse()
            .expect("affine group element with invertible linear part");
        let axi = &self.a * &x.xi * &ai;
        let c = &self.a * &x.c - &axi * &self.b;
        AffineAlgebraElement { xi: axi, c }
    }

    fn coords(&self) -> DVector<f64> {
        let n = self.b.len();
        DVector::from_iterator(
            n * n + n,
            self.a.transpose().iter().chain(self.b.iter()).copied(),
        )
    }

    fn right_tangent(&self, x: &AffineAlgebraElement) -> DVector<f64> {
        let n = self.b.len();
        let da = &x.xi * &self.a;
        let db = &x.xi * &self.b + &x.c;
        DVector::from_iterator(n * n + n, da.transpose().iter().chain(db.iter()).copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi1_zero_and_scalar() {
        assert_eq!(phi1(&DMatrix::zeros(3, 3)), DMatrix::identity(3, 3));
        let one = DMatrix::from_element(1, 1, 1.0);
        assert!((phi1(&one)[(0, 0)] - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        let g = affine_exp(1.0, &one, &DVector::from_element(1, 1.0));
        assert!((g.a[(0, 0)] - std::f64::consts::E).abs() < 1e-15);
        assert!((g.b[0] - (std::f64::consts::E - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn phi1_handles_singular_argument() {
        let z = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let p = phi1(&z);
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!((p - expected).amax() < 1e-15);
    }

    #[test]
    fn phi1_continuous_at_series_switch() {
        let dir = DMatrix::from_row_slice(2, 2, &[0.3, -1.0, 0.7, 0.2]).normalize();
        let a = phi1(&(&dir * (PHI_SERIES_NORM * (1.0 - 1e-9))));
        let b = phi1(&(&dir * (PHI_SERIES_NORM * (1.0 + 1e-9))));
        assert!((a - b).amax() < 1e-13);
    }

    #[test]
    fn homogeneous_product_matches_group_law() {
        let g = affine_exp(0.4, &DMatrix::from_row_slice(2, 2, &[0.1, 1.0, -2.0, 0.3]), &DVector::from_column_slice(&[1.0, -0.5]));
        let h = affine_exp(-0.7, &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]), &DVector::from_column_slice(&[0.2, 0.9]));
        let prod = g.mul(&h).to_homogeneous();
        let hom = g.to_homogeneous() * h.to_homogeneous();
        assert!((prod - hom).amax() < 1e-14);
    }
}
