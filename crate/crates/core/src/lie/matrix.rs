//! General matrix Lie algebras and groups.

use nalgebra::{DMatrix, DVector};

use super::algebra::LieAlgebra;
use super::group::LieGroup;
use crate::error::{Error, Result};

/// Which matrix algebra an element belongs to; fixes the coordinate basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    /// `sl(2)` with basis `X = [[0,1],[0,0]]`, `Y = [[0,0],[1,0]]`, `H = diag(1,-1)`.
    Sl2,
    /// `se(2)` as 3x3 homogeneous matrices, coordinates `(omega, x, y)`.
    Se2,
    /// `so(n)`, coordinates are the strict upper triangle, row by row.
    So(usize),
    /// `gl(n)`, coordinates are all entries, row by row.
    General(usize),
}

impl MatrixKind {
    pub fn size(&self) -> usize {
        match *self {
            MatrixKind::Sl2 => 2,
            MatrixKind::Se2 => 3,
            MatrixKind::So(n) | MatrixKind::General(n) => n,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            MatrixKind::Sl2 | MatrixKind::Se2 => 3,
            MatrixKind::So(n) => n * (n - 1) / 2,
            MatrixKind::General(n) => n * n,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixAlgebraElement {
    pub mat: DMatrix<f64>,
    pub kind: MatrixKind,
}

impl MatrixAlgebraElement {
    /// Wraps `mat`, checking the constraint that `kind` imposes.
    pub fn new(mat: DMatrix<f64>, kind: MatrixKind) -> Result<Self> {
        let n = kind.size();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "expected {n}x{n} matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let ok = match kind {
            MatrixKind::Sl2 => mat.trace().abs() <= 1e-12 * (1.0 + mat.amax()),
            MatrixKind::So(_) => (&mat + mat.transpose()).amax() <= 1e-12 * (1.0 + mat.amax()),
            MatrixKind::Se2 => {
                (mat[(0, 0)]).abs() <= 1e-12
                    && (mat[(1, 1)]).abs() <= 1e-12
                    && (mat[(0, 1)] + mat[(1, 0)]).abs() <= 1e-12
                    && mat.row(2).amax() <= 1e-12
            }
            MatrixKind::General(_) => true,
        };
        if !ok {
            return Err(Error::InvalidInput(format!("matrix violates {kind:?} constraint")));
        }
        Ok(MatrixAlgebraElement { mat, kind })
    }

    /// Skew part of `mat` as an `so(n)` element.
    pub fn skew(mat: &DMatrix<f64>) -> Self {
        let n = mat.nrows();
        MatrixAlgebraElement {
            mat: (mat - mat.transpose()) * 0.5,
            kind: MatrixKind::So(n),
        }
    }

    pub fn zeros(kind: MatrixKind) -> Self {
        let n = kind.size();
        MatrixAlgebraElement {
            mat: DMatrix::zeros(n, n),
            kind,
        }
    }
}

impl LieAlgebra for MatrixAlgebraElement {
    fn dim(&self) -> usize {
        self.kind.dim()
    }

    fn coords(&self) -> DVector<f64> {
        let m = &self.mat;
        match self.kind {
            MatrixKind::Sl2 => DVector::from_column_slice(&[m[(0, 1)], m[(1, 0)], m[(0, 0)]]),
            MatrixKind::Se2 => DVector::from_column_slice(&[m[(1, 0)], m[(0, 2)], m[(1, 2)]]),
            MatrixKind::So(n) => {
                let mut c = Vec::with_capacity(self.kind.dim());
                for i in 0..n {
                    for j in (i + 1)..n {
                        c.push(m[(i, j)]);
                    }
                }
                DVector::from_vec(c)
            }
            MatrixKind::General(n) => DVector::from_iterator(n * n, m.transpose().iter().copied()),
        }
    }

    fn with_coords(&self, c: &[f64]) -> Self {
        let mat = match self.kind {
            MatrixKind::Sl2 => DMatrix::from_row_slice(2, 2, &[c[2], c[0], c[1], -c[2]]),
            MatrixKind::Se2 => {
                DMatrix::from_row_slice(3, 3, &[0.0, -c[0], c[1], c[0], 0.0, c[2], 0.0, 0.0, 0.0])
            }
            MatrixKind::So(n) => {
                let mut m = DMatrix::zeros(n, n);
                let mut k = 0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        m[(i, j)] = c[k];
                        m[(j, i)] = -c[k];
                        k += 1;
                    }
                }
                m
            }
            MatrixKind::General(n) => DMatrix::from_row_slice(n, n, c),
        };
        MatrixAlgebraElement { mat, kind: self.kind }
    }

    fn compatible(&self, other: &Self) -> bool {
        self.kind == other.kind
    }

    fn bracket(&self, other: &Self) -> Result<Self> {
        if !self.compatible(other) {
            return Err(Error::AlgebraMismatch(format!(
                "{:?} and {:?}",
                self.kind, other.kind
            )));
        }
        Ok(MatrixAlgebraElement {
            mat: &self.mat * &other.mat - &other.mat * &self.mat,
            kind: self.kind,
        })
    }

    fn zero_like(&self) -> Self {
        MatrixAlgebraElement::zeros(self.kind)
    }

    fn axpy(&self, a: f64, x: &Self) -> Self {
        MatrixAlgebraElement {
            mat: &self.mat + &x.mat * a,
            kind: self.kind,
        }
    }

    fn scale(&self, s: f64) -> Self {
        MatrixAlgebraElement {
            mat: &self.mat * s,
            kind: self.kind,
        }
    }
}

/// Element of a matrix group, tagged with the algebra it exponentiates from.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixGroupElement {
    pub mat: DMatrix<f64>,
    pub kind: MatrixKind,
}

/// Matrix exponential (Pade scaling and squaring).
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().exp()
}

/// Cayley map `(I - xi/2)^{-1} (I + xi/2)`.
pub fn cayley(xi: &MatrixAlgebraElement) -> Result<MatrixGroupElement> {
    let n = xi.mat.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let lhs = &id - &xi.mat * 0.5;
    let rhs = &id + &xi.mat * 0.5;
    let lu = lhs.clone().lu();
    let sol = lu.solve(&rhs).ok_or(Error::SingularResolvent)?;
    // crude reciprocal condition estimate
    let inv = lu.try_inverse().ok_or(Error::SingularResolvent)?;
    let rcond = 1.0 / (lhs.amax() * inv.amax() * n as f64);
    if !sol.iter().all(|x| x.is_finite()) || rcond < 1e-14 {
        return Err(Error::SingularResolvent);
    }
    Ok(MatrixGroupElement { mat: sol, kind: xi.kind })
}

impl MatrixGroupElement {
    pub fn identity(kind: MatrixKind) -> Self {
        let n = kind.size();
        MatrixGroupElement {
            mat: DMatrix::identity(n, n),
            kind,
        }
    }

    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.mat.nrows();
        (self.mat.transpose() * &self.mat - DMatrix::<f64>::identity(n, n)).amax()
    }
}

impl LieGroup for MatrixGroupElement {
    type Algebra = MatrixAlgebraElement;

    fn identity_like(&self) -> Self {
        MatrixGroupElement::identity(self.kind)
    }

    fn mul(&self, other: &Self) -> Self {
        MatrixGroupElement {
            mat: &self.mat * &other.mat,
            kind: self.kind,
        }
    }

    fn inverse(&self) -> Self {
        let mat = match self.kind {
            MatrixKind::So(_) => self.mat.transpose(),
            _ => self
                .mat
                .clone()
                .try_inverse()
                .expect("group elements are invertible"),
        };
        MatrixGroupElement { mat, kind: self.kind }
    }

    fn exp(xi: &MatrixAlgebraElement) -> Self {
        MatrixGroupElement {
            mat: expm(&xi.mat),
            kind: xi.kind,
        }
    }

    fn algebra_zero(&self) -> MatrixAlgebraElement {
        MatrixAlgebraElement::zeros(self.kind)
    }

    fn adjoint(&self, xi: &MatrixAlgebraElement) -> MatrixAlgebraElement {
        let inv = self.inverse();
        MatrixAlgebraElement {
            mat: &self.mat * &xi.mat * &inv.mat,
            kind: xi.kind,
        }
    }

    fn coords(&self) -> DVector<f64> {
        let n = self.mat.nrows();
        DVector::from_iterator(n * n, self.mat.transpose().iter().copied())
    }

    fn right_tangent(&self, xi: &MatrixAlgebraElement) -> DVector<f64> {
        let d = &xi.mat * &self.mat;
        let n = d.nrows();
        DVector::from_iterator(n * n, d.transpose().iter().copied())
    }
}
