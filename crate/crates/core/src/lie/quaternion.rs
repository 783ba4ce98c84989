//! Unit quaternions (S^3) and pure quaternions.
//!
//! Pure quaternion coordinates `w` are scaled so that `quat_exp(w)` covers the
//! rotation `expm_so3(hat(2w))`; the bracket is `2 w1 x w2`.

use nalgebra::{DVector, Matrix3, Vector3};

use super::algebra::{Covector, LieAlgebra};
use super::group::{LieGroup, LogMap};
use super::so3::{covector3, dexp_so3_exact, dexpinv_so3_exact, from3, hat, RotationMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitQuaternion {
    pub q0: f64,
    pub q: Vector3<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureQuaternion(pub Vector3<f64>);

impl UnitQuaternion {
    pub fn identity() -> Self {
        UnitQuaternion {
            q0: 1.0,
            q: Vector3::zeros(),
        }
    }

    /// Normalizes `(q0, q)` onto S^3.
    pub fn new_normalize(q0: f64, q: Vector3<f64>) -> Self {
        let n = (q0 * q0 + q.norm_squared()).sqrt();
        UnitQuaternion { q0: q0 / n, q: q / n }
    }

    pub fn norm(&self) -> f64 {
        (self.q0 * self.q0 + self.q.norm_squared()).sqrt()
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.q0, self.q[0], self.q[1], self.q[2]]
    }
}

pub fn quat_mul(p: &UnitQuaternion, q: &UnitQuaternion) -> UnitQuaternion {
    UnitQuaternion {
        q0: p.q0 * q.q0 - p.q.dot(&q.q),
        q: q.q * p.q0 + p.q * q.q0 + p.q.cross(&q.q),
    }
}

pub fn quat_conj(q: &UnitQuaternion) -> UnitQuaternion {
    UnitQuaternion { q0: q.q0, q: -q.q }
}

/// `(cos|w|, sin|w| w/|w|)`.
pub fn quat_exp(w: &PureQuaternion) -> UnitQuaternion {
    let t = w.0.norm();
    let sinc = if t < 1e-4 {
        1.0 - t * t / 6.0 + t.powi(4) / 120.0
    } else {
        t.sin() / t
    };
    UnitQuaternion::new_normalize(t.cos(), w.0 * sinc)
}

pub fn quat_log(q: &UnitQuaternion) -> Result<PureQuaternion> {
    if q.q0 <= -1.0 + 1e-9 {
        return Err(Error::LogNearAntipode { q0: q.q0 });
    }
    let s = q.q.norm();
    let t = s.atan2(q.q0);
    let factor = if s < 1e-8 {
        // t / sin t with sin t ~ s, and q0 ~ 1
        1.0 + t * t / 6.0
    } else {
        t / s
    };
    Ok(PureQuaternion(q.q * factor))
}

/// `E(q) = I + 2 q0 hat(q) + 2 hat(q)^2`.
pub fn euler_rodrigues(q: &UnitQuaternion) -> RotationMatrix {
    let qh = hat(&q.q);
    RotationMatrix(Matrix3::identity() + qh * (2.0 * q.q0) + qh * qh * 2.0)
}

impl LieAlgebra for PureQuaternion {
    fn dim(&self) -> usize {
        3
    }

    fn coords(&self) -> DVector<f64> {
        DVector::from_column_slice(self.0.as_slice())
    }

    fn with_coords(&self, c: &[f64]) -> Self {
        PureQuaternion(Vector3::new(c[0], c[1], c[2]))
    }

    fn bracket(&self, other: &Self) -> Result<Self> {
        Ok(PureQuaternion(self.0.cross(&other.0) * 2.0))
    }

    fn zero_like(&self) -> Self {
        PureQuaternion(Vector3::zeros())
    }

    fn axpy(&self, a: f64, x: &Self) -> Self {
        PureQuaternion(self.0 + x.0 * a)
    }

    fn scale(&self, s: f64) -> Self {
        PureQuaternion(self.0 * s)
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn coad(&self, mu: &Covector) -> Result<Covector> {
        Ok(from3(&(covector3(mu)?.cross(&self.0) * 2.0)))
    }

    // ad_w = ad^{so(3)}_{2w}, so the closed forms apply at 2w.
    fn dexp(&self, v: &Self) -> Result<Self> {
        Ok(PureQuaternion(dexp_so3_exact(&(self.0 * 2.0), &v.0)))
    }

    fn dexpinv(&self, v: &Self) -> Result<Self> {
        Ok(PureQuaternion(dexpinv_so3_exact(&(self.0 * 2.0), &v.0)))
    }

    fn dual_dexp(&self, mu: &Covector) -> Result<Covector> {
        Ok(from3(&dexp_so3_exact(&(self.0 * -2.0), &covector3(mu)?)))
    }

    fn dual_dexpinv(&self, mu: &Covector) -> Result<Covector> {
        Ok(from3(&dexpinv_so3_exact(&(self.0 * -2.0), &covector3(mu)?)))
    }
}

impl LieGroup for UnitQuaternion {
    type Algebra = PureQuaternion;

    fn identity_like(&self) -> Self {
        UnitQuaternion::identity()
    }

    fn mul(&self, other: &Self) -> Self {
        quat_mul(self, other)
    }

    fn inverse(&self) -> Self {
        quat_conj(self)
    }

    fn exp(xi: &PureQuaternion) -> Self {
        quat_exp(xi)
    }

    fn algebra_zero(&self) -> PureQuaternion {
        PureQuaternion(Vector3::zeros())
    }

    fn adjoint(&self, xi: &PureQuaternion) -> PureQuaternion {
        PureQuaternion(euler_rodrigues(self).0 * xi.0)
    }

    fn co_adjoint(&self, mu: &Covector) -> Covector {
        let m = covector3(mu).expect("3-dimensional covector");
        from3(&(euler_rodrigues(self).0.transpose() * m))
    }

    fn coords(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.as_array())
    }

    fn right_tangent(&self, xi: &PureQuaternion) -> DVector<f64> {
        let p = UnitQuaternion { q0: 0.0, q: xi.0 };
        DVector::from_column_slice(&quat_mul(&p, self).as_array())
    }
}

impl LogMap for UnitQuaternion {
    fn log(&self) -> Result<PureQuaternion> {
        quat_log(self)
    }
}
