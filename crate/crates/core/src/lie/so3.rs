//! SO(3) and its algebra in vector form, with closed-form exp, log and dexp.

use nalgebra::{DVector, Matrix3, Vector3};

use super::algebra::{Covector, LieAlgebra};
use super::group::{LieGroup, LogMap};
use crate::error::{Error, Result};

const SMALL_ANGLE: f64 = 1e-4;
const SERIES_ANGLE: f64 = 1e-2;

/// `so(3)` element in hat-map coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct So3Vector(pub Vector3<f64>);

/// Rotation matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationMatrix(pub Matrix3<f64>);

pub fn hat(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0)
}

pub fn vee(a: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(a[(2, 1)], a[(0, 2)], a[(1, 0)])
}

/// Rodrigues' formula for a skew-symmetric 3x3 matrix.
pub fn expm_so3(a: &Matrix3<f64>) -> RotationMatrix {
    let alpha2 = 0.5 * a.norm_squared();
    let alpha = alpha2.sqrt();
    let (s, c) = if alpha < SMALL_ANGLE {
        (
            1.0 - alpha2 / 6.0 + alpha2 * alpha2 / 120.0,
            0.5 - alpha2 / 24.0 + alpha2 * alpha2 / 720.0,
        )
    } else {
        let half = (0.5 * alpha).sin() / alpha;
        (alpha.sin() / alpha, 2.0 * half * half)
    };
    RotationMatrix(Matrix3::identity() + a * s + a * a * c)
}

/// Principal logarithm of a rotation; rejects angles within ~1e-3 of pi.
pub fn logm_so3(r: &RotationMatrix) -> Result<Matrix3<f64>> {
    let m = &r.0;
    let trace = m.trace();
    if trace <= -1.0 + 1e-6 {
        return Err(Error::AngleNearPi { trace });
    }
    let skew = m - m.transpose();
    let s = 0.5 * vee(&skew).norm();
    let c = 0.5 * (trace - 1.0);
    let theta = s.atan2(c);
    let factor = if theta < SMALL_ANGLE {
        let t2 = theta * theta;
        0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0)
    } else {
        0.5 * theta / theta.sin()
    };
    Ok(skew * factor)
}

/// Coefficients `(1 - cos t)/t^2` and `(t - sin t)/t^3`.
fn dexp_coefficients(theta: f64) -> (f64, f64) {
    if theta < SERIES_ANGLE {
        let t2 = theta * theta;
        (
            0.5 - t2 / 24.0 + t2 * t2 / 720.0 - t2 * t2 * t2 / 40320.0,
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0 - t2 * t2 * t2 / 362880.0,
        )
    } else {
        let half = (0.5 * theta).sin() / theta;
        (2.0 * half * half, (theta - theta.sin()) / (theta * theta * theta))
    }
}

/// `(1 - (t/2) cot(t/2)) / t^2`.
fn dexpinv_coefficient(theta: f64) -> f64 {
    if theta < SERIES_ANGLE {
        let t2 = theta * theta;
        1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0 + t2 * t2 * t2 / 1209600.0
    } else {
        let x = 0.5 * theta;
        (1.0 - x * x.cos() / x.sin()) / (theta * theta)
    }
}

/// Exact `dexp_sigma v` on `so(3)`.
pub fn dexp_so3_exact(sigma: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
    let (a, b) = dexp_coefficients(sigma.norm());
    let sv = sigma.cross(v);
    v + sv * a + sigma.cross(&sv) * b
}

/// Exact `dexp_sigma^{-1} v` on `so(3)`, valid for `|sigma| < 2 pi`.
pub fn dexpinv_so3_exact(sigma: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
    let c = dexpinv_coefficient(sigma.norm());
    let sv = sigma.cross(v);
    v - sv * 0.5 + sigma.cross(&sv) * c
}

impl So3Vector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        So3Vector(Vector3::new(x, y, z))
    }

    pub fn hat(&self) -> Matrix3<f64> {
        hat(&self.0)
    }
}

impl LieAlgebra for So3Vector {
    fn dim(&self) -> usize {
        3
    }

    fn coords(&self) -> DVector<f64> {
        DVector::from_column_slice(self.0.as_slice())
    }

    fn with_coords(&self, c: &[f64]) -> Self {
        So3Vector(Vector3::new(c[0], c[1], c[2]))
    }

    fn bracket(&self, other: &Self) -> Result<Self> {
        Ok(So3Vector(self.0.cross(&other.0)))
    }

    fn zero_like(&self) -> Self {
        So3Vector(Vector3::zeros())
    }

    fn axpy(&self, a: f64, x: &Self) -> Self {
        So3Vector(self.0 + x.0 * a)
    }

    fn scale(&self, s: f64) -> Self {
        So3Vector(self.0 * s)
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn coad(&self, mu: &Covector) -> Result<Covector> {
        let m = covector3(mu)?;
        Ok(from3(&m.cross(&self.0)))
    }

    fn dexp(&self, v: &Self) -> Result<Self> {
        Ok(So3Vector(dexp_so3_exact(&self.0, &v.0)))
    }

    fn dexpinv(&self, v: &Self) -> Result<Self> {
        Ok(So3Vector(dexpinv_so3_exact(&self.0, &v.0)))
    }

    // The dexp operators are I + a S + b S^2 with S skew, so their transposes
    // are the same operators at -sigma.
    fn dual_dexp(&self, mu: &Covector) -> Result<Covector> {
        Ok(from3(&dexp_so3_exact(&-self.0, &covector3(mu)?)))
    }

    fn dual_dexpinv(&self, mu: &Covector) -> Result<Covector> {
        Ok(from3(&dexpinv_so3_exact(&-self.0, &covector3(mu)?)))
    }
}

pub(crate) fn covector3(mu: &Covector) -> Result<Vector3<f64>> {
    if mu.dim() != 3 {
        return Err(Error::AlgebraMismatch(format!(
            "expected a 3-dimensional covector, got {}",
            mu.dim()
        )));
    }
    Ok(Vector3::new(mu.0[0], mu.0[1], mu.0[2]))
}

pub(crate) fn from3(v: &Vector3<f64>) -> Covector {
    Covector::from_slice(v.as_slice())
}

impl RotationMatrix {
    pub fn identity() -> Self {
        RotationMatrix(Matrix3::identity())
    }

    /// Rotation by `angle` about the unit vector `axis`.
    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64) -> Self {
        expm_so3(&hat(&(axis.normalize() * angle)))
    }

    /// `|R^T R - I|` in the max norm.
    pub fn orthogonality_residual(&self) -> f64 {
        (self.0.transpose() * self.0 - Matrix3::identity()).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }
}

impl LieGroup for RotationMatrix {
    type Algebra = So3Vector;

    fn identity_like(&self) -> Self {
        RotationMatrix::identity()
    }

    fn mul(&self, other: &Self) -> Self {
        RotationMatrix(self.0 * other.0)
    }

    fn inverse(&self) -> Self {
        RotationMatrix(self.0.transpose())
    }

    fn exp(xi: &So3Vector) -> Self {
        expm_so3(&xi.hat())
    }

    fn algebra_zero(&self) -> So3Vector {
        So3Vector(Vector3::zeros())
    }

    fn adjoint(&self, xi: &So3Vector) -> So3Vector {
        So3Vector(self.0 * xi.0)
    }

    fn co_adjoint(&self, mu: &Covector) -> Covector {
        let m = covector3(mu).expect("so(3) covector");
        from3(&(self.0.transpose() * m))
    }

    fn coords(&self) -> DVector<f64> {
        // row-major
        DVector::from_iterator(9, self.0.transpose().iter().copied())
    }

    fn right_tangent(&self, xi: &So3Vector) -> DVector<f64> {
        let d = xi.hat() * self.0;
        DVector::from_iterator(9, d.transpose().iter().copied())
    }
}

impl LogMap for RotationMatrix {
    fn log(&self) -> Result<So3Vector> {
        Ok(So3Vector(vee(&logm_so3(self)?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::algebra::{dexp_series, dexpinv_series};

    #[test]
    fn hat_of_reference_vector() {
        let m = hat(&Vector3::new(1.0, 2.0, 3.0));
        let expected = Matrix3::new(0.0, -3.0, 2.0, 3.0, 0.0, -1.0, -2.0, 1.0, 0.0);
        assert_eq!(m, expected);
        assert_eq!(hat(&Vector3::zeros()), Matrix3::zeros());
        assert_eq!(vee(&m), Vector3::new(1.0, 2.0, 3.0));
    }

    #[test]
    fn expm_about_x_axis() {
        for &theta in &[0.0, 1e-6, 0.3, 2.0, 3.1] {
            let r = expm_so3(&hat(&Vector3::new(theta, 0.0, 0.0)));
            let (s, c) = theta.sin_cos();
            let expected = Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c);
            assert!((r.0 - expected).amax() < 1e-15);
        }
    }

    #[test]
    fn log_round_trip_and_identity() {
        assert_eq!(logm_so3(&RotationMatrix::identity()).unwrap(), Matrix3::zeros());
        let v = Vector3::new(0.3, -0.2, 0.1);
        let a = logm_so3(&expm_so3(&hat(&v))).unwrap();
        assert!((vee(&a) - v).amax() < 1e-12);
    }

    #[test]
    fn log_rejects_angle_near_pi() {
        let r = RotationMatrix::from_axis_angle(&Vector3::new(1.0, 2.0, -1.0), std::f64::consts::PI - 1e-8);
        assert!(matches!(logm_so3(&r), Err(Error::AngleNearPi { .. })));
    }

    #[test]
    fn exact_dexpinv_matches_series() {
        let s = So3Vector::new(0.6, -0.5, 0.2);
        let v = So3Vector::new(1.0, 2.0, -0.7);
        let exact = s.dexpinv(&v).unwrap();
        let series = dexpinv_series(&s, &v, 16).unwrap();
        assert!((exact.0 - series.0).amax() < 1e-12);
        let exact = s.dexp(&v).unwrap();
        let series = dexp_series(&s, &v, 20).unwrap();
        assert!((exact.0 - series.0).amax() < 1e-14);
    }

    #[test]
    fn exact_dexpinv_trivial_cases() {
        let v = So3Vector::new(1.0, 2.0, 3.0);
        assert_eq!(So3Vector::new(0.0, 0.0, 0.0).dexpinv(&v).unwrap(), v);
        let par = v.scale(0.3).dexpinv(&v).unwrap();
        assert!((par.0 - v.0).amax() < 1e-15);
    }

    #[test]
    fn dexp_coefficients_continuous_at_switch() {
        let below = dexp_coefficients(SERIES_ANGLE * (1.0 - 1e-12));
        let above = dexp_coefficients(SERIES_ANGLE * (1.0 + 1e-12));
        assert!((below.0 - above.0).abs() < 1e-12);
        assert!((below.1 - above.1).abs() < 1e-10);
        let b = dexpinv_coefficient(SERIES_ANGLE * (1.0 - 1e-12));
        let a = dexpinv_coefficient(SERIES_ANGLE * (1.0 + 1e-12));
        assert!((a - b).abs() < 1e-10);
    }
}
