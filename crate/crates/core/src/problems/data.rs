//! Seeded synthetic data.

use nalgebra::{DMatrix, DVector, Vector3};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::lie::{expm_so3, hat, RotationMatrix, UnitQuaternion};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn gaussian_matrix(r: usize, c: usize, rng: &mut StdRng) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.sample(StandardNormal))
}

/// Uniformly distributed unit quaternion.
pub fn random_unit_quaternion(rng: &mut StdRng) -> UnitQuaternion {
    let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    UnitQuaternion::new_normalize(v[0], Vector3::new(v[1], v[2], v[3]))
}

/// Random rotation with angle below `max_angle`.
pub fn random_rotation(rng: &mut StdRng, max_angle: f64) -> RotationMatrix {
    let axis: Vector3<f64> = Vector3::from_fn(|_, _| rng.sample(StandardNormal));
    let angle = rng.random::<f64>() * max_angle;
    expm_so3(&hat(&(axis.normalize() * angle)))
}

/// Orthonormal `n x k` frame from the QR factorization of a Gaussian matrix.
pub fn random_stiefel(n: usize, k: usize, rng: &mut StdRng) -> DMatrix<f64> {
    let qr = gaussian_matrix(n, k, rng).qr();
    let q = qr.q();
    let r = qr.r();
    // fix signs so the factorization is unique
    let mut q = q.columns(0, k).into_owned();
    for j in 0..k {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Symmetric matrix `U diag(spectrum) U^T` with a random orthogonal `U`.
pub fn synthetic_covariance(spectrum: &[f64], seed: u64) -> DMatrix<f64> {
    let n = spectrum.len();
    let mut r = rng(seed);
    let u = random_stiefel(n, n, &mut r);
    let d = DMatrix::from_diagonal(&DVector::from_column_slice(spectrum));
    let a = &u * d * u.transpose();
    (&a + a.transpose()) * 0.5
}
