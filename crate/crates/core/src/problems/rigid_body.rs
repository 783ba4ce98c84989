use nalgebra::{DVector, Vector3};

use crate::actions::{FrozenFieldProblem, SphereRotation};
use crate::error::{Error, Result};
use crate::lie::So3Vector;

/// Euler's free rigid body equations on `S^2`, `f(m) = -I^{-1} m`.
pub fn frb_s2_problem(i1: f64, i2: f64, i3: f64) -> Result<FrozenFieldProblem<SphereRotation>> {
    if !(i1 > 0.0 && i2 > 0.0 && i3 > 0.0) {
        return Err(Error::InvalidInput("moments of inertia must be positive".into()));
    }
    let inv = Vector3::new(1.0 / i1, 1.0 / i2, 1.0 / i3);
    Ok(
        FrozenFieldProblem::new(SphereRotation, move |m: &Vector3<f64>| {
            So3Vector(-inv.component_mul(m))
        })
        .with_reference(move |m: &Vector3<f64>| {
            let (x, y, z) = (m[0], m[1], m[2]);
            DVector::from_column_slice(&[
                (inv[2] - inv[1]) * y * z,
                (inv[0] - inv[2]) * x * z,
                (inv[1] - inv[0]) * x * y,
            ])
        })
        .with_invariant("norm", |m: &Vector3<f64>| m.norm())
        .with_invariant("energy", move |m: &Vector3<f64>| {
            0.5 * m.dot(&inv.component_mul(m))
        }),
    )
}
