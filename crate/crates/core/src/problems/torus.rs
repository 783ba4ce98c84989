use nalgebra::DVector;

use crate::actions::{FrozenFieldProblem, TorusAction, TorusPoint};
use crate::error::Result;
use crate::integrators::{integrate, Scheme, Trajectory};
use crate::lie::Abelian;

/// `((1 + cos theta) sin phi - 8)^2`; minimum 36 at `(0, pi/2)`.
pub fn torus_cost(p: &TorusPoint) -> f64 {
    let y = (1.0 + p.u[0]) * p.w[1];
    (y - 8.0) * (y - 8.0)
}

/// `(gamma, delta)`, the angular gradient of the cost.
pub fn torus_gradient(p: &TorusPoint) -> (f64, f64) {
    let (ct, st) = (p.u[0], p.u[1]);
    let (cp, sp) = (p.w[0], p.w[1]);
    let c = 2.0 * ((1.0 + ct) * sp - 8.0);
    (-c * st * sp, c * (1.0 + ct) * cp)
}

/// Negative gradient flow of the cost under `SO(2) x SO(2)`.
pub fn torus_problem() -> FrozenFieldProblem<TorusAction> {
    FrozenFieldProblem::new(TorusAction, |p: &TorusPoint| {
        let (g, d) = torus_gradient(p);
        Abelian::from_slice(&[-g, -d])
    })
    .with_reference(|p: &TorusPoint| {
        // theta' = -dc/dtheta, phi' = -dc/dphi by differentiating the cost directly
        let y = (1.0 + p.u[0]) * p.w[1];
        let dth = 2.0 * (y - 8.0) * (-p.u[1] * p.w[1]);
        let dph = 2.0 * (y - 8.0) * (1.0 + p.u[0]) * p.w[0];
        DVector::from_column_slice(&[dth * p.u[1], -dth * p.u[0], dph * p.w[1], -dph * p.w[0]])
    })
    .with_invariant("cost", torus_cost)
    .with_invariant("norm_u", |p: &TorusPoint| p.u.norm())
    .with_invariant("norm_w", |p: &TorusPoint| p.w.norm())
}

pub fn torus_descent(start: &TorusPoint, h: f64, n_steps: usize, scheme: &Scheme) -> Result<Trajectory<TorusPoint>> {
    integrate(&torus_problem(), scheme, start, h, n_steps)
}
