//! Flows on the Stiefel manifold `St(n, k)` under `SO(n)`: the PCA gradient
//! flow and the continuous QR flow for Lyapunov exponents.

use nalgebra::{DMatrix, DVector};

use crate::actions::{FrozenFieldProblem, GroupAction, StiefelAction};
use crate::error::{Error, Result};
use crate::integrators::{propagate, Scheme};
use crate::lie::{LieAlgebra, MatrixAlgebraElement, MatrixKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StiefelFlavor {
    PcaGradient,
    Lyapunov,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StiefelFlowProblem {
    pub a: DMatrix<f64>,
    pub k: usize,
    pub flavor: StiefelFlavor,
}

impl StiefelFlowProblem {
    pub fn new(a: DMatrix<f64>, k: usize, flavor: StiefelFlavor) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidInput("A must be square".into()));
        }
        if k == 0 || k > a.nrows() {
            return Err(Error::InvalidInput(format!("k = {k} must lie in 1..={}", a.nrows())));
        }
        if flavor == StiefelFlavor::PcaGradient && (&a - a.transpose()).amax() > 1e-12 {
            return Err(Error::InvalidInput("A must be symmetric for the PCA flow".into()));
        }
        Ok(StiefelFlowProblem { a, k, flavor })
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }
}

/// `1/2 trace(Q^T A Q)`.
pub fn pca_objective(a: &DMatrix<f64>, q: &DMatrix<f64>) -> f64 {
    0.5 * (q.transpose() * a * q).trace()
}

/// `|Q^T Q - I|` in the max norm.
pub fn stiefel_residual(q: &DMatrix<f64>) -> f64 {
    let k = q.ncols();
    (q.transpose() * q - DMatrix::<f64>::identity(k, k)).amax()
}

/// Algebra element `xi = A Q Q^T - Q Q^T A`, so that `xi Q` is the Riemannian gradient.
pub fn pca_generator(a: &DMatrix<f64>, q: &DMatrix<f64>) -> MatrixAlgebraElement {
    let p = q * q.transpose();
    MatrixAlgebraElement {
        mat: a * &p - &p * a,
        kind: MatrixKind::So(a.nrows()),
    }
}

/// `so(n)` element `M - M^T`, `M = (I - QQ^T/2) V Q^T`, with `xi Q = V`
/// whenever `Q^T V` is skew.
pub fn tangent_to_algebra(q: &DMatrix<f64>, v: &DMatrix<f64>) -> MatrixAlgebraElement {
    let n = q.nrows();
    let m = (DMatrix::<f64>::identity(n, n) - q * q.transpose() * 0.5) * v * q.transpose();
    MatrixAlgebraElement {
        mat: &m - m.transpose(),
        kind: MatrixKind::So(n),
    }
}

/// Skew matrix built from the strictly lower part of `Q^T A Q`.
pub fn lyapunov_s(qaq: &DMatrix<f64>) -> DMatrix<f64> {
    let k = qaq.nrows();
    DMatrix::from_fn(k, k, |i, j| {
        if i > j {
            qaq[(i, j)]
        } else if i < j {
            -qaq[(j, i)]
        } else {
            0.0
        }
    })
}

/// Right-hand side `(A - QQ^T A + Q S Q^T) Q` as an `so(n)` element.
pub fn lyapunov_generator(a: &DMatrix<f64>, q: &DMatrix<f64>) -> MatrixAlgebraElement {
    let aq = a * q;
    let qaq = q.transpose() * &aq;
    let s = lyapunov_s(&qaq);
    let v = &aq - q * &qaq + q * s;
    tangent_to_algebra(q, &v)
}

pub fn pca_problem(a: DMatrix<f64>) -> FrozenFieldProblem<StiefelAction> {
    let n = a.nrows();
    let a2 = a.clone();
    FrozenFieldProblem::new(StiefelAction { n }, move |q: &DMatrix<f64>| pca_generator(&a, q))
        .with_invariant("objective", move |q| pca_objective(&a2, q))
        .with_invariant("orthogonality", stiefel_residual)
}

pub fn lyapunov_problem(a: DMatrix<f64>) -> FrozenFieldProblem<StiefelAction> {
    let n = a.nrows();
    FrozenFieldProblem::new(StiefelAction { n }, move |q: &DMatrix<f64>| lyapunov_generator(&a, q))
        .with_invariant("orthogonality", stiefel_residual)
}

/// Integrates the PCA ascent flow with Lie-Euler; returns the final frame and objective.
pub fn stiefel_pca_flow(
    problem: &StiefelFlowProblem,
    q0: &DMatrix<f64>,
    h: f64,
    n_steps: usize,
) -> Result<(DMatrix<f64>, f64)> {
    stiefel_pca_flow_with(problem, q0, h, n_steps, &Scheme::LieEuler)
}

pub fn stiefel_pca_flow_with(
    problem: &StiefelFlowProblem,
    q0: &DMatrix<f64>,
    h: f64,
    n_steps: usize,
    scheme: &Scheme,
) -> Result<(DMatrix<f64>, f64)> {
    check_frame(q0, problem.n(), problem.k)?;
    let p = pca_problem(problem.a.clone());
    let q = propagate(&p, scheme, q0, h, n_steps)?;
    let obj = pca_objective(&problem.a, &q);
    Ok((q, obj))
}

fn check_frame(q0: &DMatrix<f64>, n: usize, k: usize) -> Result<()> {
    if q0.nrows() != n || q0.ncols() != k {
        return Err(Error::InvalidInput(format!(
            "initial frame is {}x{}, expected {n}x{k}",
            q0.nrows(),
            q0.ncols()
        )));
    }
    if stiefel_residual(q0) > 1e-10 {
        return Err(Error::InvalidInput("initial frame is not orthonormal".into()));
    }
    Ok(())
}

/// `diag(Q^T A Q - S)`.
fn b_diagonal(a: &DMatrix<f64>, q: &DMatrix<f64>) -> DVector<f64> {
    (q.transpose() * a * q).diagonal()
}

/// Estimates the `k` leading Lyapunov exponents of `x' = A(t) x` over `[0, t_end]`.
///
/// The frame is advanced with the commutator-free fourth order scheme and
/// `diag(B)` is averaged with the trapezoidal rule starting at `t = 0`.
pub fn lyapunov_exponents(
    a_path: &dyn Fn(f64) -> DMatrix<f64>,
    q0: &DMatrix<f64>,
    h: f64,
    t_end: f64,
) -> Result<DVector<f64>> {
    let n = q0.nrows();
    let k = q0.ncols();
    check_frame(q0, n, k)?;
    if !(h > 0.0) || !(t_end > 0.0) {
        return Err(Error::InvalidInput("h and T must be positive".into()));
    }
    let steps = (t_end / h).round() as usize;
    if steps == 0 {
        return Err(Error::InvalidInput("T must be at least one step".into()));
    }
    let action = StiefelAction { n };
    let f = |t: f64, q: &DMatrix<f64>| lyapunov_generator(&a_path(t), q);
    let mut q = q0.clone();
    let mut t = 0.0;
    // diagonal of S vanishes, so diag(B) = diag(Q^T A Q)
    let mut prev = b_diagonal(&a_path(0.0), &q);
    let mut integral = DVector::zeros(k);
    for n_step in 1..=steps {
        let k1 = f(t, &q).scale(h);
        let y2 = action.exp_act(&k1.scale(0.5), &q);
        let k2 = f(t + 0.5 * h, &y2).scale(h);
        let y3 = action.exp_act(&k2.scale(0.5), &q);
        let k3 = f(t + 0.5 * h, &y3).scale(h);
        let y4 = action.exp_act(&k3.axpy(-0.5, &k1), &y2);
        let k4 = f(t + h, &y4).scale(h);
        let half = k1.scale(3.0).axpy(2.0, &k2).axpy(2.0, &k3).axpy(-1.0, &k4).scale(1.0 / 12.0);
        let rest = k1.scale(-1.0).axpy(2.0, &k2).axpy(2.0, &k3).axpy(3.0, &k4).scale(1.0 / 12.0);
        q = action.exp_act(&rest, &action.exp_act(&half, &q));
        t = n_step as f64 * h;
        if !q.iter().all(|v| v.is_finite()) {
            return Err(Error::Diverged { t });
        }
        let cur = b_diagonal(&a_path(t), &q);
        integral += (&prev + &cur) * (0.5 * h);
        prev = cur;
    }
    Ok(integral / t)
}
