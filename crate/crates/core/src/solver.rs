//! Fixed-point solver shared by the implicit schemes.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverMethod {
    /// Plain iteration `x <- g(x)`.
    Picard,
    /// Newton's method on `x - g(x)` with a forward-difference Jacobian.
    Newton,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub method: SolverMethod,
    /// Stop when the update is below `tol * max(1, |x|_inf)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: SolverMethod::Picard,
            tol: 1e-12,
            max_iter: 100,
        }
    }
}

impl SolverOptions {
    pub fn picard(tol: f64, max_iter: usize) -> Self {
        SolverOptions {
            method: SolverMethod::Picard,
            tol,
            max_iter,
        }
    }

    pub fn newton(tol: f64, max_iter: usize) -> Self {
        SolverOptions {
            method: SolverMethod::Newton,
            tol,
            max_iter,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub x: DVector<f64>,
    pub iterations: usize,
    /// Size of the last update.
    pub residual: f64,
}

/// Solves `x = g(x)` starting from `x0`. `h` is only used for error reports.
pub fn solve_fixed_point<F>(mut g: F, x0: DVector<f64>, opts: &SolverOptions, h: f64) -> Result<FixedPoint>
where
    F: FnMut(&DVector<f64>) -> Result<DVector<f64>>,
{
    let mut x = x0;
    let mut last = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let gx = g(&x)?;
        let r = &gx - &x;
        let step = match opts.method {
            SolverMethod::Picard => r,
            SolverMethod::Newton => newton_update(&mut g, &x, &gx, &r)?,
        };
        let size = step.amax();
        if !size.is_finite() {
            return Err(Error::FixedPointDivergence {
                h,
                residual: size,
                iterations: it,
            });
        }
        x += &step;
        last = size;
        if size <= opts.tol * x.amax().max(1.0) {
            return Ok(FixedPoint {
                x,
                iterations: it,
                residual: size,
            });
        }
    }
    Err(Error::FixedPointDivergence {
        h,
        residual: last,
        iterations: opts.max_iter,
    })
}

fn newton_update<F>(g: &mut F, x: &DVector<f64>, gx: &DVector<f64>, r: &DVector<f64>) -> Result<DVector<f64>>
where
    F: FnMut(&DVector<f64>) -> Result<DVector<f64>>,
{
    let n = x.len();
    let scale = x.amax().max(1e-3);
    let mut jac = DMatrix::<f64>::identity(n, n);
    let mut xp = x.clone();
    for j in 0..n {
        let d = 1.5e-8 * x[j].abs().max(scale);
        xp[j] = x[j] + d;
        let col = (g(&xp)? - gx) / d;
        xp[j] = x[j];
        for i in 0..n {
            jac[(i, j)] -= col[i];
        }
    }
    // (I - Dg) dx = g(x) - x
    match jac.lu().solve(r) {
        Some(dx) if dx.iter().all(|v| v.is_finite()) => Ok(dx),
        _ => Ok(r.clone()),
    }
}
