//! Lie group time steppers: Lie-Euler, Heun variants, RKMK, the corrected
//! fourth order RKMK and the commutator-free CF4 scheme.

use nalgebra::{DMatrix, DVector};

use crate::actions::{FrozenFieldProblem, GroupAction, ManifoldPoint};
use crate::diagnostics::linear_fit;
use crate::error::{Error, Result};
use crate::lie::{affine_exp, dexpinv_series, LieAlgebra, So3Vector};
use crate::solver::{solve_fixed_point, SolverOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct ButcherTableau {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
}

impl ButcherTableau {
    /// Builds a tableau with `c_i = sum_j a_ij`, checking `sum b = 1`.
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        let s = b.len();
        if a.nrows() != s || a.ncols() != s {
            return Err(Error::InvalidInput(format!(
                "tableau a is {}x{}, b has {} entries",
                a.nrows(),
                a.ncols(),
                s
            )));
        }
        if (b.sum() - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidInput(format!("weights sum to {}", b.sum())));
        }
        let c = DVector::from_iterator(s, a.row_iter().map(|r| r.sum()));
        Ok(ButcherTableau { a, b, c })
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn is_explicit(&self) -> bool {
        (0..self.stages()).all(|i| (i..self.stages()).all(|j| self.a[(i, j)] == 0.0))
    }

    pub fn euler() -> Self {
        Self::new(DMatrix::zeros(1, 1), DVector::from_element(1, 1.0)).unwrap()
    }

    pub fn heun() -> Self {
        Self::new(
            DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]),
            DVector::from_column_slice(&[0.5, 0.5]),
        )
        .unwrap()
    }

    pub fn midpoint() -> Self {
        Self::new(
            DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.5, 0.0]),
            DVector::from_column_slice(&[0.0, 1.0]),
        )
        .unwrap()
    }

    /// The classical fourth order method of Kutta.
    pub fn kutta() -> Self {
        Self::new(
            DMatrix::from_row_slice(
                4,
                4,
                &[
                    0.0, 0.0, 0.0, 0.0, //
                    0.5, 0.0, 0.0, 0.0, //
                    0.0, 0.5, 0.0, 0.0, //
                    0.0, 0.0, 1.0, 0.0,
                ],
            ),
            DVector::from_column_slice(&[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0]),
        )
        .unwrap()
    }

    /// One-stage theta method: `a = [[theta]]`, `b = [1]`.
    pub fn theta(theta: f64) -> Self {
        Self::new(DMatrix::from_element(1, 1, theta), DVector::from_element(1, 1.0)).unwrap()
    }

    /// Two-stage Gauss-Legendre collocation, order 4.
    pub fn gauss2() -> Self {
        let r = 3f64.sqrt() / 6.0;
        Self::new(
            DMatrix::from_row_slice(2, 2, &[0.25, 0.25 - r, 0.25 + r, 0.25]),
            DVector::from_column_slice(&[0.5, 0.5]),
        )
        .unwrap()
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "euler" => Ok(Self::euler()),
            "heun" => Ok(Self::heun()),
            "midpoint" => Ok(Self::midpoint()),
            "kutta" | "rk4" => Ok(Self::kutta()),
            "gauss2" => Ok(Self::gauss2()),
            _ => Err(Error::InvalidInput(format!("unknown tableau '{name}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeunVariant {
    /// `exp(h/2 (k1 + k2)) y`
    Rkmk,
    /// `exp(h/2 k1) exp(h/2 k2) y`
    CgLeft,
    /// `exp(h/2 k2) exp(h/2 k1) y`
    CgRight,
}

fn check_step(h: f64) -> Result<()> {
    if h.is_finite() && h != 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("step size must be finite and nonzero, got {h}")))
    }
}

/// `y1 = exp(h f(y)) y`.
pub fn lie_euler_step<A: GroupAction>(p: &FrozenFieldProblem<A>, y: &A::Point, h: f64) -> Result<A::Point> {
    check_step(h)?;
    Ok(p.action.exp_act(&p.coefficients(y).scale(h), y))
}

/// Lie-Euler on `S^2` with the coefficient shifted along the isotropy direction.
pub fn lie_euler_isotropy_step<A>(
    p: &FrozenFieldProblem<A>,
    y: &nalgebra::Vector3<f64>,
    h: f64,
    alpha: f64,
) -> Result<nalgebra::Vector3<f64>>
where
    A: GroupAction<Algebra = So3Vector, Point = nalgebra::Vector3<f64>>,
{
    check_step(h)?;
    let xi = So3Vector(p.coefficients(y).0 + y * alpha);
    Ok(p.action.exp_act(&xi.scale(h), y))
}

pub fn heun_step<A: GroupAction>(
    p: &FrozenFieldProblem<A>,
    y: &A::Point,
    h: f64,
    variant: HeunVariant,
) -> Result<A::Point> {
    check_step(h)?;
    let act = &p.action;
    let k1 = p.coefficients(y);
    let k2 = p.coefficients(&act.exp_act(&k1.scale(h), y));
    Ok(match variant {
        HeunVariant::Rkmk => act.exp_act(&k1.axpy(1.0, &k2).scale(0.5 * h), y),
        HeunVariant::CgLeft => act.exp_act(&k1.scale(0.5 * h), &act.exp_act(&k2.scale(0.5 * h), y)),
        HeunVariant::CgRight => act.exp_act(&k2.scale(0.5 * h), &act.exp_act(&k1.scale(0.5 * h), y)),
    })
}

fn combine<A: LieAlgebra>(coeffs: impl Iterator<Item = f64>, ks: &[A], zero: &A) -> A {
    coeffs
        .zip(ks.iter())
        .fold(zero.clone(), |acc, (c, k)| if c == 0.0 { acc } else { acc.axpy(c, k) })
}

/// Runge-Kutta-Munthe-Kaas step with the dexpinv series truncated at `series_order`.
///
/// Implicit tableaus are solved for the stage vector with `solver`.
pub fn rkmk_step<A: GroupAction>(
    p: &FrozenFieldProblem<A>,
    y: &A::Point,
    h: f64,
    tableau: &ButcherTableau,
    series_order: usize,
    solver: &SolverOptions,
) -> Result<A::Point> {
    check_step(h)?;
    let s = tableau.stages();
    let f0 = p.coefficients(y);
    let zero = f0.zero_like();
    let stage = |i: usize, ks: &[A::Algebra]| -> Result<A::Algebra> {
        let u = combine(tableau.a.row(i).iter().map(|a| a * h), ks, &zero);
        let fi = p.coefficients(&p.action.exp_act(&u, y));
        dexpinv_series(&u, &fi, series_order)
    };
    let ks: Vec<A::Algebra> = if tableau.is_explicit() {
        let mut ks: Vec<A::Algebra> = Vec::with_capacity(s);
        for i in 0..s {
            let k = stage(i, &ks)?;
            ks.push(k);
        }
        ks
    } else {
        let d = f0.dim();
        let unpack = |x: &DVector<f64>| -> Vec<A::Algebra> {
            (0..s).map(|i| f0.with_coords(&x.as_slice()[i * d..(i + 1) * d])).collect()
        };
        let x0 = DVector::from_iterator(s * d, (0..s).flat_map(|_| f0.coords().iter().copied().collect::<Vec<_>>()));
        let sol = solve_fixed_point(
            |x| {
                let ks = unpack(x);
                let mut out = Vec::with_capacity(s * d);
                for i in 0..s {
                    out.extend(stage(i, &ks)?.coords().iter());
                }
                Ok(DVector::from_vec(out))
            },
            x0,
            solver,
            h,
        )?;
        unpack(&sol.x)
    };
    let v = combine(tableau.b.iter().map(|b| b * h), &ks, &zero);
    Ok(p.action.exp_act(&v, y))
}

/// Fourth order RKMK with the commutator corrections in place of dexpinv.
pub fn rkmk4_step<A: GroupAction>(p: &FrozenFieldProblem<A>, y: &A::Point, h: f64) -> Result<A::Point> {
    check_step(h)?;
    let act = &p.action;
    let k1 = p.coefficients(y).scale(h);
    let k2 = p.coefficients(&act.exp_act(&k1.scale(0.5), y)).scale(h);
    let c12 = k1.bracket(&k2)?;
    let k3 = p.coefficients(&act.exp_act(&k2.scale(0.5).axpy(-0.125, &c12), y)).scale(h);
    let k4 = p.coefficients(&act.exp_act(&k3, y)).scale(h);
    let c14 = k1.bracket(&k4)?;
    let v = k1
        .axpy(2.0, &k2)
        .axpy(2.0, &k3)
        .axpy(1.0, &k4)
        .axpy(-0.5, &c14)
        .scale(1.0 / 6.0);
    Ok(act.exp_act(&v, y))
}

/// Commutator-free fourth order scheme with five exponentials per step.
pub fn cf4_step<A: GroupAction>(p: &FrozenFieldProblem<A>, y: &A::Point, h: f64) -> Result<A::Point> {
    check_step(h)?;
    let act = &p.action;
    let k1 = p.coefficients(y).scale(h);
    let y2 = act.exp_act(&k1.scale(0.5), y);
    let k2 = p.coefficients(&y2).scale(h);
    let y3 = act.exp_act(&k2.scale(0.5), y);
    let k3 = p.coefficients(&y3).scale(h);
    let y4 = act.exp_act(&k3.axpy(-0.5, &k1), &y2);
    let k4 = p.coefficients(&y4).scale(h);
    let half = k1
        .scale(3.0)
        .axpy(2.0, &k2)
        .axpy(2.0, &k3)
        .axpy(-1.0, &k4)
        .scale(1.0 / 12.0);
    let y_half = act.exp_act(&half, y);
    let rest = k1
        .scale(-1.0)
        .axpy(2.0, &k2)
        .axpy(2.0, &k3)
        .axpy(3.0, &k4)
        .scale(1.0 / 12.0);
    Ok(act.exp_act(&rest, &y_half))
}

/// `u1 = exp(hL) u + h phi(hL) N(u)`, computed through the affine exponential.
pub fn exponential_euler_step(
    l: &DMatrix<f64>,
    n: impl Fn(&DVector<f64>) -> DVector<f64>,
    u: &DVector<f64>,
    h: f64,
) -> DVector<f64> {
    affine_exp(h, l, &n(u)).apply(u)
}

/// Explicit and implicit Lie group schemes driven by a frozen-field problem.
#[derive(Clone, Debug, PartialEq)]
pub enum Scheme {
    LieEuler,
    Heun(HeunVariant),
    Rkmk {
        tableau: ButcherTableau,
        series_order: usize,
        solver: SolverOptions,
    },
    Rkmk4,
    Cf4,
}

impl Scheme {
    pub fn rkmk(tableau: ButcherTableau, series_order: usize) -> Self {
        Scheme::Rkmk {
            tableau,
            series_order,
            solver: SolverOptions::default(),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "lie_euler" => Ok(Scheme::LieEuler),
            "heun_rkmk" => Ok(Scheme::Heun(HeunVariant::Rkmk)),
            "heun_cg_left" => Ok(Scheme::Heun(HeunVariant::CgLeft)),
            "heun_cg_right" => Ok(Scheme::Heun(HeunVariant::CgRight)),
            "rkmk" => Ok(Scheme::rkmk(ButcherTableau::kutta(), 4)),
            "rkmk4" => Ok(Scheme::Rkmk4),
            "cf4" => Ok(Scheme::Cf4),
            _ => Err(Error::InvalidInput(format!("unknown scheme '{name}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::LieEuler => "lie_euler",
            Scheme::Heun(HeunVariant::Rkmk) => "heun_rkmk",
            Scheme::Heun(HeunVariant::CgLeft) => "heun_cg_left",
            Scheme::Heun(HeunVariant::CgRight) => "heun_cg_right",
            Scheme::Rkmk { .. } => "rkmk",
            Scheme::Rkmk4 => "rkmk4",
            Scheme::Cf4 => "cf4",
        }
    }

    pub fn step<A: GroupAction>(&self, p: &FrozenFieldProblem<A>, y: &A::Point, h: f64) -> Result<A::Point> {
        match self {
            Scheme::LieEuler => lie_euler_step(p, y, h),
            Scheme::Heun(v) => heun_step(p, y, h, *v),
            Scheme::Rkmk {
                tableau,
                series_order,
                solver,
            } => rkmk_step(p, y, h, tableau, *series_order, solver),
            Scheme::Rkmk4 => rkmk4_step(p, y, h),
            Scheme::Cf4 => cf4_step(p, y, h),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StepRecord<P> {
    pub t: f64,
    pub state: P,
    pub invariants: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Trajectory<P> {
    pub invariant_names: Vec<String>,
    pub records: Vec<StepRecord<P>>,
}

impl<P: ManifoldPoint> Trajectory<P> {
    pub fn last(&self) -> &StepRecord<P> {
        self.records.last().expect("trajectory holds the initial record")
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    /// Values of invariant `i` along the trajectory.
    pub fn invariant_series(&self, i: usize) -> Vec<f64> {
        self.records.iter().map(|r| r.invariants[i]).collect()
    }
}

/// Runs `n_steps` of `step` from `y0`, recording invariants after every step.
pub fn run_steps<P, S, I>(
    y0: &P,
    h: f64,
    n_steps: usize,
    invariant_names: Vec<String>,
    invariants: I,
    mut step: S,
) -> Result<Trajectory<P>>
where
    P: ManifoldPoint,
    S: FnMut(&P) -> Result<P>,
    I: Fn(&P) -> Vec<f64>,
{
    let mut records = Vec::with_capacity(n_steps + 1);
    records.push(StepRecord {
        t: 0.0,
        state: y0.clone(),
        invariants: invariants(y0),
    });
    let mut y = y0.clone();
    for n in 1..=n_steps {
        y = step(&y)?;
        let t = n as f64 * h;
        if !y.coords().iter().all(|v| v.is_finite()) {
            return Err(Error::Diverged { t });
        }
        records.push(StepRecord {
            t,
            state: y.clone(),
            invariants: invariants(&y),
        });
    }
    Ok(Trajectory {
        invariant_names,
        records,
    })
}

pub fn integrate<A: GroupAction>(
    p: &FrozenFieldProblem<A>,
    scheme: &Scheme,
    y0: &A::Point,
    h: f64,
    n_steps: usize,
) -> Result<Trajectory<A::Point>> {
    run_steps(
        y0,
        h,
        n_steps,
        p.invariant_names(),
        |y| p.invariant_values(y),
        |y| scheme.step(p, y, h),
    )
}

/// Final state after `n` steps, without recording a trajectory.
pub fn propagate<A: GroupAction>(
    p: &FrozenFieldProblem<A>,
    scheme: &Scheme,
    y0: &A::Point,
    h: f64,
    n: usize,
) -> Result<A::Point> {
    let mut y = y0.clone();
    for _ in 0..n {
        y = scheme.step(p, &y, h)?;
    }
    Ok(y)
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub scheme: String,
    pub h: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `log(error)` against `log(h)`.
    pub slope: f64,
}

fn steps_for(t_end: f64, h: f64) -> Result<usize> {
    let n = (t_end / h).round();
    if n < 1.0 || ((n * h - t_end).abs() > 1e-9 * t_end.abs().max(1.0)) {
        return Err(Error::InvalidInput(format!("T = {t_end} is not a multiple of h = {h}")));
    }
    Ok(n as usize)
}

/// Global error at `t_end` for each step size, against an RKMK4 reference at `h_min / 20`.
pub fn convergence_study<A: GroupAction>(
    p: &FrozenFieldProblem<A>,
    scheme: &Scheme,
    y0: &A::Point,
    t_end: f64,
    h_list: &[f64],
) -> Result<ConvergenceReport> {
    if h_list.len() < 2 {
        return Err(Error::InvalidInput("need at least two step sizes".into()));
    }
    if h_list.windows(2).any(|w| w[1] >= w[0]) || h_list.iter().any(|h| *h <= 0.0) {
        return Err(Error::InvalidInput("step sizes must be positive and decreasing".into()));
    }
    let h_ref = h_list[h_list.len() - 1] / 20.0;
    let reference = propagate(p, &Scheme::Rkmk4, y0, h_ref, steps_for(t_end, h_ref)?)?.coords();
    let mut errors = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let y = propagate(p, scheme, y0, h, steps_for(t_end, h)?)?;
        let e = (y.coords() - &reference).norm();
        if !e.is_finite() {
            return Err(Error::Diverged { t: t_end });
        }
        errors.push(e);
    }
    let lx: Vec<f64> = h_list.iter().map(|h| h.ln()).collect();
    let ly: Vec<f64> = errors.iter().map(|e| e.max(f64::MIN_POSITIVE).ln()).collect();
    let (slope, _) = linear_fit(&lx, &ly);
    Ok(ConvergenceReport {
        scheme: scheme.name().to_string(),
        h: h_list.to_vec(),
        errors,
        slope,
    })
}
