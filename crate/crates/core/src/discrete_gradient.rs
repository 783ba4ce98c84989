//! Trivialized discrete differentials and the integral-preserving Lie group
//! method built from them.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::error::{Error, Result};
use crate::lie::{euler_rodrigues, quat_conj, Covector, LieAlgebra, LieGroup, LogMap, PureQuaternion, UnitQuaternion};
use crate::solver::{solve_fixed_point, SolverOptions};

type GroupFn<G, T> = Box<dyn Fn(&G) -> T + Send + Sync>;

/// Right-trivialized ODE `x' = F(x) x` with first integral `H`.
///
/// The algebra carries the Euclidean inner product of its coordinates.
pub struct FirstIntegralProblem<G: LieGroup> {
    pub hamiltonian: GroupFn<G, f64>,
    pub field: GroupFn<G, G::Algebra>,
    /// Closed-form `R_x^* dH_x`; central differences are used when absent.
    pub differential: Option<GroupFn<G, Covector>>,
}

impl<G: LieGroup> FirstIntegralProblem<G> {
    pub fn new(
        hamiltonian: impl Fn(&G) -> f64 + Send + Sync + 'static,
        field: impl Fn(&G) -> G::Algebra + Send + Sync + 'static,
    ) -> Self {
        FirstIntegralProblem {
            hamiltonian: Box::new(hamiltonian),
            field: Box::new(field),
            differential: None,
        }
    }

    pub fn with_differential(mut self, d: impl Fn(&G) -> Covector + Send + Sync + 'static) -> Self {
        self.differential = Some(Box::new(d));
        self
    }

    pub fn energy(&self, x: &G) -> f64 {
        (self.hamiltonian)(x)
    }

    pub fn f(&self, x: &G) -> G::Algebra {
        (self.field)(x)
    }
}

/// `<mu, xi> = d/dt H(exp(t xi) x)` at `t = 0`.
pub fn trivialized_differential<G: LieGroup>(p: &FirstIntegralProblem<G>, x: &G) -> Covector {
    if let Some(d) = &p.differential {
        return d(x);
    }
    let t = 1e-5;
    let basis = x.algebra_zero().basis();
    let v: Vec<f64> = basis
        .iter()
        .map(|e| {
            let fp = p.energy(&G::exp(&e.scale(t)).mul(x));
            let fm = p.energy(&G::exp(&e.scale(-t)).mul(x));
            (fp - fm) / (2.0 * t)
        })
        .collect();
    Covector::from_slice(&v)
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

fn avf_from_eta<G: LieGroup>(p: &FirstIntegralProblem<G>, x: &G, eta: &G::Algebra, nodes: usize) -> Covector {
    let (s, w) = gauss_legendre(nodes);
    let mut acc = Covector::zeros(eta.dim());
    for (sk, wk) in s.iter().zip(w.iter()) {
        let xk = G::exp(&eta.scale(*sk)).mul(x);
        acc = &acc + &(&trivialized_differential(p, &xk) * *wk);
    }
    acc
}

/// Average vector field TDD along `exp(s eta) x`, `eta = log(x' x^{-1})`.
pub fn tdd_avf<G: LogMap>(p: &FirstIntegralProblem<G>, x: &G, x_new: &G, nodes: usize) -> Result<Covector> {
    let eta = x_new.mul(&x.inverse()).log()?;
    Ok(avf_from_eta(p, x, &eta, nodes))
}

/// Gonzalez-type TDD for `x' = exp(eta) x`; falls back to the trivialized
/// differential for `|eta| < 1e-10`.
pub fn tdd_gonzalez_eta<G: LieGroup>(p: &FirstIntegralProblem<G>, x: &G, eta: &G::Algebra) -> Covector {
    let n2 = eta.coords().norm_squared();
    if n2.sqrt() < 1e-10 {
        return trivialized_differential(p, x);
    }
    let xbar = G::exp(&eta.scale(0.5)).mul(x);
    let x_new = G::exp(eta).mul(x);
    let d = trivialized_differential(p, &xbar);
    let c = (p.energy(&x_new) - p.energy(x) - d.pair(eta)) / n2;
    &d + &Covector(eta.coords() * c)
}

/// Gonzalez-type TDD: midpoint differential plus a correction along `eta`.
pub fn tdd_gonzalez<G: LogMap>(p: &FirstIntegralProblem<G>, x: &G, x_new: &G) -> Result<Covector> {
    let eta = x_new.mul(&x.inverse()).log()?;
    if eta.norm() < 1e-10 {
        return Err(Error::CoincidentPoints);
    }
    Ok(tdd_gonzalez_eta(p, x, &eta))
}

/// `(xi g^T - g xi^T) / |g|^2` for field `xi` and gradient `g`.
pub fn two_form(xi: &DVector<f64>, grad: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n2 = grad.norm_squared();
    if n2.sqrt() < 1e-12 {
        return Err(Error::CriticalPoint { norm: n2.sqrt() });
    }
    Ok((xi * grad.transpose() - grad * xi.transpose()) / n2)
}

/// Two-form at `(x, x)` whose contraction with the differential is `F(x)`.
pub fn two_form_from_field<G: LieGroup>(p: &FirstIntegralProblem<G>, x: &G) -> Result<DMatrix<f64>> {
    two_form(&p.f(x).coords(), &trivialized_differential(p, x).0)
}

/// Embeds a 3x3 two-form on pure quaternions into the 4x4 quaternion representation.
pub fn embed_quaternion_two_form(w: &DMatrix<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(4, 4);
    m.view_mut((1, 1), (3, 3)).copy_from(w);
    m
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TddKind {
    Gonzalez,
    Avf { nodes: usize },
}

impl TddKind {
    pub fn by_name(name: &str, nodes: usize) -> Result<Self> {
        match name {
            "gonzalez" => Ok(TddKind::Gonzalez),
            "avf" => Ok(TddKind::Avf { nodes }),
            _ => Err(Error::InvalidInput(format!("unknown discrete differential '{name}'"))),
        }
    }
}

/// Solver settings for `dg_step`.
pub fn dg_solver() -> SolverOptions {
    SolverOptions::picard(1e-12, 100)
}

/// `x' = exp(h i_{dH(x, x')} w(x, x')) x`, with `w` frozen at the midpoint when `midpoint_form`.
pub fn dg_step<G: LieGroup>(
    p: &FirstIntegralProblem<G>,
    x: &G,
    h: f64,
    kind: TddKind,
    midpoint_form: bool,
    solver: &SolverOptions,
) -> Result<G> {
    if !(h.is_finite() && h != 0.0) {
        return Err(Error::InvalidInput(format!("step size must be finite and nonzero, got {h}")));
    }
    let zero = x.algebra_zero();
    let w_fixed = if midpoint_form { None } else { Some(two_form_from_field(p, x)?) };
    let map = |v: &DVector<f64>| -> Result<DVector<f64>> {
        let eta = zero.with_coords(v.as_slice());
        let dh = match kind {
            TddKind::Gonzalez => tdd_gonzalez_eta(p, x, &eta),
            TddKind::Avf { nodes } => avf_from_eta(p, x, &eta, nodes),
        };
        let w = match &w_fixed {
            Some(w) => w.clone(),
            None => two_form_from_field(p, &G::exp(&eta.scale(0.5)).mul(x))?,
        };
        Ok(w * dh.0 * h)
    };
    let eta0 = p.f(x).coords() * h;
    let sol = solve_fixed_point(map, eta0, solver, h)?;
    Ok(G::exp(&zero.with_coords(sol.x.as_slice())).mul(x))
}

/// Quaternion attitude equations of the free rigid body.
///
/// `q' = f(q) q` with `f(q) = q v q_c`, `v = 1/2 I^{-1} E(q_c) m0`, and energy
/// `H(q) = 1/2 m^T I^{-1} m` for the body momentum `m = E(q_c) m0`.
pub fn frb_quaternion_problem(inertia: Vector3<f64>, m0: Vector3<f64>) -> Result<FirstIntegralProblem<UnitQuaternion>> {
    if inertia.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidInput("inertia entries must be positive".into()));
    }
    let inv = inertia.map(|v| 1.0 / v);
    let body = move |q: &UnitQuaternion| euler_rodrigues(&quat_conj(q)).0 * m0;
    Ok(FirstIntegralProblem::new(
        move |q: &UnitQuaternion| {
            let m = body(q);
            0.5 * m.dot(&inv.component_mul(&m))
        },
        move |q: &UnitQuaternion| {
            let v = inv.component_mul(&body(q)) * 0.5;
            PureQuaternion(euler_rodrigues(q).0 * v)
        },
    )
    .with_differential(move |q: &UnitQuaternion| {
        let w = euler_rodrigues(q).0 * inv.component_mul(&body(q));
        Covector::from_slice((w.cross(&m0) * 2.0).as_slice())
    }))
}

/// Body momentum `E(q_c) m0`.
pub fn body_momentum(q: &UnitQuaternion, m0: &Vector3<f64>) -> Vector3<f64> {
    euler_rodrigues(&quat_conj(q)).0 * m0
}

/// Moments of inertia and `I m0` used for the quaternion rigid body runs.
pub fn frb_reference_parameters() -> (Vector3<f64>, Vector3<f64>) {
    let inertia = Vector3::new(1.0, 5.0, 60.0);
    let im0 = Vector3::new(1.0, 0.5, -1.0);
    (inertia, im0.component_div(&inertia))
}
