//! Symplectic Lie group integrators on the semidirect product `G x| g*`.
//!
//! States are pairs `(g, mu)` with `mu` the right-trivialized momentum. The
//! Hamiltonian vector field is `(xi, nu) = (dH/dmu, -R_g^* dH/dg)`, acting by
//! left multiplication in the semidirect group.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::actions::{FrozenFieldProblem, LeftMultiplication, ManifoldPoint};
use crate::error::{Error, Result};
use crate::lie::{
    dexpinv_series, semidirect_exp, semidirect_mul, Covector, LieAlgebra, LieGroup,
    RotationMatrix, SemidirectAlgebraElement, SemidirectGroupElement, So3Vector,
};
use crate::solver::{solve_fixed_point, SolverOptions};

type Field<G> = Box<
    dyn Fn(&G, &Covector) -> SemidirectAlgebraElement<<G as LieGroup>::Algebra> + Send + Sync,
>;

pub struct TrivializedHamiltonianProblem<G: LieGroup> {
    pub hamiltonian: Box<dyn Fn(&G, &Covector) -> f64 + Send + Sync>,
    /// `(f1, f2) = (dH/dmu, -R_g^* dH/dg)`.
    pub field: Field<G>,
}

impl<G: LieGroup> TrivializedHamiltonianProblem<G> {
    pub fn new(
        hamiltonian: impl Fn(&G, &Covector) -> f64 + Send + Sync + 'static,
        field: impl Fn(&G, &Covector) -> SemidirectAlgebraElement<G::Algebra> + Send + Sync + 'static,
    ) -> Self {
        TrivializedHamiltonianProblem {
            hamiltonian: Box::new(hamiltonian),
            field: Box::new(field),
        }
    }

    pub fn energy(&self, x: &SemidirectGroupElement<G>) -> f64 {
        (self.hamiltonian)(&x.g, &x.mu)
    }

    pub fn f(&self, g: &G, mu: &Covector) -> SemidirectAlgebraElement<G::Algebra> {
        (self.field)(g, mu)
    }
}

impl<G> TrivializedHamiltonianProblem<G>
where
    G: LieGroup + Send + Sync + 'static,
    G::Algebra: Send + Sync,
    SemidirectGroupElement<G>: ManifoldPoint,
{
    /// The same vector field as a frozen-field problem under left multiplication.
    pub fn into_frozen_field(self) -> FrozenFieldProblem<LeftMultiplication<SemidirectGroupElement<G>>> {
        let ham = self.hamiltonian;
        let field = self.field;
        FrozenFieldProblem::new(LeftMultiplication::new(), move |x: &SemidirectGroupElement<G>| {
            field(&x.g, &x.mu)
        })
        .with_invariant("energy", move |x| ham(&x.g, &x.mu))
    }
}

/// Coefficients `(a, b)` of the SLGI family; requires `sum b = 1` and `b_i != 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlgiCoefficients {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
}

impl SlgiCoefficients {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        let s = b.len();
        if s == 0 || a.nrows() != s || a.ncols() != s {
            return Err(Error::InvalidInput("coefficient shapes do not match".into()));
        }
        if (b.sum() - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidInput(format!("weights sum to {}", b.sum())));
        }
        if b.iter().any(|v| *v == 0.0) {
            return Err(Error::InvalidInput("all weights must be nonzero".into()));
        }
        Ok(SlgiCoefficients { a, b })
    }

    pub fn theta(theta: f64) -> Self {
        SlgiCoefficients {
            a: DMatrix::from_element(1, 1, theta),
            b: DVector::from_element(1, 1.0),
        }
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }
}

fn slice_cov(x: &DVector<f64>, start: usize, d: usize) -> Covector {
    Covector::from_slice(&x.as_slice()[start..start + d])
}

/// One step of the SLGI family, solving for the stage pairs `(xi_i, nbar_i)`.
pub fn slgi_step<G: LieGroup>(
    coeffs: &SlgiCoefficients,
    problem: &TrivializedHamiltonianProblem<G>,
    state: &SemidirectGroupElement<G>,
    h: f64,
    solver: &SolverOptions,
) -> Result<SemidirectGroupElement<G>> {
    check_h(h)?;
    let s = coeffs.stages();
    let (a, b) = (&coeffs.a, &coeffs.b);
    let g0 = &state.g;
    let mu0 = &state.mu;
    let zero = g0.algebra_zero();
    let d = zero.dim();

    let unpack = |x: &DVector<f64>| -> (Vec<G::Algebra>, Vec<Covector>) {
        let xis = (0..s).map(|i| zero.with_coords(&x.as_slice()[i * d..(i + 1) * d])).collect();
        let nbars = (0..s).map(|i| slice_cov(x, (s + i) * d, d)).collect();
        (xis, nbars)
    };
    let lin = |w: &mut dyn Iterator<Item = f64>, xis: &[G::Algebra]| -> G::Algebra {
        w.zip(xis).fold(zero.clone(), |acc, (c, x)| if c == 0.0 { acc } else { acc.axpy(c, x) })
    };

    // Shared pieces for a given stage vector.
    let stages = |x: &DVector<f64>| -> Result<(Vec<G::Algebra>, G::Algebra, Vec<Covector>)> {
        let (xis, nbars) = unpack(x);
        let big_x: Vec<G::Algebra> = (0..s).map(|i| lin(&mut a.row(i).iter().copied(), &xis)).collect();
        let y = lin(&mut b.iter().copied(), &xis);
        let ns: Vec<Covector> = (0..s).map(|i| G::exp(&big_x[i]).co_adjoint(&nbars[i])).collect();
        Ok((big_x, y, ns))
    };

    let map = |x: &DVector<f64>| -> Result<DVector<f64>> {
        let (big_x, y, ns) = stages(x)?;
        let my = y.scale(-1.0);
        let base = my.dual_dexp(mu0)?;
        let mut shared = base;
        for j in 0..s {
            shared = &shared + &(&my.dual_dexp(&ns[j])? * b[j]);
        }
        let mut out = vec![0.0; 2 * s * d];
        for i in 0..s {
            let mut m = shared.clone();
            for j in 0..s {
                let c = b[j] * a[(j, i)] / b[i];
                if c != 0.0 {
                    m = &m - &(&big_x[j].scale(-1.0).dual_dexp(&ns[j])? * c);
                }
            }
            let gi = G::exp(&big_x[i]).mul(g0);
            let fi = problem.f(&gi, &m);
            let xi = fi.xi.coords() * h;
            let nb = &fi.nu.0 * h;
            out[i * d..(i + 1) * d].copy_from_slice(xi.as_slice());
            out[(s + i) * d..(s + i + 1) * d].copy_from_slice(nb.as_slice());
        }
        Ok(DVector::from_vec(out))
    };

    let f0 = problem.f(g0, mu0);
    let mut x0 = DVector::zeros(2 * s * d);
    for i in 0..s {
        x0.rows_mut(i * d, d).copy_from(&(f0.xi.coords() * h));
        x0.rows_mut((s + i) * d, d).copy_from(&(&f0.nu.0 * h));
    }
    let sol = solve_fixed_point(map, x0, solver, h)?;
    let (_, y, ns) = stages(&sol.x)?;
    let mut nsum = Covector::zeros(d);
    for (j, n) in ns.iter().enumerate() {
        nsum = &nsum + &(n * b[j]);
    }
    let incr = SemidirectAlgebraElement::new(y.clone(), y.dual_dexpinv(&nsum)?);
    Ok(semidirect_mul(&semidirect_exp::<G>(&incr), state))
}

/// The one-stage family written directly in terms of `(xi, nbar)`.
pub fn theta_step<G: LieGroup>(
    theta: f64,
    problem: &TrivializedHamiltonianProblem<G>,
    state: &SemidirectGroupElement<G>,
    h: f64,
    solver: &SolverOptions,
) -> Result<SemidirectGroupElement<G>> {
    check_h(h)?;
    let g0 = &state.g;
    let mu0 = &state.mu;
    let zero = g0.algebra_zero();
    let d = zero.dim();
    let map = |x: &DVector<f64>| -> Result<DVector<f64>> {
        let xi = zero.with_coords(&x.as_slice()[..d]);
        let nbar = slice_cov(x, d, d);
        let m = &xi.scale(-1.0).dual_dexp(mu0)?
            + &(&xi.scale(-(1.0 - theta)).dual_dexp(&nbar)? * (1.0 - theta));
        let g = G::exp(&xi.scale(theta)).mul(g0);
        let f = problem.f(&g, &m);
        let mut out = DVector::zeros(2 * d);
        out.rows_mut(0, d).copy_from(&(f.xi.coords() * h));
        out.rows_mut(d, d).copy_from(&(&f.nu.0 * h));
        Ok(out)
    };
    let f0 = problem.f(g0, mu0);
    let mut x0 = DVector::zeros(2 * d);
    x0.rows_mut(0, d).copy_from(&(f0.xi.coords() * h));
    x0.rows_mut(d, d).copy_from(&(&f0.nu.0 * h));
    let sol = solve_fixed_point(map, x0, solver, h)?;
    let xi = zero.with_coords(&sol.x.as_slice()[..d]);
    let nbar = slice_cov(&sol.x, d, d);
    let incr = SemidirectGroupElement::new(
        G::exp(&xi),
        G::exp(&xi.scale(-(1.0 - theta))).co_adjoint(&nbar),
    );
    Ok(semidirect_mul(&incr, state))
}

/// RKMK theta method on the semidirect group, dexpinv truncated at order 2.
pub fn rkmk_theta_step<G: LieGroup>(
    theta: f64,
    problem: &TrivializedHamiltonianProblem<G>,
    state: &SemidirectGroupElement<G>,
    h: f64,
    solver: &SolverOptions,
) -> Result<SemidirectGroupElement<G>> {
    check_h(h)?;
    let zero = state.algebra_zero();
    let stage = |k: &SemidirectAlgebraElement<G::Algebra>| -> Result<SemidirectAlgebraElement<G::Algebra>> {
        let u = k.scale(theta * h);
        let y = semidirect_mul(&semidirect_exp::<G>(&u), state);
        dexpinv_series(&u, &problem.f(&y.g, &y.mu), 2)
    };
    let k = if theta == 0.0 {
        stage(&zero)?
    } else {
        let k0 = problem.f(&state.g, &state.mu);
        let sol = solve_fixed_point(
            |x| Ok(stage(&zero.with_coords(x.as_slice()))?.coords()),
            k0.coords(),
            solver,
            h,
        )?;
        zero.with_coords(sol.x.as_slice())
    };
    Ok(semidirect_mul(&semidirect_exp::<G>(&k.scale(h)), state))
}

fn check_h(h: f64) -> Result<()> {
    if h.is_finite() && h != 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("step size must be finite and nonzero, got {h}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeavyTopParams {
    /// Principal moments of inertia.
    pub inertia: Vector3<f64>,
    /// Body-frame direction of the center of mass.
    pub u0: Vector3<f64>,
    pub g0: RotationMatrix,
    pub mu0: Vector3<f64>,
}

impl HeavyTopParams {
    pub fn new(inertia: Vector3<f64>, u0: Vector3<f64>, g0: RotationMatrix, mu0: Vector3<f64>) -> Result<Self> {
        if inertia.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidInput("inertia entries must be positive".into()));
        }
        if (u0.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput("u0 must be a unit vector".into()));
        }
        Ok(HeavyTopParams { inertia, u0, g0, mu0 })
    }

    /// Inertia `1e3 diag(1, 5, 6)`, `u0 = e3`, `g0 = I`, `mu0 = 10 I (1, 1, 1)`.
    pub fn reference() -> Self {
        let inertia = Vector3::new(1e3, 5e3, 6e3);
        HeavyTopParams {
            inertia,
            u0: Vector3::z(),
            g0: RotationMatrix::identity(),
            mu0: inertia * 10.0,
        }
    }

    pub fn initial_state(&self) -> SemidirectGroupElement<RotationMatrix> {
        SemidirectGroupElement::new(self.g0, Covector::from_slice(self.mu0.as_slice()))
    }
}

/// Reference step size for the heavy top runs.
pub const HEAVY_TOP_STEP: f64 = 0.05;

/// `H(g, mu) = 1/2 <mu, I^{-1} mu> + e3^T g u0`.
pub fn heavy_top_problem(params: &HeavyTopParams) -> TrivializedHamiltonianProblem<RotationMatrix> {
    let inv = params.inertia.map(|v| 1.0 / v);
    let u0 = params.u0;
    TrivializedHamiltonianProblem::new(
        move |g: &RotationMatrix, mu: &Covector| {
            let m = Vector3::new(mu.0[0], mu.0[1], mu.0[2]);
            0.5 * m.dot(&inv.component_mul(&m)) + (g.0 * u0)[2]
        },
        move |g: &RotationMatrix, mu: &Covector| {
            let m = Vector3::new(mu.0[0], mu.0[1], mu.0[2]);
            let f2 = Vector3::z().cross(&(g.0 * u0));
            SemidirectAlgebraElement::new(
                So3Vector(inv.component_mul(&m)),
                Covector::from_slice(f2.as_slice()),
            )
        },
    )
}

/// Symplectic and comparator schemes on `G x| g*`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HamiltonianScheme {
    Slgi { theta: f64 },
    Theta { theta: f64 },
    RkmkTheta { theta: f64 },
}

impl HamiltonianScheme {
    pub fn step<G: LieGroup>(
        &self,
        problem: &TrivializedHamiltonianProblem<G>,
        state: &SemidirectGroupElement<G>,
        h: f64,
        solver: &SolverOptions,
    ) -> Result<SemidirectGroupElement<G>> {
        match *self {
            HamiltonianScheme::Slgi { theta } => {
                slgi_step(&SlgiCoefficients::theta(theta), problem, state, h, solver)
            }
            HamiltonianScheme::Theta { theta } => theta_step(theta, problem, state, h, solver),
            HamiltonianScheme::RkmkTheta { theta } => rkmk_theta_step(theta, problem, state, h, solver),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HamiltonianScheme::Slgi { .. } => "slgi",
            HamiltonianScheme::Theta { .. } => "theta",
            HamiltonianScheme::RkmkTheta { .. } => "rkmk_theta",
        }
    }
}

/// Solver settings used by the heavy top runs.
pub fn default_solver() -> SolverOptions {
    SolverOptions::picard(1e-12, 200)
}
