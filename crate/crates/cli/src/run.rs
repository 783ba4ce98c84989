//! Builds the configured problem and runs it.

use ligi::actions::{FrozenFieldProblem, GroupAction, LeftMultiplication, ManifoldPoint, TorusPoint};
use ligi::diagnostics::linear_fit;
use ligi::discrete_gradient::{dg_solver, dg_step, frb_quaternion_problem, frb_reference_parameters, TddKind};
use ligi::integrators::{convergence_study, integrate, run_steps, ButcherTableau, Scheme, Trajectory};
use ligi::lie::UnitQuaternion;
use ligi::problems::data::{random_stiefel, rng};
use ligi::problems::{duffing_problem, frb_s2_problem, pca_problem, torus_problem, DuffingFrame, DuffingParams, DuffingProblem};
use ligi::symplectic::{default_solver, heavy_top_problem, HamiltonianScheme, HeavyTopParams};
use ligi::{Error, Result};
use nalgebra::{DMatrix, DVector, Vector3};

use crate::config::{ProblemId, Settings};

pub struct Row {
    pub t: f64,
    pub state: Vec<f64>,
    pub invariants: Vec<f64>,
}

/// A recorded trajectory with column names.
pub struct Run {
    pub labels: Vec<String>,
    pub invariant_names: Vec<String>,
    pub rows: Vec<Row>,
}

impl Run {
    fn from_trajectory<P: ManifoldPoint>(tr: Trajectory<P>) -> Run {
        let labels = tr.records[0].state.labels();
        let rows = tr
            .records
            .into_iter()
            .map(|r| Row {
                t: r.t,
                state: r.state.coords().iter().copied().collect(),
                invariants: r.invariants,
            })
            .collect();
        Run {
            labels,
            invariant_names: tr.invariant_names,
            rows,
        }
    }

    pub fn final_state(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.rows[self.rows.len() - 1].state)
    }
}

fn frozen_scheme(s: &Settings) -> Result<Scheme> {
    if s.scheme == "rkmk" {
        Ok(Scheme::rkmk(ButcherTableau::by_name(&s.tableau)?, s.series_order))
    } else {
        Scheme::by_name(&s.scheme)
    }
}

fn hamiltonian_scheme(s: &Settings) -> HamiltonianScheme {
    match s.scheme.as_str() {
        "slgi" => HamiltonianScheme::Slgi { theta: s.theta },
        "theta" => HamiltonianScheme::Theta { theta: s.theta },
        _ => HamiltonianScheme::RkmkTheta { theta: s.theta },
    }
}

fn v3(v: &[f64]) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

fn frb_s2_start(s: &Settings) -> Result<Vector3<f64>> {
    let y = v3(s.y0.as_deref().unwrap_or(&[0.3, 0.3, 1.0]));
    if y.norm() == 0.0 {
        return Err(Error::InvalidInput("y0 must be nonzero".into()));
    }
    Ok(y.normalize())
}

fn frb_s3_start(s: &Settings) -> Result<UnitQuaternion> {
    let y = s.y0.as_deref().unwrap_or(&[1.0, 0.0, 0.0, 0.0]);
    if y.iter().all(|v| *v == 0.0) {
        return Err(Error::InvalidInput("y0 must be nonzero".into()));
    }
    Ok(UnitQuaternion::new_normalize(y[0], Vector3::new(y[1], y[2], y[3])))
}

fn duffing_start(s: &Settings) -> DVector<f64> {
    DVector::from_column_slice(s.y0.as_deref().unwrap_or(&[0.75, 0.75]))
}

fn torus_start(s: &Settings) -> TorusPoint {
    let y = s.y0.as_deref().unwrap_or(&[0.3, 1.2]);
    TorusPoint::from_angles(y[0], y[1])
}

fn pca_setup(s: &Settings) -> (DMatrix<f64>, DMatrix<f64>) {
    let a = DMatrix::from_diagonal(&DVector::from_column_slice(&s.spectrum));
    let q0 = random_stiefel(s.spectrum.len(), s.k, &mut rng(s.seed));
    (a, q0)
}

fn frb_s3_problem(s: &Settings) -> Result<ligi::discrete_gradient::FirstIntegralProblem<UnitQuaternion>> {
    let (inertia, m0) = frb_reference_parameters();
    match &s.inertia {
        // keep I m0 fixed when the inertia changes
        Some(i) => frb_quaternion_problem(v3(i), inertia.component_mul(&m0).component_div(&v3(i))),
        None => frb_quaternion_problem(inertia, m0),
    }
}

fn frozen<A: GroupAction>(p: &FrozenFieldProblem<A>, s: &Settings, y0: &A::Point, h: f64, steps: usize) -> Result<Run> {
    Ok(Run::from_trajectory(integrate(p, &frozen_scheme(s)?, y0, h, steps)?))
}

/// Integrates `steps` steps of size `h`.
pub fn run(s: &Settings, h: f64, steps: usize) -> Result<Run> {
    match s.problem {
        ProblemId::FrbS2 => {
            let i = s.inertia.clone().unwrap_or_else(|| vec![1.0, 5.0, 60.0]);
            frozen(&frb_s2_problem(i[0], i[1], i[2])?, s, &frb_s2_start(s)?, h, steps)
        }
        ProblemId::Duffing => {
            let params = DuffingParams::new(s.a, s.b)?;
            let y0 = duffing_start(s);
            match duffing_problem(params, DuffingFrame::by_name(&s.frame)?) {
                DuffingProblem::R2(p) => frozen(&p, s, &y0, h, steps),
                DuffingProblem::Sl2(p) => frozen(&p, s, &y0, h, steps),
                DuffingProblem::Se2(p) => frozen(&p, s, &y0, h, steps),
            }
        }
        ProblemId::Torus => frozen(&torus_problem(), s, &torus_start(s), h, steps),
        ProblemId::Pca => {
            let (a, q0) = pca_setup(s);
            frozen(&pca_problem(a), s, &q0, h, steps)
        }
        ProblemId::HeavyTop => {
            let params = match &s.inertia {
                Some(i) => {
                    let r = HeavyTopParams::reference();
                    HeavyTopParams::new(v3(i), r.u0, r.g0, v3(i) * 10.0)?
                }
                None => HeavyTopParams::reference(),
            };
            let p = heavy_top_problem(&params);
            let scheme = hamiltonian_scheme(s);
            let solver = default_solver();
            let tr = run_steps(
                &params.initial_state(),
                h,
                steps,
                vec!["energy".into()],
                |x| vec![p.energy(x)],
                |x| scheme.step(&p, x, h, &solver),
            )?;
            Ok(Run::from_trajectory(tr))
        }
        ProblemId::FrbS3 => {
            let p = frb_s3_problem(s)?;
            let q0 = frb_s3_start(s)?;
            let names = vec!["energy".to_string(), "norm".to_string()];
            let inv = |q: &UnitQuaternion| vec![p.energy(q), q.norm()];
            if s.scheme == "dg" {
                let kind = TddKind::by_name(&s.tdd, s.nodes)?;
                let solver = dg_solver();
                let tr = run_steps(&q0, h, steps, names, inv, |q| dg_step(&p, q, h, kind, true, &solver))?;
                Ok(Run::from_trajectory(tr))
            } else {
                let scheme = frozen_scheme(s)?;
                // the boxed field is not shareable, so the frozen-field view owns a second copy
                let fp = frb_s3_problem(s)?;
                let ff = FrozenFieldProblem::new(LeftMultiplication::<UnitQuaternion>::new(), move |q: &UnitQuaternion| fp.f(q));
                let tr = run_steps(&q0, h, steps, names, inv, |q| scheme.step(&ff, q, h))?;
                Ok(Run::from_trajectory(tr))
            }
        }
    }
}

pub struct OrderReport {
    pub scheme: String,
    pub h: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
}

fn steps_for(t_end: f64, h: f64) -> Result<usize> {
    let n = (t_end / h).round();
    if n < 1.0 || (n * h - t_end).abs() > 1e-9 * t_end.max(1.0) {
        return Err(Error::InvalidInput(format!("T = {t_end} is not a multiple of h = {h}")));
    }
    Ok(n as usize)
}

/// Global error at `t_end` over `h_list`.
///
/// Frozen-field problems use the library study (RKMK4 reference); the heavy top
/// and the quaternion rigid body are measured against the same scheme at `h_min / 20`.
pub fn order(s: &Settings) -> Result<OrderReport> {
    let hs = &s.h_list;
    if hs.len() < 3 {
        return Err(Error::InvalidInput("order needs at least three step sizes".into()));
    }
    let report = |r: ligi::integrators::ConvergenceReport| OrderReport {
        scheme: s.scheme.clone(),
        h: r.h,
        errors: r.errors,
        slope: r.slope,
    };
    let (t, scheme) = (s.t_end, || frozen_scheme(s));
    match s.problem {
        ProblemId::FrbS2 => {
            let i = s.inertia.clone().unwrap_or_else(|| vec![1.0, 5.0, 60.0]);
            let p = frb_s2_problem(i[0], i[1], i[2])?;
            Ok(report(convergence_study(&p, &scheme()?, &frb_s2_start(s)?, t, hs)?))
        }
        ProblemId::Duffing => {
            let params = DuffingParams::new(s.a, s.b)?;
            let y0 = duffing_start(s);
            let r = match duffing_problem(params, DuffingFrame::by_name(&s.frame)?) {
                DuffingProblem::R2(p) => convergence_study(&p, &scheme()?, &y0, t, hs)?,
                DuffingProblem::Sl2(p) => convergence_study(&p, &scheme()?, &y0, t, hs)?,
                DuffingProblem::Se2(p) => convergence_study(&p, &scheme()?, &y0, t, hs)?,
            };
            Ok(report(r))
        }
        ProblemId::Torus => Ok(report(convergence_study(&torus_problem(), &scheme()?, &torus_start(s), t, hs)?)),
        ProblemId::Pca => {
            let (a, q0) = pca_setup(s);
            Ok(report(convergence_study(&pca_problem(a), &scheme()?, &q0, t, hs)?))
        }
        ProblemId::HeavyTop | ProblemId::FrbS3 => {
            if hs.windows(2).any(|w| w[1] >= w[0]) || hs.iter().any(|h| *h <= 0.0) {
                return Err(Error::InvalidInput("step sizes must be positive and decreasing".into()));
            }
            let h_ref = hs[hs.len() - 1] / 20.0;
            let reference = run(s, h_ref, steps_for(t, h_ref)?)?.final_state();
            let mut errors = Vec::with_capacity(hs.len());
            for &h in hs {
                let y = run(s, h, steps_for(t, h)?)?.final_state();
                errors.push((y - &reference).norm());
            }
            let lx: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
            let ly: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
            Ok(OrderReport {
                scheme: s.scheme.clone(),
                h: hs.clone(),
                slope: linear_fit(&lx, &ly).0,
                errors,
            })
        }
    }
}
