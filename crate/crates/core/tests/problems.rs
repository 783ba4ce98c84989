use ligi::actions::{GroupAction, StiefelAction, TorusPoint};
use ligi::integrators::Scheme;
use ligi::problems::data::{random_stiefel, rng, synthetic_covariance};
use ligi::problems::duffing::DuffingFrame;
use ligi::problems::stiefel::{lyapunov_generator, lyapunov_s, pca_generator, stiefel_residual, tangent_to_algebra};
use ligi::problems::*;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use std::f64::consts::FRAC_PI_2;

#[test]
fn torus_minimum_is_stationary() {
    let p = TorusPoint::from_angles(0.0, FRAC_PI_2);
    assert_eq!(torus_cost(&p), 36.0);
    let tr = torus_descent(&p, 0.01, 50, &Scheme::LieEuler).unwrap();
    let (t, f) = tr.last().state.angles();
    assert!(t.abs() < 1e-15 && (f - FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn torus_descent_reaches_the_minimum() {
    let tr = torus_descent(&TorusPoint::from_angles(0.3, 1.2), 0.01, 3000, &Scheme::LieEuler).unwrap();
    let cost = tr.invariant_series(0);
    assert!(cost.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!((cost.last().unwrap() - 36.0).abs() < 1e-8);
    for r in &tr.records {
        assert!((r.invariants[1] - 1.0).abs() < 1e-13 && (r.invariants[2] - 1.0).abs() < 1e-13);
    }
}

#[test]
fn torus_gradient_matches_finite_differences() {
    let mut r = rng(61);
    let e = 1e-6;
    for _ in 0..200 {
        let (t, f) = (r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        let c = |t: f64, f: f64| torus_cost(&TorusPoint::from_angles(t, f));
        let (g, d) = ligi::problems::torus::torus_gradient(&TorusPoint::from_angles(t, f));
        assert!((g - (c(t + e, f) - c(t - e, f)) / (2.0 * e)).abs() < 1e-6);
        assert!((d - (c(t, f + e) - c(t, f - e)) / (2.0 * e)).abs() < 1e-6);
    }
}

#[test]
fn pca_top_eigenvectors_are_stationary() {
    let a = DMatrix::from_diagonal(&DVector::from_column_slice(&[5.0, 4.0, 3.0, 2.0, 1.0]));
    let q0 = DMatrix::identity(5, 2);
    let prob = StiefelFlowProblem::new(a, 2, StiefelFlavor::PcaGradient).unwrap();
    assert!(pca_generator(&prob.a, &q0).mat.amax() == 0.0);
    let (q, obj) = stiefel_pca_flow(&prob, &q0, 0.05, 100).unwrap();
    assert!((q - q0).amax() < 1e-15 && (obj - 4.5).abs() < 1e-15);
}

#[test]
fn pca_objective_is_monotone_for_small_steps() {
    let spectrum = [6.0, 4.0, 3.0, 1.5, 1.0, 0.5];
    let a = synthetic_covariance(&spectrum, 62);
    let h = 0.1 / a.norm();
    let p = pca_problem(a.clone());
    let mut q = random_stiefel(6, 3, &mut rng(63));
    let mut prev = pca_objective(&a, &q);
    for _ in 0..2000 {
        q = Scheme::LieEuler.step(&p, &q, h).unwrap();
        let cur = pca_objective(&a, &q);
        assert!(cur >= prev - 1e-12);
        prev = cur;
    }
    assert!(stiefel_residual(&q) < 1e-12);
    assert!((prev - 0.5 * 13.0).abs() < 1e-3, "{prev}");
}

#[test]
fn synthetic_covariance_has_the_requested_spectrum() {
    let spectrum = [7.0, 3.0, 2.5, 0.1];
    let a = synthetic_covariance(&spectrum, 64);
    assert!((&a - a.transpose()).amax() == 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    for (e, s) in ev.iter().zip(spectrum) {
        assert!((e - s).abs() < 1e-12);
    }
}

#[test]
fn tangent_vectors_map_to_algebra_elements() {
    let mut r = rng(65);
    for _ in 0..100 {
        let q = random_stiefel(5, 2, &mut r);
        let a = DMatrix::from_fn(5, 5, |_, _| r.random_range(-1.0..1.0));
        let xi = lyapunov_generator(&a, &q);
        assert!((&xi.mat + xi.mat.transpose()).amax() < 1e-15);
        let aq = &a * &q;
        let qaq = q.transpose() * &aq;
        let s = lyapunov_s(&qaq);
        assert!((&s + s.transpose()).amax() == 0.0);
        let v = &aq - &q * &qaq + &q * &s;
        assert!((q.transpose() * &v + v.transpose() * &q).amax() < 1e-13);
        assert!((&xi.mat * &q - &v).amax() < 1e-13);
        let again = tangent_to_algebra(&q, &v);
        assert!((&again.mat - &xi.mat).amax() < 1e-15);
        assert!(StiefelAction { n: 5 }.generator(&xi, &q).amax() > 0.0);
    }
}

#[test]
fn lyapunov_canonical_frame_is_exact() {
    let a = DMatrix::from_diagonal(&DVector::from_column_slice(&[3.0, 1.0, -1.0]));
    let est = lyapunov_exponents(&|_| a.clone(), &DMatrix::identity(3, 2), 0.05, 20.0).unwrap();
    assert!((est[0] - 3.0).abs() < 1e-12 && (est[1] - 1.0).abs() < 1e-12);
}

/// Discrete QR: `Q_{n+1} R_n = exp(hA) Q_n`, averaging `log R_ii`.
fn qr_oracle(a: &DMatrix<f64>, q0: &DMatrix<f64>, h: f64, steps: usize) -> DVector<f64> {
    let step = (a * h).exp();
    let mut q = q0.clone();
    let mut acc = DVector::zeros(q0.ncols());
    for _ in 0..steps {
        let qr = (&step * &q).qr();
        let rr = qr.r();
        q = qr.q();
        for i in 0..acc.len() {
            acc[i] += rr[(i, i)].abs().ln();
            if rr[(i, i)] < 0.0 {
                q.column_mut(i).neg_mut();
            }
        }
    }
    acc / (h * steps as f64)
}

#[test]
fn lyapunov_matches_discrete_qr() {
    let mut r = rng(66);
    let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.0, -0.5, 1.0, 0.3, 0.0, -2.0]);
    let q0 = random_stiefel(3, 2, &mut r);
    let est = lyapunov_exponents(&|_| a.clone(), &q0, 0.01, 10.0).unwrap();
    let oracle = qr_oracle(&a, &q0, 0.01, 1000);
    assert!((&est - &oracle).amax() < 1e-4, "{est} vs {oracle}");
}

#[test]
fn lyapunov_random_frame_converges_like_one_over_t() {
    let a = DMatrix::from_diagonal(&DVector::from_column_slice(&[3.0, 1.0, -1.0]));
    let q0 = random_stiefel(3, 2, &mut rng(67));
    let mut errs = Vec::new();
    for t in [25.0, 50.0, 100.0] {
        let est = lyapunov_exponents(&|_| a.clone(), &q0, 0.05, t).unwrap();
        errs.push((est[0] - 3.0).abs().max((est[1] - 1.0).abs()));
    }
    // transient from the initial frame is O(1/T)
    assert!(errs[1] < 0.6 * errs[0] && errs[2] < 0.6 * errs[1], "{errs:?}");
}

#[test]
fn lyapunov_input_validation() {
    let a = DMatrix::identity(3, 3);
    assert!(lyapunov_exponents(&|_| a.clone(), &DMatrix::identity(3, 2), -0.1, 1.0).is_err());
    assert!(lyapunov_exponents(&|_| a.clone(), &DMatrix::from_element(3, 2, 1.0), 0.1, 1.0).is_err());
    assert!(lyapunov_exponents(&|_| a.clone(), &DMatrix::identity(3, 2), 0.1, 0.0).is_err());
}

#[test]
fn stiefel_problem_validation() {
    let sym = DMatrix::identity(4, 4);
    assert!(StiefelFlowProblem::new(DMatrix::zeros(3, 4), 1, StiefelFlavor::PcaGradient).is_err());
    assert!(StiefelFlowProblem::new(sym.clone(), 0, StiefelFlavor::PcaGradient).is_err());
    assert!(StiefelFlowProblem::new(sym.clone(), 5, StiefelFlavor::Lyapunov).is_err());
    let mut skewed = sym.clone();
    skewed[(0, 1)] = 1.0;
    assert!(StiefelFlowProblem::new(skewed.clone(), 2, StiefelFlavor::PcaGradient).is_err());
    assert!(StiefelFlowProblem::new(skewed, 2, StiefelFlavor::Lyapunov).is_ok());
    let prob = StiefelFlowProblem::new(sym, 2, StiefelFlavor::PcaGradient).unwrap();
    assert!(stiefel_pca_flow(&prob, &DMatrix::identity(4, 3), 0.1, 1).is_err());
}

#[test]
fn duffing_parameters_and_frames() {
    assert!(DuffingParams::new(-1.0, 1.0).is_err());
    assert!(DuffingParams::new(f64::NAN, 1.0).is_err());
    let p = DuffingParams::new(1.0, 2.0).unwrap();
    let m = DVector::from_column_slice(&[0.5, -1.0]);
    assert!((p.energy(&m) - (0.5 + 0.125 + 0.5 * 0.0625)).abs() < 1e-15);
    for name in ["r2", "sl2", "se2"] {
        let prob = duffing_problem(p, DuffingFrame::by_name(name).unwrap());
        assert!((prob.field(&m) - p.field(&m)).amax() < 1e-15);
    }
    assert!(DuffingFrame::by_name("so3").is_err());
}
