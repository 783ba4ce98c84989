use ligi::actions::*;
use ligi::lie::*;
use ligi::problems::data::{random_stiefel, rng};
use ligi::problems::duffing::{duffing_r2, duffing_se2, duffing_sl2};
use ligi::problems::stiefel::stiefel_residual;
use ligi::problems::{frb_s2_problem, torus_problem, DuffingParams};
use ligi::Error;
use nalgebra::{DMatrix, DVector, Vector2, Vector3};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

fn uniform(r: &mut StdRng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| r.random_range(-scale..scale)).collect()
}

/// Identity and compatibility axioms plus the central-difference generator check.
fn check_action<A, X, P>(action: &A, mut algebra: X, mut point: P, trials: usize)
where
    A: GroupAction,
    X: FnMut() -> A::Algebra,
    P: FnMut() -> A::Point,
{
    for _ in 0..trials {
        let m = point();
        let (x, y) = (algebra(), algebra());
        let (g, h) = (action.exp(&x), action.exp(&y));
        let id = action.act(&action.identity(&m), &m).coords();
        assert!((id - m.coords()).amax() <= 1e-12);
        let lhs = action.act(&g, &action.act(&h, &m)).coords();
        let rhs = action.act(&action.compose(&g, &h), &m).coords();
        assert!((&lhs - &rhs).amax() <= 1e-12 * (1.0 + lhs.amax()), "{lhs} vs {rhs}");

        let t = 1e-6;
        let fd = (action.exp_act(&x.scale(t), &m).coords() - action.exp_act(&x.scale(-t), &m).coords()) / (2.0 * t);
        let gen = action.generator(&x, &m);
        assert!((&fd - &gen).amax() <= 1e-6 * (1.0 + gen.amax()), "{fd} vs {gen}");
        assert!(action.generator(&x.zero_like(), &m).amax() == 0.0);
    }
}

fn unit3(r: &mut StdRng) -> Vector3<f64> {
    Vector3::from_column_slice(&uniform(r, 3, 1.0)).normalize()
}

#[test]
fn sphere_rotation_axioms() {
    let mut r1 = rng(1);
    let mut r2 = rng(2);
    check_action(
        &SphereRotation,
        || So3Vector(Vector3::from_column_slice(&uniform(&mut r1, 3, 2.0))),
        || unit3(&mut r2),
        1000,
    );
}

#[test]
fn sl2_linear_axioms() {
    let mut r1 = rng(3);
    let mut r2 = rng(4);
    let z = MatrixAlgebraElement::zeros(MatrixKind::Sl2);
    check_action(
        &LinearAction { kind: MatrixKind::Sl2 },
        || z.with_coords(&uniform(&mut r1, 3, 1.5)),
        || DVector::from_vec(uniform(&mut r2, 2, 2.0)),
        1000,
    );
}

#[test]
fn se2_linear_axioms() {
    let mut r1 = rng(5);
    let mut r2 = rng(6);
    let z = MatrixAlgebraElement::zeros(MatrixKind::Se2);
    check_action(
        &LinearAction { kind: MatrixKind::Se2 },
        || z.with_coords(&uniform(&mut r1, 3, 1.5)),
        || DVector::from_column_slice(&[r2.random_range(-2.0..2.0), r2.random_range(-2.0..2.0), 1.0]),
        1000,
    );
}

#[test]
fn affine_axioms() {
    let mut r1 = rng(7);
    let mut r2 = rng(8);
    check_action(
        &AffineAction { n: 2 },
        || {
            AffineAlgebraElement::new(
                DMatrix::from_vec(2, 2, uniform(&mut r1, 4, 1.0)),
                DVector::from_vec(uniform(&mut r1, 2, 1.0)),
            )
            .unwrap()
        },
        || DVector::from_vec(uniform(&mut r2, 2, 2.0)),
        1000,
    );
}

#[test]
fn translation_axioms() {
    let mut r1 = rng(9);
    let mut r2 = rng(10);
    check_action(
        &Translation { n: 3 },
        || Abelian(DVector::from_vec(uniform(&mut r1, 3, 2.0))),
        || DVector::from_vec(uniform(&mut r2, 3, 2.0)),
        1000,
    );
}

#[test]
fn left_multiplication_axioms() {
    let mut r1 = rng(11);
    let mut r2 = rng(12);
    let mut r3 = rng(13);
    check_action(
        &LeftMultiplication::<RotationMatrix>::new(),
        || So3Vector(Vector3::from_column_slice(&uniform(&mut r1, 3, 1.5))),
        || RotationMatrix::exp(&So3Vector(Vector3::from_column_slice(&uniform(&mut r2, 3, 1.5)))),
        1000,
    );
    check_action(
        &LeftMultiplication::<UnitQuaternion>::new(),
        || PureQuaternion(Vector3::from_column_slice(&uniform(&mut r3, 3, 1.0))),
        || quat_exp(&PureQuaternion(Vector3::from_column_slice(&uniform(&mut r2, 3, 1.0)))),
        1000,
    );
    check_action(
        &LeftMultiplication::<SemidirectGroupElement<RotationMatrix>>::new(),
        || {
            SemidirectAlgebraElement::new(
                So3Vector(Vector3::from_column_slice(&uniform(&mut r1, 3, 1.0))),
                Covector::from_slice(&uniform(&mut r1, 3, 1.0)),
            )
        },
        || {
            SemidirectGroupElement::new(
                RotationMatrix::exp(&So3Vector(Vector3::from_column_slice(&uniform(&mut r3, 3, 1.5)))),
                Covector::from_slice(&uniform(&mut r3, 3, 2.0)),
            )
        },
        300,
    );
}

#[test]
fn coadjoint_axioms_and_orbits() {
    let action = CoadjointAction {
        identity: RotationMatrix::identity(),
    };
    let mut r1 = rng(14);
    let mut r2 = rng(15);
    check_action(
        &action,
        || So3Vector(Vector3::from_column_slice(&uniform(&mut r1, 3, 2.0))),
        || Covector::from_slice(&uniform(&mut r2, 3, 2.0)),
        1000,
    );
    for _ in 0..1000 {
        let mu = Covector::from_slice(&uniform(&mut r2, 3, 3.0));
        let g = action.exp(&So3Vector(Vector3::from_column_slice(&uniform(&mut r1, 3, 3.0))));
        assert!((action.act(&g, &mu).norm() - mu.norm()).abs() <= 1e-13 * (1.0 + mu.norm()));
    }
    assert!(matches!(
        action.try_act(&RotationMatrix::identity(), &Covector::zeros(2)),
        Err(Error::ActionMismatch(_))
    ));
}

#[test]
fn stiefel_axioms_and_constraint() {
    let n = 5;
    let action = StiefelAction { n };
    let mut r1 = rng(16);
    let mut r2 = rng(17);
    let skew = |r: &mut StdRng| MatrixAlgebraElement::skew(&DMatrix::from_vec(n, n, uniform(r, n * n, 1.0)));
    check_action(&action, || skew(&mut r1), || random_stiefel(n, 2, &mut r2), 300);
    for _ in 0..100 {
        let q = random_stiefel(n, 3, &mut r2);
        let moved = action.exp_act(&skew(&mut r1).scale(4.0), &q);
        assert!(stiefel_residual(&moved) <= 1e-12);
    }
    assert!(matches!(
        action.try_act(&MatrixGroupElement::identity(MatrixKind::So(n)), &DMatrix::zeros(4, 2)),
        Err(Error::ActionMismatch(_))
    ));
}

#[test]
fn torus_axioms() {
    let mut r1 = rng(18);
    let mut r2 = rng(19);
    check_action(
        &TorusAction,
        || Abelian(DVector::from_vec(uniform(&mut r1, 2, 3.0))),
        || TorusPoint::from_angles(r2.random_range(-3.0..3.0), r2.random_range(-3.0..3.0)),
        1000,
    );
}

#[test]
fn sphere_preserves_norm_and_isotropy() {
    let mut r = rng(20);
    for _ in 0..1000 {
        let m = unit3(&mut r);
        let xi = So3Vector(Vector3::from_column_slice(&uniform(&mut r, 3, 5.0)));
        assert!((SphereRotation.exp_act(&xi, &m).norm() - 1.0).abs() <= 1e-13);
        // the generator ignores the component of xi along m
        let alpha = r.random_range(-30.0..30.0);
        let shifted = sphere_isotropy_shift(&xi, &m, alpha);
        let a = SphereRotation.generator(&xi, &m);
        let b = SphereRotation.generator(&shifted, &m);
        assert!((a - b).amax() <= 1e-13 * (1.0 + alpha.abs()));
    }
    let m = Vector3::new(0.0, 0.6, 0.8);
    assert!(SphereRotation.generator(&So3Vector(m * 2.5), &m).amax() < 1e-15);
}

/// Jacobi-Lie bracket `[X, Y](m) = DY(m) X(m) - DX(m) Y(m)` by central differences.
fn jacobi_lie(x: &dyn Fn(&DVector<f64>) -> DVector<f64>, y: &dyn Fn(&DVector<f64>) -> DVector<f64>, m: &DVector<f64>) -> DVector<f64> {
    let t = 1e-5;
    let dir = |f: &dyn Fn(&DVector<f64>) -> DVector<f64>, v: &DVector<f64>| (f(&(m + v * t)) - f(&(m - v * t))) / (2.0 * t);
    dir(y, &x(m)) - dir(x, &y(m))
}

#[test]
fn sl2_frame_bracket_is_negated_by_the_generator() {
    let act = LinearAction { kind: MatrixKind::Sl2 };
    let mk = |v: [f64; 4]| MatrixAlgebraElement::new(DMatrix::from_row_slice(2, 2, &v), MatrixKind::Sl2).unwrap();
    let (xm, ym, hm) = (mk([0.0, 1.0, 0.0, 0.0]), mk([0.0, 0.0, 1.0, 0.0]), mk([1.0, 0.0, 0.0, -1.0]));
    let xf = |m: &DVector<f64>| act.generator(&xm, m);
    let yf = |m: &DVector<f64>| act.generator(&ym, m);
    let mut r = rng(21);
    for _ in 0..50 {
        let m = DVector::from_vec(uniform(&mut r, 2, 2.0));
        // X = y d/dx, Y = x d/dy, H = x d/dx - y d/dy
        assert!((xf(&m) - DVector::from_column_slice(&[m[1], 0.0])).amax() == 0.0);
        assert!((yf(&m) - DVector::from_column_slice(&[0.0, m[0]])).amax() == 0.0);
        let minus_br = -jacobi_lie(&xf, &yf, &m);
        assert!((&minus_br - act.generator(&hm, &m)).amax() < 1e-8);
        assert!((minus_br - DVector::from_column_slice(&[m[0], -m[1]])).amax() < 1e-8);
    }
}

#[test]
fn generator_is_an_antihomomorphism_on_the_sphere() {
    let mut r = rng(22);
    for _ in 0..50 {
        let a = So3Vector(Vector3::from_column_slice(&uniform(&mut r, 3, 1.0)));
        let b = So3Vector(Vector3::from_column_slice(&uniform(&mut r, 3, 1.0)));
        let m = unit3(&mut r);
        let emb = |w: Vector3<f64>| move |p: &DVector<f64>| DVector::from_column_slice(w.cross(&Vector3::new(p[0], p[1], p[2])).as_slice());
        let br = jacobi_lie(&emb(a.0), &emb(b.0), &DVector::from_column_slice(m.as_slice()));
        let g = SphereRotation.generator(&a.bracket(&b).unwrap(), &m);
        assert!((g + br).amax() < 1e-8);
    }
}

#[test]
fn affine_exp_matches_printed_frozen_flow() {
    // a = 1, b = 1, frozen at (0.75, 0.75), alpha = sqrt(a)
    let p = DuffingParams::new(1.0, 1.0).unwrap();
    let prob = duffing_se2(p);
    let m0 = DVector::from_column_slice(&[0.75, 0.75]);
    let xi = prob.coefficients(&m0);
    let (x0, y0, b, alpha) = (0.75f64, 0.75f64, 1.0f64, 1.0f64);
    for t in [0.1, 0.5] {
        let got = prob.action.exp_act(&xi.scale(t), &m0);
        let (s, c) = (alpha * t).sin_cos();
        let x = x0 * c + y0 / alpha * s + b * x0.powi(3) * (c - 1.0) / (alpha * alpha);
        let y = y0 * c - alpha * x0 * s - b * x0.powi(3) * s / alpha;
        assert!((got[0] - x).abs() < 1e-14 && (got[1] - y).abs() < 1e-14, "t = {t}");
    }
}

#[test]
fn frozen_fields_reproduce_reference_fields() {
    let mut r = rng(23);
    let frb = frb_s2_problem(1.0, 5.0, 60.0).unwrap();
    let duff = DuffingParams::new(0.7, 1.3).unwrap();
    let (r2, sl2, se2) = (duffing_r2(duff), duffing_sl2(duff), duffing_se2(duff));
    let torus = torus_problem();
    for _ in 0..200 {
        let m = unit3(&mut r);
        let f = frozen_field(&frb, &m);
        assert!((f(&m) - (frb.reference_field.as_ref().unwrap())(&m)).amax() < 1e-13);
        let q = DVector::from_vec(uniform(&mut r, 2, 2.0));
        for (val, reference) in [
            (frozen_field(&r2, &q)(&q), r2.reference_field.as_ref().unwrap()(&q)),
            (frozen_field(&sl2, &q)(&q), sl2.reference_field.as_ref().unwrap()(&q)),
            (frozen_field(&se2, &q)(&q), se2.reference_field.as_ref().unwrap()(&q)),
        ] {
            assert!((val - reference).amax() < 1e-13);
        }
        let t = TorusPoint::from_angles(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        let val = frozen_field(&torus, &t)(&t);
        assert!((val - torus.reference_field.as_ref().unwrap()(&t)).amax() < 1e-12);
    }
    // the frozen rigid body matrix at e1 annihilates e1
    let e1 = Vector3::x();
    assert!(frozen_field(&frb, &e1)(&e1).amax() == 0.0);
}

#[test]
fn sl2_frozen_flow_matches_closed_form() {
    let p = DuffingParams::new(1.0, 1.0).unwrap();
    let prob = duffing_sl2(p);
    let m0 = DVector::from_column_slice(&[0.75, 0.75]);
    let xi = prob.coefficients(&m0);
    let w = (1.0f64 + 0.75 * 0.75).sqrt();
    for t in [0.1, 0.5, 3.0] {
        let got = prob.action.exp_act(&xi.scale(t), &m0);
        let (s, c) = (w * t).sin_cos();
        let x = 0.75 * c + 0.75 / w * s;
        let y = 0.75 * c - w * 0.75 * s;
        assert!((got[0] - x).abs() < 1e-13 && (got[1] - y).abs() < 1e-13);
    }
}

#[test]
fn torus_points_stay_on_circles() {
    let p = TorusPoint::from_angles(0.4, -1.1);
    let (t, f) = p.angles();
    assert!((t - 0.4).abs() < 1e-15 && (f + 1.1).abs() < 1e-15);
    let moved = TorusAction.exp_act(&Abelian::from_slice(&[12.0, -7.5]), &p);
    assert!((moved.u.norm() - 1.0).abs() < 1e-13 && (moved.w.norm() - 1.0).abs() < 1e-13);
    assert!((moved.u - nalgebra::Rotation2::new(12.4).matrix() * Vector2::x()).amax() < 1e-13);
}

proptest! {
    #[test]
    fn counting_action_is_transparent(v in prop::array::uniform3(-2.0..2.0f64), m in prop::array::uniform3(-1.0..1.0f64)) {
        let m = Vector3::from(m);
        prop_assume!(m.norm() > 1e-3);
        let m = m.normalize();
        let counting = CountingAction::new(SphereRotation);
        let xi = So3Vector(Vector3::from(v));
        prop_assert_eq!(counting.exp_act(&xi, &m), SphereRotation.exp_act(&xi, &m));
        prop_assert_eq!(counting.count(), 1);
        counting.reset();
        prop_assert_eq!(counting.count(), 0);
    }
}
