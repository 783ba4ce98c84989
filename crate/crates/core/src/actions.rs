//! Group actions on manifolds, their infinitesimal generators, and problems
//! given as a map `f: M -> g` together with an action.

use std::fmt::Debug;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::lie::{
    Abelian, AffineAlgebraElement, AffineGroupElement, Covector, LieAlgebra, LieGroup,
    MatrixAlgebraElement, MatrixGroupElement, MatrixKind, RotationMatrix, SemidirectGroupElement,
    So3Vector, UnitQuaternion,
};

/// A point on a manifold with flat coordinates for output.
pub trait ManifoldPoint: Clone + Debug {
    fn coords(&self) -> DVector<f64>;
    fn labels(&self) -> Vec<String>;
}

impl ManifoldPoint for Vector3<f64> {
    fn coords(&self) -> DVector<f64> {
        DVector::from_column_slice(self.as_slice())
    }
    fn labels(&self) -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }
}

impl ManifoldPoint for DVector<f64> {
    fn coords(&self) -> DVector<f64> {
        self.clone()
    }
    fn labels(&self) -> Vec<String> {
        match self.len() {
            2 => vec!["x".into(), "y".into()],
            n => (0..n).map(|i| format!("x{i}")).collect(),
        }
    }
}

/// Stiefel points are stored as `n x k` matrices; coordinates are row-major.
impl ManifoldPoint for DMatrix<f64> {
    fn coords(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.transpose().iter().copied())
    }
    fn labels(&self) -> Vec<String> {
        let mut l = Vec::with_capacity(self.len());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                l.push(format!("q{i}_{j}"));
            }
        }
        l
    }
}

impl ManifoldPoint for Covector {
    fn coords(&self) -> DVector<f64> {
        self.0.clone()
    }
    fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| format!("mu{}", i + 1)).collect()
    }
}

impl ManifoldPoint for UnitQuaternion {
    fn coords(&self) -> DVector<f64> {
        LieGroup::coords(self)
    }
    fn labels(&self) -> Vec<String> {
        vec!["q0".into(), "q1".into(), "q2".into(), "q3".into()]
    }
}

impl ManifoldPoint for RotationMatrix {
    fn coords(&self) -> DVector<f64> {
        LieGroup::coords(self)
    }
    fn labels(&self) -> Vec<String> {
        let mut l = Vec::with_capacity(9);
        for i in 1..=3 {
            for j in 1..=3 {
                l.push(format!("g{i}{j}"));
            }
        }
        l
    }
}

impl ManifoldPoint for SemidirectGroupElement<RotationMatrix> {
    fn coords(&self) -> DVector<f64> {
        LieGroup::coords(self)
    }
    fn labels(&self) -> Vec<String> {
        let mut l = self.g.labels();
        l.extend(self.mu.labels());
        l
    }
}

/// Point on the torus as two unit vectors in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint {
    pub u: Vector2<f64>,
    pub w: Vector2<f64>,
}

impl TorusPoint {
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        TorusPoint {
            u: Vector2::new(theta.cos(), theta.sin()),
            w: Vector2::new(phi.cos(), phi.sin()),
        }
    }

    pub fn angles(&self) -> (f64, f64) {
        (self.u[1].atan2(self.u[0]), self.w[1].atan2(self.w[0]))
    }
}

impl ManifoldPoint for TorusPoint {
    fn coords(&self) -> DVector<f64> {
        DVector::from_column_slice(&[self.u[0], self.u[1], self.w[0], self.w[1]])
    }
    fn labels(&self) -> Vec<String> {
        vec!["u1".into(), "u2".into(), "w1".into(), "w2".into()]
    }
}

/// Element of `SO(2) x SO(2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusRotation {
    pub r1: Matrix2<f64>,
    pub r2: Matrix2<f64>,
}

fn rot2(a: f64) -> Matrix2<f64> {
    let (s, c) = a.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// A left action of a Lie group on a manifold.
pub trait GroupAction {
    type Algebra: LieAlgebra;
    type Group: Clone + Debug;
    type Point: ManifoldPoint;

    fn exp(&self, xi: &Self::Algebra) -> Self::Group;

    fn act(&self, g: &Self::Group, m: &Self::Point) -> Self::Point;

    fn compose(&self, g: &Self::Group, h: &Self::Group) -> Self::Group;

    fn identity(&self, m: &Self::Point) -> Self::Group;

    /// Infinitesimal generator `d/dt act(exp(t xi), m)` at `t = 0`, in point coordinates.
    fn generator(&self, xi: &Self::Algebra, m: &Self::Point) -> DVector<f64>;

    fn exp_act(&self, xi: &Self::Algebra, m: &Self::Point) -> Self::Point {
        self.act(&self.exp(xi), m)
    }

    /// Shape compatibility of a point with this action.
    fn check(&self, _m: &Self::Point) -> Result<()> {
        Ok(())
    }

    fn try_act(&self, g: &Self::Group, m: &Self::Point) -> Result<Self::Point> {
        self.check(m)?;
        Ok(self.act(g, m))
    }
}

/// `SO(3)` acting on `S^2` by matrix-vector multiplication.
#[derive(Clone, Copy, Debug, Default)]
pub struct SphereRotation;

impl GroupAction for SphereRotation {
    type Algebra = So3Vector;
    type Group = RotationMatrix;
    type Point = Vector3<f64>;

    fn exp(&self, xi: &So3Vector) -> RotationMatrix {
        RotationMatrix::exp(xi)
    }
    fn act(&self, g: &RotationMatrix, m: &Vector3<f64>) -> Vector3<f64> {
        g.0 * m
    }
    fn compose(&self, g: &RotationMatrix, h: &RotationMatrix) -> RotationMatrix {
        g.mul(h)
    }
    fn identity(&self, _m: &Vector3<f64>) -> RotationMatrix {
        RotationMatrix::identity()
    }
    fn generator(&self, xi: &So3Vector, m: &Vector3<f64>) -> DVector<f64> {
        DVector::from_column_slice(xi.0.cross(m).as_slice())
    }
}

/// Matrix group acting linearly on `R^n` (e.g. `SL(2)` on the plane).
#[derive(Clone, Copy, Debug)]
pub struct LinearAction {
    pub kind: MatrixKind,
}

impl GroupAction for LinearAction {
    type Algebra = MatrixAlgebraElement;
    type Group = MatrixGroupElement;
    type Point = DVector<f64>;

    fn exp(&self, xi: &MatrixAlgebraElement) -> MatrixGroupElement {
        MatrixGroupElement::exp(xi)
    }
    fn act(&self, g: &MatrixGroupElement, m: &DVector<f64>) -> DVector<f64> {
        &g.mat * m
    }
    fn compose(&self, g: &MatrixGroupElement, h: &MatrixGroupElement) -> MatrixGroupElement {
        g.mul(h)
    }
    fn identity(&self, _m: &DVector<f64>) -> MatrixGroupElement {
        MatrixGroupElement::identity(self.kind)
    }
    fn generator(&self, xi: &MatrixAlgebraElement, m: &DVector<f64>) -> DVector<f64> {
        &xi.mat * m
    }
    fn check(&self, m: &DVector<f64>) -> Result<()> {
        if m.len() == self.kind.size() {
            Ok(())
        } else {
            Err(Error::ActionMismatch(format!(
                "{:?} acts on R^{}, point has dimension {}",
                self.kind,
                self.kind.size(),
                m.len()
            )))
        }
    }
}

/// Affine group acting on `R^n` by `x -> A x + b`.
#[derive(Clone, Copy, Debug)]
pub struct AffineAction {
    pub n: usize,
}

impl GroupAction for AffineAction {
    type Algebra = AffineAlgebraElement;
    type Group = AffineGroupElement;
    type Point = DVector<f64>;

    fn exp(&self, xi: &AffineAlgebraElement) -> AffineGroupElement {
        AffineGroupElement::exp(xi)
    }
    fn act(&self, g: &AffineGroupElement, m: &DVector<f64>) -> DVector<f64> {
        g.apply(m)
    }
    fn compose(&self, g: &AffineGroupElement, h: &AffineGroupElement) -> AffineGroupElement {
        g.mul(h)
    }
    fn identity(&self, _m: &DVector<f64>) -> AffineGroupElement {
        AffineGroupElement::identity(self.n)
    }
    fn generator(&self, xi: &AffineAlgebraElement, m: &DVector<f64>) -> DVector<f64> {
        &xi.xi * m + &xi.c
    }
    fn check(&self, m: &DVector<f64>) -> Result<()> {
        if m.len() == self.n {
            Ok(())
        } else {
            Err(Error::ActionMismatch(format!(
                "affine action on R^{}, point has dimension {}",
                self.n,
                m.len()
            )))
        }
    }
}

/// `(R^n, +)` acting by translation; Lie group schemes reduce to classical ones.
#[derive(Clone, Copy, Debug)]
pub struct Translation {
    pub n: usize,
}

impl GroupAction for Translation {
    type Algebra = Abelian;
    type Group = Abelian;
    type Point = DVector<f64>;

    fn exp(&self, xi: &Abelian) -> Abelian {
        xi.clone()
    }
    fn act(&self, g: &Abelian, m: &DVector<f64>) -> DVector<f64> {
        m + &g.0
    }
    fn compose(&self, g: &Abelian, h: &Abelian) -> Abelian {
        g.mul(h)
    }
    fn identity(&self, _m: &DVector<f64>) -> Abelian {
        Abelian::zeros(self.n)
    }
    fn generator(&self, xi: &Abelian, _m: &DVector<f64>) -> DVector<f64> {
        xi.0.clone()
    }
    fn check(&self, m: &DVector<f64>) -> Result<()> {
        if m.len() == self.n {
            Ok(())
        } else {
            Err(Error::ActionMismatch(format!(
                "translation on R^{}, point has dimension {}",
                self.n,
                m.len()
            )))
        }
    }
}

/// A group acting on itself by left multiplication.
#[derive(Clone, Copy, Debug, Default)]
pub struct LeftMultiplication<G>(std::marker::PhantomData<G>);

impl<G> LeftMultiplication<G> {
    pub fn new() -> Self {
        LeftMultiplication(std::marker::PhantomData)
    }
}

impl<G: LieGroup + ManifoldPoint> GroupAction for LeftMultiplication<G> {
    type Algebra = G::Algebra;
    type Group = G;
    type Point = G;

    fn exp(&self, xi: &G::Algebra) -> G {
        G::exp(xi)
    }
    fn act(&self, g: &G, m: &G) -> G {
        g.mul(m)
    }
    fn compose(&self, g: &G, h: &G) -> G {
        g.mul(h)
    }
    fn identity(&self, m: &G) -> G {
        m.identity_like()
    }
    fn generator(&self, xi: &G::Algebra, m: &G) -> DVector<f64> {
        m.right_tangent(xi)
    }
}

/// Coadjoint action `g . mu = coAd(g^{-1}, mu)` on the dual algebra.
#[derive(Clone, Debug)]
pub struct CoadjointAction<G: LieGroup> {
    pub identity: G,
}

impl<G: LieGroup> GroupAction for CoadjointAction<G> {
    type Algebra = G::Algebra;
    type Group = G;
    type Point = Covector;

    fn exp(&self, xi: &G::Algebra) -> G {
        G::exp(xi)
    }
    fn act(&self, g: &G, m: &Covector) -> Covector {
        g.inverse().co_adjoint(m)
    }
    fn compose(&self, g: &G, h: &G) -> G {
        g.mul(h)
    }
    fn identity(&self, _m: &Covector) -> G {
        self.identity.clone()
    }
    fn generator(&self, xi: &G::Algebra, m: &Covector) -> DVector<f64> {
        -xi.coad(m).expect("covector matches algebra dimension").0
    }
    fn check(&self, m: &Covector) -> Result<()> {
        let d = self.identity.algebra_zero().dim();
        if m.dim() == d {
            Ok(())
        } else {
            Err(Error::ActionMismatch(format!(
                "coadjoint action on dimension {d}, covector has dimension {}",
                m.dim()
            )))
        }
    }
}

/// `SO(n)` acting on the Stiefel manifold `St(n, k)` by left multiplication.
#[derive(Clone, Copy, Debug)]
pub struct StiefelAction {
    pub n: usize,
}

impl GroupAction for StiefelAction {
    type Algebra = MatrixAlgebraElement;
    type Group = MatrixGroupElement;
    type Point = DMatrix<f64>;

    fn exp(&self, xi: &MatrixAlgebraElement) -> MatrixGroupElement {
        MatrixGroupElement::exp(xi)
    }
    fn act(&self, g: &MatrixGroupElement, m: &DMatrix<f64>) -> DMatrix<f64> {
        &g.mat * m
    }
    fn compose(&self, g: &MatrixGroupElement, h: &MatrixGroupElement) -> MatrixGroupElement {
        g.mul(h)
    }
    fn identity(&self, _m: &DMatrix<f64>) -> MatrixGroupElement {
        MatrixGroupElement::identity(MatrixKind::So(self.n))
    }
    fn generator(&self, xi: &MatrixAlgebraElement, m: &DMatrix<f64>) -> DVector<f64> {
        (&xi.mat * m).coords()
    }
    fn check(&self, m: &DMatrix<f64>) -> Result<()> {
        if m.nrows() == self.n && m.ncols() <= self.n {
            Ok(())
        } else {
            Err(Error::ActionMismatch(format!(
                "SO({}) acting on a {}x{} frame",
                self.n,
                m.nrows(),
                m.ncols()
            )))
        }
    }
}

/// `SO(2) x SO(2)` acting componentwise on the torus; the algebra is `R^2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct TorusAction;

impl GroupAction for TorusAction {
    type Algebra = Abelian;
    type Group = TorusRotation;
    type Point = TorusPoint;

    fn exp(&self, xi: &Abelian) -> TorusRotation {
        TorusRotation {
            r1: rot2(xi.0[0]),
            r2: rot2(xi.0[1]),
        }
    }
    fn act(&self, g: &TorusRotation, m: &TorusPoint) -> TorusPoint {
        TorusPoint {
            u: g.r1 * m.u,
            w: g.r2 * m.w,
        }
    }
    fn compose(&self, g: &TorusRotation, h: &TorusRotation) -> TorusRotation {
        TorusRotation {
            r1: g.r1 * h.r1,
            r2: g.r2 * h.r2,
        }
    }
    fn identity(&self, _m: &TorusPoint) -> TorusRotation {
        TorusRotation {
            r1: Matrix2::identity(),
            r2: Matrix2::identity(),
        }
    }
    fn generator(&self, xi: &Abelian, m: &TorusPoint) -> DVector<f64> {
        let (a, b) = (xi.0[0], xi.0[1]);
        DVector::from_column_slice(&[-a * m.u[1], a * m.u[0], -b * m.w[1], b * m.w[0]])
    }
}

/// Wraps an action and counts calls to `exp`.
#[derive(Debug)]
pub struct CountingAction<A> {
    pub inner: A,
    count: Arc<AtomicUsize>,
}

impl<A> CountingAction<A> {
    pub fn new(inner: A) -> Self {
        CountingAction {
            inner,
            count: Arc::new(AtomicUsize::new(0)),
        }
    }

    pub fn count(&self) -> usize {
        self.count.load(Ordering::SeqCst)
    }

    pub fn reset(&self) {
        self.count.store(0, Ordering::SeqCst);
    }
}

impl<A: GroupAction> GroupAction for CountingAction<A> {
    type Algebra = A::Algebra;
    type Group = A::Group;
    type Point = A::Point;

    fn exp(&self, xi: &A::Algebra) -> A::Group {
        self.count.fetch_add(1, Ordering::SeqCst);
        self.inner.exp(xi)
    }
    fn act(&self, g: &A::Group, m: &A::Point) -> A::Point {
        self.inner.act(g, m)
    }
    fn compose(&self, g: &A::Group, h: &A::Group) -> A::Group {
        self.inner.compose(g, h)
    }
    fn identity(&self, m: &A::Point) -> A::Group {
        self.inner.identity(m)
    }
    fn generator(&self, xi: &A::Algebra, m: &A::Point) -> DVector<f64> {
        self.inner.generator(xi, m)
    }
    fn check(&self, m: &A::Point) -> Result<()> {
        self.inner.check(m)
    }
}

type PointMap<P, T> = Box<dyn Fn(&P) -> T + Send + Sync>;

/// Named scalar function monitored along trajectories.
pub struct Invariant<P> {
    pub name: String,
    pub eval: PointMap<P, f64>,
}

/// An ODE on `M` given by `y' = generator(f(y), y)`.
pub struct FrozenFieldProblem<A: GroupAction> {
    pub action: A,
    pub f: PointMap<A::Point, A::Algebra>,
    /// The vector field in point coordinates, when known independently of `f`.
    pub reference_field: Option<PointMap<A::Point, DVector<f64>>>,
    pub invariants: Vec<Invariant<A::Point>>,
}

impl<A: GroupAction> FrozenFieldProblem<A> {
    pub fn new(action: A, f: impl Fn(&A::Point) -> A::Algebra + Send + Sync + 'static) -> Self {
        FrozenFieldProblem {
            action,
            f: Box::new(f),
            reference_field: None,
            invariants: Vec::new(),
        }
    }

    pub fn with_reference(
        mut self,
        field: impl Fn(&A::Point) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        self.reference_field = Some(Box::new(field));
        self
    }

    pub fn with_invariant(
        mut self,
        name: &str,
        eval: impl Fn(&A::Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.invariants.push(Invariant {
            name: name.to_string(),
            eval: Box::new(eval),
        });
        self
    }

    /// Same problem under a different action with identical algebra and points.
    pub fn with_action<B>(self, action: B) -> FrozenFieldProblem<B>
    where
        B: GroupAction<Algebra = A::Algebra, Point = A::Point>,
    {
        FrozenFieldProblem {
            action,
            f: self.f,
            reference_field: self.reference_field,
            invariants: self.invariants,
        }
    }

    pub fn coefficients(&self, m: &A::Point) -> A::Algebra {
        (self.f)(m)
    }

    /// The vector field `generator(f(m), m)`.
    pub fn field(&self, m: &A::Point) -> DVector<f64> {
        self.action.generator(&(self.f)(m), m)
    }

    pub fn invariant_names(&self) -> Vec<String> {
        self.invariants.iter().map(|i| i.name.clone()).collect()
    }

    pub fn invariant_values(&self, m: &A::Point) -> Vec<f64> {
        self.invariants.iter().map(|i| (i.eval)(m)).collect()
    }
}

/// Field with coefficients frozen at `p`: `m -> generator(f(p), m)`.
pub fn frozen_field<'a, A: GroupAction>(
    problem: &'a FrozenFieldProblem<A>,
    p: &A::Point,
) -> impl Fn(&A::Point) -> DVector<f64> + 'a {
    let xi = problem.coefficients(p);
    move |m| problem.action.generator(&xi, m)
}

/// Generator `hat(xi) m` with the isotropy shift `xi + alpha m` on `S^2`.
pub fn sphere_isotropy_shift(xi: &So3Vector, m: &Vector3<f64>, alpha: f64) -> So3Vector {
    So3Vector(xi.0 + m * alpha)
}
