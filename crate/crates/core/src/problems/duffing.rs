use nalgebra::{DMatrix, DVector};

use crate::actions::{AffineAction, FrozenFieldProblem, LinearAction, Translation};
use crate::error::{Error, Result};
use crate::lie::{Abelian, AffineAlgebraElement, MatrixAlgebraElement, MatrixKind};

/// `x' = y`, `y' = -a x - b x^3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DuffingParams {
    pub a: f64,
    pub b: f64,
}

impl DuffingParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput(format!(
                "Duffing coefficients must be finite and nonnegative, got a = {a}, b = {b}"
            )));
        }
        Ok(DuffingParams { a, b })
    }

    pub fn field(&self, m: &DVector<f64>) -> DVector<f64> {
        let (x, y) = (m[0], m[1]);
        DVector::from_column_slice(&[y, -self.a * x - self.b * x * x * x])
    }

    pub fn energy(&self, m: &DVector<f64>) -> f64 {
        let (x, y) = (m[0], m[1]);
        0.5 * y * y + 0.5 * self.a * x * x + 0.25 * self.b * x.powi(4)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DuffingFrame {
    /// Translations of the plane.
    R2,
    /// `sl(2)` acting linearly.
    Sl2,
    /// Affine frame with linear part `[[0, 1], [-a, 0]]` and forcing `(0, -b x^3)`.
    Se2,
}

impl DuffingFrame {
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "r2" => Ok(DuffingFrame::R2),
            "sl2" => Ok(DuffingFrame::Sl2),
            "se2" => Ok(DuffingFrame::Se2),
            _ => Err(Error::InvalidInput(format!("unknown Duffing frame '{name}'"))),
        }
    }
}

pub enum DuffingProblem {
    R2(FrozenFieldProblem<Translation>),
    Sl2(FrozenFieldProblem<LinearAction>),
    Se2(FrozenFieldProblem<AffineAction>),
}

impl DuffingProblem {
    pub fn field(&self, m: &DVector<f64>) -> DVector<f64> {
        match self {
            DuffingProblem::R2(p) => p.field(m),
            DuffingProblem::Sl2(p) => p.field(m),
            DuffingProblem::Se2(p) => p.field(m),
        }
    }
}

pub fn duffing_r2(params: DuffingParams) -> FrozenFieldProblem<Translation> {
    FrozenFieldProblem::new(Translation { n: 2 }, move |m: &DVector<f64>| Abelian(params.field(m)))
        .with_reference(move |m| params.field(m))
        .with_invariant("energy", move |m| params.energy(m))
}

/// Frozen coefficients `[[0, 1], [-(a + b x^2), 0]]`.
pub fn duffing_sl2(params: DuffingParams) -> FrozenFieldProblem<LinearAction> {
    FrozenFieldProblem::new(LinearAction { kind: MatrixKind::Sl2 }, move |m: &DVector<f64>| {
        let w2 = params.a + params.b * m[0] * m[0];
        MatrixAlgebraElement {
            mat: DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -w2, 0.0]),
            kind: MatrixKind::Sl2,
        }
    })
    .with_reference(move |m| params.field(m))
    .with_invariant("energy", move |m| params.energy(m))
}

pub fn duffing_se2(params: DuffingParams) -> FrozenFieldProblem<AffineAction> {
    let l = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -params.a, 0.0]);
    FrozenFieldProblem::new(AffineAction { n: 2 }, move |m: &DVector<f64>| AffineAlgebraElement {
        xi: l.clone(),
        c: DVector::from_column_slice(&[0.0, -params.b * m[0].powi(3)]),
    })
    .with_reference(move |m| params.field(m))
    .with_invariant("energy", move |m| params.energy(m))
}

pub fn duffing_problem(params: DuffingParams, frame: DuffingFrame) -> DuffingProblem {
    match frame {
        DuffingFrame::R2 => DuffingProblem::R2(duffing_r2(params)),
        DuffingFrame::Sl2 => DuffingProblem::Sl2(duffing_sl2(params)),
        DuffingFrame::Se2 => DuffingProblem::Se2(duffing_se2(params)),
    }
}
