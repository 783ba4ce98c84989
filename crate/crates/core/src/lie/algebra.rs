//! Lie algebra trait, dual-space covectors and the dexp / dexpinv series.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default truncation order for the commutator series on generic algebras.
pub const DEFAULT_SERIES_ORDER: usize = 12;

/// Element of the dual algebra, stored in the dual of the coordinate basis.
///
/// The pairing with an algebra element is the dot product of coordinate vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Covector(pub DVector<f64>);

impl Covector {
    pub fn new(v: DVector<f64>) -> Self {
        Covector(v)
    }

    pub fn from_slice(v: &[f64]) -> Self {
        Covector(DVector::from_column_slice(v))
    }

    pub fn zeros(n: usize) -> Self {
        Covector(DVector::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Covector(&self.0 * s)
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    /// `<self, xi>`.
    pub fn pair<A: LieAlgebra>(&self, xi: &A) -> f64 {
        self.0.dot(&xi.coords())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Add for &Covector {
    type Output = Covector;
    fn add(self, rhs: &Covector) -> Covector {
        Covector(&self.0 + &rhs.0)
    }
}

impl Add for Covector {
    type Output = Covector;
    fn add(self, rhs: Covector) -> Covector {
        Covector(self.0 + rhs.0)
    }
}

impl Sub for &Covector {
    type Output = Covector;
    fn sub(self, rhs: &Covector) -> Covector {
        Covector(&self.0 - &rhs.0)
    }
}

impl Sub for Covector {
    type Output = Covector;
    fn sub(self, rhs: Covector) -> Covector {
        Covector(self.0 - rhs.0)
    }
}

impl Neg for Covector {
    type Output = Covector;
    fn neg(self) -> Covector {
        Covector(-self.0)
    }
}

impl Mul<f64> for &Covector {
    type Output = Covector;
    fn mul(self, s: f64) -> Covector {
        Covector(&self.0 * s)
    }
}

/// A finite dimensional real Lie algebra with a fixed coordinate basis.
///
/// Only `dim`, `coords`, `with_coords` and `bracket` are required. The linear
/// structure and the series operators fall back to coordinate arithmetic;
/// concrete algebras override them when a cheaper or exact form exists.
pub trait LieAlgebra: Clone + Debug {
    fn dim(&self) -> usize;

    fn coords(&self) -> DVector<f64>;

    /// Element with the same shape and tag as `self` and the given coordinates.
    fn with_coords(&self, c: &[f64]) -> Self;

    fn bracket(&self, other: &Self) -> Result<Self>;

    fn compatible(&self, other: &Self) -> bool {
        self.dim() == other.dim()
    }

    fn zero_like(&self) -> Self {
        self.with_coords(&vec![0.0; self.dim()])
    }

    /// `self + a * x`.
    fn axpy(&self, a: f64, x: &Self) -> Self {
        let c = self.coords() + x.coords() * a;
        self.with_coords(c.as_slice())
    }

    fn scale(&self, s: f64) -> Self {
        let c = self.coords() * s;
        self.with_coords(c.as_slice())
    }

    fn norm(&self) -> f64 {
        self.coords().norm()
    }

    fn basis(&self) -> Vec<Self> {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let mut c = vec![0.0; n];
                c[j] = 1.0;
                self.with_coords(&c)
            })
            .collect()
    }

    /// Matrix of `ad_self` in the coordinate basis; column `j` is `[self, e_j]`.
    fn ad_matrix(&self) -> Result<DMatrix<f64>> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (j, e) in self.basis().iter().enumerate() {
            m.set_column(j, &self.bracket(e)?.coords());
        }
        Ok(m)
    }

    /// Infinitesimal coadjoint operator: `<coad(xi, mu), eta> = <mu, [xi, eta]>`.
    fn coad(&self, mu: &Covector) -> Result<Covector> {
        check_dual(self, mu)?;
        Ok(Covector(self.ad_matrix()?.transpose() * &mu.0))
    }

    fn dexp(&self, v: &Self) -> Result<Self> {
        dexp_series(self, v, DEFAULT_SERIES_ORDER)
    }

    fn dexpinv(&self, v: &Self) -> Result<Self> {
        dexpinv_series(self, v, DEFAULT_SERIES_ORDER)
    }

    /// `(dexp_self)^* mu`.
    fn dual_dexp(&self, mu: &Covector) -> Result<Covector> {
        dual_dexp_series(self, mu, DEFAULT_SERIES_ORDER)
    }

    /// `(dexp_self^{-1})^* mu`.
    fn dual_dexpinv(&self, mu: &Covector) -> Result<Covector> {
        dual_dexpinv_series(self, mu, DEFAULT_SERIES_ORDER)
    }
}

fn check_pair<A: LieAlgebra>(a: &A, b: &A) -> Result<()> {
    if a.compatible(b) {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch(format!(
            "dimensions {} and {}",
            a.dim(),
            b.dim()
        )))
    }
}

fn check_dual<A: LieAlgebra>(a: &A, mu: &Covector) -> Result<()> {
    if a.dim() == mu.dim() {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch(format!(
            "algebra of dimension {} paired with covector of dimension {}",
            a.dim(),
            mu.dim()
        )))
    }
}

/// Bernoulli numbers `B_0 ..= B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<f64> {
    // The binomial recurrence loses about two digits per step, so small indices
    // come from a table and the rest from B_2k = (-1)^(k+1) 2 (2k)! zeta(2k) / (2 pi)^2k.
    const SMALL: [f64; 9] = [1.0, -0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0];
    let two_pi = 2.0 * std::f64::consts::PI;
    (0..=n)
        .map(|m| {
            if m < SMALL.len() {
                SMALL[m]
            } else if m % 2 == 1 {
                0.0
            } else {
                // zeta(m) tail beyond 200 terms is below 200^(1-m) / (m-1).
                let zeta: f64 = (1..=200).rev().map(|j| (j as f64).powi(-(m as i32))).sum();
                let scale = (1..=m).fold(1.0, |acc, j| acc * j as f64 / two_pi);
                let sign = if (m / 2) % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * scale * zeta
            }
        })
        .collect()
}

/// `sum_{k=0}^{order} ad_sigma^k v / (k+1)!`
pub fn dexp_series<A: LieAlgebra>(sigma: &A, v: &A, order: usize) -> Result<A> {
    check_pair(sigma, v)?;
    let mut term = v.clone();
    let mut sum = v.clone();
    for k in 1..=order {
        term = sigma.bracket(&term)?.scale(1.0 / (k + 1) as f64);
        sum = sum.axpy(1.0, &term);
    }
    Ok(sum)
}

/// `sum_{k=0}^{order} B_k / k! ad_sigma^k v`
pub fn dexpinv_series<A: LieAlgebra>(sigma: &A, v: &A, order: usize) -> Result<A> {
    check_pair(sigma, v)?;
    let b = bernoulli_numbers(order);
    let mut ad_k = v.clone();
    let mut sum = v.clone();
    let mut fact = 1.0;
    for (k, bk) in b.iter().enumerate().skip(1) {
        ad_k = sigma.bracket(&ad_k)?;
        fact *= k as f64;
        if *bk != 0.0 {
            sum = sum.axpy(bk / fact, &ad_k);
        }
    }
    Ok(sum)
}

/// Transposed dexp series: `sum_k coad_sigma^k mu / (k+1)!`.
pub fn dual_dexp_series<A: LieAlgebra>(sigma: &A, mu: &Covector, order: usize) -> Result<Covector> {
    check_dual(sigma, mu)?;
    let m = sigma.ad_matrix()?.transpose();
    let mut term = mu.0.clone();
    let mut sum = mu.0.clone();
    for k in 1..=order {
        term = (&m * term) / (k + 1) as f64;
        sum += &term;
    }
    Ok(Covector(sum))
}

/// Transposed dexpinv series: `sum_k B_k / k! coad_sigma^k mu`.
pub fn dual_dexpinv_series<A: LieAlgebra>(
    sigma: &A,
    mu: &Covector,
    order: usize,
) -> Result<Covector> {
    check_dual(sigma, mu)?;
    let m = sigma.ad_matrix()?.transpose();
    let b = bernoulli_numbers(order);
    let mut ad_k = mu.0.clone();
    let mut sum = mu.0.clone();
    let mut fact = 1.0;
    for (k, bk) in b.iter().enumerate().skip(1) {
        ad_k = &m * ad_k;
        fact *= k as f64;
        if *bk != 0.0 {
            sum += &ad_k * (bk / fact);
        }
    }
    Ok(Covector(sum))
}

/// `(dexp_{sign * sigma})^* mu`.
pub fn dual_dexp<A: LieAlgebra>(sigma: &A, mu: &Covector, sign: f64) -> Result<Covector> {
    sigma.scale(sign).dual_dexp(mu)
}

/// Commutator of two algebra elements.
pub fn commutator<A: LieAlgebra>(a: &A, b: &A) -> Result<A> {
    a.bracket(b)
}

/// The abelian algebra R^n; doubles as the translation group.
#[derive(Clone, Debug, PartialEq)]
pub struct Abelian(pub DVector<f64>);

impl Abelian {
    pub fn from_slice(v: &[f64]) -> Self {
        Abelian(DVector::from_column_slice(v))
    }

    pub fn zeros(n: usize) -> Self {
        Abelian(DVector::zeros(n))
    }
}

impl LieAlgebra for Abelian {
    fn dim(&self) -> usize {
        self.0.len()
    }

    fn coords(&self) -> DVector<f64> {
        self.0.clone()
    }

    fn with_coords(&self, c: &[f64]) -> Self {
        Abelian::from_slice(c)
    }

    fn bracket(&self, other: &Self) -> Result<Self> {
        check_pair(self, other)?;
        Ok(Abelian::zeros(self.0.len()))
    }

    fn axpy(&self, a: f64, x: &Self) -> Self {
        Abelian(&self.0 + &x.0 * a)
    }

    fn scale(&self, s: f64) -> Self {
        Abelian(&self.0 * s)
    }

    fn coad(&self, mu: &Covector) -> Result<Covector> {
        check_dual(self, mu)?;
        Ok(Covector::zeros(mu.dim()))
    }

    fn dexp(&self, v: &Self) -> Result<Self> {
        check_pair(self, v)?;
        Ok(v.clone())
    }

    fn dexpinv(&self, v: &Self) -> Result<Self> {
        check_pair(self, v)?;
        Ok(v.clone())
    }

    fn dual_dexp(&self, mu: &Covector) -> Result<Covector> {
        check_dual(self, mu)?;
        Ok(mu.clone())
    }

    fn dual_dexpinv(&self, mu: &Covector) -> Result<Covector> {
        check_dual(self, mu)?;
        Ok(mu.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_matches_known_values() {
        let b = bernoulli_numbers(12);
        let known = [
            1.0,
            -0.5,
            1.0 / 6.0,
            0.0,
            -1.0 / 30.0,
            0.0,
            1.0 / 42.0,
            0.0,
            -1.0 / 30.0,
            0.0,
            5.0 / 66.0,
            0.0,
            -691.0 / 2730.0,
        ];
        for (x, y) in b.iter().zip(known.iter()) {
            assert!((x - y).abs() < 1e-13, "{x} vs {y}");
        }
        let b20 = bernoulli_numbers(20)[20];
        let exact = -174611.0 / 330.0;
        assert!(((b20 - exact) / exact).abs() < 1e-14, "{b20}");
    }

    #[test]
    fn abelian_series_are_identity() {
        let s = Abelian::from_slice(&[1.0, 2.0]);
        let v = Abelian::from_slice(&[-3.0, 0.5]);
        assert_eq!(dexp_series(&s, &v, 8).unwrap(), v);
        assert_eq!(dexpinv_series(&s, &v, 8).unwrap(), v);
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let s = Abelian::zeros(2);
        let v = Abelian::zeros(3);
        assert!(matches!(s.bracket(&v), Err(Error::AlgebraMismatch(_))));
    }
}
