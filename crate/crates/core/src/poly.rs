//! Dense univariate polynomials, coefficients in ascending powers.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly<S> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(S::zero());
        }
        Poly { coeffs }
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![S::zero(), S::one()])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &S {
        self.coeffs.last().expect("non-empty")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * S::from_usize(k).expect("usize"))
            .collect::<Vec<_>>();
        Poly::new(coeffs)
    }

    /// Re-expands `p(w)` with `w = x + shift` into powers of `x`.
    pub fn shift(&self, shift: &S) -> Self {
        let w = Poly::new(vec![shift.clone(), S::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::constant(S::zero()), |acc, c| &(&acc * &w) + &Poly::constant(c.clone()))
    }

    pub fn max_abs_coeff(&self) -> S {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .fold(S::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn to_f64(&self) -> Poly<f64> {
        Poly::new(self.coeffs.iter().map(|c| c.to_f64_lossy()).collect())
    }
}

impl Poly<f64> {
    /// Value together with first and second derivatives (Horner).
    pub fn eval_with_derivatives(&self, x: f64) -> (f64, f64, f64) {
        let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            ddp = ddp * x + 2.0 * dp;
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp, ddp)
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;

    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(S::zero);
                let b = rhs.coeffs.get(i).cloned().unwrap_or_else(S::zero);
                a + b
            })
            .collect();
        Poly::new(coeffs)
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;

    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        self + &rhs.scale(&(-S::one()))
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;

    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        let mut coeffs = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(coeffs)
    }
}
