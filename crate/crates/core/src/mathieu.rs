//! Periodic Mathieu functions `ce_n(p, nu)`, `se_n(p, nu)` and their
//! characteristic values for `G'' + (a - 2p cos 2nu) G = 0`.
//!
//! The Fourier recursion splits into four symmetric tridiagonal problems
//! (even/odd harmonics, cosine/sine). The characteristic value of order `n`
//! is the `k`-th eigenvalue of its class, located by Sturm bisection.

use std::collections::HashMap;
use std::f64::consts::SQRT_2;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag::SymTridiagonal;

const MAX_TRUNCATION: usize = 1 << 14;
const REL_CHANGE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    /// `ce_n`, characteristic value `a_n`.
    #[serde(rename = "a")]
    Cosine,
    /// `se_n`, characteristic value `b_n`.
    #[serde(rename = "b")]
    Sine,
}

impl Parity {
    pub fn tag(self) -> char {
        match self {
            Parity::Cosine => 'a',
            Parity::Sine => 'b',
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "a" | "ce" | "cos" | "cosine" => Some(Parity::Cosine),
            "b" | "se" | "sin" | "sine" => Some(Parity::Sine),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MathieuCharacteristic {
    pub parity: Parity,
    pub order: usize,
    pub p: f64,
    pub value: f64,
    /// Coefficients of `cos(m nu)` / `sin(m nu)` for
    /// `m = first_harmonic, first_harmonic + 2, ...`.
    pub fourier: Vec<f64>,
    pub truncation: usize,
}

impl MathieuCharacteristic {
    /// Lowest harmonic present in the class of this order.
    pub fn first_harmonic(&self) -> usize {
        first_harmonic(self.parity, self.order)
    }

    /// Value and first two derivatives in `nu`.
    pub fn eval_with_derivatives(&self, nu: f64) -> (f64, f64, f64) {
        let m0 = self.first_harmonic();
        let (mut f, mut df, mut ddf) = (0.0, 0.0, 0.0);
        for (i, &c) in self.fourier.iter().enumerate() {
            let m = (m0 + 2 * i) as f64;
            let (s, co) = (m * nu).sin_cos();
            match self.parity {
                Parity::Cosine => {
                    f += c * co;
                    df -= c * m * s;
                    ddf -= c * m * m * co;
                }
                Parity::Sine => {
                    f += c * s;
                    df += c * m * co;
                    ddf -= c * m * m * s;
                }
            }
        }
        (f, df, ddf)
    }

    /// Residual of the Mathieu equation at `nu`, relative to the size of
    /// the series terms so that it stays meaningful at the nodes.
    pub fn residual(&self, nu: f64) -> f64 {
        let (g, _, ddg) = self.eval_with_derivatives(nu);
        let pot = (self.value - 2.0 * self.p * (2.0 * nu).cos()) * g;
        let m0 = self.first_harmonic();
        let scale: f64 = self
            .fourier
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let m = (m0 + 2 * i) as f64;
                c.abs() * (m * m + self.value.abs() + 2.0 * self.p.abs())
            })
            .sum();
        if scale == 0.0 {
            0.0
        } else {
            (ddg + pot).abs() / scale
        }
    }
}

fn first_harmonic(parity: Parity, order: usize) -> usize {
    match (parity, order % 2) {
        (Parity::Cosine, 0) => 0,
        (Parity::Sine, 0) => 2,
        _ => 1,
    }
}

/// Position of `order` inside its parity/period class.
fn class_index(parity: Parity, order: usize) -> usize {
    (order - first_harmonic(parity, order)) / 2
}

/// Truncated matrix of one class, in a basis where it is symmetric.
/// For even cosines the constant term is scaled by `sqrt 2`.
fn class_matrix(parity: Parity, order: usize, p: f64, size: usize) -> SymTridiagonal {
    let m0 = first_harmonic(parity, order);
    let mut diag: Vec<f64> = (0..size).map(|r| ((m0 + 2 * r) * (m0 + 2 * r)) as f64).collect();
    let mut off = vec![p; size - 1];
    match (parity, m0) {
        (Parity::Cosine, 0) => off[0] = SQRT_2 * p,
        (Parity::Cosine, 1) => diag[0] += p,
        (Parity::Sine, 1) => diag[0] -= p,
        _ => {}
    }
    SymTridiagonal::new(diag, off)
}

fn initial_truncation(order: usize, p: f64) -> usize {
    20.max(2 * order + (2.0 * p.abs().sqrt()).ceil() as usize + 10)
}

/// Characteristic value `a_n(p)` or `b_n(p)` with its Fourier vector.
pub fn char_value(parity: Parity, order: usize, p: f64) -> Result<MathieuCharacteristic> {
    if parity == Parity::Sine && order == 0 {
        return Err(Error::InvalidParameter("sine-type Mathieu functions start at order 1".into()));
    }
    if !p.is_finite() {
        return Err(Error::InvalidParameter(format!("Mathieu parameter must be finite, got {p}")));
    }
    let k = class_index(parity, order);
    let mut size = initial_truncation(order, p);
    let mut prev = class_matrix(parity, order, p, size).eigenvalue(k);
    loop {
        let next_size = size * 2;
        if next_size > MAX_TRUNCATION {
            return Err(Error::Convergence { truncation: size });
        }
        let t = class_matrix(parity, order, p, next_size);
        let value = t.eigenvalue(k);
        let converged = (value - prev).abs() <= REL_CHANGE * value.abs().max(1.0);
        size = next_size;
        prev = value;
        if converged {
            let fourier = fourier_vector(&t, parity, order, value);
            return Ok(MathieuCharacteristic {
                parity,
                order,
                p,
                value,
                fourier,
                truncation: size,
            });
        }
    }
}

fn fourier_vector(t: &SymTridiagonal, parity: Parity, order: usize, value: f64) -> Vec<f64> {
    let mut v = t.eigenvector(value);
    // fix the sign by the harmonic of the order itself
    if v[class_index(parity, order)] < 0.0 {
        v.iter_mut().for_each(|c| *c = -*c);
    }
    if first_harmonic(parity, order) == 0 && parity == Parity::Cosine {
        v[0] /= SQRT_2;
    }
    let last = v.iter().rposition(|c| c.abs() > 1e-300).unwrap_or(0);
    v.truncate(last + 1);
    v
}

/// `ce_n(p, nu)` or `se_n(p, nu)` from the stored Fourier series.
pub fn mathieu_eval(ch: &MathieuCharacteristic, nu: f64) -> f64 {
    ch.eval_with_derivatives(nu).0
}

/// Thread-safe memo of characteristic values for scans in `R`.
#[derive(Debug, Default)]
pub struct MathieuCache {
    map: Mutex<HashMap<(Parity, usize, i128), MathieuCharacteristic>>,
}

impl MathieuCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, parity: Parity, order: usize, p: f64) -> Result<MathieuCharacteristic> {
        let key = (parity, order, (p * 1e15).round() as i128);
        if let Some(hit) = self.map.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let ch = char_value(parity, order, p)?;
        self.map.lock().expect("cache lock").insert(key, ch.clone());
        Ok(ch)
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
