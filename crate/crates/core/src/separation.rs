//! Radial (Razavy) and angular (Whittaker-Hill) equations as QES confluent
//! Heun instances.
//!
//! In Euler elliptic coordinates the separated equations are
//!
//! ```text
//! (xi^2-1) F'' + xi F' + (E R^2/2 xi^2 + R(Z1+Z2) xi + lambda) F = 0,   xi  in (1, inf)
//! (1-eta^2) G'' - eta G' - (E R^2/2 eta^2 + R(Z2-Z1) eta + lambda) G = 0, eta in (-1, 1)
//! ```
//!
//! Both reduce to the confluent Heun equation through
//! `F = (xi+1)^((2g-1)/4) (xi-1)^((2d-1)/4) e^(eps xi/4) u(xi)` (and the
//! analogue with `1+eta`, `1-eta`), which is only compatible with the four
//! exponent choices of [`SolutionType`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heun::{self, CheqParams, HeunPolynomial, QesRoot};
use crate::poly::Poly;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolutionType {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "d")]
    D,
}

impl SolutionType {
    pub const ALL: [SolutionType; 4] = [SolutionType::A, SolutionType::B, SolutionType::C, SolutionType::D];

    /// `(gamma, delta)` in halves: a = (1/2,1/2), b = (3/2,3/2), c = (3/2,1/2), d = (1/2,3/2).
    fn halves(self) -> (i64, i64) {
        match self {
            SolutionType::A => (1, 1),
            SolutionType::B => (3, 3),
            SolutionType::C => (3, 1),
            SolutionType::D => (1, 3),
        }
    }

    pub fn gamma<S: Scalar>(self) -> S {
        S::ratio(self.halves().0, 2)
    }

    pub fn delta<S: Scalar>(self) -> S {
        S::ratio(self.halves().1, 2)
    }

    /// `gamma + delta`, the offset in the energy denominator `2n + gamma + delta`.
    pub fn offset(self) -> usize {
        let (g, d) = self.halves();
        ((g + d) / 2) as usize
    }

    /// Power of `(xi+1)` / `(1+eta)` in the prefactor.
    pub fn plus_power(self) -> f64 {
        (self.halves().0 - 1) as f64 / 4.0
    }

    /// Power of `(xi-1)` / `(1-eta)` in the prefactor.
    pub fn minus_power(self) -> f64 {
        (self.halves().1 - 1) as f64 / 4.0
    }

    pub fn tag(self) -> char {
        match self {
            SolutionType::A => 'a',
            SolutionType::B => 'b',
            SolutionType::C => 'c',
            SolutionType::D => 'd',
        }
    }

    pub fn from_tag(c: char) -> Option<Self> {
        match c {
            'a' => Some(SolutionType::A),
            'b' => Some(SolutionType::B),
            'c' => Some(SolutionType::C),
            'd' => Some(SolutionType::D),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Radial,
    Angular,
}

/// Charges of the two centers and, once fixed, their separation.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterPair<S> {
    pub z1: S,
    pub z2: S,
    pub r: Option<S>,
}

impl<S: Scalar> CenterPair<S> {
    pub fn new(z1: S, z2: S) -> Result<Self> {
        if z1 <= S::zero() || z2 <= S::zero() {
            return Err(Error::InvalidParameter(format!(
                "charges must be positive, got Z1 = {z1:?}, Z2 = {z2:?}"
            )));
        }
        Ok(CenterPair { z1, z2, r: None })
    }

    pub fn with_r(&self, r: S) -> Result<Self> {
        if r <= S::zero() {
            return Err(Error::InvalidParameter(format!("R must be positive, got {r:?}")));
        }
        Ok(CenterPair {
            z1: self.z1.clone(),
            z2: self.z2.clone(),
            r: Some(r),
        })
    }

    pub fn r(&self) -> Result<&S> {
        self.r
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("intercenter distance R not set".into()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.z1 == self.z2
    }

    /// `Z1 + Z2` for the radial equation, `Z2 - Z1` for the angular one.
    pub fn effective_charge(&self, kind: Kind) -> Result<S> {
        match kind {
            Kind::Radial => Ok(self.z1.clone() + self.z2.clone()),
            Kind::Angular if self.is_symmetric() => Err(Error::SymmetricCase),
            Kind::Angular => Ok(self.z2.clone() - self.z1.clone()),
        }
    }

    pub fn to_f64(&self) -> CenterPair<f64> {
        CenterPair {
            z1: self.z1.to_f64_lossy(),
            z2: self.z2.to_f64_lossy(),
            r: self.r.as_ref().map(|r| r.to_f64_lossy()),
        }
    }
}

/// `(xi+1)^plus (xi-1)^minus e^(rate xi)`, or `(1+eta)^plus (1-eta)^minus e^(rate eta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Prefactor<S> {
    pub plus_power: f64,
    pub minus_power: f64,
    /// `eps / 4`.
    pub rate: S,
}

/// One elementary radial or angular factor.
#[derive(Debug, Clone)]
pub struct SeparatedSolution<S> {
    pub kind: Kind,
    pub sol_type: SolutionType,
    pub level: usize,
    pub centers: CenterPair<S>,
    pub branch: QesRoot,
    pub energy: S,
    pub lambda: S,
    pub epsilon: S,
    pub poly: HeunPolynomial<S>,
    pub prefactor: Prefactor<S>,
    /// `u` re-expanded in powers of `x - 1` (radial) or `x` (angular),
    /// which keeps pointwise evaluation free of cancellation.
    pub local: Vec<f64>,
}

fn local_basis<S: Scalar>(kind: Kind, shifted: &Poly<S>) -> Vec<f64> {
    let origin = match kind {
        Kind::Radial => S::ratio(2, 1),
        Kind::Angular => S::one(),
    };
    shifted.shift(&origin).to_f64().coeffs
}

fn energy_with<S: Scalar>(t: SolutionType, level: usize, charge: S) -> S {
    let den = S::from_usize(2 * level + t.offset()).expect("usize");
    -(S::ratio(2, 1) * charge.clone() * charge) / (den.clone() * den)
}

/// `E = -2(Z1+Z2)^2 / (2n + gamma + delta)^2`, independent of `R`.
pub fn radial_energy<S: Scalar>(t: SolutionType, level: usize, centers: &CenterPair<S>) -> S {
    energy_with(t, level, centers.z1.clone() + centers.z2.clone())
}

/// `E = -2(Z2-Z1)^2 / (2n + gamma + delta)^2`.
pub fn angular_energy<S: Scalar>(t: SolutionType, level: usize, centers: &CenterPair<S>) -> Result<S> {
    Ok(energy_with(t, level, centers.effective_charge(Kind::Angular)?))
}

pub fn energy<S: Scalar>(kind: Kind, t: SolutionType, level: usize, centers: &CenterPair<S>) -> Result<S> {
    match kind {
        Kind::Radial => Ok(radial_energy(t, level, centers)),
        Kind::Angular => angular_energy(t, level, centers),
    }
}

fn cheq_with<S: Scalar>(t: SolutionType, level: usize, charge: S, r: &S) -> Result<CheqParams<S>> {
    let den = S::from_usize(2 * level + t.offset()).expect("usize");
    let epsilon = -(S::ratio(4, 1) * r.clone() * charge) / den;
    CheqParams::new(t.gamma(), t.delta(), epsilon, level)
}

/// `eps = -4R(Z1+Z2)/(2n+gamma+delta)`, `alpha = -n eps`.
pub fn build_radial_cheq<S: Scalar>(t: SolutionType, level: usize, centers: &CenterPair<S>) -> Result<CheqParams<S>> {
    cheq_with(t, level, centers.z1.clone() + centers.z2.clone(), centers.r()?)
}

/// `eps = -4R(Z2-Z1)/(2n+gamma+delta)`; positive when `Z2 < Z1`.
pub fn build_angular_cheq<S: Scalar>(t: SolutionType, level: usize, centers: &CenterPair<S>) -> Result<CheqParams<S>> {
    let charge = centers.effective_charge(Kind::Angular)?;
    cheq_with(t, level, charge, centers.r()?)
}

pub fn build_cheq<S: Scalar>(kind: Kind, t: SolutionType, level: usize, centers: &CenterPair<S>) -> Result<CheqParams<S>> {
    match kind {
        Kind::Radial => build_radial_cheq(t, level, centers),
        Kind::Angular => build_angular_cheq(t, level, centers),
    }
}

/// Separation constant from the confluent Heun constants:
/// `lambda = eps^2/16 + eps(gamma-delta)/4 - (gamma+delta)(gamma+delta-2)/4 + (2 alpha - 1)/4 - q`.
pub fn lambda_general<S: Scalar>(params: &CheqParams<S>, q: &S) -> S {
    let eps = params.epsilon.clone();
    let gd = params.gamma.clone() + params.delta.clone();
    eps.clone() * eps.clone() / S::ratio(16, 1)
        + eps * (params.gamma.clone() - params.delta.clone()) / S::ratio(4, 1)
        - gd.clone() * (gd - S::ratio(2, 1)) / S::ratio(4, 1)
        + (S::ratio(2, 1) * params.alpha() - S::one()) / S::ratio(4, 1)
        - q.clone()
}

/// Per-type closed forms of the separation constant.
pub fn lambda_closed_form<S: Scalar>(
    kind: Kind,
    t: SolutionType,
    level: usize,
    q: &S,
    centers: &CenterPair<S>,
) -> Result<S> {
    let r = centers.r()?.clone();
    let (z1, z2) = (centers.z1.clone(), centers.z2.clone());
    let n = S::from_usize(level).expect("usize");
    let one = S::one;
    let two = || S::ratio(2, 1);
    let quarter = || S::ratio(1, 4);
    let e = energy(kind, t, level, centers)?;
    let kinetic = -(r.clone() * r.clone() * e) / two();
    let q = q.clone();
    let value = match (kind, t) {
        (Kind::Radial, SolutionType::A) => {
            kinetic + two() * n.clone() * r * (z1 + z2) / (two() * n + one()) - q
        }
        (Kind::Radial, SolutionType::B) => {
            kinetic + two() * n.clone() * r * (z1 + z2) / (two() * n + S::ratio(3, 1)) - q - one()
        }
        (Kind::Radial, SolutionType::C) => {
            kinetic + (two() * n.clone() - one()) * r * (z1 + z2) / (two() * n + two()) - q - quarter()
        }
        (Kind::Radial, SolutionType::D) => {
            kinetic + (two() * n.clone() + one()) * r * (z1 + z2) / (two() * n + two()) - q - quarter()
        }
        (Kind::Angular, SolutionType::A) => {
            kinetic + two() * n.clone() * r * (-z1 + z2) / (two() * n + one()) - q
        }
        (Kind::Angular, SolutionType::B) => {
            kinetic + two() * n.clone() * r * (-z1 + z2) / (two() * n + S::ratio(3, 1)) - q - one()
        }
        (Kind::Angular, SolutionType::C) => {
            kinetic + (two() * n.clone() - one()) * r * (-z1 + z2) / (two() * n + two()) - q - quarter()
        }
        (Kind::Angular, SolutionType::D) => {
            kinetic + (two() * n.clone() + one()) * r * (-z1 + z2) / (two() * n + two()) - q - quarter()
        }
    };
    Ok(value)
}

/// Ascending roots `q_1 < ... < q_{n+1}` for this factor at the pair's `R`.
pub fn branch_roots<S: Scalar>(kind: Kind, t: SolutionType, level: usize, centers: &CenterPair<S>) -> Result<Vec<QesRoot>> {
    let params = build_cheq(kind, t, level, centers)?;
    heun::find_q_roots(&heun::build_recurrence(&params))
}

fn pick_branch(roots: &[QesRoot], branch: usize) -> Result<&QesRoot> {
    if branch == 0 || branch > roots.len() {
        return Err(Error::BranchOutOfRange {
            branch,
            max: roots.len(),
        });
    }
    Ok(&roots[branch - 1])
}

/// Separation constant of branch `j` (1-based, ascending `q`).
pub fn lambda_value<S: Scalar>(
    kind: Kind,
    t: SolutionType,
    level: usize,
    branch: usize,
    centers: &CenterPair<S>,
) -> Result<S> {
    let roots = branch_roots(kind, t, level, centers)?;
    let root = pick_branch(&roots, branch)?;
    let q = S::from_root(root).ok_or(Error::InexactRoot(root.q))?;
    lambda_closed_form(kind, t, level, &q, centers)
}

/// The complete factor for branch `j`.
pub fn assemble_factor<S: Scalar>(
    kind: Kind,
    t: SolutionType,
    level: usize,
    branch: usize,
    centers: &CenterPair<S>,
) -> Result<SeparatedSolution<S>> {
    let params = build_cheq(kind, t, level, centers)?;
    let rec = heun::build_recurrence(&params);
    let roots = heun::find_q_roots(&rec)?;
    let root = pick_branch(&roots, branch)?.clone();
    let q = S::from_root(&root).ok_or(Error::InexactRoot(root.q))?;
    let mut lambda = lambda_closed_form(kind, t, level, &q, centers)?;
    let mut poly = heun::assemble_polynomial(&rec, &root);
    let mut local = local_basis(kind, &poly.in_shifted());
    if !S::EXACT {
        if let Some((exact, q_ref)) = heun::refine_root_exactly(&params.to_f64(), root.q) {
            let coeffs = heun::coefficients_from_params(&exact, &q_ref);
            let round = |x: &Rational| S::from_f64(x.to_f64_lossy()).expect("finite");
            poly.coeffs = coeffs.iter().map(round).collect();
            local = local_basis(kind, &Poly::new(coeffs));
            lambda = round(&lambda_general(&exact, &q_ref));
        }
    }
    Ok(SeparatedSolution {
        kind,
        sol_type: t,
        level,
        centers: centers.clone(),
        energy: energy(kind, t, level, centers)?,
        lambda,
        epsilon: params.epsilon.clone(),
        prefactor: Prefactor {
            plus_power: t.plus_power(),
            minus_power: t.minus_power(),
            rate: params.epsilon.clone() / S::ratio(4, 1),
        },
        branch: root,
        local,
        poly,
    })
}

/// A floating factor rebuilt from a stored root `q` and its coefficients
/// in powers of `(x+1)`, without root finding.
pub fn factor_from_parts(
    kind: Kind,
    t: SolutionType,
    level: usize,
    branch: usize,
    centers: &CenterPair<f64>,
    q: f64,
    coeffs: Vec<f64>,
) -> Result<SeparatedSolution<f64>> {
    if branch == 0 || branch > level + 1 {
        return Err(Error::BranchOutOfRange { branch, max: level + 1 });
    }
    if coeffs.len() != level + 1 || coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "expected {} finite coefficients, got {:?}",
            level + 1,
            coeffs
        )));
    }
    let params = build_cheq(kind, t, level, centers)?;
    let root = QesRoot { j: branch, q, residual: 0.0, exact: None };
    let poly = HeunPolynomial { params: params.clone(), root: root.clone(), q, coeffs };
    Ok(SeparatedSolution {
        kind,
        sol_type: t,
        level,
        centers: centers.clone(),
        energy: energy(kind, t, level, centers)?,
        lambda: lambda_closed_form(kind, t, level, &q, centers)?,
        epsilon: params.epsilon,
        prefactor: Prefactor {
            plus_power: t.plus_power(),
            minus_power: t.minus_power(),
            rate: params.epsilon / 4.0,
        },
        branch: root,
        local: local_basis(kind, &poly.in_shifted()),
        poly,
    })
}

impl<S: Scalar> SeparatedSolution<S> {
    pub fn to_f64(&self) -> SeparatedSolution<f64> {
        SeparatedSolution {
            kind: self.kind,
            sol_type: self.sol_type,
            level: self.level,
            centers: self.centers.to_f64(),
            branch: self.branch.clone(),
            energy: self.energy.to_f64_lossy(),
            lambda: self.lambda.to_f64_lossy(),
            epsilon: self.epsilon.to_f64_lossy(),
            poly: self.poly.to_f64(),
            prefactor: Prefactor {
                plus_power: self.prefactor.plus_power,
                minus_power: self.prefactor.minus_power,
                rate: self.prefactor.rate.to_f64_lossy(),
            },
            local: self.local.clone(),
        }
    }
}

impl SeparatedSolution<f64> {
    fn check_domain(&self, x: f64) -> Result<()> {
        let ok = match self.kind {
            Kind::Radial => x >= 1.0,
            Kind::Angular => (-1.0..=1.0).contains(&x),
        };
        if ok && x.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain {
                what: match self.kind {
                    Kind::Radial => "radial [1, inf)",
                    Kind::Angular => "angular [-1, 1]",
                },
                coord: match self.kind {
                    Kind::Radial => "xi",
                    Kind::Angular => "eta",
                },
                value: x,
            })
        }
    }

    /// `xi - 1` for radial factors, `1 - eta` for angular ones.
    fn minus_base(&self, x: f64) -> (f64, f64) {
        match self.kind {
            Kind::Radial => (x - 1.0, 1.0),
            Kind::Angular => (1.0 - x, -1.0),
        }
    }

    fn prefactor_value(&self, x: f64) -> f64 {
        let (b, _) = self.minus_base(x);
        let pf = &self.prefactor;
        (1.0 + x).powf(pf.plus_power) * b.max(0.0).powf(pf.minus_power) * (pf.rate * x).exp()
    }

    /// Value from precomputed `1 + x` and `x - 1` (radial) or `1 - x`
    /// (angular), which callers may know more accurately than `x` itself.
    pub fn evaluate_bases(&self, x: f64, plus: f64, minus: f64) -> f64 {
        let pf = &self.prefactor;
        let t = match self.kind {
            Kind::Radial => minus,
            Kind::Angular => x,
        };
        let u = self.local.iter().rev().fold(0.0, |acc, c| acc * t + c);
        plus.max(0.0).powf(pf.plus_power) * minus.max(0.0).powf(pf.minus_power) * (pf.rate * x).exp() * u
    }

    /// Polynomial part `u(x)` with its first two derivatives.
    pub fn polynomial_derivatives(&self, x: f64) -> (f64, f64, f64) {
        let t = match self.kind {
            Kind::Radial => x - 1.0,
            Kind::Angular => x,
        };
        Poly::new(self.local.clone()).eval_with_derivatives(t)
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        let (u, _, _) = self.polynomial_derivatives(x);
        Ok(self.prefactor_value(x) * u)
    }

    /// Value, first and second derivative at an interior point, with the
    /// prefactor differentiated analytically.
    pub fn derivatives(&self, x: f64) -> Result<(f64, f64, f64)> {
        self.check_domain(x)?;
        let (b, sign) = self.minus_base(x);
        let a = 1.0 + x;
        let pf = &self.prefactor;
        let log_d = pf.plus_power / a + sign * pf.minus_power / b + pf.rate;
        let log_dd = -pf.plus_power / (a * a) - pf.minus_power / (b * b);
        let p = self.prefactor_value(x);
        let (u, du, ddu) = self.polynomial_derivatives(x);
        Ok((
            p * u,
            p * (du + log_d * u),
            p * (ddu + 2.0 * log_d * du + (log_d * log_d + log_dd) * u),
        ))
    }

    /// Relative residual of the separated equation at an interior point:
    /// `|sum of terms| / sum of |terms|`.
    pub fn ode_residual(&self, x: f64) -> Result<f64> {
        let (f, df, ddf) = self.derivatives(x)?;
        let r = self.centers.r()?;
        let charge = self.centers.effective_charge(self.kind)?;
        let coef = self.energy * r * r / 2.0 * x * x + r * charge * x + self.lambda;
        let terms = match self.kind {
            Kind::Radial => [(x * x - 1.0) * ddf, x * df, coef * f],
            Kind::Angular => [(1.0 - x * x) * ddf, -x * df, -coef * f],
        };
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        let sum: f64 = terms.iter().sum();
        Ok(if scale == 0.0 { 0.0 } else { sum.abs() / scale })
    }
}

pub fn evaluate_factor(sol: &SeparatedSolution<f64>, coord: f64) -> Result<f64> {
    sol.evaluate(coord)
}
