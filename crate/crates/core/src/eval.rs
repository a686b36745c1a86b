//! Pointwise evaluation, normalization, density grids and the finite
//! difference check of the full two-center Schrodinger equation
//! `(-1/2 Lap - Z1/r1 - Z2/r2) Psi = E Psi`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coords::cartesian_to_elliptic;
use crate::error::{Error, Result};
use crate::matching::{AngularFactor, ElementaryEigenfunction};
use crate::mathieu::mathieu_eval;
use crate::quadrature::{graded_breaks, CompositeRule};

/// Tail cut for the elliptic normalization, relative to the peak.
const TAIL_CUT: f64 = 1e-18;
/// Tail cut for the Cartesian cross-check.
const CARTESIAN_TAIL_CUT: f64 = 1e-20;
const NORM_REL_CHANGE: f64 = 1e-10;
/// Radial weight cut for the default density window.
const WINDOW_CUT: f64 = 1e-8;
/// Points closer than this fraction of `R` to a center or the axis are not sampled.
const EXCLUSION: f64 = 1e-2;
const RESIDUAL_FLOOR: f64 = 1e-30;

/// A stationary state of a planar Coulomb problem, as seen by the residual oracle.
pub trait Stationary: Sync {
    fn psi(&self, x1: f64, x2: f64) -> f64;
    fn energy(&self) -> f64;
    /// `(x1, x2, Z)` of every center.
    fn charges(&self) -> Vec<(f64, f64, f64)>;
    /// Half-width of the square the oracle samples from.
    fn extent(&self) -> f64;
    /// Radius around each center that is never sampled.
    fn center_exclusion(&self) -> f64;
    /// Half-width of a strip around `x2 = 0` that is never sampled and that
    /// finite-difference stencils may not cross. Separated products may have
    /// kinks on the axis.
    fn axis_strip(&self) -> Option<f64>;
}

/// Single center at the origin: `Psi = exp(-2 Z r)`, `E = -2 Z^2`.
#[derive(Debug, Clone, Copy)]
pub struct PlanarHydrogen {
    pub z: f64,
}

impl Stationary for PlanarHydrogen {
    fn psi(&self, x1: f64, x2: f64) -> f64 {
        (-2.0 * self.z * x1.hypot(x2)).exp()
    }

    fn energy(&self) -> f64 {
        -2.0 * self.z * self.z
    }

    fn charges(&self) -> Vec<(f64, f64, f64)> {
        vec![(0.0, 0.0, self.z)]
    }

    fn extent(&self) -> f64 {
        3.0 / (2.0 * self.z)
    }

    fn center_exclusion(&self) -> f64 {
        EXCLUSION / self.z
    }

    fn axis_strip(&self) -> Option<f64> {
        None
    }
}

/// Un-normalized `F(xi) G(eta or nu)`.
pub fn raw_psi(sol: &ElementaryEigenfunction, x1: f64, x2: f64) -> f64 {
    let pt = cartesian_to_elliptic(x1, x2, sol.r());
    let f = sol.radial.evaluate_bases(pt.xi, pt.xi + 1.0, pt.xi_m1);
    let g = match &sol.angular {
        AngularFactor::Polynomial(a) => a.evaluate_bases(pt.eta, pt.one_p_eta, pt.one_m_eta),
        AngularFactor::Mathieu(m) => mathieu_eval(&m.characteristic, pt.nu),
    };
    f * g
}

/// `N F G` at a Cartesian point (`N = 1` until normalized).
pub fn evaluate_psi(sol: &ElementaryEigenfunction, x1: f64, x2: f64) -> f64 {
    sol.normalization.unwrap_or(1.0) * raw_psi(sol, x1, x2)
}

impl Stationary for ElementaryEigenfunction {
    fn psi(&self, x1: f64, x2: f64) -> f64 {
        evaluate_psi(self, x1, x2)
    }

    fn energy(&self) -> f64 {
        self.energy
    }

    fn charges(&self) -> Vec<(f64, f64, f64)> {
        let r = self.r();
        vec![(r / 2.0, 0.0, self.centers.z1), (-r / 2.0, 0.0, self.centers.z2)]
    }

    fn extent(&self) -> f64 {
        self.r() / 2.0 + 3.0 / (2.0 * self.energy.abs()).sqrt()
    }

    fn center_exclusion(&self) -> f64 {
        EXCLUSION * self.r()
    }

    fn axis_strip(&self) -> Option<f64> {
        Some(EXCLUSION * self.r())
    }
}

fn radial_at_mu(sol: &ElementaryEigenfunction, mu: f64) -> f64 {
    let s = (0.5 * mu).sinh();
    let xi = mu.cosh();
    sol.radial.evaluate_bases(xi, xi + 1.0, 2.0 * s * s)
}

fn angular_at_nu(sol: &ElementaryEigenfunction, nu: f64) -> f64 {
    match &sol.angular {
        AngularFactor::Polynomial(a) => {
            let (s, c) = (0.5 * nu).sin_cos();
            a.evaluate_bases(nu.cos(), 2.0 * c * c, 2.0 * s * s)
        }
        AngularFactor::Mathieu(m) => mathieu_eval(&m.characteristic, nu),
    }
}

/// Smallest `mu` past the peak of `F(cosh mu)^2 cosh^2 mu` where it drops
/// below `cut` times the peak.
fn radial_cutoff(sol: &ElementaryEigenfunction, cut: f64) -> Result<f64> {
    const STEP: f64 = 0.01;
    const MU_LIMIT: f64 = 60.0;
    let weight = |mu: f64| {
        let f = radial_at_mu(sol, mu);
        f * f * mu.cosh().powi(2)
    };
    let mut peak = 0.0f64;
    let mut mu = 0.0;
    while mu < MU_LIMIT {
        let w = weight(mu);
        if !w.is_finite() {
            break;
        }
        peak = peak.max(w);
        if peak > 0.0 && w < cut * peak && mu > STEP {
            return Ok(mu);
        }
        mu += STEP;
    }
    Err(Error::NormalizationDivergence(format!(
        "radial factor does not decay by {cut:e} below its peak before mu = {mu:.2} (xi = {:.3e})",
        mu.cosh()
    )))
}

/// Integrates `f` on `[a, b]` with composite Gauss rules, doubling the
/// panel count until the relative change falls below tolerance.
fn converged_integral<const K: usize>(a: f64, b: f64, f: impl Fn(f64) -> [f64; K]) -> Result<[f64; K]> {
    let order = 16;
    let mut panels = 4;
    let integrate = |panels: usize| {
        let breaks: Vec<f64> = (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect();
        let rule = CompositeRule::new(&breaks, order);
        let mut acc = [0.0; K];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(x);
            for k in 0..K {
                acc[k] += w * v[k];
            }
        }
        acc
    };
    let mut prev = integrate(panels);
    while panels < 4096 {
        panels *= 2;
        let next = integrate(panels);
        let change = (0..K)
            .map(|k| (next[k] - prev[k]).abs() / next[k].abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        if change < NORM_REL_CHANGE {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NormalizationDivergence("quadrature did not converge".into()))
}

/// `int |Psi|^2 dx1 dx2` of the un-normalized product.
///
/// With `xi = cosh mu`, `eta = cos nu` the area element is
/// `(R^2/4)(cosh^2 mu - cos^2 nu) dmu dnu` on `mu >= 0`, `nu in [-pi, pi]`,
/// so the integral splits into one-dimensional pieces.
pub fn elliptic_integral(sol: &ElementaryEigenfunction) -> Result<f64> {
    use std::f64::consts::PI;
    let r = sol.r();
    let mu_max = radial_cutoff(sol, TAIL_CUT)?;
    let [a0, a2] = converged_integral(0.0, mu_max, |mu| {
        let f = radial_at_mu(sol, mu);
        let c = mu.cosh();
        [f * f, f * f * c * c]
    })?;
    let [b0, b2] = converged_integral(-PI, PI, |nu| {
        let g = angular_at_nu(sol, nu);
        let c = nu.cos();
        [g * g, g * g * c * c]
    })?;
    let total = r * r / 4.0 * (a2 * b0 - a0 * b2);
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::NormalizationDivergence(format!("integral evaluated to {total}")));
    }
    Ok(total)
}

/// Multiplier `N` with `int |N Psi|^2 = 1`.
pub fn normalize(sol: &ElementaryEigenfunction) -> Result<f64> {
    Ok(1.0 / elliptic_integral(sol)?.sqrt())
}

/// `int |Psi|^2` by tensor Gauss rules in Cartesian coordinates, panels
/// graded toward both centers and the axis. Independent of the elliptic
/// route; used as a cross-check.
pub fn cartesian_integral(sol: &ElementaryEigenfunction) -> Result<f64> {
    const ORDER: usize = 12;
    const MIN_FRAC: f64 = 1e-7;
    const UNIFORM: usize = 8;
    let r = sol.r();
    let xi_max = radial_cutoff(sol, CARTESIAN_TAIL_CUT)?.cosh();
    let x_far = r / 2.0 * xi_max;
    let y_far = r / 2.0 * (xi_max * xi_max - 1.0).sqrt();
    let toward_right = |a: f64, b: f64| -> Vec<f64> {
        graded_breaks(0.0, b - a, MIN_FRAC, UNIFORM).iter().rev().map(|t| b - t).collect()
    };
    let toward_left = |a: f64, b: f64| -> Vec<f64> { graded_breaks(a, b, MIN_FRAC, UNIFORM) };
    let h = r / 2.0;
    let segments = [
        toward_right(-x_far, -h),
        toward_left(-h, 0.0),
        toward_right(0.0, h),
        toward_left(h, x_far),
    ];
    let mut xs = Vec::new();
    let mut wx = Vec::new();
    for seg in &segments {
        let rule = CompositeRule::new(seg, ORDER);
        xs.extend(rule.nodes);
        wx.extend(rule.weights);
    }
    let ry = CompositeRule::new(&graded_breaks(0.0, y_far, MIN_FRAC, UNIFORM), ORDER);
    let total: f64 = ry
        .nodes
        .par_iter()
        .zip(&ry.weights)
        .map(|(&y, &w)| {
            let row: f64 = xs.iter().zip(&wx).map(|(&x, &v)| v * raw_psi(sol, x, y).powi(2)).sum();
            w * row
        })
        .sum();
    Ok(2.0 * total)
}

/// Normalization constant from the Cartesian cross-check.
pub fn cartesian_norm(sol: &ElementaryEigenfunction) -> Result<f64> {
    Ok(1.0 / cartesian_integral(sol)?.sqrt())
}

/// Fourth-order central second and first differences along one axis.
fn stencil(f: impl Fn(f64) -> f64, h: f64) -> (f64, f64) {
    let (m2, m1, z, p1, p2) = (f(-2.0 * h), f(-h), f(0.0), f(h), f(2.0 * h));
    let dd = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
    let d = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    (dd, d)
}

/// Relative residual of the full equation at one point. The scale is
/// `|E| (|Psi| + l |grad Psi|)` with `l` a hundredth of the decay length
/// `1/sqrt(2|E|)`, which stays meaningful on nodal lines.
pub fn residual_at<S: Stationary + ?Sized>(sol: &S, x1: f64, x2: f64) -> f64 {
    let charges = sol.charges();
    let nearest = charges
        .iter()
        .map(|&(cx, cy, _)| (x1 - cx).hypot(x2 - cy))
        .fold(f64::INFINITY, f64::min);
    let e = sol.energy();
    let guard = 0.01 / (2.0 * e.abs()).sqrt();
    let mut h = guard.min(1e-3 * x1.hypot(x2).max(1.0)).min(0.005 * nearest);
    if sol.axis_strip().is_some() {
        h = h.min(0.1 * x2.abs());
    }
    let psi = sol.psi(x1, x2);
    let (d11, d1) = stencil(|t| sol.psi(x1 + t, x2), h);
    let (d22, d2) = stencil(|t| sol.psi(x1, x2 + t), h);
    let potential: f64 = charges
        .iter()
        .map(|&(cx, cy, z)| -z / (x1 - cx).hypot(x2 - cy))
        .sum();
    let res = -0.5 * (d11 + d22) + (potential - e) * psi;
    res.abs() / (e.abs() * (psi.abs() + guard * d1.hypot(d2)) + RESIDUAL_FLOOR)
}

/// Deterministic sample points for the oracle.
pub fn residual_samples<S: Stationary + ?Sized>(sol: &S, count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = sol.extent();
    let charges = sol.charges();
    let keep = |x1: f64, x2: f64| {
        let far_from_centers = charges
            .iter()
            .all(|&(cx, cy, _)| (x1 - cx).hypot(x2 - cy) > sol.center_exclusion());
        let off_axis = sol.axis_strip().is_none_or(|w| x2.abs() > w);
        far_from_centers && off_axis && sol.psi(x1, x2).abs() > 1e-250
    };
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let x1 = rng.gen_range(-b..b);
        let x2 = rng.gen_range(-b..b);
        if keep(x1, x2) {
            out.push((x1, x2));
        }
    }
    out
}

/// Largest relative residual over `count` seeded sample points.
pub fn pde_residual<S: Stationary + ?Sized>(sol: &S, count: usize, seed: u64) -> f64 {
    residual_samples(sol, count, seed)
        .par_iter()
        .map(|&(x1, x2)| residual_at(sol, x1, x2))
        .reduce(|| 0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x1_min: f64,
    pub x1_max: f64,
    pub x2_min: f64,
    pub x2_max: f64,
}

impl Window {
    /// Parses `x1min,x1max,x2min,x2max`.
    pub fn parse(s: &str) -> Option<Self> {
        let v: Vec<f64> = s.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
        match v[..] {
            [a, b, c, d] if a < b && c < d => Some(Window { x1_min: a, x1_max: b, x2_min: c, x2_max: d }),
            _ => None,
        }
    }

    /// Square window around both centers reaching out to where the radial
    /// weight has dropped to `1e-8` of its peak.
    pub fn around(sol: &ElementaryEigenfunction) -> Self {
        let b = radial_cutoff(sol, WINDOW_CUT).map_or_else(|_| sol.extent(), |mu| sol.r() / 2.0 * mu.cosh());
        Window { x1_min: -b, x1_max: b, x2_min: -b, x2_max: b }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    /// `|N Psi|^2`, rows of constant `x2`, `x1` varying fastest.
    pub values: Vec<f64>,
    pub label: String,
    pub normalization: Option<f64>,
}

impl DensityGrid {
    pub fn x1(&self, i: usize) -> f64 {
        let w = &self.window;
        w.x1_min + (w.x1_max - w.x1_min) * i as f64 / (self.nx - 1) as f64
    }

    pub fn x2(&self, j: usize) -> f64 {
        let w = &self.window;
        w.x2_min + (w.x2_max - w.x2_min) * j as f64 / (self.ny - 1) as f64
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// `(i, j, rho)` of the largest sample.
    pub fn argmax(&self) -> (usize, usize, f64) {
        let (k, v) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc });
        (k % self.nx, k / self.nx, v)
    }

    pub fn cell_area(&self) -> f64 {
        let w = &self.window;
        (w.x1_max - w.x1_min) / (self.nx - 1) as f64 * (w.x2_max - w.x2_min) / (self.ny - 1) as f64
    }

    /// CSV with header `x1,x2,rho`, one row per sample, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x1,x2,rho")?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                writeln!(out, "{:.16e},{:.16e},{:.16e}", self.x1(i), self.x2(j), self.at(i, j))?;
            }
        }
        Ok(())
    }
}

/// `|N Psi|^2` sampled on a uniform `nx x ny` grid over `window`.
pub fn density_grid(sol: &ElementaryEigenfunction, window: Window, nx: usize, ny: usize) -> Result<DensityGrid> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidParameter(format!("grid needs at least 2x2 points, got {nx}x{ny}")));
    }
    let mut grid = DensityGrid {
        window,
        nx,
        ny,
        values: Vec::new(),
        label: String::new(),
        normalization: sol.normalization,
    };
    let rows: Vec<Vec<f64>> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let y = grid.x2(j);
            (0..nx).map(|i| evaluate_psi(sol, grid.x1(i), y).powi(2)).collect()
        })
        .collect();
    grid.values = rows.concat();
    Ok(grid)
}
