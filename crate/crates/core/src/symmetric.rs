//! Equal charges. The angular equation becomes the Mathieu equation in
//! `nu` (`eta = cos nu`) with `a = -lambda - E R^2/4` and `p = E R^2/8`, so
//! only the radial factor stays elementary. Matching asks for `R` where the
//! radial separation constant puts `a` on a characteristic curve.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval;
use crate::mathieu::{MathieuCache, MathieuCharacteristic, Parity};
use crate::matching::{
    dedupe, lambda_table, AngularFactor, ElementaryEigenfunction, FactorChoice, MatchPoint, MathieuFactor,
    Provenance,
};
use crate::scan::{self, ScanOptions};
use crate::separation::{self, CenterPair, Kind, SeparatedSolution, SolutionType};

/// `p = E R^2 / 8`.
pub fn mathieu_p(energy: f64, r: f64) -> f64 {
    energy * r * r / 8.0
}

/// `a = -lambda - E R^2 / 4`.
pub fn mathieu_a(lambda: f64, energy: f64, r: f64) -> f64 {
    -lambda - energy * r * r / 4.0
}

fn equal_pair(z: f64) -> Result<CenterPair<f64>> {
    CenterPair::new(z, z)
}

fn radial_lambda(choice: FactorChoice, centers: &CenterPair<f64>, r: f64) -> Result<f64> {
    separation::lambda_value(Kind::Radial, choice.sol_type, choice.level, choice.branch, &centers.with_r(r)?)
}

/// All `R` in `(0, r_max]` where the radial branch meets `a_n(p)` (cosine)
/// or `b_n(p)` (sine).
pub fn match_r_symmetric(
    radial: FactorChoice,
    z: f64,
    parity: Parity,
    order: usize,
    opts: &ScanOptions,
    cache: &MathieuCache,
) -> Result<Vec<(MatchPoint, MathieuCharacteristic)>> {
    let all = match_orders(radial.sol_type, radial.level, &[radial.branch], z, &[(parity, order)], opts, cache)?;
    Ok(all.into_iter().map(|(_, m, c)| (m, c)).collect())
}

type SymmetricMatch = (FactorChoice, MatchPoint, MathieuCharacteristic);

/// Shared scan for one radial `(type, level)`: the branch table and the
/// characteristic values are computed once on the grid.
fn match_orders(
    t: SolutionType,
    level: usize,
    branches: &[usize],
    z: f64,
    orders: &[(Parity, usize)],
    opts: &ScanOptions,
    cache: &MathieuCache,
) -> Result<Vec<SymmetricMatch>> {
    let centers = equal_pair(z)?;
    for &b in branches {
        if b == 0 || b > level + 1 {
            return Err(Error::BranchOutOfRange { branch: b, max: level + 1 });
        }
    }
    let energy = separation::radial_energy(t, level, &centers);
    let grid = scan::scan_grid(opts.r_max, opts.grid_points);
    let table = lambda_table(Kind::Radial, t, level, &centers, &grid)?;
    let mut out = Vec::new();
    for &(parity, order) in orders {
        let chars: Vec<f64> = grid
            .par_iter()
            .map(|&r| cache.get(parity, order, mathieu_p(energy, r)).map(|c| c.value))
            .collect::<Result<_>>()?;
        for &j in branches {
            let choice = FactorChoice { sol_type: t, level, branch: j };
            let h = |r: f64| -> Result<f64> {
                let lam = radial_lambda(choice, &centers, r)?;
                Ok(mathieu_a(lam, energy, r) - cache.get(parity, order, mathieu_p(energy, r))?.value)
            };
            let values: Vec<f64> = grid
                .iter()
                .zip(&table)
                .zip(&chars)
                .map(|((&r, lams), &c)| mathieu_a(lams[j - 1], energy, r) - c)
                .collect();
            for r in scan::bisect_sign_changes(&grid, &values, h, opts.tol)? {
                let lambda = radial_lambda(choice, &centers, r)?;
                let ch = cache.get(parity, order, mathieu_p(energy, r))?;
                let gap = (mathieu_a(lambda, energy, r) - ch.value).abs();
                out.push((choice, MatchPoint { r, lambda, gap }, ch));
            }
        }
    }
    Ok(out)
}

/// Product of the elementary radial factor and the Mathieu factor in `nu`.
pub fn build_mixed_eigenfunction(
    radial: SeparatedSolution<f64>,
    characteristic: MathieuCharacteristic,
    point: &MatchPoint,
    opts: &ScanOptions,
) -> Result<ElementaryEigenfunction> {
    let centers = radial.centers.clone();
    let r = *centers.r()?;
    let want_p = mathieu_p(radial.energy, r);
    if (characteristic.p - want_p).abs() > 1e-12 * want_p.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "Mathieu parameter {} does not match E R^2/8 = {want_p}",
            characteristic.p
        )));
    }
    Ok(ElementaryEigenfunction {
        energy: radial.energy,
        lambda: radial.lambda,
        centers,
        radial,
        angular: AngularFactor::Mathieu(MathieuFactor { characteristic }),
        normalization: None,
        provenance: Provenance {
            pair: None,
            lambda_gap: point.gap,
            r_max: opts.r_max,
            grid_points: opts.grid_points,
        },
        exact: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricOptions {
    /// Largest radial level `n^r`.
    pub nr_max: usize,
    /// Largest Mathieu order.
    pub mathieu_n_max: usize,
    /// Defaults to `20 max(1, 1/(2Z))`.
    pub r_max: Option<f64>,
    pub tol: f64,
    pub grid_points: usize,
}

impl Default for SymmetricOptions {
    fn default() -> Self {
        SymmetricOptions {
            nr_max: 2,
            mathieu_n_max: 2,
            r_max: None,
            tol: 1e-12,
            grid_points: 2000,
        }
    }
}

impl SymmetricOptions {
    pub fn scan(&self, z: f64) -> ScanOptions {
        let mut s = ScanOptions::for_total_charge(2.0 * z);
        if let Some(r) = self.r_max {
            s.r_max = r;
        }
        s.tol = self.tol;
        s.grid_points = self.grid_points;
        s
    }

    fn orders(&self) -> Vec<(Parity, usize)> {
        let mut v: Vec<(Parity, usize)> = (0..=self.mathieu_n_max).map(|n| (Parity::Cosine, n)).collect();
        v.extend((1..=self.mathieu_n_max).map(|n| (Parity::Sine, n)));
        v
    }
}

/// Mixed radial x Mathieu eigenfunctions for `Z1 = Z2 = z`, normalized and
/// in canonical order.
pub fn solve_symmetric(z: f64, opts: &SymmetricOptions) -> Result<Vec<ElementaryEigenfunction>> {
    let centers = equal_pair(z)?;
    let scan_opts = opts.scan(z);
    if !(scan_opts.r_max > 0.0) {
        return Err(Error::InvalidParameter(format!("r_max must be positive, got {}", scan_opts.r_max)));
    }
    let cache = MathieuCache::new();
    let orders = opts.orders();
    let combos: Vec<(SolutionType, usize)> = SolutionType::ALL
        .iter()
        .flat_map(|&t| (0..=opts.nr_max).map(move |n| (t, n)))
        .collect();
    let found: Vec<Vec<ElementaryEigenfunction>> = combos
        .par_iter()
        .map(|&(t, level)| {
            let branches: Vec<usize> = (1..=level + 1).collect();
            let mut sols = Vec::new();
            for (choice, point, ch) in match_orders(t, level, &branches, z, &orders, &scan_opts, &cache)? {
                let radial = separation::assemble_factor(
                    Kind::Radial,
                    choice.sol_type,
                    choice.level,
                    choice.branch,
                    &centers.with_r(point.r)?,
                )?;
                let mut sol = build_mixed_eigenfunction(radial, ch, &point, &scan_opts)?;
                match eval::normalize(&sol) {
                    Ok(n) => {
                        sol.normalization = Some(n);
                        sols.push(sol);
                    }
                    Err(Error::NormalizationDivergence(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(sols)
        })
        .collect::<Result<_>>()?;
    Ok(dedupe(found.into_iter().flatten().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_constants() {
        // the worked example: a = 2.298 at R = 1.335, lambda = 1.268, E = -8
        let a = mathieu_a(1.268, -8.0, 1.335);
        assert!((a - 2.296).abs() < 5e-3, "{a}");
        assert!((mathieu_p(-8.0, 1.335) + 1.782).abs() < 1e-3);
    }

    #[test]
    fn first_mixed_match() {
        let opts = SymmetricOptions::default().scan(3.0);
        let cache = MathieuCache::new();
        let radial = FactorChoice { sol_type: SolutionType::A, level: 1, branch: 2 };
        let m = match_r_symmetric(radial, 3.0, Parity::Sine, 1, &opts, &cache).unwrap();
        assert!(
            m.iter().any(|(p, c)| (p.r - 1.335).abs() < 5e-4 && (p.lambda - 1.268).abs() < 5e-4 && (c.value - 2.298).abs() < 5e-4),
            "{m:?}"
        );
    }
}
