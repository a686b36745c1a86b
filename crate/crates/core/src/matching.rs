//! Elementary eigenfunctions for unequal charges.
//!
//! Radial and angular factors share `E` exactly when
//! `n1 |Z2 - Z1| = n2 (Z1 + Z2)`, where `n1`, `n2` are the energy
//! denominators `2n + gamma + delta` of the two factors. For each such pair
//! the remaining condition `lambda_radial(R) = lambda_angular(R)` is solved
//! for the intercenter distance.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval;
use crate::mathieu::MathieuCharacteristic;
use crate::scalar::{convergents, Rational, Scalar};
use crate::scan::{self, ScanOptions};
use crate::separation::{self, CenterPair, Kind, SeparatedSolution, SolutionType};

/// Largest denominator tried when promoting a matched `R` to a rational.
const EXACT_R_MAX_DEN: u64 = 1_000_000;
/// Two matches closer than this in `R` and `lambda` are the same solution.
const DEDUPE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiophantinePair {
    pub n1: usize,
    pub n2: usize,
}

/// Type, level and 1-based branch of one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactorChoice {
    #[serde(rename = "type")]
    pub sol_type: SolutionType,
    pub level: usize,
    pub branch: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatchCandidate {
    pub radial: FactorChoice,
    pub angular: FactorChoice,
    pub pair: DiophantinePair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchPoint {
    pub r: f64,
    pub lambda: f64,
    /// `|lambda_radial - lambda_angular|` at the returned `R`.
    pub gap: f64,
}

/// Angular part of a product solution.
#[derive(Debug, Clone)]
pub enum AngularFactor {
    Polynomial(SeparatedSolution<f64>),
    Mathieu(MathieuFactor),
}

/// `ce_n(p, nu)` or `se_n(p, nu)` with `p = E R^2 / 8`.
#[derive(Debug, Clone)]
pub struct MathieuFactor {
    pub characteristic: MathieuCharacteristic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub pair: Option<DiophantinePair>,
    pub lambda_gap: f64,
    pub r_max: f64,
    pub grid_points: usize,
}

/// Rational reconstruction of a match whose `R`, `E` and `lambda` are exact.
#[derive(Debug, Clone)]
pub struct ExactMatch {
    pub r: Rational,
    pub energy: Rational,
    pub lambda: Rational,
    pub radial: SeparatedSolution<Rational>,
    pub angular: SeparatedSolution<Rational>,
}

#[derive(Debug, Clone)]
pub struct ElementaryEigenfunction {
    /// Charges with the matched `R` set.
    pub centers: CenterPair<f64>,
    pub energy: f64,
    pub lambda: f64,
    pub radial: SeparatedSolution<f64>,
    pub angular: AngularFactor,
    /// Multiplier making the density integrate to one.
    pub normalization: Option<f64>,
    pub provenance: Provenance,
    pub exact: Option<ExactMatch>,
}

impl ElementaryEigenfunction {
    pub fn r(&self) -> f64 {
        self.centers.r.expect("matched R")
    }

    pub fn is_mixed(&self) -> bool {
        matches!(self.angular, AngularFactor::Mathieu(_))
    }

    /// Canonical order: larger `|E|` first, then smaller `R`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        other
            .energy
            .abs()
            .total_cmp(&self.energy.abs())
            .then(self.r().total_cmp(&other.r()))
            .then(self.lambda.total_cmp(&other.lambda))
    }
}

/// Pairs `(n1, n2)` with `n1 <= n_max`. With `|Z2-Z1|/(Z1+Z2) = u/v` in
/// lowest terms these are `(v m, u m)`, `m = 1, 2, ...`.
pub fn solve_diophantine(centers: &CenterPair<Rational>, n_max: usize) -> Result<Vec<DiophantinePair>> {
    let diff = centers.effective_charge(Kind::Angular)?.abs();
    let sum = centers.effective_charge(Kind::Radial)?;
    let ratio = diff / sum;
    let (u, v) = (ratio.numer().clone(), ratio.denom().clone());
    debug_assert!(u.gcd(&v) == num_bigint::BigInt::from(1));
    let (u, v) = match (u.to_usize(), v.to_usize()) {
        (Some(u), Some(v)) if v > 0 => (u, v),
        _ => return Ok(Vec::new()),
    };
    Ok((1..)
        .map(|m| DiophantinePair { n1: v * m, n2: u * m })
        .take_while(|p| p.n1 <= n_max)
        .collect())
}

/// `(type, level)` choices whose energy denominator is `n`.
pub fn decode_denominator(n: usize) -> Vec<(SolutionType, usize)> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    if n % 2 == 1 {
        out.push((SolutionType::A, (n - 1) / 2));
        if n >= 3 {
            out.push((SolutionType::B, (n - 3) / 2));
        }
    } else {
        out.push((SolutionType::C, (n - 2) / 2));
        out.push((SolutionType::D, (n - 2) / 2));
    }
    out
}

/// Every radial x angular decoding of the pair, and every branch pair.
pub fn enumerate_candidates(pair: DiophantinePair) -> Vec<MatchCandidate> {
    let mut out = Vec::new();
    for (rt, rn) in decode_denominator(pair.n1) {
        for (at, an) in decode_denominator(pair.n2) {
            for j in 1..=rn + 1 {
                for k in 1..=an + 1 {
                    out.push(MatchCandidate {
                        radial: FactorChoice { sol_type: rt, level: rn, branch: j },
                        angular: FactorChoice { sol_type: at, level: an, branch: k },
                        pair,
                    });
                }
            }
        }
    }
    out
}

fn lambdas_at(kind: Kind, t: SolutionType, level: usize, centers: &CenterPair<f64>, r: f64) -> Result<Vec<f64>> {
    let c = centers.with_r(r)?;
    separation::branch_roots(kind, t, level, &c)?
        .iter()
        .map(|root| separation::lambda_closed_form(kind, t, level, &root.q, &c))
        .collect()
}

/// Branch-tracked separation constants of one factor over the scan grid.
/// Since `lambda = const(R) - q`, ascending `q` is descending `lambda`; the
/// returned rows are indexed by branch `j - 1`.
pub(crate) fn lambda_table(
    kind: Kind,
    t: SolutionType,
    level: usize,
    centers: &CenterPair<f64>,
    grid: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let q_table = scan::tracked_roots(grid, |r| {
        let c = centers.with_r(r)?;
        Ok(separation::branch_roots(kind, t, level, &c)?.iter().map(|x| x.q).collect())
    })?;
    grid.iter()
        .zip(q_table)
        .map(|(&r, qs)| {
            let c = centers.with_r(r)?;
            qs.iter()
                .map(|q| separation::lambda_closed_form(kind, t, level, q, &c))
                .collect()
        })
        .collect()
}

fn lambda_f64(kind: Kind, choice: FactorChoice, centers: &CenterPair<f64>, r: f64) -> Result<f64> {
    let all = lambdas_at(kind, choice.sol_type, choice.level, centers, r)?;
    all.get(choice.branch - 1).copied().ok_or(Error::BranchOutOfRange {
        branch: choice.branch,
        max: all.len(),
    })
}

fn check_candidate(candidate: &MatchCandidate, centers: &CenterPair<f64>) -> Result<()> {
    centers.effective_charge(Kind::Angular)?;
    for (choice, n) in [(candidate.radial, candidate.pair.n1), (candidate.angular, candidate.pair.n2)] {
        if 2 * choice.level + choice.sol_type.offset() != n {
            return Err(Error::InvalidParameter(format!(
                "{choice:?} does not have energy denominator {n}"
            )));
        }
        if choice.branch == 0 || choice.branch > choice.level + 1 {
            return Err(Error::BranchOutOfRange {
                branch: choice.branch,
                max: choice.level + 1,
            });
        }
    }
    Ok(())
}

/// Roots of `g(R) = lambda_radial(R) - lambda_angular(R)` for the listed
/// branch pairs of one radial/angular type combination, sharing the tables.
fn match_branches(
    radial: (SolutionType, usize),
    angular: (SolutionType, usize),
    branches: &[(usize, usize)],
    centers: &CenterPair<f64>,
    opts: &ScanOptions,
) -> Result<Vec<((usize, usize), MatchPoint)>> {
    let grid = scan::scan_grid(opts.r_max, opts.grid_points);
    let rt = lambda_table(Kind::Radial, radial.0, radial.1, centers, &grid)?;
    let at = lambda_table(Kind::Angular, angular.0, angular.1, centers, &grid)?;
    let mut out = Vec::new();
    for &(j, k) in branches {
        let rc = FactorChoice { sol_type: radial.0, level: radial.1, branch: j };
        let ac = FactorChoice { sol_type: angular.0, level: angular.1, branch: k };
        let values: Vec<f64> = rt.iter().zip(&at).map(|(a, b)| a[j - 1] - b[k - 1]).collect();
        let g = |r: f64| Ok(lambda_f64(Kind::Radial, rc, centers, r)? - lambda_f64(Kind::Angular, ac, centers, r)?);
        for r in scan::bisect_sign_changes(&grid, &values, g, opts.tol)? {
            let lr = lambda_f64(Kind::Radial, rc, centers, r)?;
            let la = lambda_f64(Kind::Angular, ac, centers, r)?;
            out.push(((j, k), MatchPoint { r, lambda: 0.5 * (lr + la), gap: (lr - la).abs() }));
        }
    }
    Ok(out)
}

/// All `R` in `(0, r_max]` where the candidate's separation constants agree.
pub fn match_r(candidate: &MatchCandidate, centers: &CenterPair<f64>, opts: &ScanOptions) -> Result<Vec<MatchPoint>> {
    check_candidate(candidate, centers)?;
    let found = match_branches(
        (candidate.radial.sol_type, candidate.radial.level),
        (candidate.angular.sol_type, candidate.angular.level),
        &[(candidate.radial.branch, candidate.angular.branch)],
        centers,
        opts,
    )?;
    Ok(found.into_iter().map(|(_, m)| m).collect())
}

/// Both factors assembled at the matched `R`; normalization left unset.
pub fn build_eigenfunction(
    candidate: &MatchCandidate,
    centers: &CenterPair<f64>,
    point: &MatchPoint,
    opts: &ScanOptions,
) -> Result<ElementaryEigenfunction> {
    let c = centers.with_r(point.r)?;
    let radial = separation::assemble_factor(
        Kind::Radial,
        candidate.radial.sol_type,
        candidate.radial.level,
        candidate.radial.branch,
        &c,
    )?;
    let angular = separation::assemble_factor(
        Kind::Angular,
        candidate.angular.sol_type,
        candidate.angular.level,
        candidate.angular.branch,
        &c,
    )?;
    Ok(ElementaryEigenfunction {
        energy: radial.energy,
        lambda: point.lambda,
        centers: c,
        radial,
        angular: AngularFactor::Polynomial(angular),
        normalization: None,
        provenance: Provenance {
            pair: Some(candidate.pair),
            lambda_gap: point.gap,
            r_max: opts.r_max,
            grid_points: opts.grid_points,
        },
        exact: None,
    })
}

/// Tries small-denominator rationals near `r` and keeps one at which both
/// factors have rational `q` and the separation constants agree exactly.
pub fn exact_match(candidate: &MatchCandidate, centers: &CenterPair<Rational>, r: f64) -> Option<ExactMatch> {
    convergents(r, EXACT_R_MAX_DEN)
        .into_iter()
        .filter(|c| (c.to_f64_lossy() - r).abs() <= 1e-9 * r.abs())
        .find_map(|rr| {
            let c = centers.with_r(rr.clone()).ok()?;
            let radial = separation::assemble_factor(
                Kind::Radial,
                candidate.radial.sol_type,
                candidate.radial.level,
                candidate.radial.branch,
                &c,
            )
            .ok()?;
            let angular = separation::assemble_factor(
                Kind::Angular,
                candidate.angular.sol_type,
                candidate.angular.level,
                candidate.angular.branch,
                &c,
            )
            .ok()?;
            (radial.branch.exact.is_some() && angular.branch.exact.is_some() && radial.lambda == angular.lambda).then(
                || ExactMatch {
                    r: rr,
                    energy: radial.energy.clone(),
                    lambda: radial.lambda.clone(),
                    radial,
                    angular,
                },
            )
        })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Largest radial energy denominator `n1` considered.
    pub n_max: usize,
    /// Defaults to `20 max(1, 1/(Z1+Z2))`.
    pub r_max: Option<f64>,
    pub tol: f64,
    pub grid_points: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            n_max: 6,
            r_max: None,
            tol: 1e-12,
            grid_points: 2000,
        }
    }
}

impl SolveOptions {
    pub fn scan(&self, total_charge: f64) -> ScanOptions {
        let mut s = ScanOptions::for_total_charge(total_charge);
        if let Some(r) = self.r_max {
            s.r_max = r;
        }
        s.tol = self.tol;
        s.grid_points = self.grid_points;
        s
    }
}

/// Removes solutions of equal energy whose `(R, lambda)` agree to `tol`.
pub(crate) fn dedupe(mut sols: Vec<ElementaryEigenfunction>) -> Vec<ElementaryEigenfunction> {
    sols.sort_by(|a, b| a.canonical_cmp(b));
    let close = |a: f64, b: f64| (a - b).abs() <= DEDUPE_TOL * (1.0 + a.abs().max(b.abs()));
    let mut out: Vec<ElementaryEigenfunction> = Vec::with_capacity(sols.len());
    for s in sols {
        let dup = out
            .iter()
            .any(|o| close(o.energy, s.energy) && close(o.r(), s.r()) && close(o.lambda, s.lambda));
        if !dup {
            out.push(s);
        }
    }
    out
}

/// Every elementary eigenfunction with `n1 <= n_max` and `R <= r_max`,
/// normalized, deduplicated and in canonical order. Matches that are not
/// square-integrable are dropped.
pub fn solve(centers: &CenterPair<Rational>, opts: &SolveOptions) -> Result<Vec<ElementaryEigenfunction>> {
    let pairs = solve_diophantine(centers, opts.n_max)?;
    let cf = centers.to_f64();
    let scan_opts = opts.scan(cf.z1 + cf.z2);
    if !(scan_opts.r_max > 0.0) {
        return Err(Error::InvalidParameter(format!("r_max must be positive, got {}", scan_opts.r_max)));
    }
    // one task per radial x angular type combination
    let mut combos = Vec::new();
    for pair in pairs {
        for rad in decode_denominator(pair.n1) {
            for ang in decode_denominator(pair.n2) {
                combos.push((pair, rad, ang));
            }
        }
    }
    let found: Vec<Vec<ElementaryEigenfunction>> = combos
        .par_iter()
        .map(|&(pair, rad, ang)| {
            let branches: Vec<(usize, usize)> = (1..=rad.1 + 1)
                .flat_map(|j| (1..=ang.1 + 1).map(move |k| (j, k)))
                .collect();
            let mut sols = Vec::new();
            for ((j, k), point) in match_branches(rad, ang, &branches, &cf, &scan_opts)? {
                let candidate = MatchCandidate {
                    radial: FactorChoice { sol_type: rad.0, level: rad.1, branch: j },
                    angular: FactorChoice { sol_type: ang.0, level: ang.1, branch: k },
                    pair,
                };
                let mut sol = build_eigenfunction(&candidate, &cf, &point, &scan_opts)?;
                if let Some(ex) = exact_match(&candidate, centers, point.r) {
                    promote_exact(&mut sol, &ex);
                    sol.exact = Some(ex);
                }
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

/// Replaces the floating data by the rounded exact values.
fn promote_exact(sol: &mut ElementaryEigenfunction, ex: &ExactMatch) {
    let radial = ex.radial.to_f64();
    let angular = ex.angular.to_f64();
    sol.centers = radial.centers.clone();
    sol.energy = ex.energy.to_f64_lossy();
    sol.lambda = ex.lambda.to_f64_lossy();
    sol.provenance.lambda_gap = 0.0;
    sol.radial = radial;
    sol.angular = AngularFactor::Polynomial(angular);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn pair(z1: i64, z2: i64) -> CenterPair<Rational> {
        CenterPair::new(rational(z1, 1), rational(z2, 1)).unwrap()
    }

    #[test]
    fn diophantine_pairs() {
        let p = solve_diophantine(&pair(5, 1), 9).unwrap();
        assert_eq!(
            p,
            vec![
                DiophantinePair { n1: 3, n2: 2 },
                DiophantinePair { n1: 6, n2: 4 },
                DiophantinePair { n1: 9, n2: 6 }
            ]
        );
        let q = solve_diophantine(&pair(2, 1), 6).unwrap();
        assert_eq!(q, vec![DiophantinePair { n1: 3, n2: 1 }, DiophantinePair { n1: 6, n2: 2 }]);
        assert_eq!(solve_diophantine(&pair(3, 3), 6), Err(Error::SymmetricCase));
    }

    #[test]
    fn candidates_of_small_pairs() {
        let c = enumerate_candidates(DiophantinePair { n1: 3, n2: 2 });
        // radial a(1) has two branches, b(0) one; angular c(0), d(0) one each
        assert_eq!(c.len(), (2 + 1) * 2);
        let one = enumerate_candidates(DiophantinePair { n1: 1, n2: 1 });
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].radial, FactorChoice { sol_type: SolutionType::A, level: 0, branch: 1 });
    }

    #[test]
    fn first_example_matches_at_three_eighths() {
        let cand = MatchCandidate {
            radial: FactorChoice { sol_type: SolutionType::B, level: 0, branch: 1 },
            angular: FactorChoice { sol_type: SolutionType::D, level: 0, branch: 1 },
            pair: DiophantinePair { n1: 3, n2: 2 },
        };
        let c = pair(5, 1);
        let opts = ScanOptions::for_total_charge(6.0);
        let m = match_r(&cand, &c.to_f64(), &opts).unwrap();
        assert_eq!(m.len(), 1);
        assert!((m[0].r - 0.375).abs() < 1e-12);
        let ex = exact_match(&cand, &c, m[0].r).unwrap();
        assert_eq!(ex.r, rational(3, 8));
        assert_eq!(ex.lambda, rational(-7, 16));
        assert_eq!(ex.energy, rational(-8, 1));
    }

    #[test]
    fn wrong_denominator_rejected() {
        let cand = MatchCandidate {
            radial: FactorChoice { sol_type: SolutionType::A, level: 0, branch: 1 },
            angular: FactorChoice { sol_type: SolutionType::D, level: 0, branch: 1 },
            pair: DiophantinePair { n1: 3, n2: 2 },
        };
        let opts = ScanOptions::for_total_charge(6.0);
        assert!(match_r(&cand, &pair(5, 1).to_f64(), &opts).is_err());
    }
}
