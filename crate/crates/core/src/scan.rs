//! Root finding in the intercenter distance: a scan grid, branch tracking of
//! the quantized `q` values along it, and bisection on sign changes.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Halvings of an ambiguous grid cell before giving up.
pub const MAX_REFINEMENTS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub r_max: f64,
    /// Relative bisection tolerance on `R`.
    pub tol: f64,
    pub grid_points: usize,
}

impl ScanOptions {
    /// `r_max = 20 max(1, 1/(Z1+Z2))`.
    pub fn for_total_charge(total: f64) -> Self {
        ScanOptions {
            r_max: default_r_max(total),
            tol: 1e-12,
            grid_points: 2000,
        }
    }
}

pub fn default_r_max(total_charge: f64) -> f64 {
    20.0 * 1f64.max(1.0 / total_charge)
}

/// A quarter of the points geometric on `[1e-6, 0.05] r_max`, the rest
/// uniform up to `r_max`.
pub fn scan_grid(r_max: f64, points: usize) -> Vec<f64> {
    let points = points.max(8);
    let n_geo = points / 4;
    let (lo, knee) = (1e-6 * r_max, 0.05 * r_max);
    let ratio = (knee / lo).powf(1.0 / n_geo as f64);
    let mut grid: Vec<f64> = (0..n_geo).map(|i| lo * ratio.powi(i as i32)).collect();
    let n_uni = points - n_geo;
    let step = (r_max - knee) / (n_uni - 1) as f64;
    grid.extend((0..n_uni).map(|i| knee + step * i as f64));
    *grid.last_mut().expect("non-empty") = r_max;
    grid
}

/// Each new root must be nearest to the root with the same ascending index.
fn continues(prev: &[f64], next: &[f64]) -> bool {
    prev.len() == next.len()
        && next.iter().enumerate().all(|(j, &x)| {
            prev.iter()
                .enumerate()
                .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
                .map(|(i, _)| i)
                == Some(j)
        })
}

fn refine<F>(roots_at: &F, lo: f64, hi: f64, a: &[f64], b: &[f64], depth: u32) -> Result<()>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    if continues(a, b) {
        return Ok(());
    }
    if depth == MAX_REFINEMENTS {
        return Err(Error::BranchCrossing {
            r: lo,
            refinements: MAX_REFINEMENTS,
        });
    }
    let mid = 0.5 * (lo + hi);
    let m = roots_at(mid)?;
    refine(roots_at, lo, mid, a, &m, depth + 1)?;
    refine(roots_at, mid, hi, &m, b, depth + 1)
}

/// Ascending roots at every grid node, with continuity verified cell by
/// cell (ambiguous cells are halved up to [`MAX_REFINEMENTS`] times).
pub fn tracked_roots<F>(grid: &[f64], roots_at: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    let table: Vec<Vec<f64>> = grid.par_iter().map(|&r| roots_at(r)).collect::<Result<_>>()?;
    for (i, w) in table.windows(2).enumerate() {
        refine(&roots_at, grid[i], grid[i + 1], &w[0], &w[1], 0)?;
    }
    Ok(table)
}

/// Zeros of `g` on the grid: node zeros with a sign change across them,
/// then bisection of every sign change until the bracket is below `tol`
/// relative. A node zero without a sign change is rounding, not a root.
pub fn bisect_sign_changes<G>(grid: &[f64], values: &[f64], g: G, tol: f64) -> Result<Vec<f64>>
where
    G: Fn(f64) -> Result<f64>,
{
    let mut out = Vec::new();
    for i in 0..grid.len() {
        if values[i] == 0.0 {
            let crosses = i > 0 && i + 1 < grid.len() && values[i - 1] * values[i + 1] < 0.0;
            if crosses {
                out.push(grid[i]);
            }
            continue;
        }
        if i + 1 == grid.len() || values[i + 1] == 0.0 || values[i].signum() == values[i + 1].signum() {
            continue;
        }
        if !(values[i].is_finite() && values[i + 1].is_finite()) {
            continue;
        }
        let (mut lo, mut hi) = (grid[i], grid[i + 1]);
        let mut g_lo = values[i];
        while hi - lo > tol * hi {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let gm = g(mid)?;
            if gm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if gm.signum() == g_lo.signum() {
                lo = mid;
                g_lo = gm;
            } else {
                hi = mid;
            }
        }
        // take the endpoint with the smaller residual
        let r = if lo == hi {
            lo
        } else {
            let (gl, gh) = (g(lo)?.abs(), g(hi)?.abs());
            if gl <= gh {
                lo
            } else {
                hi
            }
        };
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_increasing_and_ends_at_r_max() {
        let g = scan_grid(20.0, 2000);
        assert_eq!(g.len(), 2000);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*g.last().unwrap(), 20.0);
        assert!((g[0] - 2e-5).abs() < 1e-18);
    }

    #[test]
    fn bisection_finds_all_roots() {
        let grid = scan_grid(10.0, 400);
        let f = |r: f64| Ok((r - 1.0) * (r - 3.5) * (r - 7.25));
        let vals: Vec<f64> = grid.iter().map(|&r| f(r).unwrap()).collect();
        let roots = bisect_sign_changes(&grid, &vals, f, 1e-13).unwrap();
        assert_eq!(roots.len(), 3);
        for (got, want) in roots.iter().zip([1.0, 3.5, 7.25]) {
            assert!((got - want).abs() < 1e-11);
        }
    }

    #[test]
    fn node_zero_needs_a_sign_change() {
        let grid = [0.0, 1.0, 2.0, 3.0];
        let g = |r: f64| Ok(r - 1.0);
        assert_eq!(bisect_sign_changes(&grid, &[-1.0, 0.0, 1.0, 2.0], g, 1e-12).unwrap(), vec![1.0]);
        // touching zero at the first node, as from rounding
        assert!(bisect_sign_changes(&grid, &[0.0, 1.0, 2.0, 3.0], g, 1e-12).unwrap().is_empty());
        assert!(bisect_sign_changes(&grid, &[1.0, 0.0, 1.0, 2.0], g, 1e-12).unwrap().is_empty());
    }

    #[test]
    fn fast_roots_are_refined_or_rejected() {
        let grid = vec![0.0, 1.0];
        // moving 100 per unit with unit gap: resolved after a few halvings
        assert!(tracked_roots(&grid, |r| Ok(vec![100.0 * r, 100.0 * r + 1.0])).is_ok());
        // moving 1000 per unit: still ambiguous after the last halving
        assert!(matches!(
            tracked_roots(&grid, |r| Ok(vec![1000.0 * r, 1000.0 * r + 1.0])),
            Err(Error::BranchCrossing { refinements: MAX_REFINEMENTS, .. })
        ));
    }

    #[test]
    fn smooth_roots_track() {
        let grid = scan_grid(5.0, 100);
        let table = tracked_roots(&grid, |r| Ok(vec![-r, r * r + 1.0])).unwrap();
        assert_eq!(table.len(), 100);
    }
}
