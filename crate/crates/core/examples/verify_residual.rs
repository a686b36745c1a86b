//! Independent checks of a solution: normalization by two quadratures and
//! the finite-difference residual of the full planar equation.

use twocenter::eval::{self, PlanarHydrogen};
use twocenter::matching::{self, SolveOptions};
use twocenter::scalar::rational;
use twocenter::separation::CenterPair;

fn main() -> twocenter::error::Result<()> {
    println!("planar hydrogen oracle: {:.1e}", eval::pde_residual(&PlanarHydrogen { z: 1.0 }, 200, 0));

    let centers = CenterPair::new(rational(2, 1), rational(1, 1))?;
    for s in matching::solve(&centers, &SolveOptions::default())? {
        let elliptic = eval::normalize(&s)?;
        let cartesian = eval::cartesian_norm(&s)?;
        println!(
            "E = {:>7.4}  R = {:.6}  N = {elliptic:.8} vs {cartesian:.8}  residual {:.1e}",
            s.energy,
            s.r(),
            eval::pde_residual(&s, 200, 0)
        );
    }

    // a wrong energy is caught
    let mut s = matching::solve(&centers, &SolveOptions::default())?.remove(0);
    s.energy *= 1.001;
    println!("perturbed energy residual {:.1e}", eval::pde_residual(&s, 200, 0));
    Ok(())
}
