//! Normalized probability density of the first unequal-charge solution on a
//! grid, written as CSV.
//!
//! `cargo run --example density_grid > rho.csv`

use twocenter::eval::{self, Window};
use twocenter::matching::{self, SolveOptions};
use twocenter::scalar::rational;
use twocenter::separation::CenterPair;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let centers = CenterPair::new(rational(5, 1), rational(1, 1))?;
    let sols = matching::solve(&centers, &SolveOptions { n_max: 3, ..SolveOptions::default() })?;
    let sol = &sols[0];

    let grid = eval::density_grid(sol, Window::around(sol), 121, 81)?;
    let (i, j, peak) = grid.argmax();
    let mass: f64 = grid.values.iter().sum::<f64>() * grid.cell_area();
    eprintln!("R = {}, peak {peak:.4} at ({:.3}, {:.3}), grid mass {mass:.4}", sol.r(), grid.x1(i), grid.x2(j));
    grid.write_csv(std::io::stdout().lock())?;
    Ok(())
}
