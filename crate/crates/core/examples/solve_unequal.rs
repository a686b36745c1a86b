//! All elementary eigenfunctions for unequal charges up to a radial level.
//!
//! `cargo run --example solve_unequal -- 5 1`

use twocenter::matching::{self, AngularFactor, SolveOptions};
use twocenter::scalar::{parse_rational, rational_string};
use twocenter::separation::CenterPair;

fn main() -> twocenter::error::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let z = |i: usize, default: &str| parse_rational(args.get(i).map_or(default, String::as_str)).expect("charge");
    let centers = CenterPair::new(z(0, "5"), z(1, "1"))?;

    let sols = matching::solve(&centers, &SolveOptions::default())?;
    println!("{} solutions", sols.len());
    for s in &sols {
        let AngularFactor::Polynomial(g) = &s.angular else { unreachable!() };
        let exact = s
            .exact
            .as_ref()
            .map(|e| format!("  exact R = {}, lambda = {}", rational_string(&e.r), rational_string(&e.lambda)))
            .unwrap_or_default();
        println!(
            "E = {:>9.5}  R = {:.6}  lambda = {:>9.5}  radial {}{}  angular {}{}{exact}",
            s.energy,
            s.r(),
            s.lambda,
            s.radial.sol_type.tag(),
            s.radial.level,
            g.sol_type.tag(),
            g.level
        );
    }
    Ok(())
}
