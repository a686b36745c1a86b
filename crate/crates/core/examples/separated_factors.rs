//! Radial and angular factors for one charge pair at a fixed distance.
//! At R = 3/8 with charges 5 and 1 the type b radial factor and the type d
//! angular factor share the separation constant -7/16.

use twocenter::scalar::{rational, rational_string};
use twocenter::separation::{self, CenterPair, Kind, SolutionType};

fn main() -> twocenter::error::Result<()> {
    let centers = CenterPair::new(rational(5, 1), rational(1, 1))?.with_r(rational(3, 8))?;

    for (kind, t) in [(Kind::Radial, SolutionType::B), (Kind::Angular, SolutionType::D)] {
        let f = separation::assemble_factor(kind, t, 0, 1, &centers)?;
        println!(
            "{kind:?} type {}: E = {}, lambda = {}, rate = {}",
            t.tag(),
            rational_string(&f.energy),
            rational_string(&f.lambda),
            rational_string(&f.prefactor.rate)
        );
    }

    // floating factors can be evaluated and checked against their ODE
    let centers = centers.to_f64();
    let radial = separation::assemble_factor(Kind::Radial, SolutionType::B, 0, 1, &centers)?;
    for xi in [1.5, 3.0, 10.0] {
        println!("X({xi}) = {:.6e}, ODE residual {:.1e}", radial.evaluate(xi)?, radial.ode_residual(xi)?);
    }
    Ok(())
}
