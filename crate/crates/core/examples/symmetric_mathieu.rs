//! Equal charges: polynomial radial factors matched to Mathieu angular
//! factors.
//!
//! `cargo run --release --example symmetric_mathieu -- 3`

use twocenter::matching::AngularFactor;
use twocenter::symmetric::{self, SymmetricOptions};

fn main() -> twocenter::error::Result<()> {
    let z: f64 = std::env::args().nth(1).map_or(3.0, |s| s.parse().expect("charge"));
    let opts = SymmetricOptions { nr_max: 1, ..SymmetricOptions::default() };
    let sols = symmetric::solve_symmetric(z, &opts)?;
    for s in &sols {
        let AngularFactor::Mathieu(m) = &s.angular else { unreachable!() };
        let c = &m.characteristic;
        println!(
            "E = {:>8.4}  R = {:.4}  lambda = {:>8.4}  {}_{}(p = {:.4}) = {:.4}  radial {}{}",
            s.energy,
            s.r(),
            s.lambda,
            c.parity.tag(),
            c.order,
            c.p,
            c.value,
            s.radial.sol_type.tag(),
            s.radial.level
        );
    }
    Ok(())
}
