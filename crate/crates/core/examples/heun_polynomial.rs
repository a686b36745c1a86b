//! Quasi-exactly solvable confluent Heun polynomials: build the
//! three-term recurrence, quantize the accessory parameter and check the
//! resulting polynomial against the equation, in exact rationals and in f64.

use twocenter::heun::{self, CheqParams};
use twocenter::scalar::{rational, rational_string};

fn main() -> twocenter::error::Result<()> {
    // gamma = delta = 3/2, eps = -3, truncation at degree 2
    let exact = CheqParams::new(rational(3, 2), rational(3, 2), rational(-3, 1), 2)?;
    let rec = heun::build_recurrence(&exact);
    println!("P_3(q) coefficients: {:?}", rec.top().coeffs.iter().map(rational_string).collect::<Vec<_>>());

    for root in heun::find_q_roots(&rec)? {
        let poly = heun::assemble_polynomial(&rec, &root);
        let exact_q = root.exact.as_ref().map(rational_string).unwrap_or_else(|| "irrational".into());
        println!(
            "branch {}: q = {:.12} ({exact_q}), residual {:.1e}",
            root.j,
            root.q,
            heun::cheq_residual(&poly.to_f64())
        );
        println!("  monic in z: {:?}", poly.to_f64().monic_in_z().coeffs);
    }

    // the same equation in floating point
    let float = exact.to_f64();
    let rec = heun::build_recurrence(&float);
    for root in heun::find_q_roots(&rec)? {
        let poly = heun::assemble_polynomial(&rec, &root);
        println!("f64 branch {}: residual {:.1e}", root.j, heun::cheq_residual(&poly));
    }
    Ok(())
}
