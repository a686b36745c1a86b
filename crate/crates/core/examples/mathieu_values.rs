//! Mathieu characteristic values and Fourier eigenvectors.

use twocenter::mathieu::{self, Parity};

fn main() -> twocenter::error::Result<()> {
    for p in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        let row: Vec<String> = [(Parity::Cosine, 0), (Parity::Cosine, 1), (Parity::Sine, 1), (Parity::Sine, 2), (Parity::Cosine, 2)]
            .iter()
            .map(|&(parity, n)| Ok(format!("{}{n} = {:>8.4}", parity.tag(), mathieu::char_value(parity, n, p)?.value)))
            .collect::<twocenter::error::Result<_>>()?;
        println!("p = {p:>4}: {}", row.join("  "));
    }

    let ce1 = mathieu::char_value(Parity::Cosine, 1, 2.0)?;
    println!("ce_1(nu; 2), truncation {}: leading coefficients {:?}", ce1.truncation, &ce1.fourier[..4]);
    for nu in [0.0, 0.5, 1.0, std::f64::consts::FRAC_PI_2] {
        println!("  ce_1({nu:.3}) = {:.6}, residual {:.1e}", mathieu::mathieu_eval(&ce1, nu), ce1.residual(nu));
    }
    Ok(())
}
