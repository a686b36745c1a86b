//! Two-sheeted elliptic coordinates around centers at x1 = +R/2 and -R/2.

use twocenter::coords::{self, EllipticPoint};

fn main() {
    let r = 2.0;
    for (x1, x2) in [(0.0, 1.0), (0.0, -1.0), (3.0, 0.5), (0.4, 0.0), (-5.0, -2.0)] {
        let pt = coords::cartesian_to_elliptic(x1, x2, r);
        let (y1, y2) = coords::elliptic_to_cartesian(&pt, r);
        println!(
            "({x1:>5}, {x2:>5}) -> xi {:.4} eta {:>7.4} nu {:>7.4} {:?}{}  back ({y1:.3e}, {y2:.3e})",
            pt.xi,
            pt.eta,
            pt.nu,
            pt.sheet,
            if pt.focal { " focal" } else { "" }
        );
    }
    let pt = EllipticPoint::from_xi_nu(1.5, -2.0);
    println!("xi 1.5, nu -2: Jacobian {:.6}", pt.jacobian(r));
}
