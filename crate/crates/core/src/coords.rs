//! Euler elliptic coordinates. Center 1 (charge `Z1`) sits at `x1 = +R/2`,
//! center 2 at `x1 = -R/2`, so `xi = (r1 + r2)/R` and `eta = (r2 - r1)/R`.
//!
//! Two equivalent views are carried: `(xi, eta, sheet)`, where the sheet is
//! the sign of `x2`, and the one-to-one `(xi, nu)` with `eta = cos nu`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sheet {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticPoint {
    pub xi: f64,
    pub eta: f64,
    pub sheet: Sheet,
    /// `nu` in `[-pi, pi]`, `eta = cos nu`, sign of `nu` = sheet.
    pub nu: f64,
    /// On the focal segment (`xi = 1`) the Jacobian degenerates.
    pub focal: bool,
    /// `xi - 1`, `1 - eta`, `1 + eta` without cancellation.
    pub xi_m1: f64,
    pub one_m_eta: f64,
    pub one_p_eta: f64,
}

impl EllipticPoint {
    pub fn from_xi_eta(xi: f64, eta: f64, sheet: Sheet) -> Self {
        let eta = eta.clamp(-1.0, 1.0);
        let mag = eta.acos();
        EllipticPoint {
            xi,
            eta,
            sheet,
            nu: if sheet == Sheet::Upper { mag } else { -mag },
            focal: xi <= 1.0,
            xi_m1: xi - 1.0,
            one_m_eta: 1.0 - eta,
            one_p_eta: 1.0 + eta,
        }
    }

    pub fn from_xi_nu(xi: f64, nu: f64) -> Self {
        let nu = wrap_angle(nu);
        let half = (0.5 * nu).sin_cos();
        EllipticPoint {
            xi,
            eta: nu.cos(),
            sheet: if nu >= 0.0 { Sheet::Upper } else { Sheet::Lower },
            nu,
            focal: xi <= 1.0,
            xi_m1: xi - 1.0,
            one_m_eta: 2.0 * half.0 * half.0,
            one_p_eta: 2.0 * half.1 * half.1,
        }
    }

    /// Area element `(R^2/4)(xi^2 - eta^2)` of `dxi deta`.
    pub fn jacobian(&self, r: f64) -> f64 {
        r * r / 4.0 * (self.xi * self.xi - self.eta * self.eta)
    }
}

fn wrap_angle(nu: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    if (-PI..=PI).contains(&nu) {
        nu
    } else {
        nu - TAU * ((nu + PI) / TAU).floor()
    }
}

pub fn center_distances(x1: f64, x2: f64, r: f64) -> (f64, f64) {
    let r1 = (x1 - r / 2.0).hypot(x2);
    let r2 = (x1 + r / 2.0).hypot(x2);
    (r1, r2)
}

/// `hypot(d, y) - d`, accurate also when `y` is small and `d > 0`.
fn excess(d: f64, y: f64) -> f64 {
    let h = d.hypot(y);
    if d > 0.0 {
        y * y / (h + d)
    } else {
        h - d
    }
}

pub fn cartesian_to_elliptic(x1: f64, x2: f64, r: f64) -> EllipticPoint {
    let a = r / 2.0;
    // r1 + r2 - R, r1 + r2 - 2 x1 and r1 + r2 + 2 x1 as sums of
    // non-negative terms, so xi - 1 and 1 -+ eta keep full relative accuracy
    let xi_m1 = (excess(a - x1, x2) + excess(a + x1, x2)) / r;
    let xi = 1.0 + xi_m1;
    let one_m_eta = ((excess(x1 - a, x2) + excess(x1 + a, x2)) / (r * xi)).min(2.0);
    let one_p_eta = ((excess(a - x1, x2) + excess(-x1 - a, x2)) / (r * xi)).min(2.0);
    // 2 x1 / (R xi) equals (r2 - r1)/R without the cancellation near the axis
    let eta = (2.0 * x1 / (r * xi)).clamp(-1.0, 1.0);
    let sheet = if x2 >= 0.0 { Sheet::Upper } else { Sheet::Lower };
    // the angle is computed from both components for accuracy near eta = +-1
    let s = 2.0 * x2 / (r * (xi_m1 * (xi + 1.0)).sqrt());
    let nu = if s.is_finite() {
        s.atan2(eta)
    } else {
        let mag = eta.acos();
        if sheet == Sheet::Upper {
            mag
        } else {
            -mag
        }
    };
    EllipticPoint {
        xi,
        eta,
        sheet,
        nu,
        focal: xi_m1 <= f64::EPSILON,
        xi_m1,
        one_m_eta,
        one_p_eta,
    }
}

pub fn elliptic_to_cartesian(pt: &EllipticPoint, r: f64) -> (f64, f64) {
    let x1 = r / 2.0 * pt.xi * pt.nu.cos();
    let x2 = r / 2.0 * (pt.xi * pt.xi - 1.0).max(0.0).sqrt() * pt.nu.sin();
    (x1, x2)
}
