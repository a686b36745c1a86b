//! Real roots of monic polynomials: balanced companion matrix + Newton polish.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::poly::Poly;

const MAX_POLISH_STEPS: usize = 50;
const POLISH_TOL: f64 = 1e-14;
const IMAG_TOL: f64 = 1e-10;
const MIN_GAP: f64 = 1e-10;

/// Companion matrix of a monic polynomial (ones on the subdiagonal, negated
/// low-order coefficients in the last column).
pub fn companion(p: &Poly<f64>) -> DMatrix<f64> {
    let m = p.degree();
    let lead = *p.leading();
    let mut c = DMatrix::zeros(m, m);
    for i in 0..m {
        if i > 0 {
            c[(i, i - 1)] = 1.0;
        }
        c[(i, m - 1)] = -p.coeffs[i] / lead;
    }
    c
}

/// Diagonal similarity scaling (Parlett-Reinsch) so row and column norms
/// are comparable; eigenvalues are unchanged.
pub fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Newton iteration on `p`; stops on relative step below tolerance or when
/// the residual stops improving.
pub fn newton_polish(p: &Poly<f64>, mut x: f64) -> f64 {
    let mut best = (x, p.eval(&x).abs());
    for _ in 0..MAX_POLISH_STEPS {
        let (v, d, _) = p.eval_with_derivatives(x);
        if v == 0.0 || d == 0.0 {
            break;
        }
        let step = v / d;
        x -= step;
        let r = p.eval(&x).abs();
        if r < best.1 {
            best = (x, r);
        } else if r > best.1 {
            // overshoot; keep the better iterate
            break;
        }
        if step.abs() <= POLISH_TOL * (1.0 + x.abs()) {
            break;
        }
    }
    best.0
}

/// All roots of `p`, which must be real and simple, in ascending order.
pub fn real_roots(p: &Poly<f64>) -> Result<Vec<f64>> {
    let m = p.degree();
    match m {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-p.coeffs[0] / p.coeffs[1]]),
        _ => {}
    }
    let mut c = companion(p);
    balance(&mut c);
    let eig = c.complex_eigenvalues();
    let mut roots = Vec::with_capacity(m);
    for (index, z) in eig.iter().enumerate() {
        if z.im.abs() > IMAG_TOL * (1.0 + z.re.abs()) {
            return Err(Error::RootReality {
                degree: m,
                index,
                real: z.re,
                imag: z.im,
            });
        }
        roots.push(newton_polish(p, z.re));
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    let gap = roots
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if gap <= MIN_GAP {
        return Err(Error::RootMultiplicity { degree: m, gap });
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        let p = Poly::new(vec![1.0, -3.0, 1.0]);
        let r = real_roots(&p).unwrap();
        let s5 = 5f64.sqrt();
        assert!((r[0] - (3.0 - s5) / 2.0).abs() < 1e-15);
        assert!((r[1] - (3.0 + s5) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn wilkinson_like_badly_scaled() {
        // (x-1)(x-10)(x-100)(x-1000)
        let p = [1.0, 10.0, 100.0, 1000.0]
            .iter()
            .fold(Poly::constant(1.0), |acc, &r| &acc * &Poly::new(vec![-r, 1.0]));
        let r = real_roots(&p).unwrap();
        for (got, want) in r.iter().zip([1.0, 10.0, 100.0, 1000.0]) {
            assert!((got - want).abs() < 1e-12 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn complex_pair_is_rejected() {
        let p = Poly::new(vec![1.0, 0.0, 1.0]);
        assert!(matches!(real_roots(&p), Err(Error::RootReality { .. })));
    }

    #[test]
    fn double_root_is_rejected() {
        let p = Poly::new(vec![1.0, -2.0, 1.0]);
        assert!(real_roots(&p).is_err());
    }
}
