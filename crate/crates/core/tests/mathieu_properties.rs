//! Characteristic values and periodic Mathieu functions against an
//! unsplit exponential-basis oracle, the `p -> -p` identities and
//! trapezoid-rule orthogonality.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;
use proptest::prelude::*;
use twocenter::mathieu::{char_value, mathieu_eval, MathieuCharacteristic, Parity};

/// Sorted spectrum of `a c_m = m^2 c_m + p (c_{m-2} + c_{m+2})`, `|m| <= big`.
/// Every `a_n` (n >= 0) and `b_n` (n >= 1) appears exactly once.
fn exponential_spectrum(p: f64, big: i64) -> Vec<f64> {
    let size = (2 * big + 1) as usize;
    let mut m = DMatrix::<f64>::zeros(size, size);
    for i in 0..size {
        let k = i as i64 - big;
        m[(i, i)] = (k * k) as f64;
        if i + 2 < size {
            m[(i, i + 2)] = p;
            m[(i + 2, i)] = p;
        }
    }
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

fn value(parity: Parity, n: usize, p: f64) -> f64 {
    char_value(parity, n, p).unwrap().value
}

/// `G`, `G''` by term-wise differentiation of the stored series, and the
/// magnitude of the equation's terms.
fn series_terms(ch: &MathieuCharacteristic, nu: f64) -> (f64, f64, f64) {
    let m0 = match (ch.parity, ch.order % 2) {
        (Parity::Cosine, 0) => 0,
        (Parity::Sine, 0) => 2,
        _ => 1,
    };
    let (mut g, mut gpp, mut mag) = (0.0, 0.0, 0.0);
    for (i, &c) in ch.fourier.iter().enumerate() {
        let m = (m0 + 2 * i) as f64;
        let basis = match ch.parity {
            Parity::Cosine => (m * nu).cos(),
            Parity::Sine => (m * nu).sin(),
        };
        g += c * basis;
        gpp -= m * m * c * basis;
        mag += c.abs() * (m * m + ch.value.abs() + 2.0 * ch.p.abs());
    }
    (g, gpp, mag)
}

fn trapezoid<F: Fn(f64) -> f64>(f: F) -> f64 {
    let n = 512;
    let h = 2.0 * PI / n as f64;
    (0..n).map(|i| f(-PI + h * i as f64)).sum::<f64>() * h
}

#[test]
fn zero_parameter_gives_squares() {
    for n in 0..=10 {
        assert!((value(Parity::Cosine, n, 0.0) - (n * n) as f64).abs() < 1e-12);
        if n >= 1 {
            assert!((value(Parity::Sine, n, 0.0) - (n * n) as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn characteristic_values_increase_within_each_family() {
    for p in [-10.0, -1.0, 1.0, 10.0] {
        let a: Vec<f64> = (0..=10).map(|n| value(Parity::Cosine, n, p)).collect();
        let b: Vec<f64> = (1..=10).map(|n| value(Parity::Sine, n, p)).collect();
        assert!(a.windows(2).all(|w| w[0] < w[1]), "a at p = {p}: {a:?}");
        assert!(b.windows(2).all(|w| w[0] < w[1]), "b at p = {p}: {b:?}");
        assert!(a[0] < b[0]);
    }
    // interlacing for small positive p
    let p = 0.3;
    let chain = [
        value(Parity::Cosine, 0, p),
        value(Parity::Sine, 1, p),
        value(Parity::Cosine, 1, p),
        value(Parity::Sine, 2, p),
        value(Parity::Cosine, 2, p),
    ];
    assert!(chain.windows(2).all(|w| w[0] < w[1]), "{chain:?}");
}

#[test]
fn worked_values() {
    assert!((value(Parity::Cosine, 1, 0.0) - 1.0).abs() < 1e-12);
    assert!((value(Parity::Cosine, 0, 1.0) + 0.455139).abs() < 1e-6);
    assert!((value(Parity::Sine, 1, -1.783) - 2.298).abs() < 5e-4);
}

#[test]
fn evaluation_limits() {
    for n in 1..=5 {
        let s = char_value(Parity::Sine, n, -3.7).unwrap();
        assert_eq!(mathieu_eval(&s, 0.0), 0.0);
        let c = char_value(Parity::Cosine, n, 0.0).unwrap();
        for nu in [-2.0, 0.3, 1.1] {
            assert!((mathieu_eval(&c, nu) - (n as f64 * nu).cos()).abs() < 1e-12);
        }
    }
    let c0 = char_value(Parity::Cosine, 0, 0.0).unwrap();
    assert!((mathieu_eval(&c0, 0.4) - 1.0 / SQRT_2).abs() < 1e-12);
    // cosine type: flat at nu = 0
    let c = char_value(Parity::Cosine, 2, 4.2).unwrap();
    let h = 1e-5;
    let slope = (mathieu_eval(&c, h) - mathieu_eval(&c, -h)) / (2.0 * h);
    assert!(slope.abs() < 1e-8);
}

#[test]
fn orthogonality_on_the_period() {
    for p in [-5.0, 2.5] {
        let ce: Vec<_> = (0..4).map(|n| char_value(Parity::Cosine, n, p).unwrap()).collect();
        let se: Vec<_> = (1..5).map(|n| char_value(Parity::Sine, n, p).unwrap()).collect();
        let all: Vec<&MathieuCharacteristic> = ce.iter().chain(se.iter()).collect();
        for (i, f) in all.iter().enumerate() {
            for g in &all[i + 1..] {
                let ip = trapezoid(|nu| mathieu_eval(f, nu) * mathieu_eval(g, nu));
                assert!(ip.abs() < 1e-10, "{:?}{} vs {:?}{}: {ip:e}", f.parity, f.order, g.parity, g.order);
            }
            // unit coefficient norm: integral of the square is pi
            let norm = trapezoid(|nu| mathieu_eval(f, nu).powi(2));
            assert!((norm - PI).abs() < 1e-10, "{norm}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn values_match_the_exponential_basis_spectrum(p in -40.0f64..40.0) {
        prop_assume!(p.abs() > 1e-3);
        let spectrum = exponential_spectrum(p, 80);
        let mut ours: Vec<f64> = (0..=6).map(|n| value(Parity::Cosine, n, p)).collect();
        ours.extend((1..=6).map(|n| value(Parity::Sine, n, p)));
        ours.sort_by(|a, b| a.total_cmp(b));
        for (k, v) in ours.iter().enumerate() {
            prop_assert!((v - spectrum[k]).abs() <= 1e-9 * (1.0 + v.abs()), "{k}: {v} vs {}", spectrum[k]);
        }
    }

    #[test]
    fn sign_of_p_swaps_odd_orders(p in 0.01f64..30.0, k in 0usize..4) {
        let (odd, even) = (2 * k + 1, 2 * k + 2);
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-10 * (1.0 + x.abs());
        prop_assert!(close(value(Parity::Cosine, odd, -p), value(Parity::Sine, odd, p)));
        prop_assert!(close(value(Parity::Sine, odd, -p), value(Parity::Cosine, odd, p)));
        prop_assert!(close(value(Parity::Cosine, 2 * k, -p), value(Parity::Cosine, 2 * k, p)));
        prop_assert!(close(value(Parity::Sine, even, -p), value(Parity::Sine, even, p)));
    }

    #[test]
    fn series_solves_the_equation(p in -60.0f64..60.0, n in 0usize..=8, sine in any::<bool>(), nu in -PI..PI) {
        prop_assume!(!(sine && n == 0));
        let parity = if sine { Parity::Sine } else { Parity::Cosine };
        let ch = char_value(parity, n, p).unwrap();
        let (g, gpp, mag) = series_terms(&ch, nu);
        let res = gpp + (ch.value - 2.0 * p * (2.0 * nu).cos()) * g;
        prop_assert!(res.abs() <= 1e-10 * mag, "{res:e} vs {mag:e}");
        prop_assert!(ch.residual(nu) <= 1e-10);
    }
}

#[test]
fn residual_stays_small_at_the_nodes() {
    // ce_1 and se_2 vanish at nu = pi/2, se_1 and se_2 at nu = 0
    for (parity, n, nu) in [(Parity::Cosine, 1, PI / 2.0), (Parity::Sine, 2, PI / 2.0), (Parity::Sine, 1, 0.0), (Parity::Sine, 2, 0.0)] {
        for p in [-5.0, 0.5, 12.0] {
            let ch = char_value(parity, n, p).unwrap();
            assert!(mathieu_eval(&ch, nu).abs() < 1e-12);
            assert!(ch.residual(nu) <= 1e-12, "{parity:?}{n} p = {p}: {:e}", ch.residual(nu));
        }
    }
}
