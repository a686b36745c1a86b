//! Equal charges: the Z = 3 mixed radial x Mathieu eigenfunctions, the
//! reduction of the angular equation to Mathieu form, and the absence of
//! polynomial angular factors.

use std::sync::OnceLock;

use twocenter::error::Error;
use twocenter::eval;
use twocenter::matching::{AngularFactor, ElementaryEigenfunction, FactorChoice};
use twocenter::mathieu::{MathieuCache, MathieuCharacteristic, Parity};
use twocenter::scalar::rational;
use twocenter::scan::ScanOptions;
use twocenter::separation::{self, CenterPair, SolutionType};
use twocenter::symmetric::{self, SymmetricOptions};

fn z3() -> &'static [ElementaryEigenfunction] {
    static SOLS: OnceLock<Vec<ElementaryEigenfunction>> = OnceLock::new();
    SOLS.get_or_init(|| symmetric::solve_symmetric(3.0, &SymmetricOptions::default()).unwrap())
}

fn mathieu(sol: &ElementaryEigenfunction) -> &MathieuCharacteristic {
    match &sol.angular {
        AngularFactor::Mathieu(m) => &m.characteristic,
        AngularFactor::Polynomial(_) => panic!("equal charges produced a polynomial angular factor"),
    }
}

struct Reference {
    energy: f64,
    lambda: f64,
    r: f64,
    parity: Parity,
    order: usize,
    value: f64,
    radial_type: SolutionType,
    /// exponential rate of the radial factor
    rate: f64,
    /// monic radial polynomial, constant term first
    poly: &'static [f64],
    p: f64,
}

const REFERENCES: [Reference; 4] = [
    Reference {
        energy: -8.0,
        lambda: 1.268,
        r: 1.335,
        parity: Parity::Sine,
        order: 1,
        value: 2.298,
        radial_type: SolutionType::A,
        rate: -2.671,
        poly: &[0.911, 1.0],
        p: -1.783,
    },
    Reference {
        energy: -18.0,
        lambda: -0.264,
        r: 0.329,
        parity: Parity::Cosine,
        order: 1,
        value: 0.750,
        radial_type: SolutionType::C,
        rate: -0.986,
        poly: &[1.0],
        p: -0.243,
    },
    Reference {
        energy: -4.5,
        lambda: -3.133,
        r: 0.870,
        parity: Parity::Sine,
        order: 2,
        value: 3.985,
        radial_type: SolutionType::C,
        rate: -1.305,
        poly: &[0.491, 1.0],
        p: -0.426,
    },
    Reference {
        energy: -72.0 / 25.0,
        lambda: 6.412,
        r: 4.491,
        parity: Parity::Cosine,
        order: 2,
        value: 8.111,
        radial_type: SolutionType::A,
        rate: -5.389,
        poly: &[0.735, 1.729, 1.0],
        p: -7.262,
    },
];

fn find(reference: &Reference) -> &'static ElementaryEigenfunction {
    z3().iter()
        .filter(|s| (s.energy - reference.energy).abs() < 1e-12)
        .filter(|s| {
            let m = mathieu(s);
            m.parity == reference.parity && m.order == reference.order
        })
        .min_by(|a, b| (a.r() - reference.r).abs().total_cmp(&(b.r() - reference.r).abs()))
        .unwrap_or_else(|| panic!("no match at E = {}", reference.energy))
}

#[test]
fn worked_mixed_eigenfunctions() {
    for reference in &REFERENCES {
        let s = find(reference);
        let m = mathieu(s);
        let close = |x: f64, y: f64| (x - y).abs() <= 5e-4;
        assert!(close(s.r(), reference.r), "R {} vs {}", s.r(), reference.r);
        assert!(close(s.lambda, reference.lambda), "lambda {} vs {}", s.lambda, reference.lambda);
        assert!(close(m.value, reference.value), "char value {} vs {}", m.value, reference.value);
        assert!(close(m.p, reference.p), "p {} vs {}", m.p, reference.p);
        assert_eq!(s.radial.sol_type, reference.radial_type);
        assert!(close(s.radial.prefactor.rate, reference.rate), "rate {}", s.radial.prefactor.rate);
        let poly = s.radial.poly.monic_in_z().coeffs;
        assert_eq!(poly.len(), reference.poly.len());
        for (got, want) in poly.iter().zip(reference.poly) {
            assert!(close(*got, *want), "{poly:?} vs {:?}", reference.poly);
        }
    }
}

#[test]
fn angular_factor_solves_the_algebraic_mathieu_equation() {
    // with eta = cos nu the angular equation reads
    //   G'' - (E R^2/2 cos^2 nu + lambda) G = 0
    // measured against the series magnitude, since G and G'' vanish together
    // at the nodes
    for s in z3() {
        let m = mathieu(s);
        let r = s.r();
        let first = m.first_harmonic();
        let scale: f64 = m
            .fourier
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = (first + 2 * i) as f64;
                c.abs() * (k * k + s.lambda.abs() + (s.energy * r * r / 2.0).abs())
            })
            .sum();
        for i in 0..20 {
            let nu = -3.0 + 6.0 * i as f64 / 19.0;
            let (g, _, gpp) = m.eval_with_derivatives(nu);
            let coef = s.energy * r * r / 2.0 * nu.cos().powi(2) + s.lambda;
            let res = (gpp - coef * g).abs();
            assert!(res <= 1e-10 * scale, "R = {r}, nu = {nu}: {:e}", res / scale);
        }
    }
}

#[test]
fn matched_parameters_use_the_quarter_shift() {
    for s in z3() {
        let m = mathieu(s);
        let r = s.r();
        assert!((m.p - s.energy * r * r / 8.0).abs() <= 1e-12 * m.p.abs().max(1.0));
        let a = -s.lambda - s.energy * r * r / 4.0;
        assert!((a - m.value).abs() <= 1e-9 * (1.0 + a.abs()), "a {a} vs {}", m.value);
    }
}

#[test]
fn density_is_mirror_symmetric() {
    for reference in &REFERENCES {
        let s = find(reference);
        for &(x1, x2) in &[(0.1, 0.2), (-0.7, 0.05), (1.3, 0.9), (0.0, 1.5), (-2.0, 0.4)] {
            let up = eval::evaluate_psi(s, x1 * s.r(), x2 * s.r()).powi(2);
            let down = eval::evaluate_psi(s, x1 * s.r(), -x2 * s.r()).powi(2);
            assert!((up - down).abs() <= 1e-12 * up.max(1e-300), "{up} vs {down}");
        }
    }
}

#[test]
fn type_a_radial_factor_at_the_focal_value() {
    let s = find(&REFERENCES[0]);
    let u1: f64 = s.radial.poly.in_z().coeffs.iter().sum();
    let want = (s.radial.epsilon / 4.0).exp() * u1;
    assert!((s.radial.evaluate(1.0).unwrap() - want).abs() <= 1e-14 * want.abs());
}

#[test]
fn single_branch_scan() {
    let cache = MathieuCache::new();
    let choice = FactorChoice { sol_type: SolutionType::A, level: 1, branch: 2 };
    let opts = ScanOptions::for_total_charge(6.0);
    let hits = symmetric::match_r_symmetric(choice, 3.0, Parity::Sine, 1, &opts, &cache).unwrap();
    assert!(hits.iter().any(|(m, c)| (m.r - 1.335).abs() <= 5e-4 && (c.value - 2.298).abs() <= 5e-4));
    // the other branch has no b_1 crossing near the worked distance
    let other = FactorChoice { branch: 1, ..choice };
    let hits = symmetric::match_r_symmetric(other, 3.0, Parity::Sine, 1, &opts, &cache).unwrap();
    assert!(hits.iter().all(|(m, _)| (m.r - 1.335).abs() > 1e-2));
}

#[test]
fn equal_charges_have_no_polynomial_angular_factor() {
    let c = CenterPair::new(rational(3, 1), rational(3, 1)).unwrap().with_r(rational(4, 3)).unwrap();
    for t in SolutionType::ALL {
        for n in 0..3 {
            assert_eq!(separation::build_angular_cheq(t, n, &c).err(), Some(Error::SymmetricCase));
        }
    }
    assert!(z3().iter().all(|s| matches!(s.angular, AngularFactor::Mathieu(_))));
}
