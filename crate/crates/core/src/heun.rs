//! Quasi-exactly solvable confluent Heun equation
//!
//! ```text
//! (z^2-1) u'' + (eps/2 (z^2-1) + gamma (z-1) + delta (z+1)) u' + (alpha/2 (z+1) - q) u = 0
//! ```
//!
//! With `alpha = -n eps` the Frobenius series about `z = -1` truncates to a
//! polynomial of degree `n` whenever `q` is a root of `P_{n+1}`, the last
//! member of the three-term family
//!
//! ```text
//! P_0 = 1,  P_1 = q,
//! P_{k+1} = (q - k(delta+gamma-eps+k-1)) P_k - k eps (n-k+1)(gamma+k-1) P_{k-1}.
//! ```
//!
//! Branch labels `j = 1..=n+1` always refer to the roots sorted ascending.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots;
use crate::scalar::{convergents, Rational, Scalar};

/// Largest denominator tried when confirming a root is rational.
const EXACT_ROOT_MAX_DEN: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CheqParams<S> {
    pub gamma: S,
    pub delta: S,
    pub epsilon: S,
    pub n: usize,
}

impl<S: Scalar> CheqParams<S> {
    pub fn new(gamma: S, delta: S, epsilon: S, n: usize) -> Result<Self> {
        if gamma <= S::zero() {
            return Err(Error::InvalidParameter(format!(
                "gamma must be positive, got {gamma:?}"
            )));
        }
        Ok(CheqParams {
            gamma,
            delta,
            epsilon,
            n,
        })
    }

    /// `alpha = -n eps`, the QES condition.
    pub fn alpha(&self) -> S {
        -(S::from_usize(self.n).expect("usize") * self.epsilon.clone())
    }

    pub fn to_f64(&self) -> CheqParams<f64> {
        CheqParams {
            gamma: self.gamma.to_f64_lossy(),
            delta: self.delta.to_f64_lossy(),
            epsilon: self.epsilon.to_f64_lossy(),
            n: self.n,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RecurrenceSet<S> {
    pub params: CheqParams<S>,
    /// `P_0 ..= P_{n+1}`.
    pub polys: Vec<Poly<S>>,
}

impl<S: Scalar> RecurrenceSet<S> {
    /// `P_{n+1}`, whose roots quantize `q`.
    pub fn top(&self) -> &Poly<S> {
        self.polys.last().expect("P_0 and P_1 always present")
    }
}

/// One quantized value of the accessory parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct QesRoot {
    /// 1-based branch index in ascending order.
    pub j: usize,
    pub q: f64,
    /// `|P_{n+1}(q)|` after polishing.
    pub residual: f64,
    /// Set when the root was confirmed rational by exact evaluation.
    pub exact: Option<Rational>,
}

/// Truncated Frobenius solution `u(z) = sum_k c_k (z+1)^k`.
#[derive(Debug, Clone)]
pub struct HeunPolynomial<S> {
    pub params: CheqParams<S>,
    pub root: QesRoot,
    pub q: S,
    /// Coefficients in powers of `(z+1)`; `c_0 = 1`.
    pub coeffs: Vec<S>,
}

impl<S: Scalar> HeunPolynomial<S> {
    pub fn in_shifted(&self) -> Poly<S> {
        Poly::new(self.coeffs.clone())
    }

    /// Same polynomial in powers of `z`.
    pub fn in_z(&self) -> Poly<S> {
        self.in_shifted().shift(&S::one())
    }

    /// Monomial coefficients in `z` divided by the leading one.
    pub fn monic_in_z(&self) -> Poly<S> {
        let p = self.in_z();
        let lead = p.leading().clone();
        p.scale(&(S::one() / lead))
    }

    pub fn to_f64(&self) -> HeunPolynomial<f64> {
        HeunPolynomial {
            params: self.params.to_f64(),
            root: self.root.clone(),
            q: self.q.to_f64_lossy(),
            coeffs: self.coeffs.iter().map(|c| c.to_f64_lossy()).collect(),
        }
    }
}

pub fn build_recurrence<S: Scalar>(params: &CheqParams<S>) -> RecurrenceSet<S> {
    let n = params.n;
    let s = |k: usize| S::from_usize(k).expect("usize");
    let eps = &params.epsilon;
    let base = params.delta.clone() + params.gamma.clone() - eps.clone();
    let mut polys = vec![Poly::constant(S::one()), Poly::x()];
    for k in 1..=n {
        // (q - k(delta+gamma-eps+k-1)) P_k
        let shift = s(k) * (base.clone() + s(k) - S::one());
        let lin = Poly::new(vec![-shift, S::one()]);
        let first = &lin * &polys[k];
        // k eps (n-k+1)(gamma+k-1) P_{k-1}
        let c = s(k) * eps.clone() * s(n + 1 - k) * (params.gamma.clone() + s(k) - S::one());
        let next = &first - &polys[k - 1].scale(&c);
        polys.push(next);
    }
    RecurrenceSet {
        params: params.clone(),
        polys,
    }
}

/// `P_0(q) ..= P_{n+1}(q)` and their `q`-derivatives by running the
/// recurrence at the point. Far better conditioned than Horner on the
/// expanded coefficients when `|eps|` is large.
pub fn recurrence_values<S: Scalar>(params: &CheqParams<S>, q: &S) -> (Vec<S>, Vec<S>) {
    let n = params.n;
    let s = |k: usize| S::from_usize(k).expect("usize");
    let base = params.delta.clone() + params.gamma.clone() - params.epsilon.clone();
    let mut p = vec![S::one(), q.clone()];
    let mut dp = vec![S::zero(), S::one()];
    for k in 1..=n {
        let a = q.clone() - s(k) * (base.clone() + s(k) - S::one());
        let b = s(k) * params.epsilon.clone() * s(n + 1 - k) * (params.gamma.clone() + s(k) - S::one());
        p.push(a.clone() * p[k].clone() - b.clone() * p[k - 1].clone());
        dp.push(p[k].clone() + a * dp[k].clone() - b * dp[k - 1].clone());
    }
    (p, dp)
}

/// Newton steps on `P_{n+1}` evaluated by the recurrence, keeping the
/// iterate with the smallest value.
fn polish_by_recurrence(params: &CheqParams<f64>, q0: f64) -> f64 {
    let value = |q: f64| recurrence_values(params, &q);
    let (p, dp) = value(q0);
    let mut best = (q0, p[params.n + 1].abs());
    let (mut q, mut v, mut d) = (q0, p[params.n + 1], dp[params.n + 1]);
    for _ in 0..8 {
        if v == 0.0 || d == 0.0 {
            break;
        }
        q -= v / d;
        let (p, dp) = value(q);
        (v, d) = (p[params.n + 1], dp[params.n + 1]);
        if v.abs() < best.1 {
            best = (q, v.abs());
        } else {
            break;
        }
    }
    best.0
}

/// The floating parameters taken exactly, and one Newton step on
/// `P_{n+1}` from the floating root `q` in exact arithmetic. The step
/// recovers the bits of the root that `f64` rounds away, so quantities
/// assembled from it are accurate to rounding once converted back.
pub fn refine_root_exactly(params: &CheqParams<f64>, q: f64) -> Option<(CheqParams<Rational>, Rational)> {
    let exact = |x: f64| Rational::from_float(x);
    let params = CheqParams::new(exact(params.gamma)?, exact(params.delta)?, exact(params.epsilon)?, params.n).ok()?;
    let q = exact(q)?;
    let (p, dp) = recurrence_values(&params, &q);
    let (v, d) = (&p[params.n + 1], &dp[params.n + 1]);
    if *d == Rational::from_integer(0.into()) {
        return None;
    }
    let refined = q - v / d;
    Some((params, refined))
}

/// The `n+1` real roots of `P_{n+1}`, ascending, with rational values
/// attached when the scalar kind is exact and the root is rational.
pub fn find_q_roots<S: Scalar>(rec: &RecurrenceSet<S>) -> Result<Vec<QesRoot>> {
    let top = rec.top();
    let top_f = top.to_f64();
    let params_f = rec.params.to_f64();
    let mut qs: Vec<f64> = roots::real_roots(&top_f)?
        .into_iter()
        .map(|q| polish_by_recurrence(&params_f, q))
        .collect();
    qs.sort_by(|a, b| a.total_cmp(b));
    Ok(qs
        .into_iter()
        .enumerate()
        .map(|(i, q)| {
            let exact = if S::EXACT { exact_root(top, q) } else { None };
            let q = exact.as_ref().map_or(q, |r| r.to_f64_lossy());
            QesRoot {
                j: i + 1,
                q,
                residual: recurrence_values(&params_f, &q).0[rec.params.n + 1].abs(),
                exact,
            }
        })
        .collect())
}

fn exact_root<S: Scalar>(p: &Poly<S>, approx: f64) -> Option<Rational> {
    convergents(approx, EXACT_ROOT_MAX_DEN)
        .into_iter()
        .filter(|c| (c.to_f64_lossy() - approx).abs() <= 1e-8 * (1.0 + approx.abs()))
        .find(|c| p.eval(&S::from_rational(c)).is_zero())
}

/// `c_k = (-1)^k P_k(q) / (2^k k! (gamma)_k)` for `k = 0..=n`.
pub fn coefficients_at<S: Scalar>(rec: &RecurrenceSet<S>, q: &S) -> Vec<S> {
    coefficients_from_params(&rec.params, q)
}

pub fn coefficients_from_params<S: Scalar>(params: &CheqParams<S>, q: &S) -> Vec<S> {
    let gamma = &params.gamma;
    let (p, _) = recurrence_values(params, q);
    let mut denom = S::one();
    let mut out = Vec::with_capacity(params.n + 1);
    for (k, pk) in p.into_iter().take(params.n + 1).enumerate() {
        if k > 0 {
            let kk = S::from_usize(k).expect("usize");
            denom = denom * S::ratio(-2, 1) * kk.clone() * (gamma.clone() + kk - S::one());
        }
        out.push(pk / denom.clone());
    }
    out
}

/// Truncated polynomial for one root. Exact scalars use the root's rational
/// value when it has one and its floating value otherwise; floating
/// coefficients are rounded from the exactly refined root.
pub fn assemble_polynomial<S: Scalar>(rec: &RecurrenceSet<S>, root: &QesRoot) -> HeunPolynomial<S> {
    let q = S::from_root(root).unwrap_or_else(|| S::from_f64(root.q).expect("finite root"));
    let refined = if S::EXACT { None } else { refine_root_exactly(&rec.params.to_f64(), root.q) };
    let coeffs = match refined {
        Some((exact, q_ref)) => coefficients_from_params(&exact, &q_ref)
            .iter()
            .map(|c| S::from_f64(c.to_f64_lossy()).expect("finite"))
            .collect(),
        None => coefficients_at(rec, &q),
    };
    HeunPolynomial {
        params: rec.params.clone(),
        root: root.clone(),
        coeffs,
        q,
    }
}

/// Left-hand side of the confluent Heun equation applied to `u`, where `u`
/// is given in powers of `w = z+1`; the result is also in powers of `w`.
pub fn cheq_operator<S: Scalar>(params: &CheqParams<S>, q: &S, u: &Poly<S>) -> Poly<S> {
    let half = S::ratio(1, 2);
    let two = S::ratio(2, 1);
    let du = u.derivative();
    let ddu = du.derivative();
    // z^2 - 1 = w^2 - 2w, z - 1 = w - 2, z + 1 = w
    let w2m2w = Poly::new(vec![S::zero(), -two.clone(), S::one()]);
    let w = Poly::x();
    let drift = &(&w2m2w.scale(&(params.epsilon.clone() * half.clone()))
        + &Poly::new(vec![-(two * params.gamma.clone()), params.gamma.clone()]))
        + &w.scale(&params.delta);
    let pot = Poly::new(vec![-q.clone(), params.alpha() * half]);
    &(&(&w2m2w * &ddu) + &(&drift * &du)) + &(&pot * u)
}

/// Largest coefficient magnitude of the operator applied to the solution.
pub fn cheq_residual<S: Scalar>(sol: &HeunPolynomial<S>) -> S {
    cheq_operator(&sol.params, &sol.q, &sol.in_shifted()).max_abs_coeff()
}

/// First `terms` coefficients of the Frobenius series about `z = -1`,
/// generated directly from the differential equation (independent of the
/// `P_k` family):
///
/// ```text
/// 2(k+1)(k+gamma) a_{k+1} = (k(k-1+gamma+delta-eps) - q) a_k + (eps(k-1) + alpha)/2 a_{k-1}
/// ```
pub fn frobenius_series<S: Scalar>(params: &CheqParams<S>, q: &S, terms: usize) -> Vec<S> {
    let s = |k: usize| S::from_usize(k).expect("usize");
    let half = S::ratio(1, 2);
    let gd = params.gamma.clone() + params.delta.clone() - params.epsilon.clone();
    let mut a: Vec<S> = Vec::with_capacity(terms);
    for k in 0..terms {
        if k == 0 {
            a.push(S::one());
            continue;
        }
        let m = k - 1;
        let sm = s(m);
        let mut num = (sm.clone() * (sm.clone() + gd.clone() - S::one()) - q.clone()) * a[m].clone();
        if m >= 1 {
            let c = (params.epsilon.clone() * (sm.clone() - S::one()) + params.alpha()) * half.clone();
            num = num + c * a[m - 1].clone();
        }
        let den = S::ratio(2, 1) * s(k) * (sm + params.gamma.clone());
        a.push(num / den);
    }
    a
}
