//! Brute-force numerical machinery used to validate the closed forms.
//!
//! Nothing here is on a production path. The quadrature is a globally
//! adaptive Gauss–Legendre scheme with bisection; semi-infinite momentum
//! integrals are first mapped onto `[-1, 1]` with the substitution
//! `x = (n²a₀²k² − 1)/(n²a₀²k² + 1)`, which turns the algebraic tail of the
//! hydrogenic momentum functions into a polynomial-times-weight integrand.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hydrogenic::{radial_position, QuantumNumbers};
use crate::specfun::{SqrtRational, ThreeJArgs};

const GL_ORDER: usize = 15;

/// Integration domain before any change of variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[a, b]`
    Finite(f64, f64),
    /// `[a, ∞)`
    SemiInfinite(f64),
}

/// Change of variables applied before the adaptive rule runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    None,
    /// `k = (1/(n a₀)) √((1+x)/(1−x))`, `x ∈ [−1, 1]`; `[0, ∞)` only.
    MomentumCompactification {
        n: u32,
        a0: f64,
    },
    /// `t = a + tan(π u / 2)`, `u ∈ [0, 1]`; semi-infinite domains only.
    Tangent,
}

pub struct QuadratureSpec<F> {
    pub integrand: F,
    pub domain: Domain,
    pub transform: Transform,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl<F> QuadratureSpec<F> {
    pub fn finite(integrand: F, a: f64, b: f64) -> Self {
        QuadratureSpec {
            integrand,
            domain: Domain::Finite(a, b),
            transform: Transform::None,
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 4000,
        }
    }

    pub fn semi_infinite(integrand: F, a: f64) -> Self {
        QuadratureSpec {
            integrand,
            domain: Domain::SemiInfinite(a),
            transform: Transform::Tangent,
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 4000,
        }
    }

    /// `∫₀^∞ f(k) dk` through the hydrogenic momentum compactification.
    pub fn momentum(integrand: F, n: u32, a0: f64) -> Self {
        QuadratureSpec {
            integrand,
            domain: Domain::SemiInfinite(0.0),
            transform: Transform::MomentumCompactification { n, a0 },
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 4000,
        }
    }

    pub fn rel_tol(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    pub fn abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

fn gauss_legendre() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static RULE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn gl_apply(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

struct Interval {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    error: f64,
}

impl Interval {
    fn new(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64) -> Self {
        let m = 0.5 * (a + b);
        let left = gl_apply(f, a, m);
        let right = gl_apply(f, m, b);
        Interval {
            a,
            b,
            left,
            right,
            error: (left + right - whole).abs(),
        }
    }

    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64, max_sub: usize) -> Result<Quadrature> {
    let whole = gl_apply(f, a, b);
    let first = Interval::new(f, a, b, whole);
    let (mut value, mut error) = (first.value(), first.error);
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    loop {
        if !value.is_finite() {
            return Err(Error::numeric("integrand produced a non-finite value", None));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            // running totals drift; settle on exact sums before accepting
            value = heap.iter().map(Interval::value).sum();
            error = heap.iter().map(|iv| iv.error).sum();
            if error <= abs_tol.max(rel_tol * value.abs()) {
                // the embedded estimate says nothing about rounding in the sum itself
                let roundoff = 64.0 * f64::EPSILON * heap.iter().map(|iv| iv.value().abs()).sum::<f64>();
                return Ok(Quadrature {
                    value,
                    error: error.max(roundoff),
                    subdivisions,
                });
            }
        }
        if subdivisions >= max_sub {
            return Err(Error::numeric(
                format!("quadrature did not converge after {subdivisions} subdivisions (error {error:e})"),
                Some(value),
            ));
        }
        let worst = heap.pop().expect("heap is never empty");
        value -= worst.value();
        error -= worst.error;
        let m = 0.5 * (worst.a + worst.b);
        subdivisions += 1;
        if m <= worst.a || m >= worst.b {
            // interval exhausted at machine precision; freeze its contribution
            value += worst.value();
            heap.push(Interval { error: 0.0, ..worst });
            continue;
        }
        for child in [
            Interval::new(f, worst.a, m, worst.left),
            Interval::new(f, m, worst.b, worst.right),
        ] {
            value += child.value();
            error += child.error;
            heap.push(child);
        }
        error = error.max(0.0);
    }
}

/// Adaptive integration per `spec`, with an error estimate.
pub fn integrate<F: Fn(f64) -> f64>(spec: &QuadratureSpec<F>) -> Result<Quadrature> {
    if !(spec.rel_tol > 0.0) || spec.max_subdivisions == 0 {
        return Err(Error::domain(
            "quadrature needs a positive tolerance and at least one subdivision",
        ));
    }
    let f = &spec.integrand;
    let guard = |v: f64| if v.is_finite() { v } else { 0.0 };
    match (spec.domain, spec.transform) {
        (Domain::Finite(a, b), Transform::None) => adaptive(f, a, b, spec.rel_tol, spec.abs_tol, spec.max_subdivisions),
        (Domain::SemiInfinite(a), Transform::Tangent) => {
            let g = |u: f64| {
                let t = (0.5 * PI * u).tan();
                let jac = 0.5 * PI * (1.0 + t * t);
                if !t.is_finite() {
                    return 0.0;
                }
                guard(f(a + t) * jac)
            };
            adaptive(&g, 0.0, 1.0, spec.rel_tol, spec.abs_tol, spec.max_subdivisions)
        }
        (Domain::SemiInfinite(0.0), Transform::MomentumCompactification { n, a0 }) => {
            let scale = 1.0 / (n as f64 * a0);
            let g = |x: f64| {
                let k = scale * ((1.0 + x) / (1.0 - x)).sqrt();
                // dk/dx = k / (1 - x^2)
                let jac = k / ((1.0 - x) * (1.0 + x));
                if !k.is_finite() || !jac.is_finite() {
                    return 0.0;
                }
                guard(f(k) * jac)
            };
            adaptive(&g, -1.0, 1.0, spec.rel_tol, spec.abs_tol, spec.max_subdivisions)
        }
        (domain, transform) => Err(Error::Usage(format!(
            "transform {transform:?} is not applicable to domain {domain:?}"
        ))),
    }
}

/// `∫_outer ∫_c^d f(x, y) dy dx` by nesting the adaptive rule. The outer
/// axis uses `outer`'s domain, transform and tolerances; the inner axis is the
/// finite interval `inner` at the same relative tolerance.
pub fn integrate_nested<F: Fn(f64, f64) -> f64>(
    f: F,
    outer: &QuadratureSpec<()>,
    inner: (f64, f64),
) -> Result<Quadrature> {
    let failure = std::cell::RefCell::new(None);
    let g = |x: f64| {
        let spec = QuadratureSpec::finite(|y: f64| f(x, y), inner.0, inner.1)
            .rel_tol(outer.rel_tol)
            .abs_tol(outer.abs_tol)
            .max_subdivisions(outer.max_subdivisions);
        match integrate(&spec) {
            Ok(q) => q.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let spec = QuadratureSpec {
        integrand: g,
        domain: outer.domain,
        transform: outer.transform,
        rel_tol: outer.rel_tol,
        abs_tol: outer.abs_tol,
        max_subdivisions: outer.max_subdivisions,
    };
    let result = integrate(&spec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    result
}

/// Spherical Bessel function `j_l(x)` for `x ≥ 0`.
pub fn spherical_bessel_j(l: u32, x: f64) -> f64 {
    if x < (l + 2) as f64 {
        // power series: x^l/(2l+1)!! Σ_k (-x²/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
        let mut lead = 1.0;
        for i in 0..l {
            lead *= x / (2 * i + 3) as f64;
        }
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            term *= -0.5 * x * x / (k as f64 * (2 * l + 2 * k + 1) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return lead * sum;
    }
    let j0 = x.sin() / x;
    if l == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = x.sin() / (x * x) - x.cos() / x;
    for ll in 1..l {
        let next = (2 * ll + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn bessel_zeros_after(l: u32, start: f64, count: usize) -> Vec<f64> {
    let mut zeros = Vec::with_capacity(count);
    let step = 0.25;
    let mut x0 = start.max(1e-8);
    let mut f0 = spherical_bessel_j(l, x0);
    while zeros.len() < count {
        let x1 = x0 + step;
        let f1 = spherical_bessel_j(l, x1);
        if f0 == 0.0 {
            zeros.push(x0);
        } else if f0.signum() != f1.signum() {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = spherical_bessel_j(l, mid);
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    zeros
}

/// Wynn's epsilon algorithm on a sequence of partial sums.
fn wynn_epsilon(partial: &[f64]) -> f64 {
    let n = partial.len();
    if n < 3 {
        return *partial.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial.to_vec();
    let mut best = partial[n - 1];
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d == 0.0 {
                return cur[i + 1];
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        prev = cur;
        cur = next;
        col += 1;
        if col % 2 == 0 {
            best = *cur.last().unwrap();
        }
    }
    best
}

/// `√(2/π) ∫₀^∞ r² j_l(kr) R_nl(r) dr`: the radial momentum function by
/// direct spherical-Bessel transform. Integrates between consecutive zeros of
/// `j_l(kr)` and accelerates the alternating partial sums.
pub fn bessel_transform_radial(qn: QuantumNumbers, a0: f64, k: f64) -> Result<f64> {
    if !(k >= 0.0) {
        return Err(Error::domain(format!("wavevector must be non-negative, got {k}")));
    }
    if qn.n() > 4 {
        return Err(Error::domain("Bessel-transform oracle is limited to n <= 4"));
    }
    let l = qn.l();
    let norm = (2.0 / PI).sqrt();
    let radial = |r: f64| radial_position(qn, a0, r).unwrap_or(f64::NAN);
    if k == 0.0 {
        if l > 0 {
            return Ok(0.0);
        }
        let q = integrate(&QuadratureSpec::semi_infinite(|r: f64| r * r * radial(r), 0.0))?;
        return Ok(norm * q.value);
    }
    let integrand = |r: f64| r * r * spherical_bessel_j(l, k * r) * radial(r);
    // the radial factor decays like exp(-r/(n a0)); nothing survives past this
    let r_max = 120.0 * qn.n() as f64 * a0;
    let n_zeros = ((k * r_max) / PI).ceil() as usize + 2;
    let zeros = bessel_zeros_after(l, 1e-8, n_zeros.min(20_000));
    let mut edges = vec![0.0];
    edges.extend(zeros.iter().map(|z| z / k).take_while(|&r| r < r_max));
    edges.push(r_max);

    let mut partial = Vec::with_capacity(edges.len());
    let mut sum = 0.0;
    let mut quiet = 0;
    for w in edges.windows(2) {
        let q = integrate(
            &QuadratureSpec::finite(integrand, w[0], w[1])
                .rel_tol(1e-13)
                .abs_tol(1e-16),
        )?;
        sum += q.value;
        partial.push(sum);
        if q.value.abs() <= 1e-16 * sum.abs().max(1e-300) {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    let tail = &partial[partial.len().saturating_sub(12)..];
    let accelerated = wynn_epsilon(tail);
    let value = if accelerated.is_finite() { accelerated } else { sum };
    Ok(norm * value)
}

fn big_factorial(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Wigner 3-j symbol from the Racah single sum with plain big-integer
/// factorials and rational arithmetic.
pub fn racah_3j(args: ThreeJArgs) -> SqrtRational {
    let (j1, j2, j3) = (args.j1 as i64, args.j2 as i64, args.j3 as i64);
    let (m1, m2, m3) = (args.m1 as i64, args.m2 as i64, args.m3 as i64);
    if m1 + m2 + m3 != 0 || m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 || j3 < (j1 - j2).abs() || j3 > j1 + j2 {
        return SqrtRational::zero();
    }
    let f = big_factorial;
    let triangle = BigRational::new(
        f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3),
        f(j1 + j2 + j3 + 1),
    );
    let projections = f(j1 + m1) * f(j1 - m1) * f(j2 + m2) * f(j2 - m2) * f(j3 + m3) * f(j3 - m3);
    let mut sum = BigRational::zero();
    for k in 0..=(j1 + j2 + j3) {
        let parts = [
            k,
            j3 - j2 + k + m1,
            j3 - j1 + k - m2,
            j1 + j2 - j3 - k,
            j1 - k - m1,
            j2 - k + m2,
        ];
        if parts.iter().any(|&p| p < 0) {
            continue;
        }
        let den = parts.iter().fold(BigInt::one(), |acc, &p| acc * f(p));
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return SqrtRational::zero();
    }
    let mut sign: i8 = if sum.is_negative() { -1 } else { 1 };
    if (j1 - j2 - m3).rem_euclid(2) == 1 {
        sign = -sign;
    }
    let square = triangle * BigRational::from_integer(projections) * &sum * &sum;
    SqrtRational { sign, square }
}

/// Terminating `₃F₂(a; b; 1)` from explicit Pochhammer products, exact.
/// Returns `None` if no numerator parameter is a non-positive integer.
pub fn hyp3f2_terminating_exact(numer: [BigRational; 3], denom: [BigRational; 2]) -> Option<BigRational> {
    let degree = numer
        .iter()
        .filter(|a| a.is_integer() && !a.is_positive())
        .map(|a| (-a.to_integer()).try_into().unwrap_or(u64::MAX))
        .min()?;
    let poch = |a: &BigRational, k: u64| {
        (0..k).fold(BigRational::one(), |acc, i| {
            acc * (a + BigRational::from_integer(BigInt::from(i)))
        })
    };
    let mut total = BigRational::zero();
    for k in 0..=degree {
        let num = numer.iter().fold(BigRational::one(), |acc, a| acc * poch(a, k));
        let den = denom.iter().fold(BigRational::one(), |acc, b| acc * poch(b, k))
            * BigRational::from_integer(big_factorial(k as i64));
        total += num / den;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydrogenic::radial_momentum;
    use crate::specfun::{factorial, gegenbauer, wigner3j};
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_rule_is_exact_for_polynomials() {
        // order 15 integrates degree 29 exactly
        let q = gl_apply(&|x: f64| x.powi(28), -1.0, 1.0);
        assert_relative_eq!(q, 2.0 / 29.0, max_relative = 1e-14);
        let (_, w) = gauss_legendre();
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn exponential_tail() {
        let q = integrate(&QuadratureSpec::semi_infinite(|x: f64| (-x).exp(), 0.0)).unwrap();
        assert_relative_eq!(q.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn momentum_normalization_ground_state() {
        let qn = QuantumNumbers::ground();
        let f = |k: f64| {
            let v = radial_momentum(qn, 1.0, k).unwrap();
            k * k * v * v
        };
        let q = integrate(&QuadratureSpec::momentum(f, 1, 1.0)).unwrap();
        assert_relative_eq!(q.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn gegenbauer_orthogonality_closed_form() {
        // ∫(1-x²)^{3/2} [C²_1]² = 2^{1-2α} π Γ(n+2α) / (n! (n+α) Γ(α)²), α = 2, n = 1
        let q = integrate(
            &QuadratureSpec::finite(
                |x: f64| (1.0 - x * x).powf(1.5) * gegenbauer(2.0, 1, x).powi(2),
                -1.0,
                1.0,
            )
            .rel_tol(1e-12),
        )
        .unwrap();
        let want = 2f64.powi(-3) * PI * factorial(4) / (1.0 * 3.0 * 1.0);
        assert_relative_eq!(q.value, want, max_relative = 1e-10);
    }

    #[test]
    fn mismatched_transform_is_rejected() {
        let spec = QuadratureSpec {
            integrand: |x: f64| x,
            domain: Domain::Finite(0.0, 1.0),
            transform: Transform::Tangent,
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_subdivisions: 10,
        };
        assert!(matches!(integrate(&spec), Err(Error::Usage(_))));
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        let spec = QuadratureSpec::finite(|x: f64| (1.0 / x).sin() / x.sqrt(), 0.0, 1.0)
            .rel_tol(1e-15)
            .max_subdivisions(20);
        match integrate(&spec) {
            Err(Error::Numeric { best_estimate, .. }) => assert!(best_estimate.is_some()),
            other => panic!("expected numeric error, got {other:?}"),
        }
    }

    #[test]
    fn nested_product_of_polynomials() {
        let outer = QuadratureSpec::finite((), 0.0, 2.0);
        let q = integrate_nested(|x, y| x * x * y, &outer, (0.0, 3.0)).unwrap();
        assert_relative_eq!(q.value, 8.0 / 3.0 * 4.5, max_relative = 1e-13);
    }

    #[test]
    fn spherical_bessel_branches_agree() {
        // j_2 closed form: (3/x^3 - 1/x) sin x - 3 cos x / x^2
        for &x in &[0.3f64, 2.5, 3.99, 4.01, 9.0, 30.0] {
            let want = (3.0 / x.powi(3) - 1.0 / x) * x.sin() - 3.0 * x.cos() / (x * x);
            assert_relative_eq!(spherical_bessel_j(2, x), want, max_relative = 1e-10, epsilon = 1e-14);
        }
        assert_eq!(spherical_bessel_j(0, 0.0), 1.0);
        assert_eq!(spherical_bessel_j(3, 0.0), 0.0);
    }

    #[test]
    fn bessel_transform_ground_state() {
        let v = bessel_transform_radial(QuantumNumbers::ground(), 1.0, 1.0).unwrap();
        assert_relative_eq!(v.abs(), (2.0 / PI).sqrt(), max_relative = 1e-8);
        let q = QuantumNumbers::new(2, 1, 0).unwrap();
        assert_eq!(bessel_transform_radial(q, 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn racah_agrees_with_library_on_small_table() {
        for j1 in 0..=3u32 {
            for j2 in 0..=3u32 {
                for j3 in 0..=6u32 {
                    for m1 in -(j1 as i32)..=j1 as i32 {
                        for m2 in -(j2 as i32)..=j2 as i32 {
                            let args = ThreeJArgs::new([j1, j2, j3], [m1, m2, -m1 - m2]);
                            assert_eq!(racah_3j(args), wigner3j(args), "{args:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn exact_terminating_hypergeometric() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let v = hyp3f2_terminating_exact([r(1, 1), r(-2, 1), r(-3, 2)], [r(3, 2), r(5, 2)]).unwrap();
        assert_eq!(v, r(323, 175));
        assert!(hyp3f2_terminating_exact([r(1, 2), r(1, 1), r(1, 3)], [r(3, 2), r(5, 2)]).is_none());
    }
}
