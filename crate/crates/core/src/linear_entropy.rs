//! Closed-form linear entropy of a free hydrogenic eigenstate.
//!
//! For a box of volume `V`, `S_Lin = 1 − I_rad I_ang / V` with
//! `I_rad = ∫ k² F_nl⁴ dk` and `I_ang = ∮ |Y_lm|⁴ dΩ`. The angular integral
//! reduces to a Wigner 3-j sum, the radial one to a finite sum over the
//! `(1 − x)^k` expansion of the Gegenbauer polynomial with a bracket of two
//! `₃F₂` values and a Gamma ratio.
//!
//! The result is reported for completeness only: in this setting the linear
//! entropy has no operational meaning as an entanglement measure, and it
//! tends to 1 for every eigenstate as `V → ∞`.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hydrogenic::QuantumNumbers;
use crate::specfun::{binomial, factorial, hyp3f2_unit, wigner3j, HypergeometricSpec, ThreeJArgs, HYP3F2_DEFAULT_TOL};

/// `4π I_ang` as an exact rational:
/// `Σ_{l'} (2l+1)²(2l'+1) (l l l'; m m −2m)² (l l l'; 0 0 0)²`.
pub fn angular_sum_exact(l: u32, m: i32) -> Result<BigRational> {
    if m.unsigned_abs() > l {
        return Err(Error::domain(format!("|m| = {} exceeds l = {l}", m.unsigned_abs())));
    }
    let mut total = BigRational::zero();
    for lp in 0..=2 * l {
        let a = wigner3j(ThreeJArgs::new([l, l, lp], [m, m, -2 * m]));
        let b = wigner3j(ThreeJArgs::new([l, l, lp], [0, 0, 0]));
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let weight = BigInt::from((2 * l + 1) * (2 * l + 1) * (2 * lp + 1));
        total += BigRational::from_integer(weight) * a.square * b.square;
    }
    Ok(total)
}

/// `I_ang = ∮ |Y_lm|⁴ dΩ`.
pub fn angular_sum(l: u32, m: i32) -> Result<f64> {
    let exact = angular_sum_exact(l, m)?;
    Ok(exact.to_f64().unwrap_or(f64::NAN) / (4.0 * PI))
}

fn ln_gamma_half_integer(twice: u32) -> f64 {
    // Γ(twice/2) for a positive integer `twice`
    let mut acc = if twice % 2 == 1 { 0.5 * PI.ln() } else { 0.0 };
    let mut x = if twice % 2 == 1 { 0.5 } else { 1.0 };
    while 2.0 * x < twice as f64 {
        acc += x.ln();
        x += 1.0;
    }
    acc
}

fn half(twice: i64) -> Rational64 {
    Rational64::new(twice, 2)
}

/// `∫₋₁¹ (1−x)^{5+γ} (1−x²)^{2l+1/2} dx` as the sum of a Gamma ratio and two
/// `₃F₂` terms.
pub fn radial_bracket(l: u32, gamma: u32) -> Result<f64> {
    let (l, g) = (l as i64, gamma as i64);
    let twice_ln = ln_gamma_half_integer((4 * l + 3) as u32) + ln_gamma_half_integer((4 * l + 2 * g + 13) as u32)
        - ln_gamma_half_integer((8 * l + 2 * g + 16) as u32);
    let gamma_term = ((4 * l + g + 6) as f64 * 2f64.ln() + twice_ln).exp();

    let second = HypergeometricSpec::new([half(1), half(2), half(-4 * l - 1)], [half(g + 7), half(g + 8)])?;
    let first = HypergeometricSpec::new([half(2), half(-g - 4), half(-g - 3)], [half(3), half(4 * l + 5)])?;
    let f2 = hyp3f2_unit(&second, HYP3F2_DEFAULT_TOL)?;
    let f1 = hyp3f2_unit(&first, HYP3F2_DEFAULT_TOL)?;
    Ok(gamma_term + f2 / (g + 6) as f64 + (g + 5) as f64 * f1 / (4 * l + 3) as f64)
}

/// The same integral as a Beta function,
/// `2^{p+q+1} B(p+1, q+1)` with `p = γ + 2l + 11/2`, `q = 2l + 1/2`.
pub fn radial_bracket_beta(l: u32, gamma: u32) -> f64 {
    let p2 = 2 * gamma + 4 * l + 11; // 2p
    let q2 = 4 * l + 1; // 2q
    let ln = ln_gamma_half_integer(p2 + 2) + ln_gamma_half_integer(q2 + 2) - ln_gamma_half_integer(p2 + q2 + 4);
    (((p2 + q2) as f64 / 2.0 + 1.0) * 2f64.ln() + ln).exp()
}

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn big_factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

fn big_binomial(n: u64, k: u64) -> BigInt {
    big_factorial(n) / (big_factorial(k) * big_factorial(n - k))
}

fn convolve(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients `c_γ` of `[Σ_k g_k (1−x)^k]⁴`, exact, with
/// `g_k = C(N,k) (n+l+1)_k / (l+3/2)_k (−1/2)^k` and `N = n−l−1`.
pub fn fourth_power_coefficients(n: u32, l: u32) -> Vec<BigRational> {
    let big_n = u64::from(n - l - 1);
    let (n, l) = (u64::from(n), u64::from(l));
    let mut g = Vec::with_capacity(big_n as usize + 1);
    let mut ratio = BigRational::from_integer(BigInt::from(1));
    for k in 0..=big_n {
        if k > 0 {
            // (n+l+k) / ((2l+2k+1)/2) · (−1/2)
            ratio = ratio * big(n + l + k) / big(2 * l + 2 * k + 1) * BigRational::from_integer(BigInt::from(-1));
        }
        g.push(BigRational::from_integer(big_binomial(big_n, k)) * &ratio);
    }
    let sq = convolve(&g, &g);
    convolve(&sq, &sq)
}

/// `B_γ / π` as an exact rational, `B_γ` being [`radial_bracket`]:
/// `2^{γ+4l+7} (2A)! (2B)! / (4^{A+B} A! B! (γ+4l+7)!)`, `A = γ+2l+6`, `B = 2l+1`.
pub fn radial_bracket_over_pi(l: u32, gamma: u32) -> BigRational {
    let (l, g) = (u64::from(l), u64::from(gamma));
    let (a, b) = (g + 2 * l + 6, 2 * l + 1);
    let num = big_factorial(2 * a) * big_factorial(2 * b);
    let den = big_factorial(a) * big_factorial(b) * big_factorial(g + 4 * l + 7);
    let twos = BigInt::from(2).pow((g + 4 * l + 7) as u32);
    let fours = BigInt::from(4).pow((a + b) as u32);
    BigRational::new(num * twos, den * fours)
}

/// `π I_rad / a₀³` as an exact rational.
pub fn radial_sum_exact(n: u32, l: u32) -> Result<BigRational> {
    if n == 0 || l >= n {
        return Err(Error::domain(format!("need 0 <= l < n, got n = {n}, l = {l}")));
    }
    let coeffs = fourth_power_coefficients(n, l);
    let mut sum = BigRational::zero();
    for (gamma, c) in coeffs.iter().enumerate() {
        sum += c * radial_bracket_over_pi(l, gamma as u32);
    }
    let (nn, ll) = (u64::from(n), u64::from(l));
    // [2 (n−l−1)!/(n+l)!]² (l!)⁴ 2^{4l} n⁵ C(n+l, n−l−1)⁴, with one π of the
    // squared 2/π cancelled by the bracket
    let ratio = BigRational::new(BigInt::from(2) * big_factorial(nn - ll - 1), big_factorial(nn + ll));
    let lead = BigRational::from_integer(big_binomial(nn + ll, nn - ll - 1));
    let pref = &ratio
        * &ratio
        * BigRational::from_integer(big_factorial(ll).pow(4))
        * BigRational::from_integer(BigInt::from(2).pow(4 * l))
        * big(nn.pow(5))
        * lead.pow(4);
    Ok(pref * sum)
}

/// `I_rad = ∫₀^∞ k² F_nl⁴ dk`, units `a₀³`.
///
/// ```text
/// I_rad = [2/π (n−l−1)!/(n+l)!]² (l!)⁴ 2^{4l} n⁵ a₀³ C(n+l, n−l−1)⁴ Σ_γ c_γ B_γ
/// ```
///
/// The quadruple sum over expansion indices depends on `a+b+c+d = γ` only
/// through the bracket `B_γ`, so it is collapsed onto `γ` with the
/// convolution weights `c_γ`. The weights alternate in sign and the sum
/// cancels heavily as `n − l` grows, so it is carried out in exact rational
/// arithmetic: every `B_γ` is `π` times a rational.
pub fn radial_sum(n: u32, l: u32, a0: f64) -> Result<f64> {
    if !(a0 > 0.0) {
        return Err(Error::domain("a0 must be positive"));
    }
    let exact = radial_sum_exact(n, l)?;
    let value = exact.to_f64().unwrap_or(f64::NAN) / PI * a0.powi(3);
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::Internal(format!(
            "radial sum for (n, l) = ({n}, {l}) is not positive"
        )));
    }
    Ok(value)
}

/// The same radial integral with every bracket evaluated in floating point
/// from its `₃F₂` form and the sum over `γ` done in `f64`. Accurate to about
/// 1e-10 for `n ≤ 4`; cancellation destroys it for larger `n − l`.
pub fn radial_sum_hypergeometric(n: u32, l: u32, a0: f64) -> Result<f64> {
    if n == 0 || l >= n {
        return Err(Error::domain(format!("need 0 <= l < n, got n = {n}, l = {l}")));
    }
    let coeffs = fourth_power_coefficients(n, l);
    let mut brackets: HashMap<u32, f64> = HashMap::new();
    let mut sum = 0.0;
    for (gamma, c) in coeffs.iter().enumerate() {
        let gamma = gamma as u32;
        let b = match brackets.get(&gamma) {
            Some(b) => *b,
            None => {
                let b = radial_bracket(l, gamma)?;
                brackets.insert(gamma, b);
                b
            }
        };
        sum += c.to_f64().unwrap_or(f64::NAN) * b;
    }
    let ratio = 2.0 / PI * factorial(n - l - 1) / factorial(n + l);
    let lead = binomial(n + l, n - l - 1);
    let pref = ratio * ratio * factorial(l).powi(4) * 2f64.powi(4 * l as i32) * (n as f64).powi(5) * lead.powi(4);
    let value = pref * sum * a0.powi(3);
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::numeric(
            format!("radial sum for (n, l) = ({n}, {l}) lost all precision"),
            Some(value),
        ));
    }
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Volume {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearEntropyResult {
    pub qn: QuantumNumbers,
    pub i_ang: f64,
    /// Units of `a₀³`.
    pub i_rad: f64,
    pub product: f64,
    pub volume: Volume,
    pub s_lin: f64,
}

impl LinearEntropyResult {
    pub fn s_lin_at_volume(&self, volume: Volume) -> Result<f64> {
        match volume {
            Volume::Infinite => Ok(1.0),
            Volume::Finite(v) if v > 0.0 && v.is_finite() => Ok(1.0 - self.product / v),
            Volume::Finite(v) => Err(Error::domain(format!("volume must be positive, got {v}"))),
        }
    }
}

pub fn linear_entropy(qn: QuantumNumbers, a0: f64, volume: Volume) -> Result<LinearEntropyResult> {
    let i_ang = angular_sum(qn.l(), qn.m())?;
    let i_rad = radial_sum(qn.n(), qn.l(), a0)?;
    let mut out = LinearEntropyResult {
        qn,
        i_ang,
        i_rad,
        product: i_ang * i_rad,
        volume,
        s_lin: 1.0,
    };
    out.s_lin = out.s_lin_at_volume(volume)?;
    Ok(out)
}
