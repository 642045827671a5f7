use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `n!` as a float. Exact for `n ≤ 22`, overflows to infinity past 170.
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// Associated Laguerre polynomial `L^p_{q-p}(x)` in the Rodrigues convention
///
/// ```text
/// L_q(x)       = e^x (d/dx)^q (e^{-x} x^q)
/// L^p_{q-p}(x) = (-1)^p (d/dx)^p L_q(x)
/// ```
///
/// which carries an extra factor `q!` relative to the modern convention:
/// `L^p_{q-p}(x) = q! · L^{(p)}_{q-p}(x)`. The hydrogenic normalization
/// prefactor with `[(n+l)!]³` in [`crate::hydrogenic::radial_position`] pairs
/// with this convention.
pub fn laguerre_assoc(p: i32, q_minus_p: i32, x: f64) -> Result<f64> {
    if p < 0 || q_minus_p < 0 {
        return Err(Error::domain(format!(
            "associated Laguerre index out of range: p = {p}, q - p = {q_minus_p}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::domain("associated Laguerre argument is not finite"));
    }
    let alpha = p as f64;
    let degree = q_minus_p as u32;
    // modern L^{(alpha)}_k by the three-term recurrence in k
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    let modern = match degree {
        0 => prev,
        _ => {
            for k in 1..degree {
                let k = k as f64;
                let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
                prev = cur;
                cur = next;
            }
            cur
        }
    };
    Ok(factorial((p + q_minus_p) as u32) * modern)
}

/// Associated Legendre function `P_{lm}(x)` without the Condon–Shortley
/// phase, for `0 ≤ m ≤ l`. Negative orders are handled by the spherical
/// harmonic layer.
pub fn legendre_assoc(l: u32, m: u32, x: f64) -> Result<f64> {
    if m > l {
        return Err(Error::domain(format!("legendre order m = {m} exceeds l = {l}")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("legendre argument {x} outside [-1, 1]")));
    }
    // P_mm = (2m-1)!! (1-x^2)^{m/2}
    let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        pmm *= odd * somx2;
        odd += 2.0;
    }
    if l == m {
        return Ok(pmm);
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = next;
    }
    Ok(pmmp1)
}

/// `|Y^m_l(θ, φ)|²`, which does not depend on `φ`.
pub fn spherical_harmonic_sq(l: u32, m: i32, theta: f64) -> Result<f64> {
    let am = m.unsigned_abs();
    if am > l {
        return Err(Error::domain(format!("|m| = {am} exceeds l = {l}")));
    }
    let x = theta.cos().clamp(-1.0, 1.0);
    let p = legendre_assoc(l, am, x)?;
    // P_l^{-|m|} = (-1)^m (l-|m|)!/(l+|m|)! P_l^{|m|}; the normalization
    // factor for -|m| is (l+|m|)!/(l-|m|)!, so both orders give the same
    // modulus.
    let (p, ratio) = if m >= 0 {
        (p, factorial(l - am) / factorial(l + am))
    } else {
        let reflected = factorial(l - am) / factorial(l + am) * p;
        (reflected, factorial(l + am) / factorial(l - am))
    };
    Ok((2 * l + 1) as f64 / (4.0 * PI) * ratio * p * p)
}

/// Gegenbauer polynomial `C^α_N(x)` by the three-term recurrence in `N`.
///
/// Panics if `alpha <= 0`.
pub fn gegenbauer(alpha: f64, degree: u32, x: f64) -> f64 {
    assert!(alpha > 0.0, "Gegenbauer parameter must be positive, got {alpha}");
    if degree == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * alpha * x;
    for k in 1..degree {
        let k = k as f64;
        let next = (2.0 * (k + alpha) * x * cur - (k + 2.0 * alpha - 1.0) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficients `f_k` of the expansion `C^λ_N(x) = Σ_k f_k (1 - x)^k`,
///
/// ```text
/// f_k = C(N + 2λ - 1, N) C(N, k) (2λ + N)_k / (λ + 1/2)_k (-1/2)^k
/// ```
///
/// `λ` must be a positive integer here (the hydrogenic case uses `λ = l + 1`).
pub fn gegenbauer_one_minus_x_coefficients(lambda: u32, degree: u32) -> Vec<f64> {
    assert!(lambda > 0, "Gegenbauer parameter must be positive");
    let lead = binomial(degree + 2 * lambda - 1, degree);
    let lam = lambda as f64;
    (0..=degree)
        .map(|k| {
            lead * binomial(degree, k) * pochhammer(2.0 * lam + degree as f64, k) / pochhammer(lam + 0.5, k)
                * (-0.5f64).powi(k as i32)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Rodrigues-convention Laguerre from exact integer polynomial
    /// coefficients, independent of the recurrence.
    fn laguerre_rodrigues(p: u32, q: u32, x: f64) -> f64 {
        // e^x d^q (e^{-x} x^q) = Σ_j C(q,j) q!/(q-j)! (-1)^{q-j} x^{q-j}
        let mut coeffs = vec![0i128; (q + 1) as usize];
        for j in 0..=q {
            let power = q - j;
            let mut c = binomial(q, j) as i128;
            for t in (power + 1)..=q {
                c *= t as i128;
            }
            if (q - j) % 2 == 1 {
                c = -c;
            }
            coeffs[power as usize] += c;
        }
        // (-1)^p (d/dx)^p
        for _ in 0..p {
            let mut d = vec![0i128; coeffs.len().saturating_sub(1).max(1)];
            for (i, c) in coeffs.iter().enumerate().skip(1) {
                d[i - 1] = -c * i as i128;
            }
            coeffs = d;
        }
        coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }

    #[test]
    fn laguerre_degree_zero_is_constant() {
        for &x in &[-3.0, 0.0, 0.4, 12.5] {
            assert_eq!(laguerre_assoc(0, 0, x).unwrap(), 1.0);
        }
    }

    #[test]
    fn laguerre_matches_rodrigues_definition() {
        for p in 0..6 {
            for qmp in 0..6 {
                for &x in &[0.0, 0.3, 1.7, 5.0] {
                    let want = laguerre_rodrigues(p, p + qmp, x);
                    let got = laguerre_assoc(p as i32, qmp as i32, x).unwrap();
                    assert_relative_eq!(got, want, max_relative = 1e-11, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn laguerre_rejects_negative_index() {
        assert!(matches!(laguerre_assoc(-1, 0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(laguerre_assoc(1, -2, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn legendre_base_cases() {
        assert_eq!(legendre_assoc(0, 0, 0.37).unwrap(), 1.0);
        assert_eq!(legendre_assoc(3, 0, 1.0).unwrap(), 1.0);
        // no Condon-Shortley phase: P_11(x) = +sqrt(1-x^2)
        assert_relative_eq!(legendre_assoc(1, 1, 0.6).unwrap(), 0.8, epsilon = 1e-15);
        // P_22 = 3(1-x^2)
        assert_relative_eq!(legendre_assoc(2, 2, 0.5).unwrap(), 2.25, epsilon = 1e-15);
    }

    #[test]
    fn legendre_recurrence_in_degree() {
        // x P^m_l = ((l-m+1) P^m_{l+1} + (l+m) P^m_{l-1}) / (2l+1)
        let (l, m, x) = (3u32, 2u32, 0.3);
        let lhs = x * legendre_assoc(l, m, x).unwrap();
        let rhs = ((l - m + 1) as f64 * legendre_assoc(l + 1, m, x).unwrap()
            + (l + m) as f64 * legendre_assoc(l - 1, m, x).unwrap())
            / (2 * l + 1) as f64;
        assert_relative_eq!(lhs, rhs, max_relative = 1e-14);
    }

    #[test]
    fn legendre_rejects_out_of_range() {
        assert!(legendre_assoc(2, 1, 1.0001).is_err());
        assert!(legendre_assoc(1, 2, 0.0).is_err());
    }

    #[test]
    fn constant_harmonic() {
        for &t in &[0.0, 0.4, 2.0, PI] {
            assert_relative_eq!(
                spherical_harmonic_sq(0, 0, t).unwrap(),
                1.0 / (4.0 * PI),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn harmonic_modulus_even_in_m() {
        for l in 0..6u32 {
            for m in 0..=l as i32 {
                for &t in &[0.1, 1.2, 2.9] {
                    let a = spherical_harmonic_sq(l, m, t).unwrap();
                    let b = spherical_harmonic_sq(l, -m, t).unwrap();
                    assert_relative_eq!(a, b, max_relative = 1e-13, epsilon = 1e-300);
                }
            }
        }
    }

    #[test]
    fn gegenbauer_low_orders() {
        assert_eq!(gegenbauer(2.0, 0, 0.3), 1.0);
        assert_relative_eq!(gegenbauer(2.0, 1, 0.5), 2.0, max_relative = 1e-15);
        // C^1_N are Chebyshev U_N: U_2(x) = 4x^2 - 1
        assert_relative_eq!(gegenbauer(1.0, 2, 0.7), 4.0 * 0.49 - 1.0, max_relative = 1e-14);
    }

    #[test]
    fn pochhammer_and_binomial() {
        assert_eq!(pochhammer(0.5, 0), 1.0);
        assert_relative_eq!(pochhammer(0.5, 3), 0.5 * 1.5 * 2.5);
        assert_eq!(binomial(6, 2), 15.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(factorial(5), 120.0);
    }
}
