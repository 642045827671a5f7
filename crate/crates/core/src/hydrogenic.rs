//! Hydrogenic eigenfunctions in position and momentum space and the
//! Gaussian centre-of-mass wavepacket.
//!
//! Lengths passed to these functions carry whatever unit `a0` is expressed
//! in; everything downstream of [`SystemParams`] works in units of `a₀`.
//!
//! Note on the momentum-space convention: the explicit `F_nl(k)` below is
//! normalized as `∫ k² F_nl² dk = 1`, i.e. it belongs to the unitary Fourier
//! transform with a `(2π)^{-3/2}` factor. A phase `(-i)^l` relative to the
//! literal transform of `ψ_nlm` is dropped; only magnitudes are compared
//! against the spherical-Bessel route in [`crate::oracle`].

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{factorial, gegenbauer, laguerre_assoc, spherical_harmonic_sq};

/// Principal, angular and magnetic quantum numbers with `0 ≤ l < n`,
/// `|m| ≤ l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
    m: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("principal quantum number must be at least 1"));
        }
        if l >= n {
            return Err(Error::domain(format!("l = {l} must be smaller than n = {n}")));
        }
        if m.unsigned_abs() > l {
            return Err(Error::domain(format!("|m| = {} exceeds l = {l}", m.unsigned_abs())));
        }
        Ok(QuantumNumbers { n, l, m })
    }

    pub fn ground() -> Self {
        QuantumNumbers { n: 1, l: 0, m: 0 }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// Every eigenstate with `n ≤ n_max`, ordered by `n`, then `l`, then `m`.
    pub fn all_up_to(n_max: u32) -> impl Iterator<Item = QuantumNumbers> {
        (1..=n_max)
            .flat_map(|n| (0..n).flat_map(move |l| (-(l as i32)..=l as i32).map(move |m| QuantumNumbers { n, l, m })))
    }
}

impl std::fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.l, self.m)
    }
}

/// Physical parameters of the two-body system.
///
/// `a0 = ħ² / (μ α)` is derived from the coupling unless the caller supplies
/// it directly, in which case `alpha` and `mu` are optional metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    alpha: Option<f64>,
    mu: Option<f64>,
    hbar: f64,
    a0: f64,
    b: Option<f64>,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

impl SystemParams {
    pub fn from_coupling(alpha: f64, mu: f64, hbar: f64) -> Result<Self> {
        let alpha = positive("alpha", alpha)?;
        let mu = positive("mu", mu)?;
        let hbar = positive("hbar", hbar)?;
        Ok(SystemParams {
            alpha: Some(alpha),
            mu: Some(mu),
            hbar,
            a0: positive("a0", hbar * hbar / (mu * alpha))?,
            b: None,
        })
    }

    /// Parameters from the reduced Bohr radius alone, with `ħ = 1`.
    pub fn from_bohr_radius(a0: f64) -> Result<Self> {
        Ok(SystemParams {
            alpha: None,
            mu: None,
            hbar: 1.0,
            a0: positive("a0", a0)?,
            b: None,
        })
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        self.hbar = positive("hbar", hbar)?;
        Ok(self)
    }

    /// Attach a Gaussian centre-of-mass width `b`.
    pub fn with_width(mut self, b: f64) -> Result<Self> {
        self.b = Some(positive("b", b)?);
        Ok(self)
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn mu(&self) -> Option<f64> {
        self.mu
    }

    pub fn width(&self) -> Result<f64> {
        self.b
            .ok_or_else(|| Error::Usage("wavepacket width b is not set".into()))
    }

    pub fn a0_over_b(&self) -> Result<f64> {
        Ok(self.a0 / self.width()?)
    }
}

/// Radial wavefunction `R_nl(r)` in position space, units `length^{-3/2}`.
pub fn radial_position(qn: QuantumNumbers, a0: f64, r: f64) -> Result<f64> {
    let a0 = positive("a0", a0)?;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!(
            "radius must be finite and non-negative, got {r}"
        )));
    }
    let (n, l) = (qn.n, qn.l);
    let na0 = n as f64 * a0;
    let rho = 2.0 * r / na0;
    // sqrt(c / [(n+l)!]^3) evaluated as sqrt(c / (n+l)!) / (n+l)!
    let big = factorial(n + l);
    let norm = ((2.0 / na0).powi(3) * factorial(n - l - 1) / (2.0 * n as f64 * big)).sqrt() / big;
    let lag = laguerre_assoc((2 * l + 1) as i32, (n - l - 1) as i32, rho)?;
    Ok(norm * (-rho / 2.0).exp() * rho.powi(l as i32) * lag)
}

/// Radial wavefunction `F_nl(k)` in momentum (wavevector) space, units
/// `length^{3/2}`.
pub fn radial_momentum(qn: QuantumNumbers, a0: f64, k: f64) -> Result<f64> {
    let a0 = positive("a0", a0)?;
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::domain(format!(
            "wavevector must be finite and non-negative, got {k}"
        )));
    }
    let (n, l) = (qn.n, qn.l);
    let nf = n as f64;
    let u = nf * a0 * k;
    let u2 = u * u;
    let norm = (2.0 / PI * factorial(n - l - 1) / factorial(n + l)).sqrt()
        * nf
        * nf
        * 2f64.powi(2 * l as i32 + 2)
        * factorial(l)
        * a0.powf(1.5);
    let x = (u2 - 1.0) / (u2 + 1.0);
    let shape = u.powi(l as i32) / (u2 + 1.0).powi(l as i32 + 2);
    Ok(norm * shape * gegenbauer((l + 1) as f64, n - l - 1, x))
}

/// Probability density `|φ(R)|²` of the Gaussian centre-of-mass wavepacket
/// `φ(R) = π^{-3/4} b^{-3/2} exp(-R·R / 2b²)`.
pub fn gaussian_com_density(b: f64, com: [f64; 3]) -> Result<f64> {
    let b = positive("b", b)?;
    let r2: f64 = com.iter().map(|c| c * c).sum();
    Ok((-r2 / (b * b)).exp() / (PI.powf(1.5) * b.powi(3)))
}

/// `|ψ_nlm(r)|²` at a relative-coordinate point.
pub fn relative_density(qn: QuantumNumbers, a0: f64, rel: [f64; 3]) -> Result<f64> {
    let r = rel.iter().map(|c| c * c).sum::<f64>().sqrt();
    let theta = if r > 0.0 {
        (rel[2] / r).clamp(-1.0, 1.0).acos()
    } else {
        0.0
    };
    let radial = radial_position(qn, a0, r)?;
    Ok(radial * radial * spherical_harmonic_sq(qn.l, qn.m, theta)?)
}

/// `|Ψ(r, R)|² = |ψ_nlm(r)|² |φ(R)|²` for the localized product state.
pub fn full_state_density(qn: QuantumNumbers, params: &SystemParams, rel: [f64; 3], com: [f64; 3]) -> Result<f64> {
    let b = params.width()?;
    Ok(relative_density(qn, params.a0, rel)? * gaussian_com_density(b, com)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn qn(n: u32, l: u32, m: i32) -> QuantumNumbers {
        QuantumNumbers::new(n, l, m).unwrap()
    }

    #[test]
    fn quantum_number_validation() {
        assert!(QuantumNumbers::new(0, 0, 0).is_err());
        assert!(QuantumNumbers::new(1, 1, 0).is_err());
        assert!(QuantumNumbers::new(3, 1, 2).is_err());
        assert!(QuantumNumbers::new(3, 2, -2).is_ok());
        // 1 + 4 + 9
        assert_eq!(QuantumNumbers::all_up_to(3).count(), 14);
    }

    #[test]
    fn bohr_radius_from_coupling() {
        let p = SystemParams::from_coupling(2.0, 0.5, 3.0).unwrap();
        assert_relative_eq!(p.a0(), 9.0);
        assert!(SystemParams::from_coupling(-1.0, 1.0, 1.0).is_err());
        assert!(p.width().is_err());
        let p = p.with_width(3.0).unwrap();
        assert_relative_eq!(p.a0_over_b().unwrap(), 3.0);
    }

    #[test]
    fn ground_state_at_origin() {
        // R_10(r) = 2 a0^{-3/2} e^{-r/a0}
        assert_relative_eq!(
            radial_position(qn(1, 0, 0), 1.0, 0.0).unwrap(),
            2.0,
            max_relative = 1e-15
        );
        let a0: f64 = 2.5;
        assert_relative_eq!(
            radial_position(qn(1, 0, 0), a0, 0.0).unwrap(),
            2.0 * a0.powf(-1.5),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            radial_position(qn(1, 0, 0), 1.0, 1.3).unwrap(),
            2.0 * (-1.3f64).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn textbook_n2_profiles() {
        // R_20 = (1/sqrt 2) (1 - r/2) e^{-r/2}, R_21 = (1/sqrt 24) r e^{-r/2}  (a0 = 1)
        let r = 0.9;
        assert_relative_eq!(
            radial_position(qn(2, 0, 0), 1.0, r).unwrap(),
            (1.0 - r / 2.0) * (-r / 2.0f64).exp() / 2f64.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            radial_position(qn(2, 1, 0), 1.0, r).unwrap(),
            r * (-r / 2.0f64).exp() / 24f64.sqrt(),
            max_relative = 1e-14
        );
        assert_eq!(radial_position(qn(2, 1, 1), 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_radius_is_rejected() {
        assert!(matches!(radial_position(qn(1, 0, 0), 1.0, -0.1), Err(Error::Domain(_))));
        assert!(matches!(radial_momentum(qn(1, 0, 0), 1.0, -0.1), Err(Error::Domain(_))));
        assert!(gaussian_com_density(0.0, [0.0; 3]).is_err());
    }

    #[test]
    fn momentum_ground_state_closed_form() {
        // F_10(k) = sqrt(2/pi) 4 a0^{3/2} / (1 + a0^2 k^2)^2
        assert_relative_eq!(
            radial_momentum(qn(1, 0, 0), 1.0, 1.0).unwrap(),
            (2.0 / PI).sqrt(),
            max_relative = 1e-15
        );
        let a0: f64 = 0.7;
        let k = 2.1;
        let want = (2.0 / PI).sqrt() * 4.0 * a0.powf(1.5) / (1.0 + a0 * a0 * k * k).powi(2);
        assert_relative_eq!(radial_momentum(qn(1, 0, 0), a0, k).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn node_count() {
        for n in 1..=6u32 {
            for l in 0..n {
                let q = qn(n, l, 0);
                let rmax = 40.0 * n as f64;
                let steps = 20_000;
                let mut changes = 0;
                let mut last = radial_position(q, 1.0, rmax / steps as f64).unwrap().signum();
                for i in 2..=steps {
                    let s = radial_position(q, 1.0, rmax * i as f64 / steps as f64).unwrap();
                    // deep tail underflows to exactly zero
                    if s != 0.0 && s.signum() != last {
                        changes += 1;
                        last = s.signum();
                    }
                }
                assert_eq!(changes, n - l - 1, "n = {n}, l = {l}");
            }
        }
    }

    #[test]
    fn scale_covariance() {
        let s: f64 = 2.0;
        for q in QuantumNumbers::all_up_to(4).filter(|q| q.m() == 0) {
            for &r in &[0.3, 1.7, 6.0] {
                let lhs = radial_position(q, 1.0, r).unwrap();
                let rhs = s.powf(1.5) * radial_position(q, s, s * r).unwrap();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn gaussian_peak() {
        let b: f64 = 1.7;
        assert_relative_eq!(
            gaussian_com_density(b, [0.0; 3]).unwrap(),
            1.0 / (PI.powf(1.5) * b.powi(3)),
            max_relative = 1e-15
        );
    }

    #[test]
    fn full_density_factorizes() {
        let params = SystemParams::from_bohr_radius(1.2).unwrap().with_width(0.8).unwrap();
        let q = qn(3, 2, -1);
        let rel = [0.4, -1.1, 0.7];
        let com = [0.2, 0.1, -0.3];
        let full = full_state_density(q, &params, rel, com).unwrap();
        let prod = relative_density(q, 1.2, rel).unwrap() * gaussian_com_density(0.8, com).unwrap();
        assert_relative_eq!(full, prod, max_relative = 1e-15);
    }

    #[test]
    fn density_is_azimuthally_symmetric() {
        let q = qn(3, 2, 1);
        let (r, theta) = (1.4f64, 0.9f64);
        let at = |phi: f64| {
            relative_density(
                q,
                1.0,
                [
                    r * theta.sin() * phi.cos(),
                    r * theta.sin() * phi.sin(),
                    r * theta.cos(),
                ],
            )
            .unwrap()
        };
        let base = at(0.0);
        for &phi in &[0.5, 1.9, 3.3, 5.0] {
            assert_relative_eq!(at(phi), base, max_relative = 1e-13);
        }
    }
}
