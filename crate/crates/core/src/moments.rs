//! Closed-form first and second moments of the localized hydrogenic state
//! in the decoupled (relative, centre-of-mass) variables.
//!
//! All values are dimensionless: positions in units of `a₀`, momenta in
//! units of `ħ/a₀`. First moments vanish identically by parity and are not
//! stored.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hydrogenic::QuantumNumbers;

/// Radial moment `⟨r^q⟩` in units of `a₀^q` from the Kramers–Pasternack
/// recursion
///
/// ```text
/// 4(q+1)⟨r^q⟩ − 4n²(2q+1)⟨r^{q−1}⟩ + n²q[(2l+1)² − q²]⟨r^{q−2}⟩ = 0
/// ```
///
/// seeded with `⟨r⁰⟩ = 1` and `⟨r^{-1}⟩ = 1/n²`. Supported for `q ≥ -1`.
pub fn kramers_pasternack(qn: QuantumNumbers, q: i32) -> Result<f64> {
    if q < -1 {
        return Err(Error::domain(format!(
            "radial moment of order {q} is not reachable from the recursion seeds"
        )));
    }
    let n2 = (qn.n() as f64).powi(2);
    let s = ((2 * qn.l() + 1) as f64).powi(2);
    let mut below = 1.0 / n2; // ⟨r^{-1}⟩
    let mut cur = 1.0; // ⟨r^0⟩
    if q == -1 {
        return Ok(below);
    }
    for k in 1..=q {
        let kf = k as f64;
        let next = (4.0 * n2 * (2.0 * kf + 1.0) * cur - n2 * kf * (s - kf * kf) * below) / (4.0 * (kf + 1.0));
        below = cur;
        cur = next;
    }
    Ok(cur)
}

/// `⟨r²⟩ = n²(5n² − 3l(l+1) + 1)/2` in units of `a₀²`.
pub fn r_squared(qn: QuantumNumbers) -> f64 {
    let n2 = (qn.n() as f64).powi(2);
    let l = qn.l() as f64;
    n2 * (5.0 * n2 - 3.0 * l * (l + 1.0) + 1.0) / 2.0
}

fn check_lm(l: u32, m: i32) -> Result<()> {
    if m.unsigned_abs() > l {
        return Err(Error::domain(format!("|m| = {} exceeds l = {l}", m.unsigned_abs())));
    }
    Ok(())
}

/// `(l² + l + m² − 1) / ((2l − 1)(2l + 3))`: the fraction of `⟨r²⟩` carried by
/// each transverse coordinate.
pub fn transverse_fraction(l: u32, m: i32) -> Result<f64> {
    check_lm(l, m)?;
    let (l, m) = (l as i64, m as i64);
    let num = l * l + l + m * m - 1;
    let den = (2 * l - 1) * (2 * l + 3);
    let v = num as f64 / den as f64;
    positive_fraction(v)
}

/// `(1 − 2l² − 2l + 2m²) / (3 − 4l² − 4l)`: the longitudinal fraction.
pub fn longitudinal_fraction(l: u32, m: i32) -> Result<f64> {
    check_lm(l, m)?;
    let (l, m) = (l as i64, m as i64);
    let num = 1 - 2 * l * l - 2 * l + 2 * m * m;
    let den = 3 - 4 * l * l - 4 * l;
    positive_fraction(num as f64 / den as f64)
}

fn positive_fraction(v: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Internal(format!("angular fraction {v} is not positive")))
    }
}

/// `∫₀^π sin³θ 𝒴^m_l(θ) dθ`.
pub fn angular_sin2(l: u32, m: i32) -> Result<f64> {
    Ok(transverse_fraction(l, m)? / PI)
}

/// `∫₀^π sinθ cos²θ 𝒴^m_l(θ) dθ`.
pub fn angular_cos2(l: u32, m: i32) -> Result<f64> {
    Ok(longitudinal_fraction(l, m)? / (2.0 * PI))
}

/// `[⟨x²⟩, ⟨y²⟩, ⟨z²⟩, ⟨p_x²⟩, ⟨p_y²⟩, ⟨p_z²⟩]` of the relative motion.
pub fn relative_moments(qn: QuantumNumbers) -> [f64; 6] {
    let t = transverse_fraction(qn.l(), qn.m()).expect("validated quantum numbers");
    let z = longitudinal_fraction(qn.l(), qn.m()).expect("validated quantum numbers");
    let r2 = r_squared(qn);
    let k2 = 1.0 / (qn.n() as f64).powi(2);
    [r2 * t, r2 * t, r2 * z, k2 * t, k2 * t, k2 * z]
}

/// Centre-of-mass moments of the Gaussian wavepacket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComMoments {
    /// `⟨X²⟩ = b²/(2a₀²)`
    pub position_variance: f64,
    /// `⟨P_X²⟩ = a₀²/(2b²)`
    pub momentum_variance: f64,
    pub mean_position: f64,
    pub mean_momentum: f64,
}

pub fn com_moments(a0_over_b: f64) -> Result<ComMoments> {
    if !(a0_over_b > 0.0) || !a0_over_b.is_finite() {
        return Err(Error::domain(format!(
            "a0/b must be positive and finite, got {a0_over_b}"
        )));
    }
    let b_over_a0 = 1.0 / a0_over_b;
    Ok(ComMoments {
        position_variance: 0.5 * b_over_a0 * b_over_a0,
        momentum_variance: 0.5 * a0_over_b * a0_over_b,
        mean_position: 0.0,
        mean_momentum: 0.0,
    })
}

/// The twelve second moments of the localized state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSet {
    pub qn: QuantumNumbers,
    pub a0_over_b: f64,
    /// `[⟨x²⟩, ⟨y²⟩, ⟨z²⟩, ⟨p_x²⟩, ⟨p_y²⟩, ⟨p_z²⟩]`
    pub relative: [f64; 6],
    /// `[⟨X²⟩, ⟨Y²⟩, ⟨Z²⟩, ⟨P_X²⟩, ⟨P_Y²⟩, ⟨P_Z²⟩]`
    pub com: [f64; 6],
}

impl MomentSet {
    pub fn new(qn: QuantumNumbers, a0_over_b: f64) -> Result<Self> {
        let c = com_moments(a0_over_b)?;
        let (x, p) = (c.position_variance, c.momentum_variance);
        Ok(MomentSet {
            qn,
            a0_over_b,
            relative: relative_moments(qn),
            com: [x, x, x, p, p, p],
        })
    }

    /// Variances ordered as the decoupled phase-space vector
    /// `(x, p_x, y, p_y, z, p_z, X, P_X, Y, P_Y, Z, P_Z)`.
    pub fn decoupled_diagonal(&self) -> [f64; 12] {
        let r = &self.relative;
        let c = &self.com;
        [r[0], r[3], r[1], r[4], r[2], r[5], c[0], c[3], c[1], c[4], c[2], c[5]]
    }

    /// Relative position variances in units of `length²` given `a₀`.
    pub fn relative_positions_scaled(&self, a0: f64) -> [f64; 3] {
        let s = a0 * a0;
        [self.relative[0] * s, self.relative[1] * s, self.relative[2] * s]
    }

    /// Relative momentum variances in units of `momentum²`.
    pub fn relative_momenta_scaled(&self, a0: f64, hbar: f64) -> [f64; 3] {
        let s = (hbar / a0).powi(2);
        [self.relative[3] * s, self.relative[4] * s, self.relative[5] * s]
    }

    pub fn com_positions_scaled(&self, a0: f64) -> [f64; 3] {
        let s = a0 * a0;
        [self.com[0] * s, self.com[1] * s, self.com[2] * s]
    }

    pub fn com_momenta_scaled(&self, a0: f64, hbar: f64) -> [f64; 3] {
        let s = (hbar / a0).powi(2);
        [self.com[3] * s, self.com[4] * s, self.com[5] * s]
    }
}
