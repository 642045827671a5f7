//! Schmidt-spectrum spread of a free (translation invariant) eigenstate.
//!
//! With the centre-of-mass wavevector fixed at zero, the local density
//! operator of either particle is diagonal in momentum, and the Schmidt
//! spectrum is the momentum distribution of the relative wavefunction. Its
//! standard deviation vanishes only for a product state, so any positive
//! spread certifies entanglement.
//!
//! The spread depends on the Fourier normalization. The factor `(2π)^{-3/2}`
//! that the local-momentum convention introduces is kept as
//! [`SchmidtSpread::convention_factor`], so both conventions are available.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hydrogenic::{QuantumNumbers, SystemParams};

/// `(2π)^{-3/2}`
pub const FOURIER_CONVENTION_FACTOR: f64 = 0.063_493_635_934_240_97;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchmidtSpread {
    pub qn: QuantumNumbers,
    /// `Δk̄`, inverse length.
    pub delta_k: f64,
    /// `Δp̄ = ħ Δk̄`.
    pub delta_p: f64,
    pub convention_factor: f64,
}

impl SchmidtSpread {
    /// `Δk̄` with the convention factor stripped, i.e. `1/(n a₀)`.
    pub fn delta_k_bare(&self) -> f64 {
        self.delta_k / self.convention_factor
    }

    /// A free eigenstate is entangled iff its spread is positive.
    pub fn is_entangled(&self) -> bool {
        self.delta_k > 0.0
    }
}

/// `⟨k̄⟩`, zero for every eigenstate since the momentum density is even.
pub fn mean_local_wavevector(_qn: QuantumNumbers) -> [f64; 3] {
    [0.0; 3]
}

/// `∫₀^∞ k⁴ F_nl² dk = 1/(n² a₀²)`.
pub fn k_squared_moment_bare(qn: QuantumNumbers, a0: f64) -> f64 {
    let na = qn.n() as f64 * a0;
    1.0 / (na * na)
}

/// `⟨k̄²⟩` with the `(2π)^{-3}` weight of the local-momentum density.
pub fn k_squared_moment_weighted(qn: QuantumNumbers, a0: f64) -> f64 {
    FOURIER_CONVENTION_FACTOR * FOURIER_CONVENTION_FACTOR * k_squared_moment_bare(qn, a0)
}

/// `Δk̄ = (2π)^{-3/2}/(n a₀)` and `Δp̄ = ħ Δk̄`; independent of `l` and `m`.
pub fn schmidt_spread(qn: QuantumNumbers, params: &SystemParams) -> SchmidtSpread {
    let delta_k = k_squared_moment_weighted(qn, params.a0()).sqrt();
    SchmidtSpread {
        qn,
        delta_k,
        delta_p: params.hbar() * delta_k,
        convention_factor: FOURIER_CONVENTION_FACTOR,
    }
}

pub fn reduced_mass(m1: f64, m2: f64) -> Result<f64> {
    if !(m1 > 0.0 && m2 > 0.0) || m1.is_nan() || m2.is_nan() {
        return Err(Error::domain(format!("masses must be positive, got {m1} and {m2}")));
    }
    if m1.is_infinite() || m2.is_infinite() {
        return Ok(m1.min(m2));
    }
    Ok(m1 * m2 / (m1 + m2))
}

/// `Δp̄` for the true reduced mass against the heavy-nucleus approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedMassComparison {
    pub reduced_mass: f64,
    pub heavy_limit_mass: f64,
    pub delta_p_reduced: f64,
    pub delta_p_heavy_limit: f64,
}

/// `Δp̄ = (2π)^{-3/2} α μ / (n ħ)` for `μ = m₁m₂/(m₁+m₂)` and for
/// `μ = min(m₁, m₂)`.
pub fn reduced_mass_comparison(m1: f64, m2: f64, alpha: f64, hbar: f64, n: u32) -> Result<ReducedMassComparison> {
    let mu = reduced_mass(m1, m2)?;
    let heavy = m1.min(m2);
    if n == 0 {
        return Err(Error::domain("principal quantum number must be at least 1"));
    }
    let spread = |mu: f64| -> Result<f64> {
        let qn = QuantumNumbers::new(n, 0, 0)?;
        Ok(schmidt_spread(qn, &SystemParams::from_coupling(alpha, mu, hbar)?).delta_p)
    };
    Ok(ReducedMassComparison {
        reduced_mass: mu,
        heavy_limit_mass: heavy,
        delta_p_reduced: spread(mu)?,
        delta_p_heavy_limit: spread(heavy)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn convention_constant() {
        assert_relative_eq!(FOURIER_CONVENTION_FACTOR, (2.0 * PI).powf(-1.5), max_relative = 1e-15);
    }

    #[test]
    fn ground_state_and_scaling() {
        let p = SystemParams::from_bohr_radius(1.0).unwrap();
        let s1 = schmidt_spread(QuantumNumbers::ground(), &p);
        assert_relative_eq!(s1.delta_k, 0.063_493_6, max_relative = 1e-6);
        let s2 = schmidt_spread(QuantumNumbers::new(2, 1, -1).unwrap(), &p);
        assert_relative_eq!(s2.delta_k, s1.delta_k / 2.0, max_relative = 1e-15);
        assert_relative_eq!(s2.delta_k_bare(), 0.5, max_relative = 1e-15);
        assert!(s1.is_entangled());
    }

    #[test]
    fn delta_p_tracks_hbar_and_coupling() {
        let p = SystemParams::from_coupling(2.0, 3.0, 1.5).unwrap();
        let s = schmidt_spread(QuantumNumbers::new(3, 2, 2).unwrap(), &p);
        assert_relative_eq!(
            s.delta_p,
            FOURIER_CONVENTION_FACTOR * 2.0 * 3.0 / (3.0 * 1.5),
            max_relative = 1e-14
        );
    }

    #[test]
    fn positronium_and_heavy_limit() {
        let c = reduced_mass_comparison(1.0, 1.0, 1.0, 1.0, 1).unwrap();
        assert_eq!(c.reduced_mass, 0.5);
        assert_relative_eq!(c.delta_p_heavy_limit / c.delta_p_reduced, 2.0, max_relative = 1e-15);
        assert_eq!(reduced_mass(1.0, f64::INFINITY).unwrap(), 1.0);
        assert!(reduced_mass(0.0, 1.0).is_err());
        assert!(reduced_mass_comparison(1.0, 1.0, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn hydrogen_to_positronium_ratio() {
        let mass_ratio = 1_836.152_673_43;
        let h = reduced_mass_comparison(1.0, mass_ratio, 1.0, 1.0, 1).unwrap();
        let ps = reduced_mass_comparison(1.0, 1.0, 1.0, 1.0, 1).unwrap();
        let ratio = h.delta_p_reduced / ps.delta_p_reduced;
        assert_relative_eq!(ratio, 2.0 / (1.0 + 1.0 / mass_ratio), max_relative = 1e-14);
    }
}
