//! Entanglement witnesses for hydrogen-like two-body systems.
//!
//! The crate covers three tests of bipartite entanglement between the two
//! constituents of a hydrogenic bound state:
//!
//! * [`free_schmidt`]: the spread of the continuous Schmidt spectrum of a free
//!   (translation invariant) eigenstate, `Δk̄ = (2π)^{-3/2} / (n a₀)`.
//! * [`linear_entropy`]: the closed-form linear entropy of a free eigenstate,
//!   built from Wigner 3-j symbols, Gegenbauer expansions and `₃F₂` series.
//! * [`gaussian_ppt`]: the second-moment PPT test for an eigenstate whose
//!   centre of mass sits in a Gaussian wavepacket of width `b`.
//!
//! Every closed form is paired with an independent numerical route in
//! [`oracle`] (adaptive quadrature, spherical-Bessel transforms, a brute-force
//! Racah sum).
//!
//! Internally all lengths are measured in units of the reduced Bohr radius
//! `a₀` and momenta in units of `ħ/a₀`.

// `!(x > 0.0)` is used on purpose so that NaN is rejected with the bad values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod free_schmidt;
pub mod gaussian_ppt;
pub mod hydrogenic;
pub mod linear_entropy;
pub mod moments;
pub mod oracle;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use free_schmidt::SchmidtSpread;
pub use gaussian_ppt::{CovarianceMatrix, DetectionMap, PptVerdict};
pub use hydrogenic::{QuantumNumbers, SystemParams};
pub use linear_entropy::{LinearEntropyResult, Volume};
pub use moments::MomentSet;
