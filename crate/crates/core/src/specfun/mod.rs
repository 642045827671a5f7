//! Special functions: orthogonal polynomials, spherical harmonics, Wigner
//! 3-j symbols and the generalized hypergeometric series `₃F₂` at unit
//! argument.

mod hypergeometric;
mod polynomials;
mod wigner;

pub use hypergeometric::{hyp3f2_unit, HypergeometricSpec, HYP3F2_DEFAULT_TOL, HYP3F2_MAX_TERMS};
pub use polynomials::{
    binomial, factorial, gegenbauer, gegenbauer_one_minus_x_coefficients, laguerre_assoc, legendre_assoc, pochhammer,
    spherical_harmonic_sq,
};
pub use wigner::{wigner3j, SqrtRational, ThreeJArgs};
