use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const HYP3F2_DEFAULT_TOL: f64 = 1e-14;
pub const HYP3F2_MAX_TERMS: usize = 1_000_000;

/// Parameters of `₃F₂(a1, a2, a3; b1, b2; 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypergeometricSpec {
    pub numer: [Rational64; 3],
    pub denom: [Rational64; 2],
}

fn is_non_positive_integer(r: &Rational64) -> bool {
    r.is_integer() && *r.numer() <= 0
}

fn to_big(r: &Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn to_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl HypergeometricSpec {
    pub fn new(numer: [Rational64; 3], denom: [Rational64; 2]) -> Result<Self> {
        if let Some(b) = denom.iter().find(|b| is_non_positive_integer(b)) {
            return Err(Error::domain(format!(
                "denominator parameter {b} is zero or a negative integer"
            )));
        }
        let spec = HypergeometricSpec { numer, denom };
        if spec.terminating_degree().is_none() && spec.excess() <= Rational64::zero() {
            return Err(Error::domain(format!(
                "3F2 at unit argument diverges: sum(b) - sum(a) = {} <= 0",
                spec.excess()
            )));
        }
        Ok(spec)
    }

    /// Index of the last non-zero term when the series terminates.
    pub fn terminating_degree(&self) -> Option<u64> {
        self.numer
            .iter()
            .filter(|a| is_non_positive_integer(a))
            .map(|a| a.numer().unsigned_abs())
            .min()
    }

    /// Saalschützian excess `Σb − Σa`; the series converges iff it is positive.
    pub fn excess(&self) -> Rational64 {
        self.denom.iter().sum::<Rational64>() - self.numer.iter().sum::<Rational64>()
    }
}

/// `₃F₂(a; b; 1)`.
///
/// Terminating series are summed in exact rational arithmetic and rounded
/// once. Convergent series are summed in floating point. Terms decay like
/// `k^{-(1+s)}`, `s` being the excess, so the remaining tail after term `k` is
/// about `k t_k / s`; summation stops once that falls below `tol` relative to
/// the partial sum. If [`HYP3F2_MAX_TERMS`] is reached first, the tail is
/// added from the same estimate and checked against the estimate taken at
/// half the cap.
pub fn hyp3f2_unit(spec: &HypergeometricSpec, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    if let Some(degree) = spec.terminating_degree() {
        return sum_terminating(spec, degree);
    }

    let a: Vec<f64> = spec.numer.iter().map(to_f64).collect();
    let b: Vec<f64> = spec.denom.iter().map(to_f64).collect();
    let s = to_f64(&spec.excess());
    let mut term = 1.0;
    let mut sum = 1.0;
    // Neumaier compensation; long slowly decaying sums lose ~k ulps otherwise
    let mut carry = 0.0;
    let mut quiet = 0;
    let mut halfway = None;
    for k in 0..HYP3F2_MAX_TERMS {
        let kf = k as f64;
        term *= (a[0] + kf) * (a[1] + kf) * (a[2] + kf) / ((b[0] + kf) * (b[1] + kf) * (kf + 1.0));
        let t = sum + term;
        carry += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        let tail = term * (kf + 1.0) / s;
        if term.abs().max(tail.abs()) <= tol * sum.abs() {
            quiet += 1;
            // a stray near-zero term before the asymptotic regime must not end the sum
            if quiet >= 3 {
                return Ok(sum + carry);
            }
        } else {
            quiet = 0;
        }
        if k + 1 == HYP3F2_MAX_TERMS / 2 {
            halfway = Some(sum + carry + tail);
        }
    }
    let estimate = sum + carry + term * HYP3F2_MAX_TERMS as f64 / s;
    let spread = halfway.map_or(f64::INFINITY, |h| (estimate - h).abs());
    if spread > 1e-8 * estimate.abs() {
        return Err(Error::numeric(
            format!("3F2 series did not converge within {HYP3F2_MAX_TERMS} terms"),
            Some(estimate),
        ));
    }
    Ok(estimate)
}

fn sum_terminating(spec: &HypergeometricSpec, degree: u64) -> Result<f64> {
    let a: Vec<BigRational> = spec.numer.iter().map(to_big).collect();
    let b: Vec<BigRational> = spec.denom.iter().map(to_big).collect();
    let mut term = BigRational::from_integer(1.into());
    let mut sum = term.clone();
    for k in 0..degree {
        let k = BigRational::from_integer(BigInt::from(k));
        let num = (&a[0] + &k) * (&a[1] + &k) * (&a[2] + &k);
        let den = (&b[0] + &k) * (&b[1] + &k) * (&k + BigRational::from_integer(1.into()));
        if den.is_zero() {
            return Err(Error::domain("zero denominator inside terminating 3F2"));
        }
        term = term * num / den;
        sum += &term;
    }
    let value = sum
        .to_f64()
        .ok_or_else(|| Error::numeric("terminating 3F2 not representable as f64", None))?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::numeric(
            format!(
                "terminating 3F2 overflowed (|sum| has {} bits)",
                sum.abs().numer().bits()
            ),
            None,
        ))
    }
}
