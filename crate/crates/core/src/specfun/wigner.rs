//! Wigner 3-j symbols in exact arithmetic.
//!
//! Every factorial is kept as a vector of prime exponents, so the Racah
//! single sum is carried out over integers with a common denominator and no
//! intermediate ever overflows. The result is exposed as `sign · √(p/q)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arguments `(j1 j2 j3; m1 m2 m3)` of a 3-j symbol with integer entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThreeJArgs {
    pub j1: u32,
    pub j2: u32,
    pub j3: u32,
    pub m1: i32,
    pub m2: i32,
    pub m3: i32,
}

impl ThreeJArgs {
    pub fn new(j: [u32; 3], m: [i32; 3]) -> Self {
        ThreeJArgs {
            j1: j[0],
            j2: j[1],
            j3: j[2],
            m1: m[0],
            m2: m[1],
            m3: m[2],
        }
    }

    /// Projection bounds, `m1 + m2 + m3 = 0` and the triangle inequality.
    pub fn satisfies_selection_rules(&self) -> bool {
        let (j1, j2, j3) = (self.j1 as i64, self.j2 as i64, self.j3 as i64);
        self.m1.unsigned_abs() <= self.j1
            && self.m2.unsigned_abs() <= self.j2
            && self.m3.unsigned_abs() <= self.j3
            && self.m1 as i64 + self.m2 as i64 + self.m3 as i64 == 0
            && (j1 - j2).abs() <= j3
            && j3 <= j1 + j2
    }
}

/// A real number of the form `sign · √square` with `square ≥ 0` rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtRational {
    pub sign: i8,
    pub square: BigRational,
}

impl SqrtRational {
    pub fn zero() -> Self {
        SqrtRational {
            sign: 0,
            square: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The signed square `sign · square`, exact.
    pub fn signed_square(&self) -> BigRational {
        match self.sign {
            0 => BigRational::zero(),
            s if s > 0 => self.square.clone(),
            _ => -self.square.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let sq = self.square.to_f64().unwrap_or(f64::NAN);
        f64::from(self.sign) * sq.sqrt()
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}sqrt({})", if s < 0 { "-" } else { "" }, self.square),
        }
    }
}

/// Exponents of a positive rational over the first primes.
#[derive(Debug, Clone)]
struct PrimeExponents(Vec<i32>);

struct Primes(Vec<u32>);

impl Primes {
    fn up_to(n: u32) -> Self {
        let mut sieve = vec![true; (n + 1) as usize];
        let mut primes = Vec::new();
        for i in 2..=n {
            if sieve[i as usize] {
                primes.push(i);
                let mut j = i * i;
                while j <= n {
                    sieve[j as usize] = false;
                    j += i;
                }
            }
        }
        Primes(primes)
    }

    /// Legendre's formula for the exponent of each prime in `n!`.
    fn factorial(&self, n: u32) -> PrimeExponents {
        PrimeExponents(
            self.0
                .iter()
                .map(|&p| {
                    let mut e = 0;
                    let mut q = n / p;
                    while q > 0 {
                        e += q as i32;
                        q /= p;
                    }
                    e
                })
                .collect(),
        )
    }

    fn one(&self) -> PrimeExponents {
        PrimeExponents(vec![0; self.0.len()])
    }

    fn to_biguint(&self, e: &PrimeExponents) -> BigUint {
        debug_assert!(e.0.iter().all(|&x| x >= 0));
        self.0
            .iter()
            .zip(&e.0)
            .fold(BigUint::one(), |acc, (&p, &k)| acc * BigUint::from(p).pow(k as u32))
    }

    fn to_rational(&self, e: &PrimeExponents) -> BigRational {
        let num = PrimeExponents(e.0.iter().map(|&x| x.max(0)).collect());
        let den = PrimeExponents(e.0.iter().map(|&x| (-x).max(0)).collect());
        BigRational::new(BigInt::from(self.to_biguint(&num)), BigInt::from(self.to_biguint(&den)))
    }
}

impl PrimeExponents {
    fn mul(mut self, other: &PrimeExponents) -> Self {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a += b);
        self
    }

    fn div(mut self, other: &PrimeExponents) -> Self {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a -= b);
        self
    }

    fn max(&self, other: &PrimeExponents) -> Self {
        PrimeExponents(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }
}

/// Wigner 3-j symbol by the Racah single sum in exact arithmetic.
///
/// Selection-rule violations give an exact zero. Integer arguments only.
pub fn wigner3j(args: ThreeJArgs) -> SqrtRational {
    if !args.satisfies_selection_rules() {
        return SqrtRational::zero();
    }
    let (j1, j2, j3) = (args.j1 as i64, args.j2 as i64, args.j3 as i64);
    let (m1, m2, m3) = (args.m1 as i64, args.m2 as i64, args.m3 as i64);

    let primes = Primes::up_to((j1 + j2 + j3 + 1) as u32);
    let fact = |n: i64| primes.factorial(n as u32);

    // square of the prefactor: triangle coefficient times the six (j ± m)!
    let sqrt_part = fact(j1 + j2 - j3)
        .mul(&fact(j1 - j2 + j3))
        .mul(&fact(-j1 + j2 + j3))
        .div(&fact(j1 + j2 + j3 + 1))
        .mul(&fact(j1 + m1))
        .mul(&fact(j1 - m1))
        .mul(&fact(j2 + m2))
        .mul(&fact(j2 - m2))
        .mul(&fact(j3 + m3))
        .mul(&fact(j3 - m3));

    let k_min = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let k_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);

    let denominators: Vec<(i64, PrimeExponents)> = (k_min..=k_max)
        .map(|k| {
            let d = fact(k)
                .mul(&fact(j3 - j2 + k + m1))
                .mul(&fact(j3 - j1 + k - m2))
                .mul(&fact(j1 + j2 - j3 - k))
                .mul(&fact(j1 - k - m1))
                .mul(&fact(j2 - k + m2));
            (k, d)
        })
        .collect();

    let common = denominators.iter().fold(primes.one(), |acc, (_, d)| acc.max(d));
    let numerator: BigInt = denominators
        .iter()
        .map(|(k, d)| {
            let term = BigInt::from(primes.to_biguint(&common.clone().div(d)));
            if k % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum();

    if numerator.is_zero() {
        return SqrtRational::zero();
    }
    let phase_negative = (j1 - j2 - m3).rem_euclid(2) == 1;
    let negative = phase_negative ^ numerator.is_negative();

    let sum = BigRational::new(numerator.abs(), BigInt::from(primes.to_biguint(&common)));
    SqrtRational {
        sign: if negative { -1 } else { 1 },
        square: primes.to_rational(&sqrt_part) * &sum * &sum,
    }
}
