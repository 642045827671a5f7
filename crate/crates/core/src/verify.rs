//! Closed forms against the independent oracles, packaged as named checks.
//!
//! Each check sweeps eigenstates up to its own ceiling, further capped by
//! [`VerifyConfig::n_max`], and reports the worst deviation seen. A non-zero
//! [`VerifyConfig::perturbation`] scales every closed-form value by
//! `1 + perturbation` before comparison, which must make the suite fail.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::Result;
use crate::free_schmidt::schmidt_spread;
use crate::gaussian_ppt::{
    blind_band, build_covariance, detection_map, ppt_closed_form, ppt_numeric, symplectic_eigenvalues, GridAxis,
};
use crate::hydrogenic::{radial_momentum, radial_position, QuantumNumbers, SystemParams};
use crate::linear_entropy::{angular_sum, linear_entropy, radial_sum, Volume};
use crate::moments::{com_moments, relative_moments, MomentSet};
use crate::oracle::{bessel_transform_radial, integrate, integrate_nested, racah_3j, QuadratureSpec};
use crate::specfun::{spherical_harmonic_sq, wigner3j, ThreeJArgs};

/// Ratios `a₀/b` swept by the PPT checks.
pub const PPT_RATIOS: [f64; 5] = [0.3, 1.0, std::f64::consts::SQRT_2, 1.8, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub n_max: u32,
    pub perturbation: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 10,
            perturbation: 0.0,
        }
    }
}

impl VerifyConfig {
    fn cap(&self, ceiling: u32) -> u32 {
        ceiling.min(self.n_max)
    }

    fn skew(&self, v: f64) -> f64 {
        v * (1.0 + self.perturbation)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst relative deviation (or count of mismatches for exact checks).
    pub worst: f64,
    pub tolerance: f64,
    pub cases: usize,
    pub note: Option<String>,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} worst {:.3e} tol {:.1e} cases {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tolerance,
            self.cases
        )?;
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        Ok(())
    }
}

struct Tally {
    worst: f64,
    cases: usize,
    note: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            worst: 0.0,
            cases: 0,
            note: None,
        }
    }

    fn rel(&mut self, got: f64, want: f64) {
        let err = if want == 0.0 {
            got.abs()
        } else {
            ((got - want) / want).abs()
        };
        self.record(err);
    }

    fn abs(&mut self, got: f64, want: f64) {
        self.record((got - want).abs());
    }

    fn record(&mut self, err: f64) {
        self.cases += 1;
        // NaN must fail the check
        if err.is_nan() || err > self.worst {
            self.worst = if err.is_nan() { f64::INFINITY } else { err };
        }
    }

    fn fail_with(&mut self, what: String) {
        self.cases += 1;
        self.worst = f64::INFINITY;
        self.note.get_or_insert(what);
    }

    fn finish(self, name: &'static str, tolerance: f64) -> CheckResult {
        CheckResult {
            name,
            passed: self.worst <= tolerance,
            worst: self.worst,
            tolerance,
            cases: self.cases,
            note: self.note,
        }
    }
}

fn radial_pairs(n_max: u32) -> impl Iterator<Item = QuantumNumbers> {
    (1..=n_max).flat_map(|n| (0..n).map(move |l| QuantumNumbers::new(n, l, 0).expect("l < n")))
}

fn momentum_integral(qn: QuantumNumbers, power: i32) -> Result<f64> {
    let f = |k: f64| {
        let v = radial_momentum(qn, 1.0, k).unwrap_or(f64::NAN);
        k.powi(power) * v * v
    };
    Ok(integrate(&QuadratureSpec::momentum(f, qn.n(), 1.0).rel_tol(1e-13))?.value)
}

/// `∫ k² F_nl² dk = 1`, `n ≤ 5`.
pub fn momentum_normalization(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for qn in radial_pairs(cfg.cap(5)) {
        match momentum_integral(qn, 2) {
            Ok(v) => t.rel(v, cfg.skew(1.0)),
            Err(e) => t.fail_with(format!("{qn}: {e}")),
        }
    }
    t.finish("momentum-normalization", 1e-8)
}

/// `n² a₀² ∫ k⁴ F_nl² dk = 1`, `n ≤ 5`.
pub fn fourth_moment(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for qn in radial_pairs(cfg.cap(5)) {
        let n2 = (qn.n() as f64).powi(2);
        match momentum_integral(qn, 4) {
            Ok(v) => t.rel(n2 * v, cfg.skew(1.0)),
            Err(e) => t.fail_with(format!("{qn}: {e}")),
        }
    }
    t.finish("fourth-moment", 1e-8)
}

/// `∫ r² R_nl² dr = 1`, `n ≤ 5`.
pub fn position_normalization(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for qn in radial_pairs(cfg.cap(5)) {
        let f = |r: f64| {
            let v = radial_position(qn, 1.0, r).unwrap_or(f64::NAN);
            r * r * v * v
        };
        match integrate(&QuadratureSpec::semi_infinite(f, 0.0)) {
            Ok(q) => t.rel(q.value, cfg.skew(1.0)),
            Err(e) => t.fail_with(format!("{qn}: {e}")),
        }
    }
    t.finish("position-normalization", 1e-8)
}

/// `|F_nl(k)|` against the spherical-Bessel transform of `R_nl`, `n ≤ 3`.
pub fn momentum_transform(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for qn in radial_pairs(cfg.cap(3)) {
        for k in [0.2, 0.5, 1.0, 2.5] {
            let closed = radial_momentum(qn, 1.0, k).map(f64::abs);
            match (closed, bessel_transform_radial(qn, 1.0, k)) {
                (Ok(c), Ok(o)) => t.abs(o.abs(), cfg.skew(c)),
                (Err(e), _) | (_, Err(e)) => t.fail_with(format!("{qn}: {e}")),
            }
        }
    }
    t.finish("momentum-transform", 1e-6)
}

/// `Δp̄ (2π)^{3/2} n a₀ / ħ = 1` for `n ≤ 10`, all `(l, m)`.
pub fn schmidt_identity(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    let cases = [(1.0, 1.0), (0.37, 2.5), (4.0, 0.8)];
    for (a0, hbar) in cases {
        let params = SystemParams::from_bohr_radius(a0)
            .and_then(|p| p.with_hbar(hbar))
            .expect("positive");
        for qn in QuantumNumbers::all_up_to(cfg.cap(10)) {
            let s = schmidt_spread(qn, &params);
            let identity = s.delta_p * (2.0 * PI).powf(1.5) * qn.n() as f64 * a0 / hbar;
            t.rel(identity, cfg.skew(1.0));
            let reference = schmidt_spread(QuantumNumbers::new(qn.n(), 0, 0).expect("l = 0"), &params);
            if reference.delta_p != s.delta_p || s.delta_k <= 0.0 {
                t.fail_with(format!("{qn}: spread depends on (l, m)"));
            }
        }
    }
    t.finish("schmidt-identity", 1e-14)
}

/// Sum rules on `⟨r²⟩` and `⟨p²⟩`, `n ≤ 6`.
pub fn moment_sum_rules(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for qn in QuantumNumbers::all_up_to(cfg.cap(6)) {
        let m = relative_moments(qn);
        let n2 = (qn.n() as f64).powi(2);
        let l = qn.l() as f64;
        t.rel(
            m[0] + m[1] + m[2],
            cfg.skew(n2 * (5.0 * n2 - 3.0 * l * (l + 1.0) + 1.0) / 2.0),
        );
        t.rel(m[3] + m[4] + m[5], cfg.skew(1.0 / n2));
        if m[0] * m[3] < 0.25 {
            t.fail_with(format!("{qn}: uncertainty bound violated"));
        }
    }
    t.finish("moment-sum-rules", 1e-12)
}

/// Every closed-form second moment against `(r, θ)` / `(k, θ)` quadrature,
/// `n ≤ 4`; centre-of-mass moments against 1D Gaussian quadrature.
pub fn moment_quadrature(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for qn in QuantumNumbers::all_up_to(cfg.cap(4)) {
        let closed = relative_moments(qn);
        let (l, m) = (qn.l(), qn.m());
        let ylm = |th: f64| spherical_harmonic_sq(l, m, th).unwrap_or(f64::NAN);
        let rad = |r: f64| radial_position(qn, 1.0, r).unwrap_or(f64::NAN).powi(2);
        let mom = |k: f64| radial_momentum(qn, 1.0, k).unwrap_or(f64::NAN).powi(2);
        // the φ integral contributes π for x², y² and 2π for z²
        let pos_outer = QuadratureSpec::semi_infinite((), 0.0).rel_tol(1e-10);
        let mom_outer = QuadratureSpec::momentum((), qn.n(), 1.0).rel_tol(1e-10);
        let quads = [
            integrate_nested(
                |r, th| r.powi(4) * rad(r) * th.sin().powi(3) * ylm(th),
                &pos_outer,
                (0.0, PI),
            )
            .map(|q| PI * q.value),
            integrate_nested(
                |r, th| r.powi(4) * rad(r) * th.sin() * th.cos().powi(2) * ylm(th),
                &pos_outer,
                (0.0, PI),
            )
            .map(|q| 2.0 * PI * q.value),
            integrate_nested(
                |k, th| k.powi(4) * mom(k) * th.sin().powi(3) * ylm(th),
                &mom_outer,
                (0.0, PI),
            )
            .map(|q| PI * q.value),
            integrate_nested(
                |k, th| k.powi(4) * mom(k) * th.sin() * th.cos().powi(2) * ylm(th),
                &mom_outer,
                (0.0, PI),
            )
            .map(|q| 2.0 * PI * q.value),
        ];
        let want = [closed[0], closed[2], closed[3], closed[5]];
        for (q, w) in quads.into_iter().zip(want) {
            match q {
                Ok(v) => t.rel(v, cfg.skew(w)),
                Err(e) => t.fail_with(format!("{qn}: {e}")),
            }
        }
    }
    for ratio in [0.5, 1.0, 2.0] {
        let b = 1.0 / ratio;
        let c = com_moments(ratio).expect("positive ratio");
        let density = |x: f64| (-(x * x) / (b * b)).exp() / (PI.sqrt() * b);
        let pos = integrate(&QuadratureSpec::finite(
            |x: f64| x * x * density(x),
            -40.0 * b,
            40.0 * b,
        ));
        // ⟨P²⟩ = ∫ |φ'(X)|² dX with φ'(X) = −X/b² φ(X)
        let mom = integrate(&QuadratureSpec::finite(
            |x: f64| x * x / b.powi(4) * density(x),
            -40.0 * b,
            40.0 * b,
        ));
        match (pos, mom) {
            (Ok(p), Ok(q)) => {
                t.rel(p.value, cfg.skew(c.position_variance));
                t.rel(q.value, cfg.skew(c.momentum_variance));
            }
            (Err(e), _) | (_, Err(e)) => t.fail_with(e.to_string()),
        }
    }
    t.finish("moment-quadrature", 1e-6)
}

/// Numeric symplectic spectrum of the partial transpose against the closed
/// forms, `n ≤ 4` × [`PPT_RATIOS`].
pub fn ppt_pipeline(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for qn in QuantumNumbers::all_up_to(cfg.cap(4)) {
        for ratio in PPT_RATIOS {
            let closed = ppt_closed_form(qn, ratio).expect("positive ratio");
            match ppt_numeric(qn, ratio) {
                Ok(v) => {
                    for (got, want) in v.eigenvalues.iter().zip(closed.verdict.eigenvalues) {
                        t.rel(*got, cfg.skew(want));
                    }
                    if v.detected != closed.verdict.detected {
                        t.fail_with(format!("{qn} at a0/b = {ratio}: verdicts differ"));
                    }
                }
                Err(e) => t.fail_with(format!("{qn} at a0/b = {ratio}: {e}")),
            }
        }
    }
    t.finish("ppt-pipeline", 1e-10)
}

/// Un-transposed spectrum: three centre-of-mass modes at 1, three relative
/// modes `2√(⟨x²⟩⟨p_x²⟩) ≥ 1`.
pub fn physicality(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for qn in QuantumNumbers::all_up_to(cfg.cap(4)) {
        for ratio in PPT_RATIOS {
            let ms = MomentSet::new(qn, ratio).expect("positive ratio");
            let spectrum = build_covariance(&ms).and_then(|s| symplectic_eigenvalues(&s));
            let r = &ms.relative;
            let mut want = [
                1.0,
                1.0,
                1.0,
                2.0 * (r[0] * r[3]).sqrt(),
                2.0 * (r[1] * r[4]).sqrt(),
                2.0 * (r[2] * r[5]).sqrt(),
            ];
            want.sort_by(f64::total_cmp);
            match spectrum {
                Ok(nu) => {
                    for (got, w) in nu.iter().zip(want) {
                        t.abs(*got, cfg.skew(w));
                        if *got < 1.0 - 1e-12 {
                            t.fail_with(format!("{qn} at a0/b = {ratio}: unphysical eigenvalue {got}"));
                        }
                    }
                }
                Err(e) => t.fail_with(format!("{qn}: {e}")),
            }
        }
    }
    t.finish("physicality", 1e-12)
}

/// Ground-state blind band at `√2 ≤ a₀/b ≤ √(8/3)`, plus a 16×16 map that is
/// detected, then blind, then detected along the ratio.
pub fn ground_band(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    let g = QuantumNumbers::ground();
    match blind_band(g, 1e-13) {
        Ok(Some((lo, hi))) => {
            t.rel(lo, cfg.skew(2f64.sqrt()));
            t.rel(hi, cfg.skew((8.0f64 / 3.0).sqrt()));
        }
        Ok(None) => t.fail_with("no blind band found".into()),
        Err(e) => t.fail_with(e.to_string()),
    }
    let axis = GridAxis::new(0.5, 2.0, 16).expect("valid axis");
    match detection_map(g, axis, axis, 1) {
        Ok(map) => {
            let mut cells: Vec<(f64, bool)> = map.rows.iter().map(|r| (r.a0 / r.b, r.detected)).collect();
            cells.sort_by(|a, b| a.0.total_cmp(&b.0));
            // detected → blind → detected, with at least one cell in each run
            let mut runs = vec![cells[0].1];
            for c in &cells[1..] {
                if *runs.last().expect("non-empty") != c.1 {
                    runs.push(c.1);
                }
            }
            if runs != [true, false, true] {
                t.fail_with(format!("map structure along the ratio is {runs:?}"));
            }
            for (ratio, detected) in cells {
                let inside = ratio >= 2f64.sqrt() && ratio <= (8.0f64 / 3.0).sqrt();
                if inside == detected {
                    t.fail_with(format!("cell at a0/b = {ratio} misclassified"));
                }
            }
            t.cases += map.rows.len();
        }
        Err(e) => t.fail_with(e.to_string()),
    }
    t.finish("ground-band", 1e-9)
}

/// `I_ang I_rad = 33/(16π²)` for the ground state.
pub fn linear_entropy_ground(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    match linear_entropy(QuantumNumbers::ground(), 1.0, Volume::Infinite) {
        Ok(r) => t.rel(r.product, cfg.skew(33.0 / (16.0 * PI * PI))),
        Err(e) => t.fail_with(e.to_string()),
    }
    t.finish("linear-entropy-ground", 1e-10)
}

/// Closed-form `I_ang` and `I_rad` against quadrature, `n ≤ 3`.
pub fn linear_entropy_quadrature(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    for qn in QuantumNumbers::all_up_to(cfg.cap(3)) {
        let f = |k: f64| k * k * radial_momentum(qn, 1.0, k).unwrap_or(f64::NAN).powi(4);
        let rad = integrate(&QuadratureSpec::momentum(f, qn.n(), 1.0).rel_tol(1e-12));
        let ang = integrate(&QuadratureSpec::finite(
            |th: f64| th.sin() * spherical_harmonic_sq(qn.l(), qn.m(), th).unwrap_or(f64::NAN).powi(2),
            0.0,
            PI,
        ));
        let closed = radial_sum(qn.n(), qn.l(), 1.0).and_then(|r| Ok(r * angular_sum(qn.l(), qn.m())?));
        match (rad, ang, closed) {
            (Ok(r), Ok(a), Ok(c)) => t.rel(r.value * 2.0 * PI * a.value, cfg.skew(c)),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => t.fail_with(format!("{qn}: {e}")),
        }
    }
    t.finish("linear-entropy-quadrature", 1e-6)
}

/// Library 3-j symbols equal the brute-force Racah sum exactly for every
/// `(l l l'; m m −2m)` and `(l l l'; 0 0 0)` with `l ≤ 5` (so `j ≤ 10`).
pub fn wigner_exact(cfg: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    let scale = BigRational::from_integer(BigInt::from(1))
        + BigRational::new(
            BigInt::from((cfg.perturbation * 1e12).round() as i64),
            BigInt::from(1_000_000_000_000i64),
        );
    for l in 0..=5u32 {
        for m in -(l as i32)..=l as i32 {
            for lp in 0..=2 * l {
                for args in [
                    ThreeJArgs::new([l, l, lp], [m, m, -2 * m]),
                    ThreeJArgs::new([l, l, lp], [0, 0, 0]),
                ] {
                    let lib = wigner3j(args).signed_square() * &scale;
                    let oracle = racah_3j(args).signed_square();
                    t.cases += 1;
                    if lib != oracle {
                        t.worst += 1.0;
                    }
                }
            }
        }
    }
    t.finish("wigner-exact", 0.0)
}

/// Run every check in a fixed order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckResult> {
    vec![
        position_normalization(cfg),
        momentum_normalization(cfg),
        fourth_moment(cfg),
        momentum_transform(cfg),
        schmidt_identity(cfg),
        moment_sum_rules(cfg),
        moment_quadrature(cfg),
        ppt_pipeline(cfg),
        physicality(cfg),
        ground_band(cfg),
        linear_entropy_ground(cfg),
        linear_entropy_quadrature(cfg),
        wigner_exact(cfg),
    ]
}
