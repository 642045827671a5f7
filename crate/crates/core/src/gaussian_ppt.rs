//! Second-moment PPT test for the localized two-body state.
//!
//! Phase-space vectors have twelve components. In the particle basis the
//! ordering is `(x₁, p_x1, y₁, p_y1, z₁, p_z1, x₂, p_x2, y₂, p_y2, z₂, p_z2)`;
//! in the decoupled basis it is `(x, p_x, y, p_y, z, p_z, X, P_X, Y, P_Y, Z, P_Z)`
//! with `x = x₁ − x₂`, `p_x = (p_x1 − p_x2)/2`, `X = (x₁ + x₂)/2`,
//! `P_X = p_x1 + p_x2` (equal masses).
//!
//! Covariances use the anticommutator convention `σ = ⟨{Δr̂, Δr̂ᵀ}⟩`, which
//! puts a factor 2 on every variance. In this convention the vacuum has
//! `σ = 1` and the physicality bound on symplectic eigenvalues is `ν ≥ 1`,
//! not `ħ/2`. A state is flagged entangled when a symplectic eigenvalue of the
//! partial transpose lies strictly below 1; `ν̃ = 1` exactly is not a detection.

use nalgebra::{Complex, SMatrix, Schur};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hydrogenic::QuantumNumbers;
use crate::moments::MomentSet;

pub type Mat12 = SMatrix<f64, 12, 12>;

/// Relative tolerance used to pair the doubly degenerate eigenvalues of
/// `−(Ωσ)²`.
pub const PAIRING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Basis {
    Particle,
    Decoupled,
}

/// A 12×12 real symmetric covariance matrix in dimensionless units
/// (`a₀` for positions, `ħ/a₀` for momenta).
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    matrix: Mat12,
    basis: Basis,
}

impl CovarianceMatrix {
    pub fn new(matrix: Mat12, basis: Basis) -> Result<Self> {
        let scale = matrix.amax().max(1.0);
        if (matrix - matrix.transpose()).amax() > 1e-12 * scale {
            return Err(Error::domain("covariance matrix is not symmetric"));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("covariance matrix has non-finite entries"));
        }
        Ok(CovarianceMatrix { matrix, basis })
    }

    pub fn matrix(&self) -> &Mat12 {
        &self.matrix
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.matrix.cholesky().is_some()
    }
}

/// Block-diagonal symplectic form with blocks `[[0, 1], [−1, 0]]`.
pub fn symplectic_form() -> Mat12 {
    let mut omega = Mat12::zeros();
    for k in 0..6 {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// `S` with `r_decoupled = S r_particle`: a 50:50 beam splitter per axis,
/// rescaled so that `(x, p_x)` and `(X, P_X)` stay canonical pairs.
pub fn symplectic_transform() -> Mat12 {
    let mut s = Mat12::zeros();
    for d in 0..3 {
        let (x1, p1, x2, p2) = (2 * d, 2 * d + 1, 6 + 2 * d, 6 + 2 * d + 1);
        let (x, p, cx, cp) = (2 * d, 2 * d + 1, 6 + 2 * d, 6 + 2 * d + 1);
        s[(x, x1)] = 1.0;
        s[(x, x2)] = -1.0;
        s[(p, p1)] = 0.5;
        s[(p, p2)] = -0.5;
        s[(cx, x1)] = 0.5;
        s[(cx, x2)] = 0.5;
        s[(cp, p1)] = 1.0;
        s[(cp, p2)] = 1.0;
    }
    s
}

/// `S⁻¹`: `x₁ = X + x/2`, `x₂ = X − x/2`, `p₁ = P/2 + p`, `p₂ = P/2 − p`.
pub fn symplectic_transform_inverse() -> Mat12 {
    let mut s = Mat12::zeros();
    for d in 0..3 {
        let (x1, p1, x2, p2) = (2 * d, 2 * d + 1, 6 + 2 * d, 6 + 2 * d + 1);
        let (x, p, cx, cp) = (2 * d, 2 * d + 1, 6 + 2 * d, 6 + 2 * d + 1);
        s[(x1, cx)] = 1.0;
        s[(x1, x)] = 0.5;
        s[(x2, cx)] = 1.0;
        s[(x2, x)] = -0.5;
        s[(p1, cp)] = 0.5;
        s[(p1, p)] = 1.0;
        s[(p2, cp)] = 0.5;
        s[(p2, p)] = -1.0;
    }
    s
}

/// `σ′ = 2 diag(moments)` in the decoupled basis.
pub fn decoupled_covariance(moments: &MomentSet) -> CovarianceMatrix {
    let diag = moments.decoupled_diagonal();
    let mut m = Mat12::zeros();
    for (i, v) in diag.iter().enumerate() {
        m[(i, i)] = 2.0 * v;
    }
    CovarianceMatrix {
        matrix: m,
        basis: Basis::Decoupled,
    }
}

/// Particle-basis covariance `σ = S⁻¹ σ′ S⁻ᵀ`.
pub fn build_covariance(moments: &MomentSet) -> Result<CovarianceMatrix> {
    let sinv = symplectic_transform_inverse();
    let sigma = sinv * decoupled_covariance(moments).matrix * sinv.transpose();
    let sigma = 0.5 * (sigma + sigma.transpose());
    let cov = CovarianceMatrix::new(sigma, Basis::Particle)?;
    if !cov.is_positive_definite() {
        return Err(Error::Internal(
            "assembled covariance matrix is not positive definite".into(),
        ));
    }
    Ok(cov)
}

/// Flip the sign of the second particle's momenta.
pub fn partial_transpose(sigma: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    if sigma.basis != Basis::Particle {
        return Err(Error::Usage(
            "partial transpose needs a particle-basis covariance matrix".into(),
        ));
    }
    let mut m = sigma.matrix;
    for idx in [7, 9, 11] {
        for j in 0..12 {
            m[(idx, j)] = -m[(idx, j)];
        }
        for i in 0..12 {
            m[(i, idx)] = -m[(i, idx)];
        }
    }
    Ok(CovarianceMatrix {
        matrix: m,
        basis: Basis::Particle,
    })
}

/// Symplectic eigenvalues in ascending order: square roots of the doubly
/// degenerate eigenvalues of `−(Ωσ)²`.
///
/// The production route is a nonsymmetric (real Schur) eigensolve of
/// `−ΩσΩσ`. The QR iteration can stall on the highly structured matrices the
/// localized states produce, so it runs under an iteration cap; on failure the
/// same spectrum is taken from the similar symmetric matrix `AᵀA` with
/// `A = LᵀΩL` and `σ = LLᵀ`.
pub fn symplectic_eigenvalues(sigma: &CovarianceMatrix) -> Result<[f64; 6]> {
    let chol = sigma
        .matrix
        .cholesky()
        .ok_or_else(|| Error::domain("symplectic eigenvalues need a positive definite matrix"))?;
    let omega = symplectic_form();
    let m = omega * sigma.matrix;
    let target = -(m * m);
    let values = match Schur::try_new(target, f64::EPSILON, SCHUR_MAX_ITERATIONS) {
        Some(schur) => real_spectrum(schur.complex_eigenvalues().iter().copied())?,
        None => {
            let l = chol.l();
            let a = l.transpose() * omega * l;
            let sym = a.transpose() * a;
            real_spectrum(sym.symmetric_eigenvalues().iter().map(|&v| Complex::new(v, 0.0)))?
        }
    };
    pair_up(values)
}

const SCHUR_MAX_ITERATIONS: usize = 2000;

fn real_spectrum(eig: impl Iterator<Item = Complex<f64>>) -> Result<Vec<f64>> {
    let eig: Vec<Complex<f64>> = eig.collect();
    let scale = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut values = Vec::with_capacity(12);
    for z in eig {
        if z.im.abs() > 1e-8 * scale {
            return Err(Error::numeric(format!("eigenvalue {z} of -(Ωσ)² is not real"), None));
        }
        if z.re <= 0.0 {
            return Err(Error::numeric(
                format!("eigenvalue {} of -(Ωσ)² is not positive", z.re),
                None,
            ));
        }
        values.push(z.re);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn pair_up(values: Vec<f64>) -> Result<[f64; 6]> {
    let mut out = [0.0; 6];
    for (k, pair) in values.chunks_exact(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        if (a - b).abs() > PAIRING_TOL * a.max(b) {
            return Err(Error::numeric(
                format!("eigenvalues {a} and {b} of -(Ωσ)² do not pair up"),
                Some((0.5 * (a + b)).sqrt()),
            ));
        }
        out[k] = (0.5 * (a + b)).sqrt();
    }
    Ok(out)
}

/// Symplectic spectrum of a partial transpose and its classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptVerdict {
    /// Ascending.
    pub eigenvalues: [f64; 6],
    pub min: f64,
    /// `min < 1`
    pub detected: bool,
}

impl PptVerdict {
    pub fn from_eigenvalues(mut eigenvalues: [f64; 6]) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        let min = eigenvalues[0];
        PptVerdict {
            eigenvalues,
            min,
            detected: min < 1.0,
        }
    }
}

/// The labelled closed-form spectrum `ν̃₁ … ν̃₆` with `ν̃₃ = ν̃₁`, `ν̃₄ = ν̃₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormPpt {
    pub qn: QuantumNumbers,
    pub a0_over_b: f64,
    pub nu: [f64; 6],
    pub verdict: PptVerdict,
}

impl ClosedFormPpt {
    pub fn nu1(&self) -> f64 {
        self.nu[0]
    }
    pub fn nu2(&self) -> f64 {
        self.nu[1]
    }
    pub fn nu5(&self) -> f64 {
        self.nu[4]
    }
    pub fn nu6(&self) -> f64 {
        self.nu[5]
    }
}

/// `ν̃₁ = √(⟨x²⟩⟨P_X²⟩)`, `ν̃₂ = 4√(⟨X²⟩⟨p_x²⟩)`, and likewise per axis.
pub fn ppt_closed_form(qn: QuantumNumbers, a0_over_b: f64) -> Result<ClosedFormPpt> {
    let ms = MomentSet::new(qn, a0_over_b)?;
    let (r, c) = (&ms.relative, &ms.com);
    let mut nu = [0.0; 6];
    for axis in 0..3 {
        nu[2 * axis] = (r[axis] * c[3 + axis]).sqrt();
        nu[2 * axis + 1] = 4.0 * (c[axis] * r[3 + axis]).sqrt();
    }
    Ok(ClosedFormPpt {
        qn,
        a0_over_b,
        nu,
        verdict: PptVerdict::from_eigenvalues(nu),
    })
}

/// The four distinct eigenvalues `(ν̃₁, ν̃₂, ν̃₅, ν̃₆)` written out in terms of
/// `(n, l, m)` and `a₀/b`, without going through the moment set.
pub fn ppt_factored_form(qn: QuantumNumbers, a0_over_b: f64) -> Result<[f64; 4]> {
    if !(a0_over_b > 0.0) {
        return Err(Error::domain("a0/b must be positive"));
    }
    let (n, l, m) = (qn.n() as f64, qn.l() as f64, qn.m() as f64);
    let den = 4.0 * l * l + 4.0 * l - 3.0;
    let t = (l * l + l + m * m - 1.0) / den;
    let z = (2.0 * l * l + 2.0 * l - 2.0 * m * m - 1.0) / den;
    let radial = 5.0 * n * n - 3.0 * l * (l + 1.0) + 1.0;
    let front = a0_over_b * n / 2.0;
    let back = 2.0 * 2f64.sqrt() / (a0_over_b * n);
    Ok([
        front * (t * radial).sqrt(),
        back * t.sqrt(),
        front * (z * radial).sqrt(),
        back * z.sqrt(),
    ])
}

/// Production path: moments → covariance → partial transpose → numeric
/// symplectic spectrum.
pub fn ppt_numeric(qn: QuantumNumbers, a0_over_b: f64) -> Result<PptVerdict> {
    let ms = MomentSet::new(qn, a0_over_b)?;
    let sigma = build_covariance(&ms)?;
    let pt = partial_transpose(&sigma)?;
    Ok(PptVerdict::from_eigenvalues(symplectic_eigenvalues(&pt)?))
}

/// Ratio range `(lower, upper)` of `a₀/b` where the test detects nothing.
/// Each edge is found by bisection on the minimum symplectic eigenvalue of
/// the numeric pipeline; `None` if the band is empty.
pub fn blind_band(qn: QuantumNumbers, tol: f64) -> Result<Option<(f64, f64)>> {
    // min(ν̃₁, ν̃₅) grows linearly in the ratio, min(ν̃₂, ν̃₆) falls as 1/ratio;
    // their crossing is the least detectable point
    let unit = ppt_closed_form(qn, 1.0)?;
    let rising = unit.nu1().min(unit.nu5());
    let falling = unit.nu2().min(unit.nu6());
    let peak = (falling / rising).sqrt();
    let min_nu = |r: f64| ppt_numeric(qn, r).map(|v| v.min);
    if min_nu(peak)? < 1.0 {
        return Ok(None);
    }
    let bisect = |mut detected: f64, mut blind: f64| -> Result<f64> {
        while (detected - blind).abs() > tol * blind.abs() {
            let mid = 0.5 * (detected + blind);
            if min_nu(mid)? < 1.0 {
                detected = mid;
            } else {
                blind = mid;
            }
        }
        Ok(0.5 * (detected + blind))
    };
    let mut lo = peak / 2.0;
    while min_nu(lo)? >= 1.0 {
        lo /= 2.0;
    }
    let mut hi = peak * 2.0;
    while min_nu(hi)? >= 1.0 {
        hi *= 2.0;
    }
    Ok(Some((bisect(lo, peak)?, bisect(hi, peak)?)))
}

/// One cell of a detection map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapRow {
    pub a0: f64,
    pub b: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub nu5: f64,
    pub nu6: f64,
    pub min_nu: f64,
    pub detected: bool,
}

/// Inclusive, evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if !(min > 0.0 && max >= min && max.is_finite()) {
            return Err(Error::domain(format!(
                "grid range [{min}, {max}] must be positive and ordered"
            )));
        }
        if points < 2 {
            return Err(Error::domain("a grid axis needs at least 2 points"));
        }
        Ok(GridAxis { min, max, points })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.points - 1) as f64
    }
}

/// Row-major grid (`a₀` outer, `b` inner) of closed-form PPT spectra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionMap {
    pub qn: QuantumNumbers,
    pub a0_axis: GridAxis,
    pub b_axis: GridAxis,
    pub rows: Vec<MapRow>,
}

pub const MAP_CSV_HEADER: &str = "a0,b,nu1,nu2,nu5,nu6,min_nu,detected";

impl DetectionMap {
    /// CSV with 17 significant digits per value and LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * 180);
        out.push_str(MAP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                r.a0,
                r.b,
                r.nu1,
                r.nu2,
                r.nu5,
                r.nu6,
                r.min_nu,
                u8::from(r.detected)
            ));
        }
        out
    }
}

fn map_cell(qn: QuantumNumbers, a0: f64, b: f64) -> Result<MapRow> {
    let c = ppt_closed_form(qn, a0 / b)?;
    Ok(MapRow {
        a0,
        b,
        nu1: c.nu1(),
        nu2: c.nu2(),
        nu5: c.nu5(),
        nu6: c.nu6(),
        min_nu: c.verdict.min,
        detected: c.verdict.detected,
    })
}

/// Evaluate the map over `threads` workers (at least one). Cells are split
/// into contiguous blocks and reassembled in order, so the output does not
/// depend on the thread count.
pub fn detection_map(qn: QuantumNumbers, a0_axis: GridAxis, b_axis: GridAxis, threads: usize) -> Result<DetectionMap> {
    let total = a0_axis.points * b_axis.points;
    let cell = |idx: usize| {
        map_cell(
            qn,
            a0_axis.value(idx / b_axis.points),
            b_axis.value(idx % b_axis.points),
        )
    };
    let threads = threads.clamp(1, total);
    let chunk = total.div_ceil(threads);
    let blocks: Vec<Result<Vec<MapRow>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let cell = &cell;
                scope.spawn(move || (t * chunk..((t + 1) * chunk).min(total)).map(cell).collect())
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(Error::Internal("map worker panicked".into())))
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(total);
    for block in blocks {
        rows.extend(block?);
    }
    Ok(DetectionMap {
        qn,
        a0_axis,
        b_axis,
        rows,
    })
}
