//! Strip Hardy spaces on a rapidity grid: membership, the continuation operator
//! Δ^{t/2π} as a Fourier multiplier, Blaschke factors on general strips, strip
//! factorization and the unimodular symbols behind the bound-state operators.

mod family;
mod solver;

pub use family::{build_symbol, p_dot, AnalyticFamilyMember, FamilyKind, Side, Symbol};
pub use solver::{
    factorize, solve_strip_dirichlet, FactorizationResult, OuterSolution, SolverOptions, StripFunction,
};

use crate::analytic::{self, AnalyticError, QuadratureSettings};
use crate::smatrix::{RapidityGrid, SmatrixError};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardyError {
    #[error("outside the Hardy-space domain: {0}")]
    OutOfDomain(String),
    #[error("Blaschke factor with zero {0} evaluated at its reflected pole")]
    AtZeroConjugatePole(C64),
    #[error("outer splitting ill-conditioned at k = {k} (condition {condition:e})")]
    SplitIllConditioned { k: f64, condition: f64 },
    #[error("more than the allowed number of zeros ({0} found)")]
    TooManyZeros(i64),
    #[error("zero on or next to the strip boundary near {0}")]
    BoundaryZero(C64),
    #[error("strip ({0}, {1}) must satisfy a < b and contain the real line")]
    BadStrip(f64, f64),
    #[error("zero {0} is not inside the strip")]
    BadZero(C64),
    #[error("invalid family member: {0}")]
    BadMember(String),
    #[error("sample count {got} does not match the grid ({expected})")]
    GridMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Analytic(AnalyticError),
    #[error(transparent)]
    Smatrix(#[from] SmatrixError),
}

impl From<AnalyticError> for HardyError {
    fn from(e: AnalyticError) -> Self {
        match e {
            AnalyticError::TooManyZeros { found, .. } => HardyError::TooManyZeros(found),
            AnalyticError::BoundaryZero(z) | AnalyticError::OnBoundary(z) => HardyError::BoundaryZero(z),
            other => HardyError::Analytic(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, HardyError>;

/// Exact evaluator attached to sampled data, used wherever a shifted argument
/// has to be evaluated without numerical continuation.
pub type ClosedForm = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// Amplified coefficient norm, relative to the original one, beyond which a
/// multiplier is treated as leaving the Hardy space.
pub const MEMBERSHIP_GUARD: f64 = 1e12;
/// Amplified coefficients at the noise cut-off, relative to their peak, above
/// which the spectrum is still growing where the data stop resolving it.
const EDGE_GUARD: f64 = 1e-4;
const NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;
const QUIET_RUN: usize = 16;

fn i() -> C64 {
    C64::new(0.0, 1.0)
}

pub(crate) fn fft(data: &mut [C64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse { planner.plan_fft_inverse(data.len()) } else { planner.plan_fft_forward(data.len()) };
    plan.process(data);
}

/// Angular wavenumbers of an n-point DFT with spacing h; the Nyquist index is negative.
pub(crate) fn wavenumbers(n: usize, h: f64) -> Vec<f64> {
    (0..n)
        .map(|m| {
            let s = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
            2.0 * PI * s / (n as f64 * h)
        })
        .collect()
}

fn l2(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Multiplies `coeffs` by e^{k t}. Coefficients at rounding level that the
/// multiplier would amplify are dropped; the result is rejected when its norm
/// exceeds the guard or when the amplified spectrum has not decayed by the time
/// the data reach the rounding floor.
pub fn amplify(coeffs: &[C64], ks: &[f64], t: f64) -> std::result::Result<Vec<C64>, String> {
    let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if peak == 0.0 || t == 0.0 {
        return Ok(coeffs.to_vec());
    }
    let floor = NOISE_FLOOR * peak;
    let cut = spectral_cut(coeffs, ks, t, floor);
    let out: Vec<C64> = coeffs
        .iter()
        .zip(ks)
        .map(|(c, k)| {
            let g = k * t;
            if g > 0.0 && (c.norm() < floor || g >= cut) {
                C64::new(0.0, 0.0)
            } else {
                c * g.exp()
            }
        })
        .collect();
    let amp = l2(&out);
    let base = l2(coeffs);
    if !amp.is_finite() || amp > MEMBERSHIP_GUARD * base {
        return Err(format!("multiplier e^(k·{t:.6}) amplifies the coefficient norm by {:e}", amp / base));
    }
    let mut grown: Vec<(f64, f64)> = out
        .iter()
        .zip(ks)
        .filter(|(c, k)| *k * t > 0.0 && c.norm() > 0.0)
        .map(|(c, k)| (k * t, c.norm()))
        .collect();
    if !grown.is_empty() {
        grown.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let edge = grown[grown.len().saturating_sub(4)..].iter().map(|p| p.1).fold(0.0, f64::max);
        let top = out.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if edge > EDGE_GUARD * top {
            return Err(format!(
                "multiplier e^(k·{t:.6}) leaves a non-decaying tail (edge/peak {:e})",
                edge / top
            ));
        }
    }
    Ok(out)
}

/// Smallest k·t > 0 from which the next [`QUIET_RUN`] coefficients, moving away
/// from k = 0, all sit below the rounding floor; everything past it is noise.
fn spectral_cut(coeffs: &[C64], ks: &[f64], t: f64, floor: f64) -> f64 {
    let mut side: Vec<(f64, f64)> =
        coeffs.iter().zip(ks).filter(|(_, k)| *k * t > 0.0).map(|(c, k)| (k * t, c.norm())).collect();
    side.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut run = 0;
    for (j, (_, v)) in side.iter().enumerate() {
        if *v < floor {
            run += 1;
            if run == QUIET_RUN {
                return side[j + 1 - QUIET_RUN].0;
            }
        } else {
            run = 0;
        }
    }
    f64::INFINITY
}

/// Element of H²(𝕊_{a,b}) held through the DFT of its real-line samples.
#[derive(Clone)]
pub struct HardyElement {
    pub coeffs: Vec<C64>,
    pub strip: (f64, f64),
    pub grid: RapidityGrid,
    closed_form: Option<ClosedForm>,
}

impl fmt::Debug for HardyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HardyElement")
            .field("strip", &self.strip)
            .field("grid", &self.grid)
            .field("norm", &self.norm())
            .field("closed_form", &self.closed_form.is_some())
            .finish()
    }
}

fn check_strip(strip: (f64, f64)) -> Result<()> {
    let (a, b) = strip;
    if !(a <= 0.0 && b >= 0.0 && a < b) {
        return Err(HardyError::BadStrip(a, b));
    }
    Ok(())
}

impl HardyElement {
    /// Element from real-line samples at the grid nodes; fails the membership guard
    /// if the data do not continue to both edges of `strip`.
    pub fn from_samples(samples: Vec<C64>, strip: (f64, f64), grid: RapidityGrid) -> Result<Self> {
        check_strip(strip)?;
        if samples.len() != grid.n_points {
            return Err(HardyError::GridMismatch { expected: grid.n_points, got: samples.len() });
        }
        let mut coeffs = samples;
        fft(&mut coeffs, false);
        let el = HardyElement { coeffs, strip, grid, closed_form: None };
        el.check_membership()?;
        Ok(el)
    }

    /// Samples `f` on the grid and keeps `f` as the exact evaluator.
    pub fn from_fn<F>(f: F, strip: (f64, f64), grid: RapidityGrid) -> Result<Self>
    where
        F: Fn(C64) -> C64 + Send + Sync + 'static,
    {
        let samples = grid.nodes().into_iter().map(|x| f(C64::new(x, 0.0))).collect();
        let el = Self::from_samples(samples, strip, grid)?;
        Ok(el.with_closed_form(Arc::new(f)))
    }

    pub fn with_closed_form(mut self, f: ClosedForm) -> Self {
        self.closed_form = Some(f);
        self
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        wavenumbers(self.grid.n_points, self.grid.step())
    }

    pub fn check_membership(&self) -> Result<()> {
        let ks = self.wavenumbers();
        for lambda in [self.strip.0, self.strip.1] {
            if lambda != 0.0 {
                amplify(&self.coeffs, &ks, -lambda).map_err(HardyError::OutOfDomain)?;
            }
        }
        Ok(())
    }

    /// Real-line samples.
    pub fn values(&self) -> Vec<C64> {
        let n = self.coeffs.len() as f64;
        let mut v = self.coeffs.clone();
        fft(&mut v, true);
        v.iter().map(|c| c / n).collect()
    }

    /// Samples of ψ(θ + iλ) at the grid nodes.
    pub fn line(&self, lambda: f64) -> Result<Vec<C64>> {
        self.in_reach(lambda)?;
        let n = self.coeffs.len() as f64;
        let mut v = amplify(&self.coeffs, &self.wavenumbers(), -lambda).map_err(HardyError::OutOfDomain)?;
        fft(&mut v, true);
        Ok(v.iter().map(|c| c / n).collect())
    }

    /// ψ(z) by direct summation of the Fourier series.
    pub fn eval(&self, z: C64) -> Result<C64> {
        self.in_reach(z.im)?;
        let ks = self.wavenumbers();
        let c = amplify(&self.coeffs, &ks, -z.im).map_err(HardyError::OutOfDomain)?;
        let x = z.re - self.grid.node(0);
        let sum: C64 = c.iter().zip(&ks).map(|(a, k)| a * C64::from_polar(1.0, k * x)).sum();
        Ok(sum / self.coeffs.len() as f64)
    }

    fn in_reach(&self, lambda: f64) -> Result<()> {
        let slack = 1e-12;
        if lambda < self.strip.0 - slack || lambda > self.strip.1 + slack {
            return Err(HardyError::OutOfDomain(format!(
                "line Im = {lambda} outside the strip ({}, {})",
                self.strip.0, self.strip.1
            )));
        }
        Ok(())
    }

    /// L² norm on the real line.
    pub fn norm(&self) -> f64 {
        (self.grid.step() / self.coeffs.len() as f64).sqrt() * l2(&self.coeffs)
    }

    /// ⟨self, other⟩ on the real line, antilinear in the first slot.
    pub fn inner(&self, other: &HardyElement) -> C64 {
        let s: C64 = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum();
        s * (self.grid.step() / self.coeffs.len() as f64)
    }
}

/// Δ^{t/2π}ψ, the boundary value ψ(· − it), as the multiplier e^{kt}.
pub fn delta_power(psi: &HardyElement, t: f64) -> Result<HardyElement> {
    let (a, b) = psi.strip;
    if -t < a - 1e-12 || -t > b + 1e-12 {
        return Err(HardyError::OutOfDomain(format!("shift {t} exceeds the strip ({a}, {b})")));
    }
    let coeffs = amplify(&psi.coeffs, &psi.wavenumbers(), t).map_err(HardyError::OutOfDomain)?;
    let closed_form = psi.closed_form.clone().map(|f| -> ClosedForm { Arc::new(move |z| f(z - i() * t)) });
    Ok(HardyElement { coeffs, strip: ((a + t).min(0.0), (b + t).max(0.0)), grid: psi.grid, closed_form })
}

/// |⟨Φ, Δ^{t/2π}Ψ⟩ − ⟨Δ^{t/2π}Φ, Ψ⟩|. With closed forms on both sides the two
/// integrals are separate line quadratures of the shifted expressions; otherwise
/// they come from the multiplier. Both elements must pass the membership guard.
pub fn cauchy_shift_residual(phi: &HardyElement, psi: &HardyElement, t: f64) -> Result<f64> {
    let dpsi = delta_power(psi, t)?;
    let dphi = delta_power(phi, t)?;
    if t == 0.0 {
        return Ok((phi.inner(psi) - phi.inner(psi)).norm());
    }
    match (phi.closed_form(), psi.closed_form()) {
        (Some(f), Some(g)) => {
            let settings = QuadratureSettings { abs_tol: 1e-15, rel_tol: 1e-13, max_refinements: 40 };
            let l = phi.grid.theta_max;
            let shift = i() * t;
            let lhs = analytic::integrate_real(
                |x| f(C64::new(x, 0.0)).conj() * g(C64::new(x, 0.0) - shift),
                -l,
                l,
                &settings,
            )?;
            let rhs = analytic::integrate_real(
                |x| f(C64::new(x, 0.0) - shift).conj() * g(C64::new(x, 0.0)),
                -l,
                l,
                &settings,
            )?;
            Ok((lhs.value - rhs.value).norm())
        }
        _ => Ok((phi.inner(&dpsi) - dphi.inner(psi)).norm()),
    }
}

/// Conformal map of 𝕊_{a,b} onto the unit disk: w = (E − i)/(E + i), E = e^{π(ζ − ia)/(b − a)}.
pub fn strip_to_disk(strip: (f64, f64), z: C64) -> C64 {
    let (a, b) = strip;
    let e = (z - i() * a) * (PI / (b - a));
    if e.re > 0.0 {
        let q = i() * (-e).exp();
        (1.0 - q) / (1.0 + q)
    } else {
        let big = e.exp();
        (big - i()) / (big + i())
    }
}

/// Inverse of [`strip_to_disk`].
pub fn disk_to_strip(strip: (f64, f64), w: C64) -> C64 {
    let (a, b) = strip;
    let e = i() * (1.0 + w) / (1.0 - w);
    i() * a + e.ln() * ((b - a) / PI)
}

/// Finite Blaschke product of the strip at `z`: the disk factors
/// (w − w₀)/(1 − w̄₀w) transported through [`strip_to_disk`], times the phases
/// (all 1 when `phases` is empty).
pub fn blaschke_point(zeros: &[C64], phases: &[C64], strip: (f64, f64), z: C64) -> Result<C64> {
    let (a, b) = strip;
    if !(a < b) {
        return Err(HardyError::BadStrip(a, b));
    }
    if !phases.is_empty() && phases.len() != zeros.len() {
        return Err(HardyError::BadMember(format!("{} phases for {} zeros", phases.len(), zeros.len())));
    }
    let w = strip_to_disk(strip, z);
    let mut prod = C64::new(1.0, 0.0);
    for (j, z0) in zeros.iter().enumerate() {
        if !(z0.im > a && z0.im < b) {
            return Err(HardyError::BadZero(*z0));
        }
        let w0 = strip_to_disk(strip, *z0);
        let den = 1.0 - w0.conj() * w;
        if den.norm() < 1e-14 {
            return Err(HardyError::AtZeroConjugatePole(*z0));
        }
        prod *= (w - w0) / den;
        if let Some(p) = phases.get(j) {
            prod *= p;
        }
    }
    Ok(prod)
}
