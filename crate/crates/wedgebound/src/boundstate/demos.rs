//! Counterexample gallery: a self-adjoint-extension symbol, Weyl-type weak commutation
//! without strong commutation, and a pair of Blaschke-twisted shifts.

use super::{i, BoundStateError, Result};
use crate::analytic::{integrate_real, winding_number, ComplexRect, QuadratureSettings};
use crate::hardy::{ClosedForm, HardyElement};
use crate::smatrix::RapidityGrid;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

fn blaschke_ratio(u: C64, a: C64) -> C64 {
    if u.norm() > 1.0 {
        (C64::new(1.0, 0.0) - a / u) / (C64::new(1.0, 0.0) - a.conj() / u)
    } else {
        (u - a) / (u - a.conj())
    }
}

/// f(ζ) = ∏ (u − u_k)/(u − conj u_k), u = e^{3(ζ + πi/3)}, zeros ζ_k in ℝ + i(−π/3, 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThirdStripBlaschke {
    pub zeros: Vec<C64>,
}

impl ThirdStripBlaschke {
    pub fn new(zeros: Vec<C64>) -> Result<Self> {
        for z in &zeros {
            if !(z.im > -PI / 3.0 && z.im < 0.0) {
                return Err(BoundStateError::OutOfDomain(format!("zero {z} outside ℝ + i(−π/3, 0)")));
            }
        }
        Ok(ThirdStripBlaschke { zeros })
    }

    pub fn eval(&self, z: C64) -> C64 {
        let u = (3.0 * (z + i() * (PI / 3.0))).exp();
        self.zeros.iter().map(|zk| blaschke_ratio(u, (3.0 * (zk + i() * (PI / 3.0))).exp())).product()
    }
}

/// g(ζ) = a + conj f(conj ζ − πi/3) · f(ζ).
pub fn extension_symbol(a: f64, f: &ThirdStripBlaschke, z: C64) -> C64 {
    C64::new(a, 0.0) + f.eval(z.conj() - i() * (PI / 3.0)).conj() * f.eval(z)
}

const EXT_HALF_WIDTH: f64 = 6.0;
const EXT_INSET: f64 = 1e-3;

/// Number of zeros of g in ℝ + i(−π/3, 0), by winding on a truncated rectangle.
/// g tends to a + const with |const| = 1 as Re ζ → ±∞, so the vertical sides add
/// no winding once they are far from the zeros.
pub fn extension_symbol_zeros(a: f64, f: &ThirdStripBlaschke) -> Result<i64> {
    let rect = ComplexRect::new(-EXT_HALF_WIDTH, EXT_HALF_WIDTH, -PI / 3.0 + EXT_INSET, -EXT_INSET)?;
    let contour = rect.boundary(4096);
    Ok(winding_number(|z| extension_symbol(a, f, z), &contour)?)
}

/// exp(−(z−center)²/2width² + i·momentum·z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianVector {
    pub center: f64,
    pub width: f64,
    pub momentum: f64,
}

impl GaussianVector {
    pub fn eval(&self, z: C64) -> C64 {
        let d = z - self.center;
        (-(d * d) / (2.0 * self.width * self.width) + i() * self.momentum * z).exp()
    }

    pub fn closed_form(&self) -> ClosedForm {
        let g = *self;
        Arc::new(move |z| g.eval(z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CcrReport {
    pub s1: f64,
    pub s2: f64,
    /// sup over pairs of |⟨e^{s₁X}φ, e^{s₂P}ψ⟩ − ⟨e^{s₂P}φ, e^{s₁X}ψ⟩|.
    pub weak_residual: f64,
    /// |e^{−is₁s₂} − 1|
    pub phase_mismatch: f64,
    pub max_matrix_element: f64,
    pub pairs: usize,
}

/// Weak commutation of e^{s₁X} and e^{s₂P} on Gaussian vectors, with
/// (e^{s₁X}ξ)(t) = e^{s₁t}ξ(t) and (e^{s₂P}ξ)(t) = ξ(t − is₂).
pub fn ccr_demo(s1: f64, s2: f64, vectors: &[GaussianVector]) -> Result<CcrReport> {
    let reach = vectors.iter().map(|g| g.center.abs() + 12.0 * g.width + s1.abs() * g.width * g.width).fold(0.0, f64::max);
    let settings = QuadratureSettings { abs_tol: 1e-15, rel_tol: 1e-13, max_refinements: 30 };
    let shift = i() * s2;
    let mut weak_residual = 0.0f64;
    let mut max_matrix_element = 0.0f64;
    let mut pairs = 0;
    for phi in vectors {
        for psi in vectors {
            let first = integrate_real(
                |t| (s1 * t).exp() * phi.eval(C64::new(t, 0.0)).conj() * psi.eval(C64::new(t, 0.0) - shift),
                -reach,
                reach,
                &settings,
            )?;
            let second = integrate_real(
                |t| phi.eval(C64::new(t, 0.0) - shift).conj() * (s1 * t).exp() * psi.eval(C64::new(t, 0.0)),
                -reach,
                reach,
                &settings,
            )?;
            weak_residual = weak_residual.max((first.value - second.value).norm());
            max_matrix_element = max_matrix_element.max(first.value.norm()).max(second.value.norm());
            pairs += 1;
        }
    }
    let phase = (s1 * s2).rem_euclid(TAU);
    Ok(CcrReport { s1, s2, weak_residual, phase_mismatch: 2.0 * (0.5 * phase).sin().abs(), max_matrix_element, pairs })
}

/// f(ζ) = ∏ (e^ζ − e^{z_k})/(e^ζ − e^{conj z_k}), zeros in ℝ + i(−π, 0); unimodular on ℝ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicBlaschke {
    pub zeros: Vec<C64>,
}

impl PeriodicBlaschke {
    pub fn new(zeros: Vec<C64>) -> Result<Self> {
        for z in &zeros {
            if !(z.im > -PI && z.im < 0.0) {
                return Err(BoundStateError::OutOfDomain(format!("zero {z} outside ℝ + i(−π, 0)")));
            }
        }
        Ok(PeriodicBlaschke { zeros })
    }

    pub fn eval(&self, z: C64) -> C64 {
        let u = z.exp();
        self.zeros.iter().map(|zk| blaschke_ratio(u, zk.exp())).product()
    }

    /// Poles conj z_k − 2πim with imaginary part in (lo, 0).
    pub fn poles_above(&self, lo: f64) -> Vec<C64> {
        let mut out = Vec::new();
        for z in &self.zeros {
            let mut p = z.conj() - i() * TAU;
            while p.im > lo {
                out.push(p);
                p -= i() * TAU;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkePairReport {
    /// sup |A₁A₂ξ − A₂A₁ξ| on the grid for the engineered ξ.
    pub residual: f64,
    pub relative_residual: f64,
    /// Membership guards passed for the orders (A₁A₂, A₂A₁).
    pub engineered_guard: [bool; 2],
    /// Same for each generic vector; each should fail in at least one order.
    pub generic_guard: Vec<[bool; 2]>,
    /// Zeros inserted into ξ to cancel the poles of f₁, f₂ in ℝ + i(−4π, 0).
    pub engineered_zeros: Vec<C64>,
}

/// A_f g(θ) = conj f(conj θ)·f(θ − 2πi)·g(θ − 2πi), kept as a closed form.
fn apply_shift(f: &PeriodicBlaschke, g: ClosedForm) -> ClosedForm {
    let f = f.clone();
    Arc::new(move |z: C64| {
        let w = z - i() * TAU;
        f.eval(z.conj()).conj() * f.eval(w) * g(w)
    })
}

fn demo_grid() -> RapidityGrid {
    RapidityGrid { theta_max: 32.0, n_points: 4096 }
}

fn sample(g: &ClosedForm, grid: &RapidityGrid) -> Vec<C64> {
    grid.nodes().into_iter().map(|x| g(C64::new(x, 0.0))).collect()
}

/// Guards for f_a ξ and f_b·A_a ξ in H²(ℝ + i(−2π, 0)).
fn guard_order(first: &PeriodicBlaschke, second: &PeriodicBlaschke, xi: &ClosedForm, grid: &RapidityGrid) -> bool {
    let strip = (-TAU, 0.0);
    let fx = {
        let (f, x) = (first.clone(), xi.clone());
        Arc::new(move |z: C64| f.eval(z) * x(z)) as ClosedForm
    };
    if HardyElement::from_samples(sample(&fx, grid), strip, *grid).is_err() {
        return false;
    }
    let a = apply_shift(first, xi.clone());
    let fa = {
        let f = second.clone();
        Arc::new(move |z: C64| f.eval(z) * a(z)) as ClosedForm
    };
    HardyElement::from_samples(sample(&fa, grid), strip, *grid).is_ok()
}

/// Two commuting-looking twisted shifts A₁, A₂: on an engineered ξ whose zeros cancel
/// the Blaschke poles both orders are defined and agree; generic Gaussians leave the domain.
pub fn blaschke_pair_demo(
    f1: &PeriodicBlaschke,
    f2: &PeriodicBlaschke,
    generic: &[GaussianVector],
) -> Result<BlaschkePairReport> {
    let grid = demo_grid();
    let mut zeros: Vec<C64> = Vec::new();
    for p in f1.poles_above(-2.0 * TAU).into_iter().chain(f2.poles_above(-2.0 * TAU)) {
        if zeros.iter().all(|q| (q - p).norm() > 1e-12) {
            zeros.push(p);
        }
    }
    let envelope = GaussianVector { center: 0.0, width: 3.5, momentum: 0.0 };
    let zs = zeros.clone();
    let xi: ClosedForm = Arc::new(move |z: C64| envelope.eval(z) * zs.iter().map(|p| z - p).product::<C64>());
    let guard = |g: &ClosedForm| [guard_order(f1, f2, g, &grid), guard_order(f2, f1, g, &grid)];
    let engineered_guard = guard(&xi);
    let a12 = apply_shift(f1, apply_shift(f2, xi.clone()));
    let a21 = apply_shift(f2, apply_shift(f1, xi.clone()));
    let mut residual = 0.0f64;
    let mut peak = 0.0f64;
    for x in grid.nodes() {
        let z = C64::new(x, 0.0);
        let (u, v) = (a12(z), a21(z));
        residual = residual.max((u - v).norm());
        peak = peak.max(u.norm());
    }
    let generic_guard = generic.iter().map(|g| guard(&g.closed_form())).collect();
    Ok(BlaschkePairReport {
        residual,
        relative_residual: if peak > 0.0 { residual / peak } else { 0.0 },
        engineered_guard,
        generic_guard,
        engineered_zeros: zeros,
    })
}
