//! Bound-state operators χ(ξ), χ′(η), the full fields φ̃(ξ), φ̃′(η), and the
//! numerical checks of their weak commutator, positivity bounds and factorizations.
//!
//! Vectors that get shifted into the complex plane enter as [`ClosedWave`]s; every
//! shifted value is computed from the closed form and only then sampled. Removable
//! singularities (an S pole cancelled by a zero of the vector) are evaluated by a
//! symmetric Richardson average in one rapidity.

mod demos;

pub use demos::{
    blaschke_pair_demo, ccr_demo, extension_symbol, extension_symbol_zeros, BlaschkePairReport, CcrReport,
    GaussianVector, PeriodicBlaschke, ThirdStripBlaschke,
};

use crate::analytic::AnalyticError;
use crate::fock::{
    annihilate, annihilate_reflected, create, create_reflected, permutations, phi_free, phi_reflected,
    reduced_word, word_closed, ClosedWave, FockError, FockVector, SLattice, WaveFunction, MAX_PARTICLES,
};
use crate::hardy::{
    build_symbol, delta_power, AnalyticFamilyMember, HardyElement, HardyError, Side, Symbol,
};
use crate::smatrix::{
    bound_state_prefactor, check_inequality_k, residue_r, RapidityGrid, ScatteringFunction, SmatrixError,
};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundStateError {
    #[error("outside the domain: {0}")]
    OutOfDomain(String),
    #[error("particle number {0} exceeds the cap of {MAX_PARTICLES}")]
    ParticleCap(usize),
    #[error("power iteration stalled after {iterations} steps (last relative change {change:e})")]
    PowerIterationStall { iterations: usize, change: f64 },
    #[error("extension symbol vanishes on the contour near {0}")]
    BoundaryZero(C64),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Hardy(HardyError),
    #[error(transparent)]
    Fock(FockError),
    #[error(transparent)]
    Smatrix(#[from] SmatrixError),
    #[error(transparent)]
    Analytic(AnalyticError),
}

impl From<HardyError> for BoundStateError {
    fn from(e: HardyError) -> Self {
        match e {
            HardyError::OutOfDomain(m) => BoundStateError::OutOfDomain(m),
            other => BoundStateError::Hardy(other),
        }
    }
}

impl From<FockError> for BoundStateError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::ParticleCap(n) => BoundStateError::ParticleCap(n),
            other => BoundStateError::Fock(other),
        }
    }
}

impl From<AnalyticError> for BoundStateError {
    fn from(e: AnalyticError) -> Self {
        match e {
            AnalyticError::OnBoundary(z) | AnalyticError::BoundaryZero(z) => BoundStateError::BoundaryZero(z),
            other => BoundStateError::Analytic(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, BoundStateError>;

fn i() -> C64 {
    C64::new(0.0, 1.0)
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

const THIRD: f64 = PI / 3.0;
/// Arguments closer than this to an S pole are treated as removable singularities.
const NEAR_POLE: f64 = 1e-6;
const RICHARDSON_STEP: f64 = 1e-3;
const SCAN_LINES: usize = 16;
const SLICE_POINTS: [f64; 3] = [-0.7, 0.0, 0.9];

/// ξ = ξ̲², η = η̲², their symbols ξ₀, η₀ and the prefactor √(2π|R|).
#[derive(Debug, Clone)]
pub struct BoundStatePair {
    pub xi_under: AnalyticFamilyMember,
    pub eta_under: AnalyticFamilyMember,
    pub xi0: Symbol,
    pub eta0: Symbol,
    pub s: ScatteringFunction,
    pub prefactor: f64,
    /// i|R|, the residue with the phase fixed by S(0) = −1.
    pub residue: C64,
    pub grid: RapidityGrid,
    pub xi_on: bool,
    pub eta_on: bool,
}

impl BoundStatePair {
    pub fn new(
        s: &ScatteringFunction,
        xi_under: AnalyticFamilyMember,
        eta_under: AnalyticFamilyMember,
        grid: &RapidityGrid,
    ) -> Result<Self> {
        if xi_under.side != Side::Left || eta_under.side != Side::Right {
            return Err(BoundStateError::Invariant("ξ̲ must live on the left strip and η̲ on the right".into()));
        }
        let prefactor = bound_state_prefactor(s)?;
        let residue = i() * residue_r(s)?.modulus;
        let xi0 = build_symbol(&xi_under, prefactor, grid)?;
        let eta0 = build_symbol(&eta_under, prefactor, grid)?;
        for (name, sym) in [("ξ₀", &xi0), ("η₀", &eta0)] {
            let r = sym.consistency_residual();
            if !(r < 1e-6) {
                return Err(BoundStateError::Invariant(format!("{name} factorization residual {r:e}")));
            }
        }
        Ok(BoundStatePair {
            xi_under,
            eta_under,
            xi0,
            eta0,
            s: s.clone(),
            prefactor,
            residue,
            grid: *grid,
            xi_on: true,
            eta_on: true,
        })
    }

    /// Same pair with ξ replaced by 0.
    pub fn without_xi(&self) -> Self {
        BoundStatePair { xi_on: false, ..self.clone() }
    }

    /// Same pair with η replaced by 0.
    pub fn without_eta(&self) -> Self {
        BoundStatePair { eta_on: false, ..self.clone() }
    }

    pub fn xi(&self, z: C64) -> C64 {
        if self.xi_on {
            self.xi_under.xi(z)
        } else {
            zero()
        }
    }

    pub fn eta(&self, z: C64) -> C64 {
        if self.eta_on {
            self.eta_under.xi(z)
        } else {
            zero()
        }
    }

    /// Boundary values of ξ on the nodes of `grid`.
    pub fn xi_values(&self, grid: &RapidityGrid) -> Vec<C64> {
        grid.nodes().into_iter().map(|x| self.xi(C64::new(x, 0.0))).collect()
    }

    pub fn eta_values(&self, grid: &RapidityGrid) -> Vec<C64> {
        grid.nodes().into_iter().map(|x| self.eta(C64::new(x, 0.0))).collect()
    }

    fn on(&self, primed: bool) -> bool {
        if primed {
            self.eta_on
        } else {
            self.xi_on
        }
    }

    /// Symbol, the line where it multiplies the vector, and the strip of the product.
    fn weighting(&self, primed: bool) -> (&Symbol, f64, (f64, f64)) {
        if primed {
            (&self.eta0, -2.0 * THIRD, (0.0, THIRD))
        } else {
            (&self.xi0, 2.0 * THIRD, (-THIRD, 0.0))
        }
    }
}

fn s_value(s: &ScatteringFunction, z: C64) -> C64 {
    s.eval(z).unwrap_or(C64::new(f64::NAN, f64::NAN))
}

fn real_point(th: &[f64]) -> Vec<C64> {
    th.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// f at `th`, or its symmetric Richardson limit in rapidity `var` when the raw
/// evaluation sits on a removable singularity.
fn regular<F: Fn(&[f64]) -> (C64, bool)>(f: &F, th: &[f64], var: usize) -> C64 {
    let (v, near) = f(th);
    if !near && v.is_finite() {
        return v;
    }
    let avg = |d: f64| {
        let mut a = th.to_vec();
        let mut b = th.to_vec();
        a[var] += d;
        b[var] -= d;
        (f(&a).0 + f(&b).0) * 0.5
    };
    (avg(0.5 * RICHARDSON_STEP) * 4.0 - avg(RICHARDSON_STEP)) / 3.0
}

/// Largest L² norm of w(· + i·line)ψ over interior lines of `band`, w the symbol;
/// non-finite values are out of domain.
fn weighted_scan<F: Fn(C64) -> C64 + ?Sized>(
    sym: &Symbol,
    line: f64,
    psi: &F,
    band: (f64, f64),
    grid: &RapidityGrid,
) -> Result<f64> {
    let nodes = grid.nodes();
    let mut worst = 0.0f64;
    for j in 0..SCAN_LINES {
        let y = band.0 + (band.1 - band.0) * (j as f64 + 0.5) / SCAN_LINES as f64;
        let w = sym.line(line + y);
        let norm2: f64 =
            nodes.iter().zip(&w).map(|(&x, wx)| (wx * psi(C64::new(x, y))).norm_sqr()).sum::<f64>() * grid.weight();
        if !norm2.is_finite() {
            return Err(BoundStateError::OutOfDomain(format!("non-finite L² norm on the line Im = {y:.4}")));
        }
        worst = worst.max(norm2.sqrt());
    }
    Ok(worst)
}

/// The symbol-weighted vector ξ₀(·+2πi/3)ψ (or η₀(·−2πi/3)ψ) as a checked Hardy element.
fn weighted_element<F: Fn(C64) -> C64 + ?Sized>(pair: &BoundStatePair, psi: &F, primed: bool) -> Result<HardyElement> {
    let (sym, y, strip) = pair.weighting(primed);
    weighted_scan(sym, y, psi, strip, &pair.grid)?;
    let samples: Vec<C64> =
        pair.grid.nodes().into_iter().zip(sym.line(y)).map(|(x, w)| w * psi(C64::new(x, 0.0))).collect();
    Ok(HardyElement::from_samples(samples, strip, pair.grid)?)
}

/// (χ₁(ξ)ψ)(θ) = √(2π|R|) ξ(θ + πi/3) ψ(θ − πi/3) on the nodes of `pair.grid`.
pub fn chi1_apply<F: Fn(C64) -> C64 + ?Sized>(pair: &BoundStatePair, psi: &F) -> Result<Vec<C64>> {
    chi1_side(pair, psi, false)
}

/// (χ′₁(η)ψ)(θ) = √(2π|R|) η(θ − πi/3) ψ(θ + πi/3).
pub fn chi1_prime_apply<F: Fn(C64) -> C64 + ?Sized>(pair: &BoundStatePair, psi: &F) -> Result<Vec<C64>> {
    chi1_side(pair, psi, true)
}

fn chi1_side<F: Fn(C64) -> C64 + ?Sized>(pair: &BoundStatePair, psi: &F, primed: bool) -> Result<Vec<C64>> {
    let nodes = pair.grid.nodes();
    if !pair.on(primed) {
        return Ok(vec![zero(); nodes.len()]);
    }
    weighted_element(pair, psi, primed)?;
    Ok(nodes.into_iter().map(|x| chi1_point(pair, psi, primed, x)).collect())
}

fn chi1_point<F: Fn(C64) -> C64 + ?Sized>(pair: &BoundStatePair, psi: &F, primed: bool, x: f64) -> C64 {
    let z = C64::new(x, 0.0);
    let t = i() * THIRD;
    if primed {
        pair.eta(z - t) * psi(z + t) * pair.prefactor
    } else {
        pair.xi(z + t) * psi(z - t) * pair.prefactor
    }
}

/// χ₁ or χ′₁ through its factorization M*Δ^{±1/6}M, evaluated at arbitrary rapidities.
pub fn chi1_factored_at<F: Fn(C64) -> C64 + ?Sized>(
    pair: &BoundStatePair,
    psi: &F,
    primed: bool,
    thetas: &[f64],
) -> Result<Vec<C64>> {
    if !pair.on(primed) {
        return Ok(vec![zero(); thetas.len()]);
    }
    let (sym, y, _) = pair.weighting(primed);
    let g = weighted_element(pair, psi, primed)?;
    let shifted = delta_power(&g, if primed { -THIRD } else { THIRD })?;
    thetas.iter().map(|&x| Ok(shifted.eval(C64::new(x, 0.0))? * sym.eval(C64::new(x, y)).conj())).collect()
}

/// Grid version of [`chi1_factored_at`].
pub fn chi1_factored<F: Fn(C64) -> C64 + ?Sized>(pair: &BoundStatePair, psi: &F, primed: bool) -> Result<Vec<C64>> {
    if !pair.on(primed) {
        return Ok(vec![zero(); pair.grid.n_points]);
    }
    let (sym, y, _) = pair.weighting(primed);
    let g = weighted_element(pair, psi, primed)?;
    let shifted = delta_power(&g, if primed { -THIRD } else { THIRD })?;
    Ok(shifted.values().into_iter().zip(sym.line(y)).map(|(v, w)| v * w.conj()).collect())
}

/// Membership guard of an n-particle closed form for χ_n (or χ′_n): the first (last)
/// rapidity is checked on one-dimensional slices with the others held fixed.
pub fn chin_domain_guard(pair: &BoundStatePair, wave: &ClosedWave, primed: bool) -> Result<()> {
    let n = wave.n;
    if n == 0 || !pair.on(primed) {
        return Ok(());
    }
    let var = if primed { n - 1 } else { 0 };
    let fixed: Vec<Vec<f64>> = match n {
        1 => vec![vec![]],
        2 => SLICE_POINTS.iter().map(|&a| vec![a]).collect(),
        _ => SLICE_POINTS.iter().flat_map(|&a| SLICE_POINTS.iter().map(move |&b| vec![a, b])).collect(),
    };
    for rest in fixed {
        let slice = |z: C64| {
            let mut pt: Vec<C64> = rest.iter().map(|&x| C64::new(x, 0.0)).collect();
            pt.insert(var, z);
            wave.eval(&pt)
        };
        weighted_element(pair, &slice, primed).map_err(|e| match e {
            BoundStateError::OutOfDomain(m) => BoundStateError::OutOfDomain(format!("slice {rest:?}: {m}")),
            other => other,
        })?;
    }
    Ok(())
}

fn chin_term_raw(pair: &BoundStatePair, wave: &ClosedWave, primed: bool, m: usize, th: &[f64]) -> (C64, bool) {
    let n = th.len();
    let third = i() * THIRD;
    let mut z = real_point(th);
    let mut near = false;
    let mut v;
    if primed {
        v = pair.eta(z[m] - third) * pair.prefactor;
        for j in m + 1..n {
            let a = z[j] - z[m] + third;
            near |= pair.s.pole_distance(a) < NEAR_POLE;
            v *= s_value(&pair.s, a);
        }
        z[m] += third;
    } else {
        v = pair.xi(z[m] + third) * pair.prefactor;
        for j in 0..m {
            let a = z[m] - z[j] + third;
            near |= pair.s.pole_distance(a) < NEAR_POLE;
            v *= s_value(&pair.s, a);
        }
        z[m] -= third;
    }
    for j in (0..n).filter(|&j| j != m) {
        near |= pair.s.pole_distance(z[j] - z[m]) < NEAR_POLE || pair.s.pole_distance(z[m] - z[j]) < NEAR_POLE;
    }
    if v == zero() {
        return (v, false);
    }
    (v * wave.eval(&z), near)
}

/// The m-th term (0-based, acting on rapidity m) of the sum formula for χ_n or χ′_n at `th`.
pub fn chin_term_at(pair: &BoundStatePair, wave: &ClosedWave, primed: bool, m: usize, th: &[f64]) -> C64 {
    if !pair.on(primed) {
        return zero();
    }
    regular(&|t: &[f64]| chin_term_raw(pair, wave, primed, m, t), th, m)
}

/// (χ_nΨ)(θ) or (χ′_nΨ)(θ) from the sum formula.
pub fn chin_at(pair: &BoundStatePair, wave: &ClosedWave, primed: bool, th: &[f64]) -> C64 {
    (0..th.len()).map(|m| chin_term_at(pair, wave, primed, m, th)).sum()
}

fn check_cap(n: usize) -> Result<()> {
    if n > MAX_PARTICLES {
        return Err(BoundStateError::ParticleCap(n));
    }
    Ok(())
}

/// Every term of the sum formula sampled on `grid`, one tensor per rapidity.
pub fn chin_terms(
    pair: &BoundStatePair,
    wave: &ClosedWave,
    primed: bool,
    grid: &RapidityGrid,
) -> Result<Vec<WaveFunction>> {
    check_cap(wave.n)?;
    (0..wave.n)
        .map(|m| {
            if !pair.on(primed) {
                return Ok(WaveFunction::zeros(wave.n, grid)?);
            }
            Ok(WaveFunction::from_fn(wave.n, grid, |t| chin_term_at(pair, wave, primed, m, t))?)
        })
        .collect()
}

/// χ_n(ξ)Ψ (or χ′_n(η)Ψ) on `grid`, after the domain guard.
pub fn chin_apply(pair: &BoundStatePair, wave: &ClosedWave, primed: bool, grid: &RapidityGrid) -> Result<WaveFunction> {
    check_cap(wave.n)?;
    if wave.n == 0 {
        return Ok(WaveFunction::vacuum(zero(), grid));
    }
    chin_domain_guard(pair, wave, primed)?;
    let terms = chin_terms(pair, wave, primed, grid)?;
    let mut out = WaveFunction::zeros(wave.n, grid)?;
    for t in &terms {
        out = out.axpy(C64::new(1.0, 0.0), t)?;
    }
    out.s_symmetric = true;
    Ok(out)
}

/// nP_n(χ₁⊗𝟙⊗…)P_n Ψ (or nP_n(…⊗𝟙⊗χ′₁)P_n Ψ) at `th`, averaging over the
/// permutation action instead of using the sum formula.
pub fn chin_projected_at(pair: &BoundStatePair, wave: &ClosedWave, primed: bool, th: &[f64]) -> Result<C64> {
    let n = wave.n;
    check_cap(n)?;
    if n == 0 || !pair.on(primed) {
        return Ok(zero());
    }
    let third = i() * THIRD;
    let inner = |z: &[C64]| {
        let mut w = z.to_vec();
        if primed {
            w[n - 1] += third;
            pair.eta(z[n - 1] - third) * pair.prefactor * wave.eval(&w)
        } else {
            w[0] -= third;
            pair.xi(z[0] + third) * pair.prefactor * wave.eval(&w)
        }
    };
    let perms = permutations(n);
    let words: Vec<Vec<usize>> = perms.iter().map(|p| reduced_word(p)).collect::<std::result::Result<_, _>>()?;
    let raw = |t: &[f64]| {
        let z = real_point(t);
        let v: C64 = words.iter().map(|w| word_closed(&pair.s, w, inner, &z)).sum();
        (v * (n as f64 / words.len() as f64), true)
    };
    let (v, _) = raw(th);
    if v.is_finite() && !near_diagonal(&pair.s, th) {
        return Ok(v);
    }
    Ok(regular(&raw, th, 0))
}

fn near_diagonal(s: &ScatteringFunction, th: &[f64]) -> bool {
    let third = i() * THIRD;
    for a in 0..th.len() {
        for b in 0..th.len() {
            if a != b {
                let d = C64::new(th[a] - th[b], 0.0);
                if s.pole_distance(d + third) < NEAR_POLE || s.pole_distance(d - third) < NEAR_POLE {
                    return true;
                }
            }
        }
    }
    false
}

fn phiphi_raw(pair: &BoundStatePair, wave: &ClosedWave, th: &[f64], second: bool) -> (C64, bool) {
    let n = th.len();
    let z = real_point(th);
    let two = 2.0 * PI;
    let r = pair.residue;
    let mut acc = zero();
    let mut near = false;
    for k in 0..n {
        let (shift, mut v) = if second {
            (i() * THIRD, pair.eta(z[k] - i() * 2.0 * THIRD) * pair.xi(z[k] + i() * THIRD))
        } else {
            (i() * 2.0 * THIRD, pair.eta(z[k] - i() * THIRD) * pair.xi(z[k] + i() * 2.0 * THIRD))
        };
        for j in (0..n).filter(|&j| j != k) {
            let a = z[k] - z[j] + shift;
            near |= pair.s.pole_distance(a) < NEAR_POLE;
            v *= s_value(&pair.s, a);
        }
        acc += v;
    }
    let pre = if second { i() * two * r } else { -i() * two * r };
    let v = if acc == zero() { acc } else { pre * acc * wave.eval(&z) };
    (v, near)
}

/// The two sums making up [φ(ξ), φ′(η)] as multiplication operators, sampled on `grid`:
/// (−2πiR Σ_k η(θ_k−πi/3)ξ(θ_k+2πi/3)∏S(θ_k−θ_j+2πi/3), +2πiR Σ_k η(θ_k−2πi/3)ξ(θ_k+πi/3)∏S(θ_k−θ_j+πi/3)) times Ψ.
pub fn phiphi_parts(
    pair: &BoundStatePair,
    wave: &ClosedWave,
    grid: &RapidityGrid,
) -> Result<(WaveFunction, WaveFunction)> {
    if wave.n > 2 {
        return Err(BoundStateError::ParticleCap(wave.n));
    }
    if wave.n == 0 {
        return Ok((WaveFunction::vacuum(zero(), grid), WaveFunction::vacuum(zero(), grid)));
    }
    let part = |second: bool| -> Result<WaveFunction> {
        let mut w = WaveFunction::from_fn(wave.n, grid, |t| regular(&|u: &[f64]| phiphi_raw(pair, wave, u, second), t, 0))?;
        w.s_symmetric = true;
        Ok(w)
    };
    Ok((part(false)?, part(true)?))
}

/// [φ(ξ), φ′(η)]Ψ in closed form.
pub fn phiphi_commutator_closed(pair: &BoundStatePair, wave: &ClosedWave, grid: &RapidityGrid) -> Result<WaveFunction> {
    let (a, b) = phiphi_parts(pair, wave, grid)?;
    let mut w = a.axpy(C64::new(1.0, 0.0), &b)?;
    w.s_symmetric = true;
    Ok(w)
}

/// ⟨φ(ξ)Φ, φ′(η)Ψ⟩ − ⟨φ′(η)Φ, φ(ξ)Ψ⟩ by quadrature with the sampled fields.
pub fn phiphi_direct(pair: &BoundStatePair, phi: &WaveFunction, psi: &WaveFunction) -> Result<C64> {
    let grid = phi.grid;
    let lat = SLattice::new(&pair.s, &grid);
    let xi = pair.xi_values(&grid);
    let eta = pair.eta_values(&grid);
    let a = phi_free(&lat, &xi, phi)?.inner(&phi_reflected(&lat, &eta, psi)?)?;
    let b = phi_reflected(&lat, &eta, phi)?.inner(&phi_free(&lat, &xi, psi)?)?;
    Ok(a - b)
}

/// Per-group values of the weak commutator on vectors with components at levels n−1 and n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorGroups {
    /// ⟨Φ, [χ, z′]Ψ⟩ and ⟨Φ, [z, χ′]Ψ⟩.
    pub chi_zprime: C64,
    pub z_chiprime: C64,
    /// ⟨Φ, [z†, χ′]Ψ⟩ and ⟨Φ, [χ, z′†]Ψ⟩.
    pub zdag_chiprime: C64,
    pub chi_zprimedag: C64,
    /// ⟨Φ, [φ, φ′]Ψ⟩ per level, by direct quadrature and from the closed form.
    pub phiphi_direct: Vec<C64>,
    pub phiphi_closed: Vec<C64>,
    /// The two sums of the closed form, per level.
    pub phiphi_first: Vec<C64>,
    pub phiphi_second: Vec<C64>,
    /// χ and χ′ acting on the same rapidity: Σ⟨T′_mΦ, T_mΨ⟩ and Σ⟨T_mΦ, T′_mΨ⟩, per level.
    pub chichi_diag_primed: Vec<C64>,
    pub chichi_diag_unprimed: Vec<C64>,
    /// χ and χ′ acting on different rapidities, per level.
    pub chichi_offdiag: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorResiduals {
    pub chi_zprime_vs_z_chiprime: f64,
    pub zdag_chiprime_vs_chi_zprimedag: f64,
    pub phiphi_direct_vs_closed: f64,
    pub diag_vs_phiphi: f64,
    pub offdiag: f64,
}

impl CommutatorResiduals {
    pub fn sum(&self) -> f64 {
        self.chi_zprime_vs_z_chiprime
            + self.zdag_chiprime_vs_chi_zprimedag
            + self.phiphi_direct_vs_closed
            + self.diag_vs_phiphi
            + self.offdiag
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub n: usize,
    pub groups: CommutatorGroups,
    pub residuals: CommutatorResiduals,
    /// ⟨φ̃(ξ)Φ, φ̃′(η)Ψ⟩ − ⟨φ̃′(η)Φ, φ̃(ξ)Ψ⟩.
    pub total: C64,
    pub total_residual: f64,
    /// Largest modulus among the single inner products entering the groups.
    pub scale: f64,
    pub relative_residual: f64,
    /// |total(grid) − total(half grid)|.
    pub quadrature_error: f64,
    pub caveat: String,
}

impl CommutatorReport {
    /// total residual ≤ Σ pairwise residuals + quadrature error, up to rounding.
    pub fn bound_holds(&self) -> bool {
        self.total_residual <= self.residuals.sum() + self.quadrature_error + 1e-12 * self.scale.max(1.0)
    }
}

struct LevelOps {
    lat: SLattice,
    xi: Vec<C64>,
    eta: Vec<C64>,
}

struct CommutatorCore {
    groups: CommutatorGroups,
    total: C64,
    scale: f64,
}

fn commutator_core(
    pair: &BoundStatePair,
    phi: &[ClosedWave],
    psi: &[ClosedWave],
    grid: &RapidityGrid,
) -> Result<CommutatorCore> {
    let ops = LevelOps { lat: SLattice::new(&pair.s, grid), xi: pair.xi_values(grid), eta: pair.eta_values(grid) };
    let mut scale = 0.0f64;
    let mut track = |v: C64| {
        scale = scale.max(v.norm());
        v
    };
    let phi_s: Vec<WaveFunction> = phi.iter().map(|w| w.sample(grid)).collect::<std::result::Result<_, _>>()?;
    let psi_s: Vec<WaveFunction> = psi.iter().map(|w| w.sample(grid)).collect::<std::result::Result<_, _>>()?;
    let terms = |w: &ClosedWave, primed: bool| chin_terms(pair, w, primed, grid);
    let sum_terms = |t: &[WaveFunction], n: usize| -> Result<WaveFunction> {
        let mut out = WaveFunction::zeros(n, grid)?;
        for x in t {
            out = out.axpy(C64::new(1.0, 0.0), x)?;
        }
        Ok(out)
    };
    let mut chi_phi = Vec::new();
    let mut chip_phi = Vec::new();
    let mut chi_psi = Vec::new();
    let mut chip_psi = Vec::new();
    let mut t_phi = Vec::new();
    let mut tp_phi = Vec::new();
    let mut t_psi = Vec::new();
    let mut tp_psi = Vec::new();
    for lvl in 0..2 {
        let (a, b) = (&phi[lvl], &psi[lvl]);
        t_phi.push(terms(a, false)?);
        tp_phi.push(terms(a, true)?);
        t_psi.push(terms(b, false)?);
        tp_psi.push(terms(b, true)?);
        chi_phi.push(sum_terms(&t_phi[lvl], a.n)?);
        chip_phi.push(sum_terms(&tp_phi[lvl], a.n)?);
        chi_psi.push(sum_terms(&t_psi[lvl], b.n)?);
        chip_psi.push(sum_terms(&tp_psi[lvl], b.n)?);
    }
    let (lo, hi) = (0, 1);
    let l = &ops.lat;
    // Φ at level n−1 against Ψ at level n.
    let a1 = track(chi_phi[lo].inner(&annihilate_reflected(l, &ops.eta, &psi_s[hi])?)?)
        - track(create_reflected(l, &ops.eta, &phi_s[lo])?.inner(&chi_psi[hi])?);
    let a2 = track(create(l, &ops.xi, &phi_s[lo])?.inner(&chip_psi[hi])?)
        - track(chip_phi[lo].inner(&annihilate(l, &ops.xi, &psi_s[hi])?)?);
    // Φ at level n against Ψ at level n−1.
    let b1 = track(annihilate(l, &ops.xi, &phi_s[hi])?.inner(&chip_psi[lo])?)
        - track(chip_phi[hi].inner(&create(l, &ops.xi, &psi_s[lo])?)?);
    let b2 = track(chi_phi[hi].inner(&create_reflected(l, &ops.eta, &psi_s[lo])?)?)
        - track(annihilate_reflected(l, &ops.eta, &phi_s[hi])?.inner(&chi_psi[lo])?);

    let mut groups = CommutatorGroups {
        chi_zprime: a1,
        z_chiprime: a2,
        zdag_chiprime: b1,
        chi_zprimedag: b2,
        phiphi_direct: vec![],
        phiphi_closed: vec![],
        phiphi_first: vec![],
        phiphi_second: vec![],
        chichi_diag_primed: vec![],
        chichi_diag_unprimed: vec![],
        chichi_offdiag: vec![],
    };
    for lvl in 0..2 {
        let n = phi[lvl].n;
        let direct_a = phi_free(l, &ops.xi, &phi_s[lvl])?.inner(&phi_reflected(l, &ops.eta, &psi_s[lvl])?)?;
        let direct_b = phi_reflected(l, &ops.eta, &phi_s[lvl])?.inner(&phi_free(l, &ops.xi, &psi_s[lvl])?)?;
        track(direct_a);
        track(direct_b);
        groups.phiphi_direct.push(direct_a - direct_b);
        let (first, second) = phiphi_parts(pair, &psi[lvl], grid)?;
        let first = track(phi_s[lvl].inner(&first)?);
        let second = track(phi_s[lvl].inner(&second)?);
        groups.phiphi_first.push(first);
        groups.phiphi_second.push(second);
        groups.phiphi_closed.push(first + second);
        let mut diag_p = zero();
        let mut diag_u = zero();
        let mut off = zero();
        for m in 0..n {
            for mp in 0..n {
                let x = track(t_phi[lvl][m].inner(&tp_psi[lvl][mp])?);
                let y = track(tp_phi[lvl][mp].inner(&t_psi[lvl][m])?);
                if m == mp {
                    diag_u += x;
                    diag_p += y;
                } else {
                    off += x - y;
                }
            }
        }
        groups.chichi_diag_primed.push(diag_p);
        groups.chichi_diag_unprimed.push(diag_u);
        groups.chichi_offdiag.push(off);
    }

    // Total from the full fields.
    let mut phi_vec = FockVector::new(grid);
    let mut psi_vec = FockVector::new(grid);
    for lvl in 0..2 {
        phi_vec.add_component(phi_s[lvl].clone())?;
        psi_vec.add_component(psi_s[lvl].clone())?;
    }
    let tilde = |v: &FockVector, chis: &[WaveFunction], primed: bool| -> Result<FockVector> {
        let mut out = FockVector::new(grid);
        for w in v.components.values() {
            let f = if primed { phi_reflected(l, &ops.eta, w)? } else { phi_free(l, &ops.xi, w)? };
            out = out.plus(&f)?;
        }
        for c in chis {
            out.add_component(c.clone())?;
        }
        Ok(out)
    };
    let phi_t = tilde(&phi_vec, &chi_phi, false)?;
    let phi_tp = tilde(&phi_vec, &chip_phi, true)?;
    let psi_t = tilde(&psi_vec, &chi_psi, false)?;
    let psi_tp = tilde(&psi_vec, &chip_psi, true)?;
    let total = phi_t.inner(&psi_tp)? - phi_tp.inner(&psi_t)?;
    Ok(CommutatorCore { groups, total, scale })
}

/// Term-by-term weak commutator of φ̃(ξ) and φ̃′(η) between Φ = (Φ_{n−1}, Φ_n) and
/// Ψ = (Ψ_{n−1}, Ψ_n), quadrature on `grid` (n = 1 or 2).
pub fn weak_commutator_report(
    pair: &BoundStatePair,
    phi: &[ClosedWave],
    psi: &[ClosedWave],
    n: usize,
    grid: &RapidityGrid,
) -> Result<CommutatorReport> {
    if !(1..=2).contains(&n) {
        return Err(BoundStateError::ParticleCap(n));
    }
    for v in [phi, psi] {
        if v.len() != 2 || v[0].n + 1 != n || v[1].n != n {
            return Err(BoundStateError::Invariant(format!("vectors must have components at levels {} and {n}", n - 1)));
        }
        for w in v {
            chin_domain_guard(pair, w, false)?;
            chin_domain_guard(pair, w, true)?;
        }
    }
    let core = commutator_core(pair, phi, psi, grid)?;
    let half = RapidityGrid { theta_max: grid.theta_max, n_points: grid.n_points / 2 };
    let quadrature_error = if half.n_points >= 64 {
        (commutator_core(pair, phi, psi, &half)?.total - core.total).norm()
    } else {
        f64::NAN
    };
    let g = &core.groups;
    let diag: f64 = (0..2)
        .map(|l| (g.phiphi_first[l] - g.chichi_diag_primed[l]).norm() + (g.phiphi_second[l] + g.chichi_diag_unprimed[l]).norm())
        .sum();
    let residuals = CommutatorResiduals {
        chi_zprime_vs_z_chiprime: (g.chi_zprime + g.z_chiprime).norm(),
        zdag_chiprime_vs_chi_zprimedag: (g.zdag_chiprime + g.chi_zprimedag).norm(),
        phiphi_direct_vs_closed: (0..2).map(|l| (g.phiphi_direct[l] - g.phiphi_closed[l]).norm()).sum(),
        diag_vs_phiphi: diag,
        offdiag: g.chichi_offdiag.iter().map(|v| v.norm()).sum(),
    };
    let total_residual = core.total.norm();
    let scale = core.scale;
    Ok(CommutatorReport {
        n,
        groups: core.groups,
        residuals,
        total: core.total,
        total_residual,
        scale,
        relative_residual: if scale > 0.0 { total_residual / scale } else { 0.0 },
        quadrature_error,
        caveat: "vectors truncated to two adjacent particle numbers; cross-level terms beyond them are not included"
            .into(),
    })
}

/// Power-iteration estimate of c(ξ, η) = ‖χ₁(ξ)^{1/2}χ′₁(η)^{1/2}‖ + 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub norm: f64,
    pub c: f64,
    /// 2c, the value used in the bounds.
    pub inflated: f64,
    pub iterations: usize,
    pub last_change: f64,
}

pub const POWER_ITERATIONS: usize = 20;

/// The truncated product X Y* is multiplication by
/// conj ξ₀(θ+2πi/3)·ξ₀(θ+πi/2)·conj η₀(θ−πi/2)·η₀(θ−2πi/3) on the grid.
pub fn estimate_c(pair: &BoundStatePair, seed: u64) -> Result<ConstantEstimate> {
    let a = pair.xi0.line(2.0 * THIRD);
    let b = pair.xi0.line(PI / 2.0);
    let c = pair.eta0.line(-PI / 2.0);
    let d = pair.eta0.line(-2.0 * THIRD);
    let diag: Vec<C64> = (0..a.len()).map(|k| a[k].conj() * b[k] * c[k].conj() * d[k]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<C64> = (0..diag.len()).map(|_| C64::new(rng.gen::<f64>() + 0.5, rng.gen::<f64>() - 0.5)).collect();
    let norm = |v: &[C64]| v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let mut est = 0.0;
    let mut change = f64::INFINITY;
    for it in 0..POWER_ITERATIONS {
        let w: Vec<C64> = v.iter().zip(&diag).map(|(x, m)| x * m.norm_sqr()).collect();
        let nv = norm(&v);
        let nw = norm(&w);
        if !nw.is_finite() || nw == 0.0 || nv == 0.0 {
            return Err(BoundStateError::PowerIterationStall { iterations: it, change });
        }
        let next = (nw / nv).sqrt();
        change = ((next - est) / next).abs();
        est = next;
        v = w.into_iter().map(|x| x / nw).collect();
    }
    Ok(ConstantEstimate {
        norm: est,
        c: est + 1.0,
        inflated: 2.0 * (est + 1.0),
        iterations: POWER_ITERATIONS,
        last_change: change,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    /// Re⟨χΨ, χ′Ψ⟩
    pub lhs: f64,
    /// −n c ⟨(χ + χ′ + 2)Ψ, Ψ⟩
    pub rhs: f64,
    pub margin: f64,
    pub c: f64,
    /// ‖χΨ‖, ‖χ′Ψ‖ and ‖(χ + χ′ + c(n+1))Ψ‖.
    pub chi_norm: f64,
    pub chi_prime_norm: f64,
    pub sum_norm: f64,
}

/// Both sides of Re⟨χΨ, χ′Ψ⟩ ≥ −nc⟨(χ + χ′ + 2)Ψ, Ψ⟩ on `grid`.
pub fn positivity_check(
    pair: &BoundStatePair,
    wave: &ClosedWave,
    constant: &ConstantEstimate,
    grid: &RapidityGrid,
) -> Result<PositivityReport> {
    let n = wave.n;
    if n > 2 {
        return Err(BoundStateError::ParticleCap(n));
    }
    let psi = wave.sample(grid)?;
    let chi = chin_apply(pair, wave, false, grid)?;
    let chip = chin_apply(pair, wave, true, grid)?;
    let lhs = chi.inner(&chip)?.re;
    let c = constant.inflated;
    let norm2 = psi.inner(&psi)?.re;
    let rhs = -(n as f64) * c * (psi.inner(&chi)?.re + psi.inner(&chip)?.re + 2.0 * norm2);
    let sum = chi.axpy(C64::new(1.0, 0.0), &chip)?.axpy(C64::new(c * (n as f64 + 1.0), 0.0), &psi)?;
    Ok(PositivityReport {
        lhs,
        rhs,
        margin: lhs - rhs,
        c,
        chi_norm: chi.norm(),
        chi_prime_norm: chip.norm(),
        sum_norm: sum.norm(),
    })
}

/// One-particle calibration with every S factor replaced by 1: the cross term
/// |⟨χ₁ψ, χ′₁ψ⟩| against c(⟨χ₁ψ,ψ⟩ + ⟨χ′₁ψ,ψ⟩ + 2‖ψ‖²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossCalibration {
    pub cross: f64,
    pub bound: f64,
}

pub fn cross_term_calibration<F: Fn(C64) -> C64 + ?Sized>(
    pair: &BoundStatePair,
    psi: &F,
    constant: &ConstantEstimate,
) -> Result<CrossCalibration> {
    let h = pair.grid.weight();
    let vals: Vec<C64> = pair.grid.nodes().into_iter().map(|x| psi(C64::new(x, 0.0))).collect();
    let chi = chi1_apply(pair, psi)?;
    let chip = chi1_prime_apply(pair, psi)?;
    let ip = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>() * h;
    let cross = ip(&chi, &chip).norm();
    let bound = constant.c * (ip(&chi, &vals).re + ip(&chip, &vals).re + 2.0 * ip(&vals, &vals).re);
    Ok(CrossCalibration { cross, bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizationResidual {
    /// ⟨χ₁Φ, Ψ⟩ from the closed form.
    pub direct: C64,
    /// ⟨XΦ, XΨ⟩ through the Hardy-space multipliers.
    pub factored: C64,
    pub residual: f64,
}

fn square_root_factor<F: Fn(C64) -> C64 + ?Sized>(pair: &BoundStatePair, psi: &F, primed: bool) -> Result<HardyElement> {
    let g = weighted_element(pair, psi, primed)?;
    Ok(delta_power(&g, if primed { -PI / 6.0 } else { PI / 6.0 })?)
}

fn factor_residual<F: Fn(C64) -> C64 + ?Sized, G: Fn(C64) -> C64 + ?Sized>(
    pair: &BoundStatePair,
    phi: &F,
    psi: &G,
    primed: bool,
) -> Result<FactorizationResidual> {
    if !pair.on(primed) {
        return Ok(FactorizationResidual { direct: zero(), factored: zero(), residual: 0.0 });
    }
    let chi = chi1_side(pair, phi, primed)?;
    let h = pair.grid.weight();
    let direct: C64 = chi.iter().zip(pair.grid.nodes()).map(|(a, x)| a.conj() * psi(C64::new(x, 0.0))).sum::<C64>() * h;
    let factored = square_root_factor(pair, phi, primed)?.inner(&square_root_factor(pair, psi, primed)?);
    Ok(FactorizationResidual { direct, factored, residual: (direct - factored).norm() })
}

/// |⟨χ₁(ξ)Φ, Ψ⟩ − ⟨XΦ, XΨ⟩| with X = Δ^{1/12}M_{ξ₀(·+2πi/3)}.
pub fn xstarx_residual<F: Fn(C64) -> C64 + ?Sized, G: Fn(C64) -> C64 + ?Sized>(
    pair: &BoundStatePair,
    phi: &F,
    psi: &G,
) -> Result<FactorizationResidual> {
    factor_residual(pair, phi, psi, false)
}

/// |⟨χ′₁(η)Φ, Ψ⟩ − ⟨YΦ, YΨ⟩| with Y = Δ^{−1/12}M_{η₀(·−2πi/3)}.
pub fn ystary_residual<F: Fn(C64) -> C64 + ?Sized, G: Fn(C64) -> C64 + ?Sized>(
    pair: &BoundStatePair,
    phi: &F,
    psi: &G,
) -> Result<FactorizationResidual> {
    factor_residual(pair, phi, psi, true)
}

/// 2D quadrature on the grid with the second rapidity offset by half a step, so
/// that the diagonal is never hit.
fn offset_quadrature<F: Fn(f64, f64) -> f64 + Sync>(grid: &RapidityGrid, f: F) -> f64 {
    use rayon::prelude::*;
    let nodes = grid.nodes();
    let h = grid.step();
    let rows: Vec<f64> = nodes.par_iter().map(|&a| nodes.iter().map(|&b| f(a, b + 0.5 * h)).sum::<f64>()).collect();
    rows.iter().sum::<f64>() * h * h
}

/// Re⟨(Δ^{1/12}⊗Δ^{1/12})Ψ, M_{S(·+πi/3)}M*_S(Δ^{1/12}⊗Δ^{1/12})Ψ⟩ for a two-particle closed form.
pub fn crossterm_positivity(s: &ScatteringFunction, wave: &ClosedWave, grid: &RapidityGrid) -> Result<f64> {
    if wave.n != 2 {
        return Err(BoundStateError::Invariant(format!("expected a two-particle vector, got n = {}", wave.n)));
    }
    let d = i() * (PI / 6.0);
    let v = offset_quadrature(grid, |a, b| {
        let p = wave.eval(&[C64::new(a, 0.0) - d, C64::new(b, 0.0) - d]);
        let x = C64::new(b - a, 0.0);
        (p.norm_sqr() * s_value(s, x + i() * THIRD) * s_value(s, x).conj()).re
    });
    if !v.is_finite() {
        return Err(BoundStateError::OutOfDomain("non-finite shifted two-particle integrand".into()));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KonradyCrossTerm {
    pub inequality_holds: bool,
    pub inequality_min: f64,
    /// Only computed when the inequality holds.
    pub value: Option<f64>,
}

/// Re⟨(𝟙⊗Δ^{1/12})Ψ, M_S M_{conj S(·+πi/6)}(𝟙⊗Δ^{1/12})Ψ⟩, evaluated when
/// Re S(θ+πi/6)S(−θ) ≥ 0 holds on the grid.
pub fn konrady_cross_term(s: &ScatteringFunction, wave: &ClosedWave, grid: &RapidityGrid) -> Result<KonradyCrossTerm> {
    if wave.n != 2 {
        return Err(BoundStateError::Invariant(format!("expected a two-particle vector, got n = {}", wave.n)));
    }
    let check = check_inequality_k(s, grid, 1e-8)?;
    if !check.pass {
        return Ok(KonradyCrossTerm { inequality_holds: false, inequality_min: check.min_value, value: None });
    }
    let d = i() * (PI / 6.0);
    let v = offset_quadrature(grid, |a, b| {
        let p = wave.eval(&[C64::new(a, 0.0), C64::new(b, 0.0) - d]);
        let x = C64::new(b - a, 0.0);
        (p.norm_sqr() * s_value(s, x) * s_value(s, x + d).conj()).re
    });
    Ok(KonradyCrossTerm { inequality_holds: true, inequality_min: check.min_value, value: Some(v) })
}

/// Random S-symmetric two-particle closed form P₂(g₁⊗g₂)·w(θ₁−θ₂) with Gaussian factors.
pub fn random_two_particle(s: &ScatteringFunction, rng: &mut impl Rng) -> Result<ClosedWave> {
    let mut factor = || -> crate::hardy::ClosedForm {
        let c = rng.gen_range(-1.5..1.5);
        let w = rng.gen_range(0.7..1.1);
        let p = rng.gen_range(-0.5..0.5);
        let amp = C64::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5));
        std::sync::Arc::new(move |z: C64| amp * (-(z - c) * (z - c) / (2.0 * w * w) + i() * p * z).exp())
    };
    let fs = vec![factor(), factor()];
    Ok(ClosedWave::symmetrized_product(s, fs, true)?)
}
