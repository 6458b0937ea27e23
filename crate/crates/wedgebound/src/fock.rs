//! S-symmetric Fock space at fixed particle number on a rapidity grid.
//!
//! An n-particle vector is a rank-n tensor over the grid nodes, row-major with the
//! last rapidity fastest. The permutation action D_n, the projector P_n, creation,
//! annihilation and CPT act on these tensors. Vectors that must be continued into
//! the complex plane are kept as closed forms ([`ClosedWave`]) and sampled last.

use crate::hardy::{p_dot, ClosedForm};
use crate::smatrix::{RapidityGrid, ScatteringFunction};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

pub const MAX_PARTICLES: usize = 3;

/// Fixed chunk length so that parallel sums reduce in the same order every run.
const CHUNK: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("{0:?} is not a permutation of {1} points")]
    BadPermutation(Vec<usize>, usize),
    #[error("particle number {0} exceeds the cap of {MAX_PARTICLES}")]
    ParticleCap(usize),
    #[error("mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, FockError>;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// S(θ_j − θ_i) for all node pairs, stored on the difference lattice.
#[derive(Debug, Clone)]
pub struct SLattice {
    values: Vec<C64>,
    n: usize,
    pub grid: RapidityGrid,
}

impl SLattice {
    pub fn new(s: &ScatteringFunction, grid: &RapidityGrid) -> Self {
        let n = grid.n_points;
        let h = grid.step();
        let values = (0..2 * n - 1)
            .map(|d| {
                let x = (d as f64 - (n as f64 - 1.0)) * h;
                s.eval(C64::new(x, 0.0)).unwrap_or(C64::new(f64::NAN, f64::NAN))
            })
            .collect();
        SLattice { values, n, grid: *grid }
    }

    /// S(θ_j − θ_i).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[j + self.n - 1 - i]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFunction {
    pub n: usize,
    pub amplitudes: Vec<C64>,
    pub s_symmetric: bool,
    pub grid: RapidityGrid,
}

impl WaveFunction {
    pub fn zeros(n: usize, grid: &RapidityGrid) -> Result<Self> {
        if n > MAX_PARTICLES {
            return Err(FockError::ParticleCap(n));
        }
        Ok(WaveFunction { n, amplitudes: vec![zero(); grid.n_points.pow(n as u32)], s_symmetric: true, grid: *grid })
    }

    pub fn vacuum(c: C64, grid: &RapidityGrid) -> Self {
        WaveFunction { n: 0, amplitudes: vec![c], s_symmetric: true, grid: *grid }
    }

    pub fn one_particle(values: Vec<C64>, grid: &RapidityGrid) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(FockError::Mismatch(format!("{} values for {} nodes", values.len(), grid.n_points)));
        }
        Ok(WaveFunction { n: 1, amplitudes: values, s_symmetric: true, grid: *grid })
    }

    /// Samples f at every node tuple; parallel over the leading index.
    pub fn from_fn<F>(n: usize, grid: &RapidityGrid, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> C64 + Sync,
    {
        let mut w = Self::zeros(n, grid)?;
        w.s_symmetric = false;
        if n == 0 {
            w.amplitudes[0] = f(&[]);
            return Ok(w);
        }
        let nodes = grid.nodes();
        let inner = grid.n_points.pow(n as u32 - 1);
        w.amplitudes.par_chunks_mut(inner).enumerate().for_each(|(lead, chunk)| {
            let mut theta = vec![0.0; n];
            theta[0] = nodes[lead];
            for (r, slot) in chunk.iter_mut().enumerate() {
                let mut rest = r;
                for p in (1..n).rev() {
                    theta[p] = nodes[rest % grid.n_points];
                    rest /= grid.n_points;
                }
                *slot = f(&theta);
            }
        });
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.grid.n_points + i)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.n];
        for p in (0..self.n).rev() {
            idx[p] = flat % self.grid.n_points;
            flat /= self.grid.n_points;
        }
        idx
    }

    fn check_compatible(&self, other: &WaveFunction) -> Result<()> {
        if self.n != other.n || self.grid != other.grid {
            return Err(FockError::Mismatch(format!("n = {} vs {}, or different grids", self.n, other.n)));
        }
        Ok(())
    }

    /// Trapezoid inner product, antilinear in the first slot.
    pub fn inner(&self, other: &WaveFunction) -> Result<C64> {
        self.check_compatible(other)?;
        let w = self.grid.weight().powi(self.n as i32);
        let partial: Vec<C64> = self
            .amplitudes
            .par_chunks(CHUNK)
            .zip(other.amplitudes.par_chunks(CHUNK))
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum())
            .collect();
        let s: C64 = partial.iter().sum();
        Ok(s * w)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).map(|v| v.re.max(0.0).sqrt()).unwrap_or(f64::NAN)
    }

    pub fn scale(&self, c: C64) -> WaveFunction {
        let mut out = self.clone();
        out.amplitudes.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// self + c·other.
    pub fn axpy(&self, c: C64, other: &WaveFunction) -> Result<WaveFunction> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.amplitudes.iter_mut().zip(&other.amplitudes).for_each(|(a, b)| *a += c * b);
        out.s_symmetric = self.s_symmetric && other.s_symmetric;
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &WaveFunction) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Largest violation of Ψ(…θ_k, θ_{k+1}…) = S(θ_{k+1} − θ_k)Ψ(…θ_{k+1}, θ_k…).
    pub fn s_symmetry_deviation(&self, lat: &SLattice) -> f64 {
        (0..self.n.saturating_sub(1))
            .map(|k| {
                let swapped = transpose(lat, self, k);
                self.max_abs_diff(&swapped).unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    }
}

/// D_n(τ_k): (DΨ)(θ) = S(θ_{k+1} − θ_k)·Ψ(…θ_{k+1}, θ_k…), k zero-based.
fn transpose(lat: &SLattice, psi: &WaveFunction, k: usize) -> WaveFunction {
    let n = psi.grid.n_points;
    let sk = n.pow((psi.n - 1 - k) as u32);
    let sk1 = sk / n;
    let mut out = psi.clone();
    out.amplitudes.par_iter_mut().enumerate().for_each(|(flat, v)| {
        let ik = (flat / sk) % n;
        let ik1 = (flat / sk1) % n;
        let src = flat + ik1 * sk + ik * sk1 - ik * sk - ik1 * sk1;
        *v = lat.get(ik, ik1) * psi.amplitudes[src];
    });
    out
}

/// Adjacent-transposition word w with σ = τ_{w₀}∘τ_{w₁}∘…, where (σθ)_i = θ_{σ(i)}.
pub fn reduced_word(perm: &[usize]) -> Result<Vec<usize>> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(FockError::BadPermutation(perm.to_vec(), n));
        }
        seen[p] = true;
    }
    let mut s = perm.to_vec();
    let mut pushed = Vec::new();
    while let Some(i) = (0..n.saturating_sub(1)).find(|&i| s[i] > s[i + 1]) {
        s.swap(i, i + 1);
        pushed.push(i);
    }
    pushed.reverse();
    Ok(pushed)
}

/// Applies D_n(τ_{w₀})⋯D_n(τ_{w_m}) (the last letter acts first).
pub fn apply_word(lat: &SLattice, psi: &WaveFunction, word: &[usize]) -> Result<WaveFunction> {
    if let Some(&k) = word.iter().find(|&&k| k + 1 >= psi.n) {
        return Err(FockError::BadPermutation(vec![k, k + 1], psi.n));
    }
    let mut out = psi.clone();
    for &k in word.iter().rev() {
        out = transpose(lat, &out, k);
    }
    Ok(out)
}

pub fn apply_dn(lat: &SLattice, psi: &WaveFunction, perm: &[usize]) -> Result<WaveFunction> {
    if perm.len() != psi.n {
        return Err(FockError::BadPermutation(perm.to_vec(), psi.n));
    }
    let word = reduced_word(perm)?;
    apply_word(lat, psi, &word)
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// P_n = (1/n!) Σ_σ D_n(σ).
pub fn project_pn(lat: &SLattice, psi: &WaveFunction) -> Result<WaveFunction> {
    if psi.n > MAX_PARTICLES {
        return Err(FockError::ParticleCap(psi.n));
    }
    if psi.n <= 1 {
        let mut out = psi.clone();
        out.s_symmetric = true;
        return Ok(out);
    }
    let perms = permutations(psi.n);
    let mut acc = WaveFunction::zeros(psi.n, &psi.grid)?;
    for p in &perms {
        let term = apply_dn(lat, psi, p)?;
        acc.amplitudes.iter_mut().zip(&term.amplitudes).for_each(|(a, b)| *a += b);
    }
    let mut out = acc.scale(C64::new(1.0 / perms.len() as f64, 0.0));
    out.s_symmetric = true;
    Ok(out)
}

fn check_one_particle(psi: &[C64], grid: &RapidityGrid) -> Result<()> {
    if psi.len() != grid.n_points {
        return Err(FockError::Mismatch(format!("one-particle vector has {} values, grid {}", psi.len(), grid.n_points)));
    }
    Ok(())
}

/// z†(ψ) = P a†(ψ) P with (a†(ψ)Ψ)(θ₁,…) = √(n+1)·ψ(θ₁)Ψ(θ₂,…).
pub fn create(lat: &SLattice, psi: &[C64], wave: &WaveFunction) -> Result<WaveFunction> {
    if wave.n + 1 > MAX_PARTICLES {
        return Err(FockError::ParticleCap(wave.n + 1));
    }
    check_one_particle(psi, &wave.grid)?;
    let inner = project_pn(lat, wave)?;
    let c = ((wave.n + 1) as f64).sqrt();
    let mut out = WaveFunction::zeros(wave.n + 1, &wave.grid)?;
    let block = inner.len();
    out.amplitudes.par_chunks_mut(block).zip(psi.par_iter()).for_each(|(chunk, p)| {
        chunk.iter_mut().zip(&inner.amplitudes).for_each(|(o, v)| *o = c * p * v);
    });
    project_pn(lat, &out)
}

/// z(ψ) = P a(ψ) P, antilinear in ψ. On the vacuum it returns the zero scalar.
pub fn annihilate(lat: &SLattice, psi: &[C64], wave: &WaveFunction) -> Result<WaveFunction> {
    check_one_particle(psi, &wave.grid)?;
    if wave.n == 0 {
        return Ok(WaveFunction::vacuum(zero(), &wave.grid));
    }
    let inner = project_pn(lat, wave)?;
    let c = (wave.n as f64).sqrt() * wave.grid.weight();
    let block = inner.len() / wave.grid.n_points;
    let mut out = WaveFunction::zeros(wave.n - 1, &wave.grid)?;
    out.amplitudes.par_iter_mut().enumerate().for_each(|(r, o)| {
        *o = c * psi.iter().enumerate().map(|(i, p)| p.conj() * inner.amplitudes[i * block + r]).sum::<C64>();
    });
    project_pn(lat, &out)
}

/// (JΨ)(θ₁,…,θ_n) = conj Ψ(θ_n,…,θ₁).
pub fn cpt_j(wave: &WaveFunction) -> WaveFunction {
    let mut out = wave.clone();
    out.amplitudes.par_iter_mut().enumerate().for_each(|(flat, v)| {
        let mut idx = wave.multi_index(flat);
        idx.reverse();
        *v = wave.amplitudes[wave.index(&idx)].conj();
    });
    out
}

/// J₁ on one-particle values.
pub fn cpt_one(psi: &[C64]) -> Vec<C64> {
    psi.iter().map(|v| v.conj()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareElement {
    pub a: [f64; 2],
    pub lambda: f64,
}

impl PoincareElement {
    pub fn identity() -> Self {
        PoincareElement { a: [0.0, 0.0], lambda: 0.0 }
    }

    pub fn translation(a: [f64; 2]) -> Self {
        PoincareElement { a, lambda: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareImage {
    pub values: Vec<C64>,
    /// max |cubic − quintic| over the nodes; 0 when λ is a multiple of the step.
    pub interpolation_error: f64,
}

fn lagrange(values: &[C64], x: f64, grid: &RapidityGrid, order: usize) -> C64 {
    let h = grid.step();
    let n = values.len() as isize;
    let pos = (x + grid.theta_max) / h - 0.5;
    let base = pos.floor() as isize - (order as isize - 1) / 2;
    let mut acc = zero();
    for a in 0..=order as isize {
        let ja = base + a;
        if ja < 0 || ja >= n {
            continue;
        }
        let mut l = 1.0;
        for b in 0..=order as isize {
            if b != a {
                l *= (pos - (base + b) as f64) / (a - b) as f64;
            }
        }
        acc += values[ja as usize] * l;
    }
    acc
}

/// (U₁(a,λ)ψ)(θ) = e^{ip(θ)·a}ψ(θ − λ), with cubic interpolation for the boost.
pub fn poincare_one(g: &PoincareElement, psi: &[C64], grid: &RapidityGrid) -> Result<PoincareImage> {
    check_one_particle(psi, grid)?;
    let h = grid.step();
    let shift = g.lambda / h;
    let exact = (shift - shift.round()).abs() < 1e-12;
    let mut err = 0.0f64;
    let values = grid
        .nodes()
        .into_iter()
        .enumerate()
        .map(|(j, x)| {
            let moved = if exact {
                let src = j as isize - shift.round() as isize;
                if src >= 0 && (src as usize) < psi.len() {
                    psi[src as usize]
                } else {
                    zero()
                }
            } else {
                let c = lagrange(psi, x - g.lambda, grid, 3);
                let q = lagrange(psi, x - g.lambda, grid, 5);
                err = err.max((c - q).norm());
                c
            };
            (C64::new(0.0, 1.0) * p_dot(C64::new(x, 0.0), g.a)).exp() * moved
        })
        .collect();
    Ok(PoincareImage { values, interpolation_error: err })
}

/// U₁(a,λ) on a closed form, exact at complex arguments.
pub fn poincare_closed(g: &PoincareElement, psi: ClosedForm) -> ClosedForm {
    let g = *g;
    Arc::new(move |z: C64| (C64::new(0.0, 1.0) * p_dot(z, g.a)).exp() * psi(z - g.lambda))
}

/// Finite-particle vector with components n = 0..=3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockVector {
    pub grid: RapidityGrid,
    pub components: BTreeMap<usize, WaveFunction>,
}

impl FockVector {
    pub fn new(grid: &RapidityGrid) -> Self {
        FockVector { grid: *grid, components: BTreeMap::new() }
    }

    pub fn from_components(grid: &RapidityGrid, parts: Vec<WaveFunction>) -> Result<Self> {
        let mut v = Self::new(grid);
        for p in parts {
            v.add_component(p)?;
        }
        Ok(v)
    }

    pub fn add_component(&mut self, w: WaveFunction) -> Result<()> {
        if w.grid != self.grid {
            return Err(FockError::Mismatch("component on a different grid".into()));
        }
        match self.components.get_mut(&w.n) {
            Some(existing) => *existing = existing.axpy(C64::new(1.0, 0.0), &w)?,
            None => {
                self.components.insert(w.n, w);
            }
        }
        Ok(())
    }

    pub fn inner(&self, other: &FockVector) -> Result<C64> {
        let mut acc = zero();
        for (n, a) in &self.components {
            if let Some(b) = other.components.get(n) {
                acc += a.inner(b)?;
            }
        }
        Ok(acc)
    }

    /// N applied componentwise.
    pub fn number(&self) -> FockVector {
        let mut out = self.clone();
        for (n, w) in out.components.iter_mut() {
            *w = w.scale(C64::new(*n as f64, 0.0));
        }
        out
    }

    pub fn map<F>(&self, f: F) -> Result<FockVector>
    where
        F: Fn(&WaveFunction) -> Result<WaveFunction>,
    {
        let mut out = FockVector::new(&self.grid);
        for w in self.components.values() {
            out.add_component(f(w)?)?;
        }
        Ok(out)
    }

    pub fn plus(&self, other: &FockVector) -> Result<FockVector> {
        let mut out = self.clone();
        for w in other.components.values() {
            out.add_component(w.clone())?;
        }
        Ok(out)
    }
}

/// φ(ξ)Ψ = z†(ξ)Ψ + z(ξ)Ψ, with ξ given by its boundary values on ℝ.
pub fn phi_free(lat: &SLattice, xi: &[C64], wave: &WaveFunction) -> Result<FockVector> {
    if wave.n + 1 > MAX_PARTICLES {
        return Err(FockError::ParticleCap(wave.n + 1));
    }
    let mut out = FockVector::new(&wave.grid);
    out.add_component(create(lat, xi, wave)?)?;
    if wave.n > 0 {
        out.add_component(annihilate(lat, xi, wave)?)?;
    }
    Ok(out)
}

/// z′†(η) = J z†(J₁η) J.
pub fn create_reflected(lat: &SLattice, eta: &[C64], wave: &WaveFunction) -> Result<WaveFunction> {
    Ok(cpt_j(&create(lat, &cpt_one(eta), &cpt_j(wave))?))
}

/// z′(η) = J z(J₁η) J.
pub fn annihilate_reflected(lat: &SLattice, eta: &[C64], wave: &WaveFunction) -> Result<WaveFunction> {
    Ok(cpt_j(&annihilate(lat, &cpt_one(eta), &cpt_j(wave))?))
}

/// φ′(η) = z′†(η) + z′(η).
pub fn phi_reflected(lat: &SLattice, eta: &[C64], wave: &WaveFunction) -> Result<FockVector> {
    if wave.n + 1 > MAX_PARTICLES {
        return Err(FockError::ParticleCap(wave.n + 1));
    }
    let mut out = FockVector::new(&wave.grid);
    out.add_component(create_reflected(lat, eta, wave)?)?;
    if wave.n > 0 {
        out.add_component(annihilate_reflected(lat, eta, wave)?)?;
    }
    Ok(out)
}

pub type WaveFn = Arc<dyn Fn(&[C64]) -> C64 + Send + Sync>;

/// An n-particle vector known in closed form at complex rapidities.
#[derive(Clone)]
pub struct ClosedWave {
    pub n: usize,
    f: WaveFn,
}

impl std::fmt::Debug for ClosedWave {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ClosedWave {{ n: {} }}", self.n)
    }
}

/// Even entire weight w(x) = cosh x − ½, vanishing at x = ±πi/3.
pub fn pair_weight(x: C64) -> C64 {
    x.cosh() - 0.5
}

fn s_or_nan(s: &ScatteringFunction, z: C64) -> C64 {
    s.eval(z).unwrap_or(C64::new(f64::NAN, f64::NAN))
}

/// (D_n(σ)F)(z) for the word of σ, evaluated at complex rapidities.
pub fn word_closed<F>(s: &ScatteringFunction, word: &[usize], f: F, z: &[C64]) -> C64
where
    F: Fn(&[C64]) -> C64,
{
    let mut pt = z.to_vec();
    let mut factor = C64::new(1.0, 0.0);
    for &k in word {
        factor *= s_or_nan(s, pt[k + 1] - pt[k]);
        pt.swap(k, k + 1);
    }
    factor * f(&pt)
}

impl ClosedWave {
    pub fn new(n: usize, f: WaveFn) -> Result<Self> {
        if n > MAX_PARTICLES {
            return Err(FockError::ParticleCap(n));
        }
        Ok(ClosedWave { n, f })
    }

    pub fn vacuum(c: C64) -> Self {
        ClosedWave { n: 0, f: Arc::new(move |_| c) }
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, Arc::new(|_| C64::new(0.0, 0.0)))
    }

    /// P_n(ψ₁⊗…⊗ψ_n), times ∏_{i<j} w(θ_i − θ_j) when `paired`.
    pub fn symmetrized_product(s: &ScatteringFunction, factors: Vec<ClosedForm>, paired: bool) -> Result<Self> {
        let n = factors.len();
        if n > MAX_PARTICLES {
            return Err(FockError::ParticleCap(n));
        }
        let words: Vec<Vec<usize>> = permutations(n).iter().map(|p| reduced_word(p)).collect::<Result<_>>()?;
        let s = s.clone();
        let norm = 1.0 / words.len() as f64;
        let f = move |z: &[C64]| {
            let product = |pt: &[C64]| factors.iter().zip(pt).map(|(g, x)| g(*x)).product::<C64>();
            let mut acc: C64 = words.iter().map(|w| word_closed(&s, w, product, z)).sum::<C64>() * norm;
            if paired {
                for a in 0..z.len() {
                    for b in a + 1..z.len() {
                        acc *= pair_weight(z[a] - z[b]);
                    }
                }
            }
            acc
        };
        Ok(ClosedWave { n, f: Arc::new(f) })
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        (self.f)(z)
    }

    /// Closed form of JΨ: conj Ψ(conj θ_n, …, conj θ₁).
    pub fn cpt(&self) -> Self {
        let f = self.f.clone();
        ClosedWave {
            n: self.n,
            f: Arc::new(move |z: &[C64]| {
                let rev: Vec<C64> = z.iter().rev().map(|v| v.conj()).collect();
                f(&rev).conj()
            }),
        }
    }

    pub fn scaled(&self, c: C64) -> Self {
        let f = self.f.clone();
        ClosedWave { n: self.n, f: Arc::new(move |z: &[C64]| c * f(z)) }
    }

    pub fn sum(&self, other: &ClosedWave) -> Result<Self> {
        if self.n != other.n {
            return Err(FockError::Mismatch(format!("n = {} vs {}", self.n, other.n)));
        }
        let (f, g) = (self.f.clone(), other.f.clone());
        Ok(ClosedWave { n: self.n, f: Arc::new(move |z: &[C64]| f(z) + g(z)) })
    }

    pub fn function(&self) -> WaveFn {
        self.f.clone()
    }

    /// Grid samples, flagged S-symmetric.
    pub fn sample(&self, grid: &RapidityGrid) -> Result<WaveFunction> {
        let f = self.f.clone();
        let mut w = WaveFunction::from_fn(self.n, grid, move |t| {
            let z: Vec<C64> = t.iter().map(|&x| C64::new(x, 0.0)).collect();
            f(&z)
        })?;
        w.s_symmetric = true;
        Ok(w)
    }
}
