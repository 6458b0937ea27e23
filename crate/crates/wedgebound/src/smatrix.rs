//! The two-particle scattering function with one bound-state pole pair:
//! closed-form evaluation, axiom checks and the auxiliary inequalities.

use crate::analytic::{self, AnalyticError, ComplexRect};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmatrixError {
    #[error("epsilon {0} outside (-π/6, π/6)")]
    OutOfRange(f64),
    #[error("Blaschke zero {0} outside the physical strip")]
    BadZero(C64),
    #[error("Blaschke phase {0} is not unimodular")]
    BadPhase(C64),
    #[error("evaluation at a pole near {0}")]
    AtPole(C64),
    #[error("kappa {0} is not below π/3")]
    KappaTooLarge(f64),
    #[error("rapidity grid needs a power-of-two point count >= 64 and theta_max > 0")]
    BadGrid,
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

pub type Result<T> = std::result::Result<T, SmatrixError>;

fn i() -> C64 {
    C64::new(0.0, 1.0)
}

fn sh(z: C64) -> C64 {
    (z * 0.5).sinh()
}

/// Elementary strip factor with zero `zero` in the physical strip and unimodular `phase`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeFactor {
    pub zero: C64,
    pub phase: C64,
}

impl BlaschkeFactor {
    pub fn new(zero: C64) -> Self {
        BlaschkeFactor { zero, phase: C64::new(1.0, 0.0) }
    }

    /// Numerator (e^θ − e^{ζ0}) and denominator (e^θ − e^{conj ζ0}), rescaled by
    /// e^{−θ} for Re θ > 0 so that neither overflows.
    fn parts(&self, z: C64) -> (C64, C64) {
        if z.re > 0.0 {
            let one = C64::new(1.0, 0.0);
            (one - (self.zero - z).exp(), one - (self.zero.conj() - z).exp())
        } else {
            (z.exp() - self.zero.exp(), z.exp() - self.zero.conj().exp())
        }
    }

    /// Unscaled numerator and denominator, entire in z.
    fn entire_parts(&self, z: C64) -> (C64, C64) {
        (z.exp() - self.zero.exp(), z.exp() - self.zero.conj().exp())
    }

    pub fn eval(&self, z: C64) -> C64 {
        let (n, d) = self.parts(z);
        self.phase * n / d
    }
}

/// The four zeros of the ε-block; the block itself is the Blaschke product over them.
pub fn epsilon_block_zeros(epsilon: f64) -> [C64; 4] {
    [
        i() * (PI / 6.0 + epsilon),
        i() * (PI / 2.0 - epsilon),
        i() * (PI / 2.0 + epsilon),
        i() * (5.0 * PI / 6.0 - epsilon),
    ]
}

/// `power` copies of the ε'-block as Blaschke factors.
pub fn block_factors(epsilon: f64, power: usize) -> Vec<BlaschkeFactor> {
    let mut v = Vec::new();
    for _ in 0..power {
        v.extend(epsilon_block_zeros(epsilon).iter().map(|z| BlaschkeFactor::new(*z)));
    }
    v
}

/// Anything that can be evaluated like a two-particle amplitude.
pub trait Amplitude: Sync {
    fn eval(&self, z: C64) -> Result<C64>;
}

/// Constant amplitude, used for calibration.
#[derive(Debug, Clone, Copy)]
pub struct ConstantAmplitude(pub C64);

impl Amplitude for ConstantAmplitude {
    fn eval(&self, _z: C64) -> Result<C64> {
        Ok(self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringFunction {
    pub epsilon: f64,
    pub blaschke: Vec<BlaschkeFactor>,
    pub mass: f64,
}

pub fn make_scattering(epsilon: f64, blaschke: Vec<BlaschkeFactor>) -> Result<ScatteringFunction> {
    if !(epsilon.abs() < PI / 6.0) {
        return Err(SmatrixError::OutOfRange(epsilon));
    }
    for b in &blaschke {
        if !(b.zero.im > 0.0 && b.zero.im < PI) || !b.zero.re.is_finite() {
            return Err(SmatrixError::BadZero(b.zero));
        }
        if (b.phase.norm() - 1.0).abs() > 1e-12 {
            return Err(SmatrixError::BadPhase(b.phase));
        }
    }
    Ok(ScatteringFunction { epsilon, blaschke, mass: 1.0 })
}

impl ScatteringFunction {
    /// Shifts a with sinh½(θ + a) in the numerator, and b in the denominator.
    fn shifts(&self) -> ([C64; 6], [C64; 6]) {
        let e = self.epsilon;
        let num = [
            i() * (PI / 3.0),
            i() * (2.0 * PI / 3.0),
            -i() * (PI / 6.0 + e),
            -i() * (PI / 2.0 - e),
            -i() * (PI / 2.0 + e),
            -i() * (5.0 * PI / 6.0 - e),
        ];
        let den = [
            -i() * (PI / 3.0),
            -i() * (2.0 * PI / 3.0),
            i() * (PI / 6.0 + e),
            i() * (PI / 2.0 - e),
            i() * (PI / 2.0 + e),
            i() * (5.0 * PI / 6.0 - e),
        ];
        (num, den)
    }

    /// Entire numerator N with S = N / D.
    pub fn numerator(&self, z: C64) -> C64 {
        let (num, _) = self.shifts();
        let mut v = -num.iter().fold(C64::new(1.0, 0.0), |acc, a| acc * sh(z + a));
        for b in &self.blaschke {
            v *= b.phase * b.entire_parts(z).0;
        }
        v
    }

    /// Entire denominator D with S = N / D.
    pub fn denominator(&self, z: C64) -> C64 {
        let (_, den) = self.shifts();
        let mut v = den.iter().fold(C64::new(1.0, 0.0), |acc, a| acc * sh(z + a));
        for b in &self.blaschke {
            v *= b.entire_parts(z).1;
        }
        v
    }

    /// Every pole of S in the complex plane is congruent mod 2πi to one of these.
    pub fn pole_representatives(&self) -> Vec<C64> {
        let (_, den) = self.shifts();
        let mut v: Vec<C64> = den.iter().map(|a| -a).collect();
        v.extend(self.blaschke.iter().map(|b| b.zero.conj()));
        v
    }

    /// Every zero of S is congruent mod 2πi to one of these.
    pub fn zero_representatives(&self) -> Vec<C64> {
        let (num, _) = self.shifts();
        let mut v: Vec<C64> = num.iter().map(|a| -a).collect();
        v.extend(self.blaschke.iter().map(|b| b.zero));
        v
    }

    /// Distance from z to the nearest pole of S.
    pub fn pole_distance(&self, z: C64) -> f64 {
        self.pole_representatives()
            .iter()
            .map(|p| {
                let d = z - p;
                let k = (d.im / (2.0 * PI)).round();
                (d - i() * (2.0 * PI * k)).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Factor-by-factor product, accurate at large |Re z|.
    pub fn eval(&self, z: C64) -> Result<C64> {
        if self.pole_distance(z) < 1e-12 {
            return Err(SmatrixError::AtPole(z));
        }
        let (num, den) = self.shifts();
        let mut v = C64::new(-1.0, 0.0);
        for k in 0..6 {
            v *= sh(z + num[k]) / sh(z + den[k]);
        }
        for b in &self.blaschke {
            v *= b.eval(z);
        }
        Ok(v)
    }
}

impl Amplitude for ScatteringFunction {
    fn eval(&self, z: C64) -> Result<C64> {
        ScatteringFunction::eval(self, z)
    }
}

pub fn eval_s(s: &ScatteringFunction, z: C64) -> Result<C64> {
    s.eval(z)
}

/// Uniform symmetric grid θ_j = −L + (j + ½)h, h = 2L/n, with trapezoid weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RapidityGrid {
    pub theta_max: f64,
    pub n_points: usize,
}

impl Default for RapidityGrid {
    fn default() -> Self {
        RapidityGrid { theta_max: 12.0, n_points: 2048 }
    }
}

impl RapidityGrid {
    pub fn new(theta_max: f64, n_points: usize) -> Result<Self> {
        if !(theta_max > 0.0) || n_points < 64 || !n_points.is_power_of_two() {
            return Err(SmatrixError::BadGrid);
        }
        Ok(RapidityGrid { theta_max, n_points })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.theta_max / self.n_points as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.theta_max + (j as f64 + 0.5) * self.step()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.node(j)).collect()
    }

    pub fn weight(&self) -> f64 {
        self.step()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomEntry {
    pub name: String,
    pub max_residual: f64,
    pub argmax: C64,
    pub pass: bool,
    pub samples: usize,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub epsilon: f64,
    pub tol: f64,
    pub entries: Vec<AxiomEntry>,
    pub zeros: Vec<C64>,
    pub poles: Vec<C64>,
    pub residue: Option<C64>,
    pub kappa: Option<f64>,
    pub kappa_norm: Option<f64>,
}

impl AxiomReport {
    pub fn entry(&self, name: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// All of S1..S9 pass; the A3 entry is informational.
    pub fn all_pass(&self) -> bool {
        self.entries.iter().filter(|e| e.name.starts_with('S')).all(|e| e.pass)
    }
}

/// Running maximum with location.
struct MaxTrack {
    value: f64,
    at: C64,
    samples: usize,
}

impl MaxTrack {
    fn new() -> Self {
        MaxTrack { value: 0.0, at: C64::new(f64::NAN, f64::NAN), samples: 0 }
    }

    fn push(&mut self, r: f64, z: C64) {
        self.samples += 1;
        if r > self.value || (self.at.re.is_nan() && r >= self.value) || r.is_nan() {
            self.value = if r.is_nan() { f64::INFINITY } else { r };
            self.at = z;
        }
    }

    fn entry(self, name: &str, tol: f64, note: &str) -> AxiomEntry {
        AxiomEntry {
            name: name.into(),
            max_residual: self.value,
            argmax: self.at,
            pass: self.value <= tol,
            samples: self.samples,
            note: note.into(),
        }
    }
}

fn failed(name: &str, note: String) -> AxiomEntry {
    AxiomEntry {
        name: name.into(),
        max_residual: f64::INFINITY,
        argmax: C64::new(f64::NAN, f64::NAN),
        pass: false,
        samples: 0,
        note,
    }
}

/// In-strip verification lattice: 256 real parts on [−10, 10] and 64 heights in (0, π).
pub fn strip_lattice() -> Vec<C64> {
    let mut v = Vec::with_capacity(256 * 64);
    for a in 0..256 {
        let x = -10.0 + 20.0 * a as f64 / 255.0;
        for b in 0..64 {
            let y = PI * (b as f64 + 0.5) / 64.0;
            v.push(C64::new(x, y));
        }
    }
    v
}

const POLE_DISK: f64 = 1e-3;

/// Rectangle covering the physical strip for zero and pole searches.
pub fn physical_rect() -> ComplexRect {
    ComplexRect { re_min: -10.0, re_max: 10.0, im_min: 1e-5, im_max: PI - 1e-5 }
}

/// Zeros of S in the physical strip.
pub fn strip_zeros(s: &ScatteringFunction) -> Result<Vec<C64>> {
    Ok(analytic::locate_zeros(|z| s.numerator(z), &physical_rect(), 64)?)
}

/// Poles of S in the physical strip.
pub fn strip_poles(s: &ScatteringFunction) -> Result<Vec<C64>> {
    Ok(analytic::locate_zeros(|z| s.denominator(z), &physical_rect(), 64)?)
}

/// Residue at 2πi/3, with |R|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueR {
    pub value: C64,
    pub modulus: f64,
    pub contour: C64,
    pub limit: C64,
}

pub fn residue_r(s: &ScatteringFunction) -> Result<ResidueR> {
    let p = i() * (2.0 * PI / 3.0);
    let near = s
        .zero_representatives()
        .iter()
        .chain(s.pole_representatives().iter())
        .map(|q| (p - q).norm())
        .filter(|d| *d > 1e-12)
        .fold(f64::INFINITY, f64::min);
    let radius = (1e-2f64).min(0.1 * near);
    let r = analytic::residue_at(|z| s.eval(z).unwrap_or(C64::new(f64::NAN, f64::NAN)), p, radius)?;
    Ok(ResidueR { value: r.value, modulus: r.value.norm(), contour: r.contour, limit: r.limit })
}

pub fn kappa_of(s: &ScatteringFunction) -> Result<f64> {
    let zeros = strip_zeros(s)?;
    let k = zeros.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
    if !(k < PI / 3.0) {
        return Err(SmatrixError::KappaTooLarge(k));
    }
    Ok(k)
}

/// sup |S| over the band |Im ζ| ≤ κ/2, |Re ζ| ≤ 10.
pub fn band_norm(s: &ScatteringFunction, kappa: f64) -> f64 {
    let mut m: f64 = 0.0;
    for a in 0..256 {
        let x = -10.0 + 20.0 * a as f64 / 255.0;
        for b in 0..=16 {
            let y = -0.5 * kappa + kappa * b as f64 / 16.0;
            if let Ok(v) = s.eval(C64::new(x, y)) {
                m = m.max(v.norm());
            } else {
                return f64::INFINITY;
            }
        }
    }
    m
}

/// Result of the inequality Re[S(θ+πi/6)S(−θ)] ≥ 0 sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityK {
    pub pass: bool,
    pub min_value: f64,
    pub argmin: f64,
}

pub fn check_inequality_k<A: Amplitude>(s: &A, grid: &RapidityGrid, tol: f64) -> Result<InequalityK> {
    let mut min_value = f64::INFINITY;
    let mut argmin = f64::NAN;
    for t in grid.nodes() {
        let v = (s.eval(C64::new(t, PI / 6.0))? * s.eval(C64::new(-t, 0.0))?).re;
        if v < min_value {
            min_value = v;
            argmin = t;
        }
    }
    Ok(InequalityK { pass: min_value >= -tol, min_value, argmin })
}

/// min over the grid of Re S(θ + i·shift), skipping the pole disk at θ = 0.
pub fn min_real_shifted(s: &ScatteringFunction, grid: &RapidityGrid, shift: f64) -> (f64, f64) {
    let mut best = (f64::INFINITY, f64::NAN);
    for t in grid.nodes() {
        if let Ok(v) = s.eval(C64::new(t, shift)) {
            if s.pole_distance(C64::new(t, shift)) < POLE_DISK {
                continue;
            }
            if v.re < best.0 {
                best = (v.re, t);
            }
        }
    }
    best
}

/// max over the grid of |S(θ + πi/6)|.
pub fn max_modulus_sixth(s: &ScatteringFunction, grid: &RapidityGrid) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for t in grid.nodes() {
        if let Ok(v) = s.eval(C64::new(t, PI / 6.0)) {
            if v.norm() > best.0 {
                best = (v.norm(), t);
            }
        }
    }
    best
}

fn scaled(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(1.0)
}

pub fn check_axioms(s: &ScatteringFunction, grid: &RapidityGrid, tol: f64) -> AxiomReport {
    let nodes = grid.nodes();
    let lattice = strip_lattice();
    let mut entries = Vec::new();

    let mut s1 = MaxTrack::new();
    let mut s2 = MaxTrack::new();
    for &t in &nodes {
        let z = C64::new(t, 0.0);
        match (s.eval(z), s.eval(-z)) {
            (Ok(a), Ok(b)) => {
                s1.push((a.norm() - 1.0).abs(), z);
                s2.push((b * a - 1.0).norm(), z);
            }
            _ => {
                s1.push(f64::INFINITY, z);
                s2.push(f64::INFINITY, z);
            }
        }
    }
    entries.push(s1.entry("S1", tol, "max ||S(θ)| − 1| on the rapidity grid"));
    entries.push(s2.entry("S2", tol, "max |S(−θ)S(θ) − 1| on the rapidity grid"));

    let mut s3 = MaxTrack::new();
    let mut s4 = MaxTrack::new();
    let third = i() * (PI / 3.0);
    for &z in &lattice {
        if s.pole_distance(z) < POLE_DISK {
            continue;
        }
        let w = i() * PI - z;
        if s.pole_distance(w) >= POLE_DISK {
            if let (Ok(a), Ok(b)) = (s.eval(z), s.eval(w)) {
                s3.push(scaled(a, b), z);
            }
        }
        if s.pole_distance(z + third) >= POLE_DISK && s.pole_distance(z - third) >= POLE_DISK {
            if let (Ok(a), Ok(b), Ok(c)) = (s.eval(z), s.eval(z + third), s.eval(z - third)) {
                s4.push(scaled(a, b * c), z);
            }
        }
    }
    entries.push(s3.entry("S3", tol, "max |S(ζ) − S(πi − ζ)| / max(1,|S(ζ)|) on the strip lattice"));
    entries.push(s4.entry("S4", tol, "max |S(ζ) − S(ζ+πi/3)S(ζ−πi/3)| / max(1,|S(ζ)|) on the strip lattice"));

    let poles = strip_poles(s);
    let residue = residue_r(s);
    let mut residue_value = None;
    match (&poles, &residue) {
        (Ok(p), Ok(r)) => {
            residue_value = Some(r.value);
            let expected = [i() * (PI / 3.0), i() * (2.0 * PI / 3.0)];
            let mut t = MaxTrack::new();
            if p.len() != 2 {
                t.push(f64::INFINITY, C64::new(p.len() as f64, 0.0));
            } else {
                let mut sorted = p.clone();
                sorted.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
                for (q, e) in sorted.iter().zip(expected.iter()) {
                    t.push((q - e).norm(), *q);
                }
            }
            let phase = r.value.re.abs() / r.modulus;
            t.push(phase, i() * (2.0 * PI / 3.0));
            if !(r.value.im > 0.0) {
                t.push(f64::INFINITY, i() * (2.0 * PI / 3.0));
            }
            entries.push(t.entry(
                "S5",
                tol,
                "pole locations vs {πi/3, 2πi/3} and |Re R|/|R|; Im R must be positive",
            ));
        }
        (Err(e), _) | (_, Err(e)) => entries.push(failed("S5", e.to_string())),
    }

    let mut s6 = MaxTrack::new();
    match s.eval(C64::new(0.0, 0.0)) {
        Ok(v) => s6.push((v + 1.0).norm(), C64::new(0.0, 0.0)),
        Err(_) => s6.push(f64::INFINITY, C64::new(0.0, 0.0)),
    }
    entries.push(s6.entry("S6", tol, "|S(0) + 1|"));

    let (m7, at7) = min_real_shifted(s, grid, 2.0 * PI / 3.0);
    let mut s7 = MaxTrack::new();
    s7.push((-m7).max(0.0), C64::new(at7, 2.0 * PI / 3.0));
    entries.push(s7.entry("S7", tol, "−min Re S(θ + 2πi/3), clamped at 0"));

    let (m8, at8) = max_modulus_sixth(s, grid);
    let mut s8 = MaxTrack::new();
    s8.push((m8 - 1.0).max(0.0), C64::new(at8, PI / 6.0));
    entries.push(s8.entry("S8", tol, "max |S(θ + πi/6)| − 1, clamped at 0"));

    let zeros = strip_zeros(s);
    let mut kappa = None;
    let mut kappa_norm = None;
    match &zeros {
        Ok(z) => {
            let k = z.iter().map(|w| w.im).fold(f64::INFINITY, f64::min);
            let norm = band_norm(s, k);
            kappa = Some(k);
            kappa_norm = Some(norm);
            let ok = norm.is_finite() && k < PI / 3.0;
            entries.push(AxiomEntry {
                name: "S9".into(),
                max_residual: if ok { 0.0 } else { f64::INFINITY },
                argmax: C64::new(0.0, k),
                pass: ok,
                samples: z.len(),
                note: format!("{} zeros in the strip; sup |S| over |Im| <= κ/2 is {norm:.6}", z.len()),
            });
        }
        Err(e) => entries.push(failed("S9", e.to_string())),
    }

    match check_inequality_k(s, grid, tol) {
        Ok(k) => {
            let mut a3 = MaxTrack::new();
            a3.push((-k.min_value).max(0.0), C64::new(k.argmin, 0.0));
            entries.push(a3.entry("A3", tol, "−min Re[S(θ+πi/6)S(−θ)], clamped at 0 (informational)"));
        }
        Err(e) => entries.push(failed("A3", e.to_string())),
    }

    AxiomReport {
        epsilon: s.epsilon,
        tol,
        entries,
        zeros: zeros.unwrap_or_default(),
        poles: poles.unwrap_or_default(),
        residue: residue_value,
        kappa,
        kappa_norm,
    }
}

/// Re S(θ + πi/3) on the grid, skipping the pole disk.
pub fn curve_re_shift_third(s: &ScatteringFunction, grid: &RapidityGrid) -> Vec<(f64, f64)> {
    grid.nodes()
        .into_iter()
        .filter_map(|t| {
            let z = C64::new(t, PI / 3.0);
            if s.pole_distance(z) < POLE_DISK {
                return None;
            }
            s.eval(z).ok().map(|v| (t, v.re))
        })
        .collect()
}

/// min_θ Re[S(θ+πi/6)S(−θ)] for ε on a uniform grid strictly inside (−π/6, π/6).
pub fn curve_inequality_k(blaschke: &[BlaschkeFactor], grid: &RapidityGrid, n_eps: usize) -> Vec<(f64, f64)> {
    (0..n_eps)
        .filter_map(|k| {
            let e = -PI / 6.0 + PI / 3.0 * (k as f64 + 0.5) / n_eps as f64;
            let s = make_scattering(e, blaschke.to_vec()).ok()?;
            check_inequality_k(&s, grid, 0.0).ok().map(|r| (e, r.min_value))
        })
        .collect()
}

/// The bound-state prefactor √(2π|R|).
pub fn bound_state_prefactor(s: &ScatteringFunction) -> Result<f64> {
    Ok((2.0 * PI * residue_r(s)?.modulus).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero() {
        for e in [0.0, 0.1, -0.4] {
            let s = make_scattering(e, vec![]).unwrap();
            assert!((s.eval(C64::new(0.0, 0.0)).unwrap() + 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn out_of_range() {
        assert_eq!(make_scattering(0.6, vec![]), Err(SmatrixError::OutOfRange(0.6)));
        let bad = BlaschkeFactor::new(C64::new(0.0, -0.3));
        assert!(matches!(make_scattering(0.0, vec![bad]), Err(SmatrixError::BadZero(_))));
    }

    #[test]
    fn at_pole() {
        let s = make_scattering(0.0, vec![]).unwrap();
        assert!(matches!(s.eval(C64::new(0.0, PI / 3.0)), Err(SmatrixError::AtPole(_))));
    }

    #[test]
    fn blaschke_parts_agree() {
        let b = BlaschkeFactor::new(C64::new(0.4, 1.1));
        for x in [-3.0, -0.2, 0.2, 3.0] {
            let z = C64::new(x, 0.7);
            let direct = (z.exp() - b.zero.exp()) / (z.exp() - b.zero.conj().exp());
            assert!((b.eval(z) - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn numerator_over_denominator() {
        let s = make_scattering(0.2, vec![BlaschkeFactor::new(C64::new(0.3, 1.4))]).unwrap();
        let z = C64::new(0.7, 0.4);
        assert!((s.numerator(z) / s.denominator(z) - s.eval(z).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn grid_nodes_symmetric() {
        let g = RapidityGrid::new(12.0, 64).unwrap();
        let n = g.nodes();
        for j in 0..64 {
            assert!((n[j] + n[63 - j]).abs() < 1e-12);
        }
        assert!(RapidityGrid::new(12.0, 100).is_err());
    }
}
