//! Harmonic splitting on a strip: the analytic v with prescribed Re v on both
//! boundary lines, and the Beurling factorization built on it.

use super::{blaschke_point, fft, wavenumbers, HardyError, Result};
use crate::analytic::{self, ComplexRect};
use crate::smatrix::RapidityGrid;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest accepted condition number coth|k·half| of a per-frequency system.
pub const MAX_SPLIT_CONDITION: f64 = 1e8;
const MAX_ZEROS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// The solve runs on `extend` times the rapidity window with the same step.
    pub extend: usize,
    /// Adds e^{±τ} to the tail model, for data growing like e^{|x|}.
    pub exponential_tails: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { extend: 4, exponential_tails: false }
    }
}

fn i() -> C64 {
    C64::new(0.0, 1.0)
}

/// Tail model: analytic functions of τ taken with real coefficients.
fn basis(tau: C64, sigma: f64, exponential: bool) -> Vec<C64> {
    let t = (tau * sigma).tanh();
    let mut v = vec![
        C64::new(1.0, 0.0),
        i() * tau,
        tau,
        i() * tau * tau,
        tau * tau,
        i() * tau * tau * tau,
        tau * t,
        i() * tau * tau * t,
        t,
        i() * tau * t,
    ];
    if exponential {
        let (e, em) = (tau.exp(), (-tau).exp());
        v.extend([e, i() * e, em, i() * em]);
    }
    v
}

/// Analytic v on a strip, v = tail model + bump + Fourier part, in the
/// centred variable τ = ζ − i·center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterSolution {
    pub strip: (f64, f64),
    center: f64,
    half: f64,
    sigma: f64,
    exponential_tails: bool,
    tail: Vec<f64>,
    bump: f64,
    x0: f64,
    offset: usize,
    base: usize,
    amps: Vec<C64>,
    ks: Vec<f64>,
    sparse: Vec<(f64, C64)>,
    /// Largest coth|k·half| met among the retained frequencies.
    pub max_condition: f64,
}

impl OuterSolution {
    fn closed_part(&self, tau: C64) -> C64 {
        let b = basis(tau, self.sigma, self.exponential_tails);
        let s: C64 = b.iter().zip(&self.tail).map(|(g, c)| g * c).sum();
        s + i() * (tau * self.sigma).tanh() * self.bump
    }

    /// v(ζ).
    pub fn eval(&self, z: C64) -> C64 {
        let tau = z - i() * self.center;
        let x = tau.re - self.x0;
        let f: C64 = self
            .sparse
            .iter()
            .map(|(k, a)| a * C64::new(-k * tau.im, k * x).exp())
            .sum();
        self.closed_part(tau) + f
    }

    /// v(x + iy) at the nodes of the base grid.
    pub fn line(&self, y: f64, grid: &RapidityGrid) -> Vec<C64> {
        let yc = y - self.center;
        let n = self.amps.len() as f64;
        let mut v: Vec<C64> = self.amps.iter().zip(&self.ks).map(|(a, k)| a * (-k * yc).exp()).collect();
        fft(&mut v, true);
        (0..self.base)
            .map(|j| {
                let x = grid.node(j);
                v[self.offset + j] / n + self.closed_part(C64::new(x, yc))
            })
            .collect()
    }
}

/// Solves Re v = data(x, upper) on the lines Im ζ = strip.1 (upper) and
/// Im ζ = strip.0 (lower).
///
/// A real-coefficient tail model is fitted by least squares on |x| > L_ext/2,
/// an antisymmetric bump absorbs the zero-frequency mismatch, and the decaying
/// remainder is split frequency by frequency.
pub fn solve_strip_dirichlet<F>(data: F, strip: (f64, f64), grid: &RapidityGrid, options: SolverOptions) -> Result<OuterSolution>
where
    F: Fn(f64, bool) -> f64,
{
    let (a, b) = strip;
    if !(a < b) || options.extend == 0 {
        return Err(HardyError::BadStrip(a, b));
    }
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let sigma = (1.0f64).min(PI / (4.0 * half));
    let base = grid.n_points;
    let n = options.extend * base;
    let h = grid.step();
    let l_ext = options.extend as f64 * grid.theta_max;
    let xs: Vec<f64> = (0..n).map(|j| -l_ext + (j as f64 + 0.5) * h).collect();
    let up: Vec<f64> = xs.iter().map(|&x| data(x, true)).collect();
    let lo: Vec<f64> = xs.iter().map(|&x| data(x, false)).collect();
    if up.iter().chain(&lo).any(|v| !v.is_finite()) {
        return Err(HardyError::OutOfDomain("non-finite boundary data".into()));
    }

    // tail fit
    let tails: Vec<usize> = (0..n).filter(|&j| xs[j].abs() > 0.5 * l_ext).collect();
    let ncol = basis(C64::new(0.0, 0.0), sigma, options.exponential_tails).len();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(2 * tails.len());
    let mut rhs: Vec<f64> = Vec::with_capacity(2 * tails.len());
    for &j in &tails {
        for (y, u) in [(half, up[j]), (-half, lo[j])] {
            rows.push(basis(C64::new(xs[j], y), sigma, options.exponential_tails).iter().map(|g| g.re).collect());
            rhs.push(u);
        }
    }
    // columns whose real part vanishes on both lines (e^{±τ} on a strip of width π)
    // are harmonic null directions and are left out
    let size: Vec<f64> = (0..ncol)
        .map(|c| {
            tails
                .iter()
                .flat_map(|&j| [half, -half].map(|y| basis(C64::new(xs[j], y), sigma, options.exponential_tails)[c].norm_sqr()))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let scale: Vec<f64> = (0..ncol).map(|c| rows.iter().map(|r| r[c] * r[c]).sum::<f64>().sqrt()).collect();
    let active: Vec<usize> = (0..ncol).filter(|&c| scale[c] > 1e-8 * size[c]).collect();
    let m = DMatrix::from_fn(rows.len(), active.len(), |r, c| rows[r][active[c]] / scale[active[c]]);
    let svd = m.svd(true, true);
    let smax = svd.singular_values.max();
    let sol = svd
        .solve(&DVector::from_vec(rhs), 1e-13 * smax)
        .map_err(|e| HardyError::OutOfDomain(format!("tail fit failed: {e}")))?;
    let mut tail = vec![0.0; ncol];
    for (p, &c) in active.iter().enumerate() {
        tail[c] = sol[p] / scale[c];
    }

    let fit = |x: f64, y: f64| -> f64 {
        basis(C64::new(x, y), sigma, options.exponential_tails).iter().zip(&tail).map(|(g, c)| g.re * c).sum()
    };
    let mut r_up: Vec<f64> = (0..n).map(|j| up[j] - fit(xs[j], half)).collect();
    let mut r_lo: Vec<f64> = (0..n).map(|j| lo[j] - fit(xs[j], -half)).collect();

    // zero-frequency balance through the bump i·tanh(στ)
    let bump_up: Vec<f64> = xs.iter().map(|&x| (i() * (C64::new(x, half) * sigma).tanh()).re).collect();
    let b_plus: f64 = bump_up.iter().sum();
    let bump = (r_up.iter().sum::<f64>() - r_lo.iter().sum::<f64>()) / (2.0 * b_plus);
    for j in 0..n {
        r_up[j] -= bump * bump_up[j];
        r_lo[j] += bump * bump_up[j];
    }

    let mut ru: Vec<C64> = r_up.iter().map(|&v| C64::new(v, 0.0)).collect();
    let mut rl: Vec<C64> = r_lo.iter().map(|&v| C64::new(v, 0.0)).collect();
    fft(&mut ru, false);
    fft(&mut rl, false);
    let ks = wavenumbers(n, h);
    let mut amps = vec![C64::new(0.0, 0.0); n];
    let mut max_condition: f64 = 1.0;
    for m in 0..n {
        if m == 0 {
            amps[m] = (ru[0] + rl[0]) * 0.5;
            continue;
        }
        if m == n / 2 {
            continue;
        }
        let s = ks[m] * half;
        let cond = 1.0 / s.abs().tanh();
        if cond > MAX_SPLIT_CONDITION {
            return Err(HardyError::SplitIllConditioned { k: ks[m], condition: cond });
        }
        max_condition = max_condition.max(cond);
        let denom = -(-4.0 * s.abs()).exp_m1();
        let num = rl[m] * (s - 2.0 * s.abs()).exp() - ru[m] * (-s - 2.0 * s.abs()).exp();
        amps[m] = num * (2.0 * s.signum() / denom);
    }
    let weights: Vec<f64> = amps.iter().zip(&ks).map(|(a, k)| a.norm() * (k.abs() * half).exp()).collect();
    let wmax = weights.iter().cloned().fold(0.0, f64::max);
    let sparse = (0..n)
        .filter(|&m| m != n / 2 && weights[m] > 1e-17 * wmax)
        .map(|m| (ks[m], amps[m] / n as f64))
        .collect();
    Ok(OuterSolution {
        strip,
        center,
        half,
        sigma,
        exponential_tails: options.exponential_tails,
        tail,
        bump,
        x0: xs[0],
        offset: (options.extend - 1) * base / 2,
        base,
        amps,
        ks,
        sparse,
        max_condition,
    })
}

/// Analytic function on a strip, with an optional log evaluator for inputs whose
/// modulus under- or overflows.
pub trait StripFunction: Sync {
    fn eval(&self, z: C64) -> C64;
    fn log_eval(&self, z: C64) -> C64 {
        self.eval(z).ln()
    }
}

impl<F: Fn(C64) -> C64 + Sync> StripFunction for F {
    fn eval(&self, z: C64) -> C64 {
        self(z)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorizationResult {
    pub strip: (f64, f64),
    pub blaschke_zeros: Vec<C64>,
    /// log|f| on the upper and lower boundary line at the grid nodes.
    pub outer_log_modulus_upper: Vec<f64>,
    pub outer_log_modulus_lower: Vec<f64>,
    /// Unimodular constant of the reconstruction c·B·f_out.
    pub constant: C64,
    /// sup |c·B·f_out / f − 1| over the interior test lattice.
    pub reconstruction_residual: f64,
    /// Relative spread of |f / (B·f_out)| inside the strip (0 without inner part).
    pub inner_evidence: f64,
    pub singular_inner_flag: bool,
    #[serde(skip)]
    pub outer: Option<OuterSolution>,
}

impl FactorizationResult {
    /// The outer factor e^{v(ζ)}.
    pub fn outer_at(&self, z: C64) -> Option<C64> {
        self.outer.as_ref().map(|o| o.eval(z).exp())
    }
}

/// Beurling factorization of a bounded analytic function on 𝕊_{a,b} into
/// constant × Blaschke × outer, with an evidence-based singular-inner flag.
pub fn factorize<F: StripFunction + ?Sized>(f: &F, strip: (f64, f64), grid: &RapidityGrid) -> Result<FactorizationResult> {
    let (a, b) = strip;
    if !(a < b) {
        return Err(HardyError::BadStrip(a, b));
    }
    let options = SolverOptions { extend: 2, exponential_tails: true };
    let data = |x: f64, upper: bool| f.log_eval(C64::new(x, if upper { b } else { a })).re;
    let outer = solve_strip_dirichlet(&data, strip, grid, options)?;

    let l = grid.theta_max;
    let delta = 1e-6 * (b - a);
    let rect = ComplexRect::new(-l, l, a + delta, b - delta)?;
    let reduced = |z: C64| (f.log_eval(z) - outer.eval(z)).exp();
    let zeros = analytic::locate_zeros(reduced, &rect, MAX_ZEROS)?;

    let mut ratios = Vec::new();
    for p in 0..41 {
        let x = -l + 2.0 * l * p as f64 / 40.0;
        for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let z = C64::new(x, a + q * (b - a));
            if zeros.iter().any(|z0| (z - z0).norm() < 0.05) {
                continue;
            }
            let bl = blaschke_point(&zeros, &[], strip, z)?;
            ratios.push((f.log_eval(z) - outer.eval(z)).exp() / bl);
        }
    }
    let mean: C64 = ratios.iter().sum::<C64>() / ratios.len() as f64;
    let constant = if mean.norm() > 0.0 { mean / mean.norm() } else { C64::new(1.0, 0.0) };
    let residual = ratios.iter().map(|q| (q / constant - 1.0).norm()).fold(0.0, f64::max);
    let (mn, mx) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(mn, mx), q| (mn.min(q.norm()), mx.max(q.norm())));
    let inner_evidence = if mx > 0.0 { 1.0 - mn / mx } else { 1.0 };

    let nodes = grid.nodes();
    Ok(FactorizationResult {
        strip,
        blaschke_zeros: zeros,
        outer_log_modulus_upper: nodes.iter().map(|&x| data(x, true)).collect(),
        outer_log_modulus_lower: nodes.iter().map(|&x| data(x, false)).collect(),
        constant,
        reconstruction_residual: residual,
        inner_evidence,
        singular_inner_flag: residual > 1e-4,
        outer: Some(outer),
    })
}
