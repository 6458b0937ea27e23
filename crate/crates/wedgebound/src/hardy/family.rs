//! Admissible one-particle functions and the unimodular symbols ξ₀, η₀.

use super::{solve_strip_dirichlet, HardyError, OuterSolution, Result, SolverOptions};
use crate::smatrix::{BlaschkeFactor, RapidityGrid};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    WedgeExpSech,
    Gaussian,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// ξ̲ on 𝕊_{0,π}
    Left,
    /// η̲ on 𝕊_{−π,0}
    Right,
}

fn i() -> C64 {
    C64::new(0.0, 1.0)
}

/// p(ζ)·a with m = 1 and the Minkowski product a·b = a₀b₀ − a₁b₁.
pub fn p_dot(z: C64, a: [f64; 2]) -> C64 {
    z.cosh() * a[0] - z.sinh() * a[1]
}

fn log_cosh(w: C64) -> C64 {
    let w = if w.re < 0.0 { -w } else { w };
    w + (1.0 + (-2.0 * w).exp()).ln() - std::f64::consts::LN_2
}

/// e^{ip(ζ)·a} × profile × inserted zero pairs. The profile is 1/cosh(β(ζ ∓ iπ/2))
/// for `WedgeExpSech` and `Custom`, exp(−(ζ ∓ iπ/2 − μ)²/2σ²) for `Gaussian`
/// (upper sign on the left side).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticFamilyMember {
    pub kind: FamilyKind,
    pub side: Side,
    pub a: [f64; 2],
    pub beta: f64,
    pub mu: f64,
    pub sigma: f64,
    /// One zero per inserted pair; the partner is conj(z) + iπ (left) or conj(z) − iπ (right).
    pub zeros: Vec<C64>,
}

fn in_wedge(side: Side, a: [f64; 2], closed: bool) -> bool {
    let (s, t) = match side {
        Side::Left => (-a[1], a[0].abs()),
        Side::Right => (a[1], a[0].abs()),
    };
    if closed {
        s >= t
    } else {
        s > t
    }
}

impl AnalyticFamilyMember {
    pub fn wedge_exp_sech(side: Side, a: [f64; 2], beta: f64) -> Result<Self> {
        Self::custom(side, a, beta, Vec::new()).map(|mut m| {
            m.kind = FamilyKind::WedgeExpSech;
            m
        })
    }

    pub fn gaussian(side: Side, mu: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !mu.is_finite() {
            return Err(HardyError::BadMember(format!("gaussian needs sigma > 0 (got {sigma})")));
        }
        Ok(AnalyticFamilyMember { kind: FamilyKind::Gaussian, side, a: [0.0, 0.0], beta: 0.0, mu, sigma, zeros: Vec::new() })
    }

    pub fn custom(side: Side, a: [f64; 2], beta: f64, zeros: Vec<C64>) -> Result<Self> {
        if !in_wedge(side, a, false) {
            return Err(HardyError::BadMember(format!("a = {a:?} is not in the {side:?} wedge")));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(HardyError::BadMember(format!("beta = {beta} outside (0, 1)")));
        }
        for z in &zeros {
            let ok = match side {
                Side::Left => z.im > 0.0 && z.im < PI,
                Side::Right => z.im < 0.0 && z.im > -PI,
            };
            if !ok {
                return Err(HardyError::BadZero(*z));
            }
        }
        Ok(AnalyticFamilyMember { kind: FamilyKind::Custom, side, a, beta, mu: 0.0, sigma: 1.0, zeros })
    }

    /// The strip carrying the member.
    pub fn strip(&self) -> (f64, f64) {
        match self.side {
            Side::Left => (0.0, PI),
            Side::Right => (-PI, 0.0),
        }
    }

    /// Image under J₁: ψ ↦ conj ψ(conj ·), which swaps the sides.
    pub fn mirror(&self) -> Self {
        let mut m = self.clone();
        m.side = match self.side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        m.a = [-self.a[0], -self.a[1]];
        m.zeros = self.zeros.iter().map(|z| z.conj()).collect();
        m
    }

    /// Member whose square is e^{ip·t}ξ, i.e. U₁(t, 0) applied to ξ = ξ̲².
    pub fn translate(&self, t: [f64; 2]) -> Self {
        let mut m = self.clone();
        m.a = [self.a[0] + 0.5 * t[0], self.a[1] + 0.5 * t[1]];
        m
    }

    fn left_rest_log(&self, z: C64) -> C64 {
        let mut v = match self.kind {
            FamilyKind::Gaussian => {
                let w = z - i() * (PI / 2.0) - self.mu;
                -w * w / (2.0 * self.sigma * self.sigma)
            }
            _ => -log_cosh((z - i() * (PI / 2.0)) * self.beta),
        };
        for z0 in &self.zeros {
            let partner = z0.conj() + i() * PI;
            v += BlaschkeFactor::new(*z0).eval(z).ln() + BlaschkeFactor::new(partner).eval(z).ln();
        }
        v
    }

    /// log of the non-exponential part: ξ̲ = e^{ip·a}·e^{rest_log}.
    pub fn rest_log(&self, z: C64) -> C64 {
        match self.side {
            Side::Left => self.left_rest_log(z),
            Side::Right => self.mirror().left_rest_log(z.conj()).conj(),
        }
    }

    /// log ξ̲(ζ).
    pub fn under_log(&self, z: C64) -> C64 {
        i() * p_dot(z, self.a) + self.rest_log(z)
    }

    /// ξ̲(ζ).
    pub fn under(&self, z: C64) -> C64 {
        self.under_log(z).exp()
    }

    /// ξ = ξ̲².
    pub fn xi(&self, z: C64) -> C64 {
        (self.under_log(z) * 2.0).exp()
    }

    /// All zeros of ξ̲ in its strip.
    pub fn all_zeros(&self) -> Vec<C64> {
        let shift = match self.side {
            Side::Left => i() * PI,
            Side::Right => -i() * PI,
        };
        self.zeros.iter().flat_map(|z| [*z, z.conj() + shift]).collect()
    }

    /// max |ξ̲(θ ± iπ) − conj ξ̲(θ)| over the grid nodes (+ on the left side).
    pub fn reality_deviation(&self, grid: &RapidityGrid) -> f64 {
        let shift = match self.side {
            Side::Left => PI,
            Side::Right => -PI,
        };
        grid.nodes()
            .into_iter()
            .map(|x| (self.under(C64::new(x, shift)) - self.under(C64::new(x, 0.0)).conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// The symbol ξ₀ on 𝕊_{π/3,2π/3} (left) or η₀ on 𝕊_{−2π/3,−π/3} (right).
///
/// On the left ξ₀ = e₀ · √c · (ξ̲ without its exponential) · e^{v}, with
/// e₀(ζ) = exp(2i p(ζ + πi/3)·a) and v the harmonic splitting of
/// ∓(log √c + log|ξ̲(θ + 2πi/3)|). The right symbol is η₀(ζ) = conj ξ₀(conj ζ) for
/// the mirrored member.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Symbol {
    pub member: AnalyticFamilyMember,
    /// √(2π|R|)
    pub prefactor: f64,
    /// Zeros of the symbol in its strip.
    pub blaschke_zeros: Vec<C64>,
    pub grid: RapidityGrid,
    left: AnalyticFamilyMember,
    split: OuterSolution,
}

pub fn build_symbol(member: &AnalyticFamilyMember, prefactor: f64, grid: &RapidityGrid) -> Result<Symbol> {
    if !(prefactor > 0.0) {
        return Err(HardyError::BadMember(format!("prefactor {prefactor} must be positive")));
    }
    let left = match member.side {
        Side::Left => member.clone(),
        Side::Right => member.mirror(),
    };
    let half_log_c = 0.5 * prefactor.ln();
    let data = |x: f64, upper: bool| {
        let u = half_log_c + left.rest_log(C64::new(x, 2.0 * PI / 3.0)).re;
        if upper {
            -u
        } else {
            u
        }
    };
    let split = solve_strip_dirichlet(data, (PI / 3.0, 2.0 * PI / 3.0), grid, SolverOptions::default())?;
    let inner: Vec<C64> =
        left.all_zeros().into_iter().filter(|z| z.im > PI / 3.0 && z.im < 2.0 * PI / 3.0).collect();
    let blaschke_zeros = match member.side {
        Side::Left => inner,
        Side::Right => inner.iter().map(|z| z.conj()).collect(),
    };
    Ok(Symbol { member: member.clone(), prefactor, blaschke_zeros, grid: *grid, left, split })
}

impl Symbol {
    fn closed_log(&self, z: C64) -> C64 {
        i() * p_dot(z + i() * (PI / 3.0), self.left.a) * 2.0 + 0.5 * self.prefactor.ln() + self.left.rest_log(z)
    }

    fn left_eval(&self, z: C64) -> C64 {
        (self.closed_log(z) + self.split.eval(z)).exp()
    }

    fn left_line(&self, y: f64) -> Vec<C64> {
        let v = self.split.line(y, &self.grid);
        self.grid
            .nodes()
            .into_iter()
            .zip(v)
            .map(|(x, vx)| (self.closed_log(C64::new(x, y)) + vx).exp())
            .collect()
    }

    /// ξ₀(ζ) or η₀(ζ).
    pub fn eval(&self, z: C64) -> C64 {
        match self.member.side {
            Side::Left => self.left_eval(z),
            Side::Right => self.left_eval(z.conj()).conj(),
        }
    }

    /// Values at x + iy on the grid nodes.
    pub fn line(&self, y: f64) -> Vec<C64> {
        match self.member.side {
            Side::Left => self.left_line(y),
            Side::Right => self.left_line(-y).into_iter().map(|v| v.conj()).collect(),
        }
    }

    fn lines(&self) -> (f64, f64) {
        match self.member.side {
            Side::Left => (2.0 * PI / 3.0, PI / 3.0),
            Side::Right => (-2.0 * PI / 3.0, -PI / 3.0),
        }
    }

    /// Boundary values on the unimodular line, ℝ + 2πi/3 (left) or ℝ − 2πi/3 (right).
    pub fn unimodular_line(&self) -> Vec<C64> {
        self.line(self.lines().0)
    }

    /// max | |ξ₀| − 1 | on the unimodular line.
    pub fn unimodularity_deviation(&self) -> f64 {
        self.unimodular_line().iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// sup |ξ₀(θ ± πi/3)·conj ξ₀(θ ± 2πi/3) − √(2π|R|)·ξ(θ ± πi/3)| over the grid.
    pub fn consistency_residual(&self) -> f64 {
        let (far, near) = self.lines();
        let top = self.line(far);
        let bottom = self.line(near);
        self.grid
            .nodes()
            .into_iter()
            .enumerate()
            .map(|(j, x)| {
                let target = self.member.xi(C64::new(x, near)) * self.prefactor;
                (bottom[j] * top[j].conj() - target).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_condition(&self) -> f64 {
        self.split.max_condition
    }
}
