//! Complex-analysis engine: adaptive Gauss-Kronrod quadrature along segments,
//! winding numbers by phase tracking, zero isolation in rectangles and residues.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("quadrature did not converge (estimate {value}, error {error:e})")]
    NonConvergent { value: C64, error: f64 },
    #[error("integrand returned a non-finite value at {0}")]
    NonFinite(C64),
    #[error("function vanishes on the contour near {0}")]
    OnBoundary(C64),
    #[error("more than {max} zeros in the rectangle (found {found})")]
    TooManyZeros { max: usize, found: i64 },
    #[error("zero on the rectangle boundary near {0}")]
    BoundaryZero(C64),
    #[error("contour estimate {contour} and limit estimate {limit} disagree")]
    Inconsistent { contour: C64, limit: C64 },
    #[error("invalid geometry: {0}")]
    Geometry(String),
}

pub type Result<T> = std::result::Result<T, AnalyticError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl ComplexRect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max) {
            return Err(AnalyticError::Geometry(format!(
                "degenerate rectangle [{re_min},{re_max}]x[{im_min},{im_max}]"
            )));
        }
        Ok(ComplexRect { re_min, re_max, im_min, im_max })
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    pub fn center(&self) -> C64 {
        C64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    /// Counter-clockwise boundary with `samples` points per side.
    pub fn boundary(&self, samples: usize) -> Contour {
        let a = C64::new(self.re_min, self.im_min);
        let b = C64::new(self.re_max, self.im_min);
        let c = C64::new(self.re_max, self.im_max);
        let d = C64::new(self.re_min, self.im_max);
        Contour {
            segments: vec![
                Segment { start: a, end: b, samples },
                Segment { start: b, end: c, samples },
                Segment { start: c, end: d, samples },
                Segment { start: d, end: a, samples },
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: C64,
    pub end: C64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub segments: Vec<Segment>,
}

impl Contour {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(AnalyticError::Geometry("empty contour".into()));
        }
        for s in &segments {
            if s.samples < 16 {
                return Err(AnalyticError::Geometry("fewer than 16 samples on a segment".into()));
            }
        }
        Ok(Contour { segments })
    }

    /// Polygon through `vertices`, closed back to the first one.
    pub fn polygon(vertices: &[C64], samples: usize) -> Result<Self> {
        let n = vertices.len();
        let segs = (0..n)
            .map(|k| Segment { start: vertices[k], end: vertices[(k + 1) % n], samples })
            .collect();
        Contour::new(segs)
    }

    /// Regular polygon approximation of a circle.
    pub fn circle(center: C64, radius: f64, sides: usize, samples: usize) -> Result<Self> {
        let v: Vec<C64> = (0..sides)
            .map(|k| center + C64::from_polar(radius, 2.0 * PI * k as f64 / sides as f64))
            .collect();
        Contour::polygon(&v, samples)
    }

    pub fn is_closed(&self) -> bool {
        let first = self.segments[0].start;
        let last = self.segments[self.segments.len() - 1].end;
        (first - last).norm() <= 1e-14 * (1.0 + first.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_refinements: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings { abs_tol: 1e-10, rel_tol: 1e-8, max_refinements: 20 }
    }
}

/// Value of an integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: C64,
    pub error: f64,
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Kronrod estimate, |Kronrod − Gauss| and the Kronrod estimate of ∫|f|.
fn gk15<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> Result<(C64, f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let eval = |x: f64| -> Result<C64> {
        let v = f(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(AnalyticError::NonFinite(C64::new(x, 0.0)))
        }
    };
    let fc = eval(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (lo, hi) = (eval(c - dx)?, eval(c + dx)?);
        let s = lo + hi;
        kron += s * WGK[j];
        abs += (lo.norm() + hi.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    Ok((kron * h, ((kron - gauss) * h).norm(), abs * h.abs()))
}

/// Adaptive G7K15 integral of a complex-valued function over a real interval.
pub fn integrate_real<F: Fn(f64) -> C64>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: C64::new(0.0, 0.0), error: 0.0 });
    }
    // panels: (a, b, value, error, depth, ∫|f|)
    let mut panels: Vec<(f64, f64, C64, f64, usize, f64)> = Vec::new();
    let (v, e, m) = gk15(&f, a, b)?;
    panels.push((a, b, v, e, 0, m));
    let max_panels = 1usize << 14;
    loop {
        let total: C64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        let mass: f64 = panels.iter().map(|p| p.5).sum();
        // rounding floor: cancellation cannot be resolved below a few ulps of ∫|f|
        let tol = settings.abs_tol.max(settings.rel_tol * total.norm()).max(64.0 * f64::EPSILON * mass);
        if err <= tol {
            return Ok(Integral { value: total, error: err });
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (pa, pb, _, _, depth, _) = panels[idx];
        if depth >= settings.max_refinements || panels.len() >= max_panels {
            return Err(AnalyticError::NonConvergent { value: total, error: err });
        }
        let mid = 0.5 * (pa + pb);
        let (v1, e1, m1) = gk15(&f, pa, mid)?;
        let (v2, e2, m2) = gk15(&f, mid, pb)?;
        panels[idx] = (pa, mid, v1, e1, depth + 1, m1);
        panels.push((mid, pb, v2, e2, depth + 1, m2));
    }
}

/// Line integral of `f` along the straight segment from `start` to `end`.
pub fn integrate_line<F: Fn(C64) -> C64>(
    f: F,
    start: C64,
    end: C64,
    settings: &QuadratureSettings,
) -> Result<Integral> {
    let d = end - start;
    let r = integrate_real(|t| f(start + d * t) * d, 0.0, 1.0, settings)?;
    Ok(r)
}

/// Integral of `f` over a closed contour, summing the segment integrals.
pub fn integrate_contour<F: Fn(C64) -> C64>(
    f: F,
    contour: &Contour,
    settings: &QuadratureSettings,
) -> Result<Integral> {
    let mut value = C64::new(0.0, 0.0);
    let mut error = 0.0;
    for s in &contour.segments {
        let r = integrate_line(&f, s.start, s.end, settings)?;
        value += r.value;
        error += r.error;
    }
    Ok(Integral { value, error })
}

const WINDING_THRESHOLD: f64 = 1e-12;
const MAX_HALVINGS: usize = 40;

fn checked<F: Fn(C64) -> C64>(f: &F, z: C64, floor: f64) -> Result<C64> {
    let v = f(z);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(AnalyticError::NonFinite(z));
    }
    if v.norm() < floor {
        return Err(AnalyticError::OnBoundary(z));
    }
    Ok(v)
}

fn phase_step(a: C64, b: C64) -> f64 {
    (b / a).arg()
}

/// Phase increment of `f` from `za` to `zb`, halving the step until every
/// consecutive increment is below π/2.
fn tracked_phase<F: Fn(C64) -> C64>(f: &F, za: C64, fa: C64, zb: C64, fb: C64, depth: usize) -> Result<f64> {
    let d = phase_step(fa, fb);
    if d.abs() < PI / 2.0 {
        return Ok(d);
    }
    if depth >= MAX_HALVINGS {
        return Err(AnalyticError::NonConvergent { value: zb, error: d.abs() });
    }
    let zm = 0.5 * (za + zb);
    let fm = checked(f, zm, local_floor(fa, fb))?;
    Ok(tracked_phase(f, za, fa, zm, fm, depth + 1)? + tracked_phase(f, zm, fm, zb, fb, depth + 1)?)
}

fn local_floor(a: C64, b: C64) -> f64 {
    (WINDING_THRESHOLD * a.norm().max(b.norm())).max(1e-300)
}

/// Total phase change of `f` along the contour, in radians. A sample counts as
/// vanishing when |f| is below 1e-12 times the larger modulus at its two
/// neighbouring samples.
pub fn phase_change<F: Fn(C64) -> C64>(f: &F, contour: &Contour) -> Result<f64> {
    let mut total = 0.0;
    for s in &contour.segments {
        let n = s.samples.max(16);
        let zs: Vec<C64> = (0..=n).map(|k| s.start + (s.end - s.start) * (k as f64 / n as f64)).collect();
        let vs: Vec<C64> = zs.iter().map(|&z| f(z)).collect();
        for (z, v) in zs.iter().zip(&vs) {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(AnalyticError::NonFinite(*z));
            }
        }
        for k in 0..=n {
            let lo = vs[k.saturating_sub(1)];
            let hi = vs[(k + 1).min(n)];
            if vs[k].norm() < local_floor(lo, hi) {
                return Err(AnalyticError::OnBoundary(zs[k]));
            }
        }
        for k in 0..n {
            total += tracked_phase(f, zs[k], vs[k], zs[k + 1], vs[k + 1], 0)?;
        }
    }
    Ok(total)
}

/// Zeros minus poles enclosed by a closed contour.
pub fn winding_number<F: Fn(C64) -> C64>(f: F, contour: &Contour) -> Result<i64> {
    let total = phase_change(&f, contour)?;
    Ok((total / (2.0 * PI)).round() as i64)
}

fn fd_derivative<F: Fn(C64) -> C64>(f: &F, z: C64) -> C64 {
    let h = 1e-6 * (1.0 + z.norm());
    (f(z + h) - f(z - h)) / (2.0 * h)
}

/// Newton polishing with multiplicity `m`. Returns the point and whether it
/// reached |f| < 1e-12 (or a stationary step) without leaving the cell.
fn polish<F: Fn(C64) -> C64>(f: &F, mut z: C64, m: usize, cell: &ComplexRect) -> (C64, bool) {
    let mut converged = false;
    for _ in 0..60 {
        let v = f(z);
        if v.norm() < 1e-12 {
            converged = true;
        }
        if v.norm() < 1e-15 {
            break;
        }
        let d = fd_derivative(f, z);
        if d.norm() == 0.0 || !d.re.is_finite() {
            break;
        }
        let step = v / d * m as f64;
        let next = z - step;
        if !cell.contains(next) || !(f(next).norm() < v.norm()) {
            break;
        }
        z = next;
        if step.norm() < 1e-14 * (1.0 + z.norm()) {
            converged = true;
            break;
        }
    }
    (z, converged)
}

/// Centroid of the zeros enclosed by a small circle, from the first moment of f'/f.
fn zero_centroid<F: Fn(C64) -> C64>(f: &F, center: C64, radius: f64, m: usize) -> C64 {
    let n = 128;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        let w = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        let z = center + w * radius;
        let ratio = fd_derivative(f, z) / f(z);
        acc += (z - center) * ratio * w * radius;
    }
    center + acc / (n as f64 * m as f64)
}

const SPLIT_OFFSETS: [f64; 4] = [0.0137, -0.0291, 0.0443, -0.0619];

fn split<F: Fn(C64) -> C64>(
    f: &F,
    cell: ComplexRect,
    count: i64,
    samples: usize,
    out: &mut Vec<C64>,
) -> Result<()> {
    if count <= 0 {
        return Ok(());
    }
    if count == 1 {
        let (z, ok) = polish(f, cell.center(), 1, &cell);
        if ok || cell.diameter() < 1e-9 {
            out.push(z);
            return Ok(());
        }
    }
    if count > 1 && cell.diameter() < 1e-4 {
        let m = count as usize;
        let c = zero_centroid(f, cell.center(), cell.diameter(), m);
        let grown = ComplexRect {
            re_min: cell.re_min - cell.diameter(),
            re_max: cell.re_max + cell.diameter(),
            im_min: cell.im_min - cell.diameter(),
            im_max: cell.im_max + cell.diameter(),
        };
        let (z, _) = polish(f, c, m, &grown);
        for _ in 0..m {
            out.push(z);
        }
        return Ok(());
    }
    let mut last_err = None;
    for off in SPLIT_OFFSETS {
        let xm = cell.re_min + (0.5 + off) * (cell.re_max - cell.re_min);
        let ym = cell.im_min + (0.5 + off) * (cell.im_max - cell.im_min);
        let quads = [
            ComplexRect { re_min: cell.re_min, re_max: xm, im_min: cell.im_min, im_max: ym },
            ComplexRect { re_min: xm, re_max: cell.re_max, im_min: cell.im_min, im_max: ym },
            ComplexRect { re_min: cell.re_min, re_max: xm, im_min: ym, im_max: cell.im_max },
            ComplexRect { re_min: xm, re_max: cell.re_max, im_min: ym, im_max: cell.im_max },
        ];
        let counts: Result<Vec<i64>> =
            quads.iter().map(|q| winding_number(f, &q.boundary(samples))).collect();
        match counts {
            Ok(cs) => {
                if cs.iter().sum::<i64>() != count {
                    last_err = Some(AnalyticError::NonConvergent {
                        value: cell.center(),
                        error: (cs.iter().sum::<i64>() - count) as f64,
                    });
                    continue;
                }
                for (q, c) in quads.iter().zip(cs) {
                    split(f, *q, c, samples, out)?;
                }
                return Ok(());
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(AnalyticError::NonConvergent { value: cell.center(), error: 0.0 }))
}

/// Zeros of an analytic `f` inside `rect` by recursive quadrisection and Newton polishing.
/// Multiple zeros are repeated according to multiplicity.
pub fn locate_zeros<F: Fn(C64) -> C64>(f: F, rect: &ComplexRect, max_count: usize) -> Result<Vec<C64>> {
    let samples = 64;
    let count = match winding_number(&f, &rect.boundary(samples)) {
        Ok(c) => c,
        Err(AnalyticError::OnBoundary(z)) => return Err(AnalyticError::BoundaryZero(z)),
        Err(e) => return Err(e),
    };
    if count > max_count as i64 {
        return Err(AnalyticError::TooManyZeros { max: max_count, found: count });
    }
    let mut out = Vec::new();
    split(&f, *rect, count, samples, &mut out)?;
    out.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    Ok(out)
}

/// Contour and direction-limit estimates of a residue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residue {
    pub value: C64,
    pub contour: C64,
    pub limit: C64,
}

fn direction_average<F: Fn(C64) -> C64>(f: &F, pole: C64, delta: f64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..8 {
        let w = C64::from_polar(delta, PI * (k as f64 + 0.5) / 4.0);
        acc += w * f(pole + w);
    }
    acc / 8.0
}

fn direction_average_abs<F: Fn(C64) -> C64>(f: &F, pole: C64, delta: f64) -> f64 {
    (0..8)
        .map(|k| {
            let w = C64::from_polar(delta, PI * (k as f64 + 0.5) / 4.0);
            (w * f(pole + w)).norm()
        })
        .sum::<f64>()
        / 8.0
}

/// Residue of `f` at `pole`: (1/2πi)∮ f over the circle of the given radius,
/// cross-checked against the limit (ζ − pole) f(ζ) along eight directions.
pub fn residue_at<F: Fn(C64) -> C64>(f: F, pole: C64, radius: f64) -> Result<Residue> {
    let settings = QuadratureSettings { abs_tol: 1e-14, rel_tol: 1e-12, max_refinements: 30 };
    let circle = integrate_real(
        |phi| {
            let w = C64::from_polar(radius, phi);
            f(pole + w) * w
        },
        0.0,
        2.0 * PI,
        &settings,
    )?;
    let contour = circle.value / (2.0 * PI);
    // the eight-direction mean cancels every Laurent term except powers of δ^8;
    // one Richardson step removes the leading one
    let d = 0.5 * radius;
    let a1 = direction_average(&f, pole, d);
    let a2 = direction_average(&f, pole, 0.5 * d);
    let limit = (a2 * 256.0 - a1) / 255.0;
    let rel_tol = QuadratureSettings::default().rel_tol;
    let scale = contour.norm().max(limit.norm());
    let magnitude = direction_average_abs(&f, pole, radius);
    if (contour - limit).norm() > (10.0 * rel_tol * scale).max(1e-10 * magnitude) {
        return Err(AnalyticError::Inconsistent { contour, limit });
    }
    Ok(Residue { value: contour, contour, limit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_cauchy() {
        let s = QuadratureSettings::default();
        let one = integrate_line(|_| C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0), &s).unwrap();
        assert!((one.value - 1.0).norm() < 1e-14);
        let circ = integrate_real(
            |p| {
                let z = C64::from_polar(1.0, p);
                z.inv() * z * C64::i()
            },
            0.0,
            2.0 * PI,
            &s,
        )
        .unwrap();
        assert!((circ.value - C64::new(0.0, 2.0 * PI)).norm() < 1e-12);
    }

    #[test]
    fn nonfinite_reported() {
        let s = QuadratureSettings::default();
        let r = integrate_real(|x| C64::new(1.0 / (x - 0.5), 0.0), 0.0, 1.0, &s);
        assert!(matches!(r, Err(AnalyticError::NonFinite(_)) | Err(AnalyticError::NonConvergent { .. })));
    }

    #[test]
    fn winding_simple() {
        let c = Contour::circle(C64::new(0.0, 0.0), 1.0, 64, 16).unwrap();
        assert!(c.is_closed());
        assert_eq!(winding_number(|z| z, &c).unwrap(), 1);
        assert_eq!(winding_number(|z| z.inv(), &c).unwrap(), -1);
        assert_eq!(winding_number(|z| z.powu(5), &c).unwrap(), 5);
    }

    #[test]
    fn on_boundary() {
        let rect = ComplexRect::new(-1.0, 1.0, 0.0, 1.0).unwrap();
        let r = winding_number(|z| z, &rect.boundary(16));
        assert!(matches!(r, Err(AnalyticError::OnBoundary(_))));
    }

    #[test]
    fn quadratic_roots() {
        let rect = ComplexRect::new(-2.0, 2.0, -1.0, 1.0).unwrap();
        let z = locate_zeros(|z| z * z - 1.0, &rect, 4).unwrap();
        assert_eq!(z.len(), 2);
        assert!((z[0] + 1.0).norm() < 1e-12 && (z[1] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn double_root() {
        let rect = ComplexRect::new(-1.0, 1.3, -0.7, 1.1).unwrap();
        let r = C64::new(0.2, 0.3);
        let z = locate_zeros(|z| (z - r) * (z - r) * (z + 0.5), &rect, 4).unwrap();
        assert_eq!(z.len(), 3);
        assert!((z[1] - r).norm() < 1e-9 && (z[2] - r).norm() < 1e-9);
    }

    #[test]
    fn too_many() {
        let rect = ComplexRect::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        let r = locate_zeros(|z| z.powu(3) - 1.0, &rect, 2);
        assert!(matches!(r, Err(AnalyticError::TooManyZeros { found: 3, .. })));
    }

    #[test]
    fn residues() {
        let i = C64::i();
        let r = residue_at(|z| (z - i).inv(), i, 1e-2).unwrap();
        assert!((r.value - 1.0).norm() < 1e-12);
        let r2 = residue_at(|z| 3.0 * ((z - i) * (z - i)).inv(), i, 1e-2).unwrap();
        assert!(r2.value.norm() < 1e-10);
    }
}
