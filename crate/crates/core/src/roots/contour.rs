use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use super::{fd_step, ComplexRoot, Interval};
use crate::error::{Error, Result};
use crate::stargraph::{secular_determinant, StarGraphSpec};

/// Axis-aligned box in the complex `k` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub re: Interval,
    pub im: Interval,
}

impl Rect {
    pub fn new(re: Interval, im: Interval) -> Self {
        Self { re, im }
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.re.mid(), self.im.mid())
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re.lo - slack && z.re <= self.re.hi + slack && z.im >= self.im.lo - slack && z.im <= self.im.hi + slack
    }

    fn diameter(&self) -> f64 {
        self.re.width().hypot(self.im.width())
    }

    /// Grows both half-widths by `factor` about the centre, keeping the
    /// lower edge above `im_floor`.
    fn dilate(&self, factor: f64, im_floor: f64) -> Self {
        let grow = |i: Interval| {
            let half = 0.5 * i.width() * factor;
            Interval { lo: i.mid() - half, hi: i.mid() + half }
        };
        let mut im = grow(self.im);
        im.lo = im.lo.max(im_floor);
        Self { re: grow(self.re), im }
    }

    /// Splits across the longer side at fraction `t`.
    fn split(&self, t: f64) -> (Rect, Rect) {
        if self.re.width() >= self.im.width() {
            let cut = self.re.lo + t * self.re.width();
            (
                Rect { re: Interval { lo: self.re.lo, hi: cut }, im: self.im },
                Rect { re: Interval { lo: cut, hi: self.re.hi }, im: self.im },
            )
        } else {
            let cut = self.im.lo + t * self.im.width();
            (
                Rect { re: self.re, im: Interval { lo: self.im.lo, hi: cut } },
                Rect { re: self.re, im: Interval { lo: cut, hi: self.im.hi } },
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourOptions {
    /// Initial uniform segments per edge before adaptive refinement.
    pub edge_segments: usize,
    /// Segments shorter than this fraction of the box diameter mean the
    /// contour runs through a zero.
    pub min_segment: f64,
    /// Largest accepted `|N - round(N)|`.
    pub integer_tol: f64,
    pub max_depth: usize,
    pub max_dilations: usize,
    pub newton_max_iter: usize,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            edge_segments: 64,
            min_segment: 1e-12,
            integer_tol: 0.05,
            max_depth: 40,
            max_dilations: 5,
            newton_max_iter: 80,
        }
    }
}

fn det(spec: &StarGraphSpec, k: Complex64) -> Result<Complex64> {
    secular_determinant(spec, k)
}

/// Accumulated change of `arg det M` along the straight segment `z0 -> z1`.
fn edge_phase(spec: &StarGraphSpec, z0: Complex64, z1: Complex64, min_len: f64, segments: usize) -> Result<f64> {
    let at = |t: f64| z0 + (z1 - z0) * t;
    let eval = |t: f64| -> Result<Complex64> {
        let v = det(spec, at(t))?;
        if v.norm() == 0.0 || !v.norm().is_finite() {
            return Err(Error::BoundaryRoot(format!("{}", at(t))));
        }
        Ok(v)
    };
    let length = (z1 - z0).norm();
    let mut total = 0.0;
    let mut stack = Vec::new();
    let mut prev = eval(0.0)?;
    for s in 1..=segments {
        let t1 = s as f64 / segments as f64;
        let v1 = eval(t1)?;
        stack.push(((s - 1) as f64 / segments as f64, prev, t1, v1));
        prev = v1;
    }
    while let Some((t0, v0, t1, v1)) = stack.pop() {
        let dphi = (v1 / v0).arg();
        if dphi.abs() < FRAC_PI_2 {
            total += dphi;
            continue;
        }
        if (t1 - t0) * length < min_len {
            return Err(Error::BoundaryRoot(format!("{}", at(0.5 * (t0 + t1)))));
        }
        let tm = 0.5 * (t0 + t1);
        let vm = eval(tm)?;
        stack.push((t0, v0, tm, vm));
        stack.push((tm, vm, t1, v1));
    }
    Ok(total)
}

/// `(1 / 2 pi i) \oint d log det M` around `rect`, counterclockwise, before
/// rounding.
pub fn winding_number(spec: &StarGraphSpec, rect: Rect, opts: &ContourOptions) -> Result<f64> {
    let min_len = opts.min_segment * rect.diameter();
    let corners = [
        Complex64::new(rect.re.lo, rect.im.lo),
        Complex64::new(rect.re.hi, rect.im.lo),
        Complex64::new(rect.re.hi, rect.im.hi),
        Complex64::new(rect.re.lo, rect.im.hi),
    ];
    let mut total = 0.0;
    for i in 0..4 {
        total += edge_phase(spec, corners[i], corners[(i + 1) % 4], min_len, opts.edge_segments)?;
    }
    Ok(total / (2.0 * PI))
}

fn integer_winding(spec: &StarGraphSpec, rect: Rect, opts: &ContourOptions) -> Result<usize> {
    let w = winding_number(spec, rect, opts)?;
    let n = w.round();
    if (w - n).abs() > opts.integer_tol || n < 0.0 {
        return Err(Error::ContourResolution { winding: w });
    }
    Ok(n as usize)
}

/// Winding number of `rect`, dilating by 1% (up to `max_dilations` times)
/// when a root sits on the boundary.
fn robust_winding(spec: &StarGraphSpec, rect: Rect, opts: &ContourOptions) -> Result<(Rect, usize)> {
    let floor = 0.5 * rect.im.lo;
    let mut r = rect;
    let mut last = None;
    for _ in 0..=opts.max_dilations {
        match integer_winding(spec, r, opts) {
            Ok(n) => return Ok((r, n)),
            Err(e @ Error::BoundaryRoot(_)) => {
                last = Some(e);
                r = r.dilate(1.01, floor);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::BoundaryRoot("box".into())))
}

fn check_upper_half(rect: &Rect) -> Result<()> {
    if rect.im.lo <= 0.0 {
        return Err(Error::Argument(format!(
            "complex search box must lie in Im k > 0, got lower edge {}",
            rect.im.lo
        )));
    }
    Ok(())
}

/// Number of zeros of `det M` inside `rect` (argument principle).
pub fn count_complex_roots(spec: &StarGraphSpec, rect: Rect, opts: &ContourOptions) -> Result<usize> {
    check_upper_half(&rect)?;
    Ok(robust_winding(spec, rect, opts)?.1)
}

fn newton(spec: &StarGraphSpec, start: Complex64, max_iter: usize) -> Result<(Complex64, bool)> {
    let mut z = start;
    for _ in 0..max_iter {
        let d = det(spec, z)?;
        if d.norm() == 0.0 {
            return Ok((z, true));
        }
        let h = fd_step(z.norm());
        let dp = (det(spec, z + h)? - det(spec, z - h)?) / (2.0 * h);
        if dp.norm() == 0.0 || !dp.norm().is_finite() {
            return Ok((z, false));
        }
        let step = d / dp;
        z -= step;
        if !z.norm().is_finite() {
            return Ok((start, false));
        }
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            return Ok((z, true));
        }
    }
    Ok((z, false))
}

fn isolate(
    spec: &StarGraphSpec,
    rect: Rect,
    count: usize,
    depth: usize,
    opts: &ContourOptions,
    out: &mut Vec<ComplexRoot>,
) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    let slack = 1e-9 * rect.diameter();
    if count == 1 || depth >= opts.max_depth {
        let (z, converged) = newton(spec, rect.center(), opts.newton_max_iter)?;
        if converged && rect.contains(z, slack) {
            out.push(ComplexRoot { k: z, residual: det(spec, z)?.norm(), multiplicity: count });
            return Ok(());
        }
        if depth >= opts.max_depth {
            let w = winding_number(spec, rect, opts).unwrap_or(f64::NAN);
            return Err(Error::ContourResolution { winding: w });
        }
    }
    for t in [0.5, 0.4637, 0.5371, 0.4219, 0.5813] {
        let (a, b) = rect.split(t);
        let (na, nb) = match (integer_winding(spec, a, opts), integer_winding(spec, b, opts)) {
            (Ok(na), Ok(nb)) => (na, nb),
            (Err(Error::BoundaryRoot(_)), _) | (_, Err(Error::BoundaryRoot(_))) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        if na + nb != count {
            continue;
        }
        isolate(spec, a, na, depth + 1, opts, out)?;
        isolate(spec, b, nb, depth + 1, opts, out)?;
        return Ok(());
    }
    Err(Error::ContourResolution { winding: count as f64 })
}

/// Zeros of the secular determinant inside `rect` (which must lie in the
/// upper half plane), each refined by Newton and reported once.
pub fn locate_complex_roots(spec: &StarGraphSpec, rect: Rect, opts: &ContourOptions) -> Result<Vec<ComplexRoot>> {
    check_upper_half(&rect)?;
    let (rect, count) = robust_winding(spec, rect, opts)?;
    let mut out = Vec::with_capacity(count);
    isolate(spec, rect, count, 0, opts, &mut out)?;
    out.sort_by(|a, b| a.k.re.total_cmp(&b.k.re).then(a.k.im.total_cmp(&b.k.im)));
    Ok(out)
}
