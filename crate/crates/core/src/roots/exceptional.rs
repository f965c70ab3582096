use serde::Serialize;

use super::real::real_secular;
use super::{count_real_roots, fd_step, scan_real_roots, Interval, ScanOptions};
use crate::error::{Error, Result};
use crate::stargraph::StarGraphSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpMethod {
    /// Root-count bisection followed by Newton on `(F, dF/dk)`.
    BisectionNewton,
    /// Newton failed; pure root-count bisection. Lower confidence.
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExceptionalPoint {
    pub alpha_star: f64,
    pub k_star: f64,
    /// Final root-count bracket in `alpha`.
    pub bracket: Interval,
    /// `|F(k*, alpha*)|`
    pub residual_f: f64,
    /// `|dF/dk (k*, alpha*)|`
    pub residual_df: f64,
    /// Real-root counts below and above the bracket.
    pub counts: (usize, usize),
    pub method: EpMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpOptions {
    pub scan: ScanOptions,
    /// Phase-one bisection width in `alpha`.
    pub coarse_tol: f64,
    /// Bisection width used when Newton has to be abandoned.
    pub fallback_tol: f64,
    pub newton_max_iter: usize,
    /// Acceptance on `|F|`.
    pub f_tol: f64,
    /// Acceptance on `|dF/dk|`.
    pub df_tol: f64,
}

impl Default for EpOptions {
    fn default() -> Self {
        Self {
            scan: ScanOptions::default(),
            coarse_tol: 1e-4,
            fallback_tol: 1e-9,
            newton_max_iter: 60,
            f_tol: 1e-8,
            df_tol: 1e-6,
        }
    }
}

fn secular_at(base: &StarGraphSpec, k: f64, alpha: f64) -> Result<f64> {
    let spec = base.with_alpha(alpha)?;
    real_secular(&spec, k).ok_or_else(|| Error::Domain(format!("pole of the secular function at k = {k}")))
}

fn dsecular_dk(base: &StarGraphSpec, k: f64, alpha: f64, h: f64) -> Result<f64> {
    Ok((secular_at(base, k + h, alpha)? - secular_at(base, k - h, alpha)?) / (2.0 * h))
}

/// Midpoint of the two roots present on the richer side of the bracket but
/// missing on the other.
fn merging_pair(more: &[f64], less: &[f64]) -> Option<(f64, f64)> {
    let mut left: Vec<f64> = more.to_vec();
    for r in less {
        let idx = left
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - r).abs().total_cmp(&(b.1 - r).abs()))?
            .0;
        left.remove(idx);
    }
    match left.as_slice() {
        [a, b] => Some((*a, *b)),
        _ => left
            .windows(2)
            .min_by(|x, y| (x[1] - x[0]).total_cmp(&(y[1] - y[0])))
            .map(|w| (w[0], w[1])),
    }
}

/// Solves `F = dF/dk = 0` in `(k, alpha)` by Newton with a
/// finite-difference Jacobian.
fn newton_2d(base: &StarGraphSpec, k0: f64, a0: f64, opts: &EpOptions) -> Result<(f64, f64)> {
    let (mut k, mut a) = (k0, a0);
    for _ in 0..opts.newton_max_iter {
        let h = fd_step(k);
        let f = secular_at(base, k, a)?;
        let fk = dsecular_dk(base, k, a, h)?;
        // coarser step for the second derivatives: nesting two 1e-6
        // differences leaves only ~4 good digits
        let dk = 1e-4 * k.abs().max(1.0);
        let da = 1e-4 * a.abs().max(1.0);
        let ea = fd_step(a);
        let f_a = (secular_at(base, k, a + ea)? - secular_at(base, k, a - ea)?) / (2.0 * ea);
        let fk_k = (dsecular_dk(base, k + dk, a, h)? - dsecular_dk(base, k - dk, a, h)?) / (2.0 * dk);
        let fk_a = (dsecular_dk(base, k, a + da, h)? - dsecular_dk(base, k, a - da, h)?) / (2.0 * da);
        let det = fk * fk_a - f_a * fk_k;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Domain("singular Jacobian in exceptional-point Newton".into()));
        }
        // [fk f_a; fk_k fk_a] [dk; da] = -[f; fk]
        let step_k = -(f * fk_a - f_a * fk) / det;
        let step_a = -(fk * fk - f * fk_k) / det;
        k += step_k;
        a += step_a;
        if !(k.is_finite() && a.is_finite()) || a < 0.0 {
            return Err(Error::Domain("exceptional-point Newton diverged".into()));
        }
        if step_k.abs() <= 1e-14 * k.abs().max(1.0) && step_a.abs() <= 1e-14 * a.abs().max(1.0) {
            break;
        }
    }
    Ok((k, a))
}

fn residuals(base: &StarGraphSpec, k: f64, a: f64) -> Result<(f64, f64)> {
    Ok((
        secular_at(base, k, a)?.abs(),
        dsecular_dk(base, k, a, fd_step(k))?.abs(),
    ))
}

/// Coupling `alpha*` at which two real roots in `window` merge, and the
/// merger momentum `k*`. The coupling stored in `base` is ignored.
pub fn find_exceptional_point(
    base: &StarGraphSpec,
    alpha_bracket: Interval,
    window: Interval,
    opts: &EpOptions,
) -> Result<ExceptionalPoint> {
    let count = |alpha: f64| count_real_roots(&base.with_alpha(alpha)?, window, &opts.scan);
    let (mut lo, mut hi) = (alpha_bracket.lo, alpha_bracket.hi);
    let (count_lo, count_hi) = (count(lo)?, count(hi)?);
    if count_lo == count_hi {
        return Err(Error::NoTransition { alpha_lo: lo, alpha_hi: hi, count_lo, count_hi });
    }
    if count_lo.abs_diff(count_hi) != 2 {
        return Err(Error::Argument(format!(
            "alpha bracket spans {count_lo} -> {count_hi} real roots; narrow it to a single pair merger"
        )));
    }

    let bisect_to = |mut lo: f64, mut hi: f64, tol: f64| -> Result<(f64, f64)> {
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if count(mid)? == count_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo, hi))
    };
    (lo, hi) = bisect_to(lo, hi, opts.coarse_tol)?;

    let pair_mid = |lo: f64, hi: f64| -> Result<f64> {
        let roots = |a: f64| -> Result<Vec<f64>> {
            Ok(scan_real_roots(&base.with_alpha(a)?, window, &opts.scan)?.iter().map(|r| r.k).collect())
        };
        let (r_lo, r_hi) = (roots(lo)?, roots(hi)?);
        let (more, less) = if r_lo.len() > r_hi.len() { (r_lo, r_hi) } else { (r_hi, r_lo) };
        merging_pair(&more, &less)
            .map(|(a, b)| 0.5 * (a + b))
            .ok_or_else(|| Error::Domain("could not identify the merging root pair".into()))
    };
    let k0 = pair_mid(lo, hi)?;
    let a0 = 0.5 * (lo + hi);

    let width = hi - lo;
    if let Ok((k, a)) = newton_2d(base, k0, a0, opts) {
        let (rf, rdf) = residuals(base, k, a)?;
        let inside = a >= lo - width && a <= hi + width && window.contains(k);
        if inside && rf <= opts.f_tol && rdf <= opts.df_tol {
            return Ok(ExceptionalPoint {
                alpha_star: a,
                k_star: k,
                bracket: Interval { lo, hi },
                residual_f: rf,
                residual_df: rdf,
                counts: (count_lo, count_hi),
                method: EpMethod::BisectionNewton,
            });
        }
    }

    let (lo, hi) = bisect_to(lo, hi, opts.fallback_tol)?;
    let k = pair_mid(lo, hi)?;
    let a = 0.5 * (lo + hi);
    let (rf, rdf) = residuals(base, k, a)?;
    Ok(ExceptionalPoint {
        alpha_star: a,
        k_star: k,
        bracket: Interval { lo, hi },
        residual_f: rf,
        residual_df: rdf,
        counts: (count_lo, count_hi),
        method: EpMethod::Bisection,
    })
}

/// Distance between the two real roots nearest to `k_star` on either side,
/// searched in `k_star +- half_width`. `None` when the pair is not real.
pub fn coalescing_pair_gap(spec: &StarGraphSpec, k_star: f64, half_width: f64, samples: usize) -> Result<Option<f64>> {
    let window = Interval::new((k_star - half_width).max(1e-6), k_star + half_width)?;
    let opts = ScanOptions { samples, ..ScanOptions::default() };
    let roots = scan_real_roots(spec, window, &opts)?;
    let below = roots.iter().filter(|r| r.k <= k_star).map(|r| r.k).fold(f64::NAN, f64::max);
    let above = roots.iter().filter(|r| r.k > k_star).map(|r| r.k).fold(f64::NAN, f64::min);
    Ok((below.is_finite() && above.is_finite()).then_some(above - below))
}

/// Least-squares fit of `gap = C (alpha* - alpha)^p` in log-log space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// `(alpha* - alpha, gap)` samples.
    pub points: Vec<(f64, f64)>,
}

/// Measures the merging-pair gap at `alpha* - delta` for each `delta` and
/// fits the power law. For an ordinary double root the exponent is 1/2.
pub fn gap_exponent(base: &StarGraphSpec, ep: &ExceptionalPoint, deltas: &[f64]) -> Result<GapFit> {
    // below alpha* the pair lies on the side with more roots
    let toward_more = if ep.counts.0 > ep.counts.1 { -1.0 } else { 1.0 };
    let mut points = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let spec = base.with_alpha(ep.alpha_star + toward_more * d)?;
        let half = (10.0 * d.sqrt()).clamp(0.01, 0.5);
        let gap = coalescing_pair_gap(&spec, ep.k_star, half, 4000)?
            .ok_or_else(|| Error::Domain(format!("merging pair not found at delta = {d}")))?;
        points.push((d, gap));
    }
    if points.len() < 2 {
        return Err(Error::Argument("need at least two deltas to fit an exponent".into()));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let exponent = sxy / sxx;
    Ok(GapFit {
        exponent,
        prefactor: (my - exponent * mx).exp(),
        points,
    })
}
