use num_complex::Complex64;

use super::{Interval, RealRoot};
use crate::error::{Error, Result};
use crate::stargraph::{secular_determinant, secular_scalar, StarGraphSpec};

const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    /// Uniform grid points over the window, at least 100.
    pub samples: usize,
    /// Bisection stops once the bracket is narrower than this.
    pub bisect_tol: f64,
    /// A grid minimum of `|F|` below `dip_ratio * median |F|` without a
    /// sign change triggers the local search for touching roots.
    pub dip_ratio: f64,
    /// A refined root is kept when `|det M|` there is at most this fraction
    /// of `|det M|` at its bracket ends (rejects sign flips through poles).
    pub accept_ratio: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            samples: 2000,
            bisect_tol: 1e-12,
            dip_ratio: 1e-3,
            accept_ratio: 1e-6,
        }
    }
}

/// Real part of the reduced secular function, `None` at poles.
pub(crate) fn real_secular(spec: &StarGraphSpec, k: f64) -> Option<f64> {
    secular_scalar(spec, Complex64::new(k, 0.0))
        .ok()
        .and_then(|r| r.value())
        .map(|z| z.re)
}

fn det_abs(spec: &StarGraphSpec, k: f64) -> f64 {
    secular_determinant(spec, Complex64::new(k, 0.0))
        .map(|d| d.norm())
        .unwrap_or(f64::NAN)
}

fn bisect(f: impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64, fa: f64, tol: f64) -> Option<f64> {
    let mut sa = fa.signum();
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == sa {
            a = m;
            sa = fm.signum();
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Minimises `g` on `[a, b]` by golden-section search.
fn golden_min(g: impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64, tol: f64) -> Option<(f64, f64)> {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut g1 = g(x1)?;
    let mut g2 = g(x2)?;
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if g1 <= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - GOLDEN * (b - a);
            g1 = g(x1)?;
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + GOLDEN * (b - a);
            g2 = g(x2)?;
        }
    }
    Some(if g1 <= g2 { (x1, g1) } else { (x2, g2) })
}

struct Candidate {
    k: f64,
    bracket: (f64, f64),
    tangential: bool,
}

/// Real roots of the secular equation in `window`, ascending.
///
/// Only even arm counts are supported: for odd `q` the reduced secular
/// function is not real on the real axis.
pub fn scan_real_roots(spec: &StarGraphSpec, window: Interval, opts: &ScanOptions) -> Result<Vec<RealRoot>> {
    if !spec.q().is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "real scan needs an even number of arms (secular function is complex on the real axis for q = {})",
            spec.q()
        )));
    }
    if window.lo <= 0.0 {
        return Err(Error::Argument(format!("scan window must lie in k > 0, got lower bound {}", window.lo)));
    }
    if opts.samples < 100 {
        return Err(Error::Argument(format!("need at least 100 samples, got {}", opts.samples)));
    }

    let n = opts.samples;
    let step = window.width() / (n - 1) as f64;
    let ks: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { window.hi } else { window.lo + step * i as f64 })
        .collect();
    let vals: Vec<Option<f64>> = ks.iter().map(|&k| real_secular(spec, k)).collect();
    let median = {
        let mut mags: Vec<f64> = vals.iter().flatten().map(|v| v.abs()).collect();
        if mags.is_empty() {
            return Err(Error::Domain("secular function has poles at every grid point".into()));
        }
        mags.sort_by(f64::total_cmp);
        mags[mags.len() / 2]
    };
    let f = |k: f64| real_secular(spec, k);

    let mut candidates = Vec::new();
    for i in 0..n {
        let Some(va) = vals[i] else { continue };
        if va == 0.0 {
            let lo = ks[i.saturating_sub(1)];
            let hi = ks[(i + 1).min(n - 1)];
            candidates.push(Candidate { k: ks[i], bracket: (lo, hi), tangential: false });
            continue;
        }
        if i + 1 == n {
            break;
        }
        let Some(vb) = vals[i + 1] else { continue };
        if vb != 0.0 && va.signum() != vb.signum() {
            if let Some(k) = bisect(f, ks[i], ks[i + 1], va, opts.bisect_tol) {
                candidates.push(Candidate { k, bracket: (ks[i], ks[i + 1]), tangential: false });
            }
        }
    }

    let dip_level = opts.dip_ratio * median;
    let touch_tol = 1e-9 * median.max(1.0);
    for i in 1..n.saturating_sub(1) {
        let (Some(vl), Some(v), Some(vr)) = (vals[i - 1], vals[i], vals[i + 1]) else {
            continue;
        };
        if v == 0.0 || vl.signum() != v.signum() || vr.signum() != v.signum() {
            continue;
        }
        let is_min = v.abs() <= vl.abs() && v.abs() <= vr.abs() && (v.abs() < vl.abs() || v.abs() < vr.abs());
        if !is_min || v.abs() >= dip_level {
            continue;
        }
        let s = v.signum();
        let Some((km, gm)) = golden_min(|k| f(k).map(|x| s * x), ks[i - 1], ks[i + 1], opts.bisect_tol) else {
            continue;
        };
        if gm < 0.0 {
            // two crossings hidden between grid points
            for (a, b, fa) in [(ks[i - 1], km, vl), (km, ks[i + 1], s * gm)] {
                if let Some(k) = bisect(f, a, b, fa, opts.bisect_tol) {
                    candidates.push(Candidate { k, bracket: (ks[i - 1], ks[i + 1]), tangential: false });
                }
            }
        } else if gm <= touch_tol {
            candidates.push(Candidate { k: km, bracket: (ks[i - 1], ks[i + 1]), tangential: true });
        }
    }

    let mut roots: Vec<RealRoot> = candidates
        .into_iter()
        .filter_map(|c| {
            let residual = det_abs(spec, c.k);
            let scale = det_abs(spec, c.bracket.0).max(det_abs(spec, c.bracket.1));
            (residual <= opts.accept_ratio * scale).then_some(RealRoot {
                k: c.k,
                residual,
                tangential: c.tangential,
            })
        })
        .collect();
    roots.sort_by(|a, b| a.k.total_cmp(&b.k));
    roots.dedup_by(|b, a| (b.k - a.k).abs() <= 1e-9 * a.k.abs().max(1.0));
    Ok(roots)
}

pub fn count_real_roots(spec: &StarGraphSpec, window: Interval, opts: &ScanOptions) -> Result<usize> {
    Ok(scan_real_roots(spec, window, opts)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn spec(q: usize, alpha: f64) -> StarGraphSpec {
        StarGraphSpec::new(q, alpha).unwrap()
    }

    fn ks(roots: &[RealRoot]) -> Vec<f64> {
        roots.iter().map(|r| r.k).collect()
    }

    /// Independent oracle: sign changes of Re det M on a fine grid (det M is
    /// real on the real axis for even q), refined by plain bisection.
    fn det_oracle_roots(s: &StarGraphSpec, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let d = |k: f64| secular_determinant(s, Complex64::new(k, 0.0)).unwrap().re;
        let mut out = Vec::new();
        let h = (hi - lo) / n as f64;
        for i in 0..n {
            let (mut a, mut b) = (lo + h * i as f64, lo + h * (i + 1) as f64);
            let (fa, fb) = (d(a), d(b));
            if fa.signum() == fb.signum() {
                continue;
            }
            let sa = fa.signum();
            while b - a > 1e-13 {
                let m = 0.5 * (a + b);
                if d(m).signum() == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        out
    }

    #[test]
    fn four_real_roots_at_subcritical_coupling() {
        let w = Interval::new(0.05, 2.0).unwrap();
        let r = scan_real_roots(&spec(6, 0.7), w, &ScanOptions::default()).unwrap();
        // frozen from an independent 30-digit evaluation of the closed form
        let want = [0.378_666_476_051_489_5, 1.102_337_194_243_114_9, FRAC_PI_2, 1.807_326_093_005_283_7];
        assert_eq!(r.len(), 4);
        for (got, want) in ks(&r).iter().zip(want) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        assert!(r.iter().all(|x| !x.tangential && x.residual < 1e-9));
    }

    #[test]
    fn two_real_roots_at_overcritical_coupling() {
        let w = Interval::new(0.05, 2.0).unwrap();
        let r = scan_real_roots(&spec(6, 1.0), w, &ScanOptions::default()).unwrap();
        assert_eq!(ks(&r).len(), 2);
        assert!((r[0].k - FRAC_PI_2).abs() < 1e-10);
        assert!((r[1].k - 1.928_229_601_614_739).abs() < 1e-10);
    }

    #[test]
    fn counts_bracket_the_transition() {
        let w = Interval::new(0.05, 2.0).unwrap();
        let o = ScanOptions::default();
        assert_eq!(count_real_roots(&spec(6, 0.78), w, &o).unwrap(), 4);
        assert_eq!(count_real_roots(&spec(6, 0.79), w, &o).unwrap(), 2);
    }

    #[test]
    fn neumann_tips_give_pi_only() {
        let o = ScanOptions::default();
        let r = scan_real_roots(&spec(6, 0.0), Interval::new(3.0, 4.0).unwrap(), &o).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].k - PI).abs() < 1e-9);
        let r = scan_real_roots(&spec(6, 0.0), Interval::new(0.05, 4.0).unwrap(), &o).unwrap();
        assert_eq!(ks(&r).len(), 1);
        assert!((r[0].k - PI).abs() < 1e-9);
        assert!(scan_real_roots(&spec(6, 0.0), Interval::new(0.05, 2.0).unwrap(), &o)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn argument_errors() {
        let o = ScanOptions::default();
        let w = Interval::new(0.05, 2.0).unwrap();
        assert!(matches!(scan_real_roots(&spec(5, 0.7), w, &o), Err(Error::Argument(_))));
        let few = ScanOptions { samples: 50, ..o.clone() };
        assert!(matches!(scan_real_roots(&spec(6, 0.7), w, &few), Err(Error::Argument(_))));
        let neg = Interval { lo: -1.0, hi: 2.0 };
        assert!(matches!(scan_real_roots(&spec(6, 0.7), neg, &o), Err(Error::Argument(_))));
    }

    #[test]
    fn poles_of_reduced_form_are_not_roots() {
        // q = 4 and q = 8 have real poles of F; compare with the det oracle
        for (q, alpha) in [(4, 0.5), (4, 1.3), (8, 0.9), (2, 0.6)] {
            let s = spec(q, alpha);
            let got = ks(&scan_real_roots(&s, Interval::new(0.05, 6.0).unwrap(), &ScanOptions::default()).unwrap());
            let want = det_oracle_roots(&s, 0.05, 6.0, 60_000);
            assert_eq!(got.len(), want.len(), "q={q} alpha={alpha}: {got:?} vs {want:?}");
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-9, "q={q}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn hidden_pair_inside_one_cell_is_resolved() {
        // just below the merger the two middle roots sit ~1e-4 apart, inside
        // a single cell of a coarse grid
        let s = spec(6, 0.786_280_629);
        let coarse = ScanOptions::default();
        let fine = ScanOptions { samples: 200_000, ..ScanOptions::default() };
        let w = Interval::new(0.05, 2.0).unwrap();
        let a = ks(&scan_real_roots(&s, w, &coarse).unwrap());
        let b = ks(&scan_real_roots(&s, w, &fine).unwrap());
        assert_eq!(b.len(), 4, "{b:?}");
        assert_eq!(a.len(), 4, "{a:?}");
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn realness_for_even_arm_counts() {
        for q in [2usize, 4, 6, 8] {
            let s = spec(q, 0.7);
            for i in 0..1000 {
                let k = 0.05 + 5.95 * i as f64 / 999.0;
                if let Some(z) = secular_scalar(&s, Complex64::new(k, 0.0)).unwrap().value() {
                    assert!(z.im.abs() <= 1e-10 * (1.0 + z.norm()), "q={q} k={k}: {z}");
                }
            }
        }
    }

    #[test]
    fn scaling_covariance() {
        let base = spec(6, 0.7);
        let w = Interval::new(0.05, 2.0).unwrap();
        let roots = ks(&scan_real_roots(&base, w, &ScanOptions::default()).unwrap());
        for s in [0.5, 2.0] {
            let scaled = StarGraphSpec::with_length(6, 0.7 / s, s).unwrap();
            let ws = Interval::new(0.05 / s, 2.0 / s).unwrap();
            let got = ks(&scan_real_roots(&scaled, ws, &ScanOptions::default()).unwrap());
            assert_eq!(got.len(), roots.len());
            for (g, r) in got.iter().zip(&roots) {
                assert!((g - r / s).abs() < 1e-9, "s={s}: {g} vs {}", r / s);
            }
        }
    }

    #[test]
    fn deterministic() {
        let w = Interval::new(0.05, 2.0).unwrap();
        let a = scan_real_roots(&spec(6, 0.75), w, &ScanOptions::default()).unwrap();
        let b = scan_real_roots(&spec(6, 0.75), w, &ScanOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}
