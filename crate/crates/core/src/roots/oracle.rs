//! Independent root sets used to cross-check the scan: sign changes of the
//! full determinant, and sign changes of the six-arm closed form.

use num_complex::Complex64;
use serde::Serialize;

use super::Interval;
use crate::error::{Error, Result};
use crate::stargraph::{closed_form_q6, secular_determinant, StarGraphSpec};

fn grid(window: Interval, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 {
        return Err(Error::Argument("need at least two samples".into()));
    }
    Ok((0..samples)
        .map(|i| window.lo + window.width() * i as f64 / (samples - 1) as f64)
        .collect())
}

fn median_abs(vals: &[f64]) -> f64 {
    let mut v: Vec<f64> = vals.iter().map(|x| x.abs()).filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// Bisects every sign change of `f` on the grid. Brackets whose end values
/// stay above `1e-3 * median |f|` are poles and are dropped.
fn sign_change_roots(f: impl Fn(f64) -> f64, window: Interval, samples: usize) -> Result<Vec<f64>> {
    let ks = grid(window, samples)?;
    let vals: Vec<f64> = ks.iter().map(|&k| f(k)).collect();
    let scale = median_abs(&vals);
    let mut out = Vec::new();
    for i in 0..samples - 1 {
        let (mut a, mut b, mut fa, mut fb) = (ks[i], ks[i + 1], vals[i], vals[i + 1]);
        if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
            continue;
        }
        if fa == 0.0 {
            // counted once, as the right end of the previous bracket
            if i == 0 {
                out.push(a);
            }
            continue;
        }
        while b - a > 1e-15 * b.abs().max(1.0) {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = f(m);
            if !fm.is_finite() {
                break;
            }
            if fm.signum() == fa.signum() {
                (a, fa) = (m, fm);
            } else {
                (b, fb) = (m, fm);
            }
        }
        if fa.abs().max(fb.abs()) <= 1e-3 * scale {
            out.push(if fa.abs() <= fb.abs() { a } else { b });
        }
    }
    Ok(out)
}

/// Sign changes of `det M(k)` on the real axis. The determinant is real
/// there only for an even number of arms.
pub fn determinant_roots(spec: &StarGraphSpec, window: Interval, samples: usize) -> Result<Vec<f64>> {
    if !spec.q().is_multiple_of(2) {
        return Err(Error::Argument("determinant is complex on the real axis for odd q".into()));
    }
    let f = |k: f64| secular_determinant(spec, Complex64::new(k, 0.0)).map(|d| d.re).unwrap_or(f64::NAN);
    sign_change_roots(f, window, samples)
}

/// Sign changes of the six-arm closed-form product `tan kL * ratio`.
/// For `alpha > 0` the product tends to zero where `cos kL` vanishes,
/// so that limit is used there.
pub fn closed_form_roots(alpha: f64, length: f64, window: Interval, samples: usize) -> Result<Vec<f64>> {
    let f = |k: f64| match closed_form_q6(alpha, Complex64::new(k, 0.0), length) {
        Some(c) => c.product.re,
        None if alpha != 0.0 => 0.0,
        None => f64::NAN,
    };
    sign_change_roots(f, window, samples)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootAgreement {
    /// Determinant roots the closed form can see.
    pub determinant: Vec<f64>,
    pub closed_form: Vec<f64>,
    /// Determinant roots where every `f_j` vanishes. The closed form divides
    /// by their product, so these are set aside rather than compared.
    pub center_node: Vec<f64>,
    /// Largest pairwise distance; infinite when the counts differ.
    pub max_deviation: f64,
}

impl RootAgreement {
    pub fn agrees(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Size below which all `f_j` are taken to vanish together.
const CENTER_NODE_TOL: f64 = 1e-6;

/// Both root sets of the six-arm graph in `window`.
pub fn compare_closed_form(alpha: f64, length: f64, window: Interval, samples: usize) -> Result<RootAgreement> {
    let spec = StarGraphSpec::with_length(6, alpha, length)?;
    let (center_node, determinant): (Vec<f64>, Vec<f64>) =
        determinant_roots(&spec, window, samples)?.into_iter().partition(|&k| {
            let z = Complex64::new(k, 0.0);
            (0..spec.q()).all(|j| spec.arm_center_values(j, z).0.norm() <= CENTER_NODE_TOL)
        });
    let closed_form = closed_form_roots(alpha, length, window, samples)?;
    let max_deviation = if determinant.len() == closed_form.len() {
        determinant
            .iter()
            .zip(&closed_form)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(RootAgreement {
        determinant,
        closed_form,
        center_node,
        max_deviation,
    })
}
