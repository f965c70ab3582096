//! Eigenvalues of small dense complex matrices: Householder reduction to
//! upper Hessenberg form followed by single-shift complex QR sweeps with
//! Wilkinson shifts and deflation.

use num_complex::Complex64;

use super::{DenseMatrix, Lu};
use crate::error::{Error, Result};

/// Largest matrix accepted by [`eigenvalues`].
pub const EIGEN_DIM_CAP: usize = 2048;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 120;

/// All eigenvalues with algebraic multiplicity, ordered by ascending real
/// part and then ascending imaginary part.
pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<Complex64>> {
    let n = m.require_square("eigenvalues")?;
    if n > EIGEN_DIM_CAP {
        return Err(Error::Argument(format!(
            "eigenvalue problem of size {n} exceeds cap {EIGEN_DIM_CAP}"
        )));
    }
    let mut h = m.as_slice().to_vec();
    reduce_to_hessenberg(&mut h, n);
    let mut eigs = hessenberg_qr(&mut h, n, m.max_abs())?;
    sort_spectrum(&mut eigs, m.max_abs());
    Ok(eigs)
}

/// Sorts by real part, treating real parts within `1e-12 * scale` as equal
/// and ordering those by imaginary part.
pub fn sort_spectrum(eigs: &mut [Complex64], scale: f64) {
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let tol = 1e-12 * scale.max(1.0);
    let mut start = 0;
    while start < eigs.len() {
        let mut end = start + 1;
        while end < eigs.len() && eigs[end].re - eigs[start].re <= tol {
            end += 1;
        }
        eigs[start..end].sort_by(|a, b| a.im.total_cmp(&b.im));
        start = end;
    }
}

/// Unit-norm eigenvector for an (already computed) eigenvalue `mu`, by
/// inverse iteration. The phase is fixed so that the largest component is
/// real and positive.
pub fn eigenvector(m: &DenseMatrix, mu: Complex64) -> Result<Vec<Complex64>> {
    let n = m.require_square("eigenvector")?;
    let shifted = DenseMatrix::from_fn(n, n, |i, j| if i == j { m[(i, j)] - mu } else { m[(i, j)] });
    let lu = Lu::new(&shifted)?;
    let mut x: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.37 * i as f64, 0.11 * (i % 3) as f64))
        .collect();
    normalize(&mut x);
    for _ in 0..4 {
        x = lu.solve(&x);
        if !normalize(&mut x) {
            return Err(Error::NoConvergence { size: n, residual: f64::NAN });
        }
    }
    fix_phase(&mut x);
    Ok(x)
}

fn normalize(x: &mut [Complex64]) -> bool {
    let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return false;
    }
    for v in x.iter_mut() {
        *v /= norm;
    }
    true
}

pub fn fix_phase(x: &mut [Complex64]) {
    let Some(pivot) = x
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
    else {
        return;
    };
    if pivot.norm() == 0.0 {
        return;
    }
    let phase = pivot.conj() / pivot.norm();
    for v in x.iter_mut() {
        *v *= phase;
    }
}

fn reduce_to_hessenberg(h: &mut [Complex64], n: usize) {
    let zero = Complex64::new(0.0, 0.0);
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[i * n + k]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            v[0] / v[0].norm()
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- (I - 2 v v*) H
        for j in k..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(k + 1 + i) * n + j])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i) * n + j] -= 2.0 * vi * s;
            }
        }
        // H <- H (I - 2 v v*)
        for r in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(l, vl)| h[r * n + k + 1 + l] * vl)
                .sum();
            for (l, vl) in v.iter().enumerate() {
                h[r * n + k + 1 + l] -= 2.0 * s * vl.conj();
            }
        }
        h[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            h[i * n + k] = zero;
        }
    }
}

/// Givens pair `(c, s)` with real `c` such that
/// `[c s; -conj(s) c] [a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn hessenberg_qr(h: &mut [Complex64], n: usize, scale: f64) -> Result<Vec<Complex64>> {
    let mut eigs = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(eigs);
    }
    let at = |i: usize, j: usize| i * n + j;
    let floor = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iter = 0;
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[at(l, l - 1)].norm();
            let diag = h[at(l - 1, l - 1)].norm() + h[at(l, l)].norm();
            if sub <= f64::EPSILON * diag || sub <= floor {
                h[at(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eigs[hi] = h[at(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::NoConvergence {
                size: n,
                residual: h[at(hi, hi - 1)].norm(),
            });
        }

        let a = h[at(hi - 1, hi - 1)];
        let b = h[at(hi - 1, hi)];
        let c = h[at(hi, hi - 1)];
        let d = h[at(hi, hi)];
        let mu = if iter % 11 == 0 {
            // exceptional shift to break cycles
            d + Complex64::new(0.75 * c.norm(), 0.25 * c.norm())
        } else {
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let mid = (a + d) * 0.5;
            let m1 = mid + disc;
            let m2 = mid - disc;
            if (m1 - d).norm() <= (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };

        for i in l..=hi {
            h[at(i, i)] -= mu;
        }
        rotations.clear();
        for k in l..hi {
            let (cs, sn) = givens(h[at(k, k)], h[at(k + 1, k)]);
            for j in k..=hi {
                let x = h[at(k, j)];
                let y = h[at(k + 1, j)];
                h[at(k, j)] = cs * x + sn * y;
                h[at(k + 1, j)] = -sn.conj() * x + cs * y;
            }
            h[at(k + 1, k)] = Complex64::new(0.0, 0.0);
            rotations.push((cs, sn));
        }
        for (offset, &(cs, sn)) in rotations.iter().enumerate() {
            let k = l + offset;
            for i in l..=(k + 1).min(hi) {
                let x = h[at(i, k)];
                let y = h[at(i, k + 1)];
                h[at(i, k)] = cs * x + sn.conj() * y;
                h[at(i, k + 1)] = -sn * x + cs * y;
            }
        }
        for i in l..=hi {
            h[at(i, i)] += mu;
        }
    }
    eigs[0] = h[at(0, 0)];
    Ok(eigs)
}
