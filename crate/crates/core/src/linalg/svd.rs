//! One-sided (Hestenes) Jacobi SVD. Slow for big matrices but accurate in
//! the small singular values, which is what kernel extraction relies on.

use num_complex::Complex64;

use super::DenseMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `right_vectors[i]` pairs with `singular_values[i]`; orthonormal.
    pub right_vectors: Vec<Vec<Complex64>>,
}

pub fn singular_value_decomposition(a: &DenseMatrix) -> Result<Svd> {
    let m = a.rows();
    let n = a.cols();
    // column-major working copies
    let mut u: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let tol = f64::EPSILON * (m.max(n) as f64).sqrt();
    // columns this small are rounding noise; rotating them against large
    // columns only reshuffles the noise and can cycle forever
    let floor = (n as f64 * f64::EPSILON * a.frobenius_norm()).powi(2);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = u[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = u[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = u[p].iter().zip(&u[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() || alpha.min(beta) <= floor {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g; // e^{-i theta}
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut u, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            size: n,
            residual: f64::NAN,
        });
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = u
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .zip(v)
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (singular_values, right_vectors) = pairs.into_iter().unzip();
    Ok(Svd {
        singular_values,
        right_vectors,
    })
}

fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = phase * *y;
        let new_p = c * *x - s * yq;
        let new_q = s * *x + c * yq;
        *x = new_p;
        *y = new_q;
    }
}
