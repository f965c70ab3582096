use num_complex::Complex64;

use super::DenseMatrix;
use crate::error::Result;

/// LU factorisation with partial pivoting, `P m = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    factors: Vec<Complex64>,
    perm: Vec<usize>,
    swaps: usize,
    scale: f64,
}

impl Lu {
    pub fn new(m: &DenseMatrix) -> Result<Self> {
        let n = m.require_square("LU factorisation")?;
        let mut a = m.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&x, &y| a[x * n + k].norm().total_cmp(&a[y * n + k].norm()))
                .unwrap_or(k);
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                }
                perm.swap(k, pivot);
                swaps += 1;
            }
            let p = a[k * n + k];
            if p.norm() == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let factor = a[i * n + k] / p;
                a[i * n + k] = factor;
                if factor.norm() == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let u = a[k * n + j];
                    a[i * n + j] -= factor * u;
                }
            }
        }
        Ok(Self {
            n,
            factors: a,
            perm,
            swaps,
            scale: m.max_abs(),
        })
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut det = if self.swaps.is_multiple_of(2) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        };
        for i in 0..n {
            det *= self.factors[i * n + i];
        }
        det
    }

    /// Solves `m x = b`. Exactly zero pivots are replaced by
    /// `eps * ||m||_max`, which is what inverse iteration at an exact
    /// eigenvalue needs.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        assert_eq!(b.len(), n, "right-hand side length");
        let floor = f64::EPSILON * self.scale.max(f64::MIN_POSITIVE);
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.factors[i * n + j];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.factors[i * n + j];
                x[i] = x[i] - u * x[j];
            }
            let mut d = self.factors[i * n + i];
            if d.norm() < floor {
                d = Complex64::new(floor, 0.0);
            }
            x[i] /= d;
        }
        x
    }
}

/// Determinant by pivoted elimination.
pub fn lu_determinant(m: &DenseMatrix) -> Result<Complex64> {
    Ok(Lu::new(m)?.determinant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(lu_determinant(&DenseMatrix::identity(3)).unwrap(), c(1.0));
        let d = DenseMatrix::diagonal(&[c(2.0), c(3.0), c(4.0)]);
        assert_eq!(lu_determinant(&d).unwrap(), c(24.0));
        let swap = DenseMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(lu_determinant(&swap).unwrap(), c(-1.0));
    }

    #[test]
    fn non_square_is_rejected() {
        let m = DenseMatrix::zeros(2, 3);
        assert!(matches!(lu_determinant(&m), Err(Error::Dimension(_))));
    }

    #[test]
    fn solve_recovers_rhs() {
        let m = DenseMatrix::from_vec(
            3,
            3,
            vec![
                Complex64::new(1.0, 1.0),
                c(2.0),
                c(0.0),
                c(-1.0),
                Complex64::new(0.5, -2.0),
                c(3.0),
                c(0.0),
                c(1.0),
                Complex64::new(4.0, 0.5),
            ],
        )
        .unwrap();
        let x_true = vec![c(1.0), Complex64::new(-2.0, 1.0), c(0.5)];
        let b = m.mul_vec(&x_true).unwrap();
        let x = Lu::new(&m).unwrap().solve(&b);
        for (a, e) in x.iter().zip(&x_true) {
            assert!((a - e).norm() < 1e-13);
        }
    }
}
