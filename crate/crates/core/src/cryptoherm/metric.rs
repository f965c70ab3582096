use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hamiltonian::{build_h4, metric_component, DiscreteHamiltonian};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, eigenvector, is_positive_definite, real_null_space, DenseMatrix};

/// Largest Hamiltonian accepted by [`solve_metric_space`].
pub const METRIC_DIM_CAP: usize = 12;

/// Relative tolerance for the `is_metric` verdict.
pub const METRIC_TOL: f64 = 1e-12;

/// Imaginary-part and gap tolerance for [`spectral_metric`], relative to `||H||`.
pub const SPECTRAL_TOL: f64 = 1e-9;

/// A Hermitian matrix tested against `H^dagger Theta = Theta H`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricCandidate {
    pub theta: DenseMatrix,
    /// Family coefficients when built by [`assemble_metric`].
    pub coefficients: Option<Vec<f64>>,
    /// `||H^dagger Theta - Theta H||_max`
    pub residual: f64,
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    /// Eigenvalues of the Hermitian part of `theta`, ascending.
    pub eigenvalues: Vec<f64>,
    pub is_metric: bool,
}

/// `||H^dagger Theta - Theta H||_max`.
pub fn crypto_residual(h: &DiscreteHamiltonian, theta: &DenseMatrix) -> Result<f64> {
    let hm = h.matrix();
    let lhs = hm.adjoint().try_mul(theta)?;
    let rhs = theta.try_mul(hm)?;
    Ok(lhs.try_sub(&rhs)?.max_abs())
}

/// Residual, spectrum and verdict for an arbitrary `theta`.
pub fn classify_metric(h: &DiscreteHamiltonian, theta: DenseMatrix, coefficients: Option<Vec<f64>>) -> Result<MetricCandidate> {
    let residual = crypto_residual(h, &theta)?;
    let scale = theta.max_abs();
    let pos = is_positive_definite(&theta, METRIC_TOL * scale, 0.0)?;
    let is_metric = residual <= METRIC_TOL * h.matrix().max_abs() * scale && pos.is_positive_definite;
    Ok(MetricCandidate {
        theta,
        coefficients,
        residual,
        hermiticity_defect: pos.hermiticity_defect,
        min_eigenvalue: pos.min_eigenvalue,
        eigenvalues: pos.eigenvalues,
        is_metric,
    })
}

/// `sum_j alphas[j] M_{j+1}(lambda)` judged against the four-site Hamiltonian.
pub fn assemble_metric(lambda: f64, alphas: [f64; 4]) -> Result<MetricCandidate> {
    let mut theta = DenseMatrix::zeros(4, 4);
    for (j, a) in alphas.iter().enumerate() {
        theta = theta.try_add(&metric_component(j + 1, lambda)?.scale(Complex64::new(*a, 0.0)))?;
    }
    classify_metric(&build_h4(lambda), theta, Some(alphas.to_vec()))
}

/// Orthonormal (Frobenius) basis of the Hermitian `N x N` matrices: real
/// diagonal units, then symmetric and imaginary-antisymmetric pairs.
fn hermitian_basis(n: usize) -> Vec<DenseMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let mut e = DenseMatrix::zeros(n, n);
        e[(i, i)] = Complex64::new(1.0, 0.0);
        out.push(e);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut sym = DenseMatrix::zeros(n, n);
            sym[(i, j)] = Complex64::new(s, 0.0);
            sym[(j, i)] = Complex64::new(s, 0.0);
            out.push(sym);
            let mut asym = DenseMatrix::zeros(n, n);
            asym[(i, j)] = Complex64::new(0.0, s);
            asym[(j, i)] = Complex64::new(0.0, -s);
            out.push(asym);
        }
    }
    out
}

fn frobenius_dot(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Hermitian solutions of `H^dagger Theta = Theta H`.
#[derive(Debug, Clone)]
pub struct MetricSpace {
    /// Frobenius-orthonormal Hermitian basis of the solution space, each
    /// member signed to have non-negative trace.
    pub basis: Vec<DenseMatrix>,
    /// Singular values of the vectorized map, descending.
    pub singular_values: Vec<f64>,
}

/// Least-squares projection of a matrix onto a [`MetricSpace`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection {
    pub coefficients: Vec<f64>,
    /// `||Theta - P Theta||_F / ||Theta||_F`
    pub relative_residual: f64,
}

impl MetricSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn combine(&self, coefficients: &[f64]) -> Result<DenseMatrix> {
        if coefficients.len() != self.dimension() || self.basis.is_empty() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a {}-dimensional metric space",
                coefficients.len(),
                self.dimension()
            )));
        }
        let n = self.basis[0].rows();
        let mut out = DenseMatrix::zeros(n, n);
        for (c, b) in coefficients.iter().zip(&self.basis) {
            out = out.try_add(&b.scale(Complex64::new(*c, 0.0)))?;
        }
        Ok(out)
    }

    pub fn project(&self, theta: &DenseMatrix) -> Result<Projection> {
        let norm = theta.frobenius_norm();
        if self.basis.is_empty() {
            return Ok(Projection {
                coefficients: Vec::new(),
                relative_residual: if norm > 0.0 { 1.0 } else { 0.0 },
            });
        }
        let coefficients: Vec<f64> = self.basis.iter().map(|b| frobenius_dot(b, theta)).collect();
        let rest = theta.try_sub(&self.combine(&coefficients)?)?;
        Ok(Projection {
            coefficients,
            relative_residual: if norm > 0.0 { rest.frobenius_norm() / norm } else { 0.0 },
        })
    }

    /// Looks for a positive-definite member: each basis matrix with either
    /// sign, then `trials` random combinations with positive coefficients.
    /// Finding none proves nothing; it is a probe.
    pub fn search_positive(&self, h: &DiscreteHamiltonian, trials: usize, seed: u64) -> Result<Option<MetricCandidate>> {
        for b in &self.basis {
            for sign in [1.0, -1.0] {
                let c = classify_metric(h, b.scale(Complex64::new(sign, 0.0)), None)?;
                if c.is_metric {
                    return Ok(Some(c));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let coeffs: Vec<f64> = (0..self.dimension()).map(|_| rng.gen_range(0.0..1.0)).collect();
            let c = classify_metric(h, self.combine(&coeffs)?, Some(coeffs))?;
            if c.is_metric {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }
}

/// Kernel of `Theta -> H^dagger Theta - Theta H` over Hermitian `Theta`.
///
/// `Theta` is expanded in the `N^2` real Hermitian basis and the map is
/// split into real and imaginary parts, so the kernel is a real null space.
pub fn solve_metric_space(h: &DiscreteHamiltonian, rank_tol: f64) -> Result<MetricSpace> {
    let n = h.dim();
    if n > METRIC_DIM_CAP {
        return Err(Error::Argument(format!("metric space solver is capped at {METRIC_DIM_CAP}x{METRIC_DIM_CAP}, got {n}x{n}")));
    }
    let hm = h.matrix();
    let hd = hm.adjoint();
    let basis = hermitian_basis(n);
    let p = basis.len();
    let mut map = DenseMatrix::zeros(2 * n * n, p);
    for (col, b) in basis.iter().enumerate() {
        let image = hd.try_mul(b)?.try_sub(&b.try_mul(hm)?)?;
        for (r, z) in image.as_slice().iter().enumerate() {
            map[(2 * r, col)] = Complex64::new(z.re, 0.0);
            map[(2 * r + 1, col)] = Complex64::new(z.im, 0.0);
        }
    }
    let kernel = real_null_space(&map, rank_tol)?;
    let mut out = Vec::with_capacity(kernel.dimension());
    for v in &kernel.basis {
        let mut theta = DenseMatrix::zeros(n, n);
        for (c, b) in v.iter().zip(&basis) {
            theta = theta.try_add(&b.scale(Complex64::new(*c, 0.0)))?;
        }
        // SVD signs are arbitrary; a positive metric has positive trace
        if theta.trace().re < 0.0 {
            theta = theta.scale(Complex64::new(-1.0, 0.0));
        }
        out.push(theta);
    }
    Ok(MetricSpace {
        basis: out,
        singular_values: kernel.singular_values,
    })
}

/// Right eigenvectors with unit 2-norm and left eigenvectors scaled so that
/// `<L_m|R_n> = delta_mn`. Needs a real, simple spectrum.
#[derive(Debug, Clone)]
pub struct Biorthogonal {
    pub eigenvalues: Vec<f64>,
    pub right: Vec<Vec<Complex64>>,
    pub left: Vec<Vec<Complex64>>,
}

pub fn biorthogonal_basis(h: &DiscreteHamiltonian) -> Result<Biorthogonal> {
    let hm = h.matrix();
    let scale = hm.max_abs().max(f64::MIN_POSITIVE);
    let eigs = eigenvalues(hm)?;
    if let Some(z) = eigs.iter().find(|z| z.im.abs() > SPECTRAL_TOL * scale) {
        return Err(Error::SpectralPrecondition(format!("complex eigenvalue {z}")));
    }
    let values: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    if let Some(w) = values.windows(2).find(|w| w[1] - w[0] <= SPECTRAL_TOL * scale) {
        return Err(Error::SpectralPrecondition(format!("degenerate eigenvalues {} and {}", w[0], w[1])));
    }
    let hd = hm.adjoint();
    let mut right = Vec::with_capacity(values.len());
    let mut left = Vec::with_capacity(values.len());
    for &mu in &values {
        let r = eigenvector(hm, Complex64::new(mu, 0.0))?;
        let mut l = eigenvector(&hd, Complex64::new(mu, 0.0))?;
        let overlap: Complex64 = l.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
        if overlap.norm() <= SPECTRAL_TOL {
            return Err(Error::SpectralPrecondition(format!("left and right eigenvectors orthogonal at {mu}")));
        }
        let s = overlap.conj();
        l.iter_mut().for_each(|x| *x /= s);
        right.push(r);
        left.push(l);
    }
    Ok(Biorthogonal {
        eigenvalues: values,
        right,
        left,
    })
}

/// `Theta = sum_n kappa_n |L_n><L_n|` over the left eigenvectors of `h`.
pub fn spectral_metric(h: &DiscreteHamiltonian, kappas: &[f64]) -> Result<MetricCandidate> {
    if kappas.len() != h.dim() {
        return Err(Error::Dimension(format!("{} weights for a {}x{} Hamiltonian", kappas.len(), h.dim(), h.dim())));
    }
    if let Some(k) = kappas.iter().find(|k| !(**k > 0.0 && k.is_finite())) {
        return Err(Error::SpectralPrecondition(format!("weight {k} is not positive")));
    }
    let bio = biorthogonal_basis(h)?;
    let n = h.dim();
    let theta = DenseMatrix::from_fn(n, n, |i, j| {
        bio.left
            .iter()
            .zip(kappas)
            .map(|(l, k)| *k * l[i] * l[j].conj())
            .sum()
    });
    classify_metric(h, theta, None)
}

/// `phi^dagger Theta psi`.
pub fn metric_inner_product(theta: &DenseMatrix, phi: &[Complex64], psi: &[Complex64]) -> Result<Complex64> {
    if phi.len() != theta.rows() {
        return Err(Error::Dimension(format!("bra of length {} against {}x{} metric", phi.len(), theta.rows(), theta.cols())));
    }
    let t = theta.mul_vec(psi)?;
    Ok(phi.iter().zip(&t).map(|(a, b)| a.conj() * b).sum())
}
