//! The continuous q-armed star graph.
//!
//! Arm `j` runs from its outer tip at `x = 0` to the shared centre at
//! `x = L`. At the tip the wave function obeys the complex Robin condition
//! `psi_j'(0) = i alpha e^{i j phi} psi_j(0)` with `phi = 2 pi / q`; at the
//! centre the arms are glued by continuity plus a vanishing derivative sum.
//!
//! On arm `j` the solution satisfying the tip condition is
//! `a_j (cos kx + i alpha w_j sin(kx)/k)`, `w_j = e^{i j phi}`, so the
//! centre conditions reduce to a q x q linear system in the amplitudes.
//! Entries use `sin(kL)/k` so the determinant is entire in `k`.
//!
//! Summing the arm ratios in closed form gives
//! `F(k) = (q k / t) (-(-i alpha t)^q - t^2 k^q) / (k^q - (-i alpha t)^q)`
//! with `t = tan kL`, which for `q = 6` is `-6 k` times
//! [`closed_form_q6`]'s product.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{lu_determinant, singular_value_decomposition, DenseMatrix};

/// Ratio `sigma_min / sigma_max` below which [`edge_solution`] accepts `k`.
pub const EDGE_ROOT_TOL: f64 = 1e-7;

/// Relative guard on `|f_j(k)|` below which [`secular_scalar`] reports a pole.
pub const POLE_GUARD: f64 = 1e-8;

/// Parameters of the continuous star graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarGraphSpec {
    q: usize,
    length: f64,
    alpha: f64,
}

impl StarGraphSpec {
    /// Star with `q` arms of unit length and tip coupling `alpha`.
    pub fn new(q: usize, alpha: f64) -> Result<Self> {
        Self::with_length(q, alpha, 1.0)
    }

    pub fn with_length(q: usize, alpha: f64, length: f64) -> Result<Self> {
        if q < 2 {
            return Err(Error::Argument(format!("star graph needs q >= 2 arms, got {q}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Argument(format!("arm length must be positive, got {length}")));
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::Argument(format!("coupling alpha must be >= 0, got {alpha}")));
        }
        Ok(Self { q, length, alpha })
    }

    /// Same graph with a different coupling.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::with_length(self.q, alpha, self.length)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `phi = 2 pi / q`.
    pub fn phase_step(&self) -> f64 {
        2.0 * PI / self.q as f64
    }

    /// `e^{i j phi}`.
    pub fn tip_phase(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, j as f64 * self.phase_step())
    }

    /// Robin coefficient `i alpha e^{i j phi}` of arm `j`.
    pub fn tip_coupling(&self, j: usize) -> Complex64 {
        Complex64::new(0.0, self.alpha) * self.tip_phase(j)
    }

    /// Arm value and derivative at the centre, `(f_j(k), g_j(k))`, for unit
    /// amplitude.
    pub fn arm_center_values(&self, j: usize, k: Complex64) -> (Complex64, Complex64) {
        let kl = k * self.length;
        let (s, c) = (kl.sin(), kl.cos());
        let beta = self.tip_coupling(j);
        (c + beta * s / k, -k * s + beta * c)
    }
}

fn require_nonzero(k: Complex64) -> Result<()> {
    if k.norm() == 0.0 {
        Err(Error::Domain(
            "k = 0 is excluded; the constant mode exists only at alpha = 0 and is reported separately".into(),
        ))
    } else {
        Ok(())
    }
}

/// Secular matrix acting on the arm amplitudes `(a_0, ..., a_{q-1})`.
///
/// Rows `0..q-1` are the continuity conditions `f_j a_j - f_0 a_0 = 0`
/// for `j = 1..q`, the last row is the derivative sum `sum_j g_j a_j = 0`.
pub fn secular_matrix(spec: &StarGraphSpec, k: Complex64) -> Result<DenseMatrix> {
    require_nonzero(k)?;
    let q = spec.q;
    let (f, g): (Vec<_>, Vec<_>) = (0..q).map(|j| spec.arm_center_values(j, k)).unzip();
    let mut m = DenseMatrix::zeros(q, q);
    for j in 1..q {
        m[(j - 1, 0)] = -f[0];
        m[(j - 1, j)] = f[j];
    }
    for (j, gj) in g.into_iter().enumerate() {
        m[(q - 1, j)] = gj;
    }
    Ok(m)
}

pub fn secular_determinant(spec: &StarGraphSpec, k: Complex64) -> Result<Complex64> {
    lu_determinant(&secular_matrix(spec, k)?)
}

/// Reduced secular function, or a pole flag when some `f_j(k)` vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reduced {
    Value(Complex64),
    Pole,
}

impl Reduced {
    pub fn value(self) -> Option<Complex64> {
        match self {
            Reduced::Value(v) => Some(v),
            Reduced::Pole => None,
        }
    }
}

/// `F(k) = sum_j g_j(k) / f_j(k)`; its zeros are the zeros of the secular
/// determinant away from the zeros of the `f_j`.
pub fn secular_scalar(spec: &StarGraphSpec, k: Complex64) -> Result<Reduced> {
    require_nonzero(k)?;
    let guard = POLE_GUARD * (1.0 + k.norm() * spec.length);
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..spec.q {
        let (f, g) = spec.arm_center_values(j, k);
        if f.norm() < guard {
            return Ok(Reduced::Pole);
        }
        sum += g / f;
    }
    Ok(Reduced::Value(sum))
}

/// The two displayed factors of the six-arm secular equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormQ6 {
    /// `tan kL`
    pub factor_tan: Complex64,
    /// `(k^6 - alpha^6 tan^4 kL) / (k^6 + alpha^6 tan^6 kL)`
    pub factor_ratio: Complex64,
    pub product: Complex64,
}

/// Closed-form six-arm secular function. `None` at poles of `tan kL` or of
/// the ratio's denominator.
pub fn closed_form_q6(alpha: f64, k: Complex64, length: f64) -> Option<ClosedFormQ6> {
    let kl = k * length;
    let cos = kl.cos();
    if cos.norm() < 1e-12 {
        return None;
    }
    let t = kl.sin() / cos;
    let k6 = k.powi(6);
    let a6 = alpha.powi(6);
    let denom = k6 + a6 * t.powi(6);
    if denom.norm() == 0.0 || !denom.norm().is_finite() {
        return None;
    }
    let ratio = (k6 - a6 * t.powi(4)) / denom;
    Some(ClosedFormQ6 {
        factor_tan: t,
        factor_ratio: ratio,
        product: t * ratio,
    })
}

/// Everything known about the secular problem at one momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularEvaluation {
    pub k: Complex64,
    pub det_value: Complex64,
    /// Absent at poles of the reduced form.
    pub scalar_value: Option<Complex64>,
    /// Closed-form factors, only for six arms away from their poles.
    pub closed_form: Option<ClosedFormQ6>,
}

pub fn evaluate(spec: &StarGraphSpec, k: Complex64) -> Result<SecularEvaluation> {
    let det_value = secular_determinant(spec, k)?;
    let scalar_value = secular_scalar(spec, k)?.value();
    let closed_form = if spec.q == 6 {
        closed_form_q6(spec.alpha, k, spec.length)
    } else {
        None
    };
    Ok(SecularEvaluation {
        k,
        det_value,
        scalar_value,
        closed_form,
    })
}

/// Amplitudes of a bound state on each arm.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSolution {
    pub k: Complex64,
    /// `a_j`; the largest has modulus one and is real positive.
    pub coefficients: Vec<Complex64>,
    /// `||M(k) a|| / ||M(k)||_F`.
    pub relative_residual: f64,
}

impl EdgeSolution {
    /// `psi_j(x)` on arm `j`, `x` measured from the tip.
    pub fn wave_function(&self, spec: &StarGraphSpec, j: usize, x: f64) -> Complex64 {
        let kx = self.k * x;
        self.coefficients[j] * (kx.cos() + spec.tip_coupling(j) * kx.sin() / self.k)
    }
}

/// Null vector of the secular matrix at a root `k`.
pub fn edge_solution(spec: &StarGraphSpec, k: Complex64) -> Result<EdgeSolution> {
    let m = secular_matrix(spec, k)?;
    let svd = singular_value_decomposition(&m)?;
    let n = svd.singular_values.len();
    let smallest = svd.singular_values[n - 1];
    let largest = svd.singular_values[0];
    if smallest > EDGE_ROOT_TOL * largest {
        return Err(Error::NotARoot {
            k: format!("{k}"),
            smallest,
            next: svd.singular_values[n.saturating_sub(2)],
        });
    }
    let mut coefficients = svd.right_vectors[n - 1].clone();
    crate::linalg::fix_phase(&mut coefficients);
    let top = coefficients.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for z in coefficients.iter_mut() {
        *z /= top;
    }
    let r = m.mul_vec(&coefficients)?;
    let rnorm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(EdgeSolution {
        k,
        coefficients,
        relative_residual: rnorm / m.frobenius_norm(),
    })
}
