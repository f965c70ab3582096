use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, DenseMatrix};

/// A finite non-Hermitian Hamiltonian together with its coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteHamiltonian {
    matrix: DenseMatrix,
    lambda: f64,
    label: String,
}

impl DiscreteHamiltonian {
    pub fn new(matrix: DenseMatrix, lambda: f64, label: impl Into<String>) -> Result<Self> {
        matrix.require_square("Hamiltonian")?;
        Ok(Self {
            matrix,
            lambda,
            label: label.into(),
        })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The four-site chain with a non-reciprocal middle bond:
/// hopping `-1 - lambda` from site 3 to 2 and `-1 + lambda` back.
pub fn build_h4(lambda: f64) -> DiscreteHamiltonian {
    let l = lambda;
    let m = DenseMatrix::from_real_rows(&[
        &[2.0, -1.0, 0.0, 0.0],
        &[-1.0, 2.0, -1.0 - l, 0.0],
        &[0.0, -1.0 + l, 2.0, -1.0],
        &[0.0, 0.0, -1.0, 2.0],
    ]);
    DiscreteHamiltonian {
        matrix: m,
        lambda,
        label: "h4".into(),
    }
}

/// Component `index` (1 to 4) of the explicit metric family of [`build_h4`].
pub fn metric_component(index: usize, lambda: f64) -> Result<DenseMatrix> {
    let l = lambda;
    let rows: [[f64; 4]; 4] = match index {
        1 => [
            [1.0 - l, 0.0, 0.0, 0.0],
            [0.0, 1.0 - l, 0.0, 0.0],
            [0.0, 0.0, 1.0 + l, 0.0],
            [0.0, 0.0, 0.0, 1.0 + l],
        ],
        2 => [
            [0.0, 1.0 - l, 0.0, 0.0],
            [1.0 - l, 0.0, 1.0 - l * l, 0.0],
            [0.0, 1.0 - l * l, 0.0, 1.0 + l],
            [0.0, 0.0, 1.0 + l, 0.0],
        ],
        3 => [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0 - l, 0.0, 1.0],
            [1.0, 0.0, 1.0 + l, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ],
        4 => [
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ],
        _ => return Err(Error::Argument(format!("metric component index {index} outside 1..=4"))),
    };
    Ok(DenseMatrix::from_fn(4, 4, |i, j| real(rows[i][j])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumClass {
    Real,
    ComplexPairs,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReality {
    pub class: SpectrumClass,
    pub eigenvalues: Vec<Complex64>,
    pub max_imag: f64,
}

impl SpectrumReality {
    pub fn is_real(&self) -> bool {
        self.class == SpectrumClass::Real
    }
}

/// Real iff every `|Im E| <= tol * ||H||_max`.
pub fn spectrum_reality(h: &DiscreteHamiltonian, tol: f64) -> Result<SpectrumReality> {
    let eigenvalues = eigenvalues(h.matrix())?;
    let max_imag = eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let class = if max_imag <= tol * h.matrix().max_abs() {
        SpectrumClass::Real
    } else {
        SpectrumClass::ComplexPairs
    };
    Ok(SpectrumReality {
        class,
        eigenvalues,
        max_imag,
    })
}
