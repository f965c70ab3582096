//! Brute-force oracles shared by the integration tests. They avoid the
//! crate's own eigen and root machinery.
#![allow(dead_code)]

use std::io::Write;

use num_complex::Complex64;
use pt_star::linalg::DenseMatrix;

/// Characteristic polynomial coefficients of `m`, leading first, by the
/// Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(m: &DenseMatrix) -> Vec<Complex64> {
    let n = m.rows();
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut mk = DenseMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k
        let mut next = m * &mk;
        for i in 0..n {
            next[(i, i)] += coeffs[k - 1];
        }
        mk = next;
        let c = -(m * &mk).trace() / k as f64;
        coeffs.push(c);
    }
    coeffs
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// All roots of a monic polynomial by Durand-Kerner iteration.
pub fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let seed = Complex64::new(0.4, 0.9);
    let radius = 1.0 + coeffs.iter().skip(1).map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0_f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(coeffs, z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    z
}

/// Writes straight to the stderr handle so the line shows up even when the
/// test harness captures output.
pub fn report(criterion: u32, title: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[criterion {criterion:>2}] {verdict} {title}: {detail}");
}
