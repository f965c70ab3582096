mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use pt_star::linalg::{eigenvalues, is_positive_definite, lu_determinant, real_null_space, DenseMatrix};
use pt_star::roots::{
    count_real_roots, locate_complex_roots, ContourOptions, Interval, Rect, ScanOptions,
};
use pt_star::stargraph::StarGraphSpec;

fn matrix(n: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |v| {
        DenseMatrix::from_vec(n, n, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
    })
}

fn sized_matrix(max: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max).prop_flat_map(matrix)
}

/// Cholesky on the Hermitian matrix `m`; succeeds only for positive definite input.
fn cholesky_succeeds(m: &DenseMatrix) -> bool {
    let n = m.rows();
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / d;
        }
    }
    true
}

fn quadratic_form(m: &DenseMatrix, x: &[Complex64]) -> f64 {
    let mx = m.mul_vec(x).unwrap();
    x.iter().zip(&mx).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_is_multiplicative((a, b) in (1..=6usize).prop_flat_map(|n| (matrix(n), matrix(n)))) {
        let ab = a.try_mul(&b).unwrap();
        let lhs = lu_determinant(&ab).unwrap();
        let rhs = lu_determinant(&a).unwrap() * lu_determinant(&b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
    }

    #[test]
    fn determinant_matches_characteristic_polynomial(a in sized_matrix(6)) {
        // constant term of det(zI - A) is (-1)^n det A
        let c = common::characteristic_polynomial(&a);
        let n = a.rows();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let det = lu_determinant(&a).unwrap();
        prop_assert!((c[n] * sign - det).norm() <= 1e-10 * (1.0 + det.norm()));
    }

    #[test]
    fn trace_is_the_eigenvalue_sum(a in sized_matrix(8)) {
        let sum: Complex64 = eigenvalues(&a).unwrap().iter().sum();
        prop_assert!((sum - a.trace()).norm() <= 1e-10 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn null_space_vectors_are_annihilated(
        rows in prop::collection::vec(prop::collection::vec(-1.0..1.0f64, 6), 1..=4),
    ) {
        // fewer rows than columns guarantees a kernel
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let a = DenseMatrix::from_real_rows(&refs);
        let tol = 1e-9;
        let ns = real_null_space(&a, tol).unwrap();
        prop_assert!(ns.dimension() >= 6 - rows.len());
        let norm = ns.singular_values[0].max(f64::MIN_POSITIVE);
        for v in &ns.basis {
            let x: Vec<Complex64> = v.iter().map(|&t| Complex64::new(t, 0.0)).collect();
            let r = a.mul_vec(&x).unwrap().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(r <= 10.0 * tol * norm, "residual {r}");
        }
    }

    #[test]
    fn positivity_agrees_with_cholesky_and_quadratic_forms(
        a in sized_matrix(5),
        shift in 0.0..2.0f64,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let n = a.rows();
        let gram = a.adjoint().try_mul(&a).unwrap();
        let m = gram.try_sub(&DenseMatrix::identity(n).scale(Complex64::new(shift, 0.0))).unwrap();
        let verdict = is_positive_definite(&m, 1e-12, 0.0).unwrap();
        // skip matrices sitting on the boundary, where either answer is defensible
        prop_assume!(verdict.min_eigenvalue.abs() > 1e-9);
        prop_assert_eq!(verdict.is_positive_definite, cholesky_succeeds(&m));
        if verdict.is_positive_definite {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..1000 {
                let mut x: Vec<Complex64> =
                    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                let len = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                x.iter_mut().for_each(|z| *z /= len);
                prop_assert!(quadratic_form(&m, &x) > 0.0);
            }
        }
    }
}

fn rect() -> Rect {
    Rect::new(Interval::new(0.0, 2.0).unwrap(), Interval::new(0.01, 1.0).unwrap())
}

fn census(alpha: f64) -> (usize, usize) {
    let spec = StarGraphSpec::new(6, alpha).unwrap();
    let real = count_real_roots(&spec, Interval::new(0.05, 2.0).unwrap(), &ScanOptions::default()).unwrap();
    let complex = locate_complex_roots(&spec, rect(), &ContourOptions::default()).unwrap();
    (real, complex.iter().map(|r| r.multiplicity).sum())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // below about 0.4 the lowest real root sits under k = 0.05, and past
    // about 1.18 the top one crosses k = 2, so both leave the window
    #[test]
    fn root_total_is_conserved(alpha in 0.45..1.15f64) {
        let (real, complex) = census(alpha);
        prop_assert_eq!(real + 2 * complex, 6, "alpha {}: {} real, {} complex", alpha, real, complex);
    }
}

#[test]
fn one_root_leaves_the_axis_at_the_merger() {
    let alpha_star = 0.786_280_630_2;
    let below = census(alpha_star - 1e-3);
    let above = census(alpha_star + 1e-3);
    assert_eq!(below.0, above.0 + 2);
    assert_eq!(above.1, below.1 + 1);
}
