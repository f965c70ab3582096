//! Metric from biorthogonal eigenvectors, and the inner product it induces.

use num_complex::Complex64;
use pt_star::cryptoherm::{biorthogonal_basis, build_h4, metric_inner_product, spectral_metric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = build_h4(0.5);
    let bi = biorthogonal_basis(&h)?;
    println!("eigenvalues {:?}", bi.eigenvalues);
    let m = spectral_metric(&h, &[1.0, 2.0, 3.0, 4.0])?;
    println!("residual {:.1e}, min eigenvalue {:.4}, metric {}", m.residual, m.min_eigenvalue, m.is_metric);
    let x = vec![Complex64::new(1.0, 0.0); 4];
    println!("<x, x>_theta = {:.6}", metric_inner_product(&m.theta, &x, &x)?);

    // past the phase boundary the construction is refused
    match biorthogonal_basis(&build_h4(1.5)) {
        Ok(_) => println!("unexpected biorthogonal basis"),
        Err(e) => println!("lambda 1.5: {e}"),
    }
    Ok(())
}
