//! Discretizes the star graph with second-order differences and checks
//! that the momenta converge to the scan roots at the expected rate.

use num_complex::Complex64;
use pt_star::cryptoherm::{convergence_study, FdStarOperator};
use pt_star::roots::{scan_real_roots, Interval, ScanOptions};
use pt_star::stargraph::StarGraphSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = StarGraphSpec::new(6, 0.7)?;
    let targets: Vec<f64> = scan_real_roots(&spec, Interval::new(0.05, 2.0)?, &ScanOptions::default())?
        .iter()
        .map(|r| r.k)
        .collect();
    let study = convergence_study(&spec, &[100, 200, 400, 800], &targets)?;
    for t in &study.targets {
        let errs: Vec<String> = t.errors.iter().map(|e| format!("{e:.2e}")).collect();
        println!("k = {:.10}  errors [{}]  order {:.3}", t.target, errs.join(", "), t.order);
    }
    println!("min order {:.3}", study.min_order);

    // complex momenta come out of the same pencil
    let op = FdStarOperator::new(&spec.with_alpha(1.0)?, 400)?;
    let k = op.momentum_near(Complex64::new(0.78, 0.62))?;
    println!("alpha 1, n 400: complex momentum {k:.8}");
    Ok(())
}
