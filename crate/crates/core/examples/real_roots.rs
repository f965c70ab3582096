//! Real momenta of the six-arm graph for a few coupling strengths, with
//! the arm amplitudes of each bound state.

use num_complex::Complex64;
use pt_star::roots::{scan_real_roots, Interval, ScanOptions};
use pt_star::stargraph::{edge_solution, StarGraphSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let window = Interval::new(0.05, 2.0)?;
    for alpha in [0.5, 0.7, 1.0] {
        let spec = StarGraphSpec::new(6, alpha)?;
        let roots = scan_real_roots(&spec, window, &ScanOptions::default())?;
        println!("alpha = {alpha}: {} real roots", roots.len());
        for r in roots {
            let sol = edge_solution(&spec, Complex64::new(r.k, 0.0))?;
            let amps: Vec<String> = sol.coefficients.iter().map(|a| format!("{:.3}", a.norm())).collect();
            println!("  k = {:.12}  |a_j| = [{}]", r.k, amps.join(", "));
        }
    }
    Ok(())
}
