//! Tabulates the reduced secular function and the closed-form factors of
//! the six-arm graph along the real axis.

use num_complex::Complex64;
use pt_star::stargraph::{evaluate, StarGraphSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = StarGraphSpec::new(6, 0.7)?;
    println!("{:>6} {:>14} {:>14} {:>14}", "k", "det M", "F", "tan * ratio");
    for i in 1..=20 {
        let k = 0.1 * i as f64;
        let e = evaluate(&spec, Complex64::new(k, 0.0))?;
        let f = e.scalar_value.map_or("pole".to_string(), |v| format!("{:.6e}", v.re));
        let c = e.closed_form.map_or("pole".to_string(), |c| format!("{:.6e}", c.product.re));
        println!("{k:>6.2} {:>14.6e} {f:>14} {c:>14}", e.det_value.re);
    }
    Ok(())
}
