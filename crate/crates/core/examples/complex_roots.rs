//! Counts complex momenta in a box with the argument principle and then
//! polishes each one.

use pt_star::roots::{count_complex_roots, locate_complex_roots, ContourOptions, Interval, Rect};
use pt_star::stargraph::StarGraphSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rect = Rect::new(Interval::new(0.0, 2.0)?, Interval::new(0.01, 1.0)?);
    let opts = ContourOptions::default();
    for alpha in [0.7, 1.0] {
        let spec = StarGraphSpec::new(6, alpha)?;
        println!("alpha = {alpha}: winding count {}", count_complex_roots(&spec, rect, &opts)?);
        for r in locate_complex_roots(&spec, rect, &opts)? {
            println!("  k = {:.12}  |det M| = {:.1e}", r.k, r.residual);
        }
    }
    Ok(())
}
