//! Builds members of the four-parameter metric family for the 4x4 chain
//! model and watches positivity fail at the phase boundary.

use pt_star::cryptoherm::{assemble_metric, build_h4, spectrum_reality};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for lambda in [0.5, 0.9, 0.999, 1.001, 1.5] {
        let reality = spectrum_reality(&build_h4(lambda), 1e-12)?;
        let m = assemble_metric(lambda, [1.0, 0.0, 0.0, 0.0])?;
        println!(
            "lambda {lambda:<6} real spectrum {:<5} residual {:.1e}  min eig {:+.4e}  metric {}",
            reality.is_real(),
            m.residual,
            m.min_eigenvalue,
            m.is_metric
        );
    }
    Ok(())
}
