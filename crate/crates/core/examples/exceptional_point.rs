//! Locates the coupling where two real momenta merge and checks that their
//! separation closes like a square root.

use pt_star::roots::{find_exceptional_point, gap_exponent, EpOptions, Interval};
use pt_star::stargraph::StarGraphSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = StarGraphSpec::new(6, 0.0)?;
    let window = Interval::new(0.05, 2.0)?;
    let ep = find_exceptional_point(&base, Interval::new(0.7, 1.0)?, window, &EpOptions::default())?;
    println!("alpha* = {:.12}", ep.alpha_star);
    println!("k*     = {:.12}", ep.k_star);
    println!("counts {:?}, |F| = {:.1e}, |F'| = {:.1e}", ep.counts, ep.residual_f, ep.residual_df);

    let deltas: Vec<f64> = (0..=6).map(|i| 1e-5 * 10f64.powf(0.5 * i as f64)).collect();
    let fit = gap_exponent(&base, &ep, &deltas)?;
    for (d, gap) in &fit.points {
        println!("  delta {d:.1e}  gap {gap:.6e}");
    }
    println!("gap ~ {:.4} * delta^{:.4}", fit.prefactor, fit.exponent);
    Ok(())
}
