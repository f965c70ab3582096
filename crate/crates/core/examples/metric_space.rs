//! Solves the intertwining relation directly and confirms that the known
//! family spans the whole solution space.

use pt_star::cryptoherm::{build_h4, metric_component, solve_metric_space};
use pt_star::linalg::DEFAULT_RANK_TOL;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = 0.6;
    let h = build_h4(lambda);
    let space = solve_metric_space(&h, DEFAULT_RANK_TOL)?;
    println!("dimension {}", space.dimension());
    for j in 1..=4 {
        let p = space.project(&metric_component(j, lambda)?)?;
        println!("  M{j}: projection residual {:.1e}", p.relative_residual);
    }
    match space.search_positive(&h, 1000, 1)? {
        Some(m) => println!("positive member, min eigenvalue {:.4}", m.min_eigenvalue),
        None => println!("no positive member found"),
    }
    Ok(())
}
