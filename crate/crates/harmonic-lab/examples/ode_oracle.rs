//! Numerical Jacobi-equation integration against the algebraic series, plus a CSV of samples.

use harmonic_lab::geometry::{curvature_jet, damek_ricci, Space};
use harmonic_lab::radial::{jacobi_recursion, oracle_coefficients, samples_to_csv, OdeOracle};
use harmonic_lab::sampling::random_unit;

fn main() -> harmonic_lab::Result<()> {
    let space = Space::new(damek_ricci(2, 1, 0)?);
    let u = random_unit(space.dim(), 5);
    let series = jacobi_recursion(&curvature_jet(&space, &u, 4)?, 6);
    let (oracle, summary) = oracle_coefficients(&space, &u, 4, 0.4, 1e-3)?;
    for k in 0..=4 {
        println!("r^{k}: max entry difference {:.2e}", (&oracle[k] - &series.coeffs[k]).amax());
    }
    println!("Theta from the ODE: {:?}", summary.theta);
    let samples = OdeOracle::new(&space, &u, 1e-2).run(1.0, 4)?;
    print!("{}", samples_to_csv(&samples).lines().map(|l| l.split(',').take(4).collect::<Vec<_>>().join(",") + "\n").collect::<String>());
    Ok(())
}
