//! Intrinsic Ricci norm of geodesic spheres: Gauss-equation fit along the ODE against the series.

use harmonic_lab::geometry::{curvature_jet, damek_ricci, Space};
use harmonic_lab::heatinv::{sphere_curvature_fit, sphere_ricci_norm_series};
use harmonic_lab::radial::jacobi_recursion;
use harmonic_lab::sampling::random_unit;

fn main() -> harmonic_lab::Result<()> {
    let space = Space::new(damek_ricci(3, 1, 1)?);
    let u = random_unit(space.dim(), 2);
    let series = sphere_ricci_norm_series(&curvature_jet(&space, &u, 4)?, &jacobi_recursion(&curvature_jet(&space, &u, 4)?, 6))?;
    let fit = sphere_curvature_fit(&space, &u, 0.02, 0.2, 6, 2, 1e-3)?;
    for (j, p) in [-4, -2, 0, 2].into_iter().enumerate() {
        println!("|Ric^S|^2 r^{p:<2}: fit {:+.8e} series {:+.8e}", fit.ric2[j], series.coeff(p));
    }
    Ok(())
}
