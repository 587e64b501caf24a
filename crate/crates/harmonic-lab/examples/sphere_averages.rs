//! Exact sphere moments against closed forms and a seeded Monte-Carlo estimate.

use harmonic_lab::geometry::{damek_ricci, Space};
use harmonic_lab::heatinv::ams_sphere_averages;
use harmonic_lab::invariants::point_invariants;

fn main() -> harmonic_lab::Result<()> {
    let space = Space::new(damek_ricci(3, 1, 1)?);
    let inv = point_invariants(&space, 8, 0);
    let avg = ams_sphere_averages(&space, &inv, 200_000, 9)?;
    println!("alpha: exact {:.12} closed {:.12} mc {:.6} +- {:.1e}", avg.alpha_exact, avg.alpha_closed_form, avg.alpha_monte_carlo.mean, avg.alpha_monte_carlo.stderr);
    println!("beta:  exact {:.12} closed {:.12} mc {:.6} +- {:.1e}", avg.beta_exact, avg.beta_closed_form, avg.beta_monte_carlo.mean, avg.beta_monte_carlo.stderr);
    for e in avg.check(1e-7, 4.0).entries {
        println!("  {:<45} {:.2e} pass {}", e.identity, e.rel_residual, e.pass);
    }
    Ok(())
}
