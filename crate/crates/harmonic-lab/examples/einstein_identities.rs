//! Point invariants and the curvature-norm, density and Lichnerowicz identities.

use harmonic_lab::geometry::{damek_ricci, Space};
use harmonic_lab::invariants::{point_invariants, verify_einstein_identities};

fn main() -> harmonic_lab::Result<()> {
    for (a, b) in [(2, 0), (1, 1)] {
        let space = Space::new(damek_ricci(3, a, b)?);
        let inv = point_invariants(&space, 16, 1);
        println!(
            "SH^({a},{b})_3: C = {:.6} H = {:.6} L = {:.6} |nabla R|^2 = {:.6} R^ = {:.6} R° = {:.6}",
            inv.c.value, inv.h.value, inv.l.value, inv.norm_del_r2, inv.r_hat, inv.r_ring
        );
        for e in verify_einstein_identities(&inv, 1e-8).entries {
            println!("  {:<20} rel {:.2e} pass {}", e.identity, e.rel_residual, e.pass);
        }
    }
    Ok(())
}
