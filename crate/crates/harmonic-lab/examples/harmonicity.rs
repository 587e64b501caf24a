//! The five trace conditions over seeded random directions on several family members.

use harmonic_lab::geometry::{damek_ricci, Space};
use harmonic_lab::invariants::verify_harmonicity;

fn main() -> harmonic_lab::Result<()> {
    for (l, a, b) in [(1, 1, 0), (3, 1, 0), (3, 2, 0), (3, 1, 1)] {
        let space = Space::new(damek_ricci(l, a, b)?);
        let rep = verify_harmonicity(&space, 100, 1e-8, 42);
        println!("SH^({a},{b})_{l} (dim {}): pass = {}", space.dim(), rep.pass);
        for e in &rep.entries {
            println!("  {:<40} residual {:.2e}", e.identity, e.rel_residual);
        }
    }
    Ok(())
}
