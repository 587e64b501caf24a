//! Jacobi-field, density, shape-operator and volume series along one direction.

use harmonic_lab::geometry::{curvature_jet, damek_ricci, Space};
use harmonic_lab::radial::{density_series, jacobi_recursion, shape_trace_series, volume_series, vk_recursion};
use harmonic_lab::sampling::random_unit;

fn main() -> harmonic_lab::Result<()> {
    let space = Space::new(damek_ricci(3, 1, 1)?);
    let n = space.dim();
    let u = random_unit(n, 3);
    let jet = curvature_jet(&space, &u, 4)?;
    let a = jacobi_recursion(&jet, 6);
    let (d, _, _) = density_series(&a)?;
    println!("Theta = {} + {} r^2 + {} r^4 + {} r^6", d.a0, d.a2, d.a4, d.a6);
    let tr = shape_trace_series(&a, &jet)?;
    for (p, c) in tr.tr_sigma.coeffs.iter().enumerate() {
        println!("Tr sigma  r^{:<2} {c:+.12e}", tr.tr_sigma.offset + p as i32);
    }
    println!("Tr(R_nu o sigma) r^3 {:+.12e}", tr.tr_r_sigma.coeff(3));
    let vol = volume_series(&d, n)?;
    let vk = vk_recursion(&d.as_array(), n)?;
    for (k, v) in vk.iter().enumerate() {
        println!("V_{} recursion {v:+.15e} division {:+.15e}", 2 * k, vol.ratio.coeff(1 + 2 * k as i32));
    }
    Ok(())
}
