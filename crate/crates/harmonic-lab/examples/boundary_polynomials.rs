//! Dirichlet and Neumann r^3 coefficients decomposed over (C^3, CH, L, Tr R'R') in both expansion modes.

use harmonic_lab::geometry::{curvature_jet, damek_ricci, Space};
use harmonic_lab::heatinv::{boundary_polynomials, BoundaryCondition, ExpansionMode, HeatInvariantInputs, ShapeFit};
use harmonic_lab::invariants::{point_invariants, FastJacobi};
use harmonic_lab::radial::{density_series, jacobi_recursion, shape_trace_series};
use harmonic_lab::sampling::random_unit;

fn main() -> harmonic_lab::Result<()> {
    let fit = ShapeFit::calibrate(true)?;
    let space = Space::new(damek_ricci(3, 1, 1)?);
    let inputs = HeatInvariantInputs::from(&point_invariants(&space, 4, 0));
    let u = random_unit(space.dim(), 1);
    let jet = curvature_jet(&space, &u, 4)?;
    let a = jacobi_recursion(&jet, 6);
    let tr = shape_trace_series(&a, &jet)?;
    let (_, theta, _) = density_series(&a)?;
    let trp = FastJacobi::new(&space).tr_r1r1(&u);
    for mode in [ExpansionMode::Natural, ExpansionMode::Normalized] {
        for cond in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let bp = boundary_polynomials(&tr, &theta, &theta, &inputs, trp, cond, mode, &fit)?;
            println!("{mode:?} {cond:?}: P1 = {:.6}", bp.p1);
            for d in &bp.decompositions {
                let r = d.rational.as_ref().map_or("-".to_string(), |r| format!("C3 {} CH {} L {} TrR'R' {}", r.C3, r.CH, r.L, r.TrRpRp));
                println!("  {:<26} {r}  (geometry residual {:.1e})", d.quantity, d.geometry_residual);
            }
        }
    }
    Ok(())
}
