//! Pass/fail matrix for the (2,0) and (1,1) members, plus a mismatched-mu negative control.

use harmonic_lab::clifford::j_map;
use harmonic_lab::spectra::{conjugacy_check, isospectrality_report, FamilyParams};

fn main() -> harmonic_lab::Result<()> {
    let (a, b) = (j_map(3, 2, 0)?, j_map(3, 1, 1)?);
    let c = conjugacy_check(&a.j_z(&[0.0, 0.6, 0.8]), &b.j_z(&[0.0, 0.6, 0.8]))?;
    println!("conjugator residual {:.1e}, skew spectrum {:?}", c.residual, c.singular_values);
    let rep = isospectrality_report(&a, &b, &FamilyParams::standard(3))?;
    for (z, n, m, pass) in rep.matrix() {
        println!("Z#{z} n={n} m={m:+}: {}", if pass { "pass" } else { "FAIL" });
    }
    let control = isospectrality_report(&a, &b, &FamilyParams { mu_scale_b: 1.02, n_max: 1, ..FamilyParams::standard(3) })?;
    println!("all cells pass: {}; mismatched-mu control passes: {}", rep.pass, control.pass);
    Ok(())
}
