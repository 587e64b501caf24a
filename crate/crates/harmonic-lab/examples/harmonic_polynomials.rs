//! H^(n,m) bases by exact harmonic projection, checked against a floating-point eigen oracle.

use harmonic_lab::clifford::j_map;
use harmonic_lab::spectra::{build_hnm_basis, eigen_multiplicities, harmonic_dimension};

fn main() -> harmonic_lab::Result<()> {
    let z = [0.0, 0.6, 0.8];
    for (a, b) in [(2, 0), (1, 1)] {
        let jm = j_map(3, a, b)?;
        for n in 0..=3 {
            let h = build_hnm_basis(&jm, &z, n)?;
            let exact = (0..h.dimension()).all(|i| h.verify_element(i) == (true, true));
            println!(
                "SH^({a},{b})_3 n = {n}: {:?} (total {} of {}), oracle {:?}, exact checks {exact}",
                h.multiplicities(),
                h.dimension(),
                harmonic_dimension(jm.k(), n),
                eigen_multiplicities(&jm, &z, n)?
            );
        }
    }
    Ok(())
}
