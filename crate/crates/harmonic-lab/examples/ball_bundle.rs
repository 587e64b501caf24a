//! Z-ball eigenvalues fed through mu = sqrt(lambda / 4) into the X-radial problem, and the Landau-level map.

use harmonic_lab::spectra::{ball_bundle_spectrum, glz_parameter_map, BallBundleParams, Boundary};

fn main() -> harmonic_lab::Result<()> {
    let params = BallBundleParams {
        k: 8,
        n: 0,
        m: 0,
        l: 3,
        z_radius: 1.0,
        s: 0,
        z_boundary: Boundary::NEUMANN,
        z_count: 3,
        t_max: 4.0,
        x_boundary: Boundary::DIRICHLET,
        x_count: 3,
        grid: 256,
        tol: 1e-2,
    };
    let rep = ball_bundle_spectrum(&params)?;
    for br in &rep.branches {
        println!("lambda_{} = {:.8} -> mu = {:.8}: {:?}", br.index, br.lambda, br.mu, br.spectrum.eigenvalues());
    }
    let g = glz_parameter_map(1.0, 1.0, 1.0, 1.0, 1.0)?;
    println!("e = B = hbar = c = 1: mu = {}, |X|^2 coefficient ratio {}", g.mu, g.ratio);
    Ok(())
}
