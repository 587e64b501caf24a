//! Restriction of the Laplacian to a Fourier mode of the center and the Landau-level map.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::clifford::JMap;
use crate::error::{Error, Result};

/// `Delta_X + laplacian_derivative_coeff * i D_gamma + constant + x2_coeff |X|^2` on `W_gamma`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplacianSymbol {
    pub mu: f64,
    pub z_norm: f64,
    pub derivative_coeff: f64,
    pub constant: f64,
    pub x2_coeff: f64,
    /// `J_{Z_gamma}`, the generator of the vector field `X -> J X` behind `D_gamma`.
    #[serde(skip)]
    pub generator: DMatrix<f64>,
}

pub fn laplacian_symbol(jmap: &JMap, z: &[f64]) -> Result<LaplacianSymbol> {
    if z.len() != jmap.l() {
        return Err(Error::InvalidArgument(format!("Z has {} components, expected {}", z.len(), jmap.l())));
    }
    let z_norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
    if z_norm == 0.0 {
        return Err(Error::ZeroLatticeVector);
    }
    let pi = std::f64::consts::PI;
    let mu = pi * z_norm;
    Ok(LaplacianSymbol {
        mu,
        z_norm,
        derivative_coeff: 2.0 * pi,
        constant: -4.0 * mu * mu,
        x2_coeff: -mu * mu,
        generator: jmap.j_z(z),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlzMap {
    pub mu: f64,
    /// `|X|^2` coefficient of `-(hbar^2 / 2 mass) <>`, i.e. `hbar^2 mu^2 / (2 mass)`.
    pub diamond_x2_coeff: f64,
    /// Oscillator coefficient `e^2 B^2 / (8 mass c^2)` of the symmetric-gauge Landau Hamiltonian.
    pub landau_x2_coeff: f64,
    pub ratio: f64,
}

/// `mu = e B / (2 hbar c)`.
pub fn glz_parameter_map(e: f64, b_field: f64, mass: f64, c: f64, hbar: f64) -> Result<GlzMap> {
    if [e, b_field, mass, c, hbar].iter().any(|x| !(*x > 0.0)) {
        return Err(Error::InvalidArgument("physical constants must be positive".into()));
    }
    let mu = e * b_field / (2.0 * hbar * c);
    let diamond_x2_coeff = hbar * hbar * mu * mu / (2.0 * mass);
    let landau_x2_coeff = e * e * b_field * b_field / (8.0 * mass * c * c);
    Ok(GlzMap { mu, diamond_x2_coeff, landau_x2_coeff, ratio: diamond_x2_coeff / landau_x2_coeff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::j_map;

    #[test]
    fn unit_vector_gives_pi() {
        let s = laplacian_symbol(&j_map(3, 1, 1).unwrap(), &[0.0, 1.0, 0.0]).unwrap();
        assert!((s.mu - std::f64::consts::PI).abs() < 1e-15);
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((s.constant + 4.0 * pi2).abs() < 1e-12 && (s.x2_coeff + pi2).abs() < 1e-12);
    }

    #[test]
    fn scaling_z() {
        let j = j_map(2, 1, 0).unwrap();
        let (a, b) = (laplacian_symbol(&j, &[0.3, 0.4]).unwrap(), laplacian_symbol(&j, &[0.6, 0.8]).unwrap());
        assert!((b.mu - 2.0 * a.mu).abs() < 1e-14);
        assert!((b.constant - 4.0 * a.constant).abs() < 1e-12);
        assert_eq!(laplacian_symbol(&j, &[0.0, 0.0]).unwrap_err(), Error::ZeroLatticeVector);
    }

    #[test]
    fn glz_values() {
        let g = glz_parameter_map(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(g.mu, 0.5);
        assert!((g.ratio - 1.0).abs() < 1e-15);
        let g2 = glz_parameter_map(1.0, 2.0, 3.0, 1.0, 1.0).unwrap();
        assert_eq!(g2.mu, 1.0);
        assert!((glz_parameter_map(1.6, 0.3, 2.0, 7.0, 0.2).unwrap().ratio - 1.0).abs() < 1e-14);
    }
}
