use nalgebra::DMatrix;

use super::curvature::{Convention, Space};
use crate::error::{Error, Result};

/// `R_u, R'_u, R''_u, R'''_u` at the identity along the geodesic with initial velocity `u`.
///
/// The `k`-th matrix is `(nabla^k R)(u, .., u; x, u, u, y)`. Expanding the iterated
/// derivative over left-invariant fields produces the `nabla_u u` corrections, so these
/// are derivatives along the geodesic in a parallel frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalCurvatureJet {
    pub u: Vec<f64>,
    pub convention: Convention,
    mats: Vec<DMatrix<f64>>,
}

impl DirectionalCurvatureJet {
    pub fn from_matrices(u: Vec<f64>, convention: Convention, mats: Vec<DMatrix<f64>>) -> Self {
        DirectionalCurvatureJet { u, convention, mats }
    }

    pub fn order(&self) -> usize {
        self.mats.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// `R^(k)_u`; zero when `k` exceeds the computed order.
    pub fn get(&self, k: usize) -> DMatrix<f64> {
        self.mats.get(k).cloned().unwrap_or_else(|| DMatrix::zeros(self.dim(), self.dim()))
    }

    pub fn r(&self) -> &DMatrix<f64> {
        &self.mats[0]
    }

    pub fn r1(&self) -> DMatrix<f64> {
        self.get(1)
    }

    pub fn r2(&self) -> DMatrix<f64> {
        self.get(2)
    }

    pub fn r3(&self) -> DMatrix<f64> {
        self.get(3)
    }

    pub fn in_convention(&self, c: Convention) -> Self {
        let s = if c == self.convention { 1.0 } else { -1.0 };
        DirectionalCurvatureJet { u: self.u.clone(), convention: c, mats: self.mats.iter().map(|m| m * s).collect() }
    }

    /// Constant-curvature jet `R_u = kappa (I - u u^T)`, all derivatives zero.
    pub fn constant_curvature(u: Vec<f64>, kappa: f64, order: usize) -> Self {
        let n = u.len();
        let uu = DMatrix::from_fn(n, n, |i, j| u[i] * u[j]);
        let mut mats = vec![(DMatrix::identity(n, n) - uu) * kappa];
        mats.extend((0..order).map(|_| DMatrix::zeros(n, n)));
        DirectionalCurvatureJet { u, convention: Convention::Author, mats }
    }
}

pub fn curvature_jet(space: &Space, u: &[f64], order: usize) -> Result<DirectionalCurvatureJet> {
    if order > 4 {
        return Err(Error::OrderUnsupported(order));
    }
    let norm: f64 = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("direction must be a unit vector, |u| = {norm}")));
    }
    let mats = (0..=order)
        .map(|k| {
            let ws: Vec<&[f64]> = vec![u; k];
            space.iterated_derivative(&ws).middle_contraction(u, u)
        })
        .collect();
    Ok(DirectionalCurvatureJet { u: u.to_vec(), convention: Convention::Author, mats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::algebra::{damek_ricci, MetricLieAlgebra};
    use crate::sampling::random_unit;

    #[test]
    fn flat_jets_vanish() {
        let s = Space::new(MetricLieAlgebra::abelian(3));
        let j = curvature_jet(&s, &[0.6, 0.8, 0.0], 3).unwrap();
        assert!((0..=3).all(|k| j.get(k).amax() == 0.0));
    }

    #[test]
    fn order_five_is_rejected() {
        let s = Space::new(MetricLieAlgebra::abelian(2));
        assert_eq!(curvature_jet(&s, &[1.0, 0.0], 5), Err(Error::OrderUnsupported(5)));
    }

    #[test]
    fn symmetric_member_has_parallel_curvature() {
        let s = Space::new(damek_ricci(3, 2, 0).unwrap());
        for seed in 0..3 {
            let u = random_unit(s.dim(), seed);
            let j = curvature_jet(&s, &u, 3).unwrap();
            assert!(j.r1().amax() < 1e-12 && j.r2().amax() < 1e-12 && j.r3().amax() < 1e-12);
        }
    }

    #[test]
    fn jets_are_symmetric_and_kill_u() {
        let s = Space::new(damek_ricci(3, 1, 1).unwrap());
        let u = random_unit(s.dim(), 7);
        let j = curvature_jet(&s, &u, 3).unwrap();
        let uv = nalgebra::DVector::from_column_slice(&u);
        for k in 0..=3 {
            let m = j.get(k);
            assert!((&m - m.transpose()).amax() < 1e-12);
            assert!((&m * &uv).amax() < 1e-12);
        }
        assert!(j.r1().amax() > 1e-3);
        assert!((j.r() * j.r1()).trace().abs() < 1e-10);
    }
}
