//! Orthogonal conjugators between skew matrices through their canonical block forms.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Conjugator {
    /// `o * j1 * o^T = j2`.
    pub o: DMatrix<f64>,
    pub residual: f64,
    pub orthogonality_residual: f64,
    /// Nonnegative skew spectrum `s` (eigenvalues `+-i s`), descending, one entry per pair.
    pub singular_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugacySummary {
    pub residual: f64,
    pub orthogonality_residual: f64,
    pub singular_values: Vec<f64>,
}

impl Conjugator {
    pub fn summary(&self) -> ConjugacySummary {
        ConjugacySummary {
            residual: self.residual,
            orthogonality_residual: self.orthogonality_residual,
            singular_values: self.singular_values.clone(),
        }
    }
}

const CLUSTER_TOL: f64 = 1e-8;

/// Orthogonal `q` with `q^T s q` in canonical form: pairs `(v, w)` with `s v = sigma w`,
/// `s w = -sigma v`, ordered by descending `sigma`, kernel last.
fn canonical_basis(s: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let n = s.nrows();
    let eig = SymmetricEigen::new(s.transpose() * s);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let scale = eig.eigenvalues.amax().max(1.0);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(c) if (eig.eigenvalues[c[0]] - eig.eigenvalues[i]).abs() < CLUSTER_TOL * scale => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut sigmas = Vec::new();
    let project_out = |v: &mut DVector<f64>, cols: &[DVector<f64>]| {
        for c in cols {
            *v -= c * c.dot(v);
        }
    };
    for cluster in clusters {
        let lam = eig.eigenvalues[cluster[0]].max(0.0);
        let sigma = lam.sqrt();
        let zero = lam < CLUSTER_TOL * scale;
        let start = cols.len();
        for &i in &cluster {
            if cols.len() - start >= cluster.len() {
                break;
            }
            let mut v = eig.eigenvectors.column(i).into_owned();
            project_out(&mut v, &cols);
            if v.norm() < 1e-6 {
                continue;
            }
            v.normalize_mut();
            if zero {
                cols.push(v);
                continue;
            }
            let mut w = s * &v / sigma;
            project_out(&mut w, &cols);
            w -= &v * v.dot(&w);
            w.normalize_mut();
            cols.push(v);
            cols.push(w);
            sigmas.push(sigma);
        }
    }
    (DMatrix::from_columns(&cols), sigmas)
}

fn check_skew(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() || (m + m.transpose()).amax() > 1e-10 * m.amax().max(1.0) {
        return Err(Error::InvalidArgument("conjugacy check needs square skew matrices".into()));
    }
    Ok(())
}

pub fn conjugacy_check(j1: &DMatrix<f64>, j2: &DMatrix<f64>) -> Result<Conjugator> {
    check_skew(j1)?;
    check_skew(j2)?;
    if j1.nrows() != j2.nrows() {
        return Err(Error::InvalidArgument(format!("dimensions {} and {} differ", j1.nrows(), j2.nrows())));
    }
    let (q1, s1) = canonical_basis(j1);
    let (q2, s2) = canonical_basis(j2);
    let scale = s1.iter().chain(&s2).fold(1.0f64, |a, b| a.max(*b));
    if s1.len() != s2.len() || s1.iter().zip(&s2).any(|(a, b)| (a - b).abs() > 1e-9 * scale) {
        return Err(Error::SpectraDiffer(format!("{s1:?} vs {s2:?}")));
    }
    let o = &q2 * q1.transpose();
    let residual = (&o * j1 * o.transpose() - j2).amax();
    let orthogonality_residual = (o.transpose() * &o - DMatrix::identity(o.nrows(), o.ncols())).amax();
    Ok(Conjugator { o, residual, orthogonality_residual, singular_values: s1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::j_map;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn split_and_unsplit_members_are_conjugate() {
        let (a, b) = (j_map(3, 2, 0).unwrap(), j_map(3, 1, 1).unwrap());
        for z in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8], [0.3, -0.4, 1.2]] {
            let c = conjugacy_check(&a.j_z(&z), &b.j_z(&z)).unwrap();
            assert!(c.residual < 1e-10 && c.orthogonality_residual < 1e-10);
        }
    }

    #[test]
    fn scaled_matrices_differ() {
        let j = j_map(3, 1, 1).unwrap().j_z(&[1.0, 0.0, 0.0]);
        assert!(matches!(conjugacy_check(&j, &(&j * 2.0)), Err(Error::SpectraDiffer(_))));
    }

    #[test]
    fn random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [3, 5, 6] {
            let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let s = &a - a.transpose();
            let o = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0)).qr().q();
            let c = conjugacy_check(&s, &(&o * &s * o.transpose())).unwrap();
            assert!(c.residual < 1e-10, "n = {n}: {}", c.residual);
        }
    }
}
