use nalgebra::DMatrix;

use super::algebra::MetricLieAlgebra;
use super::tensor::Tensor4;

/// Levi-Civita coefficients `nabla_{e_i} e_j = sum_m gamma[i][j][m] e_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    n: usize,
    gamma: Vec<f64>,
}

pub fn levi_civita(alg: &MetricLieAlgebra) -> Connection {
    let n = alg.dim();
    let mut gamma = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                gamma[(i * n + j) * n + m] = 0.5 * (alg.c(i, j, m) - alg.c(j, m, i) + alg.c(m, i, j));
            }
        }
    }
    Connection { n, gamma }
}

impl Connection {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn gamma(&self, i: usize, j: usize, m: usize) -> f64 {
        self.gamma[(i * self.n + j) * self.n + m]
    }

    /// Matrix `G[j][m] = sum_i w_i gamma[i][j][m]`, i.e. `nabla_w e_j = sum_m G[j][m] e_m`.
    pub fn along(&self, w: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        let mut g = DMatrix::zeros(n, n);
        for (i, &wi) in w.iter().enumerate() {
            if wi == 0.0 {
                continue;
            }
            for j in 0..n {
                for m in 0..n {
                    g[(j, m)] += wi * self.gamma(i, j, m);
                }
            }
        }
        g
    }

    /// `nabla_w v` for left-invariant fields.
    pub fn covariant(&self, w: &[f64], v: &[f64]) -> Vec<f64> {
        let g = self.along(w);
        (0..self.n).map(|m| (0..self.n).map(|j| v[j] * g[(j, m)]).sum()).collect()
    }

    /// `nabla_w T` for a left-invariant covariant 4-tensor.
    pub fn derivative(&self, w: &[f64], t: &Tensor4) -> Tensor4 {
        let g = self.along(w);
        derivative_with(&g, t)
    }

    pub fn torsion_residual(&self, alg: &MetricLieAlgebra) -> f64 {
        let n = self.n;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    r = r.max((self.gamma(i, j, m) - self.gamma(j, i, m) - alg.c(i, j, m)).abs());
                }
            }
        }
        r
    }

    pub fn metric_residual(&self) -> f64 {
        let n = self.n;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    r = r.max((self.gamma(i, j, m) + self.gamma(i, m, j)).abs());
                }
            }
        }
        r
    }
}

pub(crate) fn derivative_with(g: &DMatrix<f64>, t: &Tensor4) -> Tensor4 {
    let n = t.dim();
    let mut out = Tensor4::zeros(n);
    let gm: Vec<Vec<(usize, f64)>> =
        (0..n).map(|j| (0..n).filter(|&m| g[(j, m)] != 0.0).map(|m| (m, g[(j, m)])).collect()).collect();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut s = 0.0;
                    for &(m, v) in &gm[a] {
                        s += v * t.get(m, b, c, d);
                    }
                    for &(m, v) in &gm[b] {
                        s += v * t.get(a, m, c, d);
                    }
                    for &(m, v) in &gm[c] {
                        s += v * t.get(a, b, m, d);
                    }
                    for &(m, v) in &gm[d] {
                        s += v * t.get(a, b, c, m);
                    }
                    out.set(a, b, c, d, -s);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::j_map;
    use crate::geometry::algebra::{build_htype_algebra, damek_ricci};

    #[test]
    fn abelian_connection_vanishes() {
        let c = levi_civita(&MetricLieAlgebra::abelian(5));
        assert!((0..125).all(|i| c.gamma[i] == 0.0));
    }

    #[test]
    fn heisenberg_koszul_by_hand() {
        let h = build_htype_algebra(&j_map(1, 1, 0).unwrap());
        let c = levi_civita(&h);
        assert_eq!(c.covariant(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]), vec![0.0, 0.0, 0.5]);
        assert_eq!(c.covariant(&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]), vec![0.0, 0.0, -0.5]);
        assert_eq!(c.covariant(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]), vec![0.0, -0.5, 0.0]);
    }

    #[test]
    fn torsion_free_and_metric() {
        for (l, a, b) in [(1, 1, 0), (3, 1, 1), (2, 2, 0)] {
            let s = damek_ricci(l, a, b).unwrap();
            let c = levi_civita(&s);
            assert!(c.torsion_residual(&s) < 1e-14);
            assert!(c.metric_residual() < 1e-14);
        }
    }
}
