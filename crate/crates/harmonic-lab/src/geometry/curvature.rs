use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::algebra::MetricLieAlgebra;
use super::connection::{levi_civita, Connection};
use super::tensor::Tensor4;

/// Sign convention for `R`.
///
/// `Author`: `R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`, so the
/// Jacobi operator `R(., u)u` of the unit sphere is the projection orthogonal to `u`.
/// `Ams` is the opposite global sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Author,
    Ams,
}

impl Convention {
    pub fn sign(self) -> f64 {
        match self {
            Convention::Author => 1.0,
            Convention::Ams => -1.0,
        }
    }
}

/// `R[a][b][c][d] = <R(e_a, e_b) e_c, e_d>` in the author convention.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    r: Tensor4,
}

pub fn curvature(conn: &Connection, alg: &MetricLieAlgebra) -> CurvatureTensor {
    let n = alg.dim();
    let r = Tensor4::from_fn(n, |a, b, c, d| {
        let mut s = 0.0;
        for p in 0..n {
            s += conn.gamma(b, c, p) * conn.gamma(a, p, d) - conn.gamma(a, c, p) * conn.gamma(b, p, d)
                - alg.c(a, b, p) * conn.gamma(p, c, d);
        }
        s
    });
    CurvatureTensor { r }
}

impl CurvatureTensor {
    pub fn from_tensor(r: Tensor4) -> Self {
        CurvatureTensor { r }
    }

    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    pub fn tensor(&self) -> &Tensor4 {
        &self.r
    }

    pub fn in_convention(&self, c: Convention) -> Tensor4 {
        self.r.scaled(c.sign())
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.r.get(a, b, c, d)
    }

    /// Max residual over the antisymmetries and pair symmetry.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = self.get(a, b, c, d);
                        m = m
                            .max((v + self.get(b, a, c, d)).abs())
                            .max((v + self.get(a, b, d, c)).abs())
                            .max((v - self.get(c, d, a, b)).abs());
                    }
                }
            }
        }
        m
    }

    pub fn bianchi_residual(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        m = m.max((self.get(a, b, c, d) + self.get(b, c, a, d) + self.get(c, a, b, d)).abs());
                    }
                }
            }
        }
        m
    }

    /// Jacobi operator `R_u = R(., u)u` as a symmetric matrix.
    pub fn jacobi_operator(&self, u: &[f64]) -> DMatrix<f64> {
        self.r.middle_contraction(u, u)
    }

    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |x, y| (0..n).map(|b| self.get(b, x, y, b)).sum())
    }

    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    /// Sectional curvature of `span(x, y)`.
    pub fn sectional(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim();
        let mut num = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        num += x[a] * y[b] * y[c] * x[d] * self.get(a, b, c, d);
                    }
                }
            }
        }
        let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(s, t)| s * t).sum::<f64>();
        num / (dot(x, x) * dot(y, y) - dot(x, y).powi(2))
    }
}

/// An algebra with its connection, curvature and full `nabla R`.
#[derive(Debug, Clone)]
pub struct Space {
    pub algebra: MetricLieAlgebra,
    pub connection: Connection,
    pub curvature: CurvatureTensor,
    nabla_r: Vec<Tensor4>,
}

impl Space {
    pub fn new(algebra: MetricLieAlgebra) -> Self {
        let connection = levi_civita(&algebra);
        let curvature = curvature(&connection, &algebra);
        let n = algebra.dim();
        let nabla_r = (0..n)
            .map(|a| {
                let mut e = vec![0.0; n];
                e[a] = 1.0;
                connection.derivative(&e, curvature.tensor())
            })
            .collect();
        Space { algebra, connection, curvature, nabla_r }
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `(nabla_{e_a} R)(e_b, e_c, e_d, e_e)`.
    #[inline]
    pub fn nabla_r(&self, a: usize, b: usize, c: usize, d: usize, e: usize) -> f64 {
        self.nabla_r[a].get(b, c, d, e)
    }

    pub fn nabla_r_slice(&self, a: usize) -> &Tensor4 {
        &self.nabla_r[a]
    }

    pub fn nabla_r_norm2(&self) -> f64 {
        self.nabla_r.iter().map(Tensor4::norm2).sum()
    }

    pub fn second_bianchi_residual(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for e in 0..n {
                            let s = self.nabla_r(a, b, c, d, e) + self.nabla_r(b, c, a, d, e) + self.nabla_r(c, a, b, d, e);
                            m = m.max(s.abs());
                        }
                    }
                }
            }
        }
        m
    }

    /// `(nabla^k R)(w_1, .., w_k; .)` for left-invariant `w_i`, as a 4-tensor.
    pub fn iterated_derivative(&self, ws: &[&[f64]]) -> Tensor4 {
        match ws.split_first() {
            None => self.curvature.tensor().clone(),
            Some((w1, rest)) => {
                let mut out = self.connection.derivative(w1, &self.iterated_derivative(rest));
                for j in 0..rest.len() {
                    let moved = self.connection.covariant(w1, rest[j]);
                    let mut args: Vec<&[f64]> = rest.to_vec();
                    args[j] = &moved;
                    let t = self.iterated_derivative(&args);
                    for (o, v) in out.data_mut().iter_mut().zip(t.as_slice()) {
                        *o -= v;
                    }
                }
                out
            }
        }
    }

    /// Einstein defect: max off-diagonal Ricci entry and variance of the diagonal.
    pub fn einstein_residual(&self) -> (f64, f64) {
        let ric = self.curvature.ricci();
        let n = self.dim();
        let mut off: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off.max(ric[(i, j)].abs());
                }
            }
        }
        let mean = ric.trace() / n as f64;
        let var = (0..n).map(|i| (ric[(i, i)] - mean).powi(2)).sum::<f64>() / n as f64;
        (off, var)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::algebra::damek_ricci;

    #[test]
    fn flat_curvature_vanishes() {
        let s = Space::new(MetricLieAlgebra::abelian(4));
        assert_eq!(s.curvature.tensor().max_abs(), 0.0);
        assert_eq!(s.nabla_r_norm2(), 0.0);
    }

    #[test]
    fn symmetries_and_bianchi() {
        for (l, a, b) in [(1, 1, 0), (3, 1, 1), (2, 1, 0)] {
            let s = Space::new(damek_ricci(l, a, b).unwrap());
            assert!(s.curvature.symmetry_residual() < 1e-14);
            assert!(s.curvature.bianchi_residual() < 1e-10);
            assert!(s.second_bianchi_residual() < 1e-10);
        }
    }

    #[test]
    fn damek_ricci_is_einstein() {
        for (l, a, b) in [(1, 1, 0), (1, 2, 0), (2, 1, 0), (3, 1, 0), (3, 2, 0), (3, 1, 1)] {
            let s = Space::new(damek_ricci(l, a, b).unwrap());
            let (off, var) = s.einstein_residual();
            assert!(off < 1e-10 && var < 1e-10, "({l},{a},{b}): {off} {var}");
        }
    }

    #[test]
    fn complex_hyperbolic_plane_is_quarter_pinched() {
        let s = Space::new(damek_ricci(1, 1, 0).unwrap());
        let n = s.dim();
        let e = |i: usize| (0..n).map(|m| f64::from(u8::from(m == i))).collect::<Vec<f64>>();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            for j in 0..n {
                for k in j + 1..n {
                    if i == j || i == k {
                        continue;
                    }
                    for t in 0..=48 {
                        let th = std::f64::consts::PI * t as f64 / 48.0;
                        let y: Vec<f64> = (0..n).map(|m| th.cos() * e(j)[m] + th.sin() * e(k)[m]).collect();
                        let kk = s.curvature.sectional(&e(i), &y);
                        lo = lo.min(kk);
                        hi = hi.max(kk);
                    }
                }
            }
        }
        assert!(hi < 0.0);
        assert!((lo / hi - 4.0).abs() < 1e-9, "band [{lo}, {hi}]");
    }
}
