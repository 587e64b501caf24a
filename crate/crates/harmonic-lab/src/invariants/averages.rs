//! Sphere averages of the direction-dependent curvature traces.

use nalgebra::DMatrix;

use super::moments::{DenseForm, McEstimate, SphereMomentEngine};
use super::point::PointInvariants;
use crate::error::Result;
use crate::geometry::{Convention, Space};

/// Sparse evaluator of `R_u`, `R'_u` and the cubic trace integrand, for sampling.
#[derive(Debug, Clone)]
pub struct FastJacobi<'a> {
    space: &'a Space,
    entries: Vec<(usize, usize, usize, usize, f64)>,
}

impl<'a> FastJacobi<'a> {
    pub fn new(space: &'a Space) -> Self {
        let n = space.dim();
        let t = space.curvature.tensor();
        let mut entries = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = t.get(a, b, c, d);
                        if v != 0.0 {
                            entries.push((a, b, c, d, v));
                        }
                    }
                }
            }
        }
        FastJacobi { space, entries }
    }

    /// `R(x, v, w, y) + R(x, w, v, y)` as a matrix in `(x, y)`.
    fn middle_sym(&self, v: &[f64], w: &[f64]) -> DMatrix<f64> {
        let n = self.space.dim();
        let mut m = DMatrix::zeros(n, n);
        for &(a, b, c, d, val) in &self.entries {
            let s = v[b] * w[c] + w[b] * v[c];
            if s != 0.0 {
                m[(a, d)] += val * s;
            }
        }
        m
    }

    pub fn r_u(&self, u: &[f64]) -> DMatrix<f64> {
        self.middle_sym(u, u) * 0.5
    }

    /// `R'_u = -(G R_u + R_u G^T + R(., nabla_u u, u, .) + R(., u, nabla_u u, .))`.
    pub fn r1_u(&self, u: &[f64]) -> DMatrix<f64> {
        let g = self.space.connection.along(u);
        let v = self.space.connection.covariant(u, u);
        let ru = self.r_u(u);
        -(&g * &ru + &ru * g.transpose() + self.middle_sym(&v, u))
    }

    /// `sum_i Tr(R_u o R(e_i, .) R_u e_i)` with all three factors in the AMS sign.
    pub fn beta_integrand(&self, u: &[f64]) -> f64 {
        let ru = self.r_u(u);
        let s: f64 = self.entries.iter().map(|&(i, x, p, q, v)| v * ru[(p, i)] * ru[(q, x)]).sum();
        -s
    }

    pub fn tr_r1r1(&self, u: &[f64]) -> f64 {
        self.r1_u(u).norm_squared()
    }
}

/// Cubic forms `T_xy(a, b, c) = (nabla_a R)(x, b, c, y)`, one per `(x, y)`.
fn r1_forms(space: &Space) -> Vec<DenseForm> {
    let n = space.dim();
    let mut out = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            out.push(DenseForm::from_fn(n, 3, |i| space.nabla_r(i[0], x, i[1], i[2], y)));
        }
    }
    out
}

/// Exact `avg Tr(R'_u R'_u)`.
pub fn avg_tr_r1r1(space: &Space, engine: &SphereMomentEngine) -> Result<f64> {
    r1_forms(space).iter().map(|t| engine.average_product(t, t)).sum()
}

/// The quartic form of the `beta` integrand (AMS sign).
pub fn beta_form(space: &Space) -> DenseForm {
    let n = space.dim();
    let r = space.curvature.in_convention(Convention::Ams);
    // U[b][c][x][q] = sum_{i,p} R_ibcp R_ixpq
    let mut u = vec![0.0; n.pow(4)];
    for b in 0..n {
        for c in 0..n {
            for i in 0..n {
                for p in 0..n {
                    let v = r.get(i, b, c, p);
                    if v == 0.0 {
                        continue;
                    }
                    for x in 0..n {
                        for q in 0..n {
                            u[((b * n + c) * n + x) * n + q] += v * r.get(i, x, p, q);
                        }
                    }
                }
            }
        }
    }
    DenseForm::from_fn(n, 4, |s| {
        let (b, c, f, g) = (s[0], s[1], s[2], s[3]);
        let mut acc = 0.0;
        for x in 0..n {
            for q in 0..n {
                acc += u[((b * n + c) * n + x) * n + q] * r.get(x, f, g, q);
            }
        }
        acc
    })
}

pub fn avg_beta_integrand(space: &Space, engine: &SphereMomentEngine) -> Result<f64> {
    engine.average_form(&beta_form(space))
}

/// Right-hand side `3 |nabla R|^2 / (n (n+2) (n+4))`.
pub fn rprime_closed_form(inv: &PointInvariants) -> f64 {
    let n = inv.n as f64;
    3.0 * inv.norm_del_r2 / (n * (n + 2.0) * (n + 4.0))
}

/// Right-hand side `(n C^3 + 2 R° - R^/4) / (n (n+2))`, with the factor on `n C^3` exposed.
pub fn beta_closed_form(inv: &PointInvariants, c3_factor: f64) -> f64 {
    let n = inv.n as f64;
    (c3_factor * n * inv.c.value.powi(3) + 2.0 * inv.r_ring - 0.25 * inv.r_hat) / (n * (n + 2.0))
}

/// Factor `f` that makes `avg = (f n C^3 + 2 R° - R^/4) / (n (n+2))` exact.
pub fn fitted_c3_factor(inv: &PointInvariants, avg: f64) -> Option<f64> {
    let n = inv.n as f64;
    let c3 = n * inv.c.value.powi(3);
    (c3 != 0.0).then(|| (avg * n * (n + 2.0) - 2.0 * inv.r_ring + 0.25 * inv.r_hat) / c3)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AverageCheck {
    pub exact: f64,
    pub closed_form: f64,
    pub monte_carlo: McEstimate,
}

pub fn rprime_average_check(space: &Space, inv: &PointInvariants, mc_samples: usize, seed: u64) -> Result<AverageCheck> {
    let engine = SphereMomentEngine::new(space.dim());
    let fast = FastJacobi::new(space);
    Ok(AverageCheck {
        exact: avg_tr_r1r1(space, &engine)?,
        closed_form: rprime_closed_form(inv),
        monte_carlo: engine.monte_carlo(mc_samples, seed, |u| fast.tr_r1r1(u)),
    })
}

pub fn beta_average_check(space: &Space, inv: &PointInvariants, mc_samples: usize, seed: u64) -> Result<AverageCheck> {
    let engine = SphereMomentEngine::new(space.dim());
    let fast = FastJacobi::new(space);
    Ok(AverageCheck {
        exact: avg_beta_integrand(space, &engine)?,
        closed_form: beta_closed_form(inv, 1.0),
        monte_carlo: engine.monte_carlo(mc_samples, seed, |u| fast.beta_integrand(u)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{curvature_jet, damek_ricci};
    use crate::invariants::point_invariants;
    use crate::sampling::random_unit;

    #[test]
    fn fast_evaluator_matches_jets() {
        let s = Space::new(damek_ricci(2, 1, 0).unwrap());
        let fast = FastJacobi::new(&s);
        let u = random_unit(s.dim(), 5);
        let jet = curvature_jet(&s, &u, 1).unwrap();
        assert!((fast.r_u(&u) - jet.r()).amax() < 1e-13);
        assert!((fast.r1_u(&u) - jet.r1()).amax() < 1e-13);
    }

    #[test]
    fn rprime_average_on_quaternionic_hyperbolic_plane() {
        let s = Space::new(damek_ricci(3, 1, 0).unwrap());
        let inv = point_invariants(&s, 3, 1);
        let engine = SphereMomentEngine::new(s.dim());
        let avg = avg_tr_r1r1(&s, &engine).unwrap();
        assert!((avg - rprime_closed_form(&inv)).abs() <= 1e-9 * avg.abs().max(1.0));
    }

    #[test]
    fn beta_average_on_complex_hyperbolic_plane() {
        let s = Space::new(damek_ricci(1, 1, 0).unwrap());
        let inv = point_invariants(&s, 3, 1);
        let engine = SphereMomentEngine::new(s.dim());
        let avg = avg_beta_integrand(&s, &engine).unwrap();
        let f = fitted_c3_factor(&inv, avg).unwrap();
        assert!((f - 1.0).abs() < 1e-9, "fitted factor {f}");
    }
}
