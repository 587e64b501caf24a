//! Heat-invariant integrands, the AMS sphere coefficients and ball-boundary polynomials.

mod boundary;
mod gauss;
mod symbolic;

pub use boundary::{
    boundary_polynomials, p3_weight_vectors, BoundaryCondition, BoundaryPolynomials, Decomposition,
    ExpansionMode,
};
pub use gauss::{sphere_curvature_fit, sphere_intrinsic_oracle, sphere_ricci_norm_series, SphereCurvatureFit};
pub use symbolic::{rationalize, Monomial, Poly, ShapeFit, SymSeries};

use serde::Serialize;

use crate::error::Result;
use crate::geometry::Space;
use crate::invariants::{beta_average_check, rprime_average_check, FastJacobi, McEstimate, PointInvariants};
use crate::report::{ResidualEntry, ResidualReport};

/// Scalar inputs to the heat-invariant formulas at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatInvariantInputs {
    pub n: usize,
    pub c: f64,
    pub h: f64,
    pub l: f64,
    pub norm_del_r2: f64,
    pub r_hat: f64,
    pub r_ring: f64,
    pub scal: f64,
    pub norm_ric2: f64,
    pub norm_r2: f64,
}

impl From<&PointInvariants> for HeatInvariantInputs {
    fn from(inv: &PointInvariants) -> Self {
        HeatInvariantInputs {
            n: inv.n,
            c: inv.c.value,
            h: inv.h.value,
            l: inv.l.value,
            norm_del_r2: inv.norm_del_r2,
            r_hat: inv.r_hat,
            r_ring: inv.r_ring,
            scal: inv.scal,
            norm_ric2: inv.norm_ric2,
            norm_r2: inv.norm_r2,
        }
    }
}

impl HeatInvariantInputs {
    /// `(5 scal^2 - 2 |Ric|^2 + 2 |R|^2) / 360`.
    pub fn a2_integrand(&self) -> f64 {
        (5.0 * self.scal * self.scal - 2.0 * self.norm_ric2 + 2.0 * self.norm_r2) / 360.0
    }

    /// `5 (nC)^2 - 2 n C^2 + 4/3 n ((n+2) H - C^2)`.
    pub fn p1(&self) -> f64 {
        let n = self.n as f64;
        5.0 * (n * self.c).powi(2) - 2.0 * n * self.c * self.c + 4.0 / 3.0 * n * ((n + 2.0) * self.h - self.c * self.c)
    }
}

pub fn a2_integrand(inv: &PointInvariants) -> f64 {
    HeatInvariantInputs::from(inv).a2_integrand()
}

/// Direction-dependent parts `Tr(R'_u R'_u)/16` of `alpha_2(u)` and
/// `4/9 sum_i Tr(R_u o R(e_i, .) R_u e_i)` of `beta_2(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmsDirectionParts {
    pub alpha: f64,
    pub beta: f64,
}

pub fn ams_alpha_beta(fast: &FastJacobi<'_>, u: &[f64]) -> AmsDirectionParts {
    AmsDirectionParts { alpha: fast.tr_r1r1(u) / 16.0, beta: 4.0 / 9.0 * fast.beta_integrand(u) }
}

/// Sphere averages of the AMS direction parts against their closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmsAverages {
    pub alpha_exact: f64,
    pub alpha_closed_form: f64,
    pub alpha_monte_carlo: McEstimate,
    pub beta_exact: f64,
    pub beta_closed_form: f64,
    pub beta_monte_carlo: McEstimate,
}

pub fn ams_sphere_averages(space: &Space, inv: &PointInvariants, mc_samples: usize, seed: u64) -> Result<AmsAverages> {
    let a = rprime_average_check(space, inv, mc_samples, seed)?;
    let b = beta_average_check(space, inv, mc_samples, seed.wrapping_add(1))?;
    let scale = |m: McEstimate, s: f64| McEstimate { mean: m.mean * s, stderr: m.stderr * s, ..m };
    Ok(AmsAverages {
        alpha_exact: a.exact / 16.0,
        alpha_closed_form: a.closed_form / 16.0,
        alpha_monte_carlo: scale(a.monte_carlo, 1.0 / 16.0),
        beta_exact: 4.0 / 9.0 * b.exact,
        beta_closed_form: 4.0 / 9.0 * b.closed_form,
        beta_monte_carlo: scale(b.monte_carlo, 4.0 / 9.0),
    })
}

impl AmsAverages {
    pub fn check(&self, tol: f64, mc_sigmas: f64) -> ResidualReport {
        let mc = |name: &str, m: &McEstimate, exact: f64| {
            let floor = 1e-12 * exact.abs().max(1.0);
            ResidualEntry::threshold(name, (m.mean - exact).abs() / m.stderr.max(floor), mc_sigmas, false)
        };
        ResidualReport {
            subject: "ams sphere averages".into(),
            entries: vec![
                ResidualEntry::compare("avg alpha = 3|nabla R|^2/(16 n(n+2)(n+4))", self.alpha_exact, self.alpha_closed_form, 0.0, tol),
                ResidualEntry::compare("avg beta = 4(nC^3 + 2R° - R^/4)/(9n(n+2))", self.beta_exact, self.beta_closed_form, 0.0, tol),
                mc("alpha monte carlo (standard errors)", &self.alpha_monte_carlo, self.alpha_exact),
                mc("beta monte carlo (standard errors)", &self.beta_monte_carlo, self.beta_exact),
            ],
        }
    }

    /// Cross-member comparison of the averaged direction parts.
    pub fn compare(&self, other: &AmsAverages, tol: f64) -> ResidualReport {
        ResidualReport {
            subject: "ams averages across members".into(),
            entries: vec![
                ResidualEntry::compare("avg alpha", self.alpha_exact, other.alpha_exact, 0.0, tol),
                ResidualEntry::compare("avg beta", self.beta_exact, other.beta_exact, 0.0, tol),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{damek_ricci, MetricLieAlgebra};
    use crate::invariants::point_invariants;
    use crate::sampling::random_unit;

    #[test]
    fn flat_a2_is_zero() {
        let s = Space::new(MetricLieAlgebra::abelian(4));
        assert_eq!(a2_integrand(&point_invariants(&s, 2, 0)), 0.0);
    }

    #[test]
    fn a2_matches_direct_contractions() {
        let s = Space::new(damek_ricci(3, 1, 1).unwrap());
        let inv = point_invariants(&s, 2, 0);
        let t = s.curvature.tensor();
        let n = s.dim();
        let mut ric = vec![0.0; n * n];
        let mut r2 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = t.get(a, b, c, d);
                        r2 += v * v;
                        if b == c {
                            ric[a * n + d] += v;
                        }
                    }
                }
            }
        }
        let scal: f64 = (0..n).map(|i| ric[i * n + i]).sum();
        let ric2: f64 = ric.iter().map(|x| x * x).sum();
        let direct = (5.0 * scal * scal - 2.0 * ric2 + 2.0 * r2) / 360.0;
        assert!((a2_integrand(&inv) - direct).abs() < 1e-10 * direct.abs());
        let e = HeatInvariantInputs::from(&inv);
        let nf = n as f64;
        let einstein = (5.0 * nf * nf * e.c * e.c - 2.0 * nf * e.c * e.c + 2.0 * e.norm_r2) / 360.0;
        assert!((e.a2_integrand() - einstein).abs() < 1e-10 * einstein.abs());
    }

    #[test]
    fn symmetric_member_has_no_alpha_direction_part() {
        let s = Space::new(damek_ricci(3, 2, 0).unwrap());
        let fast = FastJacobi::new(&s);
        for seed in 0..5 {
            assert!(ams_alpha_beta(&fast, &random_unit(s.dim(), seed)).alpha.abs() < 1e-20);
        }
    }

    #[test]
    fn sphere_averages_match_closed_forms() {
        let s = Space::new(damek_ricci(1, 1, 0).unwrap());
        let inv = point_invariants(&s, 4, 3);
        let avg = ams_sphere_averages(&s, &inv, 20_000, 5).unwrap();
        let rep = avg.check(1e-9, 5.0);
        assert!(rep.pass(), "{:?}", rep.failures());
    }
}
