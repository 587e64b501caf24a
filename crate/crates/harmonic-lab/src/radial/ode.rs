//! Direct integration of the geodesic, the parallel frame and the Jacobi equation.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Space;
use crate::invariants::FastJacobi;

#[derive(Debug, Clone)]
struct State {
    /// Body velocity in the left-invariant frame.
    v: DVector<f64>,
    /// Rows: parallel frame vectors in the left-invariant frame.
    p: DMatrix<f64>,
    a: DMatrix<f64>,
    da: DMatrix<f64>,
}

impl State {
    fn axpy(&self, h: f64, k: &State) -> State {
        State { v: &self.v + &k.v * h, p: &self.p + &k.p * h, a: &self.a + &k.a * h, da: &self.da + &k.da * h }
    }
}

/// One geodesic sample: `A(r)`, `sigma(r) = A' A^-1` and `Theta(r) = det(A/r)` in the parallel frame.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSample {
    pub r: f64,
    pub a: DMatrix<f64>,
    pub sigma: Option<DMatrix<f64>>,
    pub theta: f64,
    /// Ambient Jacobi operator `R(., c')c'` in the parallel frame.
    pub r_nu: DMatrix<f64>,
    /// Parallel frame in left-invariant components (rows).
    pub frame: DMatrix<f64>,
}

pub struct OdeOracle<'a> {
    space: &'a Space,
    fast: FastJacobi<'a>,
    u: Vec<f64>,
    step: f64,
}

impl<'a> OdeOracle<'a> {
    pub fn new(space: &'a Space, u: &[f64], step: f64) -> Self {
        OdeOracle { space, fast: FastJacobi::new(space), u: u.to_vec(), step }
    }

    fn rhs(&self, s: &State) -> State {
        let v: Vec<f64> = s.v.iter().copied().collect();
        let g = self.space.connection.along(&v);
        let dv = -(g.transpose() * &s.v);
        let dp = -(&s.p * &g);
        let r_nu = &s.p * self.fast.r_u(&v) * s.p.transpose();
        State { v: dv, p: dp, a: s.da.clone(), da: -(r_nu * &s.a) }
    }

    fn rk4(&self, s: &State, h: f64) -> State {
        let k1 = self.rhs(s);
        let k2 = self.rhs(&s.axpy(h / 2.0, &k1));
        let k3 = self.rhs(&s.axpy(h / 2.0, &k2));
        let k4 = self.rhs(&s.axpy(h, &k3));
        State {
            v: &s.v + (&k1.v + &k2.v * 2.0 + &k3.v * 2.0 + &k4.v) * (h / 6.0),
            p: &s.p + (&k1.p + &k2.p * 2.0 + &k3.p * 2.0 + &k4.p) * (h / 6.0),
            a: &s.a + (&k1.a + &k2.a * 2.0 + &k3.a * 2.0 + &k4.a) * (h / 6.0),
            da: &s.da + (&k1.da + &k2.da * 2.0 + &k3.da * 2.0 + &k4.da) * (h / 6.0),
        }
    }

    fn initial(&self) -> State {
        let n = self.u.len();
        State {
            v: DVector::from_column_slice(&self.u),
            p: DMatrix::identity(n, n),
            a: DMatrix::zeros(n, n),
            da: DMatrix::identity(n, n),
        }
    }

    fn sample(&self, r: f64, s: &State) -> Result<OdeSample> {
        let n = self.u.len();
        if !s.a.iter().all(|x| x.is_finite()) {
            return Err(Error::StepFailure(format!("non-finite state at r = {r}")));
        }
        let v: Vec<f64> = s.v.iter().copied().collect();
        let r_nu = &s.p * self.fast.r_u(&v) * s.p.transpose();
        let (sigma, theta) = if r == 0.0 {
            (None, 1.0)
        } else {
            let inv = s.a.clone().try_inverse();
            ((inv.map(|i| &s.da * i)), (&s.a / r).determinant())
        };
        let _ = n;
        Ok(OdeSample { r, a: s.a.clone(), sigma, theta, r_nu, frame: s.p.clone() })
    }

    /// Samples at the given radii (either sign), integrating outward from zero.
    pub fn samples_at(&self, radii: &[f64]) -> Result<Vec<OdeSample>> {
        let mut order: Vec<usize> = (0..radii.len()).collect();
        order.sort_by(|&i, &j| radii[i].abs().total_cmp(&radii[j].abs()));
        let mut out: Vec<Option<OdeSample>> = vec![None; radii.len()];
        for sign in [1.0, -1.0] {
            let mut state = self.initial();
            let mut at = 0.0f64;
            for &i in &order {
                let r = radii[i];
                if r == 0.0 {
                    out[i] = Some(self.sample(0.0, &self.initial())?);
                    continue;
                }
                if r.signum() != sign {
                    continue;
                }
                let span = r - at;
                let steps = (span.abs() / self.step).ceil().max(1.0) as usize;
                let h = span / steps as f64;
                for _ in 0..steps {
                    state = self.rk4(&state, h);
                }
                at = r;
                out[i] = Some(self.sample(r, &state)?);
            }
        }
        Ok(out.into_iter().map(|s| s.expect("every radius sampled")).collect())
    }

    /// Uniform samples on `[0, r_max]`.
    pub fn run(&self, r_max: f64, count: usize) -> Result<Vec<OdeSample>> {
        let radii: Vec<f64> = (0..=count).map(|i| r_max * i as f64 / count as f64).collect();
        self.samples_at(&radii)
    }
}

fn binom(k: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}

/// Taylor coefficients of `r -> f(r)` at zero from central differences at spacing
/// `h0, h0/2, .., h0/2^(levels-1)`, combined by Richardson extrapolation in `h^2`.
pub fn richardson_taylor<F>(f: F, max_k: usize, h0: f64, levels: usize) -> Result<Vec<DMatrix<f64>>>
where
    F: Fn(&[f64]) -> Result<Vec<DMatrix<f64>>>,
{
    let mut radii = vec![0.0];
    for level in 0..levels {
        let h = h0 / 2f64.powi(level as i32);
        for k in 0..=max_k {
            for j in 0..=k {
                radii.push((k as f64 / 2.0 - j as f64) * h);
            }
        }
    }
    radii.sort_by(f64::total_cmp);
    radii.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let vals = f(&radii)?;
    let lookup = |r: f64| {
        let i = radii.iter().position(|x| (x - r).abs() < 1e-13).expect("sample radius");
        &vals[i]
    };
    let mut out = Vec::with_capacity(max_k + 1);
    let mut fact = 1.0;
    for k in 0..=max_k {
        if k > 0 {
            fact *= k as f64;
        }
        let mut table: Vec<DMatrix<f64>> = (0..levels)
            .map(|level| {
                let h = h0 / 2f64.powi(level as i32);
                let mut acc = lookup(0.0) * 0.0;
                for j in 0..=k {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    acc += lookup((k as f64 / 2.0 - j as f64) * h) * (sign * binom(k, j));
                }
                acc / (h.powi(k as i32) * fact)
            })
            .collect();
        for m in 1..levels {
            let w = 4f64.powi(m as i32);
            for level in (m..levels).rev() {
                table[level] = (&table[level] * w - &table[level - 1]) / (w - 1.0);
            }
        }
        out.push(table[levels - 1].clone());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCoefficients {
    /// Traces of the `A(r)/r` coefficients `r^0 .. r^max_k`.
    pub a_trace: Vec<f64>,
    /// `Theta` coefficients `r^0 .. r^max_k`.
    pub theta: Vec<f64>,
}

/// Extracts the `A(r)/r` and `Theta` Taylor coefficients from the ODE solution.
pub fn oracle_coefficients(
    space: &Space,
    u: &[f64],
    max_k: usize,
    h0: f64,
    step: f64,
) -> Result<(Vec<DMatrix<f64>>, OracleCoefficients)> {
    let oracle = OdeOracle::new(space, u, step);
    let n = u.len();
    let per_radius = |radii: &[f64]| -> Result<Vec<DMatrix<f64>>> {
        oracle.samples_at(radii).map(|ss| {
            ss.into_iter()
                .map(|s| {
                    let abar = if s.r == 0.0 { DMatrix::identity(n, n) } else { &s.a / s.r };
                    let mut m = DMatrix::zeros(n + 1, n);
                    m.view_mut((0, 0), (n, n)).copy_from(&abar);
                    m[(n, 0)] = s.theta;
                    m
                })
                .collect()
        })
    };
    let coeffs = richardson_taylor(per_radius, max_k, h0, 4)?;
    let a: Vec<DMatrix<f64>> = coeffs.iter().map(|m| m.view((0, 0), (n, n)).clone_owned()).collect();
    let summary = OracleCoefficients {
        a_trace: a.iter().map(|m| m.trace()).collect(),
        theta: coeffs.iter().map(|m| m[(n, 0)]).collect(),
    };
    Ok((a, summary))
}

/// CSV rows `r, entries...` of `A(r)` in row-major order.
pub fn samples_to_csv(samples: &[OdeSample]) -> String {
    let mut out = String::new();
    if let Some(first) = samples.first() {
        let n = first.a.nrows();
        out.push('r');
        for i in 0..n {
            for j in 0..n {
                out.push_str(&format!(",a_{i}_{j}"));
            }
        }
        out.push_str(",theta\n");
    }
    for s in samples {
        out.push_str(&format!("{:e}", s.r));
        for i in 0..s.a.nrows() {
            for j in 0..s.a.ncols() {
                out.push_str(&format!(",{:e}", s.a[(i, j)]));
            }
        }
        out.push_str(&format!(",{:e}\n", s.theta));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{curvature_jet, damek_ricci, MetricLieAlgebra};
    use crate::radial::{density_series, jacobi_recursion};
    use crate::sampling::random_unit;

    #[test]
    fn flat_jacobi_field_is_linear() {
        let s = Space::new(MetricLieAlgebra::abelian(3));
        let o = OdeOracle::new(&s, &[0.0, 0.6, 0.8], 1e-2);
        for smp in o.run(1.0, 4).unwrap() {
            assert!((&smp.a - DMatrix::<f64>::identity(3, 3) * smp.r).amax() < 1e-14);
        }
    }

    #[test]
    fn richardson_recovers_polynomial_coefficients() {
        let f = |rs: &[f64]| -> Result<Vec<DMatrix<f64>>> {
            Ok(rs.iter().map(|&r| DMatrix::from_element(1, 1, (2.0 * r).exp())).collect())
        };
        let c = richardson_taylor(f, 4, 0.2, 4).unwrap();
        let want = [1.0, 2.0, 2.0, 4.0 / 3.0, 2.0 / 3.0];
        for (k, w) in want.iter().enumerate() {
            assert!((c[k][(0, 0)] - w).abs() < 1e-8, "k={k}: {}", c[k][(0, 0)]);
        }
    }

    #[test]
    fn oracle_matches_series_on_complex_hyperbolic_plane() {
        let s = Space::new(damek_ricci(1, 1, 0).unwrap());
        let u = random_unit(4, 9);
        let jet = curvature_jet(&s, &u, 3).unwrap();
        let a = jacobi_recursion(&jet, 6);
        let (d, _, _) = density_series(&a).unwrap();
        let (coeffs, summary) = oracle_coefficients(&s, &u, 4, 0.4, 1e-3).unwrap();
        for k in 0..=4 {
            assert!((&coeffs[k] - &a.coeffs[k]).amax() < 1e-6, "r^{k}");
        }
        assert!((summary.theta[2] - d.a2).abs() < 1e-6);
    }
}
