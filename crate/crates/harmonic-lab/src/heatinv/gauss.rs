//! Intrinsic curvature of geodesic spheres from the Gauss equation along the ODE solution.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Space, Tensor4};
use crate::geometry::DirectionalCurvatureJet;
use crate::radial::{jacobi_operator_series, shape_operator_series, MatSeries, OdeOracle, OdeSample, Series};

/// Contracts every slot of `t` with the rows of `m` (`k x n`).
fn transform(t: &Tensor4, m: &DMatrix<f64>) -> Vec<f64> {
    let (k, n) = (m.nrows(), m.ncols());
    let mut cur: Vec<f64> = t.as_slice().to_vec();
    let mut dims = [n, n, n, n];
    for slot in 0..4 {
        let mut next_dims = dims;
        next_dims[slot] = k;
        let (outer, inner): (usize, usize) = (dims[..slot].iter().product(), dims[slot + 1..].iter().product());
        let mut next = vec![0.0; outer * k * inner];
        for o in 0..outer {
            for a in 0..k {
                for i in 0..dims[slot] {
                    let w = m[(a, i)];
                    if w == 0.0 {
                        continue;
                    }
                    let src = (o * dims[slot] + i) * inner;
                    let dst = (o * k + a) * inner;
                    for r in 0..inner {
                        next[dst + r] += w * cur[src + r];
                    }
                }
            }
        }
        cur = next;
        dims = next_dims;
    }
    cur
}

/// Columns: an orthonormal basis of `u^perp`.
fn orthonormal_complement(u: &[f64]) -> DMatrix<f64> {
    let n = u.len();
    let mut basis: Vec<DVector<f64>> = vec![DVector::from_column_slice(u)];
    for i in 0..n {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let norm = v.norm();
        if norm > 1e-8 && basis.len() < n {
            basis.push(v / norm);
        }
    }
    DMatrix::from_columns(&basis[1..])
}

fn norms_at(sample: &OdeSample, r_tensor: &Tensor4, u: &[f64]) -> Result<(f64, f64)> {
    let sigma = sample.sigma.as_ref().ok_or_else(|| Error::StepFailure("sigma undefined at r = 0".into()))?;
    let q = orthonormal_complement(u);
    let k = q.ncols();
    let st = q.transpose() * (sigma + sigma.transpose()) * &q / 2.0;
    let m = q.transpose() * &sample.frame;
    let rt = transform(r_tensor, &m);
    let idx = |a: usize, b: usize, c: usize, d: usize| ((a * k + b) * k + c) * k + d;
    let mut ric = DMatrix::<f64>::zeros(k, k);
    let mut r2 = 0.0;
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for d in 0..k {
                    let v = rt[idx(a, b, c, d)] + st[(b, c)] * st[(a, d)] - st[(a, c)] * st[(b, d)];
                    r2 += v * v;
                    if b == c {
                        ric[(a, d)] += v;
                    }
                }
            }
        }
    }
    Ok((ric.norm_squared(), r2))
}

/// `(|Ric^S|^2, |R^S|^2)` of the geodesic sphere `S_p(r)` at `exp(r u)`.
pub fn sphere_intrinsic_oracle(space: &Space, u: &[f64], r: f64, step: f64) -> Result<(f64, f64)> {
    let oracle = OdeOracle::new(space, u, step);
    let s = oracle.samples_at(&[r])?;
    norms_at(&s[0], space.curvature.tensor(), u)
}

/// Coefficients of `r^-4, r^-2, r^0, r^2` fitted over log-spaced radii, with `nuisance`
/// extra columns `r^3, r^4, ..`. Along a single ray the sphere norms carry odd powers
/// from `r^3` on, so the nuisance columns start there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereCurvatureFit {
    pub radii: Vec<f64>,
    pub ric2: [f64; 4],
    pub r2: [f64; 4],
    pub residual: f64,
}

pub fn sphere_curvature_fit(space: &Space, u: &[f64], r_min: f64, r_max: f64, count: usize, nuisance: usize, step: f64) -> Result<SphereCurvatureFit> {
    let terms = nuisance + 4;
    if count < terms || r_min <= 0.0 || r_max <= r_min {
        return Err(Error::FitIllConditioned(format!("{count} radii in [{r_min}, {r_max}]")));
    }
    let radii: Vec<f64> =
        (0..count).map(|i| r_min * (r_max / r_min).powf(i as f64 / (count - 1) as f64)).collect();
    let oracle = OdeOracle::new(space, u, step);
    let samples = oracle.samples_at(&radii)?;
    let vals: Vec<(f64, f64)> =
        samples.iter().map(|s| norms_at(s, space.curvature.tensor(), u)).collect::<Result<_>>()?;
    // Fit r^4 f(r) so all rows carry comparable weight.
    let powers: Vec<i32> = [0, 2, 4, 6].into_iter().chain((0..nuisance as i32).map(|j| 7 + j)).collect();
    let design = DMatrix::from_fn(count, terms, |i, j| (radii[i] / r_max).powi(powers[j]));
    let svd = design.clone().svd(true, true);
    if svd.singular_values.min() < 1e-13 * svd.singular_values.max() {
        return Err(Error::FitIllConditioned("radii give a degenerate design".into()));
    }
    let mut residual = 0.0f64;
    let mut solve = |f: &dyn Fn(usize) -> f64| -> Result<[f64; 4]> {
        let rhs = DVector::from_fn(count, |i, _| radii[i].powi(4) * f(i));
        let x = svd.solve(&rhs, 1e-15).map_err(|e| Error::FitIllConditioned(e.to_string()))?;
        residual = residual.max((&design * &x - &rhs).amax() / rhs.amax().max(1e-300));
        Ok(std::array::from_fn(|j| x[j] / r_max.powi(powers[j])))
    };
    let ric2 = solve(&|i| vals[i].0)?;
    let r2 = solve(&|i| vals[i].1)?;
    Ok(SphereCurvatureFit { radii, ric2, r2, residual })
}

/// `|Ric^S|^2` of the geodesic sphere as a series in `r` through `r^2`, from the jet and
/// `a = A/r` (through `r^6`). `Ric^S = C - R_nu + Tr(sigma) sigma - sigma^2` on `u^perp`.
pub fn sphere_ricci_norm_series(jet: &DirectionalCurvatureJet, a: &MatSeries) -> Result<Series> {
    let q = orthonormal_complement(&jet.u);
    let k = q.ncols();
    let restrict = |m: &MatSeries| MatSeries::new(m.offset, m.coeffs.iter().map(|c| q.transpose() * c * &q).collect());
    let sigma = restrict(&shape_operator_series(a)?);
    let rnu = restrict(&jacobi_operator_series(jet));
    let c = jet.r().trace();
    let len = sigma.coeffs.len();
    let tr = sigma.trace();
    let sq = sigma.mul(&sigma);
    let mut coeffs = Vec::with_capacity(len);
    for p in -2..(len as i32 - 2) {
        let mut m = -sq.coeff(p);
        for i in -1..=(p + 1) {
            m += sigma.coeff(p - i) * tr.coeff(i);
        }
        if p == 0 {
            m += DMatrix::identity(k, k) * c;
        }
        if (0..=rnu.max_power()).contains(&p) {
            m -= rnu.coeff(p);
        }
        coeffs.push(m);
    }
    let ric = MatSeries::new(-2, coeffs);
    Ok(ric.mul(&ric).trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MetricLieAlgebra;

    #[test]
    fn flat_two_sphere_has_ricci_norm_two_over_r4() {
        let s = Space::new(MetricLieAlgebra::abelian(3));
        let u = [0.6, 0.0, 0.8];
        for r in [0.3, 1.0, 2.0] {
            let (ric2, r2) = sphere_intrinsic_oracle(&s, &u, r, 1e-2).unwrap();
            assert!((ric2 - 2.0 / r.powi(4)).abs() < 1e-10 / r.powi(4));
            assert!((r2 - 4.0 / r.powi(4)).abs() < 1e-10 / r.powi(4));
        }
    }

    #[test]
    fn ode_fit_matches_the_series_on_a_nonsymmetric_member() {
        use crate::geometry::{curvature_jet, damek_ricci};
        use crate::radial::jacobi_recursion;
        use crate::sampling::random_unit;
        let s = Space::new(damek_ricci(3, 1, 1).unwrap());
        let u = random_unit(s.dim(), 2);
        let jet = curvature_jet(&s, &u, 3).unwrap();
        let series = sphere_ricci_norm_series(&jet, &jacobi_recursion(&jet, 6)).unwrap();
        let fit = sphere_curvature_fit(&s, &u, 0.02, 0.2, 6, 2, 1e-3).unwrap();
        for (j, p) in [-4, -2, 0, 2].into_iter().enumerate() {
            let want = series.coeff(p);
            assert!((fit.ric2[j] - want).abs() < 1e-3 * want.abs().max(1.0), "r^{p}: {} vs {want}", fit.ric2[j]);
        }
    }

    #[test]
    fn complement_is_orthonormal() {
        let u = [0.0, 1.0, 0.0, 0.0];
        let q = orthonormal_complement(&u);
        assert_eq!(q.ncols(), 3);
        assert!((q.transpose() * &q - DMatrix::<f64>::identity(3, 3)).amax() < 1e-14);
        assert!((q.transpose() * DVector::from_column_slice(&u)).amax() < 1e-14);
    }
}
