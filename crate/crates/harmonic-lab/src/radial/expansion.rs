use nalgebra::DMatrix;
use serde::Serialize;

use super::series::{MatSeries, Series};
use crate::error::{Error, Result};
use crate::geometry::{Convention, DirectionalCurvatureJet};

/// `A(r)/r` for the Jacobi endomorphism `A'' + R_c' A = 0`, `A(0) = 0`, `A'(0) = I`.
///
/// With `S` the jet in the AMS sign:
/// `I + r^2 S/6 + r^3 S'/12 + r^4 (S^2 + 3S'')/5! + r^5 (4S'S + 2SS' + 4S''')/6!`.
pub fn jacobi_series(jet: &DirectionalCurvatureJet, order: usize) -> Result<MatSeries> {
    if order > 5 {
        return Err(Error::OrderUnsupported(order));
    }
    let s = jet.in_convention(Convention::Ams);
    let n = jet.dim();
    let (s0, s1, s2, s3) = (s.r().clone(), s.r1(), s.r2(), s.r3());
    let all = [
        DMatrix::identity(n, n),
        DMatrix::zeros(n, n),
        &s0 / 6.0,
        &s1 / 12.0,
        (&s0 * &s0 + &s2 * 3.0) / 120.0,
        (&s1 * &s0 * 4.0 + &s0 * &s1 * 2.0 + &s3 * 4.0) / 720.0,
    ];
    Ok(MatSeries::new(0, all[..=order].to_vec()))
}

/// Coefficients of `A(r)/r` from the Jacobi-equation recursion through `r^order`,
/// treating `R^(k)` beyond the jet as zero.
///
/// With a jet through `R'''` the `r^6` coefficient misses only `-R''''/1008`, whose
/// trace vanishes on Einstein spaces (`Tr R_c'(r) = Ric(c', c')` is constant).
pub fn jacobi_recursion(jet: &DirectionalCurvatureJet, order: usize) -> MatSeries {
    let j = jet.in_convention(Convention::Author);
    let n = jet.dim();
    let derivs: Vec<DMatrix<f64>> = (0..=j.order()).map(|k| j.get(k)).collect();
    // a_k: coefficients of A itself
    let mut a = vec![DMatrix::zeros(n, n), DMatrix::identity(n, n)];
    let mut fact = 1.0;
    let facts: Vec<f64> = (0..derivs.len())
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            fact
        })
        .collect();
    for k in 0..order {
        let mut s = DMatrix::zeros(n, n);
        for (jdx, d) in derivs.iter().enumerate().take(k + 1) {
            s += d * &a[k - jdx] / facts[jdx];
        }
        a.push(-s / ((k + 2) as f64 * (k + 1) as f64));
    }
    MatSeries::new(0, a[1..=order + 1].to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityCoefficients {
    pub a0: f64,
    pub a2: f64,
    pub a4: f64,
    pub a6: f64,
}

impl DensityCoefficients {
    pub fn as_array(&self) -> [f64; 4] {
        [self.a0, self.a2, self.a4, self.a6]
    }

    pub fn to_series(&self) -> Series {
        Series::new(0, vec![self.a0, 0.0, self.a2, 0.0, self.a4, 0.0, self.a6])
    }
}

/// `Theta = det(A/r)` and `theta = r^(n-1) Theta`.
pub fn density_series(a: &MatSeries) -> Result<(DensityCoefficients, Series, Series)> {
    let theta_big = a.det_exp_trace_log()?;
    let get = |p: i32| if p <= theta_big.max_power() { theta_big.coeff(p) } else { f64::NAN };
    let coeffs = DensityCoefficients { a0: get(0), a2: get(2), a4: get(4), a6: get(6) };
    let theta = theta_big.shift(a.dim() as i32 - 1);
    Ok((coeffs, theta_big, theta))
}

/// `sigma = A' A^-1` on the whole tangent space, from `a = A/r` with offset 0.
pub fn shape_operator_series(a: &MatSeries) -> Result<MatSeries> {
    if a.offset != 0 {
        return Err(Error::SingularSeries("expected A/r with offset 0".into()));
    }
    // A' A^-1 = (1/r) (a + r a') a^-1
    let lifted = MatSeries::new(0, a.coeffs.iter().enumerate().map(|(k, c)| c * (k as f64 + 1.0)).collect());
    Ok(MatSeries::new(-1, lifted.mul(&a.inverse()?).coeffs))
}

/// `R_c'(r) = sum_k r^k R^(k) / k!` in the parallel frame through the jet order, author sign.
pub fn jacobi_operator_series(jet: &DirectionalCurvatureJet) -> MatSeries {
    let j = jet.in_convention(Convention::Author);
    let mut fact = 1.0;
    let coeffs = (0..=j.order())
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            j.get(k) / fact
        })
        .collect::<Vec<_>>();
    MatSeries::new(0, coeffs)
}

/// `Tr sigma`, `Tr sigma^2`, `Tr sigma^3`, `Tr(R_nu o sigma)` on the sphere tangent space.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeTraces {
    pub tr_sigma: Series,
    pub tr_sigma2: Series,
    pub tr_sigma3: Series,
    pub tr_r_sigma: Series,
}

/// `sigma = A' A^-1` with `A = r * a`; the normal direction's `1/r^k` is removed so
/// traces run over the tangent space of the geodesic sphere. `Tr(R_nu o sigma)` is
/// kept through `r^3`, which needs `Tr R''''_u = 0` (true on Einstein spaces).
pub fn shape_trace_series(a: &MatSeries, jet: &DirectionalCurvatureJet) -> Result<ShapeTraces> {
    let n = a.dim();
    let sigma = shape_operator_series(a)?;
    let normal = |k: i32, len: usize| {
        let mut c = vec![0.0; len];
        c[0] = 1.0;
        Series::new(-k, c)
    };
    let s1 = sigma.trace();
    let s2m = sigma.mul(&sigma);
    let s3m = s2m.mul(&sigma);
    let (s2, s3) = (s2m.trace(), s3m.trace());
    let rnu = jacobi_operator_series(jet);
    let pad = |m: &MatSeries, len: usize| {
        let mut c = m.coeffs.clone();
        c.resize(len, DMatrix::zeros(n, n));
        MatSeries::new(m.offset, c)
    };
    let rs = pad(&rnu, sigma.coeffs.len()).mul(&sigma).trace();
    Ok(ShapeTraces {
        tr_sigma: s1.sub(&normal(1, s1.coeffs.len())),
        tr_sigma2: s2.sub(&normal(2, s2.coeffs.len())),
        tr_sigma3: s3.sub(&normal(3, s3.coeffs.len())),
        tr_r_sigma: rs.truncate_to(3),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeSeries {
    /// `vol(B_r) / omega_(n-1)`
    pub ball: Series,
    /// `vol(S_r) / omega_(n-1)`
    pub sphere: Series,
    /// `vol(B_r) / vol(S_r)`
    pub ratio: Series,
}

/// Ball and sphere volumes from the sphere-averaged density coefficients.
pub fn volume_series(avg: &DensityCoefficients, n: usize) -> Result<VolumeSeries> {
    let th = avg.to_series();
    let nn = n as i32;
    let sphere = th.shift(nn - 1);
    let ball = Series::new(nn, th.coeffs.iter().enumerate().map(|(k, c)| c / (n + k) as f64).collect());
    let ratio = ball.div(&sphere)?;
    Ok(VolumeSeries { ball, sphere, ratio })
}

/// `V_k = (A_k/(n+k) - A_2 V_(k-2) - .. - A_k V_0) / A_0` for `k = 0, 2, 4, 6`.
pub fn vk_recursion<T: super::series::Coeff>(a: &[T; 4], n: usize) -> Result<[T; 4]> {
    if a[0].is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let mut v: Vec<T> = Vec::with_capacity(4);
    for k in 0..4 {
        let mut s = a[k].clone() / T::from_i64((n + 2 * k) as i64);
        for j in 1..=k {
            s = s - a[j].clone() * v[k - j].clone();
        }
        v.push(s / a[0].clone());
    }
    Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{curvature_jet, damek_ricci, Space};
    use crate::invariants::point_invariants;
    use crate::sampling::random_unit;
    use num::{BigInt, BigRational};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn flat_series_are_trivial() {
        let jet = DirectionalCurvatureJet::from_matrices(vec![1.0, 0.0, 0.0], Convention::Author, vec![DMatrix::zeros(3, 3); 4]);
        let a = jacobi_series(&jet, 5).unwrap();
        assert!(a.coeffs[1..].iter().all(|c| c.amax() == 0.0));
        let (d, _, _) = density_series(&a).unwrap();
        assert_eq!((d.a0, d.a2, d.a4), (1.0, 0.0, 0.0));
        let sh = shape_trace_series(&jacobi_recursion(&jet, 6), &jet).unwrap();
        assert_eq!(sh.tr_sigma.offset, -1);
        assert_eq!(sh.tr_sigma.coeff(-1), 2.0);
        assert!(sh.tr_sigma.coeffs[1..].iter().all(|c| *c == 0.0));
    }

    #[test]
    fn constant_curvature_r2_coefficient() {
        let jet = DirectionalCurvatureJet::constant_curvature(vec![0.0, 1.0, 0.0], -2.0, 3);
        let a = jacobi_series(&jet, 5).unwrap();
        let p = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0, 1.0]));
        // AMS sign: S = +2 P
        assert!((&a.coeffs[2] - &p * (2.0 / 6.0)).amax() < 1e-15);
    }

    #[test]
    fn round_sphere_shape_traces() {
        // Tr sigma = (n-1) cot r on the unit sphere
        let n = 5;
        let mut u = vec![0.0; n];
        u[0] = 1.0;
        let jet = DirectionalCurvatureJet::constant_curvature(u, 1.0, 3);
        let sh = shape_trace_series(&jacobi_recursion(&jet, 6), &jet).unwrap();
        let m = (n - 1) as f64;
        let cot = [1.0, -1.0 / 3.0, -1.0 / 45.0, -2.0 / 945.0];
        for (k, c) in cot.iter().enumerate() {
            assert!((sh.tr_sigma.coeff(2 * k as i32 - 1) - m * c).abs() < 1e-14);
        }
        // Tr(R_nu sigma) = (n-1) cot r as well
        assert!((sh.tr_r_sigma.coeff(3) + m / 45.0).abs() < 1e-14);
    }

    #[test]
    fn recursion_reproduces_the_displayed_coefficients() {
        let s = Space::new(damek_ricci(3, 1, 1).unwrap());
        let jet = curvature_jet(&s, &random_unit(s.dim(), 4), 3).unwrap();
        let a = jacobi_series(&jet, 5).unwrap();
        let b = jacobi_recursion(&jet, 5);
        for k in 0..=5 {
            assert!((&a.coeffs[k] - &b.coeffs[k]).amax() < 1e-12, "r^{k}");
        }
        assert!(a.coeffs[3].trace().abs() < 1e-10);
    }

    #[test]
    fn a2_is_minus_c_over_six() {
        let s = Space::new(damek_ricci(3, 1, 0).unwrap());
        let inv = point_invariants(&s, 2, 0);
        let jet = curvature_jet(&s, &random_unit(s.dim(), 1), 3).unwrap();
        let (d, _, _) = density_series(&jacobi_recursion(&jet, 6)).unwrap();
        assert!((d.a2 + inv.c.value / 6.0).abs() < 1e-10);
        let ams_trace = jet.in_convention(Convention::Ams).r().trace();
        assert!((d.a2 - ams_trace / 6.0).abs() < 1e-10);
    }

    #[test]
    fn vk_recursion_examples() {
        let v = vk_recursion(&[q(1, 1), q(0, 1), q(0, 1), q(0, 1)], 7).unwrap();
        assert_eq!(v, [q(1, 7), q(0, 1), q(0, 1), q(0, 1)]);
        let v = vk_recursion(&[q(1, 1), q(1, 1), q(0, 1), q(0, 1)], 4).unwrap();
        assert_eq!(v[0], q(1, 4));
        assert_eq!(v[1], q(-1, 12));
        assert_eq!(vk_recursion(&[0.0, 1.0, 0.0, 0.0], 3), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn unit_density_volume_ratio() {
        let v = volume_series(&DensityCoefficients { a0: 1.0, a2: 0.0, a4: 0.0, a6: 0.0 }, 6).unwrap();
        assert_eq!(v.ratio.offset, 1);
        assert!((v.ratio.coeff(1) - 1.0 / 6.0).abs() < 1e-15);
        assert!(v.ratio.coeffs[1..].iter().all(|c| c.abs() < 1e-15));
    }
}
