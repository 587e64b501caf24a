//! Truncated Laurent-type power series `sum_k c_k r^(offset + k)`.

use std::fmt::Debug;
use std::ops::Neg;

use nalgebra::DMatrix;
use num::{BigRational, Num};

use crate::error::{Error, Result};

/// Coefficient ring for scalar series.
pub trait Coeff: Num + Clone + Debug + Neg<Output = Self> {
    fn from_i64(v: i64) -> Self;
}

impl Coeff for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Coeff for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}

/// Scalar series; coefficients are known through `r^(offset + len - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<T = f64> {
    pub offset: i32,
    pub coeffs: Vec<T>,
}

impl<T: Coeff> Series<T> {
    pub fn new(offset: i32, coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        Series { offset, coeffs }
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = c;
        Series { offset: 0, coeffs }
    }

    /// Highest power whose coefficient is known.
    pub fn max_power(&self) -> i32 {
        self.offset + self.coeffs.len() as i32 - 1
    }

    /// Coefficient of `r^p` (zero below the offset; panics above the truncation).
    pub fn coeff(&self, p: i32) -> T {
        assert!(p <= self.max_power(), "power {p} is beyond the truncation order {}", self.max_power());
        if p < self.offset {
            T::zero()
        } else {
            self.coeffs[(p - self.offset) as usize].clone()
        }
    }

    pub fn truncate_to(&self, max_power: i32) -> Self {
        let keep = (max_power - self.offset + 1).clamp(1, self.coeffs.len() as i32) as usize;
        Series { offset: self.offset, coeffs: self.coeffs[..keep].to_vec() }
    }

    pub fn scale(&self, s: &T) -> Self {
        Series { offset: self.offset, coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    /// Multiplies by `r^k`.
    pub fn shift(&self, k: i32) -> Self {
        Series { offset: self.offset + k, coeffs: self.coeffs.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let lo = self.offset.min(other.offset);
        let hi = self.max_power().min(other.max_power());
        let coeffs = (lo..=hi)
            .map(|p| {
                let a = if p >= self.offset { self.coeff(p) } else { T::zero() };
                let b = if p >= other.offset { other.coeff(p) } else { T::zero() };
                a + b
            })
            .collect();
        Series { offset: lo, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| (0..=k).fold(T::zero(), |acc, i| acc + self.coeffs[i].clone() * other.coeffs[k - i].clone()))
            .collect();
        Series { offset: self.offset + other.offset, coeffs }
    }

    pub fn powi(&self, k: u32) -> Self {
        (1..k).fold(self.clone(), |acc, _| acc.mul(self))
    }

    /// `1 / f`; needs a nonzero leading coefficient.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::SingularSeries("leading coefficient is zero".into()));
        }
        let len = self.coeffs.len();
        let mut inv: Vec<T> = Vec::with_capacity(len);
        inv.push(T::one() / c0.clone());
        for k in 1..len {
            let s = (1..=k).fold(T::zero(), |acc, i| acc + self.coeffs[i].clone() * inv[k - i].clone());
            inv.push(-s / c0.clone());
        }
        Ok(Series { offset: -self.offset, coeffs: inv })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.clone() * T::from_i64(self.offset as i64 + k as i64))
            .collect();
        Series { offset: self.offset - 1, coeffs }
    }

    /// `exp(f)` for `f` with no negative powers.
    pub fn exp(&self) -> Result<Self> {
        if self.offset < 0 {
            return Err(Error::SingularSeries("exp of a series with negative powers".into()));
        }
        let full = self.aligned_from_zero();
        if !full.coeffs[0].is_zero() {
            return Err(Error::SingularSeries("exp needs a zero constant term".into()));
        }
        // g' = f' g, g(0) = 1
        let len = full.coeffs.len();
        let mut g = vec![T::zero(); len];
        g[0] = T::one();
        for k in 1..len {
            let s = (1..=k).fold(T::zero(), |acc, j| acc + T::from_i64(j as i64) * full.coeffs[j].clone() * g[k - j].clone());
            g[k] = s / T::from_i64(k as i64);
        }
        Ok(Series { offset: 0, coeffs: g })
    }

    /// `log(f)` for `f` with constant term one.
    pub fn log(&self) -> Result<Self> {
        let full = self.aligned_from_zero();
        if self.offset < 0 || full.coeffs[0] != T::one() {
            return Err(Error::SingularSeries("log needs constant term one".into()));
        }
        let len = full.coeffs.len();
        let inv = full.inverse()?;
        let d = full.derivative();
        let mut out = vec![T::zero(); len];
        for k in 1..len {
            // coefficient of r^(k-1) in f'/f
            let c = (0..k).fold(T::zero(), |acc, i| acc + d.coeff(i as i32) * inv.coeffs[k - 1 - i].clone());
            out[k] = c / T::from_i64(k as i64);
        }
        Ok(Series { offset: 0, coeffs: out })
    }

    fn aligned_from_zero(&self) -> Self {
        if self.offset == 0 {
            return self.clone();
        }
        let mut coeffs = vec![T::zero(); self.offset as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        Series { offset: 0, coeffs }
    }

    /// `(power, coefficient)` rows.
    pub fn rows(&self) -> Vec<(i32, T)> {
        self.coeffs.iter().enumerate().map(|(k, c)| (self.offset + k as i32, c.clone())).collect()
    }
}

impl Series<f64> {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("power,coefficient\n");
        for (p, c) in self.rows() {
            s.push_str(&format!("{p},{c:e}\n"));
        }
        s
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.rows().iter().map(|(p, c)| c * r.powi(*p)).sum()
    }
}

/// Matrix-valued series with the same truncation rules.
#[derive(Debug, Clone, PartialEq)]
pub struct MatSeries {
    pub offset: i32,
    pub coeffs: Vec<DMatrix<f64>>,
}

impl MatSeries {
    pub fn new(offset: i32, coeffs: Vec<DMatrix<f64>>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        MatSeries { offset, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn max_power(&self) -> i32 {
        self.offset + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, p: i32) -> DMatrix<f64> {
        assert!(p <= self.max_power(), "power {p} is beyond the truncation order");
        if p < self.offset {
            DMatrix::zeros(self.dim(), self.dim())
        } else {
            self.coeffs[(p - self.offset) as usize].clone()
        }
    }

    pub fn mul(&self, other: &MatSeries) -> MatSeries {
        let len = self.coeffs.len().min(other.coeffs.len());
        let n = self.dim();
        let coeffs = (0..len)
            .map(|k| (0..=k).fold(DMatrix::zeros(n, n), |acc, i| acc + &self.coeffs[i] * &other.coeffs[k - i]))
            .collect();
        MatSeries { offset: self.offset + other.offset, coeffs }
    }

    pub fn inverse(&self) -> Result<MatSeries> {
        let c0inv = self.coeffs[0]
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::SingularSeries("leading matrix coefficient is not invertible".into()))?;
        let n = self.dim();
        let mut inv = vec![c0inv.clone()];
        for k in 1..self.coeffs.len() {
            let s = (1..=k).fold(DMatrix::zeros(n, n), |acc, i| acc + &self.coeffs[i] * &inv[k - i]);
            inv.push(-(&c0inv * s));
        }
        Ok(MatSeries { offset: -self.offset, coeffs: inv })
    }

    pub fn derivative(&self) -> MatSeries {
        let coeffs =
            self.coeffs.iter().enumerate().map(|(k, c)| c * (self.offset as f64 + k as f64)).collect();
        MatSeries { offset: self.offset - 1, coeffs }
    }

    pub fn trace(&self) -> Series {
        Series { offset: self.offset, coeffs: self.coeffs.iter().map(|c| c.trace()).collect() }
    }

    /// `det` via `exp(Tr log)`; needs the identity as the `r^0` coefficient and offset 0.
    pub fn det_exp_trace_log(&self) -> Result<Series> {
        let n = self.dim();
        if self.offset != 0 || (&self.coeffs[0] - DMatrix::<f64>::identity(n, n)).amax() > 1e-14 {
            return Err(Error::SingularSeries("det via exp-trace-log needs leading coefficient I".into()));
        }
        let len = self.coeffs.len();
        let mut x = self.clone();
        x.coeffs[0] = DMatrix::zeros(n, n);
        // log(I + X) = sum (-1)^(k+1) X^k / k; X = O(r), so k < len suffices
        let mut log = Series::new(0, vec![0.0; len]);
        let mut power = x.clone();
        for k in 1..len {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            log = log.add(&power.trace().scale(&(sign / k as f64)));
            power = power.mul(&x);
        }
        log.exp()
    }
}

/// Leibniz-formula determinant series of a 3x3 matrix series, as an independent check.
pub fn det3_cofactor(a: &MatSeries) -> Series {
    assert_eq!(a.dim(), 3, "cofactor oracle is 3x3");
    let entry = |i: usize, j: usize| Series::new(a.offset, a.coeffs.iter().map(|m| m[(i, j)]).collect());
    let term = |p: [usize; 3]| entry(0, p[0]).mul(&entry(1, p[1])).mul(&entry(2, p[2]));
    term([0, 1, 2]).add(&term([1, 2, 0])).add(&term([2, 0, 1])).sub(&term([0, 2, 1])).sub(&term([1, 0, 2])).sub(&term([2, 1, 0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn geometric_series_inverse() {
        let f = Series::new(0, vec![1.0, -1.0, 0.0, 0.0, 0.0]);
        assert_eq!(f.inverse().unwrap().coeffs, vec![1.0; 5]);
    }

    #[test]
    fn exact_rational_division() {
        let f = Series::new(0, vec![q(1, 1), q(1, 2), q(1, 3)]);
        let g = f.div(&f).unwrap();
        assert_eq!(g.coeffs, vec![q(1, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn exp_log_of_known_series() {
        let x = Series::new(0, vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let e = x.exp().unwrap();
        let want = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 120.0];
        assert!(e.coeffs.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-15));
        let back = e.log().unwrap();
        assert!(back.sub(&x).coeffs.iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn laurent_offsets_multiply() {
        let f = Series::new(-1, vec![2.0, 0.0, 1.0]);
        let g = f.mul(&f);
        assert_eq!(g.offset, -2);
        assert_eq!(g.coeffs, vec![4.0, 0.0, 4.0]);
        assert_eq!(f.derivative().coeffs, vec![-2.0, 0.0, 1.0]);
    }

    fn series_strategy(len: usize) -> impl Strategy<Value = Series> {
        prop::collection::vec(-2.0f64..2.0, len).prop_map(|v| Series::new(0, v))
    }

    fn unit_series(len: usize) -> impl Strategy<Value = Series> {
        prop::collection::vec(-2.0f64..2.0, len - 1).prop_map(|mut v| {
            v.insert(0, 1.0);
            Series::new(0, v)
        })
    }

    fn close(a: &Series, b: &Series, tol: f64) -> bool {
        a.offset == b.offset && a.coeffs.iter().zip(&b.coeffs).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
    }

    fn mat_series(len: usize) -> impl Strategy<Value = MatSeries> {
        prop::collection::vec(-1.0f64..1.0, 9 * (len - 1)).prop_map(move |v| {
            let mut coeffs = vec![DMatrix::identity(3, 3)];
            coeffs.extend(v.chunks(9).map(|c| DMatrix::from_row_slice(3, 3, c)));
            MatSeries::new(0, coeffs)
        })
    }

    proptest! {
        #[test]
        fn product_is_associative(f in series_strategy(7), g in series_strategy(7), h in series_strategy(7)) {
            prop_assert!(close(&f.mul(&g).mul(&h), &f.mul(&g.mul(&h)), 1e-10));
        }

        #[test]
        fn inverse_is_inverse(f in unit_series(7)) {
            let one = Series::constant(1.0, 6);
            prop_assert!(close(&f.mul(&f.inverse().unwrap()), &one, 1e-9));
        }

        #[test]
        fn leibniz_rule(f in series_strategy(7), g in series_strategy(7)) {
            let lhs = f.mul(&g).derivative();
            let rhs = f.derivative().mul(&g).add(&f.mul(&g.derivative()));
            prop_assert!(close(&lhs.truncate_to(rhs.max_power()), &rhs, 1e-10));
        }

        #[test]
        fn det_exp_trace_log_matches_cofactor(a in mat_series(7)) {
            let d1 = a.det_exp_trace_log().unwrap();
            let d2 = det3_cofactor(&a);
            prop_assert!(close(&d1, &d2, 1e-9));
        }

        #[test]
        fn matrix_inverse_is_two_sided(a in mat_series(5)) {
            let inv = a.inverse().unwrap();
            for p in [a.mul(&inv), inv.mul(&a)] {
                for (k, c) in p.coeffs.iter().enumerate() {
                    let want = if k == 0 { DMatrix::identity(3, 3) } else { DMatrix::zeros(3, 3) };
                    prop_assert!((c - want).amax() < 1e-9);
                }
            }
        }
    }
}
