//! Polynomials in `(M, C, H, L, T)` with `M = n - 1`, `T = Tr(R'_u R'_u)`, and the
//! universal shape-trace coefficients fitted over harmonic sample jets.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num::rational::Ratio;

use crate::error::{Error, Result};
use crate::geometry::{curvature_jet, damek_ricci, DirectionalCurvatureJet, Space};
use crate::invariants::{direction_constants, FastJacobi};
use crate::radial::{density_series, jacobi_recursion, shape_trace_series, Series};
use crate::sampling::unit_directions;

/// Exponents of `(M, C, H, L, T)`.
pub type Monomial = [u8; 5];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Poly(pub BTreeMap<Monomial, f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly::monomial([0; 5], c)
    }

    pub fn monomial(m: Monomial, c: f64) -> Self {
        let mut p = Poly::default();
        if c != 0.0 {
            p.0.insert(m, c);
        }
        p
    }

    pub fn coeff(&self, m: &Monomial) -> f64 {
        self.0.get(m).copied().unwrap_or(0.0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            *out.0.entry(*m).or_insert(0.0) += c;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (*m, c * s)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                let m: Monomial = std::array::from_fn(|i| ma[i] + mb[i]);
                *out.0.entry(m).or_insert(0.0) += ca * cb;
            }
        }
        out
    }

    /// Substitutes `M = n - 1`.
    pub fn at_dimension(&self, n: usize) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.0 {
            let mut key = *m;
            key[0] = 0;
            *out.0.entry(key).or_insert(0.0) += c * ((n - 1) as f64).powi(m[0] as i32);
        }
        out
    }

    pub fn eval(&self, vals: &[f64; 5]) -> f64 {
        self.0.iter().map(|(m, c)| c * (0..5).map(|i| vals[i].powi(m[i] as i32)).product::<f64>()).sum()
    }
}

/// `(C^a H^b L^c T^d)` monomials of curvature weight `w`; weight 0 also carries `M`.
pub fn weight_basis(w: i32) -> Vec<Monomial> {
    match w {
        0 => vec![[0, 0, 0, 0, 0], [1, 0, 0, 0, 0]],
        1 => vec![[0, 1, 0, 0, 0]],
        2 => vec![[0, 2, 0, 0, 0], [0, 0, 1, 0, 0]],
        3 => vec![[0, 3, 0, 0, 0], [0, 1, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]],
        _ => vec![],
    }
}

/// Series with polynomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SymSeries {
    pub offset: i32,
    pub coeffs: Vec<Poly>,
}

impl SymSeries {
    pub fn max_power(&self) -> i32 {
        self.offset + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, p: i32) -> Poly {
        let i = p - self.offset;
        if i < 0 || i as usize >= self.coeffs.len() {
            Poly::default()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn scale(&self, s: &Poly) -> SymSeries {
        SymSeries { offset: self.offset, coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect() }
    }

    pub fn add(&self, other: &SymSeries) -> SymSeries {
        let lo = self.offset.min(other.offset);
        let hi = self.max_power().min(other.max_power());
        SymSeries { offset: lo, coeffs: (lo..=hi).map(|p| self.coeff(p).add(&other.coeff(p))).collect() }
    }

    /// Product, kept through the highest power both factors determine.
    pub fn mul(&self, other: &SymSeries) -> SymSeries {
        let offset = self.offset + other.offset;
        let hi = (self.max_power() + other.offset).min(other.max_power() + self.offset);
        let coeffs = (offset..=hi)
            .map(|p| {
                let mut acc = Poly::default();
                for (i, a) in self.coeffs.iter().enumerate() {
                    acc = acc.add(&a.mul(&other.coeff(p - self.offset - i as i32)));
                }
                acc
            })
            .collect();
        SymSeries { offset, coeffs }
    }

    pub fn eval(&self, vals: &[f64; 5]) -> Series {
        Series::new(self.offset, self.coeffs.iter().map(|c| c.eval(vals)).collect())
    }
}

/// Universal coefficients of the shape traces and of `Theta` on harmonic jets.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeFit {
    pub tr_sigma: SymSeries,
    pub tr_sigma2: SymSeries,
    pub tr_sigma3: SymSeries,
    pub tr_r_sigma: SymSeries,
    pub theta: SymSeries,
    /// Largest absolute fit residual over all coefficients and samples.
    pub residual: f64,
    /// Whether every fitted coefficient is snapped to a small-denominator rational.
    pub rational: bool,
}

struct Sample {
    vals: [f64; 5],
    series: [Series; 5],
}

fn sample(jet: &DirectionalCurvatureJet, t: f64) -> Result<Sample> {
    let a = jacobi_recursion(jet, 6);
    let tr = shape_trace_series(&a, jet)?;
    let (_, theta, _) = density_series(&a)?;
    let (c, h, l) = direction_constants(jet);
    Ok(Sample {
        vals: [(jet.dim() - 1) as f64, c, h, l, t],
        series: [tr.tr_sigma, tr.tr_sigma2, tr.tr_sigma3, tr.tr_r_sigma, theta],
    })
}

fn calibration_samples() -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for n in 3..=8 {
        for kappa in [1.0, -0.5] {
            let mut u = vec![0.0; n];
            u[0] = 1.0;
            out.push(sample(&DirectionalCurvatureJet::constant_curvature(u, kappa, 3), 0.0)?);
        }
    }
    for (l, a, b) in [(1, 1, 0), (3, 1, 1), (2, 1, 1)] {
        let space = Space::new(damek_ricci(l, a, b)?);
        let fast = FastJacobi::new(&space);
        for u in unit_directions(space.dim(), 4, 17) {
            out.push(sample(&curvature_jet(&space, &u, 3)?, fast.tr_r1r1(&u))?);
        }
    }
    Ok(out)
}

/// Best rational approximation with denominator at most `max_den`, accepted within `tol`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Ratio<i64>> {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol * x.abs().max(1.0) {
            return Some(Ratio::new(h1, k1));
        }
        let frac = y - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        y = 1.0 / frac;
    }
    None
}

impl ShapeFit {
    /// Least-squares fit of every coefficient over constant-curvature and Damek-Ricci jets.
    pub fn calibrate(rational: bool) -> Result<ShapeFit> {
        let samples = calibration_samples()?;
        let mut residual = 0.0f64;
        let mut fit = |idx: usize, k: i32, lo: i32, hi: i32| -> Result<SymSeries> {
            let mut coeffs = Vec::new();
            for p in lo..=hi {
                let twice = p + k;
                let basis = if twice % 2 == 0 { weight_basis(twice / 2) } else { vec![] };
                let rhs = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.series[idx].coeff(p)));
                let mut poly = Poly::default();
                if basis.is_empty() {
                    residual = residual.max(rhs.amax());
                } else {
                    let design = DMatrix::from_fn(samples.len(), basis.len(), |r, c| {
                        Poly::monomial(basis[c], 1.0).eval(&samples[r].vals)
                    });
                    let svd = design.clone().svd(true, true);
                    let smax = svd.singular_values.max();
                    if svd.singular_values.min() < 1e-10 * smax {
                        return Err(Error::FitIllConditioned(format!("series {idx}, power {p}")));
                    }
                    let x = svd.solve(&rhs, 1e-14).map_err(|e| Error::FitIllConditioned(e.to_string()))?;
                    let mut xs: Vec<f64> = x.iter().copied().collect();
                    if rational {
                        for v in xs.iter_mut() {
                            if let Some(q) = rationalize(*v, 10_000_000, 1e-9) {
                                *v = *q.numer() as f64 / *q.denom() as f64;
                            }
                        }
                    }
                    let pred = &design * DVector::from_vec(xs.clone());
                    let scale = rhs.amax().max(1.0);
                    residual = residual.max((pred - &rhs).amax() / scale);
                    for (m, v) in basis.iter().zip(xs) {
                        poly = poly.add(&Poly::monomial(*m, v));
                    }
                }
                coeffs.push(poly);
            }
            Ok(SymSeries { offset: lo, coeffs })
        };
        let tr_sigma = fit(0, 1, -1, 5)?;
        let tr_sigma2 = fit(1, 2, -2, 4)?;
        let tr_sigma3 = fit(2, 3, -3, 3)?;
        let tr_r_sigma = fit(3, 3, -1, 3)?;
        let theta = fit(4, 0, 0, 6)?;
        Ok(ShapeFit { tr_sigma, tr_sigma2, tr_sigma3, tr_r_sigma, theta, residual, rational })
    }
}
