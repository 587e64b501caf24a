//! Isotropic moments of the normalized measure on the unit sphere of `R^n`.
//!
//! `avg(u_{i_1} .. u_{i_2k}) = (sum over perfect matchings of prod delta) / (n (n+2) .. (n+2k-2))`.

use num::rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling;

pub const MAX_EXACT_DEGREE: usize = 8;

/// Dense multilinear form `T(u, .., u)` of order `degree` on `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseForm {
    pub n: usize,
    pub degree: usize,
    pub data: Vec<f64>,
}

impl DenseForm {
    pub fn new(n: usize, degree: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n.pow(degree as u32), "form data has wrong length");
        DenseForm { n, degree, data }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        DenseForm { n, degree: 0, data: vec![c] }
    }

    pub fn from_fn(n: usize, degree: usize, f: impl Fn(&[usize]) -> f64) -> Self {
        let mut idx = vec![0; degree];
        let data = (0..n.pow(degree as u32))
            .map(|flat| {
                let mut r = flat;
                for slot in (0..degree).rev() {
                    idx[slot] = r % n;
                    r /= n;
                }
                f(&idx)
            })
            .collect();
        DenseForm { n, degree, data }
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        // Horner-style contraction of the last slot first.
        let mut cur = self.data.clone();
        for _ in 0..self.degree {
            let next_len = cur.len() / self.n;
            cur = (0..next_len).map(|i| (0..self.n).map(|j| cur[i * self.n + j] * u[j]).sum()).collect();
        }
        cur[0]
    }
}

/// All perfect matchings of `{0, .., d-1}`.
pub fn perfect_matchings(d: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(rest: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(acc.clone());
            return;
        };
        for (pos, &partner) in tail.iter().enumerate() {
            let mut remaining = tail.to_vec();
            remaining.remove(pos);
            acc.push((first, partner));
            rec(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if d % 2 == 0 {
        rec(&(0..d).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    }
    out
}

fn double_factorial_odd(m: usize) -> i64 {
    // (m - 1)!! for even m
    (1..m).step_by(2).map(|v| v as i64).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AverageMethod {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct SphereMomentEngine {
    n: usize,
    matchings: Vec<Vec<Vec<(usize, usize)>>>,
}

impl SphereMomentEngine {
    pub fn new(n: usize) -> Self {
        let matchings = (0..=MAX_EXACT_DEGREE).map(perfect_matchings).collect();
        SphereMomentEngine { n, matchings }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `n (n+2) .. (n+2k-2)` for degree `2k`.
    pub fn normalizer(&self, degree: usize) -> i64 {
        (0..degree / 2).map(|j| (self.n + 2 * j) as i64).product()
    }

    /// Exact `avg(prod u_i^{e_i})`.
    pub fn monomial_moment_exact(&self, exps: &[usize]) -> Result<Ratio<i64>> {
        let degree: usize = exps.iter().sum();
        if degree > MAX_EXACT_DEGREE {
            return Err(Error::DegreeTooHigh(degree));
        }
        if exps.iter().any(|e| e % 2 == 1) {
            return Ok(Ratio::from_integer(0));
        }
        let num: i64 = exps.iter().map(|&e| double_factorial_odd(e)).product();
        Ok(Ratio::new(num, self.normalizer(degree)))
    }

    pub fn monomial_moment(&self, exps: &[usize]) -> Result<f64> {
        let r = self.monomial_moment_exact(exps)?;
        Ok(*r.numer() as f64 / *r.denom() as f64)
    }

    fn matched_sum(&self, degree: usize, mut slot_value: impl FnMut(&[usize]) -> f64) -> Result<f64> {
        if degree > MAX_EXACT_DEGREE {
            return Err(Error::DegreeTooHigh(degree));
        }
        if degree % 2 == 1 {
            return Ok(0.0);
        }
        let k = degree / 2;
        let n = self.n;
        let mut slots = vec![0usize; degree];
        let mut total = 0.0;
        for matching in &self.matchings[degree] {
            for flat in 0..n.pow(k as u32) {
                let mut r = flat;
                for &(p, q) in matching.iter() {
                    slots[p] = r % n;
                    slots[q] = r % n;
                    r /= n;
                }
                total += slot_value(&slots);
            }
        }
        Ok(total / self.normalizer(degree) as f64)
    }

    /// Exact average of `T(u, .., u)`.
    pub fn average_form(&self, form: &DenseForm) -> Result<f64> {
        let n = self.n;
        self.matched_sum(form.degree, |slots| form.data[flat_index(n, slots)])
    }

    /// Exact average of `A(u, .., u) B(u, .., u)`.
    pub fn average_product(&self, a: &DenseForm, b: &DenseForm) -> Result<f64> {
        let n = self.n;
        let da = a.degree;
        self.matched_sum(a.degree + b.degree, |slots| {
            a.data[flat_index(n, &slots[..da])] * b.data[flat_index(n, &slots[da..])]
        })
    }

    /// Seeded Monte-Carlo estimate; chunks carry their own seeds so the result
    /// does not depend on the thread count.
    pub fn monte_carlo<F>(&self, samples: usize, seed: u64, f: F) -> McEstimate
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        const CHUNK: usize = 4096;
        let chunks = samples.div_ceil(CHUNK);
        let sums: Vec<(f64, f64)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = sampling::rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(c as u64));
                let count = CHUNK.min(samples - c * CHUNK);
                let (mut s, mut s2) = (0.0, 0.0);
                for _ in 0..count {
                    let v = f(&sampling::unit_from(&mut rng, self.n));
                    s += v;
                    s2 += v * v;
                }
                (s, s2)
            })
            .collect();
        let (s, s2) = sums.iter().fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
        let m = samples as f64;
        let mean = s / m;
        let var = (s2 / m - mean * mean).max(0.0) * m / (m - 1.0).max(1.0);
        McEstimate { mean, stderr: (var / m).sqrt(), samples, seed }
    }

    /// Average of a form by the requested method.
    pub fn sphere_average(&self, form: &DenseForm, method: AverageMethod) -> Result<f64> {
        match method {
            AverageMethod::Exact => self.average_form(form),
            AverageMethod::MonteCarlo { samples, seed } => Ok(self.monte_carlo(samples, seed, |u| form.eval(u)).mean),
        }
    }
}

fn flat_index(n: usize, slots: &[usize]) -> usize {
    slots.iter().fold(0, |acc, &s| acc * n + s)
}
