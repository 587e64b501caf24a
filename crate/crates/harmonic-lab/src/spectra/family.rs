//! Cell-by-cell isospectrality reports for two family members and Z-ball bundle spectra.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::conjugacy::{conjugacy_check, ConjugacySummary};
use super::hnm::{build_hnm_basis, eigen_multiplicities};
use super::radial::{radial_spectrum, Boundary, RadialOperator, SpectrumReport};
use super::symbol::laplacian_symbol;
use crate::clifford::{FamilyMember, JMap};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyParams {
    pub z_set: Vec<Vec<f64>>,
    pub n_max: usize,
    pub t_max: f64,
    pub boundary: Boundary,
    pub grid: usize,
    pub count: usize,
    pub tol: f64,
    /// Multiplies `mu` on the second member only; `1` except in negative controls.
    pub mu_scale_b: f64,
}

impl FamilyParams {
    pub fn standard(l: usize) -> Self {
        let z_set = match l {
            1 => vec![vec![1.0], vec![2.0]],
            2 => vec![vec![1.0, 0.0], vec![0.0, 2.0]],
            _ => vec![vec![1.0, 0.0, 0.0], vec![0.0, 3.0, 4.0]],
        };
        FamilyParams { z_set, n_max: 3, t_max: 4.0, boundary: Boundary::DIRICHLET, grid: 128, count: 3, tol: 1e-2, mu_scale_b: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeMultiplicities {
    pub n: usize,
    pub a: BTreeMap<i64, usize>,
    pub b: BTreeMap<i64, usize>,
    pub oracle_a: BTreeMap<i64, usize>,
    pub oracle_b: BTreeMap<i64, usize>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZSummary {
    pub z: Vec<f64>,
    pub mu: f64,
    pub conjugacy: Option<ConjugacySummary>,
    pub conjugacy_error: Option<String>,
    pub conjugacy_pass: bool,
    pub multiplicities: Vec<DegreeMultiplicities>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyCell {
    pub z_index: usize,
    pub n: usize,
    pub m: i64,
    pub dim_a: usize,
    pub dim_b: usize,
    pub eigenvalues_a: Vec<f64>,
    pub eigenvalues_b: Vec<f64>,
    pub max_difference: f64,
    pub error_bar: f64,
    pub dims_pass: bool,
    pub spectra_pass: bool,
    pub conjugacy_pass: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub member_a: FamilyMember,
    pub member_b: FamilyMember,
    pub params: FamilyParams,
    pub z_summaries: Vec<ZSummary>,
    pub cells: Vec<FamilyCell>,
    pub pass: bool,
}

impl FamilyReport {
    /// Rows `(z_index, n, m, pass)` of the pass/fail matrix.
    pub fn matrix(&self) -> Vec<(usize, usize, i64, bool)> {
        self.cells.iter().map(|c| (c.z_index, c.n, c.m, c.pass)).collect()
    }
}

const CONJUGACY_TOL: f64 = 1e-10;

pub fn isospectrality_report(a: &JMap, b: &JMap, params: &FamilyParams) -> Result<FamilyReport> {
    if a.l() != b.l() || a.a() + a.b() != b.a() + b.b() {
        return Err(Error::FamilyMismatch(format!("{} vs {}", a.member(), b.member())));
    }
    let k = a.k();
    let mut z_summaries = Vec::new();
    let mut jobs = Vec::new();
    for (zi, z) in params.z_set.iter().enumerate() {
        let sym = laplacian_symbol(a, z)?;
        let z_u: Vec<f64> = z.iter().map(|x| x / sym.z_norm).collect();
        let (conjugacy, conjugacy_error) = match conjugacy_check(&a.j_z(z), &b.j_z(z)) {
            Ok(c) => (Some(c.summary()), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let conjugacy_pass = conjugacy.as_ref().is_some_and(|c| c.residual < CONJUGACY_TOL);
        let multiplicities: Vec<DegreeMultiplicities> = (0..=params.n_max)
            .into_par_iter()
            .map(|n| -> Result<DegreeMultiplicities> {
                let ma = build_hnm_basis(a, &z_u, n)?.multiplicities();
                let mb = build_hnm_basis(b, &z_u, n)?.multiplicities();
                let oa = eigen_multiplicities(a, &z_u, n)?;
                let ob = eigen_multiplicities(b, &z_u, n)?;
                let pass = ma == mb && ma == oa && mb == ob;
                Ok(DegreeMultiplicities { n, a: ma, b: mb, oracle_a: oa, oracle_b: ob, pass })
            })
            .collect::<Result<_>>()?;
        for dm in &multiplicities {
            let ms: std::collections::BTreeSet<i64> = dm.a.keys().chain(dm.b.keys()).copied().collect();
            for m in ms {
                jobs.push((zi, sym.mu, conjugacy_pass, dm.n, m, dm.a.get(&m).copied().unwrap_or(0), dm.b.get(&m).copied().unwrap_or(0)));
            }
        }
        z_summaries.push(ZSummary { z: z.clone(), mu: sym.mu, conjugacy, conjugacy_error, conjugacy_pass, multiplicities });
    }
    let cells: Vec<FamilyCell> = jobs
        .into_par_iter()
        .map(|(z_index, mu, conjugacy_pass, n, m, dim_a, dim_b)| -> Result<FamilyCell> {
            let solve = |mu: f64| {
                radial_spectrum(&RadialOperator { k, n, m, mu }, params.t_max, params.boundary, params.grid, params.count, params.tol)
            };
            let (sa, sb) = (solve(mu)?, solve(mu * params.mu_scale_b)?);
            let max_difference =
                sa.entries.iter().zip(&sb.entries).map(|(x, y)| (x.eigenvalue - y.eigenvalue).abs()).fold(0.0, f64::max);
            let error_bar = sa.entries.iter().chain(&sb.entries).map(|e| e.error_bar).fold(0.0, f64::max);
            let dims_pass = dim_a == dim_b && dim_a > 0;
            let spectra_pass = max_difference <= error_bar;
            Ok(FamilyCell {
                z_index,
                n,
                m,
                dim_a,
                dim_b,
                eigenvalues_a: sa.eigenvalues(),
                eigenvalues_b: sb.eigenvalues(),
                max_difference,
                error_bar,
                dims_pass,
                spectra_pass,
                conjugacy_pass,
                pass: dims_pass && spectra_pass && conjugacy_pass,
            })
        })
        .collect::<Result<_>>()?;
    let pass = cells.iter().all(|c| c.pass) && z_summaries.iter().all(|z| z.multiplicities.iter().all(|d| d.pass));
    Ok(FamilyReport { member_a: a.member(), member_b: b.member(), params: params.clone(), z_summaries, cells, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallBundleParams {
    pub k: usize,
    pub n: usize,
    pub m: i64,
    /// Center dimension `l` of the Euclidean Z-ball.
    pub l: usize,
    pub z_radius: f64,
    /// Spherical-harmonic degree on the Z-ball.
    pub s: usize,
    pub z_boundary: Boundary,
    pub z_count: usize,
    pub t_max: f64,
    pub x_boundary: Boundary,
    pub x_count: usize,
    pub grid: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallBranch {
    pub index: usize,
    pub lambda: f64,
    pub mu: f64,
    pub spectrum: SpectrumReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallBundleReport {
    pub params: BallBundleParams,
    pub z_ball: SpectrumReport,
    pub branches: Vec<BallBranch>,
}

/// Z-ball eigenvalues `lambda_i` from the Euclidean radial operator, then the X-spectra at `mu = sqrt(lambda_i / 4)`.
pub fn ball_bundle_spectrum(p: &BallBundleParams) -> Result<BallBundleReport> {
    let z_op = RadialOperator { k: p.l, n: p.s, m: 0, mu: 0.0 };
    let z_ball = radial_spectrum(&z_op, p.z_radius * p.z_radius, p.z_boundary, p.grid, p.z_count, p.tol)?;
    let branches = z_ball
        .entries
        .par_iter()
        .map(|e| -> Result<BallBranch> {
            let lambda = e.eigenvalue.max(0.0);
            let mu = (lambda / 4.0).sqrt();
            let spectrum =
                radial_spectrum(&RadialOperator { k: p.k, n: p.n, m: p.m, mu }, p.t_max, p.x_boundary, p.grid, p.x_count, p.tol)?;
            Ok(BallBranch { index: e.index, lambda, mu, spectrum })
        })
        .collect::<Result<_>>()?;
    Ok(BallBundleReport { params: p.clone(), z_ball, branches })
}
