use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{curvature_jet, Convention, DirectionalCurvatureJet, Space, Tensor4};
use crate::report::{ResidualEntry, ResidualReport};
use crate::sampling;

/// `(C(u), H(u), L(u)) = (Tr R_u, Tr R_u^2, Tr(32 R_u^3 - 9 R'_u R'_u))`.
pub fn direction_constants(jet: &DirectionalCurvatureJet) -> (f64, f64, f64) {
    let j = jet.in_convention(Convention::Author);
    let r = j.r();
    let r1 = j.r1();
    let r2 = r * r;
    let c = r.trace();
    let h = r2.trace();
    let l = 32.0 * (&r2 * r).trace() - 9.0 * (&r1 * &r1).trace();
    (c, h, l)
}

/// A per-direction constant sampled over several directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sampled {
    pub value: f64,
    pub spread: f64,
}

impl Sampled {
    pub fn from_values(vals: &[f64]) -> Self {
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Sampled { value: vals.iter().sum::<f64>() / vals.len() as f64, spread: hi - lo }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointInvariants {
    pub n: usize,
    pub c: Sampled,
    pub h: Sampled,
    pub l: Sampled,
    pub scal: f64,
    pub norm_r2: f64,
    pub norm_ric2: f64,
    /// `R^ = sum R_ijpq R_pqrs R_rsij`, contracted in the AMS sign.
    pub r_hat: f64,
    /// `R° = sum R_ipjq R_prqs R_risj`, contracted in the AMS sign.
    pub r_ring: f64,
    pub norm_del_r2: f64,
    pub seed: u64,
}

fn pair_matrix(t: &Tensor4, f: impl Fn(usize, usize, usize, usize) -> (usize, usize, usize, usize)) -> DMatrix<f64> {
    let n = t.dim();
    DMatrix::from_fn(n * n, n * n, |row, col| {
        let (a, b, c, d) = f(row / n, row % n, col / n, col % n);
        t.get(a, b, c, d)
    })
}

/// `(R^, R°)` of a tensor as given.
pub fn cubic_contractions(t: &Tensor4) -> (f64, f64) {
    let m = pair_matrix(t, |i, j, p, q| (i, j, p, q));
    let hat = (&m * &m * &m).trace();
    let nm = pair_matrix(t, |i, j, p, q| (i, p, j, q));
    let ring = (&nm * &nm * &nm).trace();
    (hat, ring)
}

/// Point invariants with `C, H, L` sampled over `samples` seeded directions.
pub fn point_invariants(space: &Space, samples: usize, seed: u64) -> PointInvariants {
    let n = space.dim();
    let dirs = sampling::unit_directions(n, samples.max(1), seed);
    let chl: Vec<(f64, f64, f64)> = dirs
        .par_iter()
        .map(|u| direction_constants(&curvature_jet(space, u, 1).expect("unit direction")))
        .collect();
    let pick = |f: fn(&(f64, f64, f64)) -> f64| Sampled::from_values(&chl.iter().map(f).collect::<Vec<_>>());
    let ric = space.curvature.ricci();
    let ams = space.curvature.in_convention(Convention::Ams);
    let (r_hat, r_ring) = cubic_contractions(&ams);
    PointInvariants {
        n,
        c: pick(|t| t.0),
        h: pick(|t| t.1),
        l: pick(|t| t.2),
        scal: ric.trace(),
        norm_r2: space.curvature.tensor().norm2(),
        norm_ric2: ric.norm_squared(),
        r_hat,
        r_ring,
        norm_del_r2: space.nabla_r_norm2(),
        seed,
    }
}

impl PointInvariants {
    /// `R^ - (7/24) |nabla R|^2`, constant across a family.
    pub fn q3(&self) -> f64 {
        self.r_hat - 7.0 / 24.0 * self.norm_del_r2
    }

    /// `R° - (17/96) |nabla R|^2`, constant across a family.
    pub fn q4(&self) -> f64 {
        self.r_ring - 17.0 / 96.0 * self.norm_del_r2
    }
}

pub fn verify_einstein_identities(inv: &PointInvariants, tol: f64) -> ResidualReport {
    let n = inv.n as f64;
    let (c, h, l) = (inv.c.value, inv.h.value, inv.l.value);
    let nr = inv.norm_r2;
    let dr = inv.norm_del_r2;
    let curv_norm = 2.0 * n / 3.0 * ((n + 2.0) * h - c * c);
    let dens_terms = [32.0 * n * c.powi(3), 144.0 * c * nr, 112.0 * inv.r_hat, 32.0 * inv.r_ring, 27.0 * dr];
    let dens_lhs = dens_terms[0] + dens_terms[1] + dens_terms[2] - dens_terms[3] - dens_terms[4];
    let dens_rhs = n * (n * n + 6.0 * n + 8.0) * l;
    let lich_terms = [2.0 * c * nr, inv.r_hat, 4.0 * inv.r_ring, dr];
    let lich = lich_terms[0] - lich_terms[1] - lich_terms[2] + lich_terms[3];
    let scale = |ts: &[f64]| ts.iter().map(|v| v.abs()).fold(0.0, f64::max);
    ResidualReport {
        subject: "einstein identities".into(),
        entries: vec![
            ResidualEntry::compare("curvature norm", nr, curv_norm, 0.0, tol),
            ResidualEntry::compare("density equation", dens_lhs, dens_rhs, scale(&dens_terms), tol),
            ResidualEntry::compare("lichnerowicz", lich, 0.0, scale(&lich_terms), tol),
            ResidualEntry::compare("scalar = nC", inv.scal, n * c, 0.0, tol),
            ResidualEntry::compare("|Ric|^2 = nC^2", inv.norm_ric2, n * c * c, 0.0, tol),
        ],
    }
}
