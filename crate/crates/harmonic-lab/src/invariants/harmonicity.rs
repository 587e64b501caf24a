use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{curvature_jet, Convention, Space};
use crate::report::ResidualEntry;
use crate::sampling;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicityReport {
    pub samples: usize,
    pub seed: u64,
    pub entries: Vec<ResidualEntry>,
    pub pass: bool,
}

/// The five trace conditions per direction:
/// `Tr R_u`, `Tr R_u^2`, `Tr(32 R_u^3 - 9 R'_u R'_u)`, `Tr R_u R'_u`, `Tr R_u R''_u + Tr R'_u R'_u`.
pub fn trace_conditions(space: &Space, u: &[f64]) -> [f64; 5] {
    let jet = curvature_jet(space, u, 2).expect("unit direction").in_convention(Convention::Author);
    let (r, r1, r2) = (jet.r(), jet.r1(), jet.r2());
    let rr = r * r;
    let r1r1 = (&r1 * &r1).trace();
    [r.trace(), rr.trace(), 32.0 * (&rr * r).trace() - 9.0 * r1r1, (r * &r1).trace(), (r * &r2).trace() + r1r1]
}

const NAMES: [&str; 5] = ["Tr R_u", "Tr R_u^2", "Tr(32R_u^3 - 9R'_uR'_u)", "Tr R_uR'_u", "Tr R_uR''_u + Tr R'_uR'_u"];

pub fn verify_harmonicity(space: &Space, n_samples: usize, tol: f64, seed: u64) -> HarmonicityReport {
    let dirs = sampling::unit_directions(space.dim(), n_samples.max(2), seed);
    let vals: Vec<[f64; 5]> = dirs.par_iter().map(|u| trace_conditions(space, u)).collect();
    let mut entries = Vec::new();
    for (k, name) in NAMES.iter().enumerate() {
        let col: Vec<f64> = vals.iter().map(|v| v[k]).collect();
        let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
        entries.push(ResidualEntry::compare(format!("spread {name}"), hi, lo, 1.0, tol));
        if k >= 3 {
            let worst = col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            entries.push(ResidualEntry::compare(format!("{name} = 0"), worst, 0.0, 1.0, tol));
        }
    }
    let pass = entries.iter().all(|e| e.pass);
    HarmonicityReport { samples: dirs.len(), seed, entries, pass }
}
