//! Residual records shared by the verification suites.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub identity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualEntry {
    /// Compares `lhs` with `rhs`; the relative residual is taken against the
    /// largest of `|lhs|`, `|rhs|` and `scale`. Zero against zero passes.
    pub fn compare(identity: impl Into<String>, lhs: f64, rhs: f64, scale: f64, tolerance: f64) -> Self {
        let abs_residual = (lhs - rhs).abs();
        let denom = lhs.abs().max(rhs.abs()).max(scale.abs());
        let rel_residual = if denom == 0.0 { 0.0 } else { abs_residual / denom };
        let pass = rel_residual < tolerance && abs_residual.is_finite();
        ResidualEntry { identity: identity.into(), lhs, rhs, abs_residual, rel_residual, tolerance, pass }
    }

    /// An absolute-threshold check `|value| < tolerance` (or `> tolerance` when `above`).
    pub fn threshold(identity: impl Into<String>, value: f64, tolerance: f64, above: bool) -> Self {
        let pass = if above { value > tolerance } else { value.abs() < tolerance };
        ResidualEntry {
            identity: identity.into(),
            lhs: value,
            rhs: 0.0,
            abs_residual: value.abs(),
            rel_residual: value.abs(),
            tolerance,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub subject: String,
    pub entries: Vec<ResidualEntry>,
}

impl ResidualReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> Vec<&ResidualEntry> {
        self.entries.iter().filter(|e| !e.pass).collect()
    }
}

/// Relative agreement of two numbers, with `0 ~ 0` treated as exact.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let d = a.abs().max(b.abs());
    if d == 0.0 {
        0.0
    } else {
        (a - b).abs() / d
    }
}
