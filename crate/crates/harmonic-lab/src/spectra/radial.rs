//! Finite-volume Sturm-Liouville solver for the radial operator
//! `<> f = 4t f'' + (2k + 4n) f' - (2m mu + 4 mu^2 (1 + t/4)) f` on `(0, T]`.
//!
//! Reported eigenvalues are those of `-<>`, so `<> f = -lambda f`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialOperator {
    pub k: usize,
    pub n: usize,
    pub m: i64,
    pub mu: f64,
}

impl RadialOperator {
    /// Exponent `alpha` of `p(t) = t^alpha`; the weight is `t^(alpha - 1) / 4`.
    pub fn alpha(&self) -> f64 {
        (self.k + 2 * self.n) as f64 / 2.0
    }

    /// Zero-order coefficient `2m mu + 4 mu^2` (the `mu^2 t` part is separate).
    pub fn potential_constant(&self) -> f64 {
        2.0 * self.m as f64 * self.mu + 4.0 * self.mu * self.mu
    }

    /// Whole-space eigenvalues `mu (k + 2n + 2m + 4j) + 4 mu^2` of the exponential-times-Laguerre modes.
    pub fn laguerre_reference(&self, j: usize) -> f64 {
        self.mu * (self.k as f64 + 2.0 * self.n as f64 + 2.0 * self.m as f64 + 4.0 * j as f64)
            + 4.0 * self.mu * self.mu
    }
}

/// `A f'(T) + B f(T) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Boundary {
    pub a: f64,
    pub b: f64,
}

impl Boundary {
    pub const DIRICHLET: Boundary = Boundary { a: 0.0, b: 1.0 };
    pub const NEUMANN: Boundary = Boundary { a: 1.0, b: 0.0 };
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub index: usize,
    pub eigenvalue: f64,
    pub error_bar: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub operator: RadialOperator,
    pub t_max: f64,
    pub boundary: Boundary,
    pub grid: usize,
    /// Raw eigenvalues on `grid` and `2 grid` cells.
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumReport {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.eigenvalue).collect()
    }

    pub fn with_multiplicity(mut self, multiplicity: usize) -> Self {
        for e in &mut self.entries {
            e.multiplicity = multiplicity;
        }
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue,error_bar,multiplicity\n");
        for e in &self.entries {
            out.push_str(&format!("{},{:.15e},{:.6e},{}\n", e.index, e.eigenvalue, e.error_bar, e.multiplicity));
        }
        out
    }
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bounds(&self) -> (f64, f64) {
        let n = self.diag.len();
        let r = |i: usize| {
            (if i > 0 { self.off[i - 1].abs() } else { 0.0 }) + (if i + 1 < n { self.off[i].abs() } else { 0.0 })
        };
        let lo = (0..n).map(|i| self.diag[i] - r(i)).fold(f64::INFINITY, f64::min);
        let hi = (0..n).map(|i| self.diag[i] + r(i)).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// The `count` smallest eigenvalues by Sturm bisection. Values below the accumulated
    /// rounding level `4 N eps |A|` of the Sturm recurrence are returned as exact zeros.
    fn lowest(&self, count: usize) -> Vec<f64> {
        let (lo0, hi0) = self.bounds();
        let zero_floor = 4.0 * self.diag.len() as f64 * f64::EPSILON * lo0.abs().max(hi0.abs());
        (0..count.min(self.diag.len()))
            .map(|i| {
                let (mut lo, mut hi) = (lo0, hi0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.count_below(mid) > i {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let x = 0.5 * (lo + hi);
                if x.abs() < zero_floor {
                    0.0
                } else {
                    x
                }
            })
            .collect()
    }
}

fn assemble(op: &RadialOperator, t_max: f64, bc: Boundary, cells: usize) -> Result<Tridiagonal> {
    let h = t_max / cells as f64;
    let alpha = op.alpha();
    let p = |t: f64| t.powf(alpha);
    let den = bc.a / h + bc.b / 2.0;
    if den.abs() <= 1e-14 * (bc.a.abs() / h + bc.b.abs()) {
        return Err(Error::DegenerateBoundary);
    }
    let ghost = (bc.a / h - bc.b / 2.0) / den;
    let c0 = op.potential_constant();
    let mu2 = op.mu * op.mu;
    let mut k_diag = vec![0.0; cells];
    let mut k_off = vec![0.0; cells.saturating_sub(1)];
    let mut w = vec![0.0; cells];
    for i in 0..cells {
        let (tl, tr) = (i as f64 * h, (i + 1) as f64 * h);
        w[i] = (tr.powf(alpha) - tl.powf(alpha)) / (4.0 * alpha * h);
        let lin = mu2 * (tr.powf(alpha + 1.0) - tl.powf(alpha + 1.0)) / (4.0 * (alpha + 1.0) * h);
        let right = if i + 1 < cells { p(tr) } else { p(tr) * (1.0 - ghost) };
        k_diag[i] = (p(tl) + right) / (h * h) + c0 * w[i] + lin;
        if i + 1 < cells {
            k_off[i] = -p(tr) / (h * h);
        }
    }
    let diag = (0..cells).map(|i| k_diag[i] / w[i]).collect();
    let off = (0..cells.saturating_sub(1)).map(|i| k_off[i] / (w[i] * w[i + 1]).sqrt()).collect();
    Ok(Tridiagonal { diag, off })
}

/// Lowest `count` eigenvalues of `-<>` on `grid` cells without refinement.
pub fn raw_eigenvalues(op: &RadialOperator, t_max: f64, bc: Boundary, grid: usize, count: usize) -> Result<Vec<f64>> {
    Ok(assemble(op, t_max, bc, grid)?.lowest(count))
}

/// Solves on `grid` and `2 grid` cells and returns `(4 l_fine - l_coarse)/3` with error bar
/// `|l_fine - l_coarse| / 3`. Fails with `ConvergenceFailure` when a bar exceeds
/// `tol * max(|lambda|, 1)`.
pub fn radial_spectrum(op: &RadialOperator, t_max: f64, bc: Boundary, grid: usize, count: usize, tol: f64) -> Result<SpectrumReport> {
    if !(t_max > 0.0) || count == 0 {
        return Err(Error::InvalidArgument(format!("need T > 0 and count > 0, got T = {t_max}, count = {count}")));
    }
    if bc.a == 0.0 && bc.b == 0.0 {
        return Err(Error::DegenerateBoundary);
    }
    if grid < 64 {
        return Err(Error::InvalidArgument(format!("grid resolution {grid} is below 64")));
    }
    if op.k == 0 || !(op.mu >= 0.0) {
        return Err(Error::InvalidArgument("radial operator needs k >= 1 and mu >= 0".into()));
    }
    let coarse = raw_eigenvalues(op, t_max, bc, grid, count)?;
    let fine = raw_eigenvalues(op, t_max, bc, 2 * grid, count)?;
    let mut entries = Vec::with_capacity(count);
    for (index, (c, f)) in coarse.iter().zip(&fine).enumerate() {
        let eigenvalue = (4.0 * f - c) / 3.0;
        let error_bar = (f - c).abs() / 3.0;
        if error_bar > tol * eigenvalue.abs().max(1.0) {
            return Err(Error::ConvergenceFailure(format!(
                "eigenvalue {index}: refinement moved it by {:.3e}",
                (f - c).abs()
            )));
        }
        entries.push(SpectrumEntry { index, eigenvalue, error_bar, multiplicity: 1 });
    }
    Ok(SpectrumReport { operator: *op, t_max, boundary: bc, grid, coarse, fine, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    const J0_ZEROS: [f64; 3] = [2.404_825_557_695_773, 5.520_078_110_286_311, 8.653_727_912_911_013];

    fn bessel_op() -> RadialOperator {
        RadialOperator { k: 2, n: 0, m: 0, mu: 0.0 }
    }

    #[test]
    fn bessel_case_within_error_bar() {
        let t = 1.5;
        let rep = radial_spectrum(&bessel_op(), t, Boundary::DIRICHLET, 128, 3, 1e-2).unwrap();
        for (e, j) in rep.entries.iter().zip(J0_ZEROS) {
            let want = j * j / t;
            assert!((e.eigenvalue - want).abs() < e.error_bar, "{} vs {want} bar {}", e.eigenvalue, e.error_bar);
        }
    }

    #[test]
    fn grid_doubling_stays_within_bar() {
        let op = RadialOperator { k: 8, n: 2, m: -1, mu: 0.7 };
        let a = radial_spectrum(&op, 4.0, Boundary { a: 1.0, b: 0.5 }, 128, 4, 1e-2).unwrap();
        let b = radial_spectrum(&op, 4.0, Boundary { a: 1.0, b: 0.5 }, 256, 4, 1e-2).unwrap();
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert!((x.eigenvalue - y.eigenvalue).abs() < x.error_bar);
        }
    }

    #[test]
    fn laguerre_limit() {
        let op = RadialOperator { k: 4, n: 1, m: 1, mu: 1.0 };
        let rep = radial_spectrum(&op, 80.0, Boundary::DIRICHLET, 1024, 3, 1e-2).unwrap();
        for (j, e) in rep.entries.iter().enumerate() {
            let want = op.laguerre_reference(j);
            assert!((e.eigenvalue - want).abs() < 1e-4 * want, "{} vs {want}", e.eigenvalue);
        }
    }

    #[test]
    fn dirichlet_domain_monotonicity() {
        let op = RadialOperator { k: 3, n: 1, m: 0, mu: 0.4 };
        let mut prev = vec![f64::INFINITY; 3];
        for t in [1.0, 2.0, 4.0, 8.0] {
            let ev = radial_spectrum(&op, t, Boundary::DIRICHLET, 256, 3, 1e-2).unwrap().eigenvalues();
            assert!(ev.iter().zip(&prev).all(|(a, b)| a < b));
            prev = ev;
        }
    }

    #[test]
    fn neumann_ground_state_is_zero() {
        let ev = raw_eigenvalues(&bessel_op(), 1.0, Boundary::NEUMANN, 64, 1).unwrap();
        assert!(ev[0].abs() < 1e-10);
    }

    #[test]
    fn interval_modes() {
        // One-dimensional ball: s = 0 and s = 1 give the even and odd sine modes on [-1, 1].
        let pi = std::f64::consts::PI;
        let even = radial_spectrum(&RadialOperator { k: 1, n: 0, m: 0, mu: 0.0 }, 1.0, Boundary::DIRICHLET, 2048, 2, 1e-2).unwrap();
        let odd = radial_spectrum(&RadialOperator { k: 1, n: 1, m: 0, mu: 0.0 }, 1.0, Boundary::DIRICHLET, 256, 2, 1e-2).unwrap();
        for (i, e) in even.entries.iter().enumerate() {
            let want = ((2 * i + 1) as f64 * pi / 2.0).powi(2);
            assert!((e.eigenvalue - want).abs() < 1e-4 * want, "{} vs {want}", e.eigenvalue);
        }
        for (i, e) in odd.entries.iter().enumerate() {
            let want = ((i + 1) as f64 * pi).powi(2);
            assert!((e.eigenvalue - want).abs() < 1e-4 * want);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(radial_spectrum(&bessel_op(), 1.0, Boundary { a: 0.0, b: 0.0 }, 64, 1, 1.0).unwrap_err(), Error::DegenerateBoundary);
        assert!(matches!(radial_spectrum(&bessel_op(), 1.0, Boundary::DIRICHLET, 32, 1, 1.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(radial_spectrum(&bessel_op(), 1.0, Boundary::DIRICHLET, 64, 3, 1e-9), Err(Error::ConvergenceFailure(_))));
    }
}
