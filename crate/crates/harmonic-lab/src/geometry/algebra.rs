use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::clifford::JMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameLabel {
    X,
    Z,
    A,
}

/// Structure constants `[e_i, e_j] = sum_m c[i][j][m] e_m` on an orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricLieAlgebra {
    n: usize,
    c: Vec<f64>,
    labels: Vec<FrameLabel>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AlgebraDocument {
    pub dim: usize,
    pub labels: Vec<FrameLabel>,
    /// Nonzero entries `(i, j, m, c_ijm)` with `i < j`.
    pub brackets: Vec<(usize, usize, usize, f64)>,
    pub inner_product: Vec<Vec<f64>>,
}

impl MetricLieAlgebra {
    pub fn new(labels: Vec<FrameLabel>) -> Self {
        let n = labels.len();
        MetricLieAlgebra { n, c: vec![0.0; n * n * n], labels }
    }

    pub fn abelian(n: usize) -> Self {
        Self::new(vec![FrameLabel::X; n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[FrameLabel] {
        &self.labels
    }

    pub fn indices(&self, label: FrameLabel) -> Vec<usize> {
        (0..self.n).filter(|&i| self.labels[i] == label).collect()
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, m: usize) -> f64 {
        self.c[(i * self.n + j) * self.n + m]
    }

    /// Sets `c[i][j][m] = v` and `c[j][i][m] = -v`.
    pub fn set_bracket(&mut self, i: usize, j: usize, m: usize, v: f64) {
        let n = self.n;
        self.c[(i * n + j) * n + m] = v;
        self.c[(j * n + i) * n + m] = -v;
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for (m, o) in out.iter_mut().enumerate() {
                    *o += xy * self.c(i, j, m);
                }
            }
        }
        out
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    r = r.max((self.c(i, j, m) + self.c(j, i, m)).abs());
                }
            }
        }
        r
    }

    /// Sum of absolute Jacobi-identity residuals over basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut s = 0.0;
                        for p in 0..n {
                            s += self.c(j, k, p) * self.c(i, p, m)
                                + self.c(k, i, p) * self.c(j, p, m)
                                + self.c(i, j, p) * self.c(k, p, m);
                        }
                        total += s.abs();
                    }
                }
            }
        }
        total
    }

    /// Sum of `|[[e_i, e_j], e_k]|` components; zero for a 2-step algebra.
    pub fn two_step_residual(&self) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let s: f64 = (0..n).map(|p| self.c(i, j, p) * self.c(p, k, m)).sum();
                        total += s.abs();
                    }
                }
            }
        }
        total
    }

    /// `J_Z` recovered from `<[X, Y], Z> = <J_Z X, Y>` for the center basis vector `z`.
    pub fn recovered_j(&self, z: usize) -> DMatrix<f64> {
        let xs = self.indices(FrameLabel::X);
        DMatrix::from_fn(xs.len(), xs.len(), |row, col| self.c(xs[col], xs[row], z))
    }

    /// Copy with the bracket `[e_i, e_j]` component along `e_m` multiplied by `factor`.
    pub fn with_scaled_bracket(&self, i: usize, j: usize, m: usize, factor: f64) -> Self {
        let mut out = self.clone();
        out.set_bracket(i, j, m, self.c(i, j, m) * factor);
        out
    }

    pub fn to_document(&self) -> AlgebraDocument {
        let n = self.n;
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for m in 0..n {
                    let v = self.c(i, j, m);
                    if v != 0.0 {
                        brackets.push((i, j, m, v));
                    }
                }
            }
        }
        let inner_product = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
        AlgebraDocument { dim: n, labels: self.labels.clone(), brackets, inner_product }
    }

    pub fn from_document(doc: &AlgebraDocument) -> Result<Self> {
        if doc.labels.len() != doc.dim {
            return Err(Error::InvalidArgument("label count differs from dim".into()));
        }
        let orthonormal = doc.inner_product.len() == doc.dim
            && doc.inner_product.iter().enumerate().all(|(i, row)| {
                row.len() == doc.dim && row.iter().enumerate().all(|(j, &v)| v == f64::from(u8::from(i == j)))
            });
        if !orthonormal {
            return Err(Error::InvalidArgument("frame must be orthonormal".into()));
        }
        let mut alg = Self::new(doc.labels.clone());
        for &(i, j, m, v) in &doc.brackets {
            if i >= doc.dim || j >= doc.dim || m >= doc.dim {
                return Err(Error::InvalidArgument(format!("bracket index out of range: ({i},{j},{m})")));
            }
            alg.set_bracket(i, j, m, v);
        }
        Ok(alg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("algebra document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: AlgebraDocument = serde_json::from_str(s).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// The 2-step nilpotent algebra `n = X + Z` with `<[X, Y], Z> = <J_Z X, Y>`.
pub fn build_htype_algebra(jmap: &JMap) -> MetricLieAlgebra {
    let (k, l) = (jmap.k(), jmap.l());
    let mut labels = vec![FrameLabel::X; k];
    labels.extend(std::iter::repeat_n(FrameLabel::Z, l));
    let mut alg = MetricLieAlgebra::new(labels);
    for a in 0..l {
        let j = jmap.j_basis(a);
        for i in 0..k {
            for jj in i + 1..k {
                // <[e_i, e_jj], z_a> = <J_a e_i, e_jj> = J[jj][i]
                let v = j[(jj, i)];
                if v != 0.0 {
                    alg.set_bracket(i, jj, k + a, v);
                }
            }
        }
    }
    alg
}

fn check_htype(nilp: &MetricLieAlgebra) -> Result<()> {
    if !nilp.indices(FrameLabel::A).is_empty() {
        return Err(Error::NotHType("input already has an A-axis".into()));
    }
    let xs = nilp.indices(FrameLabel::X);
    let zs = nilp.indices(FrameLabel::Z);
    if xs.is_empty() || zs.is_empty() {
        return Err(Error::NotHType("X-part and Z-part must both be nonempty".into()));
    }
    let id = DMatrix::<f64>::identity(xs.len(), xs.len());
    let js: Vec<_> = zs.iter().map(|&z| nilp.recovered_j(z)).collect();
    for (a, ja) in js.iter().enumerate() {
        for (b, jb) in js.iter().enumerate() {
            let delta = if a == b { 2.0 } else { 0.0 };
            let r = (ja * jb + jb * ja + &id * delta).amax();
            if r > 1e-12 {
                return Err(Error::NotHType(format!("Clifford relation fails for (Z{a}, Z{b}): residual {r:.3e}")));
            }
        }
    }
    Ok(())
}

/// Solvable extension `s = n + RA` with `[A, X] = X/2`, `[A, Z] = Z`, `|A| = 1`.
pub fn build_damek_ricci(nilp: &MetricLieAlgebra) -> Result<MetricLieAlgebra> {
    check_htype(nilp)?;
    Ok(solvable_extension(nilp))
}

/// The same extension without the Clifford check; used for negative controls.
pub fn solvable_extension(nilp: &MetricLieAlgebra) -> MetricLieAlgebra {
    let n = nilp.dim();
    let mut labels = nilp.labels().to_vec();
    labels.push(FrameLabel::A);
    let mut alg = MetricLieAlgebra::new(labels);
    for i in 0..n {
        for j in i + 1..n {
            for m in 0..n {
                let v = nilp.c(i, j, m);
                if v != 0.0 {
                    alg.set_bracket(i, j, m, v);
                }
            }
        }
    }
    for (i, label) in nilp.labels().iter().enumerate() {
        let weight = if *label == FrameLabel::X { 0.5 } else { 1.0 };
        alg.set_bracket(n, i, i, weight);
    }
    alg
}

/// Damek-Ricci algebra `SH^(a,b)_l`.
pub fn damek_ricci(l: usize, a: usize, b: usize) -> Result<MetricLieAlgebra> {
    build_damek_ricci(&build_htype_algebra(&crate::clifford::j_map(l, a, b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::j_map;

    #[test]
    fn heisenberg_bracket() {
        let h = build_htype_algebra(&j_map(1, 1, 0).unwrap());
        assert_eq!(h.dim(), 3);
        assert_eq!(h.bracket(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn htype_algebras_are_two_step_and_recover_j() {
        for (l, a, b) in [(1, 1, 0), (2, 1, 1), (3, 1, 1), (3, 2, 0)] {
            let j = j_map(l, a, b).unwrap();
            let h = build_htype_algebra(&j);
            assert_eq!(h.dim(), j.k() + l);
            assert_eq!(h.two_step_residual(), 0.0);
            assert_eq!(h.jacobi_residual(), 0.0);
            for z in 0..l {
                assert_eq!(h.recovered_j(j.k() + z), j.j_basis(z));
            }
        }
    }

    #[test]
    fn damek_ricci_dimensions_and_brackets() {
        assert_eq!(damek_ricci(1, 1, 0).unwrap().dim(), 4);
        assert_eq!(damek_ricci(3, 2, 0).unwrap().dim(), 12);
        let s = damek_ricci(3, 1, 1).unwrap();
        assert_eq!(s.jacobi_residual(), 0.0);
        assert_eq!(s.antisymmetry_residual(), 0.0);
        let n = s.dim();
        let mut a = vec![0.0; n];
        a[n - 1] = 1.0;
        let (mut x, mut y) = (vec![0.0; n], vec![0.0; n]);
        x[0] = 1.0;
        y[1] = 1.0;
        let xy = s.bracket(&x, &y);
        assert_eq!(s.bracket(&a, &xy), xy);
        let mut half = vec![0.0; n];
        half[0] = 0.5;
        assert_eq!(s.bracket(&a, &x), half);
    }

    #[test]
    fn non_htype_input_is_rejected() {
        let h = build_htype_algebra(&j_map(3, 1, 0).unwrap());
        let bent = h.with_scaled_bracket(0, 1, 4, 1.1);
        assert!(matches!(build_damek_ricci(&bent), Err(Error::NotHType(_))));
        let twice = damek_ricci(1, 1, 0).unwrap();
        assert!(matches!(build_damek_ricci(&twice), Err(Error::NotHType(_))));
    }

    #[test]
    fn json_document_round_trip() {
        let s = damek_ricci(2, 1, 0).unwrap();
        let back = MetricLieAlgebra::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }
}
