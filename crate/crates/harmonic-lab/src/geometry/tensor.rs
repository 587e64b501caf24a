use serde::Serialize;

/// Dense rank-4 component array in an orthonormal frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tensor4 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(n: usize) -> Self {
        Tensor4 { n, data: vec![0.0; n * n * n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        t.data[((a * n + b) * n + c) * n + d] = f(a, b, c, d);
                    }
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.n;
        self.data[((a * n + b) * n + c) * n + d]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        let n = self.n;
        self.data[((a * n + b) * n + c) * n + d] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn scaled(&self, s: f64) -> Self {
        Tensor4 { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `T(x, v, w, y)` as an `n x n` matrix in `(x, y)`.
    pub fn middle_contraction(&self, v: &[f64], w: &[f64]) -> nalgebra::DMatrix<f64> {
        let n = self.n;
        let mut out = nalgebra::DMatrix::zeros(n, n);
        for x in 0..n {
            for b in 0..n {
                if v[b] == 0.0 {
                    continue;
                }
                for c in 0..n {
                    let vw = v[b] * w[c];
                    if vw == 0.0 {
                        continue;
                    }
                    let base = ((x * n + b) * n + c) * n;
                    for y in 0..n {
                        out[(x, y)] += vw * self.data[base + y];
                    }
                }
            }
        }
        out
    }
}
