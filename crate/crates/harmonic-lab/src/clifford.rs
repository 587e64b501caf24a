//! Clifford-module generators and the J-maps of Heisenberg-type groups.
//!
//! Irreducible X-block dimensions used here: `n_l = 2` for `l = 1` and
//! `n_l = 4` for `l = 2, 3`. The `l = 3` generators are left multiplication
//! by the quaternion units on `R^4 = span(1, i, j, k)`; `l = 2` keeps the
//! first two of them.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Anticommuting skew generators `j_1 .. j_l` acting on one irreducible block.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordModule {
    l: usize,
    n_l: usize,
    generators: Vec<DMatrix<f64>>,
}

impl CliffordModule {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn block_dim(&self) -> usize {
        self.n_l
    }

    pub fn generators(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    /// `j_Z = sum_a z_a j_a` on one block.
    pub fn j_z(&self, z: &[f64]) -> DMatrix<f64> {
        assert_eq!(z.len(), self.l, "Z has wrong dimension");
        let mut out = DMatrix::zeros(self.n_l, self.n_l);
        for (za, ja) in z.iter().zip(&self.generators) {
            out += ja * *za;
        }
        out
    }
}

fn from_columns(n: usize, images: &[(usize, usize, f64)]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for &(col, row, v) in images {
        m[(row, col)] = v;
    }
    m
}

fn quaternion_units() -> [DMatrix<f64>; 3] {
    // Columns are the images of the basis 1, i, j, k.
    let li = from_columns(4, &[(0, 1, 1.0), (1, 0, -1.0), (2, 3, 1.0), (3, 2, -1.0)]);
    let lj = from_columns(4, &[(0, 2, 1.0), (1, 3, -1.0), (2, 0, -1.0), (3, 1, 1.0)]);
    let lk = from_columns(4, &[(0, 3, 1.0), (1, 2, 1.0), (2, 1, -1.0), (3, 0, -1.0)]);
    [li, lj, lk]
}

pub fn build_clifford_module(l: usize) -> Result<CliffordModule> {
    let generators = match l {
        1 => vec![from_columns(2, &[(0, 1, 1.0), (1, 0, -1.0)])],
        2 | 3 => quaternion_units().into_iter().take(l).collect(),
        _ => return Err(Error::UnsupportedCenterDimension(l)),
    };
    let n_l = generators[0].nrows();
    Ok(CliffordModule { l, n_l, generators })
}

/// `Z -> J_Z = diag(j_Z x a, -j_Z x b)` on `X = Y^a + Y^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct JMap {
    module: CliffordModule,
    a: usize,
    b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub l: usize,
    pub a: usize,
    pub b: usize,
}

impl std::fmt::Display for FamilyMember {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SH^({},{})_{}", self.a, self.b, self.l)
    }
}

impl JMap {
    pub fn module(&self) -> &CliffordModule {
        &self.module
    }

    pub fn l(&self) -> usize {
        self.module.l
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn member(&self) -> FamilyMember {
        FamilyMember { l: self.l(), a: self.a, b: self.b }
    }

    /// X-space dimension `k = (a + b) n_l`.
    pub fn k(&self) -> usize {
        (self.a + self.b) * self.module.n_l
    }

    pub fn j_z(&self, z: &[f64]) -> DMatrix<f64> {
        let block = self.module.j_z(z);
        let nl = self.module.n_l;
        let mut out = DMatrix::zeros(self.k(), self.k());
        for blk in 0..self.a + self.b {
            let sign = if blk < self.a { 1.0 } else { -1.0 };
            out.view_mut((blk * nl, blk * nl), (nl, nl)).copy_from(&(&block * sign));
        }
        out
    }

    /// `J_{e_i}` for the i-th center basis vector.
    pub fn j_basis(&self, i: usize) -> DMatrix<f64> {
        let mut z = vec![0.0; self.l()];
        z[i] = 1.0;
        self.j_z(&z)
    }

    /// The same module with all blocks carrying `+j_Z`.
    pub fn unsplit(&self) -> JMap {
        JMap { module: self.module.clone(), a: self.a + self.b, b: 0 }
    }
}

pub fn build_j_map(module: &CliffordModule, a: usize, b: usize) -> Result<JMap> {
    if a + b == 0 {
        return Err(Error::InvalidMultiplicity);
    }
    Ok(JMap { module: module.clone(), a, b })
}

/// Shortcut for `build_j_map(build_clifford_module(l)?, a, b)`.
pub fn j_map(l: usize, a: usize, b: usize) -> Result<JMap> {
    build_j_map(&build_clifford_module(l)?, a, b)
}

/// The block involution `diag(I_a, -I_b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeEndomorphism {
    pub sigma: DMatrix<f64>,
}

pub fn exchange_endomorphism(jmap: &JMap) -> ExchangeEndomorphism {
    let k = jmap.k();
    let split = jmap.a * jmap.module.n_l;
    let sigma = DMatrix::from_fn(k, k, |i, j| match (i == j, i < split) {
        (true, true) => 1.0,
        (true, false) => -1.0,
        _ => 0.0,
    });
    ExchangeEndomorphism { sigma }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(m: &DMatrix<f64>) -> f64 {
        m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    #[test]
    fn l1_is_the_complex_structure() {
        let m = build_clifford_module(1).unwrap();
        assert_eq!(m.block_dim(), 2);
        let j = &m.generators()[0];
        assert_eq!(j.as_slice(), &[0.0, 1.0, -1.0, 0.0]); // column-major [[0,-1],[1,0]]
    }

    #[test]
    fn clifford_relation_holds_for_every_supported_l() {
        for l in 1..=3 {
            let m = build_clifford_module(l).unwrap();
            let id = DMatrix::<f64>::identity(m.block_dim(), m.block_dim());
            for (a, ja) in m.generators().iter().enumerate() {
                assert!(max_abs(&(ja + ja.transpose())) == 0.0);
                assert!(max_abs(&(ja.transpose() * ja - &id)) == 0.0);
                for (b, jb) in m.generators().iter().enumerate() {
                    let delta = if a == b { 2.0 } else { 0.0 };
                    assert!(max_abs(&(ja * jb + jb * ja + &id * delta)) == 0.0);
                }
            }
        }
    }

    #[test]
    fn quaternion_units_multiply_like_quaternions() {
        let m = build_clifford_module(3).unwrap();
        let g = m.generators();
        assert_eq!(&g[0] * &g[1], g[2]);
    }

    #[test]
    fn unsupported_l_is_rejected() {
        assert_eq!(build_clifford_module(4), Err(Error::UnsupportedCenterDimension(4)));
        assert_eq!(build_clifford_module(0), Err(Error::UnsupportedCenterDimension(0)));
    }

    #[test]
    fn j_map_blocks_follow_the_split() {
        let j = j_map(3, 1, 1).unwrap();
        assert_eq!(j.k(), 8);
        let jz = j.j_basis(0);
        let j1 = &build_clifford_module(3).unwrap().generators()[0].clone();
        assert_eq!(jz.view((0, 0), (4, 4)), j1.view((0, 0), (4, 4)));
        assert_eq!(jz.view((4, 4), (4, 4)).clone_owned(), -j1);
        assert!(max_abs(&jz.view((0, 4), (4, 4)).clone_owned()) == 0.0);
    }

    #[test]
    fn j_map_squares_to_minus_norm() {
        let j = j_map(1, 2, 0).unwrap();
        let jz = j.j_z(&[2.0]);
        let id = DMatrix::<f64>::identity(4, 4);
        assert!(max_abs(&(&jz * &jz + id * 4.0)) == 0.0);
    }

    #[test]
    fn zero_multiplicity_is_rejected() {
        let m = build_clifford_module(2).unwrap();
        assert_eq!(build_j_map(&m, 0, 0), Err(Error::InvalidMultiplicity));
    }

    #[test]
    fn polarized_clifford_relation_on_basis_pairs() {
        let j = j_map(3, 2, 1).unwrap();
        let id = DMatrix::<f64>::identity(j.k(), j.k());
        for a in 0..3 {
            for b in 0..3 {
                let delta = if a == b { 2.0 } else { 0.0 };
                let (ja, jb) = (j.j_basis(a), j.j_basis(b));
                assert!(max_abs(&(&ja * &jb + &jb * &ja + &id * delta)) == 0.0);
            }
        }
    }

    #[test]
    fn exchange_endomorphism_maps_unsplit_to_split() {
        let j = j_map(3, 1, 1).unwrap();
        let s = exchange_endomorphism(&j).sigma;
        let id = DMatrix::<f64>::identity(8, 8);
        assert!(max_abs(&(&s * &s - &id)) == 0.0);
        let unsplit = j.unsplit();
        for z in 0..3 {
            let ju = unsplit.j_basis(z);
            assert!(max_abs(&(&s * &ju - &ju * &s)) == 0.0);
            assert!(max_abs(&(&s * &ju - j.j_basis(z))) == 0.0);
        }
        let trivial = exchange_endomorphism(&j_map(3, 2, 0).unwrap()).sigma;
        assert_eq!(trivial, id);
    }
}
