//! Spherical harmonics on `X` sorted by the eigenvalue `m` of `i D_{Z_u}`.
//!
//! Polynomials are kept exactly in the complex coordinates `z_i = <Q_i + i J Q_i, X>` of a
//! `J`-adapted orthogonal basis. There `Delta_X = sum_i 4 c_i d_{z_i} d_{zbar_i}` and
//! `|X|^2 = sum_i z_i zbar_i / c_i` with `c_i = |Q_i|^2`, and `z^p zbar^q` has
//! `m = sum_i (q_i - p_i)`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num::{BigInt, Complex, One, Zero};

use crate::clifford::JMap;
use crate::error::{Error, Result};
use crate::heatinv::rationalize;
use crate::sis::{row_reduce, Q};

pub const MAX_DEGREE: usize = 6;

/// Exponents `(p_1..p_d, q_1..q_d)` mapped to exact coefficients.
pub type ZPoly = BTreeMap<Vec<u8>, Q>;
/// Exponents of the real coordinates `X_1..X_k` mapped to exact complex coefficients.
pub type XPoly = BTreeMap<Vec<u8>, Complex<Q>>;

fn to_q(x: f64) -> Result<Q> {
    let r = rationalize(x, 1_000_000, 1e-12)
        .ok_or_else(|| Error::InvalidArgument(format!("J_Z entry {x} is not a small-denominator rational")))?;
    Ok(Q::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn apply(j: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    j.iter().map(|row| dot(row, v)).collect()
}

/// Exact `J` with an orthogonal basis `Q_1, J Q_1, .., Q_d, J Q_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedBasis {
    pub j: Vec<Vec<Q>>,
    pub q: Vec<Vec<Q>>,
    pub jq: Vec<Vec<Q>>,
    pub norms2: Vec<Q>,
}

impl AdaptedBasis {
    pub fn new(j: &DMatrix<f64>) -> Result<Self> {
        let k = j.nrows();
        let id = DMatrix::<f64>::identity(k, k);
        if k % 2 != 0 || (j * j + &id).amax() > 1e-9 {
            return Err(Error::NotComplexStructure);
        }
        let jq: Vec<Vec<Q>> = (0..k).map(|r| (0..k).map(|c| to_q(j[(r, c)])).collect::<Result<_>>()).collect::<Result<_>>()?;
        for r in 0..k {
            for c in 0..k {
                let col: Vec<Q> = (0..k).map(|i| jq[i][c].clone()).collect();
                let want = if r == c { -Q::one() } else { Q::zero() };
                if dot(&jq[r], &col) != want {
                    return Err(Error::NotComplexStructure);
                }
            }
        }
        let mut chosen: Vec<Vec<Q>> = Vec::new();
        let (mut qs, mut jqs, mut norms2) = (Vec::new(), Vec::new(), Vec::new());
        for e in 0..k {
            if qs.len() == k / 2 {
                break;
            }
            let mut v: Vec<Q> = (0..k).map(|i| if i == e { Q::one() } else { Q::zero() }).collect();
            for c in &chosen {
                let f = dot(&v, c) / dot(c, c);
                v = v.iter().zip(c).map(|(a, b)| a - &f * b).collect();
            }
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            let w = apply(&jq, &v);
            norms2.push(dot(&v, &v));
            chosen.push(v.clone());
            chosen.push(w.clone());
            qs.push(v);
            jqs.push(w);
        }
        Ok(AdaptedBasis { j: jq, q: qs, jq: jqs, norms2 })
    }

    pub fn d(&self) -> usize {
        self.q.len()
    }
}

fn laplacian_z(p: &ZPoly, basis: &AdaptedBasis) -> ZPoly {
    let d = basis.d();
    let mut out = ZPoly::new();
    for (e, c) in p {
        for i in 0..d {
            let (pi, qi) = (e[i], e[d + i]);
            if pi > 0 && qi > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                f[d + i] -= 1;
                let v = c * Q::from_integer(BigInt::from(4 * pi as i64 * qi as i64)) * &basis.norms2[i];
                *out.entry(f).or_insert_with(Q::zero) += v;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn times_x2(p: &ZPoly, basis: &AdaptedBasis) -> ZPoly {
    let d = basis.d();
    let mut out = ZPoly::new();
    for (e, c) in p {
        for i in 0..d {
            let mut f = e.clone();
            f[i] += 1;
            f[d + i] += 1;
            *out.entry(f).or_insert_with(Q::zero) += c / &basis.norms2[i];
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn add_scaled(acc: &mut ZPoly, p: &ZPoly, s: &Q) {
    for (e, c) in p {
        *acc.entry(e.clone()).or_insert_with(Q::zero) += c * s;
    }
    acc.retain(|_, c| !c.is_zero());
}

/// Harmonic part `h_n` of a homogeneous degree-`n` polynomial in `P = sum_j |X|^{2j} h_{n-2j}`,
/// as `sum_j a_j |X|^{2j} Delta^j P` with `a_{j+1} = -a_j / (2 (j+1) (2n + k - 2j - 4))`.
pub fn harmonic_projection(p: &ZPoly, n: usize, basis: &AdaptedBasis) -> ZPoly {
    let k = 2 * basis.d() as i64;
    let mut out = p.clone();
    let mut a = Q::one();
    let mut lap = p.clone();
    for j in 0..n / 2 {
        lap = laplacian_z(&lap, basis);
        if lap.is_empty() {
            break;
        }
        let jj = j as i64;
        a = -a / Q::from_integer(BigInt::from(2 * (jj + 1) * (2 * n as i64 + k - 2 * jj - 4)));
        let mut lifted = lap.clone();
        for _ in 0..=j {
            lifted = times_x2(&lifted, basis);
        }
        add_scaled(&mut out, &lifted, &a);
    }
    out
}

/// Exponent vectors of total degree `n` in `vars` variables, in lexicographic order.
pub fn exponents(vars: usize, n: usize) -> Vec<Vec<u8>> {
    fn rec(vars: usize, n: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() + 1 == vars {
            prefix.push(n as u8);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=n).rev() {
            prefix.push(e as u8);
            rec(vars, n - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        rec(vars, n, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicElement {
    pub m: i64,
    /// Monomial `z^p zbar^q` this element projects from.
    pub source: Vec<u8>,
    pub poly: ZPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPolynomialSpace {
    pub degree: usize,
    pub z_u: Vec<f64>,
    pub basis: AdaptedBasis,
    pub elements: Vec<HarmonicElement>,
}

impl HarmonicPolynomialSpace {
    pub fn k(&self) -> usize {
        2 * self.basis.d()
    }

    /// `dim H^(n,m)` for every `m` that occurs.
    pub fn multiplicities(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for e in &self.elements {
            *out.entry(e.m).or_insert(0) += 1;
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    /// Element `index` in the real coordinates `X`.
    pub fn to_x(&self, index: usize) -> XPoly {
        let (k, d) = (self.k(), self.basis.d());
        let z: Vec<Vec<Complex<Q>>> = (0..d)
            .map(|i| (0..k).map(|j| Complex::new(self.basis.q[i][j].clone(), self.basis.jq[i][j].clone())).collect())
            .collect();
        let zbar: Vec<Vec<Complex<Q>>> = z.iter().map(|v| v.iter().map(Complex::conj).collect()).collect();
        let mut out = XPoly::new();
        for (e, c) in &self.elements[index].poly {
            let mut term: XPoly = XPoly::from([(vec![0u8; k], Complex::new(c.clone(), Q::zero()))]);
            for i in 0..d {
                for _ in 0..e[i] {
                    term = mul_linear(&term, &z[i]);
                }
                for _ in 0..e[d + i] {
                    term = mul_linear(&term, &zbar[i]);
                }
            }
            for (f, v) in term {
                *out.entry(f).or_insert_with(Complex::zero) += v;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Exact checks in `X`: `Delta_X h = 0` and `i D h = m h` with `D h = grad h . (J X)`.
    pub fn verify_element(&self, index: usize) -> (bool, bool) {
        let p = self.to_x(index);
        let harmonic = laplacian_x(&p).is_empty();
        let mut diff = derivative_x(&p, &self.basis.j);
        let i = Complex::new(Q::zero(), Q::one());
        let m = Q::from_integer(BigInt::from(self.elements[index].m));
        for v in diff.values_mut() {
            *v = &i * &*v;
        }
        for (e, c) in &p {
            *diff.entry(e.clone()).or_insert_with(Complex::zero) -= c * &m;
        }
        diff.retain(|_, c| !c.is_zero());
        (harmonic, diff.is_empty())
    }
}

fn mul_linear(p: &XPoly, lin: &[Complex<Q>]) -> XPoly {
    let mut out = XPoly::new();
    for (e, c) in p {
        for (j, a) in lin.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut f = e.clone();
            f[j] += 1;
            *out.entry(f).or_insert_with(Complex::zero) += c * a;
        }
    }
    out
}

pub fn laplacian_x(p: &XPoly) -> XPoly {
    let mut out = XPoly::new();
    for (e, c) in p {
        for j in 0..e.len() {
            if e[j] >= 2 {
                let mut f = e.clone();
                f[j] -= 2;
                let s = Q::from_integer(BigInt::from(e[j] as i64 * (e[j] as i64 - 1)));
                *out.entry(f).or_insert_with(Complex::zero) += c * s;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `sum_j (J X)_j d_j p`.
pub fn derivative_x(p: &XPoly, j: &[Vec<Q>]) -> XPoly {
    let mut out = XPoly::new();
    for (e, c) in p {
        for r in 0..e.len() {
            if e[r] == 0 {
                continue;
            }
            for (l, jrl) in j[r].iter().enumerate() {
                if jrl.is_zero() {
                    continue;
                }
                let mut f = e.clone();
                f[r] -= 1;
                f[l] += 1;
                let s = jrl * Q::from_integer(BigInt::from(e[r] as i64));
                *out.entry(f).or_insert_with(Complex::zero) += c * s;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn unit(z_u: &[f64]) -> Result<()> {
    let norm = z_u.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("Z_u must be a unit vector, |Z_u| = {norm}")));
    }
    Ok(())
}

/// Projects every monomial of degree `n`, then keeps an exactly independent subset per `m`.
pub fn build_hnm_basis(jmap: &JMap, z_u: &[f64], n: usize) -> Result<HarmonicPolynomialSpace> {
    unit(z_u)?;
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooHigh(n));
    }
    let basis = AdaptedBasis::new(&jmap.j_z(z_u))?;
    let d = basis.d();
    let mut by_m: BTreeMap<i64, Vec<(Vec<u8>, ZPoly)>> = BTreeMap::new();
    for e in exponents(2 * d, n) {
        let m: i64 = (0..d).map(|i| e[d + i] as i64 - e[i] as i64).sum();
        let proj = harmonic_projection(&ZPoly::from([(e.clone(), Q::one())]), n, &basis);
        if !proj.is_empty() {
            by_m.entry(m).or_default().push((e, proj));
        }
    }
    let mut elements = Vec::new();
    for (m, polys) in by_m {
        let keys: Vec<&Vec<u8>> = {
            let mut ks: Vec<&Vec<u8>> = polys.iter().flat_map(|(_, p)| p.keys()).collect();
            ks.sort();
            ks.dedup();
            ks
        };
        let rows: Vec<Vec<Q>> =
            polys.iter().map(|(_, p)| keys.iter().map(|k| p.get(*k).cloned().unwrap_or_else(Q::zero)).collect()).collect();
        let mut picked: Vec<usize> = row_reduce(&rows).pivots.iter().map(|&(r, _)| r).collect();
        picked.sort_unstable();
        for r in picked {
            let (source, poly) = polys[r].clone();
            elements.push(HarmonicElement { m, source, poly });
        }
    }
    Ok(HarmonicPolynomialSpace { degree: n, z_u: z_u.to_vec(), basis, elements })
}

/// `dim` of degree-`n` spherical harmonics on `R^k`.
pub fn harmonic_dimension(k: usize, n: usize) -> usize {
    fn binom(a: usize, b: usize) -> usize {
        (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1))
    }
    let total = binom(n + k - 1, n);
    if n < 2 {
        total
    } else {
        total - binom(n + k - 3, n - 2)
    }
}

/// Multiplicities of `i D_{Z_u}` on the kernel of `Delta_X` in degree `n`, from a floating-point
/// eigen-decomposition in the real coordinates.
pub fn eigen_multiplicities(jmap: &JMap, z_u: &[f64], n: usize) -> Result<BTreeMap<i64, usize>> {
    unit(z_u)?;
    let j = jmap.j_z(z_u);
    let k = j.nrows();
    let top = exponents(k, n);
    let index: BTreeMap<&Vec<u8>, usize> = top.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let kernel = if n < 2 {
        DMatrix::<f64>::identity(top.len(), top.len())
    } else {
        let low = exponents(k, n - 2);
        let low_index: BTreeMap<&Vec<u8>, usize> = low.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut lap = DMatrix::<f64>::zeros(low.len(), top.len());
        for (c, e) in top.iter().enumerate() {
            for v in 0..k {
                if e[v] >= 2 {
                    let mut f = e.clone();
                    f[v] -= 2;
                    lap[(low_index[&f], c)] += (e[v] as f64) * (e[v] as f64 - 1.0);
                }
            }
        }
        let eig = SymmetricEigen::new(lap.transpose() * &lap);
        let scale = eig.eigenvalues.amax().max(1.0);
        let cols: Vec<_> =
            (0..top.len()).filter(|&i| eig.eigenvalues[i].abs() < 1e-9 * scale).map(|i| eig.eigenvectors.column(i).into_owned()).collect();
        DMatrix::from_columns(&cols)
    };
    let mut dmat = DMatrix::<f64>::zeros(top.len(), top.len());
    for (c, e) in top.iter().enumerate() {
        for r in 0..k {
            if e[r] == 0 {
                continue;
            }
            for l in 0..k {
                if j[(r, l)] != 0.0 {
                    let mut f = e.clone();
                    f[r] -= 1;
                    f[l] += 1;
                    dmat[(index[&f], c)] += j[(r, l)] * e[r] as f64;
                }
            }
        }
    }
    let restricted = kernel.transpose() * dmat * &kernel;
    let mut out = BTreeMap::new();
    for ev in restricted.complex_eigenvalues().iter() {
        let m = -ev.im;
        let rounded = m.round();
        if (m - rounded).abs() > 1e-6 || ev.re.abs() > 1e-6 {
            return Err(Error::ConvergenceFailure(format!("non-integral i D eigenvalue {ev}")));
        }
        *out.entry(rounded as i64).or_insert(0) += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::j_map;

    #[test]
    fn plane_degree_one_and_two() {
        let j = j_map(1, 1, 0).unwrap();
        let h1 = build_hnm_basis(&j, &[1.0], 1).unwrap();
        assert_eq!(h1.multiplicities(), BTreeMap::from([(-1, 1), (1, 1)]));
        let h2 = build_hnm_basis(&j, &[1.0], 2).unwrap();
        assert_eq!(h2.multiplicities(), BTreeMap::from([(-2, 1), (2, 1)]));
        let zzbar = ZPoly::from([(vec![1, 1], Q::one())]);
        assert!(harmonic_projection(&zzbar, 2, &h2.basis).is_empty());
    }

    #[test]
    fn z_has_eigenvalue_minus_one() {
        let h = build_hnm_basis(&j_map(1, 1, 0).unwrap(), &[1.0], 1).unwrap();
        let z = h.elements.iter().position(|e| e.source == vec![1, 0]).unwrap();
        assert_eq!(h.elements[z].m, -1);
        let x = h.to_x(z);
        let i = Complex::new(Q::zero(), Q::one());
        assert_eq!(x.get(&vec![1, 0]), Some(&Complex::new(Q::one(), Q::zero())));
        assert_eq!(x.get(&vec![0, 1]), Some(&i));
        assert_eq!(h.verify_element(z), (true, true));
    }

    #[test]
    fn every_element_is_exactly_harmonic_and_an_eigenvector() {
        for (l, a, b, z) in [(2, 1, 0, vec![0.0, 1.0]), (3, 1, 1, vec![0.6, 0.0, 0.8])] {
            let jm = j_map(l, a, b).unwrap();
            for n in 0..=3 {
                let h = build_hnm_basis(&jm, &z, n).unwrap();
                assert_eq!(h.dimension(), harmonic_dimension(jm.k(), n), "l={l} n={n}");
                for i in 0..h.dimension() {
                    assert_eq!(h.verify_element(i), (true, true));
                }
            }
        }
    }

    #[test]
    fn constructive_matches_eigen_oracle() {
        let jm = j_map(2, 1, 0).unwrap();
        for n in 0..=3 {
            let h = build_hnm_basis(&jm, &[1.0, 0.0], n).unwrap();
            assert_eq!(h.multiplicities(), eigen_multiplicities(&jm, &[1.0, 0.0], n).unwrap());
        }
    }

    #[test]
    fn dimension_formula() {
        assert_eq!(harmonic_dimension(2, 5), 2);
        assert_eq!(harmonic_dimension(3, 2), 5);
        assert_eq!(harmonic_dimension(4, 2), 9);
        assert_eq!(harmonic_dimension(8, 3), 112);
    }

    #[test]
    fn rejects_non_complex_structures() {
        let jm = j_map(3, 1, 1).unwrap();
        assert_eq!(AdaptedBasis::new(&(jm.j_z(&[1.0, 0.0, 0.0]) * 2.0)).unwrap_err(), Error::NotComplexStructure);
        assert!(matches!(build_hnm_basis(&jm, &[1.0, 1.0, 0.0], 1), Err(Error::InvalidArgument(_))));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(12))]
        #[test]
        fn split_members_share_multiplicities(l in 1usize..=3, total in 1usize..=2, b_frac in 0usize..=2, n in 0usize..=2, axis in 0usize..3) {
            let b = b_frac.min(total);
            let mut z = vec![0.0; l];
            z[axis % l] = 1.0;
            let split = build_hnm_basis(&j_map(l, total - b, b).unwrap(), &z, n).unwrap();
            let unsplit = build_hnm_basis(&j_map(l, total, 0).unwrap(), &z, n).unwrap();
            proptest::prop_assert_eq!(split.multiplicities(), unsplit.multiplicities());
            let sum: usize = split.multiplicities().values().sum();
            proptest::prop_assert_eq!(sum, harmonic_dimension(split.k(), n));
        }
    }
}
