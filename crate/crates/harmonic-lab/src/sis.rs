//! Curvature identities as exact rational vectors over
//! `B = (C^3, CH, L, R^, R°, |nabla R|^2)`, graded by radial degree.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub const BASIS: [&str; 6] = ["C3", "CH", "L", "Rhat", "Rring", "normDelR2"];
/// Indices of `(R^, R°, |nabla R|^2)` in `B`.
pub const MAIN_TERMS: [usize; 3] = [3, 4, 5];

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn q_str(x: &Q) -> String {
    x.to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EliminationMode {
    Proper,
    Rudimentary,
}

/// Where an identity came from and whether a rudimentary step produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub source: String,
    pub rudimentary: bool,
}

/// `sum_i coeffs[i] * B_i = 0`, optionally tagged with the radial degree it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityVector {
    pub name: String,
    pub degree: Option<i32>,
    pub provenance: Provenance,
    pub coeffs: [Q; 6],
}

impl IdentityVector {
    pub fn new(name: impl Into<String>, degree: Option<i32>, source: impl Into<String>, coeffs: [Q; 6]) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::ZeroIdentity);
        }
        Ok(IdentityVector {
            name: name.into(),
            degree,
            provenance: Provenance { source: source.into(), rudimentary: false },
            coeffs,
        })
    }

    /// Coefficients on the constant monomials `(C^3, CH, L)`.
    pub fn const_terms(&self) -> &[Q] {
        &self.coeffs[..3]
    }

    pub fn main_terms(&self) -> [Q; 3] {
        MAIN_TERMS.map(|i| self.coeffs[i].clone())
    }

    pub fn to_json(&self) -> IdentityJson {
        IdentityJson {
            name: self.name.clone(),
            degree: self.degree,
            provenance: self.provenance.clone(),
            coeffs: self.coeffs.iter().map(q_str).collect(),
            const_terms: self.const_terms().iter().map(q_str).collect(),
        }
    }
}

impl fmt::Display for IdentityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .zip(BASIS)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, b)| format!("({c}) {b}"))
            .collect();
        write!(f, "{}: {} = 0", self.name, terms.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityJson {
    pub name: String,
    pub degree: Option<i32>,
    pub provenance: Provenance,
    pub coeffs: Vec<String>,
    pub const_terms: Vec<String>,
}

/// Inner product on coefficient vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum Gram {
    Euclidean,
    /// `<x, y> = sum w_i x_i y_i`.
    WeightedDiagonal([Q; 6]),
}

impl Gram {
    pub fn name(&self) -> String {
        match self {
            Gram::Euclidean => "euclidean".into(),
            Gram::WeightedDiagonal(w) => format!("diagonal[{}]", w.iter().map(q_str).collect::<Vec<_>>().join(",")),
        }
    }

    pub fn inner(&self, x: &[Q; 6], y: &[Q; 6]) -> Q {
        (0..6)
            .map(|i| {
                let p = &x[i] * &y[i];
                match self {
                    Gram::Euclidean => p,
                    Gram::WeightedDiagonal(w) => p * &w[i],
                }
            })
            .fold(Q::zero(), |a, b| a + b)
    }

    fn check(&self) -> Result<()> {
        match self {
            Gram::WeightedDiagonal(w) if w.iter().any(|x| !x.is_positive()) => Err(Error::DegenerateGram),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySpace {
    pub generators: Vec<IdentityVector>,
    pub gram: Gram,
}

impl IdentitySpace {
    pub fn new(generators: Vec<IdentityVector>) -> Self {
        IdentitySpace { generators, gram: Gram::Euclidean }
    }

    pub fn with_gram(mut self, gram: Gram) -> Self {
        self.gram = gram;
        self
    }

    /// Generators keyed by radial degree; degree-less generators sit under `None`.
    pub fn grading(&self) -> BTreeMap<Option<i32>, Vec<&IdentityVector>> {
        let mut out: BTreeMap<Option<i32>, Vec<&IdentityVector>> = BTreeMap::new();
        for g in &self.generators {
            out.entry(g.degree).or_default().push(g);
        }
        out
    }

    /// Keeps generators whose source passes `keep`.
    pub fn filtered(&self, keep: impl Fn(&Provenance) -> bool) -> IdentitySpace {
        IdentitySpace {
            generators: self.generators.iter().filter(|g| keep(&g.provenance)).cloned().collect(),
            gram: self.gram.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        row_reduce(&rows(&self.generators)).rank
    }

    pub fn to_json(&self) -> SpaceJson {
        SpaceJson { gram: self.gram.name(), generators: self.generators.iter().map(IdentityVector::to_json).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceJson {
    pub gram: String,
    pub generators: Vec<IdentityJson>,
}

fn rows(gens: &[IdentityVector]) -> Vec<Vec<Q>> {
    gens.iter().map(|g| g.coeffs.to_vec()).collect()
}

/// Result of exact Gaussian elimination: rank and the `(row, column)` of each pivot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowReduction {
    pub rank: usize,
    pub pivots: Vec<(usize, usize)>,
}

pub fn row_reduce(m: &[Vec<Q>]) -> RowReduction {
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let (nr, nc) = (a.len(), a.first().map_or(0, Vec::len));
    let mut order: Vec<usize> = (0..nr).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..nc {
        let Some(p) = (row..nr).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        order.swap(row, p);
        let inv = Q::one() / &a[row][col];
        for r in 0..nr {
            if r != row && !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                for c in col..nc {
                    let v = &a[row][c] * &f;
                    a[r][c] -= v;
                }
            }
        }
        pivots.push((order[row], col));
        row += 1;
        if row == nr {
            break;
        }
    }
    RowReduction { rank: row, pivots }
}

/// The identities read off the density, sphere-average and curvature expansions in dimension `n`.
pub fn canonical_generators(n: usize) -> Result<IdentitySpace> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension n = {n} must be at least 2")));
    }
    let ni = n as i64;
    Ok(IdentitySpace::new(vec![
        density_equation(n)?,
        IdentityVector::new(
            "beta sphere average",
            Some(2),
            "sphere-average",
            [qi(ni), Q::zero(), Q::zero(), q(-1, 4), qi(2), Q::zero()],
        )?,
        IdentityVector::new(
            "alpha sphere average",
            Some(2),
            "sphere-average",
            [Q::zero(), Q::zero(), Q::zero(), Q::zero(), Q::zero(), Q::one()],
        )?,
    ]))
}

/// `32nC^3 + 144C|R|^2 + 112R^ - 32R° - 27|nabla R|^2 = n(n+2)(n+4) L`, `|R|^2` folded.
pub fn density_equation(n: usize) -> Result<IdentityVector> {
    let ni = n as i64;
    IdentityVector::new(
        "density equation",
        Some(6),
        "density",
        [qi(-64 * ni), qi(96 * ni * (ni + 2)), qi(-ni * (ni + 2) * (ni + 4)), qi(112), qi(-32), qi(-27)],
    )
}

/// `2C|R|^2 - R^ - 4R° + |nabla R|^2 = 0` with `|R|^2 = (2n/3)((n+2)H - C^2)`; no degree.
pub fn lichnerowicz_vector(n: usize) -> IdentityVector {
    let ni = n as i64;
    IdentityVector::new(
        "lichnerowicz",
        None,
        "curvature",
        [q(-4 * ni, 3), q(4 * ni * (ni + 2), 3), Q::zero(), qi(-1), qi(-4), Q::one()],
    )
    .expect("nonzero by construction")
}

/// `[P2]_3` averaged over the sphere: `-(20n-8)/45 CH - L/90 + |nabla R|^2 / (2n(n+2)(n+4))`.
pub fn ball_boundary_vector(n: usize) -> IdentityVector {
    let ni = n as i64;
    IdentityVector::new(
        "ball boundary [P2]_3",
        Some(ni as i32 + 1),
        "ball",
        [Q::zero(), q(-(20 * ni - 8), 45), q(-1, 90), Q::zero(), Q::zero(), q(1, 2 * ni * (ni + 2) * (ni + 4))],
    )
    .expect("nonzero by construction")
}

/// Volume coefficient `A_6/(n+6)` with `A_6 = -L/90720 + CH/1080 - C^3/1296`.
pub fn volume_vector(n: usize) -> IdentityVector {
    let ni = n as i64;
    let d = ni + 6;
    IdentityVector::new("ball volume A6", Some(ni as i32 + 5), "volume", [q(-1, 1296 * d), q(1, 1080 * d), q(-1, 90720 * d), Q::zero(), Q::zero(), Q::zero()])
        .expect("nonzero by construction")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub candidate: String,
    pub graded: bool,
    /// Degree slice the candidate was tested against (graded mode).
    pub slice: Option<i32>,
    pub generator_rank: usize,
    pub augmented_rank: usize,
    pub member: bool,
    pub reason: String,
    /// Rows: slice generators then the candidate, over `(R^, R°, |nabla R|^2)`.
    pub main_term_matrix: Vec<Vec<String>>,
    pub main_term_rank: usize,
    pub pivot_trail: Vec<(usize, usize)>,
}

pub fn rank_and_membership(space: &IdentitySpace, candidate: &IdentityVector, graded: bool) -> MembershipReport {
    let slice: Vec<IdentityVector> = if graded {
        space.generators.iter().filter(|g| g.degree.is_some() && g.degree == candidate.degree).cloned().collect()
    } else {
        space.generators.clone()
    };
    let gen_rows = rows(&slice);
    let mut aug = gen_rows.clone();
    aug.push(candidate.coeffs.to_vec());
    let base = row_reduce(&gen_rows);
    let full = row_reduce(&aug);
    let main: Vec<Vec<Q>> = aug.iter().map(|r| MAIN_TERMS.iter().map(|&i| r[i].clone()).collect()).collect();
    let main_rank = row_reduce(&main).rank;
    let (member, reason) = if graded && candidate.degree.is_none() {
        (false, "candidate has no radial degree and cannot enter any graded slice".to_string())
    } else if full.rank == base.rank {
        (true, "candidate lies in the span".to_string())
    } else {
        (false, "candidate raises the rank".to_string())
    };
    MembershipReport {
        candidate: candidate.name.clone(),
        graded,
        slice: if graded { candidate.degree } else { None },
        generator_rank: base.rank,
        augmented_rank: full.rank,
        member,
        reason,
        main_term_matrix: main.iter().map(|r| r.iter().map(q_str).collect()).collect(),
        main_term_rank: main_rank,
        pivot_trail: full.pivots,
    }
}

/// `target - lambda * tool` with the `symbol` coefficient (index into `B`) cancelled.
pub fn eliminate(target: &IdentityVector, tool: &IdentityVector, symbol: usize, mode: EliminationMode) -> Result<IdentityVector> {
    if symbol >= 6 {
        return Err(Error::InvalidArgument(format!("basis index {symbol} out of range")));
    }
    if mode == EliminationMode::Proper && (target.degree.is_none() || target.degree != tool.degree) {
        return Err(Error::DegreeMismatch { target: target.degree, tool: tool.degree });
    }
    if tool.coeffs[symbol].is_zero() {
        return Err(Error::SymbolAbsent(BASIS[symbol].into()));
    }
    let lambda = &target.coeffs[symbol] / &tool.coeffs[symbol];
    let coeffs: [Q; 6] = std::array::from_fn(|i| &target.coeffs[i] - &lambda * &tool.coeffs[i]);
    let rudimentary = mode == EliminationMode::Rudimentary || target.provenance.rudimentary || tool.provenance.rudimentary;
    let mut out = IdentityVector::new(
        format!("{} - ({lambda}) {}", target.name, tool.name),
        if rudimentary { None } else { target.degree },
        format!("eliminate {} from {} using {}", BASIS[symbol], target.provenance.source, tool.provenance.source),
        coeffs,
    )?;
    out.provenance.rudimentary = rudimentary;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseWave {
    pub gram: String,
    pub projection: [Q; 6],
    pub residual: [Q; 6],
    /// `<residual, residual>` exactly.
    pub noise_norm2: Q,
    pub noise_norm: f64,
}

fn solve_exact(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Result<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::DegenerateGram)?;
        a.swap(col, p);
        b.swap(col, p);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let v = &a[col][c] * &f;
                    a[r][c] -= v;
                }
                let v = &b[col] * &f;
                b[r] -= v;
            }
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Orthogonal projection of `candidate` onto the span of the generators under the space's gram.
pub fn noise_wave(candidate: &IdentityVector, space: &IdentitySpace) -> Result<NoiseWave> {
    space.gram.check()?;
    let red = row_reduce(&rows(&space.generators));
    let basis: Vec<&[Q; 6]> = red.pivots.iter().map(|&(r, _)| &space.generators[r].coeffs).collect();
    let g: Vec<Vec<Q>> = basis.iter().map(|x| basis.iter().map(|y| space.gram.inner(x, y)).collect()).collect();
    let rhs: Vec<Q> = basis.iter().map(|x| space.gram.inner(x, &candidate.coeffs)).collect();
    let c = if basis.is_empty() { vec![] } else { solve_exact(g, rhs)? };
    let projection: [Q; 6] =
        std::array::from_fn(|i| basis.iter().zip(&c).fold(Q::zero(), |acc, (b, ci)| acc + &b[i] * ci));
    let residual: [Q; 6] = std::array::from_fn(|i| &candidate.coeffs[i] - &projection[i]);
    let noise_norm2 = space.gram.inner(&residual, &residual);
    let noise_norm = noise_norm2.to_f64().unwrap_or(f64::NAN).sqrt();
    Ok(NoiseWave { gram: space.gram.name(), projection, residual, noise_norm2, noise_norm })
}

/// Main-term matrix `{density, beta average, lichnerowicz}` over `(R^, R°, |nabla R|^2)`.
pub fn main_term_matrix(n: usize) -> Result<Vec<Vec<Q>>> {
    let space = canonical_generators(n)?;
    let lich = lichnerowicz_vector(n);
    Ok([&space.generators[0], &space.generators[1], &lich].iter().map(|g| g.main_terms().to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn density_main_terms() {
        let d = density_equation(12).unwrap();
        assert_eq!(d.main_terms(), [qi(112), qi(-32), qi(-27)]);
    }

    #[test]
    fn lichnerowicz_shape() {
        let l = lichnerowicz_vector(8);
        assert_eq!(l.degree, None);
        assert_eq!(l.coeffs[5], Q::one());
        assert_eq!(l.coeffs[1], qi(2) * q(2 * 8, 3) * qi(10));
    }

    #[test]
    fn zero_identity_rejected() {
        let z: [Q; 6] = std::array::from_fn(|_| Q::zero());
        assert_eq!(IdentityVector::new("z", Some(2), "test", z), Err(Error::ZeroIdentity));
    }

    #[test]
    fn main_term_matrix_has_rank_three() {
        for n in 2..20 {
            assert_eq!(row_reduce(&main_term_matrix(n).unwrap()).rank, 3);
        }
    }

    #[test]
    fn displayed_beta_row_makes_the_matrix_singular() {
        // With c = -9/32 the third column of the beta row matches 2R° - R^/4 = (9/32)|nabla R|^2.
        let m = vec![
            vec![qi(112), qi(-32), qi(-27)],
            vec![q(-1, 4), qi(2), q(-9, 32)],
            vec![qi(-1), qi(-4), qi(1)],
        ];
        assert_eq!(row_reduce(&m).rank, 2);
    }

    #[test]
    fn graded_membership_rejects_lichnerowicz() {
        let space = canonical_generators(12).unwrap();
        let lich = lichnerowicz_vector(12);
        assert!(!rank_and_membership(&space, &lich, true).member);
        let ungraded = rank_and_membership(&space, &lich, false);
        assert!(!ungraded.member);
        assert_eq!(ungraded.main_term_rank, 3);
    }

    #[test]
    fn generator_is_member() {
        let space = canonical_generators(6).unwrap();
        for g in &space.generators {
            assert!(rank_and_membership(&space, g, true).member);
            assert!(rank_and_membership(&space, g, false).member);
        }
    }

    #[test]
    fn cross_degree_elimination() {
        let n = 12;
        let (ball, vol) = (ball_boundary_vector(n), volume_vector(n));
        assert_eq!(
            eliminate(&ball, &vol, 2, EliminationMode::Proper),
            Err(Error::DegreeMismatch { target: Some(13), tool: Some(17) })
        );
        let r = eliminate(&ball, &vol, 2, EliminationMode::Rudimentary).unwrap();
        assert!(r.provenance.rudimentary && r.degree.is_none() && r.coeffs[2].is_zero());
    }

    #[test]
    fn equal_degree_elimination_keeps_degree() {
        let space = canonical_generators(5).unwrap();
        let (beta, alpha) = (&space.generators[1], &space.generators[2]);
        let shifted = IdentityVector::new("t", Some(2), "test", std::array::from_fn(|i| &beta.coeffs[i] + &alpha.coeffs[i])).unwrap();
        let e = eliminate(&shifted, alpha, 5, EliminationMode::Proper).unwrap();
        assert_eq!(e.degree, Some(2));
        assert_eq!(e.coeffs, beta.coeffs);
        assert_eq!(eliminate(&shifted, beta, 2, EliminationMode::Proper), Err(Error::SymbolAbsent("L".into())));
    }

    #[test]
    fn noise_wave_cases() {
        let space = canonical_generators(12).unwrap();
        let inside = noise_wave(&space.generators[0], &space).unwrap();
        assert!(inside.noise_norm2.is_zero());
        let lone = IdentitySpace::new(vec![space.generators[2].clone()]);
        let e = IdentityVector::new("c3", Some(6), "test", std::array::from_fn(|i| if i == 0 { Q::one() } else { Q::zero() })).unwrap();
        let orth = noise_wave(&e, &lone).unwrap();
        assert!(orth.projection.iter().all(Zero::is_zero));
        assert_eq!(orth.noise_norm2, Q::one());
        let lich = noise_wave(&lichnerowicz_vector(12), &space).unwrap();
        assert!(lich.noise_norm > 0.0);
        let bad = space.clone().with_gram(Gram::WeightedDiagonal(std::array::from_fn(|i| qi(i as i64))));
        assert_eq!(noise_wave(&lichnerowicz_vector(12), &bad).unwrap_err(), Error::DegenerateGram);
    }

    fn small_q() -> impl Strategy<Value = Q> {
        (-20i64..20, 1i64..7).prop_map(|(a, b)| q(a, b))
    }

    fn vector() -> impl Strategy<Value = [Q; 6]> {
        proptest::collection::vec(small_q(), 6).prop_map(|v| std::array::from_fn(|i| v[i].clone()))
    }

    proptest! {
        #[test]
        fn rank_is_permutation_and_scaling_invariant(vs in proptest::collection::vec(vector(), 1..5), s in 1i64..9) {
            let m: Vec<Vec<Q>> = vs.iter().map(|v| v.to_vec()).collect();
            let mut p: Vec<Vec<Q>> = m.iter().rev().map(|r| r.iter().map(|x| x * qi(s)).collect()).collect();
            p.rotate_left(1);
            prop_assert_eq!(row_reduce(&m).rank, row_reduce(&p).rank);
        }

        #[test]
        fn noise_residual_is_orthogonal(vs in proptest::collection::vec(vector(), 1..4), c in vector(), w in vector()) {
            let gens: Vec<IdentityVector> = vs.into_iter().filter_map(|v| IdentityVector::new("g", Some(2), "p", v).ok()).collect();
            prop_assume!(!gens.is_empty());
            let Ok(cand) = IdentityVector::new("c", Some(2), "p", c) else { return Ok(()) };
            let weights: [Q; 6] = std::array::from_fn(|i| w[i].abs() + Q::one());
            for gram in [Gram::Euclidean, Gram::WeightedDiagonal(weights)] {
                let space = IdentitySpace::new(gens.clone()).with_gram(gram.clone());
                let nw = noise_wave(&cand, &space).unwrap();
                for g in &gens {
                    prop_assert!(gram.inner(&nw.residual, &g.coeffs).is_zero());
                }
                let member = rank_and_membership(&space, &cand, false).member;
                prop_assert_eq!(member, nw.noise_norm2.is_zero());
            }
        }

        #[test]
        fn proper_elimination_preserves_degree(a in vector(), b in vector(), d in 0i32..5) {
            let (Ok(t), Ok(tool)) = (IdentityVector::new("t", Some(2 * d), "p", a), IdentityVector::new("u", Some(2 * d), "p", b)) else { return Ok(()) };
            for sym in 0..6 {
                if let Ok(e) = eliminate(&t, &tool, sym, EliminationMode::Proper) {
                    prop_assert_eq!(e.degree, Some(2 * d));
                    prop_assert!(e.coeffs[sym].is_zero());
                }
                if let Ok(e) = eliminate(&t, &tool, sym, EliminationMode::Rudimentary) {
                    prop_assert_eq!(e.degree, None);
                }
            }
        }
    }
}
