//! Ball-boundary polynomials `P_1, P_2, P_3` and their `r^3` coefficients.

use serde::Serialize;

use super::symbolic::{rationalize, Monomial, Poly, ShapeFit, SymSeries};
use super::HeatInvariantInputs;
use crate::error::Result;
use crate::radial::{Series, ShapeTraces};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

/// How the boundary integrand is weighted before the radial coefficient is read off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExpansionMode {
    /// Multiplied by the density `Theta(r)`.
    #[default]
    Natural,
    /// Multiplied by `Theta(r)` divided by its sphere average.
    Normalized,
}

/// Weights of `((Tr s)^3, Tr s Tr s^2, Tr s^3)` in `P_3`.
pub fn p3_weight_vectors() -> [[f64; 3]; 2] {
    [[40.0 / 21.0, -88.0 / 7.0, 320.0 / 21.0], [40.0 / 3.0, 8.0, 32.0 / 3.0]]
}

/// An `r^3` coefficient over `(C^3, CH, L, Tr R'R')`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub quantity: String,
    pub degree: i32,
    pub basis: Basis,
    /// Rational forms when every basis coefficient snaps to a small denominator.
    pub rational: Option<RationalBasis>,
    /// Calibration residual of the universal fit.
    pub fit_residual: f64,
    /// `|direct - decomposition|` on the current geometry and direction.
    pub geometry_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct Basis {
    pub C3: f64,
    pub CH: f64,
    pub L: f64,
    pub TrRpRp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct RationalBasis {
    pub C3: String,
    pub CH: String,
    pub L: String,
    pub TrRpRp: String,
}

const C3: Monomial = [0, 3, 0, 0, 0];
const CH: Monomial = [0, 1, 1, 0, 0];
const LL: Monomial = [0, 0, 0, 1, 0];
const TT: Monomial = [0, 0, 0, 0, 1];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryPolynomials {
    pub condition: BoundaryCondition,
    pub mode: ExpansionMode,
    pub p1: f64,
    #[serde(skip)]
    pub p2: Series,
    #[serde(skip)]
    pub p3: Series,
    pub decompositions: Vec<Decomposition>,
}

fn p2_sym(fit: &ShapeFit) -> SymSeries {
    // (20 n - 8) C Tr s + 16 Tr(R_nu s), n = M + 1
    let factor = Poly::monomial([1, 1, 0, 0, 0], 20.0).add(&Poly::monomial([0, 1, 0, 0, 0], 12.0));
    fit.tr_sigma.scale(&factor).add(&fit.tr_r_sigma.scale(&Poly::constant(16.0)))
}

fn p3_sym(fit: &ShapeFit, w: [f64; 3]) -> SymSeries {
    let t1 = &fit.tr_sigma;
    let cube = t1.mul(t1).mul(t1);
    let mixed = t1.mul(&fit.tr_sigma2);
    cube.scale(&Poly::constant(w[0]))
        .add(&mixed.scale(&Poly::constant(w[1])))
        .add(&fit.tr_sigma3.scale(&Poly::constant(w[2])))
}

fn p2_num(tr: &ShapeTraces, n: usize, c: f64) -> Series {
    tr.tr_sigma.scale(&((20.0 * n as f64 - 8.0) * c)).truncate_to(3).add(&tr.tr_r_sigma.scale(&16.0))
}

fn p3_num(tr: &ShapeTraces, w: [f64; 3]) -> Series {
    let t1 = &tr.tr_sigma;
    t1.mul(t1)
        .mul(t1)
        .scale(&w[0])
        .add(&t1.mul(&tr.tr_sigma2).scale(&w[1]))
        .add(&tr.tr_sigma3.scale(&w[2]))
        .truncate_to(3)
}

fn ratio_string(x: f64) -> Option<String> {
    rationalize(x, 10_000_000, 1e-9).map(|q| q.to_string())
}

fn decompose(name: &str, sym: &SymSeries, direct: &Series, n: usize, vals: &[f64; 5], fit: &ShapeFit) -> Decomposition {
    let poly = sym.coeff(3).at_dimension(n);
    let basis = Basis { C3: poly.coeff(&C3), CH: poly.coeff(&CH), L: poly.coeff(&LL), TrRpRp: poly.coeff(&TT) };
    let rational = (|| {
        Some(RationalBasis {
            C3: ratio_string(basis.C3)?,
            CH: ratio_string(basis.CH)?,
            L: ratio_string(basis.L)?,
            TrRpRp: ratio_string(basis.TrRpRp)?,
        })
    })();
    Decomposition {
        quantity: name.to_string(),
        degree: 3,
        basis,
        rational,
        fit_residual: fit.residual,
        geometry_residual: (direct.coeff(3) - poly.eval(vals)).abs(),
    }
}

/// Assembles `P_2`, `P_3` for one direction and decomposes their `r^3` coefficients.
///
/// `theta` is the directional density `Theta_u(r)`, `theta_avg` its sphere average;
/// `tr_rp_rp` is `Tr(R'_u R'_u)` for the same direction.
#[allow(clippy::too_many_arguments)]
pub fn boundary_polynomials(
    traces: &ShapeTraces,
    theta: &Series,
    theta_avg: &Series,
    inputs: &HeatInvariantInputs,
    tr_rp_rp: f64,
    condition: BoundaryCondition,
    mode: ExpansionMode,
    fit: &ShapeFit,
) -> Result<BoundaryPolynomials> {
    let n = inputs.n;
    let w = p3_weight_vectors()[match condition {
        BoundaryCondition::Dirichlet => 0,
        BoundaryCondition::Neumann => 1,
    }];
    let weight = match mode {
        ExpansionMode::Natural => theta.clone(),
        ExpansionMode::Normalized => theta.div(theta_avg)?,
    };
    // Theta is radial on harmonic spaces, so the normalized weight is symbolically one.
    let weight_sym = match mode {
        ExpansionMode::Natural => fit.theta.clone(),
        ExpansionMode::Normalized => SymSeries { offset: 0, coeffs: (0..=6).map(|k| Poly::constant((k == 0) as u8 as f64)).collect() },
    };
    let p2 = p2_num(traces, n, inputs.c);
    let p3 = p3_num(traces, w);
    let tr_rs = traces.tr_r_sigma.scale(&16.0);
    let vals = [(n - 1) as f64, inputs.c, inputs.h, inputs.l, tr_rp_rp];
    let sym_rs = fit.tr_r_sigma.scale(&Poly::constant(16.0));
    let decompositions = vec![
        decompose("[P2]_3", &p2_sym(fit).mul(&weight_sym), &p2.mul(&weight), n, &vals, fit),
        decompose("[P3]_3", &p3_sym(fit, w).mul(&weight_sym), &p3.mul(&weight), n, &vals, fit),
        decompose("[16 Tr(R_nu o sigma)]_3", &sym_rs, &tr_rs, n, &vals, fit),
    ];
    Ok(BoundaryPolynomials { condition, mode, p1: inputs.p1(), p2, p3, decompositions })
}
