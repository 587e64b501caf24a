//! The pipelines behind each subcommand. Each returns a serializable report and a pass flag.

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use crate::clifford::{j_map, FamilyMember};
use crate::error::{Error, Result};
use crate::geometry::{curvature_jet, damek_ricci, MetricLieAlgebra, Space};
use crate::heatinv::{
    ams_sphere_averages, boundary_polynomials, AmsAverages, BoundaryCondition, BoundaryPolynomials, HeatInvariantInputs,
    ShapeFit,
};
use crate::invariants::{point_invariants, verify_einstein_identities, verify_harmonicity, FastJacobi, HarmonicityReport, PointInvariants};
use crate::radial::{
    density_series, jacobi_recursion, oracle_coefficients, shape_trace_series, volume_series, vk_recursion, DensityCoefficients,
    Series,
};
use crate::report::{rel_diff, ResidualEntry, ResidualReport};
use crate::sampling::random_unit;
use crate::sis::{
    ball_boundary_vector, canonical_generators, eliminate, lichnerowicz_vector, main_term_matrix, noise_wave, rank_and_membership,
    row_reduce, volume_vector, EliminationMode, Gram, IdentityJson, MembershipReport, SpaceJson, Q,
};
use crate::spectra::{
    ball_bundle_spectrum, isospectrality_report, radial_spectrum, BallBundleParams, BallBundleReport, Boundary, FamilyParams,
    FamilyReport, RadialOperator, SpectrumReport,
};

pub const VERIFY_TOL: f64 = 1e-8;
pub const COUNTEREXAMPLE_TOL: f64 = 1e-7;
pub const SERIES_ORACLE_TOL: f64 = 1e-5;
pub const VK_TOL: f64 = 1e-12;
pub const MC_SIGMAS: f64 = 4.0;

fn member_algebra(m: &FamilyMember) -> Result<MetricLieAlgebra> {
    damek_ricci(m.l, m.a, m.b)
}

/// Scales the first nonzero structure constant by `factor`.
pub fn perturbed(alg: &MetricLieAlgebra, factor: f64) -> MetricLieAlgebra {
    let n = alg.dim();
    for i in 0..n {
        for j in i + 1..n {
            for m in 0..n {
                if alg.c(i, j, m) != 0.0 {
                    return alg.with_scaled_bracket(i, j, m, factor);
                }
            }
        }
    }
    alg.clone()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberVerification {
    pub member: String,
    pub structure: ResidualReport,
    pub harmonicity: HarmonicityReport,
    pub einstein: ResidualReport,
    pub averages: ResidualReport,
    pub series: ResidualReport,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub members: Vec<MemberVerification>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub samples: usize,
    pub mc_samples: usize,
    pub perturb: Option<f64>,
}

fn structure_report(space: &Space, tol: f64) -> ResidualReport {
    let th = |name: &str, v: f64| ResidualEntry::threshold(name, v, tol, false);
    let (off, var) = space.einstein_residual();
    ResidualReport {
        subject: "structure".into(),
        entries: vec![
            th("jacobi identity", space.algebra.jacobi_residual()),
            th("torsion", space.connection.torsion_residual(&space.algebra)),
            th("metric compatibility", space.connection.metric_residual()),
            th("curvature symmetries", space.curvature.symmetry_residual()),
            th("first bianchi", space.curvature.bianchi_residual()),
            th("second bianchi", space.second_bianchi_residual()),
            th("einstein off-diagonal", off),
            th("einstein diagonal variance", var),
        ],
    }
}

/// Jacobi recursion against the ODE oracle through `r^4`, and the `V_k` recursion against series division.
pub fn series_report(space: &Space, seed: u64) -> Result<ResidualReport> {
    let n = space.dim();
    let u = random_unit(n, seed);
    let jet = curvature_jet(space, &u, 4)?;
    let a = jacobi_recursion(&jet, 6);
    let (oracle, _) = oracle_coefficients(space, &u, 4, 0.4, 1e-3)?;
    let mut entries: Vec<ResidualEntry> = (0..=4)
        .map(|k| ResidualEntry::threshold(format!("A-series r^{k} vs ode"), (&oracle[k] - &a.coeffs[k]).amax(), SERIES_ORACLE_TOL, false))
        .collect();
    let (d, _, _) = density_series(&a)?;
    let vk = vk_recursion(&d.as_array(), n)?;
    let ratio = volume_series(&d, n)?.ratio;
    for (k, v) in vk.iter().enumerate() {
        entries.push(ResidualEntry::compare(format!("V_{} recursion vs division", 2 * k), *v, ratio.coeff(1 + 2 * k as i32), 0.0, VK_TOL));
    }
    Ok(ResidualReport { subject: "series".into(), entries })
}

fn verify_member(m: &FamilyMember, cfg: &RunConfig, opts: &VerifyOptions) -> Result<MemberVerification> {
    let mut alg = member_algebra(m)?;
    if let Some(f) = opts.perturb {
        alg = perturbed(&alg, f);
    }
    let space = Space::new(alg);
    let structure = structure_report(&space, cfg.tol);
    let harmonicity = verify_harmonicity(&space, opts.samples, cfg.tol, cfg.seed);
    let inv = point_invariants(&space, opts.samples, cfg.seed);
    let einstein = verify_einstein_identities(&inv, cfg.tol);
    let averages = ams_sphere_averages(&space, &inv, opts.mc_samples, cfg.seed)?.check(cfg.tol, MC_SIGMAS);
    let series = series_report(&space, cfg.seed)?;
    let pass = structure.pass() && harmonicity.pass && einstein.pass() && averages.pass() && series.pass();
    Ok(MemberVerification { member: m.to_string(), structure, harmonicity, einstein, averages, series, pass })
}

pub fn cmd_verify(cfg: &RunConfig, opts: &VerifyOptions) -> Result<(VerifyReport, bool)> {
    let members: Vec<MemberVerification> =
        cfg.family.members().par_iter().map(|m| verify_member(m, cfg, opts)).collect::<Result<_>>()?;
    let mut failures = Vec::new();
    for mv in &members {
        let reports = [&mv.structure, &mv.einstein, &mv.averages, &mv.series];
        for r in reports {
            failures.extend(r.failures().iter().map(|e| format!("{}: {}: {}", mv.member, r.subject, e.identity)));
        }
        failures.extend(mv.harmonicity.entries.iter().filter(|e| !e.pass).map(|e| format!("{}: harmonicity: {}", mv.member, e.identity)));
    }
    let pass = failures.is_empty();
    Ok((VerifyReport { members, failures }, pass))
}

pub const COLUMNS: [&str; 17] = [
    "C",
    "H",
    "L",
    "A2",
    "A4",
    "A6",
    "normDelR2",
    "Rhat",
    "Rring",
    "Rhat-7/24*normDelR2",
    "Rring-17/96*normDelR2",
    "alpha2_avg",
    "beta2_avg",
    "[P2]_3_avg",
    "[P3]_3_avg_dirichlet",
    "[P3]_3_avg_neumann",
    "[16Tr(R_nu o sigma)]_3_avg",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleRow {
    pub member: String,
    pub values: Vec<f64>,
    pub invariants: PointInvariants,
    pub averages: AmsAverages,
    pub dirichlet: BoundaryPolynomials,
    pub neumann: BoundaryPolynomials,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnAgreement {
    pub column: String,
    pub agree: bool,
    pub max_rel_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub columns: Vec<String>,
    pub rows: Vec<CounterexampleRow>,
    pub agreement: Vec<ColumnAgreement>,
    pub tolerance: f64,
}

impl ComparisonTable {
    pub fn column(&self, name: &str) -> Option<&ColumnAgreement> {
        self.agreement.iter().find(|c| c.column == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("member");
        for c in &self.columns {
            out.push(',');
            out.push_str(&format!("\"{c}\""));
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.member);
            for v in &r.values {
                out.push_str(&format!(",{v:.15e}"));
            }
            out.push('\n');
        }
        out.push_str("agree");
        for a in &self.agreement {
            out.push_str(if a.agree { ",agree" } else { ",differ" });
        }
        out.push('\n');
        out
    }
}

fn averaged_density(space: &Space, seed: u64, count: usize) -> Result<Series> {
    let n = space.dim();
    let mut acc = [0.0; 4];
    for i in 0..count {
        let u = random_unit(n, seed.wrapping_add(1000 + i as u64));
        let (d, _, _) = density_series(&jacobi_recursion(&curvature_jet(space, &u, 4)?, 6))?;
        for (a, v) in acc.iter_mut().zip(d.as_array()) {
            *a += v / count as f64;
        }
    }
    Ok(DensityCoefficients { a0: acc[0], a2: acc[1], a4: acc[2], a6: acc[3] }.to_series())
}

fn counterexample_row(m: &FamilyMember, cfg: &RunConfig, mc_samples: usize, fit: &ShapeFit) -> Result<CounterexampleRow> {
    let space = Space::new(member_algebra(m)?);
    let n = space.dim();
    let inv = point_invariants(&space, 16, cfg.seed);
    let u = random_unit(n, cfg.seed);
    let jet = curvature_jet(&space, &u, 4)?;
    let a = jacobi_recursion(&jet, 6);
    let (d, theta, _) = density_series(&a)?;
    let theta_avg = averaged_density(&space, cfg.seed, 4)?;
    let averages = ams_sphere_averages(&space, &inv, mc_samples, cfg.seed)?;
    let traces = shape_trace_series(&a, &jet)?;
    let inputs = HeatInvariantInputs::from(&inv);
    let trp = FastJacobi::new(&space).tr_r1r1(&u);
    let bp = |cond| boundary_polynomials(&traces, &theta, &theta_avg, &inputs, trp, cond, cfg.mode, fit);
    let (dirichlet, neumann) = (bp(BoundaryCondition::Dirichlet)?, bp(BoundaryCondition::Neumann)?);
    let avg_t = 16.0 * averages.alpha_exact;
    let (c, h, l) = (inv.c.value, inv.h.value, inv.l.value);
    let averaged = |b: &crate::heatinv::Decomposition| b.basis.C3 * c.powi(3) + b.basis.CH * c * h + b.basis.L * l + b.basis.TrRpRp * avg_t;
    let values = vec![
        c,
        h,
        l,
        d.a2,
        d.a4,
        d.a6,
        inv.norm_del_r2,
        inv.r_hat,
        inv.r_ring,
        inv.q3(),
        inv.q4(),
        averages.alpha_exact,
        averages.beta_exact,
        averaged(&dirichlet.decompositions[0]),
        averaged(&dirichlet.decompositions[1]),
        averaged(&neumann.decompositions[1]),
        averaged(&dirichlet.decompositions[2]),
    ];
    Ok(CounterexampleRow { member: m.to_string(), values, invariants: inv, averages, dirichlet, neumann })
}

pub fn cmd_counterexample(cfg: &RunConfig, mc_samples: usize) -> Result<ComparisonTable> {
    let members = cfg.family.members();
    if members.len() < 2 {
        return Err(Error::InvalidArgument("counterexample needs at least two family members".into()));
    }
    let fit = ShapeFit::calibrate(true)?;
    let rows: Vec<CounterexampleRow> =
        members.par_iter().map(|m| counterexample_row(m, cfg, mc_samples, &fit)).collect::<Result<_>>()?;
    let agreement = COLUMNS
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let first = rows[0].values[j];
            let max_rel_diff = rows.iter().map(|r| rel_diff(r.values[j], first)).fold(0.0, f64::max);
            ColumnAgreement { column: name.to_string(), agree: max_rel_diff <= cfg.tol, max_rel_diff }
        })
        .collect();
    Ok(ComparisonTable { columns: COLUMNS.iter().map(|s| s.to_string()).collect(), rows, agreement, tolerance: cfg.tol })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsospecReport {
    pub reports: Vec<FamilyReport>,
}

impl IsospecReport {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("member_a,member_b,z_index,n,m,dim_a,dim_b,max_difference,error_bar,pass\n");
        for r in &self.reports {
            for c in &r.cells {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{:.6e},{:.6e},{}\n",
                    r.member_a, r.member_b, c.z_index, c.n, c.m, c.dim_a, c.dim_b, c.max_difference, c.error_bar, c.pass
                ));
            }
        }
        out
    }
}

/// The first member against every member (itself included when the family has one member).
pub fn cmd_isospec(cfg: &RunConfig, params: &FamilyParams) -> Result<IsospecReport> {
    let members = cfg.family.members();
    let base = j_map(members[0].l, members[0].a, members[0].b)?;
    let others: Vec<&FamilyMember> = if members.len() == 1 { vec![&members[0]] } else { members[1..].iter().collect() };
    let reports = others
        .iter()
        .map(|m| isospectrality_report(&base, &j_map(m.l, m.a, m.b)?, params))
        .collect::<Result<_>>()?;
    Ok(IsospecReport { reports })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationStep {
    pub target: String,
    pub tool: String,
    pub symbol: String,
    pub mode: EliminationMode,
    pub result: Option<IdentityJson>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SisReport {
    pub n: usize,
    pub space: SpaceJson,
    pub main_term_matrix: Vec<Vec<String>>,
    pub main_term_rank: usize,
    pub lichnerowicz: IdentityJson,
    pub graded: MembershipReport,
    pub ungraded: MembershipReport,
    pub noise_norm2: String,
    pub noise_norm: f64,
    pub noise_residual: Vec<String>,
    pub transcript: Vec<EliminationStep>,
}

impl SisReport {
    /// Graded non-membership, full main-term rank and a recorded degree mismatch.
    pub fn pass(&self) -> bool {
        !self.graded.member
            && self.main_term_rank == 3
            && self.transcript.iter().any(|s| s.mode == EliminationMode::Proper && s.error.is_some())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,degree,source,rudimentary,C3,CH,L,Rhat,Rring,normDelR2\n");
        let mut row = |g: &IdentityJson| {
            let deg = g.degree.map_or(String::new(), |d| d.to_string());
            out.push_str(&format!("\"{}\",{deg},\"{}\",{},{}\n", g.name, g.provenance.source, g.provenance.rudimentary, g.coeffs.join(",")));
        };
        for g in &self.space.generators {
            row(g);
        }
        row(&self.lichnerowicz);
        for s in &self.transcript {
            if let Some(r) = &s.result {
                row(r);
            }
        }
        out
    }
}

pub fn cmd_sis(cfg: &RunConfig, weights: Option<[Q; 6]>) -> Result<SisReport> {
    let n = cfg.family.dimension();
    let mut space = canonical_generators(n)?;
    if let Some(w) = weights {
        space = space.with_gram(Gram::WeightedDiagonal(w));
    }
    let lich = lichnerowicz_vector(n);
    let graded = rank_and_membership(&space, &lich, true);
    let ungraded = rank_and_membership(&space, &lich, false);
    let main = main_term_matrix(n)?;
    let main_term_rank = row_reduce(&main).rank;
    let nw = noise_wave(&lich, &space)?;
    let (ball, vol) = (ball_boundary_vector(n), volume_vector(n));
    let transcript = [EliminationMode::Proper, EliminationMode::Rudimentary]
        .into_iter()
        .map(|mode| {
            let r = eliminate(&ball, &vol, 2, mode);
            EliminationStep {
                target: ball.name.clone(),
                tool: vol.name.clone(),
                symbol: "L".into(),
                mode,
                result: r.as_ref().ok().map(|v| v.to_json()),
                error: r.err().map(|e| e.to_string()),
            }
        })
        .collect();
    Ok(SisReport {
        n,
        space: space.to_json(),
        main_term_matrix: main.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        main_term_rank,
        lichnerowicz: lich.to_json(),
        graded,
        ungraded,
        noise_norm2: nw.noise_norm2.to_string(),
        noise_norm: nw.noise_norm,
        noise_residual: nw.residual.iter().map(|x| x.to_string()).collect(),
        transcript,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesDump {
    pub name: String,
    pub offset: i32,
    pub coeffs: Vec<f64>,
}

impl SeriesDump {
    fn new(name: &str, s: &Series) -> Self {
        SeriesDump { name: name.into(), offset: s.offset, coeffs: s.coeffs.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberExpansion {
    pub member: String,
    pub direction: Vec<f64>,
    pub density: DensityCoefficients,
    pub v_k: [f64; 4],
    pub series: Vec<SeriesDump>,
    pub oracle: ResidualReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpandReport {
    pub members: Vec<MemberExpansion>,
}

impl ExpandReport {
    pub fn pass(&self) -> bool {
        self.members.iter().all(|m| m.oracle.pass())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("member,series,power,coefficient\n");
        for m in &self.members {
            for s in &m.series {
                for (i, c) in s.coeffs.iter().enumerate() {
                    out.push_str(&format!("{},{},{},{c:.15e}\n", m.member, s.name, s.offset + i as i32));
                }
            }
        }
        out
    }
}

fn expand_member(m: &FamilyMember, cfg: &RunConfig) -> Result<MemberExpansion> {
    let space = Space::new(member_algebra(m)?);
    let n = space.dim();
    let u = random_unit(n, cfg.seed);
    let jet = curvature_jet(&space, &u, 4)?;
    let a = jacobi_recursion(&jet, 6);
    let (density, theta_big, theta) = density_series(&a)?;
    let tr = shape_trace_series(&a, &jet)?;
    let vol = volume_series(&density, n)?;
    let series = vec![
        SeriesDump::new("Tr A/r", &a.trace()),
        SeriesDump::new("Theta", &theta_big),
        SeriesDump::new("theta", &theta),
        SeriesDump::new("Tr sigma", &tr.tr_sigma),
        SeriesDump::new("Tr sigma^2", &tr.tr_sigma2),
        SeriesDump::new("Tr sigma^3", &tr.tr_sigma3),
        SeriesDump::new("Tr(R_nu o sigma)", &tr.tr_r_sigma),
        SeriesDump::new("vol(B_r)", &vol.ball),
        SeriesDump::new("vol(S_r)", &vol.sphere),
        SeriesDump::new("vol(B_r)/vol(S_r)", &vol.ratio),
    ];
    Ok(MemberExpansion {
        member: m.to_string(),
        direction: u,
        density,
        v_k: vk_recursion(&density.as_array(), n)?,
        series,
        oracle: series_report(&space, cfg.seed)?,
    })
}

pub fn cmd_expand(cfg: &RunConfig) -> Result<ExpandReport> {
    let members = cfg.family.members().par_iter().map(|m| expand_member(m, cfg)).collect::<Result<_>>()?;
    Ok(ExpandReport { members })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumOptions {
    pub k: Option<usize>,
    pub degree: usize,
    pub m: i64,
    pub mu: f64,
    pub t_max: f64,
    pub grid: usize,
    pub count: usize,
    pub boundary: Boundary,
    pub z_radius: Option<f64>,
    pub s: usize,
    pub z_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SpectrumOutput {
    Radial(SpectrumReport),
    BallBundle(BallBundleReport),
}

impl SpectrumOutput {
    pub fn to_csv(&self) -> String {
        match self {
            SpectrumOutput::Radial(r) => r.to_csv(),
            SpectrumOutput::BallBundle(b) => {
                let mut out = String::from("branch,lambda,mu,index,eigenvalue,error_bar,multiplicity\n");
                for br in &b.branches {
                    for e in &br.spectrum.entries {
                        out.push_str(&format!(
                            "{},{:.15e},{:.15e},{},{:.15e},{:.6e},{}\n",
                            br.index, br.lambda, br.mu, e.index, e.eigenvalue, e.error_bar, e.multiplicity
                        ));
                    }
                }
                out
            }
        }
    }
}

pub fn cmd_spectrum(cfg: &RunConfig, o: &SpectrumOptions) -> Result<SpectrumOutput> {
    let members = cfg.family.members();
    let k = match o.k {
        Some(k) => k,
        None => j_map(members[0].l, members[0].a, members[0].b)?.k(),
    };
    let tol = cfg.tol;
    match o.z_radius {
        None => {
            let op = RadialOperator { k, n: o.degree, m: o.m, mu: o.mu };
            Ok(SpectrumOutput::Radial(radial_spectrum(&op, o.t_max, o.boundary, o.grid, o.count, tol)?))
        }
        Some(z_radius) => Ok(SpectrumOutput::BallBundle(ball_bundle_spectrum(&BallBundleParams {
            k,
            n: o.degree,
            m: o.m,
            l: cfg.family.l,
            z_radius,
            s: o.s,
            z_boundary: o.boundary,
            z_count: o.z_count,
            t_max: o.t_max,
            x_boundary: o.boundary,
            x_count: o.count,
            grid: o.grid,
            tol,
        })?)),
    }
}
