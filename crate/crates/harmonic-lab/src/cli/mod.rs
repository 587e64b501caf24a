//! Command-line pipelines with versioned, deterministic JSON and CSV reports.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use commands::{
    cmd_counterexample, cmd_expand, cmd_isospec, cmd_sis, cmd_spectrum, cmd_verify, perturbed, series_report, ColumnAgreement,
    ComparisonTable, CounterexampleRow, EliminationStep, ExpandReport, IsospecReport, MemberExpansion, MemberVerification,
    SeriesDump, SisReport, SpectrumOptions, SpectrumOutput, VerifyOptions, VerifyReport, COLUMNS, COUNTEREXAMPLE_TOL, MC_SIGMAS,
    SERIES_ORACLE_TOL, VERIFY_TOL, VK_TOL,
};
pub use config::{Family, Format, RunConfig};

use crate::error::{Error, Result};
use crate::heatinv::ExpansionMode;
use crate::report::SCHEMA_VERSION;
use crate::sis::Q;
use crate::spectra::{Boundary, FamilyParams};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const CSV_HELP: &str = "\
CSV columns:
  verify          member,report,identity,lhs,rhs,rel_residual,tolerance,pass
  counterexample  member,<one column per invariant>; last row marks agree/differ
  isospec         member_a,member_b,z_index,n,m,dim_a,dim_b,max_difference,error_bar,pass
  sis             name,degree,source,rudimentary,C3,CH,L,Rhat,Rring,normDelR2
  expand          member,series,power,coefficient
  spectrum        index,eigenvalue,error_bar,multiplicity
                  (ball bundle: branch,lambda,mu,index,eigenvalue,error_bar,multiplicity)

Exit codes: 0 pass, 1 verification failure, 2 usage or configuration error.";

#[derive(Debug, Parser)]
#[command(name = "harmonic-lab", version, about = "Harmonic-manifold spectral geometry laboratory", after_help = CSV_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Family `l:a,b;a,b;..`, all members sharing `l` and `a + b`.
    #[arg(long, global = true, default_value = "3:2,0;1,1")]
    pub family: String,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Overrides the subcommand's default tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = ExpansionMode::Natural)]
    pub mode: ExpansionMode,
    /// Directory for `<command>.json` / `<command>.csv`; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Structure, harmonicity, Einstein identities, sphere averages and series checks per member.
    Verify {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 20_000)]
        mc_samples: usize,
        /// Scales one structure constant by this factor (negative control).
        #[arg(long)]
        perturb: Option<f64>,
    },
    /// Side-by-side invariants of every member with agree/differ marks.
    Counterexample {
        #[arg(long, default_value_t = 2_000)]
        mc_samples: usize,
    },
    /// Pass/fail matrix over Fourier modes, degrees and `i D` eigenvalues.
    Isospec {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 4.0)]
        t_max: f64,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long, default_value_t = 3)]
        count: usize,
        /// Multiplies `mu` on the compared members (negative control).
        #[arg(long, default_value_t = 1.0)]
        mu_scale: f64,
    },
    /// Identity-space generators, Lichnerowicz membership and the elimination transcript.
    Sis {
        /// Diagonal gram weights `w1,..,w6` (rationals `p/q`); Euclidean when absent.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Series dumps of the Jacobi, density, shape-operator and volume expansions.
    Expand,
    /// Radial eigenvalues of the Fourier-mode operator, or the Z-ball bundle when `--z-radius` is set.
    Spectrum {
        /// X-dimension; defaults to the first family member's.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        mu: f64,
        #[arg(long, default_value_t = 4.0)]
        t_max: f64,
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Boundary `A f'(T) + B f(T) = 0`.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        bc_a: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        bc_b: f64,
        #[arg(long)]
        z_radius: Option<f64>,
        #[arg(long, default_value_t = 0)]
        s: usize,
        #[arg(long, default_value_t = 3)]
        z_count: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Counterexample { .. } => "counterexample",
            Command::Isospec { .. } => "isospec",
            Command::Sis { .. } => "sis",
            Command::Expand => "expand",
            Command::Spectrum { .. } => "spectrum",
        }
    }

    fn default_tol(&self) -> f64 {
        match self {
            Command::Counterexample { .. } => COUNTEREXAMPLE_TOL,
            Command::Isospec { .. } | Command::Spectrum { .. } => 1e-2,
            _ => VERIFY_TOL,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    config: &'a RunConfig,
    pass: bool,
    report: &'a T,
}

/// A finished run: the rendered report and its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub command: String,
    pub format: Format,
    pub body: String,
    pub exit_code: i32,
}

pub fn build_config(common: &CommonArgs, command: &Command) -> Result<RunConfig> {
    Ok(RunConfig {
        family: common.family.parse()?,
        seed: common.seed,
        tol: common.tol.unwrap_or_else(|| command.default_tol()),
        mode: common.mode,
        out: common.out.clone(),
        format: common.format,
    })
}

fn render<T: Serialize>(cfg: &RunConfig, command: &str, report: &T, pass: bool, csv: impl FnOnce() -> String) -> Result<Outcome> {
    let body = match cfg.format {
        Format::Json => {
            let env = Envelope { schema_version: SCHEMA_VERSION, command, config: cfg, pass, report };
            let mut s = serde_json::to_string_pretty(&env).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => csv(),
    };
    Ok(Outcome { command: command.into(), format: cfg.format, body, exit_code: if pass { EXIT_PASS } else { EXIT_FAIL } })
}

fn parse_weights(s: &str) -> Result<[Q; 6]> {
    let parts: Vec<Q> = s
        .split(',')
        .map(|w| w.trim().parse::<Q>().map_err(|_| Error::InvalidArgument(format!("weight '{w}' is not a rational"))))
        .collect::<Result<_>>()?;
    <[Q; 6]>::try_from(parts).map_err(|_| Error::InvalidArgument("expected six gram weights".into()))
}

fn verify_csv(rep: &VerifyReport) -> String {
    let mut out = String::from("member,report,identity,lhs,rhs,rel_residual,tolerance,pass\n");
    for m in &rep.members {
        let harm = crate::report::ResidualReport { subject: "harmonicity".into(), entries: m.harmonicity.entries.clone() };
        for r in [&m.structure, &harm, &m.einstein, &m.averages, &m.series] {
            for e in &r.entries {
                out.push_str(&format!(
                    "{},{},\"{}\",{:.15e},{:.15e},{:.6e},{:.1e},{}\n",
                    m.member, r.subject, e.identity, e.lhs, e.rhs, e.rel_residual, e.tolerance, e.pass
                ));
            }
        }
    }
    out
}

/// Runs one parsed command without touching the filesystem.
pub fn execute(cfg: &RunConfig, command: &Command) -> Result<Outcome> {
    let name = command.name();
    match command {
        &Command::Verify { samples, mc_samples, perturb } => {
            let (rep, pass) = cmd_verify(cfg, &VerifyOptions { samples, mc_samples, perturb })?;
            render(cfg, name, &rep, pass, || verify_csv(&rep))
        }
        &Command::Counterexample { mc_samples } => {
            let table = cmd_counterexample(cfg, mc_samples)?;
            render(cfg, name, &table, true, || table.to_csv())
        }
        &Command::Isospec { n_max, t_max, grid, count, mu_scale } => {
            let params = FamilyParams {
                n_max,
                t_max,
                grid,
                count,
                tol: cfg.tol,
                mu_scale_b: mu_scale,
                ..FamilyParams::standard(cfg.family.l)
            };
            let rep = cmd_isospec(cfg, &params)?;
            render(cfg, name, &rep, rep.pass(), || rep.to_csv())
        }
        Command::Sis { weights } => {
            let w = weights.as_deref().map(parse_weights).transpose()?;
            let rep = cmd_sis(cfg, w)?;
            render(cfg, name, &rep, rep.pass(), || rep.to_csv())
        }
        Command::Expand => {
            let rep = cmd_expand(cfg)?;
            render(cfg, name, &rep, rep.pass(), || rep.to_csv())
        }
        &Command::Spectrum { k, degree, m, mu, t_max, grid, count, bc_a, bc_b, z_radius, s, z_count } => {
            let opts = SpectrumOptions {
                k,
                degree,
                m,
                mu,
                t_max,
                grid,
                count,
                boundary: Boundary { a: bc_a, b: bc_b },
                z_radius,
                s,
                z_count,
            };
            let rep = cmd_spectrum(cfg, &opts)?;
            render(cfg, name, &rep, true, || rep.to_csv())
        }
    }
}

/// Whether a library error stems from the configuration rather than a failed check.
pub fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidArgument(_)
            | Error::FamilyMismatch(_)
            | Error::UnsupportedCenterDimension(_)
            | Error::InvalidMultiplicity
            | Error::DegenerateBoundary
            | Error::ZeroLatticeVector
    )
}

fn write_outcome(outcome: &Outcome, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let ext = match outcome.format {
                Format::Json => "json",
                Format::Csv => "csv",
            };
            std::fs::write(dir.join(format!("{}.{ext}", outcome.command)), &outcome.body)
        }
        None => std::io::stdout().write_all(outcome.body.as_bytes()),
    }
}

/// Runs `cli` and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let cfg = match build_config(&cli.common, &cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match execute(&cfg, &cli.command) {
        Ok(outcome) => {
            if let Err(e) = write_outcome(&outcome, cfg.out.as_ref()) {
                eprintln!("error: cannot write report: {e}");
                return EXIT_USAGE;
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            if is_usage_error(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAIL
            }
        }
    }
}
