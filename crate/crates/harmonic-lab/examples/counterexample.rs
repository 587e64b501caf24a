//! The side-by-side comparison table that the `counterexample` subcommand writes.

use harmonic_lab::cli::{cmd_counterexample, Format, RunConfig, COUNTEREXAMPLE_TOL};
use harmonic_lab::heatinv::ExpansionMode;

fn main() -> harmonic_lab::Result<()> {
    let cfg = RunConfig {
        family: "3:2,0;1,1".parse()?,
        seed: 7,
        tol: COUNTEREXAMPLE_TOL,
        mode: ExpansionMode::Natural,
        out: None,
        format: Format::Csv,
    };
    let table = cmd_counterexample(&cfg, 2_000)?;
    for (j, col) in table.agreement.iter().enumerate() {
        let vals: Vec<String> = table.rows.iter().map(|r| format!("{:+.10e}", r.values[j])).collect();
        println!("{:<28} {}  {}", col.column, vals.join("  "), if col.agree { "agree" } else { "differ" });
    }
    Ok(())
}
