//! Richardson-refined radial eigenvalues against the Bessel and Laguerre references.

use harmonic_lab::spectra::{radial_spectrum, Boundary, RadialOperator};

fn main() -> harmonic_lab::Result<()> {
    let zeros = [2.404_825_557_695_773, 5.520_078_110_286_311, 8.653_727_912_911_013];
    let bessel = radial_spectrum(&RadialOperator { k: 2, n: 0, m: 0, mu: 0.0 }, 1.0, Boundary::DIRICHLET, 256, 3, 1e-2)?;
    for (e, j) in bessel.entries.iter().zip(zeros) {
        println!("bessel   {:.10} +- {:.1e}  reference {:.10}", e.eigenvalue, e.error_bar, j * j);
    }
    let op = RadialOperator { k: 8, n: 1, m: -1, mu: 1.5 };
    let whole = radial_spectrum(&op, 60.0, Boundary::DIRICHLET, 1024, 3, 1e-2)?;
    for e in &whole.entries {
        println!("laguerre {:.10} +- {:.1e}  reference {:.10}", e.eigenvalue, e.error_bar, op.laguerre_reference(e.index));
    }
    print!("{}", whole.to_csv());
    Ok(())
}
