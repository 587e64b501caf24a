//! Clifford generators, the split J-maps of one family and the exchange endomorphism relating them.

use harmonic_lab::clifford::{build_clifford_module, build_j_map, exchange_endomorphism};

fn main() -> harmonic_lab::Result<()> {
    let module = build_clifford_module(3)?;
    println!("l = {}, irreducible block dimension {}", module.l(), module.block_dim());
    let (unsplit, split) = (build_j_map(&module, 2, 0)?, build_j_map(&module, 1, 1)?);
    let z = [0.0, 0.6, 0.8];
    let (ja, jb) = (unsplit.j_z(&z), split.j_z(&z));
    let id = nalgebra::DMatrix::<f64>::identity(ja.nrows(), ja.ncols());
    println!("|J_Z^2 + I| on {}: {:.1e}", split.member(), (&jb * &jb + &id).amax());
    let sigma = exchange_endomorphism(&split).sigma;
    // The involution acts on the Clifford side: J^(1,1)_Z = sigma J^(2,0)_Z.
    println!("|sigma J^(2,0)_Z - J^(1,1)_Z| = {:.1e}", (&sigma * &ja - &jb).amax());
    Ok(())
}
