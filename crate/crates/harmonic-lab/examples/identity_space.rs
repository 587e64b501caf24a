//! Exact identity-space calculus: ranks, graded membership, eliminations and the noise wave.

use harmonic_lab::sis::{
    ball_boundary_vector, canonical_generators, eliminate, lichnerowicz_vector, main_term_matrix, noise_wave, rank_and_membership,
    row_reduce, volume_vector, EliminationMode,
};

fn main() -> harmonic_lab::Result<()> {
    let n = 12;
    let space = canonical_generators(n)?;
    for g in &space.generators {
        println!("{g}");
    }
    let lich = lichnerowicz_vector(n);
    println!("{lich}");
    println!("main-term rank {}", row_reduce(&main_term_matrix(n)?).rank);
    for graded in [true, false] {
        let r = rank_and_membership(&space, &lich, graded);
        println!("graded {graded}: member {} ({})", r.member, r.reason);
    }
    let nw = noise_wave(&lich, &space)?;
    println!("noise wave |NW|^2 = {} ({:.6})", nw.noise_norm2, nw.noise_norm);
    let (ball, vol) = (ball_boundary_vector(n), volume_vector(n));
    for mode in [EliminationMode::Proper, EliminationMode::Rudimentary] {
        match eliminate(&ball, &vol, 2, mode) {
            Ok(v) => println!("{mode:?}: {v} (rudimentary {})", v.provenance.rudimentary),
            Err(e) => println!("{mode:?}: {e}"),
        }
    }
    Ok(())
}
