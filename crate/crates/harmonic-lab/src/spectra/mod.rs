//! Fourier-mode restriction of the Heisenberg-type Laplacian and its radial spectra.

mod conjugacy;
mod family;
mod hnm;
mod radial;
mod symbol;

pub use conjugacy::{conjugacy_check, ConjugacySummary, Conjugator};
pub use family::{
    ball_bundle_spectrum, isospectrality_report, BallBranch, BallBundleParams, BallBundleReport, DegreeMultiplicities, FamilyCell,
    FamilyParams, FamilyReport, ZSummary,
};
pub use hnm::{
    build_hnm_basis, derivative_x, eigen_multiplicities, exponents, harmonic_dimension, harmonic_projection, laplacian_x,
    AdaptedBasis, HarmonicElement, HarmonicPolynomialSpace, XPoly, ZPoly, MAX_DEGREE,
};
pub use radial::{radial_spectrum, raw_eigenvalues, Boundary, RadialOperator, SpectrumEntry, SpectrumReport};
pub use symbol::{glz_parameter_map, laplacian_symbol, GlzMap, LaplacianSymbol};
