//! Scalar curvature invariants, the harmonicity trace conditions and sphere averages.

mod averages;
mod harmonicity;
mod moments;
mod point;

pub use averages::{
    avg_beta_integrand, avg_tr_r1r1, beta_average_check, beta_closed_form, beta_form, fitted_c3_factor,
    rprime_average_check, rprime_closed_form, AverageCheck, FastJacobi,
};
pub use harmonicity::{trace_conditions, verify_harmonicity, HarmonicityReport};
pub use moments::{perfect_matchings, AverageMethod, DenseForm, McEstimate, SphereMomentEngine, MAX_EXACT_DEGREE};
pub use point::{cubic_contractions, direction_constants, point_invariants, verify_einstein_identities, PointInvariants, Sampled};
