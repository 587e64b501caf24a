//! Metric Lie algebras, their Levi-Civita connection, curvature and curvature jets.

mod algebra;
mod connection;
mod curvature;
mod jet;
mod tensor;

pub use algebra::{
    build_damek_ricci, build_htype_algebra, damek_ricci, solvable_extension, AlgebraDocument, FrameLabel,
    MetricLieAlgebra,
};
pub use connection::{levi_civita, Connection};
pub use curvature::{curvature, Convention, CurvatureTensor, Space};
pub use jet::{curvature_jet, DirectionalCurvatureJet};
pub use tensor::Tensor4;
