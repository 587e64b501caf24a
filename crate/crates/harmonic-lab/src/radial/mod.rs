//! Radial power series: the Jacobi endomorphism, density, shape-operator traces,
//! volume quotients and an independent ODE oracle.

mod expansion;
mod ode;
mod series;

pub use expansion::{
    density_series, jacobi_operator_series, jacobi_recursion, jacobi_series, shape_operator_series, shape_trace_series, volume_series, vk_recursion,
    DensityCoefficients, ShapeTraces, VolumeSeries,
};
pub use ode::{oracle_coefficients, richardson_taylor, samples_to_csv, OdeOracle, OdeSample, OracleCoefficients};
pub use series::{det3_cofactor, Coeff, MatSeries, Series};
