//! Propagation engines: RK4 for time-local equations, a Volterra
//! predictor–corrector for memory-kernel equations, Laplace-domain tools and
//! the convolution-series form of uniform dilations.

pub(crate) mod algebra;
mod grid;
mod laplace;
mod ode;
mod quadrature;
mod series;
mod volterra;

pub use grid::{MapTrajectory, Representation, Samples, TimeGrid};
pub use laplace::{
    deform_pauli_via_laplace, final_value, invert_pauli_laplace, laplace_fn, laplace_forward,
    laplace_invert, limit_at_infinity, richardson, scalar_fn, talbot_nodes, Extrapolated,
    LaplaceFn, LaplaceValue, ScalarFn, TimeFunction, S_MIN, TALBOT_NODES,
};
pub(crate) use laplace::numeric_laplace;
pub use ode::propagate_local;
pub use quadrature::integrate;
pub use series::{
    deformed_derivative_series, deformed_map_series, validity_sample_points, SeriesResult,
    ValidityReport,
};
pub use volterra::{propagate_volterra, propagate_volterra_general};
