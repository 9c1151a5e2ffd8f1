//! Hagedorn semiclassical wave packets and their change of parametrization.

pub mod packets;
pub mod params;
pub mod polynomial;
pub mod quadrature;
pub mod realign;

pub use packets::{
    gaussian_eval, global_sign, inv_sqrt_det, transform_bundle, wavepacket_eval, BundleTransform, WavePacketBundle,
};
pub use params::{harmonic_flow, param_residuals, validate_params, ParamPair, ParamResiduals, DEFAULT_PARAM_TOL};
pub use polynomial::{hermite, polynomial_recurrence_step, PolynomialTable};
pub use quadrature::{gauss_hermite, AdaptedQuadrature, DEFAULT_NODES};
pub use realign::{plan_realignment, RealignMode, RealignmentPlan};
