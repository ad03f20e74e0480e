//! Linear internal waves forced by a moving ship in a two-layer fluid.
//!
//! The interface displacement `eta` and the interface potential `phi` are
//! combined into a single complex spectral unknown `mu = eta_hat + i alpha phi_hat`
//! which obeys, mode by mode,
//!
//! ```text
//! d mu / dt = i (omega + i eps) mu - g_hat(t)
//! ```
//!
//! where `omega` is the two-layer dispersion relation and `g_hat` is the
//! ship forcing. The crate provides the dispersion quantities
//! ([`physics`]), periodic grids and transforms ([`spectral`]), the hull
//! forcing ([`forcing`]), an exponential time integrator with analytic
//! reference solutions ([`solver`]), the damping search ([`tuning`]) and
//! diagnostics ([`analysis`]).
//!
//! All numerical code is generic over the floating point type through
//! [`Real`]; the aliases at the crate root fix it to `f64` or `f32`.
//!
//! Wavenumbers are in cycles per metre throughout; every `2 pi` factor is
//! written out explicitly.
// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod forcing;
pub mod physics;
pub mod scalar;
pub mod scenario;
pub mod solver;
pub mod spectral;
pub mod tuning;

pub use error::{Error, Result};
pub use forcing::{ForcingContext, ShipShape, SpeedProfile};
pub use physics::{Layer, PhysicalParams, WakeGeometry, WakeRegime};
pub use scalar::Real;
pub use scenario::{InitialCondition, Scenario};
pub use solver::{IntegratorConfig, QuadratureRule, RunOutput, SimState};
pub use spectral::{Grid, RealField, SpectralField};
pub use tuning::{MeasureKind, TuneConfig, TuneOutcome};

pub use num_complex::Complex;

pub type PhysicalParamsF64 = PhysicalParams<f64>;
pub type GridF64 = Grid<f64>;
pub type ShipShapeF64 = ShipShape<f64>;
pub type SpeedProfileF64 = SpeedProfile<f64>;
pub type SpectralFieldF64 = SpectralField<f64>;
pub type RealFieldF64 = RealField<f64>;
pub type SimStateF64 = SimState<f64>;
pub type ScenarioF64 = Scenario<f64>;

pub type PhysicalParamsF32 = PhysicalParams<f32>;
pub type GridF32 = Grid<f32>;
pub type ShipShapeF32 = ShipShape<f32>;
pub type SpeedProfileF32 = SpeedProfile<f32>;
pub type SpectralFieldF32 = SpectralField<f32>;
pub type RealFieldF32 = RealField<f32>;
pub type SimStateF32 = SimState<f32>;
pub type ScenarioF32 = Scenario<f32>;
