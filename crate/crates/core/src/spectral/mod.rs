//! Periodic grids, the discrete Fourier transform and field recovery.
//!
//! Forward coefficients are
//!
//! ```text
//! c_m = (1/N) sum_j v_j exp(-2 pi i kappa_m x_j),   x_j = -L/2 + j L / N
//! ```
//!
//! so a pure mode `exp(2 pi i kappa_m x)` maps to a unit coefficient. The
//! coefficient array uses the usual FFT ordering: index `j` holds
//! `m = j` for `j < N/2` and `m = j - N` otherwise. In 2D the layout is
//! row-major with `x` fastest, in both physical and spectral space.

mod field;
mod grid;
pub mod io;
mod recover;
mod transform;

pub use field::{RealField, SpectralField};
pub use grid::Grid;
pub use recover::{compose_mu, recover_eta, recover_eta_phi, Recovered};
pub use transform::{dft_forward, dft_inverse, imag_residue, SpectralTransform};
