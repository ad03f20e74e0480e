use num_complex::Complex;

use super::{imag_residue, RealField, SpectralField, SpectralTransform};
use crate::error::Result;
use crate::physics::PhysicalParams;
use crate::scalar::Real;

/// Physical fields recovered from `mu`, with the relative imaginary parts
/// that were discarded.
#[derive(Clone, Debug)]
pub struct Recovered<T> {
    pub eta: RealField<T>,
    pub phi: RealField<T>,
    pub eta_imag_residue: T,
    pub phi_imag_residue: T,
}

fn eta_hat<T: Real>(mu: &SpectralField<T>) -> SpectralField<T> {
    let g = mu.grid;
    let half = T::lit(0.5);
    SpectralField::from_fn(g, |i| {
        if g.is_nyquist(i) {
            return Complex::new(T::zero(), T::zero());
        }
        (mu.values[i] + mu.values[g.neg_index(i)].conj()) * half
    })
}

fn to_real<T: Real>(
    transform: &SpectralTransform<T>,
    field: &SpectralField<T>,
) -> Result<(RealField<T>, T)> {
    let samples = transform.inverse(field)?;
    let residue = imag_residue(&samples);
    let values = samples.into_iter().map(|c| c.re).collect();
    Ok((RealField::new(field.grid, values)?, residue))
}

/// Interface displacement `eta` from `mu`, and its relative imaginary residue.
pub fn recover_eta<T: Real>(
    mu: &SpectralField<T>,
    transform: &SpectralTransform<T>,
) -> Result<(RealField<T>, T)> {
    to_real(transform, &eta_hat(mu))
}

/// Recovers `eta` and `phi` from `mu = eta_hat + i alpha phi_hat`.
///
/// The mean of `phi` is set to zero and the Nyquist modes are dropped.
pub fn recover_eta_phi<T: Real>(
    mu: &SpectralField<T>,
    params: &PhysicalParams<T>,
    transform: &SpectralTransform<T>,
) -> Result<Recovered<T>> {
    let g = mu.grid;
    let zero = Complex::new(T::zero(), T::zero());
    let phi_hat = SpectralField::from_fn(g, |i| {
        if i == 0 || g.is_nyquist(i) {
            return zero;
        }
        let alpha = params.alpha_abs(g.wavenumber_norm(i));
        let diff = mu.values[i] - mu.values[g.neg_index(i)].conj();
        // diff / (2 i alpha)
        Complex::new(diff.im, -diff.re) / (alpha + alpha)
    });
    let (eta, eta_imag_residue) = recover_eta(mu, transform)?;
    let (phi, phi_imag_residue) = to_real(transform, &phi_hat)?;
    Ok(Recovered {
        eta,
        phi,
        eta_imag_residue,
        phi_imag_residue,
    })
}

/// Assembles `mu = eta_hat + i alpha phi_hat` from physical fields.
pub fn compose_mu<T: Real>(
    eta: &RealField<T>,
    phi: &RealField<T>,
    params: &PhysicalParams<T>,
    transform: &SpectralTransform<T>,
) -> Result<SpectralField<T>> {
    let eh = transform.forward_real(&eta.values)?;
    let ph = transform.forward_real(&phi.values)?;
    let g = eh.grid;
    let i = Complex::new(T::zero(), T::one());
    Ok(SpectralField::from_fn(g, |k| {
        eh.values[k] + i * ph.values[k] * params.alpha_abs(g.wavenumber_norm(k))
    }))
}
