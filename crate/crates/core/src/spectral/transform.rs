use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{Grid, SpectralField};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Planned forward/inverse transforms for one grid.
///
/// Planning is the expensive part; keep one of these around when
/// transforming many fields on the same grid.
#[derive(Clone)]
pub struct SpectralTransform<T: Real> {
    grid: Grid<T>,
    fwd_x: Arc<dyn Fft<T>>,
    inv_x: Arc<dyn Fft<T>>,
    fwd_y: Option<Arc<dyn Fft<T>>>,
    inv_y: Option<Arc<dyn Fft<T>>>,
}

impl<T: Real> std::fmt::Debug for SpectralTransform<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralTransform").field("grid", &self.grid).finish()
    }
}

#[inline]
fn sign<T: Real>(j: usize) -> T {
    if j.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}

impl<T: Real> SpectralTransform<T> {
    pub fn new(grid: Grid<T>) -> Self {
        let mut planner = FftPlanner::new();
        let (fwd_y, inv_y) = if grid.is_2d() {
            (
                Some(planner.plan_fft_forward(grid.ny())),
                Some(planner.plan_fft_inverse(grid.ny())),
            )
        } else {
            (None, None)
        };
        Self {
            fwd_x: planner.plan_fft_forward(grid.nx()),
            inv_x: planner.plan_fft_inverse(grid.nx()),
            fwd_y,
            inv_y,
            grid,
        }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    fn run(&self, data: &mut [Complex<T>], x: &Arc<dyn Fft<T>>, y: &Option<Arc<dyn Fft<T>>>) {
        let nx = self.grid.nx();
        let ny = self.grid.ny();
        x.process(data);
        if let Some(y) = y {
            let mut column = vec![Complex::new(T::zero(), T::zero()); ny];
            for jx in 0..nx {
                for jy in 0..ny {
                    column[jy] = data[jy * nx + jx];
                }
                y.process(&mut column);
                for jy in 0..ny {
                    data[jy * nx + jx] = column[jy];
                }
            }
        }
    }

    fn apply_sign(&self, data: &mut [Complex<T>]) {
        for (i, v) in data.iter_mut().enumerate() {
            let (jx, jy) = self.grid.split(i);
            *v = *v * sign::<T>(jx + jy);
        }
    }

    /// Coefficients of complex samples.
    pub fn forward(&self, samples: &[Complex<T>]) -> Result<SpectralField<T>> {
        if samples.len() != self.grid.len() {
            return Err(Error::Contract(format!(
                "forward transform expects {} samples, got {}",
                self.grid.len(),
                samples.len()
            )));
        }
        let mut data = samples.to_vec();
        self.run(&mut data, &self.fwd_x, &self.fwd_y);
        let scale = T::one() / T::from_count(self.grid.len());
        self.apply_sign(&mut data);
        data.iter_mut().for_each(|v| *v = *v * scale);
        Ok(SpectralField {
            grid: self.grid,
            values: data,
        })
    }

    /// Coefficients of real samples.
    pub fn forward_real(&self, samples: &[T]) -> Result<SpectralField<T>> {
        let data: Vec<_> = samples.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.forward(&data)
    }

    /// Complex samples of a coefficient field.
    pub fn inverse(&self, field: &SpectralField<T>) -> Result<Vec<Complex<T>>> {
        if field.grid != self.grid {
            return Err(Error::Contract("inverse transform on a foreign grid".into()));
        }
        let mut data = field.values.clone();
        self.apply_sign(&mut data);
        self.run(&mut data, &self.inv_x, &self.inv_y);
        Ok(data)
    }
}

/// One-shot forward transform; plans on every call.
pub fn dft_forward<T: Real>(grid: Grid<T>, samples: &[Complex<T>]) -> Result<SpectralField<T>> {
    SpectralTransform::new(grid).forward(samples)
}

/// One-shot inverse transform; plans on every call.
pub fn dft_inverse<T: Real>(field: &SpectralField<T>) -> Result<Vec<Complex<T>>> {
    SpectralTransform::new(field.grid).inverse(field)
}

/// `max |Im v| / max |v|`, or 0 for an all-zero vector.
pub fn imag_residue<T: Real>(values: &[Complex<T>]) -> T {
    let scale = values.iter().map(|c| c.norm()).fold(T::zero(), T::max);
    if scale == T::zero() {
        return T::zero();
    }
    values.iter().map(|c| c.im.abs()).fold(T::zero(), T::max) / scale
}
