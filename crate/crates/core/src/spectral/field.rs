use num_complex::Complex;

use super::Grid;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Complex coefficients indexed by discrete wavenumber.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField<T> {
    pub grid: Grid<T>,
    pub values: Vec<Complex<T>>,
}

/// Real samples on the grid points.
#[derive(Clone, Debug, PartialEq)]
pub struct RealField<T> {
    pub grid: Grid<T>,
    pub values: Vec<T>,
}

fn check_len<T: Real>(grid: &Grid<T>, len: usize) -> Result<()> {
    if grid.len() != len {
        return Err(Error::Contract(format!(
            "expected {} values for the grid, got {len}",
            grid.len()
        )));
    }
    Ok(())
}

impl<T: Real> SpectralField<T> {
    pub fn new(grid: Grid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        check_len(&grid, values.len())?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        Self {
            values: vec![Complex::new(T::zero(), T::zero()); grid.len()],
            grid,
        }
    }

    /// Evaluates `f(idx)` at every wavenumber index.
    pub fn from_fn(grid: Grid<T>, f: impl Fn(usize) -> Complex<T>) -> Self {
        Self {
            values: (0..grid.len()).map(f).collect(),
            grid,
        }
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm_l2(&self) -> T {
        self.values.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn zero_nyquist(&mut self) {
        let grid = self.grid;
        for (i, v) in self.values.iter_mut().enumerate() {
            if grid.is_nyquist(i) {
                *v = Complex::new(T::zero(), T::zero());
            }
        }
    }

    /// Largest `|c(-kappa) - conj(c(kappa))|` relative to the largest `|c|`.
    pub fn hermitian_defect(&self) -> T {
        let scale = self.values.iter().map(|c| c.norm()).fold(T::zero(), T::max);
        if scale == T::zero() {
            return T::zero();
        }
        let defect = (0..self.values.len())
            .filter(|&i| !self.grid.is_nyquist(i))
            .map(|i| (self.values[self.grid.neg_index(i)] - self.values[i].conj()).norm())
            .fold(T::zero(), T::max);
        defect / scale
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl<T: Real> RealField<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        check_len(&grid, values.len())?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        Self {
            values: vec![T::zero(); grid.len()],
            grid,
        }
    }

    /// Samples `f(x, y)` on the grid points (`y = 0` in 1D).
    pub fn from_fn(grid: Grid<T>, f: impl Fn(T, T) -> T) -> Self {
        let values = (0..grid.len())
            .map(|i| {
                let (jx, jy) = grid.split(i);
                f(grid.x(jx), grid.y(jy))
            })
            .collect();
        Self { grid, values }
    }

    pub fn norm_l2(&self) -> T {
        self.values.iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    /// The `y = 0` row of a 2D field (the field itself in 1D).
    pub fn centerline(&self) -> RealField<T> {
        if !self.grid.is_2d() {
            return self.clone();
        }
        let nx = self.grid.nx();
        let row = self.grid.ny() / 2;
        let grid = Grid::new_1d(self.grid.lx(), nx).expect("x axis already validated");
        RealField {
            grid,
            values: self.values[row * nx..(row + 1) * nx].to_vec(),
        }
    }
}
