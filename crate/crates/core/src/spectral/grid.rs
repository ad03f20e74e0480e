use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Periodic lattice on `[-Lx/2, Lx/2) x [-Ly/2, Ly/2)`.
///
/// 1D grids have `ny = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr<T>", into = "GridRepr<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Grid<T> {
    lx: T,
    nx: usize,
    ly: Option<T>,
    ny: usize,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
struct GridRepr<T> {
    dim: u8,
    #[serde(rename = "Lx")]
    lx: T,
    #[serde(rename = "Nx")]
    nx: usize,
    #[serde(rename = "Ly", default, skip_serializing_if = "Option::is_none")]
    ly: Option<T>,
    #[serde(rename = "Ny", default, skip_serializing_if = "Option::is_none")]
    ny: Option<usize>,
}

impl<T: Real> TryFrom<GridRepr<T>> for Grid<T> {
    type Error = Error;

    fn try_from(r: GridRepr<T>) -> Result<Self> {
        match (r.dim, r.ly, r.ny) {
            (1, None, None) => Grid::new_1d(r.lx, r.nx),
            (2, Some(ly), Some(ny)) => Grid::new_2d(r.lx, r.nx, ly, ny),
            _ => Err(Error::invalid("grid", "dim must be 1 (no Ly/Ny) or 2 (with Ly/Ny)")),
        }
    }
}

impl<T: Real> From<Grid<T>> for GridRepr<T> {
    fn from(g: Grid<T>) -> Self {
        GridRepr {
            dim: g.dim() as u8,
            lx: g.lx,
            nx: g.nx,
            ly: g.ly,
            ny: g.ly.map(|_| g.ny),
        }
    }
}

fn check_axis<T: Real>(name: &'static str, l: T, n: usize) -> Result<()> {
    if !(l > T::zero()) || !l.is_finite() {
        return Err(Error::invalid(name, "domain length must be positive"));
    }
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::invalid(name, format!("sample count {n} must be even and >= 4")));
    }
    Ok(())
}

#[inline]
fn signed_index(j: usize, n: usize) -> isize {
    if j < n / 2 {
        j as isize
    } else {
        j as isize - n as isize
    }
}

impl<T: Real> Grid<T> {
    pub fn new_1d(lx: T, nx: usize) -> Result<Self> {
        check_axis("Lx/Nx", lx, nx)?;
        Ok(Self {
            lx,
            nx,
            ly: None,
            ny: 1,
        })
    }

    pub fn new_2d(lx: T, nx: usize, ly: T, ny: usize) -> Result<Self> {
        check_axis("Lx/Nx", lx, nx)?;
        check_axis("Ly/Ny", ly, ny)?;
        Ok(Self {
            lx,
            nx,
            ly: Some(ly),
            ny,
        })
    }

    pub fn dim(&self) -> usize {
        if self.ly.is_some() {
            2
        } else {
            1
        }
    }

    pub fn is_2d(&self) -> bool {
        self.ly.is_some()
    }

    pub fn lx(&self) -> T {
        self.lx
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ly(&self) -> Option<T> {
        self.ly
    }

    /// Samples along y; 1 for 1D grids.
    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> T {
        self.lx / T::from_count(self.nx)
    }

    pub fn dy(&self) -> Option<T> {
        self.ly.map(|ly| ly / T::from_count(self.ny))
    }

    /// Domain measure: `Lx` in 1D, `Lx Ly` in 2D.
    pub fn measure(&self) -> T {
        self.lx * self.ly.unwrap_or(T::one())
    }

    /// Wavenumber spacing along x, `1 / Lx`.
    pub fn dk(&self) -> T {
        T::one() / self.lx
    }

    pub fn x(&self, jx: usize) -> T {
        -self.lx / T::lit(2.0) + T::from_count(jx) * self.dx()
    }

    /// Sample coordinate along y; 0 in 1D.
    pub fn y(&self, jy: usize) -> T {
        match self.ly {
            Some(ly) => -ly / T::lit(2.0) + T::from_count(jy) * ly / T::from_count(self.ny),
            None => T::zero(),
        }
    }

    /// Flat index to `(jx, jy)`.
    #[inline]
    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    /// Signed mode numbers `(mx, my)` of a flat spectral index.
    #[inline]
    pub fn mode(&self, idx: usize) -> (isize, isize) {
        let (jx, jy) = self.split(idx);
        (signed_index(jx, self.nx), signed_index(jy, self.ny))
    }

    /// Wavenumber `(kappa_x, kappa_y)` in cycles/m of a flat spectral index.
    #[inline]
    pub fn wavenumber(&self, idx: usize) -> (T, T) {
        let (mx, my) = self.mode(idx);
        let kx = T::lit(mx as f64) / self.lx;
        let ky = match self.ly {
            Some(ly) => T::lit(my as f64) / ly,
            None => T::zero(),
        };
        (kx, ky)
    }

    /// `|kappa|` of a flat spectral index.
    #[inline]
    pub fn wavenumber_norm(&self, idx: usize) -> T {
        let (kx, ky) = self.wavenumber(idx);
        kx.hypot(ky)
    }

    /// Flat index of `-kappa`.
    #[inline]
    pub fn neg_index(&self, idx: usize) -> usize {
        let (jx, jy) = self.split(idx);
        let nx = (self.nx - jx) % self.nx;
        let ny = (self.ny - jy) % self.ny;
        ny * self.nx + nx
    }

    /// True on the unpaired `m = -N/2` rows of either axis.
    #[inline]
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let (jx, jy) = self.split(idx);
        jx == self.nx / 2 || (self.is_2d() && jy == self.ny / 2)
    }

    /// Signed x-offset from `origin` folded into `[-Lx/2, Lx/2)`.
    pub fn periodic_offset(&self, x: T, origin: T) -> T {
        let d = x - origin;
        d - self.lx * ((d + self.lx / T::lit(2.0)) / self.lx).floor()
    }
}
