//! Hull spectrum, ship trajectory and the forcing term `g_hat(t)`.

use std::io::Read;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physics::PhysicalParams;
use crate::scalar::Real;
use crate::spectral::{Grid, SpectralField};

/// Gaussian hull `f(x, y) = -T exp(-18 (x/L1)^2) exp(-18 (y/L2)^2)`.
///
/// In 1D the beam factor is dropped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShipShape<T> {
    pub draft: T,
    pub length: T,
    pub beam: T,
}

impl<T: Real> Default for ShipShape<T> {
    /// 2 cm draft, 10 m by 10 m.
    fn default() -> Self {
        Self {
            draft: T::lit(0.02),
            length: T::lit(10.0),
            beam: T::lit(10.0),
        }
    }
}

/// Continuum transform of `exp(-18 (x/l)^2)`.
#[inline]
fn gaussian_hat<T: Real>(l: T, k: T) -> T {
    let c = T::PI() / T::lit(18.0);
    l * c.sqrt() * (-T::PI() * c * l * l * k * k).exp()
}

impl<T: Real> ShipShape<T> {
    pub fn new(draft: T, length: T, beam: T) -> Result<Self> {
        for (name, v) in [("draft", draft), ("length", length), ("beam", beam)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::invalid(name, "must be positive"));
            }
        }
        Ok(Self {
            draft,
            length,
            beam,
        })
    }

    /// Hull depth at `(x, y)` relative to the ship centre (`y` ignored in 1D).
    pub fn profile(&self, x: T, y: T, two_d: bool) -> T {
        let k = T::lit(18.0);
        let fx = (-k * (x / self.length).powi(2)).exp();
        let fy = if two_d {
            (-k * (y / self.beam).powi(2)).exp()
        } else {
            T::one()
        };
        -self.draft * fx * fy
    }

    /// Continuum Fourier transform `int f(x) e^{-2 pi i kappa x} dx` at `(kx, ky)`.
    pub fn continuum_transform(&self, kx: T, ky: T, two_d: bool) -> T {
        let fy = if two_d {
            gaussian_hat(self.beam, ky)
        } else {
            T::one()
        };
        -self.draft * gaussian_hat(self.length, kx) * fy
    }
}

/// Hull coefficients on `grid`, in the DFT scaling of [`crate::spectral`].
///
/// This is the continuum transform divided by the domain measure, i.e. the
/// exact coefficient of the periodised hull (up to the aliasing of an
/// already negligible Gaussian tail).
pub fn ship_transform<T: Real>(shape: &ShipShape<T>, grid: &Grid<T>) -> SpectralField<T> {
    let inv = T::one() / grid.measure();
    let two_d = grid.is_2d();
    SpectralField::from_fn(*grid, |i| {
        let (kx, ky) = grid.wavenumber(i);
        Complex::new(shape.continuum_transform(kx, ky, two_d) * inv, T::zero())
    })
}

/// Piecewise-linear speed table with the exact running integral.
#[derive(Clone, Debug, PartialEq)]
pub struct SpeedTable<T> {
    t: Vec<T>,
    u: Vec<T>,
    x: Vec<T>,
}

impl<T: Real> SpeedTable<T> {
    pub fn new(t: Vec<T>, u: Vec<T>) -> Result<Self> {
        if t.len() != u.len() || t.is_empty() {
            return Err(Error::invalid("profile", "needs matching, non-empty t and U columns"));
        }
        if t[0] != T::zero() {
            return Err(Error::invalid("profile", "table must start at t = 0"));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("profile", "times must be strictly increasing"));
        }
        if t.iter().chain(&u).any(|v| !v.is_finite()) {
            return Err(Error::invalid("profile", "values must be finite"));
        }
        let half = T::lit(0.5);
        let mut x = Vec::with_capacity(t.len());
        x.push(T::zero());
        for i in 1..t.len() {
            let prev = x[i - 1];
            x.push(prev + (t[i] - t[i - 1]) * (u[i] + u[i - 1]) * half);
        }
        Ok(Self { t, u, x })
    }

    /// Reads `(t, Ux)` rows; a non-numeric first row is taken as a header.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let (mut t, mut u) = (Vec::new(), Vec::new());
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != 2 {
                return Err(Error::invalid("profile", format!("row {} must have two columns", row + 1)));
            }
            let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
            match parsed {
                (Ok(a), Ok(b)) => {
                    t.push(T::lit(a));
                    u.push(T::lit(b));
                }
                _ if row == 0 => continue,
                _ => {
                    return Err(Error::invalid("profile", format!("row {} is not numeric", row + 1)))
                }
            }
        }
        Self::new(t, u)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    /// Segment containing `t`, or `None` beyond the table.
    fn segment(&self, t: T) -> Option<usize> {
        let last = self.t.len() - 1;
        if t >= self.t[last] {
            return None;
        }
        Some(self.t.partition_point(|&ti| ti <= t).saturating_sub(1))
    }

    pub fn speed(&self, t: T) -> T {
        let t = t.max(T::zero());
        match self.segment(t) {
            Some(i) => {
                let w = (t - self.t[i]) / (self.t[i + 1] - self.t[i]);
                self.u[i] + w * (self.u[i + 1] - self.u[i])
            }
            None => *self.u.last().expect("non-empty"),
        }
    }

    pub fn position(&self, t: T) -> T {
        let t = t.max(T::zero());
        match self.segment(t) {
            Some(i) => {
                let dt = t - self.t[i];
                let u = self.speed(t);
                self.x[i] + dt * (self.u[i] + u) * T::lit(0.5)
            }
            None => {
                let last = self.t.len() - 1;
                self.x[last] + (t - self.t[last]) * self.u[last]
            }
        }
    }

    pub fn end_time(&self) -> T {
        *self.t.last().expect("non-empty")
    }
}

/// Ship speed `U(t)` along `+x` and position `X(t) = int_0^t U`.
#[derive(Clone, Debug, PartialEq)]
pub enum SpeedProfile<T> {
    Constant { speed: T },
    /// `U(t) = U_inf (1 - e^{-a t})`.
    ExponentialRamp { terminal: T, rate: T },
    /// Linear interpolation; the last speed is held beyond the table.
    Tabulated(SpeedTable<T>),
}

impl<T: Real> SpeedProfile<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            SpeedProfile::Constant { speed } if !speed.is_finite() => {
                Err(Error::invalid("speed", "must be finite"))
            }
            SpeedProfile::ExponentialRamp { terminal, rate } => {
                if !terminal.is_finite() {
                    Err(Error::invalid("terminal", "must be finite"))
                } else if !(*rate > T::zero()) || !rate.is_finite() {
                    Err(Error::invalid("rate", "must be positive"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn speed(&self, t: T) -> T {
        match self {
            SpeedProfile::Constant { speed } => *speed,
            SpeedProfile::ExponentialRamp { terminal, rate } => {
                -*terminal * (-*rate * t).exp_m1()
            }
            SpeedProfile::Tabulated(table) => table.speed(t),
        }
    }

    pub fn position(&self, t: T) -> T {
        match self {
            SpeedProfile::Constant { speed } => *speed * t,
            SpeedProfile::ExponentialRamp { terminal, rate } => {
                *terminal * (t + (-*rate * t).exp_m1() / *rate)
            }
            SpeedProfile::Tabulated(table) => table.position(t),
        }
    }

    /// Largest speed reached (the terminal speed for a ramp).
    pub fn max_speed(&self) -> T {
        match self {
            SpeedProfile::Constant { speed } => *speed,
            SpeedProfile::ExponentialRamp { terminal, .. } => *terminal,
            SpeedProfile::Tabulated(table) => table.u.iter().copied().fold(T::zero(), T::max),
        }
    }
}

/// Everything needed to evaluate `g_hat_kappa(t)` on a grid.
///
/// The time-independent part `K(|kappa|) f_hat_kappa` is precomputed; each
/// evaluation costs one complex exponential per mode.
#[derive(Clone, Debug)]
pub struct ForcingContext<T> {
    params: PhysicalParams<T>,
    shape: ShipShape<T>,
    profile: SpeedProfile<T>,
    grid: Grid<T>,
    envelope: Vec<T>,
    horizon: Option<T>,
}

impl<T: Real> ForcingContext<T> {
    pub fn new(
        params: PhysicalParams<T>,
        shape: ShipShape<T>,
        profile: SpeedProfile<T>,
        grid: Grid<T>,
    ) -> Self {
        let hull = ship_transform(&shape, &grid);
        let envelope = (0..grid.len())
            .map(|i| {
                if grid.is_nyquist(i) {
                    T::zero()
                } else {
                    params.forcing_kernel(grid.wavenumber_norm(i)) * hull.values[i].re
                }
            })
            .collect();
        Self {
            params,
            shape,
            profile,
            grid,
            envelope,
            horizon: None,
        }
    }

    /// Restricts the speed to be known only up to time `t`, as for a ship
    /// whose speed is measured live.
    pub fn with_horizon(mut self, t: T) -> Self {
        self.horizon = Some(t);
        self
    }

    pub fn params(&self) -> &PhysicalParams<T> {
        &self.params
    }

    pub fn shape(&self) -> &ShipShape<T> {
        &self.shape
    }

    pub fn profile(&self) -> &SpeedProfile<T> {
        &self.profile
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn horizon(&self) -> Option<T> {
        self.horizon
    }

    /// `(U(t), X(t))`, failing past the horizon.
    pub fn kinematics(&self, t: T) -> Result<(T, T)> {
        if let Some(h) = self.horizon {
            if t > h {
                return Err(Error::Capability(format!(
                    "ship speed at t = {} is beyond the known horizon {}",
                    t.as_f64(),
                    h.as_f64()
                )));
            }
        }
        Ok((self.profile.speed(t), self.profile.position(t)))
    }

    /// `g_hat` at one mode for given kinematics.
    #[inline]
    pub fn mode(&self, idx: usize, speed: T, position: T) -> Complex<T> {
        let e = self.envelope[idx];
        if e == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        let (kx, _) = self.grid.wavenumber(idx);
        let amp = kx * speed * e;
        let phase = Complex::from_polar(T::one(), -T::two_pi() * kx * position);
        // i * amp * phase
        Complex::new(-amp * phase.im, amp * phase.re)
    }

    /// Full forcing field at time `t`.
    pub fn forcing_hat(&self, t: T) -> Result<SpectralField<T>> {
        let (u, x) = self.kinematics(t)?;
        Ok(SpectralField::from_fn(self.grid, |i| self.mode(i, u, x)))
    }
}

/// `g_hat_kappa(t)` for the given setup.
pub fn forcing_hat<T: Real>(
    params: &PhysicalParams<T>,
    shape: &ShipShape<T>,
    profile: &SpeedProfile<T>,
    grid: &Grid<T>,
    t: T,
) -> SpectralField<T> {
    ForcingContext::new(*params, *shape, profile.clone(), *grid)
        .forcing_hat(t)
        .expect("no horizon set")
}

/// `D_kappa = g_hat_kappa(0)` for a ship at constant speed `ux`.
///
/// Then `g_hat_kappa(t) = D_kappa e^{-2 pi i kappa_x ux t}`.
pub fn stationary_coefficient<T: Real>(
    params: &PhysicalParams<T>,
    shape: &ShipShape<T>,
    ux: T,
    grid: &Grid<T>,
) -> SpectralField<T> {
    forcing_hat(params, shape, &SpeedProfile::Constant { speed: ux }, grid, T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralTransform;
    use std::f64::consts::PI;

    fn fjord() -> PhysicalParams<f64> {
        PhysicalParams::fjord()
    }

    #[test]
    fn hull_transform_at_zero() {
        let s = ShipShape::<f64>::default();
        let v = s.continuum_transform(0.0, 0.0, false);
        assert!((v - (-0.02 * 10.0 * (PI / 18.0).sqrt())).abs() < 1e-16);
        for k in [0.01, 0.1, 0.37] {
            assert_eq!(s.continuum_transform(k, 0.0, false), s.continuum_transform(-k, 0.0, false));
            assert!(s.continuum_transform(k, 0.2, true) < 0.0);
        }
    }

    #[test]
    fn hull_transform_matches_sampled_dft() {
        let s = ShipShape::<f64>::default();
        let g = Grid::new_1d(4000.0, 8192).unwrap();
        let sampled: Vec<f64> = (0..g.len()).map(|j| s.profile(g.x(j), 0.0, false)).collect();
        let dft = SpectralTransform::new(g).forward_real(&sampled).unwrap();
        let closed = ship_transform(&s, &g);
        let kmax = g.nx() as f64 / (4.0 * g.lx());
        let scale = closed.values[0].norm();
        for i in 0..g.len() {
            if g.wavenumber(i).0.abs() <= kmax {
                assert!((dft.values[i] - closed.values[i]).norm() <= 1e-8 * scale);
            }
        }
    }

    #[test]
    fn profile_kinematics() {
        let c = SpeedProfile::Constant { speed: 0.43 };
        assert_eq!(c.position(10.0), 4.3);
        let r = SpeedProfile::<f64>::ExponentialRamp {
            terminal: 0.25,
            rate: 0.01,
        };
        assert_eq!(r.position(0.0), 0.0);
        assert!((r.speed(1e5) - 0.25).abs() < 1e-15);
        let t: f64 = 300.0;
        let expect = 0.25 * (t + ((-0.01 * t).exp() - 1.0) / 0.01);
        assert!((r.position(t) - expect).abs() < 1e-12);
        assert!(r.validate().is_ok());
        assert!(SpeedProfile::ExponentialRamp { terminal: 1.0, rate: 0.0 }.validate().is_err());
    }

    #[test]
    fn tabulated_interpolates_and_clamps() {
        let tab = SpeedTable::new(vec![0.0, 10.0, 20.0], vec![0.0, 1.0, 1.0]).unwrap();
        let p = SpeedProfile::Tabulated(tab);
        assert_eq!(p.speed(5.0), 0.5);
        assert_eq!(p.position(10.0), 5.0);
        assert_eq!(p.position(5.0), 1.25);
        assert_eq!(p.speed(30.0), 1.0);
        assert_eq!(p.position(30.0), 25.0);
        assert!(SpeedTable::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(SpeedTable::new(vec![1.0, 2.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn csv_table_with_header() {
        let text = "t_seconds,Ux_m_per_s\n0,0\n10, 0.5\n# comment\n20,0.5\n";
        let tab = SpeedTable::<f64>::from_csv_reader(text.as_bytes()).unwrap();
        assert_eq!(tab.end_time(), 20.0);
        assert_eq!(tab.position(20.0), 7.5);
        assert!(SpeedTable::<f64>::from_csv_reader("0,0\n1,x\n".as_bytes()).is_err());
        assert!(SpeedTable::<f64>::from_csv_reader("0,0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn forcing_vanishes_at_rest_and_at_zero_mode() {
        let p = fjord();
        let g = Grid::new_1d(500.0, 256).unwrap();
        let s = ShipShape::default();
        let rest = forcing_hat(&p, &s, &SpeedProfile::Constant { speed: 0.0 }, &g, 3.0);
        assert!(rest.values.iter().all(|v| v.norm() == 0.0));
        let moving = forcing_hat(&p, &s, &SpeedProfile::Constant { speed: 0.4 }, &g, 3.0);
        assert_eq!(moving.values[0].norm(), 0.0);
        assert!(moving.hermitian_defect() < 1e-14);
    }

    #[test]
    fn forcing_respects_envelope_bound() {
        let p = fjord();
        let g = Grid::new_2d(800.0, 64, 400.0, 32).unwrap();
        let s = ShipShape::default();
        let prof = SpeedProfile::ExponentialRamp {
            terminal: 0.7,
            rate: 0.02,
        };
        let hull = ship_transform(&s, &g);
        for t in [0.3, 17.0, 250.0] {
            let gh = forcing_hat(&p, &s, &prof, &g, t);
            let u = prof.speed(t);
            for i in 1..g.len() {
                let bound = p.forcing_envelope(g.wavenumber_norm(i)).unwrap() * u * hull.values[i].norm();
                assert!(gh.values[i].norm() <= bound * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn stationary_coefficient_generates_constant_speed_forcing() {
        let p = fjord();
        let g = Grid::new_1d(300.0, 128).unwrap();
        let s = ShipShape::default();
        let ux = 0.43;
        let d = stationary_coefficient(&p, &s, ux, &g);
        assert!(d.hermitian_defect() < 1e-15);
        for t in [0.7, 12.5, 99.0] {
            let gh = forcing_hat(&p, &s, &SpeedProfile::Constant { speed: ux }, &g, t);
            for i in 0..g.len() {
                let k = g.wavenumber(i).0;
                let expect = d.values[i] * Complex::from_polar(1.0, -2.0 * PI * k * ux * t);
                assert!((gh.values[i] - expect).norm() <= 1e-12 * d.values[i].norm().max(1e-300));
            }
        }
        let zero = stationary_coefficient(&p, &s, 0.0, &g);
        assert!(zero.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn horizon_limits_kinematics() {
        let ctx = ForcingContext::new(
            fjord(),
            ShipShape::default(),
            SpeedProfile::Constant { speed: 0.3 },
            Grid::new_1d(100.0, 16).unwrap(),
        )
        .with_horizon(5.0);
        assert!(ctx.kinematics(5.0).is_ok());
        assert!(matches!(ctx.kinematics(5.5), Err(Error::Capability(_))));
    }
}
