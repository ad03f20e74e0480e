//! Error norms, convergence fits and wake diagnostics.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::forcing::ShipShape;
use crate::physics::PhysicalParams;
use crate::scalar::Real;
use crate::solver::Snapshot;
use crate::spectral::{RealField, SpectralTransform};

/// `||a - b||_2 / ||b||_2`.
pub fn relative_l2_error<T: Real>(a: &RealField<T>, b: &RealField<T>) -> Result<T> {
    if a.grid != b.grid {
        return Err(Error::Contract("fields live on different grids".into()));
    }
    let norm = b.norm_l2();
    if norm == T::zero() {
        return Err(Error::Domain {
            what: "relative_l2_error reference norm",
            value: 0.0,
        });
    }
    let diff = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        .sqrt();
    Ok(diff / norm)
}

/// Least-squares line through `(log dt, log error)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Root mean square of the log residuals.
    pub residual: T,
}

pub fn convergence_order<T: Real>(points: &[(T, T)]) -> Result<ConvergenceFit<T>> {
    if points.len() < 3 {
        return Err(Error::invalid("points", "a fit needs at least 3 points"));
    }
    if let Some(&(dt, e)) = points.iter().find(|(dt, e)| !(*dt > T::zero() && *e > T::zero())) {
        let value = if dt > T::zero() { e } else { dt };
        return Err(Error::Domain {
            what: "convergence_order",
            value: value.as_f64(),
        });
    }
    let n = T::from_count(points.len());
    let xs: Vec<T> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<T> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxx = xs.iter().map(|&x| (x - mx) * (x - mx)).sum::<T>();
    let sxy = xs.iter().zip(&ys).map(|(&x, &y)| (x - mx) * (y - my)).sum::<T>();
    if sxx == T::zero() {
        return Err(Error::invalid("points", "time steps must not all be equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum::<T>()
        / n)
        .sqrt();
    Ok(ConvergenceFit {
        slope,
        intercept,
        residual,
    })
}

/// Signed FFT bin `j` of an `n`-point transform, shifted so that the
/// output runs from `-n/2` to `n/2 - 1`.
fn shifted(j: usize, n: usize) -> usize {
    (j + n / 2) % n
}

/// `|S(kappa, f)|` of `eta(x, t)` for modes `exp(2 pi i (kappa x - f t))`,
/// with overlays `omega(|kappa|) / 2 pi` and `kappa U`.
#[derive(Clone, Debug)]
pub struct SpacetimeSpectrum<T> {
    /// Ascending wavenumbers (cycles/m).
    pub kappa: Vec<T>,
    /// Ascending frequencies (Hz).
    pub freq: Vec<T>,
    /// Row-major `[freq][kappa]`.
    pub magnitude: Vec<T>,
    pub dispersion: Vec<T>,
    pub speed_line: Vec<T>,
    pub dk: T,
    pub df: T,
}

/// Two-dimensional `(x, t)` transform of 1D snapshots.
///
/// The space direction is not windowed (the field is periodic); a Hann
/// window is applied in time.
pub fn spacetime_spectrum<T: Real>(
    snapshots: &[Snapshot<T>],
    params: &PhysicalParams<T>,
    u_inf: T,
) -> Result<SpacetimeSpectrum<T>> {
    let nt = snapshots.len();
    if nt < 16 {
        return Err(Error::invalid("snapshots", "need at least 16 snapshots"));
    }
    let grid = snapshots[0].eta.grid;
    if grid.is_2d() {
        return Err(Error::Contract("space-time spectra need 1D snapshots".into()));
    }
    if snapshots.iter().any(|s| s.eta.grid != grid) {
        return Err(Error::Contract("snapshots live on different grids".into()));
    }
    let dt = snapshots[1].t - snapshots[0].t;
    let uniform = snapshots
        .windows(2)
        .all(|w| ((w[1].t - w[0].t) - dt).abs() <= T::lit(1e-6) * dt.abs());
    if !(dt > T::zero()) || !uniform {
        return Err(Error::Contract("snapshots must be uniformly spaced in time".into()));
    }

    let nx = grid.nx();
    let transform = SpectralTransform::new(grid);
    let window = periodic_hann::<T>(nt);
    let wsum = window.iter().copied().sum::<T>();

    // data[k][n]: windowed spatial coefficient of mode k at time n
    let mut data = vec![Complex::new(T::zero(), T::zero()); nx * nt];
    for (n, snap) in snapshots.iter().enumerate() {
        let c = transform.forward_real(&snap.eta.values)?;
        for (k, v) in c.values.into_iter().enumerate() {
            data[k * nt + n] = v * (window[n] / wsum);
        }
    }
    // sum_n c(t_n) e^{+2 pi i f t_n}: an unnormalised inverse FFT
    let ifft = FftPlanner::new().plan_fft_inverse(nt);
    for row in data.chunks_exact_mut(nt) {
        ifft.process(row);
    }

    let mut magnitude = vec![T::zero(); nx * nt];
    for k in 0..nx {
        let kc = shifted(k, nx);
        for n in 0..nt {
            magnitude[shifted(n, nt) * nx + kc] = data[k * nt + n].norm();
        }
    }
    let dk = grid.dk();
    let df = T::one() / (T::from_count(nt) * dt);
    let kappa: Vec<T> = (0..nx).map(|i| T::lit(i as f64 - (nx / 2) as f64) * dk).collect();
    let freq: Vec<T> = (0..nt).map(|i| T::lit(i as f64 - (nt / 2) as f64) * df).collect();
    let dispersion = kappa.iter().map(|&k| params.omega_abs(k) / T::two_pi()).collect();
    let speed_line = kappa.iter().map(|&k| k * u_inf).collect();
    Ok(SpacetimeSpectrum {
        kappa,
        freq,
        magnitude,
        dispersion,
        speed_line,
        dk,
        df,
    })
}

impl<T: Real> SpacetimeSpectrum<T> {
    pub fn at(&self, fi: usize, ki: usize) -> T {
        self.magnitude[fi * self.kappa.len() + ki]
    }

    fn zero_kappa_index(&self) -> usize {
        self.kappa.len() / 2
    }

    fn zero_freq_index(&self) -> usize {
        self.freq.len() / 2
    }

    /// Largest magnitude over `f >= 0`, as `(kappa, f)`.
    pub fn peak(&self) -> (T, T) {
        let mut best = (T::neg_infinity(), 0, 0);
        for fi in self.zero_freq_index()..self.freq.len() {
            for ki in 0..self.kappa.len() {
                let m = self.at(fi, ki);
                if m > best.0 {
                    best = (m, fi, ki);
                }
            }
        }
        (self.kappa[best.2], self.freq[best.1])
    }

    /// For each `kappa >= 0`, the frequency `f >= 0` of largest magnitude.
    pub fn ridge(&self) -> Vec<(T, T)> {
        let f0 = self.zero_freq_index();
        (self.zero_kappa_index()..self.kappa.len())
            .map(|ki| {
                let fi = (f0..self.freq.len())
                    .max_by(|&a, &b| {
                        self.at(a, ki)
                            .partial_cmp(&self.at(b, ki))
                            .expect("finite magnitudes")
                    })
                    .expect("non-empty frequency axis");
                (self.kappa[ki], self.freq[fi])
            })
            .collect()
    }

    /// Wavenumbers `kappa >= 0` where the ridge leaves the line `f = kappa u`.
    ///
    /// The ridge touches the line where they are within one frequency bin;
    /// each maximal run of touching wavenumbers contributes its last
    /// wavenumber.
    pub fn speed_crossings(&self, u: T) -> Vec<T> {
        let ridge = self.ridge();
        let touch: Vec<bool> = ridge.iter().map(|&(k, f)| (f - k * u).abs() <= self.df).collect();
        let mut out = Vec::new();
        for i in 0..ridge.len() {
            let next = touch.get(i + 1).copied().unwrap_or(false);
            if touch[i] && !next {
                out.push(ridge[i].0);
            }
        }
        out
    }

    /// The connected interval of `kappa >= 0` containing `around` where the
    /// dispersion overlay and `f = kappa u` are within `bins` frequency bins.
    /// `None` when the curves are separated at `around`.
    pub fn overlay_coincidence(&self, u: T, around: T, bins: T) -> Option<(T, T)> {
        let k0 = self.zero_kappa_index();
        let close =
            |ki: usize| (self.dispersion[ki] - self.kappa[ki] * u).abs() <= bins * self.df;
        let start = (k0..self.kappa.len()).min_by(|&a, &b| {
            (self.kappa[a] - around)
                .abs()
                .partial_cmp(&(self.kappa[b] - around).abs())
                .expect("finite wavenumbers")
        })?;
        if !close(start) {
            return None;
        }
        let mut lo = start;
        while lo > k0 && close(lo - 1) {
            lo -= 1;
        }
        let mut hi = start;
        while hi + 1 < self.kappa.len() && close(hi + 1) {
            hi += 1;
        }
        Some((self.kappa[lo], self.kappa[hi]))
    }
}

/// Peak wavenumber of the wake segment `[ship_x - 2 L1 - window, ship_x - 2 L1)`.
///
/// The segment is de-meaned and Hann-tapered; the zero mode is excluded.
/// The resolution is `1 / window`.
pub fn dominant_wake_wavenumber<T: Real>(
    eta: &RealField<T>,
    ship_x: T,
    shape: &ShipShape<T>,
    window: T,
) -> Result<T> {
    let line = eta.centerline();
    let grid = line.grid;
    let upper = -T::lit(2.0) * shape.length;
    let lower = upper - window;
    let mut pts: Vec<(T, T)> = (0..grid.nx())
        .filter_map(|j| {
            let d = grid.periodic_offset(grid.x(j), ship_x);
            (d >= lower && d < upper).then_some((d, line.values[j]))
        })
        .collect();
    if pts.len() < 4 {
        return Err(Error::Configuration(format!(
            "wake window holds {} samples; at least 4 are needed",
            pts.len()
        )));
    }
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite offsets"));
    let n = pts.len();
    let mean = pts.iter().map(|p| p.1).sum::<T>() / T::from_count(n);
    let taper = periodic_hann::<T>(n);
    let mut buf: Vec<Complex<T>> = pts
        .iter()
        .zip(&taper)
        .map(|(p, &w)| Complex::new((p.1 - mean) * w, T::zero()))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let best = (1..=n / 2)
        .max_by(|&a, &b| buf[a].norm().partial_cmp(&buf[b].norm()).expect("finite"))
        .expect("n >= 4");
    Ok(T::from_count(best) / (T::from_count(n) * grid.dx()))
}

/// Hann window that is periodic over `n` samples (exact for on-bin tones).
fn periodic_hann<T: Real>(n: usize) -> Vec<T> {
    let nn = T::from_count(n);
    (0..n)
        .map(|i| T::lit(0.5) * (T::one() - (T::two_pi() * T::from_count(i) / nn).cos()))
        .collect()
}

/// Fraction of the wake energy behind the ship lying outside the cone
/// `|y| <= tan(phi_star) (ship_x - x)`.
///
/// Points within `exclusion_radius` behind the ship are ignored; "behind"
/// uses the periodic offset from the ship. Returns 0 when the region holds
/// no energy.
pub fn wake_cone_energy_fraction<T: Real>(
    eta: &RealField<T>,
    ship_x: T,
    phi_star: T,
    exclusion_radius: T,
) -> Result<T> {
    let grid = eta.grid;
    if !grid.is_2d() {
        return Err(Error::Contract("cone containment needs a 2D field".into()));
    }
    let slope = phi_star.tan();
    let (mut total, mut outside) = (T::zero(), T::zero());
    for (i, &v) in eta.values.iter().enumerate() {
        let (jx, jy) = grid.split(i);
        let d = grid.periodic_offset(grid.x(jx), ship_x);
        if d >= -exclusion_radius {
            continue;
        }
        let e = v * v;
        total = total + e;
        if grid.y(jy).abs() > slope * (-d) {
            outside = outside + e;
        }
    }
    Ok(if total > T::zero() { outside / total } else { T::zero() })
}
