//! Two-layer dispersion relation and the quantities derived from it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Below this argument `sigma * coth(sigma)` is evaluated by its series.
const SMALL_SIGMA: f64 = 1e-6;

/// Iteration cap for bracketing and bisection.
const MAX_ITER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layer {
    Top,
    Bottom,
}

/// Densities (kg/m^3), layer depths (m) and gravity (m/s^2).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams<T> {
    pub rho1: T,
    pub rho2: T,
    pub h1: T,
    pub h2: T,
    pub g: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WakeRegime {
    Subcritical,
    Supercritical,
    Critical,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WakeGeometry<T> {
    pub regime: WakeRegime,
    /// Critical wavenumber `r*` (cycles/m), subcritical only.
    pub transverse_wavenumber: Option<T>,
    /// Cone half-angle `phi*` (rad), supercritical only.
    pub limit_angle: Option<T>,
}

/// `sigma * coth(sigma)` for `sigma >= 0`, continuous at 0.
pub fn sigma_coth<T: Real>(sigma: T) -> T {
    if sigma < T::lit(SMALL_SIGMA) {
        T::one() + sigma * sigma / T::lit(3.0)
    } else {
        sigma / sigma.tanh()
    }
}

impl<T: Real> PhysicalParams<T> {
    /// Validated constructor.
    pub fn new(rho1: T, rho2: T, h1: T, h2: T, g: T) -> Result<Self> {
        let p = Self {
            rho1,
            rho2,
            h1,
            h2,
            g,
        };
        p.validate()?;
        Ok(p)
    }

    /// Fresh water over salt water, 1 m over 6 m.
    pub fn fjord() -> Self {
        Self {
            rho1: T::lit(999.0),
            rho2: T::lit(1022.3),
            h1: T::one(),
            h2: T::lit(6.0),
            g: T::lit(9.81),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.rho1, self.rho2, self.h1, self.h2, self.g]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("params", "all parameters must be finite"));
        }
        if !(self.rho1 > T::zero()) {
            return Err(Error::invalid("rho1", "must be positive"));
        }
        if !(self.rho1 < self.rho2) {
            return Err(Error::invalid("rho1", "requires rho1 < rho2"));
        }
        if !(self.h1 > T::zero()) {
            return Err(Error::invalid("h1", "must be positive"));
        }
        if !(self.h2 > T::zero()) {
            return Err(Error::invalid("h2", "must be positive"));
        }
        if !(self.g > T::zero()) {
            return Err(Error::invalid("g", "must be positive"));
        }
        Ok(())
    }

    /// Reduced gravity times density jump, `(rho2 - rho1) g`.
    #[inline]
    pub fn buoyancy(&self) -> T {
        (self.rho2 - self.rho1) * self.g
    }

    /// `rho_j coth(2 pi s h_j)`.
    pub fn layer_coth(&self, s: T, layer: Layer) -> Result<T> {
        if !(s > T::zero()) {
            return Err(Error::Domain {
                what: "layer_coth",
                value: s.as_f64(),
            });
        }
        let (rho, h) = match layer {
            Layer::Top => (self.rho1, self.h1),
            Layer::Bottom => (self.rho2, self.h2),
        };
        let sigma = T::two_pi() * s * h;
        Ok(rho * sigma_coth(sigma) / sigma)
    }

    /// `2 pi s (T1 + T2)`, finite and positive for all `s >= 0`.
    fn stiffness(&self, s: T) -> T {
        let tp = T::two_pi() * s;
        self.rho1 / self.h1 * sigma_coth(tp * self.h1) + self.rho2 / self.h2 * sigma_coth(tp * self.h2)
    }

    /// Phase speed at `|s|`, with the value `U_c` at `s = 0`.
    #[inline]
    fn phase_velocity_abs(&self, s: T) -> T {
        (self.buoyancy() / self.stiffness(s.abs())).sqrt()
    }

    /// Angular frequency at `|s|`. Infallible variant of [`omega`](Self::omega)
    /// for wavenumber loops.
    #[inline]
    pub fn omega_abs(&self, s: T) -> T {
        let s = s.abs();
        T::two_pi() * s * self.phase_velocity_abs(s)
    }

    /// Dispersion relation `omega(s)` (rad/s), `s` in cycles/m.
    pub fn omega(&self, s: T) -> Result<T> {
        if s < T::zero() || s.is_nan() {
            return Err(Error::Domain {
                what: "omega",
                value: s.as_f64(),
            });
        }
        Ok(self.omega_abs(s))
    }

    /// `omega(s) / (2 pi s)`.
    pub fn phase_velocity(&self, s: T) -> Result<T> {
        if !(s > T::zero()) {
            return Err(Error::Domain {
                what: "phase_velocity",
                value: s.as_f64(),
            });
        }
        Ok(self.phase_velocity_abs(s))
    }

    /// Long-wave limit of the phase velocity.
    pub fn critical_speed(&self) -> T {
        (self.buoyancy() / (self.rho1 / self.h1 + self.rho2 / self.h2)).sqrt()
    }

    /// `alpha = omega / ((rho2 - rho1) g)`, the weight of `phi` in `mu`.
    #[inline]
    pub fn alpha_abs(&self, s: T) -> T {
        self.omega_abs(s) / self.buoyancy()
    }

    /// `2 pi rho1 / (sinh(2 pi s h1) (T1 + T2))`, extended to `s = 0`.
    ///
    /// The forcing is `i (kappa . U) e^{-2 pi i kappa . X} f_hat K(|kappa|)`.
    pub fn forcing_kernel(&self, s: T) -> T {
        let s = s.abs();
        let a = T::two_pi() * s * self.h1;
        let b = T::two_pi() * s * self.h2;
        // sinh(a) (T1 + T2) = cosh(a) (rho1 + rho2 tanh(a) / tanh(b))
        let ratio = if b > T::zero() {
            a.tanh() / b.tanh()
        } else {
            self.h1 / self.h2
        };
        let e = (-a).exp();
        let sech = (e + e) / (T::one() + e * e);
        T::two_pi() * self.rho1 * sech / (self.rho1 + self.rho2 * ratio)
    }

    /// Envelope `N(s) = s K(s)` bounding the forcing per unit speed and hull amplitude.
    pub fn forcing_envelope(&self, s: T) -> Result<T> {
        if !(s > T::zero()) {
            return Err(Error::Domain {
                what: "forcing_envelope",
                value: s.as_f64(),
            });
        }
        Ok(s * self.forcing_kernel(s))
    }

    /// The unique `s*` with `v_p(s*) = ux`, or `None` when `ux >= U_c`.
    pub fn critical_wavenumber(&self, ux: T, tol: T) -> Result<Option<T>> {
        if !(ux > T::zero()) {
            return Err(Error::invalid("ux", "must be positive"));
        }
        if !(tol > T::zero()) {
            return Err(Error::invalid("tol", "must be positive"));
        }
        if ux >= self.critical_speed() {
            return Ok(None);
        }
        let vp = |s: T| self.phase_velocity_abs(s);
        let two = T::lit(2.0);

        let (mut lo, mut hi) = (T::one(), T::one());
        let mut expansions = 0;
        while vp(hi) > ux {
            hi = hi * two;
            expansions += 1;
            if expansions > 4 * MAX_ITER || !hi.is_finite() {
                return Err(Error::NotConverged {
                    what: "critical_wavenumber bracket",
                    iterations: expansions,
                });
            }
        }
        while vp(lo) < ux {
            lo = lo / two;
            expansions += 1;
            if expansions > 4 * MAX_ITER || lo == T::zero() {
                return Err(Error::NotConverged {
                    what: "critical_wavenumber bracket",
                    iterations: expansions,
                });
            }
        }

        // Bisect until the bracket collapses; the tolerance is checked last.
        for _ in 0..MAX_ITER {
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if vp(mid) > ux {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let best = if (vp(lo) - ux).abs() < (vp(hi) - ux).abs() { lo } else { hi };
        if (vp(best) - ux).abs() <= tol * ux {
            Ok(Some(best))
        } else {
            Err(Error::NotConverged {
                what: "critical_wavenumber",
                iterations: MAX_ITER,
            })
        }
    }

    /// Angle `theta(r) = arccos(v_p(r) / ux)` of the singularity curve, when defined.
    pub fn singularity_angle(&self, ux: T, r: T) -> Result<Option<T>> {
        if !(ux > T::zero()) {
            return Err(Error::invalid("ux", "must be positive"));
        }
        let vp = self.phase_velocity(r)?;
        Ok((vp <= ux).then(|| (vp / ux).acos()))
    }

    /// Regime classification for a ship moving at `ux`.
    pub fn wake_geometry(&self, ux: T) -> Result<WakeGeometry<T>> {
        if !(ux > T::zero()) {
            return Err(Error::invalid("ux", "must be positive"));
        }
        let uc = self.critical_speed();
        let geometry = if ux < uc {
            let tol = T::lit(64.0) * T::epsilon();
            WakeGeometry {
                regime: WakeRegime::Subcritical,
                transverse_wavenumber: self.critical_wavenumber(ux, tol)?,
                limit_angle: None,
            }
        } else if ux > uc {
            WakeGeometry {
                regime: WakeRegime::Supercritical,
                transverse_wavenumber: None,
                limit_angle: Some((uc / ux).asin()),
            }
        } else {
            WakeGeometry {
                regime: WakeRegime::Critical,
                transverse_wavenumber: None,
                limit_angle: None,
            }
        };
        Ok(geometry)
    }
}
