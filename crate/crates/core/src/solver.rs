//! Exponential integrator for `d mu/dt = i (omega + i eps) mu - g_hat(t)`
//! and the closed-form constant-speed solutions.
//!
//! One step reads `mu_{k+1} = e^{i omega_eps dt} (mu_k - Q_k)` where `Q_k`
//! approximates `int_0^dt e^{-i omega_eps tau} g_hat(t_k + tau) d tau`.
//! The homogeneous part is exact, so damping and phase speed of every mode
//! are reproduced without numerical error.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcing::{stationary_coefficient, ForcingContext, ShipShape};
use crate::physics::PhysicalParams;
use crate::scalar::Real;
use crate::spectral::{recover_eta, Grid, RealField, SpectralField, SpectralTransform};

/// Below this `|z| t` the removable singularity of the constant-speed
/// solution is evaluated by its series.
const SERIES_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureRule {
    /// First order; needs the speed at `t_k` only.
    #[default]
    Rectangle,
    Trapezoid,
    Simpson,
}

impl QuadratureRule {
    /// Nominal global order in `dt`.
    pub fn order(self) -> u32 {
        match self {
            QuadratureRule::Rectangle => 1,
            QuadratureRule::Trapezoid => 2,
            QuadratureRule::Simpson => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QuadratureRule::Rectangle => "rectangle",
            QuadratureRule::Trapezoid => "trapezoid",
            QuadratureRule::Simpson => "simpson",
        }
    }
}

impl std::str::FromStr for QuadratureRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rectangle" => Ok(QuadratureRule::Rectangle),
            "trapezoid" => Ok(QuadratureRule::Trapezoid),
            "simpson" => Ok(QuadratureRule::Simpson),
            other => Err(Error::invalid("rule", format!("unknown quadrature rule `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig<T> {
    pub dt: T,
    pub rule: QuadratureRule,
    /// Keep an `eta` snapshot every this many steps.
    pub snapshot_every: usize,
}

impl<T: Real> IntegratorConfig<T> {
    pub fn new(dt: T, rule: QuadratureRule, snapshot_every: usize) -> Result<Self> {
        let c = Self {
            dt,
            rule,
            snapshot_every,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::invalid("dt", "must be positive"));
        }
        if self.snapshot_every == 0 {
            return Err(Error::invalid("snapshot_every", "must be at least 1"));
        }
        Ok(())
    }
}

/// The evolved unknown at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState<T> {
    pub mu: SpectralField<T>,
    pub t: T,
    pub epsilon: T,
    pub step_index: usize,
}

impl<T: Real> SimState<T> {
    /// State at `t = 0`; the Nyquist modes of `mu` are cleared.
    pub fn new(mut mu: SpectralField<T>, epsilon: T) -> Result<Self> {
        if !(epsilon >= T::zero()) || !epsilon.is_finite() {
            return Err(Error::invalid("epsilon", "must be finite and nonnegative"));
        }
        mu.zero_nyquist();
        Ok(Self {
            mu,
            t: T::zero(),
            epsilon,
            step_index: 0,
        })
    }

    pub fn at_rest(grid: Grid<T>, epsilon: T) -> Result<Self> {
        Self::new(SpectralField::zeros(grid), epsilon)
    }
}

/// `e^{i (omega(s) + i eps) dt}`.
pub fn propagator<T: Real>(params: &PhysicalParams<T>, epsilon: T, s: T, dt: T) -> Complex<T> {
    Complex::from_polar((-epsilon * dt).exp(), params.omega_abs(s) * dt)
}

/// Kinematics needed by one step of a rule.
#[derive(Clone, Copy)]
struct StepKinematics<T> {
    start: (T, T),
    mid: Option<(T, T)>,
    end: Option<(T, T)>,
}

impl<T: Real> StepKinematics<T> {
    fn new(rule: QuadratureRule, forcing: &ForcingContext<T>, t: T, dt: T) -> Result<Self> {
        let half = T::lit(0.5);
        Ok(Self {
            start: forcing.kinematics(t)?,
            mid: match rule {
                QuadratureRule::Simpson => Some(forcing.kinematics(t + dt * half)?),
                _ => None,
            },
            end: match rule {
                QuadratureRule::Rectangle => None,
                _ => Some(forcing.kinematics(t + dt)?),
            },
        })
    }
}

/// Per-mode factors for a fixed `(dt, eps, rule)`.
/// The propagator is folded into the quadrature weights, so every cached
/// factor is `exp(i*omega_eps*tau)` with `tau >= 0`.
struct Stepper<T> {
    dt: T,
    rule: QuadratureRule,
    forward: Vec<Complex<T>>,
    forward_half: Vec<Complex<T>>,
}

impl<T: Real> Stepper<T> {
    fn new(params: &PhysicalParams<T>, grid: &Grid<T>, epsilon: T, dt: T, rule: QuadratureRule) -> Self {
        let omega: Vec<T> = (0..grid.len())
            .map(|i| params.omega_abs(grid.wavenumber_norm(i)))
            .collect();
        let at = |tau: T| -> Vec<Complex<T>> {
            omega
                .iter()
                .map(|&w| Complex::from_polar((-epsilon * tau).exp(), w * tau))
                .collect()
        };
        Self {
            dt,
            rule,
            forward: at(dt),
            forward_half: if rule == QuadratureRule::Simpson { at(dt * T::lit(0.5)) } else { Vec::new() },
        }
    }

    /// `P * Q` for mode `idx`, with `P` the one-step propagator.
    #[inline]
    fn propagated_quadrature(&self, forcing: &ForcingContext<T>, kin: &StepKinematics<T>, idx: usize) -> Complex<T> {
        let g = |(u, x): (T, T)| forcing.mode(idx, u, x);
        let g0 = self.forward[idx] * g(kin.start);
        match self.rule {
            QuadratureRule::Rectangle => g0 * self.dt,
            QuadratureRule::Trapezoid => {
                let g1 = g(kin.end.expect("trapezoid end point"));
                (g0 + g1) * (self.dt * T::lit(0.5))
            }
            QuadratureRule::Simpson => {
                let gh = g(kin.mid.expect("simpson mid point"));
                let g1 = g(kin.end.expect("simpson end point"));
                (g0 + self.forward_half[idx] * gh * T::lit(4.0) + g1) * (self.dt / T::lit(6.0))
            }
        }
    }

    fn advance(&self, state: &mut SimState<T>, forcing: &ForcingContext<T>, t_next: T) -> Result<()> {
        let kin = StepKinematics::new(self.rule, forcing, state.t, self.dt)?;
        let grid = state.mu.grid;
        state
            .mu
            .values
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, mu)| {
                *mu = if grid.is_nyquist(i) {
                    Complex::new(T::zero(), T::zero())
                } else {
                    self.forward[i] * *mu - self.propagated_quadrature(forcing, &kin, i)
                };
            });
        state.t = t_next;
        state.step_index += 1;
        if !state.mu.all_finite() {
            return Err(Error::Divergence {
                step: state.step_index,
            });
        }
        Ok(())
    }
}

/// `Q_{kappa, dt}(t_k)` for a single mode.
pub fn quadrature<T: Real>(
    rule: QuadratureRule,
    forcing: &ForcingContext<T>,
    idx: usize,
    epsilon: T,
    t_k: T,
    dt: T,
) -> Result<Complex<T>> {
    if !(dt > T::zero()) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let kin = StepKinematics::new(rule, forcing, t_k, dt)?;
    let params = forcing.params();
    let s = forcing.grid().wavenumber_norm(idx);
    let g = |(u, x): (T, T)| forcing.mode(idx, u, x);
    let g0 = g(kin.start);
    Ok(match rule {
        QuadratureRule::Rectangle => g0 * dt,
        QuadratureRule::Trapezoid => {
            let back = propagator(params, epsilon, s, -dt);
            (g0 + back * g(kin.end.expect("trapezoid end point"))) * (dt * T::lit(0.5))
        }
        QuadratureRule::Simpson => {
            let back = propagator(params, epsilon, s, -dt);
            let back_half = propagator(params, epsilon, s, -dt * T::lit(0.5));
            let gh = g(kin.mid.expect("simpson mid point"));
            let g1 = g(kin.end.expect("simpson end point"));
            (g0 + back_half * gh * T::lit(4.0) + back * g1) * (dt / T::lit(6.0))
        }
    })
}

/// One step of the scheme.
pub fn step<T: Real>(
    state: &SimState<T>,
    config: &IntegratorConfig<T>,
    forcing: &ForcingContext<T>,
) -> Result<SimState<T>> {
    config.validate()?;
    check_grid(state, forcing)?;
    let stepper = Stepper::new(forcing.params(), &state.mu.grid, state.epsilon, config.dt, config.rule);
    let mut next = state.clone();
    let t_next = state.t + config.dt;
    stepper.advance(&mut next, forcing, t_next)?;
    Ok(next)
}

fn check_grid<T: Real>(state: &SimState<T>, forcing: &ForcingContext<T>) -> Result<()> {
    if state.mu.grid != *forcing.grid() {
        return Err(Error::Contract("state and forcing live on different grids".into()));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Snapshot<T> {
    pub t: T,
    pub step: usize,
    pub eta: RealField<T>,
    /// Relative imaginary part discarded when recovering `eta`.
    pub imag_residue: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub dt: f64,
    pub rule: QuadratureRule,
    pub epsilon: f64,
    pub steps: usize,
    pub t_final: f64,
    pub partial_last_step: bool,
    /// Length of the last step (equals `dt` unless shortened).
    pub last_dt: f64,
}

#[derive(Clone, Debug)]
pub struct RunOutput<T> {
    pub final_state: SimState<T>,
    pub snapshots: Vec<Snapshot<T>>,
    pub metadata: RunMetadata,
}

impl<T: Real> RunOutput<T> {
    pub fn max_imag_residue(&self) -> T {
        self.snapshots.iter().map(|s| s.imag_residue).fold(T::zero(), T::max)
    }
}

/// Step plan from `t0` to `t_final`: full steps and an optional short last step.
fn plan<T: Real>(t0: T, t_final: T, dt: T) -> Result<(usize, Option<T>)> {
    if !(t_final >= t0) {
        return Err(Error::invalid("t_final", "must not precede the initial time"));
    }
    let ratio = ((t_final - t0) / dt).as_f64();
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        return Ok((nearest as usize, None));
    }
    let full = ratio.floor() as usize;
    let rest = t_final - (t0 + T::from_count(full) * dt);
    Ok((full, Some(rest)))
}

/// Integrates to `t_final`, keeping `eta` every `snapshot_every` steps
/// (always including the initial state).
pub fn run<T: Real>(
    initial: &SimState<T>,
    config: &IntegratorConfig<T>,
    forcing: &ForcingContext<T>,
    t_final: T,
) -> Result<RunOutput<T>> {
    config.validate()?;
    check_grid(initial, forcing)?;
    let (full, partial) = plan(initial.t, t_final, config.dt)?;
    let steps = full + usize::from(partial.is_some());
    let grid = initial.mu.grid;
    let transform = SpectralTransform::new(grid);
    let params = forcing.params();

    let mut state = initial.clone();
    let mut snapshots = Vec::with_capacity(steps / config.snapshot_every + 1);
    let keep = |state: &SimState<T>, snapshots: &mut Vec<Snapshot<T>>| -> Result<()> {
        let (eta, imag_residue) = recover_eta(&state.mu, &transform)?;
        snapshots.push(Snapshot {
            t: state.t,
            step: state.step_index - initial.step_index,
            eta,
            imag_residue,
        });
        Ok(())
    };
    keep(&state, &mut snapshots)?;

    let t0 = initial.t;
    if full > 0 {
        let stepper = Stepper::new(params, &grid, state.epsilon, config.dt, config.rule);
        for k in 1..=full {
            let t_next = if k == full && partial.is_none() {
                t_final
            } else {
                t0 + T::from_count(k) * config.dt
            };
            stepper.advance(&mut state, forcing, t_next)?;
            if k % config.snapshot_every == 0 {
                keep(&state, &mut snapshots)?;
            }
        }
    }
    if let Some(rest) = partial {
        let stepper = Stepper::new(params, &grid, state.epsilon, rest, config.rule);
        stepper.advance(&mut state, forcing, t_final)?;
        if steps % config.snapshot_every == 0 {
            keep(&state, &mut snapshots)?;
        }
    }

    let metadata = RunMetadata {
        dt: config.dt.as_f64(),
        rule: config.rule,
        epsilon: state.epsilon.as_f64(),
        steps,
        t_final: t_final.as_f64(),
        partial_last_step: partial.is_some(),
        last_dt: partial.unwrap_or(config.dt).as_f64(),
    };
    Ok(RunOutput {
        final_state: state,
        snapshots,
        metadata,
    })
}

/// `z = 2 pi kappa_x ux + omega + i eps` for one mode.
#[inline]
fn resonance<T: Real>(params: &PhysicalParams<T>, grid: &Grid<T>, idx: usize, ux: T, epsilon: T) -> Complex<T> {
    let kx = grid.wavenumber(idx).0;
    Complex::new(T::two_pi() * kx * ux + params.omega_abs(grid.wavenumber_norm(idx)), epsilon)
}

/// Forced response that is steady in the ship frame, at time `t`.
pub fn stationary_state<T: Real>(
    params: &PhysicalParams<T>,
    shape: &ShipShape<T>,
    ux: T,
    epsilon: T,
    grid: &Grid<T>,
    t: T,
) -> Result<SpectralField<T>> {
    if !(epsilon > T::zero()) {
        return Err(Error::invalid(
            "epsilon",
            "the stationary solution needs positive damping",
        ));
    }
    let d = stationary_coefficient(params, shape, ux, grid);
    let i = Complex::new(T::zero(), T::one());
    Ok(SpectralField::from_fn(*grid, |k| {
        if d.values[k] == Complex::new(T::zero(), T::zero()) {
            return d.values[k];
        }
        let z = resonance(params, grid, k, ux, epsilon);
        let kx = grid.wavenumber(k).0;
        d.values[k] / (i * z) * Complex::from_polar(T::one(), -T::two_pi() * kx * ux * t)
    }))
}

/// Exact solution for a ship at constant speed starting from `mu0`.
pub fn constant_speed_solution<T: Real>(
    params: &PhysicalParams<T>,
    shape: &ShipShape<T>,
    ux: T,
    epsilon: T,
    grid: &Grid<T>,
    mu0: &SpectralField<T>,
    t: T,
) -> Result<SpectralField<T>> {
    if !(epsilon >= T::zero()) {
        return Err(Error::invalid("epsilon", "must be nonnegative"));
    }
    if !(t >= T::zero()) {
        return Err(Error::invalid("t", "must be nonnegative"));
    }
    if mu0.grid != *grid {
        return Err(Error::Contract("initial field lives on a different grid".into()));
    }
    let d = stationary_coefficient(params, shape, ux, grid);
    let i = Complex::new(T::zero(), T::one());
    Ok(SpectralField::from_fn(*grid, |k| {
        let s = grid.wavenumber_norm(k);
        let growth = propagator(params, epsilon, s, t);
        let free = mu0.values[k] * growth;
        if d.values[k] == Complex::new(T::zero(), T::zero()) {
            return free;
        }
        let z = resonance(params, grid, k, ux, epsilon);
        // (1 - e^{-i z t}) / (i z)
        let factor = if z.norm() * t < T::lit(SERIES_THRESHOLD) {
            (Complex::new(T::one(), T::zero()) - i * z * t * T::lit(0.5)) * t
        } else {
            (Complex::new(T::one(), T::zero()) - (-i * z * t).exp()) / (i * z)
        };
        free - d.values[k] * growth * factor
    }))
}
