//! Geometric search for the smallest damping that keeps the region ahead
//! of the ship free of wrap-around oscillations.
//!
//! Starting from `epsilon0`, the damping is multiplied by `gamma` until the
//! oscillation measure ahead of the ship falls below `delta`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcing::ShipShape;
use crate::scalar::Real;
use crate::scenario::Scenario;
use crate::spectral::RealField;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// `|eta(x_max) - eta(x_min)|` at the first local maximum and first local
    /// minimum met when scanning forward from the window start; 0 when the
    /// window holds no oscillation.
    #[default]
    FirstExtrema,
    /// `max eta - min eta` over the window.
    GlobalExtrema,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuneConfig<T> {
    pub epsilon0: T,
    pub delta: T,
    pub gamma: T,
    pub max_iter: usize,
    /// Fraction of the half-domain ahead of the ship that is inspected.
    pub front_window: T,
    pub measure: MeasureKind,
}

impl<T: Real> Default for TuneConfig<T> {
    fn default() -> Self {
        Self {
            epsilon0: T::lit(1e-8),
            delta: T::lit(1e-7),
            gamma: T::lit(1.1),
            max_iter: 200,
            front_window: T::lit(0.9),
            measure: MeasureKind::FirstExtrema,
        }
    }
}

impl<T: Real> TuneConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon0 > T::zero()) {
            return Err(Error::invalid("epsilon0", "must be positive"));
        }
        if !(self.delta > T::zero()) {
            return Err(Error::invalid("delta", "must be positive"));
        }
        if !(self.gamma > T::one()) {
            return Err(Error::invalid("gamma", "must exceed 1"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter", "must be at least 1"));
        }
        if !(self.front_window > T::zero() && self.front_window <= T::one()) {
            return Err(Error::invalid("front_window", "must lie in (0, 1]"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuneOutcome<T> {
    pub epsilon_star: T,
    pub iterations: usize,
    /// `(epsilon_n, M_n)` for every simulation performed.
    pub trace: Vec<(T, T)>,
}

/// Samples of `eta` ahead of the ship, ordered by distance.
fn front_samples<T: Real>(
    eta: &RealField<T>,
    ship_x: T,
    shape: &ShipShape<T>,
    front_window: T,
) -> Result<Vec<T>> {
    let line = eta.centerline();
    let grid = line.grid;
    let lower = T::lit(2.0) * shape.length;
    let upper = front_window * grid.lx() / T::lit(2.0);
    if upper <= lower {
        return Ok(Vec::new());
    }
    let mut pts: Vec<(T, T)> = (0..grid.nx())
        .filter_map(|j| {
            let d = grid.periodic_offset(grid.x(j), ship_x);
            (d > lower && d < upper).then_some((d, line.values[j]))
        })
        .collect();
    if pts.len() < 4 {
        return Err(Error::Configuration(format!(
            "front window holds {} samples; at least 4 are needed",
            pts.len()
        )));
    }
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite offsets"));
    Ok(pts.into_iter().map(|p| p.1).collect())
}

fn first_extrema<T: Real>(v: &[T]) -> T {
    let mut max = None;
    let mut min = None;
    for w in v.windows(3) {
        if max.is_none() && w[1] > w[0] && w[1] > w[2] {
            max = Some(w[1]);
        }
        if min.is_none() && w[1] < w[0] && w[1] < w[2] {
            min = Some(w[1]);
        }
        if max.is_some() && min.is_some() {
            break;
        }
    }
    match (max, min) {
        (Some(a), Some(b)) => (a - b).abs(),
        _ => T::zero(),
    }
}

/// Oscillation amplitude `M` in the window `(ship_x + 2 L1, ship_x + front_window Lx/2)`.
///
/// 2D fields are reduced to their `y = 0` line. A window that is empty by
/// construction yields 0.
pub fn oscillation_measure<T: Real>(
    eta: &RealField<T>,
    ship_x: T,
    shape: &ShipShape<T>,
    front_window: T,
    kind: MeasureKind,
) -> Result<T> {
    let v = front_samples(eta, ship_x, shape, front_window)?;
    if v.is_empty() {
        return Ok(T::zero());
    }
    Ok(match kind {
        MeasureKind::GlobalExtrema => {
            let max = v.iter().copied().fold(T::neg_infinity(), T::max);
            let min = v.iter().copied().fold(T::infinity(), T::min);
            max - min
        }
        MeasureKind::FirstExtrema => first_extrema(&v),
    })
}

/// Runs the geometric search against an arbitrary measure `M(epsilon)`.
pub fn tune_with<T: Real>(
    config: &TuneConfig<T>,
    mut measure: impl FnMut(T) -> Result<T>,
) -> Result<TuneOutcome<T>> {
    config.validate()?;
    let mut trace = Vec::new();
    for n in 0..config.max_iter {
        let eps = config.epsilon0 * config.gamma.powi(n as i32);
        let m = measure(eps)?;
        trace.push((eps, m));
        if m < config.delta {
            return Ok(TuneOutcome {
                epsilon_star: eps,
                iterations: n + 1,
                trace,
            });
        }
    }
    Err(Error::TuningFailed {
        trace: trace.iter().map(|&(e, m)| (e.as_f64(), m.as_f64())).collect(),
    })
}

/// Smallest `epsilon0 gamma^n` whose run to `t_final` is quiet ahead of the ship.
pub fn tune_epsilon<T: Real>(
    config: &TuneConfig<T>,
    scenario: &Scenario<T>,
    t_final: T,
) -> Result<TuneOutcome<T>> {
    let mut sc = scenario.clone();
    sc.t_final = t_final;
    let ship_x = sc.final_ship_x();
    tune_with(config, |eps| {
        let eta = sc.final_eta(eps)?;
        oscillation_measure(&eta, ship_x, &sc.shape, config.front_window, config.measure)
    })
}
