//! A complete simulation setup.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcing::{ForcingContext, ShipShape, SpeedProfile};
use crate::physics::PhysicalParams;
use crate::scalar::Real;
use crate::solver::{run, stationary_state, IntegratorConfig, RunOutput, SimState};
use crate::spectral::{recover_eta, Grid, RealField, SpectralTransform};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialCondition {
    /// Fluid at rest.
    #[default]
    Zero,
    /// The steady forced response for the speed at `t = 0`.
    Steady,
}

#[derive(Clone, Debug)]
pub struct Scenario<T> {
    pub params: PhysicalParams<T>,
    pub grid: Grid<T>,
    pub shape: ShipShape<T>,
    pub profile: SpeedProfile<T>,
    pub epsilon: T,
    pub integrator: IntegratorConfig<T>,
    pub initial: InitialCondition,
    pub t_final: T,
}

impl<T: Real> Scenario<T> {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.profile.validate()?;
        self.integrator.validate()?;
        if !(self.epsilon >= T::zero()) || !self.epsilon.is_finite() {
            return Err(Error::invalid("epsilon", "must be finite and nonnegative"));
        }
        if !(self.t_final >= T::zero()) {
            return Err(Error::invalid("t_final", "must be nonnegative"));
        }
        if self.initial == InitialCondition::Steady && !(self.epsilon > T::zero()) {
            return Err(Error::invalid("epsilon", "a steady initial condition needs epsilon > 0"));
        }
        Ok(())
    }

    pub fn forcing(&self) -> ForcingContext<T> {
        ForcingContext::new(self.params, self.shape, self.profile.clone(), self.grid)
    }

    /// Initial state for damping `epsilon`.
    pub fn initial_state(&self, epsilon: T) -> Result<SimState<T>> {
        match self.initial {
            InitialCondition::Zero => SimState::at_rest(self.grid, epsilon),
            InitialCondition::Steady => {
                let ux = self.profile.speed(T::zero());
                let mu = stationary_state(&self.params, &self.shape, ux, epsilon, &self.grid, T::zero())?;
                SimState::new(mu, epsilon)
            }
        }
    }

    /// Runs the scenario with its own damping.
    pub fn run(&self) -> Result<RunOutput<T>> {
        self.run_with_epsilon(self.epsilon)
    }

    pub fn run_with_epsilon(&self, epsilon: T) -> Result<RunOutput<T>> {
        self.validate()?;
        let initial = self.initial_state(epsilon)?;
        run(&initial, &self.integrator, &self.forcing(), self.t_final)
    }

    /// `eta` at `t_final` for damping `epsilon`, without intermediate snapshots.
    pub fn final_eta(&self, epsilon: T) -> Result<RealField<T>> {
        let mut quiet = self.clone();
        quiet.integrator.snapshot_every = usize::MAX;
        let out = quiet.run_with_epsilon(epsilon)?;
        Ok(recover_eta(&out.final_state.mu, &SpectralTransform::new(self.grid))?.0)
    }

    /// Ship position at `t_final`.
    pub fn final_ship_x(&self) -> T {
        self.profile.position(self.t_final)
    }
}
