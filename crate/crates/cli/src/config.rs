//! TOML scenario files.
//!
//! ```toml
//! t_final = 400.0
//! epsilon = 1e-4            # or "auto", which needs a [tuning] table
//! initial = "steady"        # "zero" (default) or "steady"
//! output_dir = "out"
//!
//! [physical]
//! rho1 = 999.0
//! rho2 = 1022.3
//! h1 = 1.0
//! h2 = 6.0
//! g = 9.81
//!
//! [grid]
//! Lx = 1200.0
//! Nx = 1500                 # add Ly/Ny for a 2D run; dim is inferred
//!
//! [profile]
//! kind = "constant"         # or "ramp" (terminal, rate) or "table" (path)
//! speed = 0.43
//!
//! [integrator]
//! dt = 1.0
//! rule = "rectangle"
//! snapshot_every = 50
//! ```

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use deadwater::forcing::SpeedTable;
use deadwater::{
    Grid, InitialCondition, IntegratorConfig, MeasureKind, PhysicalParams, QuadratureRule, Scenario,
    ShipShape, SpeedProfile, TuneConfig,
};
use serde::Deserialize;
use sha2::{Digest, Sha256};

/// A configuration problem, tagged with the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }

    fn from_core(section: &str, err: deadwater::Error) -> Self {
        match err {
            deadwater::Error::InvalidParameter { name, reason } => {
                Self::new(format!("{section}.{name}"), reason)
            }
            deadwater::Error::Domain { what, value } => {
                Self::new(format!("{section}.{what}"), format!("out of domain ({value})"))
            }
            other => Self::new(section, other.to_string()),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "config key `{}`: {}", self.key, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EpsilonChoice {
    Fixed(f64),
    Auto,
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    /// With `epsilon = "auto"` the scenario carries `tuning.epsilon0` until tuned.
    pub scenario: Scenario<f64>,
    pub epsilon: EpsilonChoice,
    pub tuning: Option<TuneConfig<f64>>,
    /// Number of dyadic step sizes in a convergence sweep.
    pub convergence_levels: usize,
    pub output_dir: PathBuf,
    /// SHA-256 of the config text and any referenced speed table.
    pub hash: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    physical: RawPhysical,
    grid: toml::Value,
    #[serde(default)]
    ship: RawShip,
    profile: RawProfile,
    epsilon: Option<RawEpsilon>,
    #[serde(default)]
    integrator: Option<RawIntegrator>,
    #[serde(default)]
    initial: Option<String>,
    t_final: Option<f64>,
    #[serde(default)]
    output_dir: Option<PathBuf>,
    tuning: Option<RawTuning>,
    convergence: Option<RawConvergence>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysical {
    rho1: f64,
    rho2: f64,
    h1: f64,
    h2: f64,
    g: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawShip {
    draft: f64,
    length: f64,
    beam: f64,
}

impl Default for RawShip {
    fn default() -> Self {
        let s = ShipShape::<f64>::default();
        Self {
            draft: s.draft,
            length: s.length,
            beam: s.beam,
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawProfile {
    Constant { speed: f64 },
    Ramp { terminal: f64, rate: f64 },
    Table { path: PathBuf },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEpsilon {
    Value(f64),
    Word(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    dt: f64,
    #[serde(default)]
    rule: Option<String>,
    #[serde(default = "default_snapshot_every")]
    snapshot_every: usize,
}

fn default_snapshot_every() -> usize {
    50
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTuning {
    epsilon0: Option<f64>,
    delta: Option<f64>,
    gamma: Option<f64>,
    max_iter: Option<usize>,
    front_window: Option<f64>,
    measure: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConvergence {
    levels: usize,
}

fn required<T>(value: Option<T>, key: &str) -> Result<T, ConfigError> {
    value.ok_or_else(|| ConfigError::new(key, "missing required key"))
}

/// Parses and validates a scenario; relative paths resolve against the
/// working directory.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    parse_config_in(text, Path::new("."))
}

/// Reads a scenario file; relative paths resolve against its directory.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    parse_config_in(&text, base)
}

pub fn parse_config_in(text: &str, base: &Path) -> Result<ScenarioConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let msg = e.message().to_string();
        // serde reports missing keys as "missing field `x`"
        let key = msg
            .strip_prefix("missing field `")
            .and_then(|rest| rest.split('`').next())
            .unwrap_or("")
            .to_string();
        ConfigError::new(key, msg)
    })?;
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());

    let p = &raw.physical;
    let params = PhysicalParams::new(p.rho1, p.rho2, p.h1, p.h2, p.g)
        .map_err(|e| ConfigError::from_core("physical", e))?;

    let mut grid_value = raw.grid;
    if let Some(table) = grid_value.as_table_mut() {
        if !table.contains_key("dim") {
            let dim = if table.contains_key("Ly") { 2 } else { 1 };
            table.insert("dim".into(), toml::Value::Integer(dim));
        }
    }
    let grid: Grid<f64> = grid_value
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError::new("grid", e.message().to_string()))?;

    let shape = ShipShape::new(raw.ship.draft, raw.ship.length, raw.ship.beam)
        .map_err(|e| ConfigError::from_core("ship", e))?;

    let profile = match raw.profile {
        RawProfile::Constant { speed } => SpeedProfile::Constant { speed },
        RawProfile::Ramp { terminal, rate } => SpeedProfile::ExponentialRamp { terminal, rate },
        RawProfile::Table { path } => {
            let path = base.join(path);
            let bytes = fs::read(&path).map_err(|e| {
                ConfigError::new("profile.path", format!("cannot read {}: {e}", path.display()))
            })?;
            hasher.update(&bytes);
            let table = SpeedTable::from_csv_reader(bytes.as_slice())
                .map_err(|e| ConfigError::new("profile.path", e.to_string()))?;
            SpeedProfile::Tabulated(table)
        }
    };
    profile.validate().map_err(|e| ConfigError::from_core("profile", e))?;

    let ri = required(raw.integrator, "integrator")?;
    let rule = match ri.rule.as_deref() {
        None => QuadratureRule::Rectangle,
        Some(r) => r
            .parse::<QuadratureRule>()
            .map_err(|e| ConfigError::new("integrator.rule", e.to_string()))?,
    };
    let integrator = IntegratorConfig::new(ri.dt, rule, ri.snapshot_every)
        .map_err(|e| ConfigError::from_core("integrator", e))?;

    let initial = match raw.initial.as_deref() {
        None | Some("zero") => InitialCondition::Zero,
        Some("steady") => InitialCondition::Steady,
        Some(other) => {
            return Err(ConfigError::new(
                "initial",
                format!("expected \"zero\" or \"steady\", got \"{other}\""),
            ))
        }
    };

    let tuning = raw.tuning.map(build_tuning).transpose()?;
    let epsilon = match required(raw.epsilon, "epsilon")? {
        RawEpsilon::Value(v) if v.is_finite() && v >= 0.0 => EpsilonChoice::Fixed(v),
        RawEpsilon::Value(v) => {
            return Err(ConfigError::new("epsilon", format!("must be finite and nonnegative, got {v}")))
        }
        RawEpsilon::Word(w) if w == "auto" => {
            if tuning.is_none() {
                return Err(ConfigError::new("epsilon", "\"auto\" requires a [tuning] table"));
            }
            EpsilonChoice::Auto
        }
        RawEpsilon::Word(w) => {
            return Err(ConfigError::new("epsilon", format!("expected a number or \"auto\", got \"{w}\"")))
        }
    };

    let t_final = required(raw.t_final, "t_final")?;
    let scenario = Scenario {
        params,
        grid,
        shape,
        profile,
        epsilon: match epsilon {
            EpsilonChoice::Fixed(v) => v,
            EpsilonChoice::Auto => tuning.as_ref().map(|t| t.epsilon0).unwrap_or_default(),
        },
        integrator,
        initial,
        t_final,
    };
    scenario.validate().map_err(|e| match e {
        deadwater::Error::InvalidParameter { name, reason } => ConfigError::new(name, reason),
        other => ConfigError::new("", other.to_string()),
    })?;

    let convergence_levels = raw.convergence.map(|c| c.levels).unwrap_or(4);
    if convergence_levels < 2 {
        return Err(ConfigError::new("convergence.levels", "need at least 2 step sizes"));
    }

    Ok(ScenarioConfig {
        scenario,
        epsilon,
        tuning,
        convergence_levels,
        output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("out")),
        hash: format!("{:x}", hasher.finalize()),
    })
}

fn build_tuning(raw: RawTuning) -> Result<TuneConfig<f64>, ConfigError> {
    let d = TuneConfig::<f64>::default();
    let measure = match raw.measure.as_deref() {
        None => d.measure,
        Some("first_extrema") => MeasureKind::FirstExtrema,
        Some("global_extrema") => MeasureKind::GlobalExtrema,
        Some(other) => {
            return Err(ConfigError::new(
                "tuning.measure",
                format!("expected \"first_extrema\" or \"global_extrema\", got \"{other}\""),
            ))
        }
    };
    let config = TuneConfig {
        epsilon0: raw.epsilon0.unwrap_or(d.epsilon0),
        delta: raw.delta.unwrap_or(d.delta),
        gamma: raw.gamma.unwrap_or(d.gamma),
        max_iter: raw.max_iter.unwrap_or(d.max_iter),
        front_window: raw.front_window.unwrap_or(d.front_window),
        measure,
    };
    config.validate().map_err(|e| ConfigError::from_core("tuning", e))?;
    Ok(config)
}
