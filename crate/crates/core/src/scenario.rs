//! Scenario files: a TOML description of body, environment, target, controller,
//! noise and run settings, plus the named presets and batch drivers.
//!
//! Quantities accept bare SI numbers or unit-suffixed strings (see
//! [`crate::units`]). Relative file references resolve against the directory
//! of the scenario file.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::control::{ControlError, ControllerConfig, Hysteresis, LowerThreshold, PwpfParams, Switching};
use crate::frames::{state_from_geometry, Frame, FrameError, OrbitGeometry, StateVector};
use crate::gravity::{harmonics_from_polyhedron, GravityError, GravityField, HarmonicsModel, PolyhedronGravity};
use crate::shape::{parse_shape, synthetic, PolyhedronShape, ShapeError, ShapeFormat};
use crate::sim::{
    run_closed_loop, Alignment, Environment, EventScript, NoiseConfig, RunInput, RunOutput, SimError, SimSettings,
    SrpConfig, Surface, TargetStage, Trigger, ZSignRule,
};
use crate::GRAVITATIONAL_CONSTANT;

pub mod batch;
pub mod presets;

pub use batch::{run_monte_carlo, run_sweep, write_samples_csv, MonteCarloReport, SampleResult, SweepAxis, SweepPoint};
pub use presets::{preset, PRESET_NAMES};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("TOML syntax error: {0}")]
    Syntax(String),
    #[error("invalid value at `{path}`: {message}")]
    Field { path: String, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("unknown preset {name:?} (available: {available})")]
    UnknownPreset { name: String, available: String },
    #[error("bad override {0:?}: expected key.path=value")]
    Override(String),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Gravity(#[from] GravityError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl ScenarioError {
    /// Errors caused by the input rather than by running it.
    pub fn is_validation(&self) -> bool {
        !matches!(self, ScenarioError::Sim(_) | ScenarioError::Io { .. })
    }
}

fn is_default<T: Default + PartialEq>(x: &T) -> bool {
    *x == T::default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GravityKind {
    PointMass,
    Polyhedron,
    #[default]
    Harmonics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    #[serde(deserialize_with = "crate::units::mass")]
    pub mass: f64,
    /// ν about +Z, rad/s.
    #[serde(default, deserialize_with = "crate::units::angular_rate")]
    pub spin_rate: f64,
    /// `builtin:NAME` or a path to an OBJ / plate-table file (body frame, centred).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    /// Multiplier applied to shape-file coordinates (e.g. 1000 for km files).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape_scale: Option<f64>,
    #[serde(default)]
    pub gravity: GravityKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub harmonics_degree: Option<usize>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "crate::units::length_opt"
    )]
    pub reference_radius: Option<f64>,
    /// Coefficient table ("n m C S" rows) instead of deriving them from the shape.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<String>,
    /// Whether the coefficient table is fully normalised (default true).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients_normalized: Option<bool>,
    /// Impact sphere used when no shape is given.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "crate::units::length_opt"
    )]
    pub surface_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gravitational_constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SrpSpec {
    #[serde(deserialize_with = "crate::units::scalar")]
    pub reflectivity: f64,
    /// Spacecraft mass-to-area ratio, kg/m².
    pub mass_to_area: f64,
    #[serde(deserialize_with = "crate::units::length")]
    pub sun_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSpec {
    /// `body-fixed` turns the run into path following in the rotating frame.
    #[serde(default)]
    pub frame: Frame,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub srp: Option<SrpSpec>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    /// In-plane angle from periapsis on the first target conic.
    #[serde(default, deserialize_with = "crate::units::angle")]
    pub anomaly: f64,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "crate::units::length3_opt"
    )]
    pub position: Option<[f64; 3]>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "crate::units::speed3_opt"
    )]
    pub velocity: Option<[f64; 3]>,
    #[serde(default, deserialize_with = "crate::units::time")]
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriggerKind {
    Time,
    Periapsis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlignSpec {
    #[default]
    None,
    ApoapsisHere,
    PeriapsisHere,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventSpec {
    pub trigger: TriggerKind,
    /// Firing time for `time` triggers.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "crate::units::time_opt"
    )]
    pub at: Option<f64>,
    /// Radius window for `periapsis` triggers (default 5 m).
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "crate::units::length_opt"
    )]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub align: AlignSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub target: OrbitGeometry,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZSignSpec {
    pub above: OrbitGeometry,
    pub below: OrbitGeometry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HysteresisSpec {
    #[serde(deserialize_with = "crate::units::scalar3")]
    pub upper: [f64; 3],
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "crate::units::scalar3_opt"
    )]
    pub lower: Option<[f64; 3]>,
    /// s⁻ as a fraction of the boundary layer Φ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_phi_fraction: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwitchingSpec {
    #[default]
    Saturation,
    Sign,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerSpec {
    /// Sets both λ_R and λ_N unless they are given individually.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_n: Option<f64>,
    /// D, one value or (D_R, D_T, D_N).
    #[serde(deserialize_with = "crate::units::accel3")]
    pub disturbance: [f64; 3],
    pub n_phi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hysteresis: Option<HysteresisSpec>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "crate::units::accel_opt"
    )]
    pub u_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pwpf: Option<PwpfParams>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub switching: SwitchingSpec,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    #[serde(default, deserialize_with = "crate::units::length")]
    pub sigma_r: f64,
    #[serde(default, deserialize_with = "crate::units::speed")]
    pub sigma_v: f64,
    /// Fractional 1σ execution error per thrust component.
    #[serde(default, deserialize_with = "crate::units::scalar")]
    pub thruster_sigma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "crate::units::time_opt"
    )]
    pub measurement_period: Option<f64>,
}

fn default_duration() -> f64 {
    86_400.0
}
fn default_control_period() -> f64 {
    4.0
}
fn default_true() -> bool {
    true
}
fn default_record_every() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSpec {
    #[serde(default = "default_duration", deserialize_with = "crate::units::time")]
    pub duration: f64,
    #[serde(default = "default_control_period", deserialize_with = "crate::units::time")]
    pub control_period: f64,
    /// Integrator steps per control period (default 8).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub substeps: Option<u32>,
    /// Alternative to `substeps`: the integrator step itself.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "crate::units::time_opt"
    )]
    pub integrator_step: Option<f64>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        deserialize_with = "crate::units::length_opt"
    )]
    pub escape_radius: Option<f64>,
    /// Keep every n-th telemetry row; 0 keeps none.
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default = "default_true")]
    pub control_enabled: bool,
}

impl Default for SimSpec {
    fn default() -> Self {
        Self {
            duration: default_duration(),
            control_period: default_control_period(),
            substeps: None,
            integrator_step: None,
            escape_radius: None,
            record_every: 1,
            control_enabled: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSpec {
    pub samples: usize,
    /// 1σ along each of two axes spanning the plane normal to the nominal velocity.
    #[serde(deserialize_with = "crate::units::length")]
    pub position_sigma: f64,
    /// 1σ per Cartesian velocity component.
    #[serde(deserialize_with = "crate::units::speed")]
    pub velocity_sigma: f64,
    #[serde(default)]
    pub base_seed: u64,
}

impl MonteCarloSpec {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.samples == 0 {
            return Err(ScenarioError::Validation(
                "Monte Carlo needs at least one sample".into(),
            ));
        }
        if !(self.position_sigma >= 0.0 && self.velocity_sigma >= 0.0) {
            return Err(ScenarioError::Validation("dispersions must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub body: BodySpec,
    #[serde(default)]
    pub environment: EnvironmentSpec,
    /// Initial target conic.
    pub target: OrbitGeometry,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<EventSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_sign: Option<ZSignSpec>,
    pub controller: ControllerSpec,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub sim: SimSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub montecarlo: Option<MonteCarloSpec>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub output: OutputSpec,
    /// Directory used to resolve relative file references.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

/// Reads, overrides and validates a scenario file.
pub fn load_scenario(path: &Path, overrides: &[String]) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| ScenarioError::Syntax(e.to_string()))?;
    apply_overrides(&mut table, overrides)?;
    let mut scenario = Scenario::from_table(table)?;
    scenario.base_dir = path.parent().map(Path::to_path_buf);
    scenario.validate()?;
    Ok(scenario)
}

/// A preset name or a file path, with overrides applied.
pub fn resolve_scenario(name_or_path: &str, overrides: &[String]) -> Result<Scenario, ScenarioError> {
    let path = Path::new(name_or_path);
    if path.is_file() {
        return load_scenario(path, overrides);
    }
    let base = preset(name_or_path)?;
    if overrides.is_empty() {
        return Ok(base);
    }
    let mut table = base.to_table()?;
    apply_overrides(&mut table, overrides)?;
    let mut scenario = Scenario::from_table(table)?;
    scenario.base_dir = base.base_dir;
    scenario.validate()?;
    Ok(scenario)
}

/// Sets `a.b.c = value` in a TOML table. The value is parsed as TOML and
/// falls back to a plain string, so `sim.duration=3day` works unquoted.
pub fn apply_overrides(table: &mut toml::Table, overrides: &[String]) -> Result<(), ScenarioError> {
    for item in overrides {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| ScenarioError::Override(item.clone()))?;
        let keys: Vec<&str> = key.trim().split('.').map(str::trim).collect();
        if keys.iter().any(|k| k.is_empty()) {
            return Err(ScenarioError::Override(item.clone()));
        }
        let raw = raw.trim();
        let value = format!("v = {raw}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));
        let (last, parents) = keys.split_last().expect("non-empty key");
        let mut node = &mut *table;
        for k in parents {
            let entry = node
                .entry(k.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            node = entry
                .as_table_mut()
                .ok_or_else(|| ScenarioError::Override(item.clone()))?;
        }
        node.insert(last.to_string(), value);
    }
    Ok(())
}

/// Everything a closed-loop run needs, assembled from a [`Scenario`].
#[derive(Debug, Clone)]
pub struct BuiltScenario {
    pub env: Environment,
    pub controller: ControllerConfig,
    pub script: EventScript,
    pub initial: StateVector,
    pub noise: NoiseConfig,
    pub settings: SimSettings,
}

impl BuiltScenario {
    pub fn run(&self) -> Result<RunOutput, SimError> {
        self.run_with(self.initial, self.noise.seed)
    }

    /// Same scenario from another initial state and seed.
    pub fn run_with(&self, initial: StateVector, seed: u64) -> Result<RunOutput, SimError> {
        let noise = NoiseConfig { seed, ..self.noise };
        run_closed_loop(&RunInput {
            env: &self.env,
            controller: &self.controller,
            script: &self.script,
            initial,
            noise: &noise,
            settings: &self.settings,
        })
    }

    /// s⁺ when a hysteresis switch is configured.
    pub fn switch_band(&self) -> Option<Vector3<f64>> {
        self.controller.hysteresis.map(|h| h.upper)
    }
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| ScenarioError::Syntax(e.to_string()))?;
        let s = Self::from_table(table)?;
        s.validate()?;
        Ok(s)
    }

    fn from_table(table: toml::Table) -> Result<Self, ScenarioError> {
        serde_path_to_error::deserialize(toml::Value::Table(table)).map_err(|e| ScenarioError::Field {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn to_table(&self) -> Result<toml::Table, ScenarioError> {
        toml::Table::try_from(self).map_err(|e| ScenarioError::Validation(format!("cannot serialise scenario: {e}")))
    }

    pub fn to_toml_string(&self) -> Result<String, ScenarioError> {
        toml::to_string_pretty(self).map_err(|e| ScenarioError::Validation(format!("cannot serialise scenario: {e}")))
    }

    /// Body-fixed scenarios follow a path in the rotating frame.
    pub fn is_path_following(&self) -> bool {
        self.environment.frame == Frame::BodyFixed
    }

    fn resolve(&self, reference: &str) -> PathBuf {
        let p = Path::new(reference);
        match &self.base_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }

    /// Cheap structural checks that need no file access.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::Validation(m));
        if !(self.body.mass > 0.0) {
            return bad(format!("body.mass must be positive, got {}", self.body.mass));
        }
        if self.body.gravity != GravityKind::PointMass && self.body.shape.is_none() && self.body.coefficients.is_none()
        {
            return bad("body.gravity needs body.shape or body.coefficients".into());
        }
        if self.body.gravity == GravityKind::Polyhedron && self.body.shape.is_none() {
            return bad("polyhedron gravity needs body.shape".into());
        }
        if self.body.coefficients.is_some() && self.body.reference_radius.is_none() && self.body.shape.is_none() {
            return bad("a coefficient table needs body.reference_radius".into());
        }
        self.target.validate()?;
        for (k, ev) in self.events.iter().enumerate() {
            ev.target.validate()?;
            match ev.trigger {
                TriggerKind::Time if ev.at.is_none() => return bad(format!("events[{k}]: time trigger needs `at`")),
                TriggerKind::Periapsis if ev.at.is_some() => {
                    return bad(format!("events[{k}]: periapsis trigger takes `tolerance`, not `at`"))
                }
                _ => {}
            }
        }
        if let Some(z) = &self.z_sign {
            z.above.validate()?;
            z.below.validate()?;
            if !self.events.is_empty() {
                return bad("z_sign and ordered events cannot be combined".into());
            }
        }
        if self.initial.position.is_some() != self.initial.velocity.is_some() {
            return bad("initial.position and initial.velocity go together".into());
        }
        if let Some(h) = &self.controller.hysteresis {
            if h.lower.is_some() == h.lower_phi_fraction.is_some() {
                return bad("hysteresis needs exactly one of `lower` or `lower_phi_fraction`".into());
            }
        }
        if self.sim.substeps.is_some() && self.sim.integrator_step.is_some() {
            return bad("give sim.substeps or sim.integrator_step, not both".into());
        }
        if let Some(mc) = &self.montecarlo {
            mc.validate()?;
        }
        Ok(())
    }

    fn load_shape(&self) -> Result<Option<PolyhedronShape>, ScenarioError> {
        let Some(reference) = &self.body.shape else {
            return Ok(None);
        };
        let scale = self.body.shape_scale.unwrap_or(1.0);
        let shape = if let Some(name) = reference.strip_prefix("builtin:") {
            let s = synthetic::builtin(name)?;
            if scale == 1.0 {
                s
            } else {
                s.scaled(scale)
            }
        } else {
            let path = self.resolve(reference);
            let bytes = std::fs::read(&path).map_err(|source| ScenarioError::Io {
                path: path.clone(),
                source,
            })?;
            parse_shape(&bytes, ShapeFormat::from_path(&path), scale)?
        };
        Ok(Some(shape))
    }

    fn build_environment(&self) -> Result<Environment, ScenarioError> {
        let b = &self.body;
        let g = b.gravitational_constant.unwrap_or(GRAVITATIONAL_CONSTANT);
        let mu = g * b.mass;
        let shape = self.load_shape()?;
        let density = shape.as_ref().map(|s| b.mass / s.signed_volume());
        let reference_radius = b
            .reference_radius
            .or_else(|| shape.as_ref().map(PolyhedronShape::circumscribing_radius));

        let field = match b.gravity {
            GravityKind::PointMass => GravityField::PointMass { mu },
            GravityKind::Polyhedron => {
                let shape = shape.clone().expect("validated");
                GravityField::Polyhedron(Arc::new(PolyhedronGravity::new(shape, density.unwrap(), g)?))
            }
            GravityKind::Harmonics => {
                let r0 = reference_radius.expect("validated");
                let model = if let Some(file) = &b.coefficients {
                    let path = self.resolve(file);
                    let text = std::fs::read_to_string(&path).map_err(|source| ScenarioError::Io { path, source })?;
                    let model = HarmonicsModel::from_text(mu, r0, &text, b.coefficients_normalized.unwrap_or(true))?;
                    match b.harmonics_degree {
                        Some(n) if n < model.degree() => model.truncated(n),
                        _ => model,
                    }
                } else {
                    let shape = shape.as_ref().expect("validated");
                    harmonics_from_polyhedron(shape, density.unwrap(), g, b.harmonics_degree.unwrap_or(5), r0)?
                };
                GravityField::Harmonics(Arc::new(model))
            }
        };

        let surface = match (shape, b.surface_radius) {
            (_, Some(r)) => Surface::Sphere(r),
            (Some(s), None) => Surface::polyhedron(Arc::new(s)),
            (None, None) => Surface::None,
        };
        let env = Environment {
            field,
            spin_rate: b.spin_rate,
            srp: self.environment.srp.as_ref().map(|s| SrpConfig {
                reflectivity: s.reflectivity,
                mass_to_area: s.mass_to_area,
                sun_distance: s.sun_distance,
            }),
            frame: self.environment.frame,
            surface,
        };
        env.validate()?;
        Ok(env)
    }

    fn build_controller(&self, mu: f64) -> Result<ControllerConfig, ScenarioError> {
        let c = &self.controller;
        let lambda = c.lambda.unwrap_or(2.0);
        let hysteresis = c.hysteresis.as_ref().map(|h| Hysteresis {
            upper: Vector3::from(h.upper),
            lower: match (h.lower, h.lower_phi_fraction) {
                (Some(lo), _) => LowerThreshold::Fixed(Vector3::from(lo)),
                (None, f) => LowerThreshold::PhiFraction(f.unwrap_or(1.0 / 3.0)),
            },
        });
        let cfg = ControllerConfig {
            lambda_r: c.lambda_r.unwrap_or(lambda),
            lambda_n: c.lambda_n.unwrap_or(lambda),
            disturbance_bound: Vector3::from(c.disturbance),
            n_phi: c.n_phi,
            hysteresis,
            u_max: c.u_max,
            pwpf: c.pwpf,
            mu,
            switching: match c.switching {
                SwitchingSpec::Saturation => Switching::Saturation,
                SwitchingSpec::Sign => Switching::Sign,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn event_script(&self) -> EventScript {
        let stages = self
            .events
            .iter()
            .enumerate()
            .map(|(k, ev)| TargetStage {
                trigger: match ev.trigger {
                    TriggerKind::Time => Trigger::AfterTime(ev.at.unwrap_or(0.0)),
                    TriggerKind::Periapsis => Trigger::Periapsis {
                        tolerance: ev.tolerance.unwrap_or(5.0),
                    },
                },
                geometry: ev.target,
                align: match ev.align {
                    AlignSpec::None => Alignment::None,
                    AlignSpec::ApoapsisHere => Alignment::ApoapsisHere,
                    AlignSpec::PeriapsisHere => Alignment::PeriapsisHere,
                },
                label: ev.label.clone().unwrap_or_else(|| format!("stage {}", k + 1)),
            })
            .collect();
        EventScript {
            initial: self.target,
            stages,
            z_sign: self.z_sign.map(|z| ZSignRule {
                above: z.above,
                below: z.below,
            }),
        }
    }

    pub fn sim_settings(&self) -> Result<SimSettings, ScenarioError> {
        let s = &self.sim;
        let substeps = match (s.substeps, s.integrator_step) {
            (Some(n), _) => n,
            (None, Some(h)) if h > 0.0 => (s.control_period / h).round().max(1.0) as u32,
            (None, Some(h)) => {
                return Err(ScenarioError::Validation(format!(
                    "integrator step must be positive, got {h}"
                )))
            }
            (None, None) => 8,
        };
        let settings = SimSettings {
            duration: s.duration,
            control_period: s.control_period,
            substeps,
            escape_radius: s.escape_radius,
            record_every: (s.record_every > 0).then_some(s.record_every),
            control_enabled: s.control_enabled,
        };
        settings.validate()?;
        Ok(settings)
    }

    pub fn noise_config(&self) -> Result<NoiseConfig, ScenarioError> {
        let n = &self.noise;
        let cfg = NoiseConfig {
            sigma_r: n.sigma_r,
            sigma_v: n.sigma_v,
            thruster_sigma: n.thruster_sigma,
            seed: n.seed,
            measurement_period: n.measurement_period,
        };
        cfg.validate().map_err(ScenarioError::Validation)?;
        Ok(cfg)
    }

    pub fn initial_state(&self, mu: f64) -> Result<StateVector, ScenarioError> {
        let i = &self.initial;
        let frame = self.environment.frame;
        Ok(match (i.position, i.velocity) {
            (Some(r), Some(v)) => StateVector::new(Vector3::from(r), Vector3::from(v), i.time, frame)?,
            _ => {
                let first = match &self.z_sign {
                    Some(z) if (state_from_geometry(&z.above, i.anomaly, mu, frame, i.time)?.r.z) < 0.0 => z.below,
                    _ => self.target,
                };
                state_from_geometry(&first, i.anomaly, mu, frame, i.time)?
            }
        })
    }

    /// Loads referenced files and assembles the run inputs.
    pub fn build(&self) -> Result<BuiltScenario, ScenarioError> {
        self.validate()?;
        let env = self.build_environment()?;
        let mu = env.mu();
        Ok(BuiltScenario {
            controller: self.build_controller(mu)?,
            script: self.event_script(),
            initial: self.initial_state(mu)?,
            noise: self.noise_config()?,
            settings: self.sim_settings()?,
            env,
        })
    }
}
