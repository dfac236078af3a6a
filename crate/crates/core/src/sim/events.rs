//! Target scheduling: ordered one-shot stages plus an optional rule that
//! picks the target by the sign of Z.

use nalgebra::Vector3;

use crate::frames::{wrap_two_pi, OrbitGeometry, StateVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trigger {
    /// Fires once `t ≥ time`.
    AfterTime(f64),
    /// Fires when |r − r_p| of the current target is below `tolerance` and the
    /// radial velocity turns from negative to non-negative.
    Periapsis { tolerance: f64 },
}

/// Optional re-orientation of a stage's line of apsides at firing time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alignment {
    #[default]
    None,
    /// Place apoapsis at the spacecraft's current in-plane direction.
    ApoapsisHere,
    /// Place periapsis at the spacecraft's current in-plane direction.
    PeriapsisHere,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetStage {
    pub trigger: Trigger,
    pub geometry: OrbitGeometry,
    pub align: Alignment,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZSignRule {
    pub above: OrbitGeometry,
    pub below: OrbitGeometry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventScript {
    pub initial: OrbitGeometry,
    pub stages: Vec<TargetStage>,
    pub z_sign: Option<ZSignRule>,
}

impl EventScript {
    pub fn fixed(target: OrbitGeometry) -> Self {
        Self {
            initial: target,
            stages: Vec::new(),
            z_sign: None,
        }
    }
}

/// A target change reported by [`ScriptState::update`].
#[derive(Debug, Clone, PartialEq)]
pub struct Fired {
    pub label: String,
    pub geometry: OrbitGeometry,
}

/// Mutable progress through a script.
#[derive(Debug, Clone, PartialEq)]
pub struct ScriptState {
    pub current: OrbitGeometry,
    pub next_stage: usize,
    prev_radial_velocity: Option<f64>,
    z_above: Option<bool>,
}

impl ScriptState {
    pub fn new(script: &EventScript) -> Self {
        Self {
            current: script.initial,
            next_stage: 0,
            prev_radial_velocity: None,
            z_above: None,
        }
    }

    /// Evaluates triggers against the (estimated) state; at most one ordered
    /// stage fires per call.
    pub fn update(&mut self, script: &EventScript, state: &StateVector) -> Option<Fired> {
        if let Some(rule) = &script.z_sign {
            let above = state.r.z >= 0.0;
            if self.z_above == Some(above) {
                return None;
            }
            self.z_above = Some(above);
            let (geometry, label) = if above {
                (rule.above, "z-positive")
            } else {
                (rule.below, "z-negative")
            };
            self.current = geometry;
            return Some(Fired {
                label: label.into(),
                geometry,
            });
        }

        let radial_velocity = state.v.dot(&state.r) / state.r.norm();
        let prev = self.prev_radial_velocity.replace(radial_velocity);
        let stage = script.stages.get(self.next_stage)?;
        let fire = match stage.trigger {
            Trigger::AfterTime(t) => state.t >= t,
            Trigger::Periapsis { tolerance } => {
                let near = (state.r.norm() - self.current.periapsis()).abs() < tolerance;
                near && matches!(prev, Some(p) if p < 0.0) && radial_velocity >= 0.0
            }
        };
        if !fire {
            return None;
        }
        let geometry = align(&stage.geometry, stage.align, &state.r);
        self.current = geometry;
        self.next_stage += 1;
        Some(Fired {
            label: stage.label.clone(),
            geometry,
        })
    }

    pub fn pending_stages<'a>(&self, script: &'a EventScript) -> &'a [TargetStage] {
        &script.stages[self.next_stage.min(script.stages.len())..]
    }
}

fn align(geometry: &OrbitGeometry, mode: Alignment, r: &Vector3<f64>) -> OrbitGeometry {
    let offset = match mode {
        Alignment::None => return *geometry,
        Alignment::PeriapsisHere => 0.0,
        Alignment::ApoapsisHere => std::f64::consts::PI,
    };
    let (so, co) = geometry.raan.sin_cos();
    let node = Vector3::new(co, so, 0.0);
    let in_plane = geometry.h_hat().cross(&node);
    let u = r.dot(&in_plane).atan2(r.dot(&node));
    OrbitGeometry {
        argp: wrap_two_pi(u + offset),
        ..*geometry
    }
}
