//! The closed control loop: navigation, events, control, actuation, truth.

use nalgebra::Vector3;
use serde::Serialize;

use super::events::{EventScript, ScriptState};
use super::noise::{apply_thruster_error, measure, NoiseConfig, NoiseStreams};
use super::telemetry::TelemetryRecord;
use super::{integrate_step, onboard_propagate, Environment, SimError};
use crate::control::{
    self, clamp_thrust, hysteresis_step, pwpf_step_vec, sliding_surface, ControllerConfig, PwpfState, SwitchState,
    TargetOrbit,
};
use crate::frames::{geometry_from_state, periapsis_direction, rtn_basis, wrap_pi, OrbitGeometry, StateVector};
use crate::gravity::GravityError;

#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    pub duration: f64,
    /// Control update period, s.
    pub control_period: f64,
    /// Integrator steps per control period.
    pub substeps: u32,
    /// Escape bound on |r|; defaults to 100× the largest |a| in the script.
    pub escape_radius: Option<f64>,
    /// Keep every n-th record; `None` keeps only the summary.
    pub record_every: Option<usize>,
    pub control_enabled: bool,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            duration: 86_400.0,
            control_period: 4.0,
            substeps: 8,
            escape_radius: None,
            record_every: Some(1),
            control_enabled: true,
        }
    }
}

impl SimSettings {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.duration > 0.0 && self.control_period > 0.0 && self.substeps > 0) {
            return Err(SimError::InvalidConfig(
                "duration, control period and substeps must be positive".into(),
            ));
        }
        if matches!(self.record_every, Some(0)) {
            return Err(SimError::InvalidConfig("record_every must be at least 1".into()));
        }
        Ok(())
    }

    pub fn integrator_step(&self) -> f64 {
        self.control_period / self.substeps as f64
    }
}

pub struct RunInput<'a> {
    pub env: &'a Environment,
    pub controller: &'a ControllerConfig,
    pub script: &'a EventScript,
    /// True initial state, in the environment's frame.
    pub initial: StateVector,
    pub noise: &'a NoiseConfig,
    pub settings: &'a SimSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TerminalEvent {
    Completed { t: f64 },
    Impact { t: f64, r: [f64; 3] },
    Escape { t: f64, r: [f64; 3] },
}

impl TerminalEvent {
    pub fn is_completed(&self) -> bool {
        matches!(self, TerminalEvent::Completed { .. })
    }

    pub fn time(&self) -> f64 {
        match *self {
            TerminalEvent::Completed { t } | TerminalEvent::Impact { t, .. } | TerminalEvent::Escape { t, .. } => t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ElementErrors {
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub raan: f64,
    pub argp: f64,
}

impl ElementErrors {
    fn from_array(x: [f64; 5]) -> Self {
        Self {
            a: x[0],
            e: x[1],
            i: x[2],
            raan: x[3],
            argp: x[4],
        }
    }
}

/// Durations of thruster-off stretches that ended before the run did.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct IdleStats {
    pub count: usize,
    pub total: f64,
    pub longest: f64,
    pub median: f64,
    /// Idle stretch still open when the run stopped.
    pub trailing: f64,
}

impl IdleStats {
    fn from_periods(mut periods: Vec<f64>, trailing: f64) -> Self {
        periods.sort_by(|a, b| a.total_cmp(b));
        let count = periods.len();
        let median = match count {
            0 => 0.0,
            n if n % 2 == 1 => periods[n / 2],
            n => 0.5 * (periods[n / 2 - 1] + periods[n / 2]),
        };
        Self {
            count,
            total: periods.iter().sum(),
            longest: periods.last().copied().unwrap_or(0.0),
            median,
            trailing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub total_dv: f64,
    pub terminal: TerminalEvent,
    pub steps: usize,
    pub thrust_on_time: f64,
    pub idle: IdleStats,
    /// Max |error| over the final half of the planned duration.
    pub element_error_max: ElementErrors,
    /// RMS error over the final half of the planned duration.
    pub element_error_rms: ElementErrors,
    pub r_error_rms: f64,
    /// Mean |s| of the true state over the final hour.
    pub s_true_mean_final_hour: [f64; 3],
    pub guard_activations: usize,
    pub target_changes: Vec<(f64, String)>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<TelemetryRecord>,
    pub summary: RunSummary,
}

/// Truth-minus-target element errors and radial error from the target conic.
pub fn element_errors(state: &StateVector, target: &OrbitGeometry, mu: f64) -> Result<([f64; 5], f64), SimError> {
    let (g, _) = geometry_from_state(state, mu)?;
    let raan = if target.i.sin().abs() < 1e-8 {
        0.0
    } else {
        wrap_pi(g.raan - target.raan)
    };
    let argp = if target.e < 1e-6 {
        0.0
    } else {
        wrap_pi(g.argp - target.argp)
    };
    let errs = [g.a - target.a, g.e - target.e, g.i - target.i, raan, argp];

    let p_hat = periapsis_direction(target.i, target.raan, target.argp);
    let q_hat = target.h_hat().cross(&p_hat);
    let angle = state.r.dot(&q_hat).atan2(state.r.dot(&p_hat));
    let denom = 1.0 + target.e * angle.cos();
    let r_error = if denom > 0.0 {
        state.r.norm() - target.semi_latus_rectum() / denom
    } else {
        f64::NAN
    };
    Ok((errs, r_error))
}

#[derive(Default)]
struct Accum {
    count: usize,
    max: [f64; 5],
    sumsq: [f64; 5],
    r_count: usize,
    r_sumsq: f64,
}

impl Accum {
    fn add(&mut self, errs: &[f64; 5], r_err: f64) {
        self.count += 1;
        for k in 0..5 {
            self.max[k] = self.max[k].max(errs[k].abs());
            self.sumsq[k] += errs[k] * errs[k];
        }
        if r_err.is_finite() {
            self.r_count += 1;
            self.r_sumsq += r_err * r_err;
        }
    }

    fn rms(&self) -> [f64; 5] {
        let n = self.count.max(1) as f64;
        self.sumsq.map(|s| (s / n).sqrt())
    }
}

fn escape_bound(script: &EventScript) -> f64 {
    let mut a = script.initial.a.abs();
    for s in &script.stages {
        a = a.max(s.geometry.a.abs());
    }
    if let Some(z) = &script.z_sign {
        a = a.max(z.above.a.abs()).max(z.below.a.abs());
    }
    100.0 * a
}

fn is_contact(err: &SimError) -> bool {
    matches!(
        err,
        SimError::Gravity(GravityError::OnEdge(_) | GravityError::OnFace(_))
    )
}

/// Runs the loop until the duration elapses or the spacecraft impacts or escapes.
pub fn run_closed_loop(input: &RunInput<'_>) -> Result<RunOutput, SimError> {
    let RunInput {
        env,
        controller: cfg,
        script,
        noise,
        settings,
        ..
    } = *input;
    env.validate()?;
    settings.validate()?;
    cfg.validate()?;
    noise.validate().map_err(SimError::InvalidConfig)?;
    input.initial.expect_frame(env.frame)?;

    let period = settings.control_period;
    let dt = settings.integrator_step();
    let n_steps = (settings.duration / period - 1e-9).ceil().max(1.0) as usize;
    let escape = settings.escape_radius.unwrap_or_else(|| escape_bound(script));
    let fix_period = noise.measurement_period.unwrap_or(period);
    let mu_env = env.mu();

    let mut streams = NoiseStreams::new(noise.seed);
    let mut truth = input.initial;
    let mut est = truth;
    let mut next_fix = truth.t;
    let mut script_state = ScriptState::new(script);
    let mut target = TargetOrbit::new(script_state.current, cfg.mu)?;
    let mut stage = 0usize;
    let mut switch = SwitchState::default();
    let mut pwpf = PwpfState::default();

    let mut records = Vec::new();
    let mut dv = 0.0;
    let mut thrust_on_time = 0.0;
    let mut idle_periods = Vec::new();
    let mut idle_start: Option<f64> = None;
    let mut guard_activations = 0;
    let mut target_changes = Vec::new();
    let mut half = Accum::default();
    let mut s_hour = [0.0; 3];
    let mut s_hour_n = 0usize;
    let t0 = truth.t;
    let mut terminal = None;
    let mut steps = 0;

    for k in 0..n_steps {
        let t = t0 + k as f64 * period;
        truth.t = t;
        est.t = t;

        if t + 1e-9 * period >= next_fix {
            est = measure(&truth, noise, &mut streams.measurement);
            next_fix += fix_period;
        }

        if let Some(fired) = script_state.update(script, &est) {
            target = TargetOrbit::new(fired.geometry, cfg.mu)?;
            stage += 1;
            target_changes.push((t, fired.label));
        }

        let (s_est, u_rtn, on) = if settings.control_enabled {
            let ev = control::evaluate(&est, &target, cfg)?;
            guard_activations += ev.guard_applied as usize;
            let on = match &cfg.hysteresis {
                Some(h) => {
                    switch = hysteresis_step(&ev.s, switch, &h.upper, &h.lower_for(&ev.phi));
                    switch.thrusting
                }
                None => true,
            };
            let mut u = if on { ev.u_rtn } else { Vector3::zeros() };
            if let Some(m) = cfg.u_max {
                u = clamp_thrust(&u, m);
            }
            (ev.s, u, on)
        } else {
            let s = sliding_surface(&est, &target, cfg.lambda_r, cfg.lambda_n)?;
            (s, Vector3::zeros(), false)
        };
        if !on {
            pwpf.reset();
        }
        let basis = rtn_basis(&est)?;
        let factors = apply_thruster_error(&Vector3::repeat(1.0), noise.thruster_sigma, &mut streams.thruster);

        let truth_start = truth;
        let est_start = est;
        let mut u_cmd_sum = Vector3::zeros();
        let mut u_app_sum = Vector3::zeros();
        let mut sub_done = 0;
        for _ in 0..settings.substeps {
            let u_rtn_j = match (&cfg.pwpf, on) {
                (Some(p), true) => pwpf_step_vec(&u_rtn, &mut pwpf, p, dt),
                _ => u_rtn,
            };
            let u_cmd = basis.from_rtn(&u_rtn_j);
            let u_app = u_cmd.component_mul(&factors);
            truth = match integrate_step(env, &truth, &u_app, dt) {
                Ok(s) => s,
                Err(e) if is_contact(&e) => {
                    terminal = Some(TerminalEvent::Impact {
                        t: truth.t,
                        r: truth.r.into(),
                    });
                    break;
                }
                Err(e) => return Err(e),
            };
            est = onboard_propagate(&est, &u_cmd, cfg.mu, env.spin_rate, dt)?;
            dv += u_app.norm() * dt;
            u_cmd_sum += u_cmd;
            u_app_sum += u_app;
            sub_done += 1;
            if env.inside_body(&truth.r, truth.t) {
                terminal = Some(TerminalEvent::Impact {
                    t: truth.t,
                    r: truth.r.into(),
                });
                break;
            }
            if truth.r.norm() > escape {
                terminal = Some(TerminalEvent::Escape {
                    t: truth.t,
                    r: truth.r.into(),
                });
                break;
            }
        }
        steps += 1;
        let n_sub = sub_done.max(1) as f64;

        if on {
            thrust_on_time += sub_done as f64 * dt;
            if let Some(start) = idle_start.take() {
                idle_periods.push(t - start);
            }
        } else if idle_start.is_none() {
            idle_start = Some(t);
        }

        let (errs, r_err) = element_errors(&truth_start, &target.geometry, mu_env)?;
        if t >= t0 + settings.duration / 2.0 {
            half.add(&errs, r_err);
        }
        if t >= t0 + settings.duration - 3600.0 {
            let s_true = sliding_surface(&truth_start, &target, cfg.lambda_r, cfg.lambda_n)?;
            for i in 0..3 {
                s_hour[i] += s_true[i].abs();
            }
            s_hour_n += 1;
        }

        let last = k + 1 == n_steps || terminal.is_some();
        if let Some(every) = settings.record_every {
            if k % every == 0 || last {
                records.push(TelemetryRecord {
                    t,
                    r_true: truth_start.r,
                    v_true: truth_start.v,
                    r_est: est_start.r,
                    v_est: est_start.v,
                    s: s_est,
                    thrusting: on,
                    u_cmd: u_cmd_sum / n_sub,
                    u_app: u_app_sum / n_sub,
                    dv_cum: dv,
                    element_errors: errs,
                    r_error: r_err,
                    stage,
                });
            }
        }
        if terminal.is_some() {
            break;
        }
    }

    let end = t0 + steps as f64 * period;
    let terminal = terminal.unwrap_or(TerminalEvent::Completed { t: end });
    let trailing = idle_start.map_or(0.0, |s| terminal.time() - s);
    let warnings = script_state
        .pending_stages(script)
        .iter()
        .map(|s| format!("stage {:?} never triggered", s.label))
        .collect();
    let max = ElementErrors::from_array(half.max);
    let rms = ElementErrors::from_array(half.rms());
    let n_hour = s_hour_n.max(1) as f64;
    let summary = RunSummary {
        total_dv: dv,
        terminal,
        steps,
        thrust_on_time,
        idle: IdleStats::from_periods(idle_periods, trailing),
        element_error_max: max,
        element_error_rms: rms,
        r_error_rms: (half.r_sumsq / half.r_count.max(1) as f64).sqrt(),
        s_true_mean_final_hour: s_hour.map(|x| x / n_hour),
        guard_activations,
        target_changes,
        warnings,
    };
    Ok(RunOutput { records, summary })
}
