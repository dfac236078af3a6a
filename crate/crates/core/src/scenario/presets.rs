//! The named example scenarios.
//!
//! Every preset starts at anomaly 0 of its first target conic at t = 0. Bodies
//! use the built-in synthetic shapes.

use super::*;
use crate::ASTRONOMICAL_UNIT;

/// Names shown by `list-presets`.
pub const PRESET_NAMES: &[&str] = &[
    "Itokawa",
    "67P",
    "Bennu-2h",
    "Bennu-tight",
    "Bennu-loose",
    "Bennu-PWPF",
    "Bennu-hyperbolic",
    "Bennu-Hohmann",
    "Bennu-Monte Carlo",
];

/// Base case for parameter sweeps: a 500 m sun-terminator orbit about
/// Itokawa entered from 600 m, so convergence is visible.
pub const SWEEP_PRESET: &str = "Itokawa-sweep";

const TIGHT: [f64; 3] = [0.02, 0.7, 0.05];
const LOOSE: [f64; 3] = [0.1, 2.0, 0.15];
const HOUR: f64 = 3600.0;
const DAY: f64 = 86_400.0;

fn key(name: &str) -> String {
    name.chars()
        .filter(|c| !matches!(c, ' ' | '-' | '_'))
        .flat_map(char::to_lowercase)
        .collect()
}

fn geometry(a: f64, e: f64, i_deg: f64, raan_deg: f64, argp_deg: f64) -> OrbitGeometry {
    OrbitGeometry::new(a, e, i_deg.to_radians(), raan_deg.to_radians(), argp_deg.to_radians())
        .expect("preset geometry is valid")
}

fn srp(sun_au: f64) -> SrpSpec {
    SrpSpec {
        reflectivity: 1.0,
        mass_to_area: 20.0,
        sun_distance: sun_au * ASTRONOMICAL_UNIT,
    }
}

fn body(mass: f64, spin_rate: f64, shape: &str, gravity: GravityKind) -> BodySpec {
    BodySpec {
        mass,
        spin_rate,
        shape: Some(format!("builtin:{shape}")),
        shape_scale: None,
        gravity,
        harmonics_degree: (gravity == GravityKind::Harmonics).then_some(5),
        reference_radius: None,
        coefficients: None,
        coefficients_normalized: None,
        surface_radius: None,
        gravitational_constant: None,
    }
}

fn controller(disturbance: f64, hysteresis: Option<[f64; 3]>, u_max: Option<f64>) -> ControllerSpec {
    ControllerSpec {
        lambda: Some(2.0),
        lambda_r: None,
        lambda_n: None,
        disturbance: [disturbance; 3],
        n_phi: 5.0,
        hysteresis: hysteresis.map(|upper| HysteresisSpec {
            upper,
            lower: None,
            lower_phi_fraction: Some(1.0 / 3.0),
        }),
        u_max,
        pwpf: None,
        switching: SwitchingSpec::Saturation,
    }
}

fn sim(duration: f64, record_every: usize) -> SimSpec {
    SimSpec {
        duration,
        record_every,
        ..SimSpec::default()
    }
}

fn base(name: &str, body: BodySpec, target: OrbitGeometry, controller: ControllerSpec) -> Scenario {
    Scenario {
        name: name.into(),
        body,
        environment: EnvironmentSpec::default(),
        target,
        initial: InitialSpec::default(),
        events: Vec::new(),
        z_sign: None,
        controller,
        noise: NoiseSpec::default(),
        sim: SimSpec::default(),
        montecarlo: None,
        output: OutputSpec::default(),
        base_dir: None,
    }
}

fn itokawa(name: &str, target: OrbitGeometry) -> Scenario {
    let mut s = base(
        name,
        body(3.51e10, 1.4386e-4, "itokawa", GravityKind::Harmonics),
        target,
        controller(1e-4, None, None),
    );
    s.environment.srp = Some(srp(1.695));
    s
}

/// Bennu with navigation noise, thruster error, 1 mm/s² cap and the loose switch.
fn bennu(name: &str, target: OrbitGeometry) -> Scenario {
    let mut s = base(
        name,
        body(7.329e10, 4.0684e-4, "bennu", GravityKind::Harmonics),
        target,
        controller(1e-2, Some(LOOSE), Some(1e-3)),
    );
    s.environment.srp = Some(srp(0.8969));
    s.noise = NoiseSpec {
        sigma_r: 0.8,
        sigma_v: 1e-4,
        thruster_sigma: 0.03,
        seed: 1,
        measurement_period: None,
    };
    s
}

pub fn preset(name: &str) -> Result<Scenario, ScenarioError> {
    let canonical = PRESET_NAMES
        .iter()
        .chain(std::iter::once(&SWEEP_PRESET))
        .find(|n| key(n) == key(name))
        .ok_or_else(|| ScenarioError::UnknownPreset {
            name: name.into(),
            available: PRESET_NAMES.join(", "),
        })?;
    let terminator = |a: f64| geometry(a, 0.0, 90.0, 90.0, 0.0);
    let close_orbit = geometry(350.0, 0.0, 45.0, 45.0, 0.0);

    let s = match *canonical {
        "Itokawa" => itokawa("Itokawa", geometry(350.0, 0.1, 90.0, 90.0, 90.0)),
        "67P" => {
            let mut s = base(
                "67P",
                body(9.982e12, 1.4070e-4, "67p", GravityKind::Polyhedron),
                geometry(2100.0, 0.15, 110.0, 50.0, 0.0),
                controller(1e-2, None, None),
            );
            s.environment = EnvironmentSpec {
                frame: Frame::BodyFixed,
                srp: Some(srp(1.243)),
            };
            s
        }
        "Bennu-2h" => {
            let mut s = bennu("Bennu-2h", terminator(500.0));
            s.noise.measurement_period = Some(2.0 * HOUR);
            s.sim = sim(30.0 * DAY, 15);
            s
        }
        "Bennu-tight" => {
            let mut s = bennu("Bennu-tight", close_orbit);
            s.controller.hysteresis.as_mut().expect("bennu has a switch").upper = TIGHT;
            s
        }
        "Bennu-loose" => bennu("Bennu-loose", close_orbit),
        "Bennu-PWPF" => {
            let mut s = bennu("Bennu-PWPF", close_orbit);
            s.controller.hysteresis = None;
            s.controller.pwpf = Some(PwpfParams::default());
            s
        }
        "Bennu-hyperbolic" => {
            let mut s = bennu("Bennu-hyperbolic", terminator(1000.0));
            s.z_sign = Some(ZSignSpec {
                above: terminator(1000.0),
                below: geometry(-800.0, 1.5, 40.0, 90.0, 270.0),
            });
            s.sim = sim(30.0 * HOUR, 1);
            s
        }
        "Bennu-Hohmann" => {
            let mut s = bennu("Bennu-Hohmann", terminator(600.0));
            s.events = vec![
                EventSpec {
                    trigger: TriggerKind::Time,
                    at: Some(15.0 * HOUR),
                    tolerance: None,
                    align: AlignSpec::ApoapsisHere,
                    label: Some("transfer ellipse".into()),
                    target: geometry(475.0, 0.2632, 90.0, 90.0, 0.0),
                },
                EventSpec {
                    trigger: TriggerKind::Periapsis,
                    at: None,
                    tolerance: Some(5.0),
                    align: AlignSpec::None,
                    label: Some("final circle".into()),
                    target: terminator(350.0),
                },
            ];
            s.sim = sim(30.0 * HOUR, 1);
            s
        }
        "Bennu-Monte Carlo" => {
            let mut s = bennu("Bennu-Monte Carlo", geometry(450.0, 0.0, 45.0, 320.0, 0.0));
            s.montecarlo = Some(MonteCarloSpec {
                samples: 1000,
                position_sigma: 35.0,
                velocity_sigma: 0.02,
                base_seed: 1,
            });
            s
        }
        SWEEP_PRESET => {
            let mut s = itokawa(SWEEP_PRESET, terminator(500.0));
            let mu = GRAVITATIONAL_CONSTANT * s.body.mass;
            s.initial.position = Some([0.0, 0.0, 600.0]);
            s.initial.velocity = Some([0.0, -(mu / 600.0).sqrt(), 0.0]);
            s
        }
        _ => unreachable!("every listed name has a definition"),
    };
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve_loosely() {
        assert_eq!(preset("bennu_monte-carlo").unwrap().name, "Bennu-Monte Carlo");
        assert_eq!(preset("itokawa").unwrap().name, "Itokawa");
        assert!(matches!(preset("Vesta"), Err(ScenarioError::UnknownPreset { .. })));
    }

    #[test]
    fn every_preset_validates() {
        for name in PRESET_NAMES.iter().chain(std::iter::once(&SWEEP_PRESET)) {
            preset(name)
                .unwrap()
                .validate()
                .unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn hohmann_apoapsis_meets_first_circle() {
        let s = preset("Bennu-Hohmann").unwrap();
        let ellipse = s.events[0].target;
        assert!((ellipse.a * (1.0 + ellipse.e) - 600.0).abs() < 0.05);
        assert!((ellipse.periapsis() - 350.0).abs() < 0.05);
    }
}
