//! Experiment configuration: a human-editable TOML tree resolved against
//! the system and target catalogues.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use loglaw_core::dynamics::System;
use loglaw_core::estimators::{RadiusSchedule, TMaxRule};
use loglaw_core::hyperbolic::{FuchsianDomain, UnitTangent};
use loglaw_core::systems::{BaseMap, GeodesicFlow, LinearFlow, Roof, Rotation, SuspensionFlow};
use loglaw_core::targets::TargetFamily;
use loglaw_core::Complex;

/// Errors carrying the offending configuration key.
#[derive(Debug)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error at `{}`: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(key: &str, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        key: key.to_string(),
        message: message.into(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigFile {
    pub seed: u64,
    #[serde(default)]
    pub workers: Option<usize>,
    pub output_dir: String,
    #[serde(rename = "experiment")]
    pub experiments: Vec<ExperimentConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub kind: String,
    pub system: SystemSpec,
    #[serde(default)]
    pub target: Option<TargetSpec>,
    #[serde(default)]
    pub schedule: Option<ScheduleSpec>,
    #[serde(default)]
    pub ensemble: Option<usize>,
    #[serde(default)]
    pub t_max: Option<TMaxSpec>,
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub eps_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub t_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub observable: Option<String>,
    #[serde(default)]
    pub seed_offset: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// Suspension only: base map and roof.
    #[serde(default)]
    pub base: Option<String>,
    #[serde(default)]
    pub roof: Option<RoofSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoofSpec {
    #[serde(default)]
    pub constant: Option<f64>,
    #[serde(default)]
    pub c0: Option<f64>,
    #[serde(default)]
    pub c1: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetSpec {
    pub kind: String,
    #[serde(default)]
    pub center: Vec<f64>,
    /// "fixed" (default) or "adversarial" (rotation-liouville only):
    /// the per-radius worst-case center from the convergent structure.
    #[serde(default)]
    pub placement: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleSpec {
    #[serde(default)]
    pub l0: Option<f64>,
    #[serde(default)]
    pub ratio: Option<f64>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TMaxSpec {
    #[serde(default)]
    pub fixed: Option<f64>,
    #[serde(default)]
    pub coeff: Option<f64>,
    #[serde(default)]
    pub exponent: Option<f64>,
}

/// A system together with its optional hyperbolic domain handle.
pub struct ResolvedSystem {
    pub system: Box<dyn System>,
    pub domain: Option<Arc<FuchsianDomain>>,
    pub suspension: Option<SuspensionFlow>,
    pub rotation: Option<Rotation>,
}

pub fn parse_config(text: &str) -> Result<ConfigFile, ConfigError> {
    let cfg: ConfigFile = toml::from_str(text).map_err(|e| ConfigError {
        key: "<file>".into(),
        message: e.to_string(),
    })?;
    if cfg.experiments.is_empty() {
        return err("experiment", "at least one experiment is required");
    }
    Ok(cfg)
}

pub fn resolve_system(spec: &SystemSpec) -> Result<ResolvedSystem, ConfigError> {
    let mk = |system: Box<dyn System>| ResolvedSystem {
        system,
        domain: None,
        suspension: None,
        rotation: None,
    };
    match spec.name.as_str() {
        "cat" => Ok(mk(Box::new(loglaw_core::systems::CatMap))),
        "doubling" => Ok(mk(Box::new(loglaw_core::systems::DoublingMap))),
        "rotation-golden" => {
            let r = Rotation::golden();
            Ok(ResolvedSystem {
                system: Box::new(r.clone()),
                domain: None,
                suspension: None,
                rotation: Some(r),
            })
        }
        "rotation-liouville" => {
            let r = Rotation::liouville();
            Ok(ResolvedSystem {
                system: Box::new(r.clone()),
                domain: None,
                suspension: None,
                rotation: Some(r),
            })
        }
        "rotation-custom" => {
            let alpha = match spec.params.get("alpha") {
                Some(&a) => a,
                None => return err("system.params.alpha", "rotation-custom needs alpha"),
            };
            let r = Rotation::custom(alpha).map_err(|e| ConfigError {
                key: "system.params.alpha".into(),
                message: e.to_string(),
            })?;
            Ok(ResolvedSystem {
                system: Box::new(r.clone()),
                domain: None,
                suspension: None,
                rotation: Some(r),
            })
        }
        "linear-flow" => {
            let flow = match spec.params.get("slope") {
                Some(&s) => LinearFlow::new("linear-flow", s).map_err(|e| ConfigError {
                    key: "system.params.slope".into(),
                    message: e.to_string(),
                })?,
                None => LinearFlow::golden(),
            };
            Ok(mk(Box::new(flow)))
        }
        "suspension" => {
            let base = match spec.base.as_deref() {
                Some("cat") => BaseMap::Cat,
                Some("doubling") => BaseMap::Doubling,
                Some(other) => return err("system.base", format!("unknown base map `{other}`")),
                None => return err("system.base", "suspension needs a base map"),
            };
            let roof = match &spec.roof {
                Some(RoofSpec {
                    constant: Some(c), ..
                }) => Roof::Constant(*c),
                Some(RoofSpec {
                    c0: Some(c0),
                    c1: Some(c1),
                    ..
                }) => Roof::Cosine { c0: *c0, c1: *c1 },
                _ => {
                    return err(
                        "system.roof",
                        "suspension roof needs `constant` or `c0`+`c1`",
                    )
                }
            };
            let flow = SuspensionFlow::new("suspension", base, roof).map_err(|e| ConfigError {
                key: "system.roof".into(),
                message: e.to_string(),
            })?;
            Ok(ResolvedSystem {
                system: Box::new(flow.clone()),
                domain: None,
                suspension: Some(flow),
                rotation: None,
            })
        }
        "bolza" => {
            let flow = GeodesicFlow::bolza();
            let domain = flow.domain().clone();
            Ok(ResolvedSystem {
                system: Box::new(flow),
                domain: Some(domain),
                suspension: None,
                rotation: None,
            })
        }
        "modular" => {
            let flow = GeodesicFlow::modular();
            let domain = flow.domain().clone();
            Ok(ResolvedSystem {
                system: Box::new(flow),
                domain: Some(domain),
                suspension: None,
                rotation: None,
            })
        }
        other => err("system.name", format!("unknown system `{other}`")),
    }
}

pub fn resolve_schedule(spec: &Option<ScheduleSpec>) -> Result<RadiusSchedule, ConfigError> {
    let s = match spec {
        Some(s) => s,
        None => return err("schedule", "this experiment needs a radius schedule"),
    };
    let built = if let Some(values) = &s.values {
        RadiusSchedule::from_values(values.clone())
    } else {
        match (s.l0, s.ratio, s.count) {
            (Some(l0), Some(ratio), Some(count)) => RadiusSchedule::geometric(l0, ratio, count),
            _ => return err("schedule", "need `values` or `l0`+`ratio`+`count`"),
        }
    };
    built.map_err(|e| ConfigError {
        key: "schedule".into(),
        message: e.to_string(),
    })
}

pub fn resolve_t_max(spec: &Option<TMaxSpec>, default: TMaxRule) -> Result<TMaxRule, ConfigError> {
    match spec {
        None => Ok(default),
        Some(TMaxSpec {
            fixed: Some(t),
            coeff: None,
            exponent: None,
        }) => Ok(TMaxRule::Fixed(*t)),
        Some(TMaxSpec {
            fixed: None,
            coeff: Some(c),
            exponent: Some(e),
        }) => Ok(TMaxRule::PowerLaw {
            coeff: *c,
            exponent: *e,
        }),
        _ => err("t_max", "need either `fixed` or `coeff`+`exponent`"),
    }
}

/// Resolve a target against the system; `r_max` sizes translate caches.
pub fn resolve_target(
    spec: &TargetSpec,
    resolved: &ResolvedSystem,
    r_max: f64,
) -> Result<TargetFamily, ConfigError> {
    match (spec.kind.as_str(), &resolved.domain) {
        ("ball", None) => TargetFamily::torus_ball(&spec.center).map_err(|e| ConfigError {
            key: "target.center".into(),
            message: e.to_string(),
        }),
        ("ball", Some(dom)) => {
            let u = hyp_center(&spec.center)?;
            TargetFamily::hyp_ball(dom.clone(), u, r_max).map_err(|e| ConfigError {
                key: "target.center".into(),
                message: e.to_string(),
            })
        }
        ("sasaki-ball", Some(dom)) => {
            let u = hyp_center(&spec.center)?;
            TargetFamily::sasaki_ball(dom.clone(), u, r_max).map_err(|e| ConfigError {
                key: "target.center".into(),
                message: e.to_string(),
            })
        }
        ("sasaki-ball", None) => err(
            "target.kind",
            "sasaki-ball targets need a hyperbolic system",
        ),
        (other, _) => err("target.kind", format!("unknown target kind `{other}`")),
    }
}

fn hyp_center(center: &[f64]) -> Result<UnitTangent, ConfigError> {
    match center.len() {
        2 => Ok(UnitTangent::from_position(
            Complex::new(center[0], center[1]),
            std::f64::consts::FRAC_PI_2,
        )),
        3 => Ok(UnitTangent::from_position(
            Complex::new(center[0], center[1]),
            center[2],
        )),
        n => err(
            "target.center",
            format!("hyperbolic centers need [re, im] or [re, im, theta], got {n} entries"),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses() {
        let text = r#"
            seed = 7
            output_dir = "out"
            [[experiment]]
            name = "smoke"
            kind = "hitting-exponent"
            system = { name = "doubling" }
            target = { kind = "ball", center = [0.365] }
            schedule = { l0 = 0.0625, ratio = 0.5, count = 3 }
            ensemble = 30
        "#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.experiments.len(), 1);
        let sys = resolve_system(&cfg.experiments[0].system).unwrap();
        assert_eq!(sys.system.name(), "doubling");
    }

    #[test]
    fn unknown_system_names_the_key() {
        let spec = SystemSpec {
            name: "pigeon".into(),
            params: BTreeMap::new(),
            base: None,
            roof: None,
        };
        let e = match resolve_system(&spec) {
            Err(e) => e,
            Ok(_) => panic!("expected an error"),
        };
        assert_eq!(e.key, "system.name");
        assert!(e.message.contains("pigeon"));
    }

    #[test]
    fn suspension_requires_roof() {
        let spec = SystemSpec {
            name: "suspension".into(),
            params: BTreeMap::new(),
            base: Some("cat".into()),
            roof: None,
        };
        let e = match resolve_system(&spec) {
            Err(e) => e,
            Ok(_) => panic!("expected an error"),
        };
        assert_eq!(e.key, "system.roof");
    }

    #[test]
    fn bad_schedule_is_rejected() {
        let spec = Some(ScheduleSpec {
            l0: Some(0.25),
            ratio: Some(1.5),
            count: Some(4),
            values: None,
        });
        assert!(resolve_schedule(&spec).is_err());
    }
}
