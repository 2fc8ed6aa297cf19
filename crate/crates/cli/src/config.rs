//! Run configuration: JSON document, environment overrides, validation.

use std::path::Path;

use serde::{Deserialize, Serialize};

use cirsensor_core::metrology::{DetectorModel, SensorBudget};
use cirsensor_core::scattering::{Collision, ResonanceParams, TrapGeometry};
use cirsensor_core::units::{Species, UnitSystem};

use crate::CliError;

/// Prefix for environment overrides. Path segments are separated by a double
/// underscore since config keys themselves contain single underscores:
/// `CIRSENSOR_RESONANCE__A_BG=0.2` overrides `resonance.a_bg`.
pub const ENV_PREFIX: &str = "CIRSENSOR_";

/// Exactly one of `p` or `temperature_nk` selects the collision energy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollisionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_nk: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Directory all artifacts are written into.
    pub dir: String,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
}

fn default_format() -> OutputFormat {
    OutputFormat::Csv
}

/// The whole run configuration. Unknown keys anywhere are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub resonance: ResonanceParams<f64>,
    pub trap: TrapGeometry<f64>,
    pub species: Species<f64>,
    pub collision: CollisionSpec,
    pub detector: DetectorModel<f64>,
    pub budget: SensorBudget<f64>,
    pub seed: u64,
    pub output: OutputSpec,
}

/// Validated, derived quantities ready for the commands.
pub struct Run {
    pub config: RunConfig,
    pub units: UnitSystem<f64>,
    pub collision: Collision<f64>,
    /// Longitudinal momentum in ā⁻¹ (resolved from p or temperature).
    pub p: f64,
}

impl RunConfig {
    /// Load from a JSON file; a manifest written by an earlier run (an object
    /// with a `config` field) is accepted as well, so outputs can be
    /// reproduced directly from their manifest.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid JSON in {}: {e}", path.display())))?;
        if let Some(inner) = value.get("config") {
            value = inner.clone();
        }
        apply_env_overrides(&mut value, std::env::vars())?;
        serde_json::from_value(value)
            .map_err(|e| CliError::Config(format!("invalid configuration: {e}")))
    }

    /// Validate all component invariants and resolve derived quantities.
    pub fn into_run(self, seed_override: Option<u64>) -> Result<Run, CliError> {
        let cfg = |e: cirsensor_core::Error| CliError::Config(e.to_string());
        // re-run the constructors so hand-edited JSON cannot bypass invariants
        let resonance = ResonanceParams::new(
            self.resonance.a_bg,
            self.resonance.delta,
            self.resonance.b_res,
            self.resonance.dmu,
        )
        .map_err(cfg)?;
        let trap = TrapGeometry::new(self.trap.d, self.trap.mass_factor).map_err(cfg)?;
        let species = Species::new(self.species.mass_amu, self.species.abar_bohr).map_err(cfg)?;
        let detector = DetectorModel::new(self.detector.eta, self.detector.scheme).map_err(cfg)?;
        let budget = SensorBudget::new(
            self.budget.n_tubes,
            self.budget.m_reps,
            self.budget.tau_s,
            self.budget.total_time_s,
            self.budget.sigma_p,
        )
        .map_err(cfg)?;

        let units = UnitSystem::for_species(&species).map_err(cfg)?;
        let p = match (self.collision.p, self.collision.temperature_nk) {
            (Some(p), None) => p,
            (None, Some(t)) => units.temperature_to_momentum(t).map_err(cfg)?,
            _ => {
                return Err(CliError::Config(
                    "collision: give exactly one of `p` or `temperature_nk`".into(),
                ))
            }
        };
        let collision = Collision::new(p, &trap).map_err(cfg)?;

        let mut config = self;
        config.resonance = resonance;
        config.trap = trap;
        config.species = species;
        config.detector = detector;
        config.budget = budget;
        if let Some(seed) = seed_override {
            config.seed = seed;
        }
        Ok(Run {
            config,
            units,
            collision,
            p,
        })
    }
}

/// Apply `CIRSENSOR_SECTION__KEY=value` overrides onto the raw JSON tree.
/// Values parse as JSON scalars first and fall back to plain strings.
fn apply_env_overrides(
    value: &mut serde_json::Value,
    vars: impl Iterator<Item = (String, String)>,
) -> Result<(), CliError> {
    for (key, raw) in vars {
        let Some(path) = key.strip_prefix(ENV_PREFIX) else {
            continue;
        };
        let segments: Vec<String> = path.split("__").map(|s| s.to_ascii_lowercase()).collect();
        if segments.iter().any(|s| s.is_empty()) {
            return Err(CliError::Config(format!("malformed override key {key}")));
        }
        let parsed: serde_json::Value = serde_json::from_str(&raw)
            .unwrap_or_else(|_| serde_json::Value::String(raw.clone()));
        let (last, parents) = segments.split_last().expect("segments non-empty");
        let mut node = &mut *value;
        for seg in parents {
            let obj = node.as_object_mut().ok_or_else(|| {
                CliError::Config(format!("override {key}: {seg} is not an object"))
            })?;
            node = obj
                .entry(seg.clone())
                .or_insert_with(|| serde_json::Value::Object(Default::default()));
        }
        let obj = node
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("override {key}: target is not an object")))?;
        obj.insert(last.clone(), parsed);
    }
    Ok(())
}
