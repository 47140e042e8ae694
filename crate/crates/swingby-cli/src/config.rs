//! Configuration files: a single JSON schema that describes either one
//! maneuver or a whole altitude x L/D sweep.
//!
//! A file is a sweep when it carries any sweep-only key (`altitude_km` as a
//! range object, `ld`, `ld_list`, `psi_list`, `kinds`, `workers`); otherwise
//! it must be a complete single-maneuver description. Single configs accept
//! `altitude_km` and `ld` as shorthand for `pericenter_altitude_km` and
//! `signed_ld`, and accept the planet either as a catalog name or as a full
//! inline record, so a resolved config serializes and reloads unchanged.

use std::path::Path;

use swingby_core::aero::{self, SpacecraftModel};
use swingby_core::integrator::IntegratorSettings;
use swingby_core::maneuver::{ManeuverConfig, ManeuverError, ManeuverKind, VelocitySense};
use swingby_core::planet::PlanetModel;

use crate::catalog::{Catalog, CatalogError};
use crate::sweep::SweepPlan;

#[derive(Debug)]
pub enum LoadedConfig {
    Single(ManeuverConfig),
    Sweep(SweepPlan),
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("config field {field}: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
    #[error("config: {0}")]
    Maneuver(#[from] ManeuverError),
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

/// Reads and resolves a config file.
pub fn load_config(path: &Path, catalog: &Catalog) -> Result<LoadedConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text, catalog)
}

/// Parses config text; split from the file read so tests can feed strings.
pub fn parse_config(text: &str, catalog: &Catalog) -> Result<LoadedConfig, ConfigError> {
    // Parsed once as a raw value to decide the shape; serde errors on this
    // pass carry line and column context.
    let value: serde_json::Value = serde_json::from_str(text)?;
    let is_sweep = value.as_object().is_some_and(|map| {
        map.get("altitude_km").is_some_and(|v| v.is_object())
            || map.get("ld").is_some_and(|v| v.is_object())
            || map.contains_key("ld_list")
            || map.contains_key("psi_list")
            || map.contains_key("kinds")
            || map.contains_key("workers")
    });
    if is_sweep {
        let raw: RawSweep = serde_json::from_value(value)?;
        Ok(LoadedConfig::Sweep(resolve_sweep(raw, catalog)?))
    } else {
        Ok(LoadedConfig::Single(resolve_single(value, catalog)?))
    }
}

/// Planet given by catalog name or as a complete inline record.
#[derive(Debug, Clone, serde::Deserialize)]
#[serde(untagged)]
enum PlanetRef {
    Id(String),
    Inline(PlanetModel),
}

impl PlanetRef {
    fn resolve(self, catalog: &Catalog) -> Result<PlanetModel, CatalogError> {
        match self {
            Self::Id(id) => catalog.find(&id).cloned(),
            Self::Inline(planet) => Ok(planet),
        }
    }
}

fn resolve_single(
    mut value: serde_json::Value,
    catalog: &Catalog,
) -> Result<ManeuverConfig, ConfigError> {
    // Swap a planet name for its catalog record, then let the maneuver type
    // deserialize the rest (unknown keys rejected there).
    if let Some(planet) = value.get_mut("planet") {
        if let Some(id) = planet.as_str() {
            let record = catalog.find(id)?;
            *planet = serde_json::to_value(record)?;
        }
    }
    let config: ManeuverConfig = serde_json::from_value(value)?;
    config.validate()?;
    Ok(config)
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct AltitudeRange {
    min: f64,
    max: f64,
    step: f64,
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct LdRange {
    min: f64,
    max: f64,
    count: usize,
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    planet: PlanetRef,
    #[serde(default)]
    kinds: Option<Vec<ManeuverKind>>,
    #[serde(default)]
    psi_list: Option<Vec<f64>>,
    #[serde(default)]
    altitude_km: Option<AltitudeRange>,
    #[serde(default)]
    ld: Option<LdRange>,
    #[serde(default)]
    ld_list: Option<Vec<f64>>,
    #[serde(default)]
    pericenter_speed_vu: Option<f64>,
    #[serde(default)]
    velocity_sense: Option<VelocitySense>,
    #[serde(default)]
    pagam_thrust_continuum_only: Option<bool>,
    #[serde(default)]
    spacecraft: Option<SpacecraftModel>,
    #[serde(default)]
    integrator: Option<IntegratorSettings>,
    #[serde(default)]
    workers: Option<usize>,
}

/// Default sweep window: the analysis band widened to whole tens of km,
/// which reproduces the documented 230-270 km (Venus) and 70-100 km (Mars)
/// windows.
fn default_window(planet: &PlanetModel, craft: &SpacecraftModel) -> Option<AltitudeRange> {
    let (floor, ceiling) = aero::band_altitudes(planet, craft);
    if !(floor.is_finite() && ceiling.is_finite()) {
        return None;
    }
    Some(AltitudeRange {
        min: (floor / 10.0).floor() * 10.0,
        max: (ceiling / 10.0).ceil() * 10.0,
        step: 1.0,
    })
}

fn expand_altitudes(range: &AltitudeRange) -> Result<Vec<f64>, ConfigError> {
    if !(range.step.is_finite() && range.step > 0.0) {
        return Err(invalid("altitude_km.step", format!("must be > 0, got {}", range.step)));
    }
    if !(range.min.is_finite() && range.max.is_finite() && range.min <= range.max) {
        return Err(invalid(
            "altitude_km",
            format!("need finite min <= max, got [{}, {}]", range.min, range.max),
        ));
    }
    // Tolerate a hair of float error so an exact-multiple max is included.
    let count = ((range.max - range.min) / range.step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| range.min + k as f64 * range.step).collect())
}

fn expand_ld(range: &LdRange) -> Result<Vec<f64>, ConfigError> {
    if range.count == 0 {
        return Err(invalid("ld.count", "must be >= 1"));
    }
    if !(range.min.is_finite() && range.max.is_finite() && range.min <= range.max) {
        return Err(invalid(
            "ld",
            format!("need finite min <= max, got [{}, {}]", range.min, range.max),
        ));
    }
    if range.count == 1 {
        return Ok(vec![range.min]);
    }
    let span = range.max - range.min;
    Ok((0..range.count)
        .map(|k| range.min + span * k as f64 / (range.count - 1) as f64)
        .collect())
}

fn resolve_sweep(raw: RawSweep, catalog: &Catalog) -> Result<SweepPlan, ConfigError> {
    let planet = raw.planet.resolve(catalog)?;
    let spacecraft = raw.spacecraft.unwrap_or_default();

    let kinds = raw
        .kinds
        .unwrap_or_else(|| vec![ManeuverKind::Agam, ManeuverKind::Pagam]);
    if kinds.is_empty() {
        return Err(invalid("kinds", "must not be empty"));
    }
    if kinds.contains(&ManeuverKind::Gam) {
        return Err(invalid(
            "kinds",
            "gravity-assist baselines are always computed; list only lifting kinds",
        ));
    }

    let psi_list = raw.psi_list.unwrap_or_else(|| vec![90.0, 270.0]);
    if psi_list.is_empty() {
        return Err(invalid("psi_list", "must not be empty"));
    }
    if let Some(psi) = psi_list.iter().find(|p| !p.is_finite()) {
        return Err(invalid("psi_list", format!("entries must be finite, got {psi}")));
    }

    let altitudes_km = match &raw.altitude_km {
        Some(range) => expand_altitudes(range)?,
        None => {
            let range = default_window(&planet, &spacecraft).ok_or_else(|| {
                invalid(
                    "altitude_km",
                    "planet has no atmosphere, so no default window exists; give a range",
                )
            })?;
            expand_altitudes(&range)?
        }
    };

    let ld_values = match (&raw.ld, &raw.ld_list) {
        (Some(_), Some(_)) => {
            return Err(invalid("ld", "give either ld or ld_list, not both"));
        }
        (Some(range), None) => expand_ld(range)?,
        (None, Some(list)) if list.is_empty() => {
            return Err(invalid("ld_list", "must not be empty"));
        }
        (None, Some(list)) => list.clone(),
        (None, None) => expand_ld(&LdRange {
            min: -2.0,
            max: 2.0,
            count: 41,
        })?,
    };
    let (_, ld_peak) = aero::max_lift_to_drag(&spacecraft);
    for &ld in &ld_values {
        if !ld.is_finite() || ld.abs() > ld_peak {
            return Err(invalid(
                "ld",
                format!("|{ld}| exceeds the craft's peak lift-to-drag {ld_peak:.4}"),
            ));
        }
    }

    if raw.workers == Some(0) {
        return Err(invalid("workers", "must be >= 1"));
    }

    // Template carrying the shared fields; kind, psi, altitude, and L/D are
    // stamped per cell.
    let mut base = ManeuverConfig::new(planet, ManeuverKind::Gam, psi_list[0], altitudes_km[0]);
    base.spacecraft = spacecraft;
    if let Some(speed) = raw.pericenter_speed_vu {
        base.pericenter_speed_vu = speed;
    }
    if let Some(sense) = raw.velocity_sense {
        base.velocity_sense = sense;
    }
    if let Some(flag) = raw.pagam_thrust_continuum_only {
        base.pagam_thrust_continuum_only = flag;
    }
    if let Some(integrator) = raw.integrator {
        base.integrator = integrator;
    }
    base.validate()?;

    Ok(SweepPlan {
        kinds,
        psi_list,
        altitudes_km,
        ld_values,
        base,
        workers: raw.workers,
    })
}
