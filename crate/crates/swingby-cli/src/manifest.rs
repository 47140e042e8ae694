//! The sweep manifest: a JSON record of what was run, how figures are
//! normalized, headline gains, and every flagged cell.
//!
//! The manifest must be byte-identical for identical inputs, so it carries no
//! timestamps, no absolute paths, and no scheduling details such as the
//! worker count.

use serde::Serialize;
use sha2::{Digest, Sha256};
use swingby_core::aero::band_altitudes;
use swingby_core::maneuver::{ManeuverKind, ManeuverStatus};

use crate::csvout::kind_name;
use crate::sweep::{SweepCell, SweepPlan, SweepTable};

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub generator: Generator,
    pub config_sha256: String,
    pub planet: PlanetSummary,
    pub grid: GridSummary,
    pub normalization: &'static str,
    pub figures: Vec<FigureEntry>,
    pub headlines: Vec<Headline>,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Serialize)]
pub struct Generator {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct PlanetSummary {
    pub name: String,
    /// Analysis band, present only for worlds with an atmosphere.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band_km: Option<Band>,
}

#[derive(Debug, Serialize)]
pub struct Band {
    pub floor_km: f64,
    pub ceiling_km: f64,
}

#[derive(Debug, Serialize)]
pub struct GridSummary {
    pub kinds: Vec<&'static str>,
    pub psi_deg: Vec<f64>,
    pub altitude_km: AxisSummary,
    pub signed_ld: AxisSummary,
    pub cells: usize,
    pub baselines: usize,
}

#[derive(Debug, Serialize)]
pub struct AxisSummary {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Serialize)]
pub struct FigureEntry {
    pub file: String,
    pub metric: &'static str,
    pub kind: &'static str,
    pub psi_deg: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

/// Gains of the strongest lifting cell of one (kind, psi) slice: the most
/// negative signed L/D at the lowest projected altitude inside the analysis
/// band whose run produced metrics, measured against the pure gravity assist
/// at the same approach. Cells that dip below the band floor mid-pass keep
/// their metrics and stay eligible; their flag is reported in `status`.
#[derive(Debug, Serialize)]
pub struct Headline {
    pub kind: &'static str,
    pub psi_deg: f64,
    pub altitude_km: f64,
    pub signed_ld: f64,
    pub status: String,
    pub voe_km2_s2: f64,
    pub turn_angle_deg: f64,
    pub tof_band_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub voe_gain_km2_s2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub turn_angle_gain_deg: Option<f64>,
    pub delta_v_km_s: f64,
    /// Powered minus unpowered energy change at the same cell, when both
    /// completed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub voe_over_unpowered_km2_s2: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Failure {
    pub kind: &'static str,
    pub psi_deg: f64,
    pub altitude_km: f64,
    pub signed_ld: f64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

fn axis_summary(values: &[f64]) -> AxisSummary {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    AxisSummary { min, max, count: values.len() }
}

fn find_cell(
    table: &SweepTable,
    kind: ManeuverKind,
    psi: f64,
    altitude: f64,
    ld: f64,
) -> Option<&SweepCell> {
    table.cells.iter().find(|c| {
        c.kind == kind && c.psi_deg == psi && c.altitude_km == altitude && c.signed_ld == ld
    })
}

fn headlines(plan: &SweepPlan, table: &SweepTable) -> Vec<Headline> {
    let min_ld = plan.ld_values.iter().copied().fold(f64::INFINITY, f64::min);
    let n_alt = plan.altitudes_km.len();
    let planet = plan.planet();
    let band = (planet.surface_density_kg_m3 > 0.0)
        .then(|| band_altitudes(planet, &plan.base.spacecraft));
    let in_band = |alt: f64| band.is_none_or(|(floor, ceiling)| alt >= floor && alt <= ceiling);
    let mut out = Vec::new();
    for &kind in &plan.kinds {
        for (pi, &psi) in plan.psi_list.iter().enumerate() {
            let hit = plan.altitudes_km.iter().enumerate().find_map(|(ai, &alt)| {
                if !in_band(alt) {
                    return None;
                }
                let cell = find_cell(table, kind, psi, alt, min_ld)?;
                cell.metrics.is_some().then_some((ai, cell))
            });
            let Some((ai, cell)) = hit else { continue };
            let Some(metrics) = cell.metrics else { continue };
            let baseline = table.baselines.get(pi * n_alt + ai).and_then(|b| b.metrics);
            let unpowered = (kind == ManeuverKind::Pagam)
                .then(|| find_cell(table, ManeuverKind::Agam, psi, cell.altitude_km, min_ld))
                .flatten()
                .and_then(|a| a.metrics);
            out.push(Headline {
                kind: kind_name(kind),
                psi_deg: psi,
                altitude_km: cell.altitude_km,
                signed_ld: min_ld,
                status: cell.status.to_string(),
                voe_km2_s2: metrics.voe_km2_s2,
                turn_angle_deg: metrics.turn_angle_deg,
                tof_band_s: metrics.tof_band_s,
                voe_gain_km2_s2: baseline.map(|b| metrics.voe_km2_s2 - b.voe_km2_s2),
                turn_angle_gain_deg: baseline.map(|b| metrics.turn_angle_deg - b.turn_angle_deg),
                delta_v_km_s: metrics.delta_v_km_s,
                voe_over_unpowered_km2_s2: unpowered.map(|a| metrics.voe_km2_s2 - a.voe_km2_s2),
            });
        }
    }
    out
}

fn failures(table: &SweepTable) -> Vec<Failure> {
    table
        .rows()
        .filter(|c| c.status != ManeuverStatus::Ok)
        .map(|c| Failure {
            kind: kind_name(c.kind),
            psi_deg: c.psi_deg,
            altitude_km: c.altitude_km,
            signed_ld: c.signed_ld,
            status: c.status.to_string(),
            message: c.failure.clone(),
        })
        .collect()
}

/// Assembles the manifest from the plan, its results, the raw config bytes,
/// and the figure records produced by rendering.
pub fn build_manifest(
    plan: &SweepPlan,
    table: &SweepTable,
    config_bytes: &[u8],
    figures: Vec<FigureEntry>,
) -> Manifest {
    let planet = plan.planet();
    let band = (planet.surface_density_kg_m3 > 0.0).then(|| {
        let (floor_km, ceiling_km) = band_altitudes(planet, &plan.base.spacecraft);
        Band { floor_km, ceiling_km }
    });
    let digest = Sha256::digest(config_bytes);
    let mut sha = String::with_capacity(64);
    for byte in digest {
        sha.push_str(&format!("{byte:02x}"));
    }
    Manifest {
        generator: Generator {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        },
        config_sha256: sha,
        planet: PlanetSummary { name: planet.name.clone(), band_km: band },
        grid: GridSummary {
            kinds: plan.kinds.iter().map(|&k| kind_name(k)).collect(),
            psi_deg: plan.psi_list.clone(),
            altitude_km: axis_summary(&plan.altitudes_km),
            signed_ld: axis_summary(&plan.ld_values),
            cells: plan.cell_count(),
            baselines: plan.baseline_count(),
        },
        normalization: "each figure is scaled on its own: hue runs linearly from violet at the \
                        figure minimum to red at the figure maximum over cells with status Ok; \
                        every other cell is white",
        figures,
        headlines: headlines(plan, table),
        failures: failures(table),
    }
}

pub fn manifest_json(manifest: &Manifest) -> String {
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    text
}
