//! Altitude x L/D sweep execution: expands a plan into independent maneuver
//! runs, executes them on a worker pool, and assembles a deterministic table
//! with gravity-assist baselines and contribution percentages.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use swingby_core::aero;
use swingby_core::maneuver::{
    contribution, run_maneuver, ManeuverConfig, ManeuverKind, ManeuverMetrics, ManeuverStatus,
};
use swingby_core::planet::PlanetModel;

/// A resolved sweep: grids plus the shared maneuver template.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    /// Lifting kinds to map; gravity-assist baselines are implicit.
    pub kinds: Vec<ManeuverKind>,
    pub psi_list: Vec<f64>,
    pub altitudes_km: Vec<f64>,
    pub ld_values: Vec<f64>,
    /// Template for every run; kind, psi, altitude, and L/D are stamped in
    /// per cell.
    pub base: ManeuverConfig,
    /// Worker count; `None` picks the machine's parallelism.
    pub workers: Option<usize>,
}

impl SweepPlan {
    pub fn planet(&self) -> &PlanetModel {
        &self.base.planet
    }

    pub fn cell_count(&self) -> usize {
        self.kinds.len() * self.psi_list.len() * self.altitudes_km.len() * self.ld_values.len()
    }

    pub fn baseline_count(&self) -> usize {
        self.psi_list.len() * self.altitudes_km.len()
    }

    fn config_for(&self, kind: ManeuverKind, psi: f64, altitude: f64, ld: f64) -> ManeuverConfig {
        let mut config = self.base.clone();
        config.kind = kind;
        config.psi_deg = psi;
        config.pericenter_altitude_km = altitude;
        config.signed_ld = ld;
        config
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub kind: ManeuverKind,
    pub psi_deg: f64,
    pub altitude_km: f64,
    pub signed_ld: f64,
    /// Angle of attack realizing |signed_ld|, degrees; 0 for baselines.
    pub aoa_deg: f64,
    /// 0 for lift away from the planet, 180 toward it.
    pub bank_deg: f64,
    pub status: ManeuverStatus,
    pub metrics: Option<ManeuverMetrics>,
    /// Percent change over the gravity-assist baseline at the same altitude
    /// and psi; absent for baselines and unmeasured passes.
    pub voe_contrib_pct: Option<f64>,
    pub delta_contrib_pct: Option<f64>,
    /// Error text when the run itself failed.
    pub failure: Option<String>,
}

/// Sweep output: baselines (psi-major, then altitude) and cells (kind, psi,
/// altitude, then L/D). Both orders are fixed by the plan, not by worker
/// scheduling.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub baselines: Vec<SweepCell>,
    pub cells: Vec<SweepCell>,
}

impl SweepTable {
    /// Baseline for a cell, by position in the plan's grids.
    fn baseline_at(&self, psi_index: usize, altitude_index: usize, n_alt: usize) -> &SweepCell {
        &self.baselines[psi_index * n_alt + altitude_index]
    }

    /// All rows in export order: baselines first, then cells.
    pub fn rows(&self) -> impl Iterator<Item = &SweepCell> {
        self.baselines.iter().chain(self.cells.iter())
    }
}

struct Outcome {
    status: ManeuverStatus,
    metrics: Option<ManeuverMetrics>,
    failure: Option<String>,
}

fn execute(config: &ManeuverConfig) -> Outcome {
    match run_maneuver(config) {
        Ok(result) => Outcome {
            status: result.status,
            metrics: result.metrics,
            failure: None,
        },
        // A failed cell is recorded, never fatal to the sweep.
        Err(error) => Outcome {
            status: ManeuverStatus::StepFailure,
            metrics: None,
            failure: Some(error.to_string()),
        },
    }
}

fn run_jobs(jobs: &[ManeuverConfig], workers: usize) -> Vec<Outcome> {
    let mut slots: Vec<Option<Outcome>> = Vec::new();
    slots.resize_with(jobs.len(), || None);
    if jobs.is_empty() {
        return Vec::new();
    }

    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Outcome)>();
    std::thread::scope(|scope| {
        for _ in 0..workers.clamp(1, jobs.len()) {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= jobs.len() {
                    break;
                }
                if tx.send((index, execute(&jobs[index]))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        // Results land in plan order regardless of completion order.
        for (index, outcome) in rx {
            slots[index] = Some(outcome);
        }
    });
    slots.into_iter().map(|slot| slot.expect("every job ran")).collect()
}

fn aoa_and_bank(kind: ManeuverKind, signed_ld: f64, config: &ManeuverConfig) -> (f64, f64) {
    if kind == ManeuverKind::Gam {
        return (0.0, 0.0);
    }
    let aoa_rad = aero::ld_to_aoa(signed_ld.abs(), &config.spacecraft)
        .expect("L/D validated against the craft when the plan was built");
    let bank = if signed_ld < 0.0 { 180.0 } else { 0.0 };
    (aoa_rad.to_degrees(), bank)
}

/// Runs the whole grid. `workers_override` beats the plan's worker count.
pub fn run_sweep(plan: &SweepPlan, workers_override: Option<usize>) -> SweepTable {
    let workers = workers_override
        .or(plan.workers)
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1)
        .max(1);

    // Baselines first, then cells, in table order; job index = table slot.
    let mut jobs: Vec<ManeuverConfig> =
        Vec::with_capacity(plan.baseline_count() + plan.cell_count());
    for &psi in &plan.psi_list {
        for &altitude in &plan.altitudes_km {
            jobs.push(plan.config_for(ManeuverKind::Gam, psi, altitude, 0.0));
        }
    }
    for &kind in &plan.kinds {
        for &psi in &plan.psi_list {
            for &altitude in &plan.altitudes_km {
                for &ld in &plan.ld_values {
                    jobs.push(plan.config_for(kind, psi, altitude, ld));
                }
            }
        }
    }

    let mut outcomes = run_jobs(&jobs, workers).into_iter();

    let mut baselines = Vec::with_capacity(plan.baseline_count());
    for &psi in &plan.psi_list {
        for &altitude in &plan.altitudes_km {
            let outcome = outcomes.next().expect("baseline outcome");
            baselines.push(SweepCell {
                kind: ManeuverKind::Gam,
                psi_deg: psi,
                altitude_km: altitude,
                signed_ld: 0.0,
                aoa_deg: 0.0,
                bank_deg: 0.0,
                status: outcome.status,
                metrics: outcome.metrics,
                voe_contrib_pct: None,
                delta_contrib_pct: None,
                failure: outcome.failure,
            });
        }
    }

    let table_so_far = SweepTable {
        baselines,
        cells: Vec::new(),
    };
    let n_alt = plan.altitudes_km.len();

    let mut cells = Vec::with_capacity(plan.cell_count());
    for &kind in &plan.kinds {
        for (psi_index, &psi) in plan.psi_list.iter().enumerate() {
            for (altitude_index, &altitude) in plan.altitudes_km.iter().enumerate() {
                let baseline = table_so_far.baseline_at(psi_index, altitude_index, n_alt);
                for &ld in &plan.ld_values {
                    let outcome = outcomes.next().expect("cell outcome");
                    let (aoa_deg, bank_deg) = aoa_and_bank(kind, ld, &plan.base);
                    // Contributions compare measured passes; a flagged but
                    // measured baseline still serves as the reference.
                    let (voe_contrib, delta_contrib) = match (&outcome.metrics, &baseline.metrics)
                    {
                        (Some(m), Some(b)) => (
                            contribution(m.voe_km2_s2, b.voe_km2_s2),
                            contribution(m.turn_angle_deg, b.turn_angle_deg),
                        ),
                        _ => (None, None),
                    };
                    cells.push(SweepCell {
                        kind,
                        psi_deg: psi,
                        altitude_km: altitude,
                        signed_ld: ld,
                        aoa_deg,
                        bank_deg,
                        status: outcome.status,
                        metrics: outcome.metrics,
                        voe_contrib_pct: voe_contrib,
                        delta_contrib_pct: delta_contrib,
                        failure: outcome.failure,
                    });
                }
            }
        }
    }

    SweepTable {
        baselines: table_so_far.baselines,
        cells,
    }
}
