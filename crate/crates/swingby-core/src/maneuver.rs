//! Swing-by maneuver pipeline: pericenter seeding, backward and forward
//! propagation legs, and metric extraction.
//!
//! A maneuver starts from its pericenter state (t = 0), is propagated
//! backward under pure gravity to the encounter entry (planet distance
//! 0.5 DU or t = -pi/2, whichever comes first), then forward from that entry
//! with the maneuver's perturbation until the matching exit condition. The
//! quantities of interest compare the heliocentric orbit before and after
//! the encounter and describe the atmospheric pass itself.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::aero::{self, AeroContext, AeroError};
use crate::aero::SpacecraftModel;
use crate::dynamics::{self, DynamicsError, RotatingState};
use crate::integrator::{
    propagate, EventDirection, EventRecord, EventSpec, IntegratorSettings, OdeSystem,
    PropagateError, Propagation, Termination,
};
use crate::math;
use crate::planet::{PlanetModel, PlanetModelError};

/// Maneuver family: gravity assist alone, with aerodynamic forces, or with
/// drag-cancelling thrust.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ManeuverKind {
    /// Pure gravity assist, no atmospheric interaction.
    Gam,
    /// Aero-gravity assist: lift and drag act through the atmosphere.
    Agam,
    /// Powered aero-gravity assist: thrust cancels drag, lift remains, and
    /// the spent delta-v is accumulated.
    Pagam,
}

/// Direction the pericenter velocity points, as a rotation of the outward
/// radial direction. `Plus90` is counterclockwise (prograde around the
/// planet in the rotating frame for psi = 90 degrees).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum VelocitySense {
    #[default]
    #[cfg_attr(feature = "serde", serde(rename = "+90"))]
    Plus90,
    #[cfg_attr(feature = "serde", serde(rename = "-90"))]
    Minus90,
}

/// Full description of one maneuver.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ManeuverConfig {
    pub planet: PlanetModel,
    #[cfg_attr(feature = "serde", serde(default))]
    pub spacecraft: SpacecraftModel,
    pub kind: ManeuverKind,
    /// Approach angle of the projected pericenter, degrees counterclockwise
    /// from the Sun-to-planet direction.
    pub psi_deg: f64,
    /// Projected pericenter altitude above the surface, km.
    #[cfg_attr(feature = "serde", serde(alias = "altitude_km"))]
    pub pericenter_altitude_km: f64,
    /// Speed at the projected pericenter, VU.
    #[cfg_attr(feature = "serde", serde(default = "default_pericenter_speed"))]
    pub pericenter_speed_vu: f64,
    /// Lift-to-drag ratio with the bank direction in its sign: positive
    /// lifts radially away from the planet, negative toward it. Ignored for
    /// pure gravity assists.
    #[cfg_attr(feature = "serde", serde(default, alias = "ld"))]
    pub signed_ld: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub velocity_sense: VelocitySense,
    /// Restrict powered drag cancellation to continuum flow; outside it the
    /// drag then decelerates the craft and costs no propellant.
    #[cfg_attr(feature = "serde", serde(default))]
    pub pagam_thrust_continuum_only: bool,
    #[cfg_attr(feature = "serde", serde(default))]
    pub integrator: IntegratorSettings,
}

fn default_pericenter_speed() -> f64 {
    0.5
}

impl ManeuverConfig {
    /// A config with the stock spacecraft, 0.5 VU pericenter speed, zero
    /// lift-to-drag, counterclockwise sense, and default integrator.
    pub fn new(
        planet: PlanetModel,
        kind: ManeuverKind,
        psi_deg: f64,
        pericenter_altitude_km: f64,
    ) -> Self {
        Self {
            planet,
            spacecraft: SpacecraftModel::default(),
            kind,
            psi_deg,
            pericenter_altitude_km,
            pericenter_speed_vu: default_pericenter_speed(),
            signed_ld: 0.0,
            velocity_sense: VelocitySense::default(),
            pagam_thrust_continuum_only: false,
            integrator: IntegratorSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ManeuverError> {
        self.planet.validate()?;
        self.spacecraft.validate()?;
        self.integrator.validate().map_err(ManeuverError::Settings)?;
        if !self.psi_deg.is_finite() {
            return Err(ManeuverError::InvalidField { field: "psi_deg", value: self.psi_deg });
        }
        if !(self.pericenter_altitude_km.is_finite() && self.pericenter_altitude_km >= 0.0) {
            return Err(ManeuverError::InvalidField {
                field: "pericenter_altitude_km",
                value: self.pericenter_altitude_km,
            });
        }
        if !(self.pericenter_speed_vu.is_finite() && self.pericenter_speed_vu > 0.0) {
            return Err(ManeuverError::InvalidField {
                field: "pericenter_speed_vu",
                value: self.pericenter_speed_vu,
            });
        }
        if !self.signed_ld.is_finite() {
            return Err(ManeuverError::InvalidField {
                field: "signed_ld",
                value: self.signed_ld,
            });
        }
        if self.kind != ManeuverKind::Gam {
            // Rejects lift-to-drag magnitudes the airframe cannot reach.
            aero::ld_to_aoa(math::abs(self.signed_ld), &self.spacecraft)?;
        }
        Ok(())
    }
}

/// Outcome classification, strongest condition first: an integration
/// breakdown beats a surface hit, which beats a failure to escape, which
/// beats a dip below the analysis band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ManeuverStatus {
    /// Clean escape through the analysis band.
    Ok,
    /// Completed, but the pass dipped below the analysis-band floor; metrics
    /// are reported and the cell is flagged.
    BelowBand,
    /// Reached the surface.
    Collision,
    /// Still bound to the planet at the end of the encounter window.
    Captured,
    /// The integrator could not complete the forward leg.
    StepFailure,
}

impl core::fmt::Display for ManeuverStatus {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Self::Ok => "Ok",
            Self::BelowBand => "BelowBand",
            Self::Collision => "Collision",
            Self::Captured => "Captured",
            Self::StepFailure => "StepFailure",
        })
    }
}

/// Metrics of a completed pass (status `Ok` or `BelowBand`).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ManeuverMetrics {
    /// Heliocentric energy change across the encounter, km^2/s^2.
    pub voe_km2_s2: f64,
    /// Angle between the planet-relative inertial velocities at sphere-of-
    /// influence entry and exit, degrees.
    pub turn_angle_deg: f64,
    /// Time spent with the Knudsen number inside the analysis band, s.
    pub tof_band_s: f64,
    /// Altitude of the actual (refined minimum-distance) pericenter, km.
    pub actual_pericenter_altitude_km: f64,
    /// Approach angle of the actual pericenter, degrees counterclockwise
    /// from the Sun-to-planet direction, in [0, 360).
    pub actual_approach_angle_deg: f64,
    /// Actual minus projected pericenter altitude, km.
    pub pericenter_altitude_deviation_km: f64,
    /// Actual minus projected approach angle, degrees in [-180, 180).
    pub approach_angle_deviation_deg: f64,
    /// Propellant expense of drag cancellation, km/s. Zero except for
    /// powered maneuvers.
    pub delta_v_km_s: f64,
}

/// One state of the forward (encounter) leg.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    /// Accumulated drag-cancellation expense up to this state, VU.
    pub delta_v_vu: f64,
}

/// Result of one maneuver: status, metrics when the pass completed, and the
/// sampled forward leg.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrajectoryResult {
    pub status: ManeuverStatus,
    /// Populated for `Ok` and `BelowBand` only.
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub metrics: Option<ManeuverMetrics>,
    /// Accepted integration states of the forward leg, entry to exit. Empty
    /// when the forward leg failed.
    pub samples: Vec<TrajectorySample>,
}

/// Derivative-evaluation failure inside a propagation leg.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RhsError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Aero(#[from] AeroError),
}

#[derive(Debug, thiserror::Error)]
pub enum ManeuverError {
    #[error(transparent)]
    Planet(#[from] PlanetModelError),
    #[error(transparent)]
    Aero(#[from] AeroError),
    #[error("invalid integrator settings: {0}")]
    Settings(&'static str),
    #[error("{field} is out of range: {value}")]
    InvalidField { field: &'static str, value: f64 },
    #[error("backward leg failed: {0}")]
    BackwardLeg(PropagateError<RhsError>),
    #[error("trajectory never crosses the sphere of influence; encounter geometry is broken")]
    MissingSoiCrossing,
    #[error("no pericenter passage found on a completed trajectory")]
    MissingPericenter,
}

/// CRTBP with an optional aerodynamic perturbation. The fifth state slot
/// accumulates the drag-cancellation expense (rate zero unless powered).
struct EncounterSystem<'a> {
    mass_ratio: f64,
    aero: Option<&'a AeroContext>,
}

impl OdeSystem<5> for EncounterSystem<'_> {
    type Error = RhsError;

    fn eval(&self, t: f64, y: &[f64; 5]) -> Result<[f64; 5], RhsError> {
        let state = RotatingState { x: y[0], y: y[1], vx: y[2], vy: y[3], t };
        let (perturbation, dv_rate) = match self.aero {
            Some(ctx) => {
                let forces = ctx.eval(&state)?;
                (forces.perturbation, forces.delta_v_rate)
            }
            None => ([0.0, 0.0], 0.0),
        };
        let d = dynamics::crtbp_derivative(&state, self.mass_ratio, perturbation)?;
        Ok([d[0], d[1], d[2], d[3], dv_rate])
    }
}

/// Encounter entry produced by the backward leg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncounterStart {
    pub state: RotatingState,
    /// Heliocentric two-body energy at entry, canonical units.
    pub heliocentric_energy: f64,
}

/// Distance from the planet at which an encounter begins and ends, DU.
pub const ENCOUNTER_RADIUS_DU: f64 = 0.5;

/// Half-window of the encounter, TU: legs run from -pi/2 to +pi/2 at most.
pub const ENCOUNTER_TIME_LIMIT_TU: f64 = PI / 2.0;

/// State at the projected pericenter, t = 0.
///
/// The position sits `pericenter_altitude_km` above the surface along the
/// direction psi from the planet; the velocity is the pericenter speed along
/// the radial direction rotated by the velocity sense, making the radial
/// rate zero.
pub fn pericenter_state(config: &ManeuverConfig) -> RotatingState {
    let planet = &config.planet;
    let r_p = planet.altitude_to_r2_du(config.pericenter_altitude_km);
    let psi = config.psi_deg.to_radians();
    let (sin_psi, cos_psi) = (math::sin(psi), math::cos(psi));
    let [px, py] = planet.position();
    let speed = config.pericenter_speed_vu;
    let (vx, vy) = match config.velocity_sense {
        VelocitySense::Plus90 => (-speed * sin_psi, speed * cos_psi),
        VelocitySense::Minus90 => (speed * sin_psi, -speed * cos_psi),
    };
    RotatingState { x: px + r_p * cos_psi, y: py + r_p * sin_psi, vx, vy, t: 0.0 }
}

fn r2_of(y: &[f64; 5], mass_ratio: f64) -> f64 {
    math::hypot(y[0] - (1.0 - mass_ratio), y[1])
}

/// Pure-gravity propagation from the pericenter back to the encounter entry.
///
/// Expects a validated config. Ends where the planet distance reaches
/// [`ENCOUNTER_RADIUS_DU`] or at t = -pi/2, whichever comes first, and
/// evaluates the heliocentric energy there.
pub fn backward_leg(config: &ManeuverConfig) -> Result<EncounterStart, ManeuverError> {
    let mu = config.planet.mass_ratio;
    let peri = pericenter_state(config);
    let system = EncounterSystem { mass_ratio: mu, aero: None };
    let far = |_t: f64, y: &[f64; 5]| r2_of(y, mu) - ENCOUNTER_RADIUS_DU;
    let events = [EventSpec {
        label: "encounter-entry",
        direction: EventDirection::Rising,
        terminal: true,
        function: &far,
    }];
    let y0 = [peri.x, peri.y, peri.vx, peri.vy, 0.0];
    let run = propagate(&system, y0, 0.0, -ENCOUNTER_TIME_LIMIT_TU, &events, &config.integrator)
        .map_err(ManeuverError::BackwardLeg)?;
    let end = run.final_sample();
    let state = RotatingState { x: end.y[0], y: end.y[1], vx: end.y[2], vy: end.y[3], t: end.t };
    let heliocentric_energy =
        dynamics::heliocentric_energy(&state, mu).map_err(|e| ManeuverError::BackwardLeg(
            PropagateError::Rhs { t: end.t, source: RhsError::Dynamics(e) },
        ))?;
    Ok(EncounterStart { state, heliocentric_energy })
}

// Forward-leg event registry. Extraction reads records by these indices.
const EV_SOI: usize = 0;
const EV_BAND_FLOOR: usize = 1;
const EV_BAND_CEILING: usize = 2;
const EV_PERICENTER: usize = 3;
const EV_SURFACE: usize = 4;
const EV_EXIT: usize = 5;

/// Forward propagation of the encounter with the maneuver's perturbation.
///
/// `aero` must come from [`aero_context`] for the same config. Watches the
/// sphere of influence, both analysis-band boundaries, pericenter passages
/// (radial-rate sign change), the surface (terminal), and the encounter exit
/// at [`ENCOUNTER_RADIUS_DU`] or t = +pi/2 (terminal).
pub fn forward_leg(
    initial: &RotatingState,
    config: &ManeuverConfig,
    aero: Option<&AeroContext>,
) -> Result<Propagation<5>, PropagateError<RhsError>> {
    let planet = &config.planet;
    let mu = planet.mass_ratio;
    let soi = planet.soi_radius_du();
    let (floor_alt, ceiling_alt) = aero::band_altitudes(planet, &config.spacecraft);
    let radius_km = planet.radius_km;
    let du_km = planet.du_km();
    let altitude = move |y: &[f64; 5]| r2_of(y, mu) * du_km - radius_km;

    let soi_fn = |_t: f64, y: &[f64; 5]| r2_of(y, mu) - soi;
    let floor_fn = |_t: f64, y: &[f64; 5]| altitude(y) - floor_alt;
    let ceiling_fn = |_t: f64, y: &[f64; 5]| altitude(y) - ceiling_alt;
    // Radial rate sign: negative approaching, positive receding.
    let radial_rate = |_t: f64, y: &[f64; 5]| {
        (y[0] - (1.0 - mu)) * y[2] + y[1] * y[3]
    };
    let surface_fn = |_t: f64, y: &[f64; 5]| altitude(y);
    let exit_fn = |_t: f64, y: &[f64; 5]| r2_of(y, mu) - ENCOUNTER_RADIUS_DU;

    let events = [
        EventSpec {
            label: "soi",
            direction: EventDirection::Any,
            terminal: false,
            function: &soi_fn,
        },
        EventSpec {
            label: "band-floor",
            direction: EventDirection::Any,
            terminal: false,
            function: &floor_fn,
        },
        EventSpec {
            label: "band-ceiling",
            direction: EventDirection::Any,
            terminal: false,
            function: &ceiling_fn,
        },
        EventSpec {
            label: "pericenter",
            direction: EventDirection::Rising,
            terminal: false,
            function: &radial_rate,
        },
        EventSpec {
            label: "surface",
            direction: EventDirection::Falling,
            terminal: true,
            function: &surface_fn,
        },
        EventSpec {
            label: "encounter-exit",
            direction: EventDirection::Rising,
            terminal: true,
            function: &exit_fn,
        },
    ];

    debug_assert_eq!(events.len(), EV_EXIT + 1, "event registry indices must match the array");
    let system = EncounterSystem { mass_ratio: mu, aero };
    let y0 = [initial.x, initial.y, initial.vx, initial.vy, 0.0];
    propagate(&system, y0, initial.t, ENCOUNTER_TIME_LIMIT_TU, &events, &config.integrator)
}

/// Builds the aerodynamic context for a config; pure gravity assists get
/// none. Fails when the requested lift-to-drag magnitude is unreachable.
pub fn aero_context(config: &ManeuverConfig) -> Result<Option<AeroContext>, ManeuverError> {
    match config.kind {
        ManeuverKind::Gam => Ok(None),
        ManeuverKind::Agam | ManeuverKind::Pagam => Ok(Some(AeroContext::new(
            &config.planet,
            &config.spacecraft,
            config.kind,
            config.signed_ld,
            config.pagam_thrust_continuum_only,
        )?)),
    }
}

fn normalize_deg(x: f64) -> f64 {
    let r = x - 360.0 * math::floor(x / 360.0);
    // floor rounding can leave exactly 360.0 for tiny negative inputs.
    if r >= 360.0 {
        r - 360.0
    } else {
        r
    }
}

/// Difference a - b folded into [-180, 180).
fn wrap_angle_diff_deg(a: f64, b: f64) -> f64 {
    normalize_deg(a - b + 180.0) - 180.0
}

fn angle_between_deg(a: [f64; 2], b: [f64; 2]) -> f64 {
    let na = math::hypot(a[0], a[1]);
    let nb = math::hypot(b[0], b[1]);
    let cosine = ((a[0] * b[0] + a[1] * b[1]) / (na * nb)).clamp(-1.0, 1.0);
    math::acos(cosine).to_degrees()
}

/// Time spent inside the altitude band, from boundary-crossing records.
///
/// Both boundary events use direction `Any`; each record's own direction
/// tells which side the craft moved to. `inside_at_end` covers trajectories
/// that terminate between the boundaries.
fn band_residence_time(
    events: &[EventRecord<5>],
    entry_altitude_km: f64,
    floor_alt_km: f64,
    ceiling_alt_km: f64,
    t_start: f64,
    t_end: f64,
) -> f64 {
    let mut above_floor = entry_altitude_km >= floor_alt_km;
    let mut below_ceiling = entry_altitude_km <= ceiling_alt_km;
    let mut inside = above_floor && below_ceiling;
    let mut t_enter = t_start;
    let mut total = 0.0;
    for ev in events {
        match (ev.index, ev.direction) {
            (EV_BAND_FLOOR, EventDirection::Falling) => above_floor = false,
            (EV_BAND_FLOOR, EventDirection::Rising) => above_floor = true,
            (EV_BAND_CEILING, EventDirection::Falling) => below_ceiling = true,
            (EV_BAND_CEILING, EventDirection::Rising) => below_ceiling = false,
            _ => continue,
        }
        let now = above_floor && below_ceiling;
        if now && !inside {
            t_enter = ev.t;
        } else if !now && inside {
            total += ev.t - t_enter;
        }
        inside = now;
    }
    if inside {
        total += t_end - t_enter;
    }
    total
}

/// Classifies the outcome and extracts metrics from a completed forward leg.
///
/// Metrics are populated for `Ok` and `BelowBand` outcomes; collisions and
/// captures carry none. Errors only on broken encounter geometry (no
/// sphere-of-influence crossing, or no pericenter on a completed pass).
pub fn extract_metrics(
    run: &Propagation<5>,
    start: &EncounterStart,
    config: &ManeuverConfig,
) -> Result<TrajectoryResult, ManeuverError> {
    let planet = &config.planet;
    let mu = planet.mass_ratio;
    let samples: Vec<TrajectorySample> = run
        .samples
        .iter()
        .map(|s| TrajectorySample {
            t: s.t,
            x: s.y[0],
            y: s.y[1],
            vx: s.y[2],
            vy: s.y[3],
            delta_v_vu: s.y[4],
        })
        .collect();

    if let Termination::Event { index: EV_SURFACE, .. } = run.termination {
        return Ok(TrajectoryResult {
            status: ManeuverStatus::Collision,
            metrics: None,
            samples,
        });
    }

    let end = run.final_sample();
    let end_state = RotatingState { x: end.y[0], y: end.y[1], vx: end.y[2], vy: end.y[3], t: end.t };
    let end_rel = dynamics::planet_relative(&end_state, planet);
    if end_rel.two_body_energy <= 0.0 {
        return Ok(TrajectoryResult {
            status: ManeuverStatus::Captured,
            metrics: None,
            samples,
        });
    }

    let below_band = run
        .events
        .iter()
        .any(|e| e.index == EV_BAND_FLOOR && e.direction == EventDirection::Falling);

    let rel_at = |record: &EventRecord<5>| {
        let state = RotatingState {
            x: record.y[0],
            y: record.y[1],
            vx: record.y[2],
            vy: record.y[3],
            t: record.t,
        };
        dynamics::planet_relative(&state, planet)
    };

    let entry = run
        .events
        .iter()
        .find(|e| e.index == EV_SOI && e.direction == EventDirection::Falling)
        .ok_or(ManeuverError::MissingSoiCrossing)?;
    let exit = run
        .events
        .iter()
        .rfind(|e| e.index == EV_SOI && e.direction == EventDirection::Rising)
        .ok_or(ManeuverError::MissingSoiCrossing)?;
    let turn_angle_deg =
        angle_between_deg(rel_at(entry).v_rel_inertial_vu, rel_at(exit).v_rel_inertial_vu);

    let energy_end = dynamics::heliocentric_energy(&end_state, mu).map_err(|_| {
        // The end state sits 0.5 DU from the planet; a singular radius there
        // means the geometry was broken from the start.
        ManeuverError::MissingSoiCrossing
    })?;
    let vu = planet.vu_km_s();
    let voe_km2_s2 = (energy_end - start.heliocentric_energy) * vu * vu;

    let (floor_alt, ceiling_alt) = aero::band_altitudes(planet, &config.spacecraft);
    let first = run.samples.first().expect("propagation keeps the initial sample");
    let entry_altitude_km =
        planet.altitude_km(math::hypot(first.y[0] - (1.0 - mu), first.y[1]));
    let tof_band_s = band_residence_time(
        &run.events,
        entry_altitude_km,
        floor_alt,
        ceiling_alt,
        first.t,
        end.t,
    ) * planet.tu_s();

    let pericenter = run
        .events
        .iter()
        .filter(|e| e.index == EV_PERICENTER)
        .min_by(|a, b| {
            let ra = math::hypot(a.y[0] - (1.0 - mu), a.y[1]);
            let rb = math::hypot(b.y[0] - (1.0 - mu), b.y[1]);
            ra.partial_cmp(&rb).expect("finite planet distances")
        })
        .ok_or(ManeuverError::MissingPericenter)?;
    let peri_rel_x = pericenter.y[0] - (1.0 - mu);
    let peri_rel_y = pericenter.y[1];
    let actual_pericenter_altitude_km = planet.altitude_km(math::hypot(peri_rel_x, peri_rel_y));
    let actual_approach_angle_deg =
        normalize_deg(math::atan2(peri_rel_y, peri_rel_x).to_degrees());

    let delta_v_km_s = match config.kind {
        ManeuverKind::Pagam => end.y[4] * vu,
        ManeuverKind::Gam | ManeuverKind::Agam => 0.0,
    };

    let metrics = ManeuverMetrics {
        voe_km2_s2,
        turn_angle_deg,
        tof_band_s,
        actual_pericenter_altitude_km,
        actual_approach_angle_deg,
        pericenter_altitude_deviation_km: actual_pericenter_altitude_km
            - config.pericenter_altitude_km,
        approach_angle_deviation_deg: wrap_angle_diff_deg(
            actual_approach_angle_deg,
            config.psi_deg,
        ),
        delta_v_km_s,
    };

    Ok(TrajectoryResult {
        status: if below_band { ManeuverStatus::BelowBand } else { ManeuverStatus::Ok },
        metrics: Some(metrics),
        samples,
    })
}

/// Runs the full pipeline: validate, seed the pericenter, propagate both
/// legs, classify, extract. Deterministic for identical configs.
///
/// Forward-leg integration breakdowns are reported as a `StepFailure`
/// result, not an error; errors indicate an unusable config or broken
/// encounter geometry.
pub fn run_maneuver(config: &ManeuverConfig) -> Result<TrajectoryResult, ManeuverError> {
    config.validate()?;
    let aero = aero_context(config)?;
    let start = backward_leg(config)?;
    match forward_leg(&start.state, config, aero.as_ref()) {
        Ok(run) => extract_metrics(&run, &start, config),
        Err(_) => Ok(TrajectoryResult {
            status: ManeuverStatus::StepFailure,
            metrics: None,
            samples: Vec::new(),
        }),
    }
}

/// Percentage change of a metric against its pure-gravity baseline:
/// 100 (x - baseline) / |baseline|. `None` when the baseline is too close to
/// zero to divide by.
pub fn contribution(value: f64, baseline: f64) -> Option<f64> {
    if math::abs(baseline) < 1e-12 {
        return None;
    }
    Some(100.0 * (value - baseline) / math::abs(baseline))
}
