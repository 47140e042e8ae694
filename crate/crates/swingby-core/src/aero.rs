//! Exponential atmosphere, rarefaction regimes, and aerodynamic forces.
//!
//! Density follows ρ(h) = ρ₀ e^(−h/H). The Knudsen number Kn = λ/l (mean
//! free path over vehicle reference length) selects the flow regime:
//!
//! * Kn ≥ 10: free molecular flow, drag only at a fixed coefficient;
//! * Kn ≤ 0.01: continuum, modified Newtonian coefficients
//!   C_L = k sin²α cos α, C_D = C_D0 + k sin³α (valid to 20° of attack);
//! * in between: transition, zero lift and a drag coefficient bridged between
//!   the two limits by sin²(½π (log₁₀Kn + 2)/3).
//!
//! The analysis band Kn ∈ [10⁻³, 10⁻²] marks where the maneuver results are
//! read off; it sits inside the continuum regime.
//!
//! Attitude is a single signed lift-to-drag ratio: the magnitude fixes the
//! angle of attack on the monotone branch below the L/D peak, the sign banks
//! the lift radially outward (+) or inward (−) relative to the planet.

use crate::dynamics::RotatingState;
use crate::maneuver::ManeuverKind;
use crate::math;
use crate::planet::PlanetModel;

/// Knudsen number at and above which the flow is free molecular.
pub const KN_FREE_MOLECULAR: f64 = 10.0;
/// Knudsen number at and below which the flow is continuum.
pub const KN_CONTINUUM: f64 = 1e-2;
/// Analysis band bounds in Knudsen number, [dense edge, rarefied edge].
pub const KN_BAND: [f64; 2] = [1e-3, 1e-2];
/// Densities below this are treated as vacuum: no aerodynamic force.
pub const DENSITY_CUTOFF_KG_M3: f64 = 1e-15;
/// Validity limit of the modified Newtonian coefficient fit.
pub const MAX_NEWTONIAN_AOA_DEG: f64 = 20.0;

const AVOGADRO: f64 = 6.02214076e23;
const SQRT_2: f64 = core::f64::consts::SQRT_2;
const PI: f64 = core::f64::consts::PI;

/// Vehicle aerodynamic description.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields, default))]
pub struct SpacecraftModel {
    /// Reference area over mass, m²/kg.
    pub area_to_mass_m2_kg: f64,
    /// Length used in the Knudsen number, m.
    pub reference_length_m: f64,
    /// Drag coefficient in free molecular flow.
    pub cd_free_molecular: f64,
    /// `k` in the modified Newtonian C_L and C_D.
    pub newtonian_lift_constant: f64,
    /// Zero-incidence drag C_D0 in the continuum fit.
    pub newtonian_zero_drag: f64,
    /// Largest commanded angle of attack, degrees (≤ 20).
    pub max_aoa_deg: f64,
}

impl Default for SpacecraftModel {
    fn default() -> Self {
        Self {
            area_to_mass_m2_kg: 0.02,
            reference_length_m: 5.0,
            cd_free_molecular: 1.0,
            newtonian_lift_constant: 3.49,
            newtonian_zero_drag: 0.046,
            max_aoa_deg: 17.0,
        }
    }
}

impl SpacecraftModel {
    pub fn validate(&self) -> Result<(), AeroError> {
        let fields = [
            ("area_to_mass_m2_kg", self.area_to_mass_m2_kg),
            ("reference_length_m", self.reference_length_m),
            ("cd_free_molecular", self.cd_free_molecular),
            ("newtonian_lift_constant", self.newtonian_lift_constant),
            ("newtonian_zero_drag", self.newtonian_zero_drag),
            ("max_aoa_deg", self.max_aoa_deg),
        ];
        for (field, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(AeroError::NonPositive { field, value });
            }
        }
        if self.max_aoa_deg > MAX_NEWTONIAN_AOA_DEG {
            return Err(AeroError::AoaOutOfRange {
                aoa_deg: self.max_aoa_deg,
                max_deg: MAX_NEWTONIAN_AOA_DEG,
            });
        }
        Ok(())
    }
}

/// Rarefaction classes in order of decreasing Knudsen number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FlowClass {
    FreeMolecular,
    Transition,
    Continuum,
}

/// Flow class plus whether Kn falls in the analysis band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowRegime {
    pub class: FlowClass,
    pub in_analysis_band: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum AeroError {
    #[error("{field} must be finite and strictly positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("angle of attack {aoa_deg} deg outside the Newtonian fit range [0, {max_deg}]")]
    AoaOutOfRange { aoa_deg: f64, max_deg: f64 },
    #[error("lift-to-drag magnitude {requested} exceeds the achievable maximum {max}")]
    LdOutOfRange { requested: f64, max: f64 },
    #[error("lift direction undefined: {reason}")]
    DegenerateLift { reason: &'static str },
}

/// Atmospheric density at altitude, kg/m³.
pub fn density(altitude_km: f64, planet: &PlanetModel) -> f64 {
    planet.surface_density_kg_m3 * math::exp(-altitude_km / planet.scale_height_km)
}

/// Mean free path λ = M / (√2 π d² N_A ρ) at altitude, m.
pub fn mean_free_path_m(altitude_km: f64, planet: &PlanetModel) -> f64 {
    mean_free_path_density_product(planet) / density(altitude_km, planet)
}

/// The altitude-independent product λ·ρ, kg/m².
fn mean_free_path_density_product(planet: &PlanetModel) -> f64 {
    let d = planet.kinetic_diameter_m;
    planet.molecular_weight_kg_mol / (SQRT_2 * PI * d * d * AVOGADRO)
}

/// Knudsen number λ/l at altitude.
pub fn knudsen(altitude_km: f64, planet: &PlanetModel, craft: &SpacecraftModel) -> f64 {
    mean_free_path_m(altitude_km, planet) / craft.reference_length_m
}

/// Flow classification; boundaries belong to the limiting regimes.
pub fn classify_regime(kn: f64) -> FlowRegime {
    debug_assert!(kn > 0.0, "Knudsen number must be positive, got {kn}");
    let class = if kn >= KN_FREE_MOLECULAR {
        FlowClass::FreeMolecular
    } else if kn <= KN_CONTINUUM {
        FlowClass::Continuum
    } else {
        FlowClass::Transition
    };
    FlowRegime { class, in_analysis_band: (KN_BAND[0]..=KN_BAND[1]).contains(&kn) }
}

/// Continuum (C_L, C_D) at an angle of attack in radians.
pub fn continuum_coefficients(aoa_rad: f64, craft: &SpacecraftModel) -> Result<(f64, f64), AeroError> {
    let max_rad = MAX_NEWTONIAN_AOA_DEG.to_radians();
    if !(0.0..=max_rad).contains(&aoa_rad) {
        return Err(AeroError::AoaOutOfRange {
            aoa_deg: aoa_rad.to_degrees(),
            max_deg: MAX_NEWTONIAN_AOA_DEG,
        });
    }
    let s = math::sin(aoa_rad);
    let c = math::cos(aoa_rad);
    let k = craft.newtonian_lift_constant;
    Ok((k * s * s * c, craft.newtonian_zero_drag + k * s * s * s))
}

fn ld_of_aoa(aoa_rad: f64, craft: &SpacecraftModel) -> f64 {
    let s = math::sin(aoa_rad);
    let c = math::cos(aoa_rad);
    let k = craft.newtonian_lift_constant;
    (k * s * s * c) / (craft.newtonian_zero_drag + k * s * s * s)
}

/// Angle of attack and value of the L/D peak, restricted to the commanded
/// range [0, max_aoa]. Golden-section search; L/D is unimodal there.
pub fn max_lift_to_drag(craft: &SpacecraftModel) -> (f64, f64) {
    let mut lo = 0.0f64;
    let mut hi = craft.max_aoa_deg.min(MAX_NEWTONIAN_AOA_DEG).to_radians();
    let inv_phi = 0.618_033_988_749_894_9_f64;
    while hi - lo > 1e-14 {
        let a = hi - inv_phi * (hi - lo);
        let b = lo + inv_phi * (hi - lo);
        if ld_of_aoa(a, craft) >= ld_of_aoa(b, craft) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let aoa = 0.5 * (lo + hi);
    (aoa, ld_of_aoa(aoa, craft))
}

/// Inverts |L/D| to an angle of attack on the monotone branch below the peak.
///
/// Bisection on [0, aoa_peak]; the returned angle reproduces the requested
/// ratio to better than 1e−10 when evaluated forward.
pub fn ld_to_aoa(ld_abs: f64, craft: &SpacecraftModel) -> Result<f64, AeroError> {
    let (aoa_peak, ld_peak) = max_lift_to_drag(craft);
    if !(0.0..=ld_peak).contains(&ld_abs) {
        return Err(AeroError::LdOutOfRange { requested: ld_abs, max: ld_peak });
    }
    // Exact zero, not a bisection residue: downstream code treats zero lift
    // as "no lift direction needed" and must see a true 0.
    if ld_abs == 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0f64;
    let mut hi = aoa_peak;
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if ld_of_aoa(mid, craft) < ld_abs {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Drag coefficient across all regimes: continuum value, free-molecular
/// value, or the sine-squared logarithmic bridge between them. Continuous at
/// both boundaries.
pub fn drag_coefficient(kn: f64, aoa_rad: f64, craft: &SpacecraftModel) -> Result<f64, AeroError> {
    let (_, cd_cont) = continuum_coefficients(aoa_rad, craft)?;
    Ok(bridge_drag(kn, cd_cont, craft.cd_free_molecular))
}

fn bridge_drag(kn: f64, cd_continuum: f64, cd_free_molecular: f64) -> f64 {
    match classify_regime(kn).class {
        FlowClass::Continuum => cd_continuum,
        FlowClass::FreeMolecular => cd_free_molecular,
        FlowClass::Transition => {
            let s = math::sin(0.5 * PI * (math::log10(kn) + 2.0) / 3.0);
            cd_continuum + (cd_free_molecular - cd_continuum) * s * s
        }
    }
}

/// Lift and drag coefficients at a Knudsen number: lift exists only in the
/// continuum regime.
pub fn bridged_coefficients(
    kn: f64,
    aoa_rad: f64,
    craft: &SpacecraftModel,
) -> Result<(f64, f64), AeroError> {
    let (cl_cont, cd_cont) = continuum_coefficients(aoa_rad, craft)?;
    let regime = classify_regime(kn);
    let cl = if regime.class == FlowClass::Continuum { cl_cont } else { 0.0 };
    Ok((cl, bridge_drag(kn, cd_cont, craft.cd_free_molecular)))
}

/// Altitudes (km) where Kn crosses the analysis-band edges: (dense floor at
/// Kn = 10⁻³, rarefied ceiling at Kn = 10⁻²). Closed-form inversion of the
/// exponential atmosphere.
pub fn band_altitudes(planet: &PlanetModel, craft: &SpacecraftModel) -> (f64, f64) {
    let lam_rho = mean_free_path_density_product(planet);
    let altitude_at = |kn_star: f64| {
        let rho = lam_rho / (kn_star * craft.reference_length_m);
        -planet.scale_height_km * math::ln(rho / planet.surface_density_kg_m3)
    };
    (altitude_at(KN_BAND[0]), altitude_at(KN_BAND[1]))
}

/// Aerodynamic acceleration on the spacecraft, canonical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AeroForces {
    /// Net non-gravitational acceleration (DU/TU²) to feed the dynamics.
    pub perturbation: [f64; 2],
    /// Rate of thrust delta-v spent cancelling drag (DU/TU² magnitude);
    /// nonzero only for the powered maneuver.
    pub delta_v_rate: f64,
}

impl AeroForces {
    pub const ZERO: Self = Self { perturbation: [0.0, 0.0], delta_v_rate: 0.0 };
}

/// Everything constant along one trajectory, precomputed so the integrator's
/// force evaluation stays cheap: resolved angle of attack, continuum
/// coefficients, unit conversions.
#[derive(Debug, Clone)]
pub struct AeroContext {
    kind: ManeuverKind,
    lift_outward: bool,
    cl_cont: f64,
    cd_cont: f64,
    cd_fmf: f64,
    aoa_rad: f64,
    area_to_mass: f64,
    reference_length_m: f64,
    mass_ratio: f64,
    radius_km: f64,
    du_km: f64,
    surface_density: f64,
    scale_height_km: f64,
    lam_rho: f64,
    vu_m_s: f64,
    si_to_canonical_accel: f64,
    thrust_continuum_only: bool,
}

impl AeroContext {
    pub fn new(
        planet: &PlanetModel,
        craft: &SpacecraftModel,
        kind: ManeuverKind,
        signed_ld: f64,
        thrust_continuum_only: bool,
    ) -> Result<Self, AeroError> {
        let aoa_rad = ld_to_aoa(math::abs(signed_ld), craft)?;
        let (cl_cont, cd_cont) = continuum_coefficients(aoa_rad, craft)?;
        let tu_s = planet.tu_s();
        let du_m = planet.du_km() * 1e3;
        Ok(Self {
            kind,
            lift_outward: signed_ld >= 0.0,
            cl_cont,
            cd_cont,
            cd_fmf: craft.cd_free_molecular,
            aoa_rad,
            area_to_mass: craft.area_to_mass_m2_kg,
            reference_length_m: craft.reference_length_m,
            mass_ratio: planet.mass_ratio,
            radius_km: planet.radius_km,
            du_km: planet.du_km(),
            surface_density: planet.surface_density_kg_m3,
            scale_height_km: planet.scale_height_km,
            lam_rho: mean_free_path_density_product(planet),
            vu_m_s: planet.vu_km_s() * 1e3,
            si_to_canonical_accel: tu_s * tu_s / du_m,
            thrust_continuum_only,
        })
    }

    /// Resolved angle of attack, radians.
    pub fn aoa_rad(&self) -> f64 {
        self.aoa_rad
    }

    /// Forces at a state. Vacuum (density below cutoff) gives exact zeros.
    pub fn eval(&self, state: &RotatingState) -> Result<AeroForces, AeroError> {
        if matches!(self.kind, ManeuverKind::Gam) {
            return Ok(AeroForces::ZERO);
        }
        let rel_x = state.x - (1.0 - self.mass_ratio);
        let rel_y = state.y;
        let r2 = math::hypot(rel_x, rel_y);
        let altitude_km = r2 * self.du_km - self.radius_km;
        let rho = self.surface_density * math::exp(-altitude_km / self.scale_height_km);
        if rho < DENSITY_CUTOFF_KG_M3 {
            return Ok(AeroForces::ZERO);
        }

        // The atmosphere co-rotates with the frame, so the airspeed is the
        // rotating-frame velocity itself.
        let speed = math::hypot(state.vx, state.vy);
        if speed < 1e-12 {
            return Err(AeroError::DegenerateLift { reason: "airspeed below 1e-12 VU" });
        }

        let kn = self.lam_rho / (rho * self.reference_length_m);
        let regime = classify_regime(kn);
        let cd = bridge_drag(kn, self.cd_cont, self.cd_fmf);
        let cl = if regime.class == FlowClass::Continuum { self.cl_cont } else { 0.0 };

        let v_si = speed * self.vu_m_s;
        let dyn_accel = 0.5 * self.area_to_mass * rho * v_si * v_si * self.si_to_canonical_accel;
        let drag = cd * dyn_accel;
        let lift = cl * dyn_accel;

        let drag_dir = [-state.vx / speed, -state.vy / speed];
        let mut perturbation = [0.0, 0.0];
        let mut delta_v_rate = 0.0;

        let drag_applies = match self.kind {
            ManeuverKind::Gam => false,
            ManeuverKind::Agam => true,
            // Powered: thrust cancels drag, everywhere or only where the
            // continuum model is trusted.
            ManeuverKind::Pagam => {
                self.thrust_continuum_only && regime.class != FlowClass::Continuum
            }
        };
        if drag_applies {
            perturbation[0] += drag * drag_dir[0];
            perturbation[1] += drag * drag_dir[1];
        }
        if matches!(self.kind, ManeuverKind::Pagam) && !drag_applies {
            delta_v_rate = drag;
        }

        if lift != 0.0 {
            // In-plane normal to the airspeed, banked so the lift points
            // radially outward or inward from the planet.
            let mut normal = [drag_dir[1], -drag_dir[0]];
            let radial = normal[0] * rel_x / r2 + normal[1] * rel_y / r2;
            if math::abs(radial) < 1e-12 {
                return Err(AeroError::DegenerateLift { reason: "airspeed is radial" });
            }
            if (radial > 0.0) != self.lift_outward {
                normal = [-normal[0], -normal[1]];
            }
            perturbation[0] += lift * normal[0];
            perturbation[1] += lift * normal[1];
        }

        Ok(AeroForces { perturbation, delta_v_rate })
    }
}

/// One-off force evaluation building the per-trajectory context internally.
/// The integration pipeline holds an [`AeroContext`] instead.
pub fn aero_acceleration(
    state: &RotatingState,
    planet: &PlanetModel,
    craft: &SpacecraftModel,
    kind: ManeuverKind,
    signed_ld: f64,
) -> Result<AeroForces, AeroError> {
    AeroContext::new(planet, craft, kind, signed_ld, false)?.eval(state)
}
