//! Sun-planet pair description and the canonical units it induces.
//!
//! All trajectory work runs in canonical units: the distance unit DU is the
//! planet's orbital semi-major axis, the time unit TU is its orbital period
//! divided by 2π (so the pair revolves at unit angular rate), and masses are
//! normalized so the Sun plus the planet sum to one. In the rotating frame
//! the Sun sits at (−μ, 0) and the planet at (1−μ, 0), with μ the planet's
//! mass fraction.

use alloc::string::String;

use crate::math;

/// Planet record: gravitational, orbital, atmospheric, and gas-kinetic data.
///
/// Lengths are km, time s, densities kg/m³, molecular weight kg/mol, and the
/// kinetic diameter m, as the field names state. Everything else the
/// simulation needs (canonical units, sphere of influence) derives from these.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct PlanetModel {
    pub name: String,
    /// Planet mass over total (Sun + planet) mass.
    pub mass_ratio: f64,
    pub semi_major_axis_km: f64,
    pub orbital_period_s: f64,
    pub radius_km: f64,
    /// Atmospheric density extrapolated to zero altitude.
    pub surface_density_kg_m3: f64,
    pub scale_height_km: f64,
    /// Mean molecular weight of the atmospheric gas.
    pub molecular_weight_kg_mol: f64,
    /// Kinetic diameter of the dominant gas molecule.
    pub kinetic_diameter_m: f64,
}

/// Rejected planet record.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlanetModelError {
    #[error("planet name is empty")]
    EmptyName,
    #[error("mass ratio {0} outside the open interval (0, 0.5)")]
    MassRatioOutOfRange(f64),
    #[error("{field} must be finite and strictly positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("surface density must be finite and nonnegative, got {0}")]
    NegativeDensity(f64),
}

impl PlanetModel {
    /// Checks the record invariants: named, mass ratio in (0, 0.5), and every
    /// physical constant finite and strictly positive, except the surface
    /// density which may be zero (an airless body).
    pub fn validate(&self) -> Result<(), PlanetModelError> {
        if self.name.is_empty() {
            return Err(PlanetModelError::EmptyName);
        }
        if !(self.mass_ratio > 0.0 && self.mass_ratio < 0.5) {
            return Err(PlanetModelError::MassRatioOutOfRange(self.mass_ratio));
        }
        let fields = [
            ("semi_major_axis_km", self.semi_major_axis_km),
            ("orbital_period_s", self.orbital_period_s),
            ("radius_km", self.radius_km),
            ("scale_height_km", self.scale_height_km),
            ("molecular_weight_kg_mol", self.molecular_weight_kg_mol),
            ("kinetic_diameter_m", self.kinetic_diameter_m),
        ];
        for (field, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(PlanetModelError::NonPositive { field, value });
            }
        }
        if !(self.surface_density_kg_m3.is_finite() && self.surface_density_kg_m3 >= 0.0) {
            return Err(PlanetModelError::NegativeDensity(self.surface_density_kg_m3));
        }
        Ok(())
    }

    /// Distance unit in km (the orbital semi-major axis).
    #[inline]
    pub fn du_km(&self) -> f64 {
        self.semi_major_axis_km
    }

    /// Time unit in s (orbital period over 2π).
    #[inline]
    pub fn tu_s(&self) -> f64 {
        self.orbital_period_s / (2.0 * core::f64::consts::PI)
    }

    /// Velocity unit in km/s, DU/TU (the planet's circular orbital speed).
    #[inline]
    pub fn vu_km_s(&self) -> f64 {
        self.du_km() / self.tu_s()
    }

    /// Sphere-of-influence radius in DU: (m_planet/m_sun)^(2/5).
    #[inline]
    pub fn soi_radius_du(&self) -> f64 {
        math::powf(self.mass_ratio / (1.0 - self.mass_ratio), 0.4)
    }

    /// Planet radius in DU.
    #[inline]
    pub fn radius_du(&self) -> f64 {
        self.radius_km / self.du_km()
    }

    /// Planet position in the rotating barycentric frame.
    #[inline]
    pub fn position(&self) -> [f64; 2] {
        [1.0 - self.mass_ratio, 0.0]
    }

    /// Altitude in km above the surface for a planet-centered distance in DU.
    #[inline]
    pub fn altitude_km(&self, r2_du: f64) -> f64 {
        r2_du * self.du_km() - self.radius_km
    }

    /// Planet-centered distance in DU for an altitude in km.
    #[inline]
    pub fn altitude_to_r2_du(&self, altitude_km: f64) -> f64 {
        (self.radius_km + altitude_km) / self.du_km()
    }
}
