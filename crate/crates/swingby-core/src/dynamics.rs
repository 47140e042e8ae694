//! Planar circular restricted three-body dynamics in the rotating frame.
//!
//! Canonical units throughout: the primaries are fixed on the x axis with the
//! Sun (mass 1−μ) at (−μ, 0) and the planet (mass μ) at (1−μ, 0), the frame
//! rotates at unit rate, and the spacecraft is massless. The equations of
//! motion are
//!
//! ```text
//! ẍ = 2ẏ + Ωx + ax,   ÿ = −2ẋ + Ωy + ay,
//! Ω  = (x² + y²)/2 + (1−μ)/r1 + μ/r2,
//! ```
//!
//! with (ax, ay) an optional non-gravitational acceleration. Without it the
//! Jacobi constant C = 2Ω − (ẋ² + ẏ²) is conserved.

use crate::math;
use crate::planet::PlanetModel;

/// Positions closer than this to either primary are treated as singular.
pub const SINGULAR_RADIUS_DU: f64 = 1e-12;

/// Spacecraft state in the rotating barycentric frame, positions in DU,
/// velocities in VU, epoch `t` in TU (t = 0 at the projected pericenter).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RotatingState {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub t: f64,
}

/// Spacecraft state in the inertial barycentric frame sharing the rotating
/// frame's origin and its axes at t = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InertialState {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub t: f64,
}

/// Spacecraft state relative to the planet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanetRelative {
    /// Distance from the planet center, DU.
    pub r2_du: f64,
    /// Altitude above the planet surface, km.
    pub altitude_km: f64,
    /// Velocity relative to the planet in inertial axes, VU.
    pub v_rel_inertial_vu: [f64; 2],
    /// Two-body specific energy about the planet, ε₂ = |v_rel|²/2 − μ/r2.
    pub two_body_energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("position singular: r1 = {r1:e} DU, r2 = {r2:e} DU")]
    SingularPosition { r1: f64, r2: f64 },
}

impl RotatingState {
    pub fn from_array(y: &[f64; 4], t: f64) -> Self {
        Self { x: y[0], y: y[1], vx: y[2], vy: y[3], t }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x, self.y, self.vx, self.vy]
    }

    /// Distance to the Sun, DU.
    pub fn r1(&self, mu: f64) -> f64 {
        math::hypot(self.x + mu, self.y)
    }

    /// Distance to the planet, DU.
    pub fn r2(&self, mu: f64) -> f64 {
        math::hypot(self.x - 1.0 + mu, self.y)
    }
}

fn primary_distances(x: f64, y: f64, mu: f64) -> Result<(f64, f64), DynamicsError> {
    let r1 = math::hypot(x + mu, y);
    let r2 = math::hypot(x - 1.0 + mu, y);
    if r1 < SINGULAR_RADIUS_DU || r2 < SINGULAR_RADIUS_DU {
        return Err(DynamicsError::SingularPosition { r1, r2 });
    }
    Ok((r1, r2))
}

/// Effective potential Ω of the rotating frame.
pub fn omega_potential(x: f64, y: f64, mu: f64) -> Result<f64, DynamicsError> {
    let (r1, r2) = primary_distances(x, y, mu)?;
    Ok(0.5 * (x * x + y * y) + (1.0 - mu) / r1 + mu / r2)
}

/// Gradient (Ωx, Ωy) of the effective potential.
pub fn omega_gradient(x: f64, y: f64, mu: f64) -> Result<[f64; 2], DynamicsError> {
    let (r1, r2) = primary_distances(x, y, mu)?;
    let c1 = (1.0 - mu) / (r1 * r1 * r1);
    let c2 = mu / (r2 * r2 * r2);
    Ok([
        x - c1 * (x + mu) - c2 * (x - 1.0 + mu),
        y - c1 * y - c2 * y,
    ])
}

/// Time derivative of (x, y, ẋ, ẏ) with an extra acceleration (ax, ay) in
/// canonical units applied on top of gravity and the frame terms.
pub fn crtbp_derivative(
    state: &RotatingState,
    mu: f64,
    perturbation: [f64; 2],
) -> Result<[f64; 4], DynamicsError> {
    let [gx, gy] = omega_gradient(state.x, state.y, mu)?;
    Ok([
        state.vx,
        state.vy,
        2.0 * state.vy + gx + perturbation[0],
        -2.0 * state.vx + gy + perturbation[1],
    ])
}

/// Jacobi constant C = 2Ω − (ẋ² + ẏ²).
pub fn jacobi_constant(state: &RotatingState, mu: f64) -> Result<f64, DynamicsError> {
    let omega = omega_potential(state.x, state.y, mu)?;
    Ok(2.0 * omega - state.vx * state.vx - state.vy * state.vy)
}

/// Rotating → inertial: rotate by the epoch angle t and add the frame's
/// transport velocity ω × r (unit angular rate).
pub fn rotating_to_inertial(state: &RotatingState) -> InertialState {
    let (sin_t, cos_t) = (math::sin(state.t), math::cos(state.t));
    let ux = state.vx - state.y;
    let uy = state.vy + state.x;
    InertialState {
        x: state.x * cos_t - state.y * sin_t,
        y: state.x * sin_t + state.y * cos_t,
        vx: ux * cos_t - uy * sin_t,
        vy: ux * sin_t + uy * cos_t,
        t: state.t,
    }
}

/// Inertial → rotating: inverse of [`rotating_to_inertial`].
pub fn inertial_to_rotating(state: &InertialState) -> RotatingState {
    let (sin_t, cos_t) = (math::sin(state.t), math::cos(state.t));
    let x = state.x * cos_t + state.y * sin_t;
    let y = -state.x * sin_t + state.y * cos_t;
    let ux = state.vx * cos_t + state.vy * sin_t;
    let uy = -state.vx * sin_t + state.vy * cos_t;
    RotatingState { x, y, vx: ux + y, vy: uy - x, t: state.t }
}

/// Orbital energy about the Sun, E = |v_inertial|²/2 − (1−μ)/r1, canonical
/// units. The planet term is deliberately excluded: far from the planet this
/// is the heliocentric two-body energy whose change across the encounter is
/// the orbital-energy variation. Evaluate it well outside the sphere of
/// influence (r2 ≳ 0.5 DU) for that reading; it is defined everywhere.
pub fn heliocentric_energy(state: &RotatingState, mu: f64) -> Result<f64, DynamicsError> {
    let r1 = math::hypot(state.x + mu, state.y);
    if r1 < SINGULAR_RADIUS_DU {
        let r2 = math::hypot(state.x - 1.0 + mu, state.y);
        return Err(DynamicsError::SingularPosition { r1, r2 });
    }
    let inertial = rotating_to_inertial(state);
    let v2 = inertial.vx * inertial.vx + inertial.vy * inertial.vy;
    Ok(0.5 * v2 - (1.0 - mu) / r1)
}

/// Position, altitude, velocity, and two-body energy relative to the planet.
///
/// The relative velocity is inertial (the planet moves on its circular orbit)
/// expressed in inertial axes, so directions taken at different epochs are
/// comparable. It differs from the rotating-frame velocity by the transport
/// term ω × r_rel, which is small near the planet but not zero.
pub fn planet_relative(state: &RotatingState, planet: &PlanetModel) -> PlanetRelative {
    let mu = planet.mass_ratio;
    let rel_x = state.x - (1.0 - mu);
    let rel_y = state.y;
    let r2 = math::hypot(rel_x, rel_y);
    // Relative inertial velocity in rotating axes is (ẋ, ẏ) + ω × r_rel.
    let ux = state.vx - rel_y;
    let uy = state.vy + rel_x;
    let (sin_t, cos_t) = (math::sin(state.t), math::cos(state.t));
    let v2 = ux * ux + uy * uy;
    PlanetRelative {
        r2_du: r2,
        altitude_km: planet.altitude_km(r2),
        v_rel_inertial_vu: [ux * cos_t - uy * sin_t, ux * sin_t + uy * cos_t],
        two_body_energy: 0.5 * v2 - mu / r2,
    }
}
