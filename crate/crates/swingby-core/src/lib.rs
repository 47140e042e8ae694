#![cfg_attr(not(feature = "std"), no_std)]

//! Planar circular restricted three-body flyby simulation.
//!
//! Models a spacecraft encounter with a planet orbiting the Sun on a circular
//! orbit, in the rotating barycentric frame and canonical units of that pair.
//! Close approaches may dip into an exponential atmosphere, where the vehicle
//! flies a fixed angle of attack encoded as a signed lift-to-drag ratio:
//!
//! * gravity assist (`Gam`): no atmospheric forces,
//! * aero-gravity assist (`Agam`): lift and drag,
//! * powered aero-gravity assist (`Pagam`): lift only, with thrust cancelling
//!   drag and the spent delta-v integrated along the way.
//!
//! The crate is `no_std`-compatible (`alloc` required); disable the default
//! `std` feature and enable `libm` for the float math fallback.

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("swingby-core needs either the `std` or the `libm` feature for f64 math");

mod math;

pub mod aero;
pub mod dynamics;
pub mod integrator;
pub mod maneuver;
pub mod planet;

pub use aero::{FlowClass, FlowRegime, SpacecraftModel};
pub use dynamics::RotatingState;
pub use integrator::IntegratorSettings;
pub use maneuver::{ManeuverConfig, ManeuverKind, TrajectoryResult, VelocitySense};
pub use planet::PlanetModel;
