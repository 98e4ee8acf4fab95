//! Regulators, periods and special values for the Hesse cubic family
//! x0³ + y0³ + z0³ = 3t·x0·y0·z0.

pub mod curve;
pub mod error;
pub mod hyper;
pub mod integrality;
pub mod lseries;
pub mod mahler;
pub mod numerics;
pub mod periods;
pub mod regulator;
pub mod verify;

pub use error::{Error, Result};
