//! Casimir forces between real metals at finite temperature.
//!
//! Parallel plates are evaluated with the Lifshitz formula summed over
//! Matsubara frequencies; the cylinder-plane force follows from the plate
//! pressure by the proximity force approximation. Closed-form limits and
//! dynamical-Casimir estimators are provided alongside.

pub mod asymptotics;
pub mod config;
pub mod dce;
pub mod error;
pub mod geometry;
pub mod lifshitz;
pub mod materials;
pub mod pfa;
pub mod quadrature;
pub mod summation;
pub mod units;

pub use config::{AreaConvention, M0Policy, NumericsConfig};
pub use error::{CasimirError, Result};
pub use geometry::{CylinderPlane, Geometry, ParallelPlates};
pub use lifshitz::{force_pp, pressure_pp, pressure_pp_perfect, ForceResult, ThermalContext};
pub use materials::{load_material_db, DielectricModel, MaterialRecord, ModelKind};
