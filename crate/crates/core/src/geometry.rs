//! Plate and cylinder configurations. All lengths in metres.

use crate::error::{require_positive, Result};

/// Two identical parallel plates of area `area` separated by `gap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelPlates {
    pub area: f64,
    pub gap: f64,
}

impl ParallelPlates {
    pub fn new(area: f64, gap: f64) -> Result<Self> {
        Ok(Self {
            area: require_positive("area", area)?,
            gap: require_positive("gap", gap)?,
        })
    }
}

/// Cylinder of length `length` and radius `radius` with its axis parallel to
/// a plane at closest distance `gap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderPlane {
    pub length: f64,
    pub radius: f64,
    pub gap: f64,
}

/// Above this gap/radius ratio the proximity approximation is flagged.
pub const PFA_VALIDITY_RATIO: f64 = 0.01;

impl CylinderPlane {
    pub fn new(length: f64, radius: f64, gap: f64) -> Result<Self> {
        Ok(Self {
            length: require_positive("length", length)?,
            radius: require_positive("radius", radius)?,
            gap: require_positive("gap", gap)?,
        })
    }

    /// True when d/a < 0.01.
    pub fn pfa_valid(&self) -> bool {
        self.gap / self.radius < PFA_VALIDITY_RATIO
    }

    pub fn with_gap(self, gap: f64) -> Result<Self> {
        Self::new(self.length, self.radius, gap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    ParallelPlates(ParallelPlates),
    CylinderPlane(CylinderPlane),
}

impl Geometry {
    pub fn gap(&self) -> f64 {
        match self {
            Geometry::ParallelPlates(g) => g.gap,
            Geometry::CylinderPlane(g) => g.gap,
        }
    }
}
