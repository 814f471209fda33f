//! Numerical settings shared by the plate and cylinder computations.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Result};

/// How the infinitesimal facing areas are chosen in the proximity force
/// approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AreaConvention {
    /// dA = L a dφ (area on the cylinder).
    Cylinder,
    /// dA = L a cos φ dφ (projected area on the plane).
    Plane,
    /// Geometric mean of the two.
    GeometricMean,
}

impl AreaConvention {
    pub const ALL: [AreaConvention; 3] = [
        AreaConvention::Cylinder,
        AreaConvention::Plane,
        AreaConvention::GeometricMean,
    ];

    /// Angular weight relative to L a.
    pub fn weight(self, phi: f64) -> f64 {
        match self {
            AreaConvention::Cylinder => 1.0,
            AreaConvention::Plane => phi.cos(),
            AreaConvention::GeometricMean => phi.cos().sqrt(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AreaConvention::Cylinder => "cylinder",
            AreaConvention::Plane => "plane",
            AreaConvention::GeometricMean => "geometric_mean",
        }
    }
}

impl fmt::Display for AreaConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AreaConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "cylinder" => Ok(AreaConvention::Cylinder),
            "plane" => Ok(AreaConvention::Plane),
            "geometric_mean" | "geometric-mean" => Ok(AreaConvention::GeometricMean),
            other => Err(format!(
                "unknown area convention `{other}` (expected cylinder, plane or geometric_mean)"
            )),
        }
    }
}

/// Zero-frequency treatment of the TE mode for tabulated materials, whose
/// data cannot be extrapolated to ξ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum M0Policy {
    /// TE m=0 mode contributes, as for the plasma model (needs ω_p).
    PlasmaLike,
    /// TE m=0 mode is absent, as for the Drude model.
    DrudeLike,
}

impl FromStr for M0Policy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "plasma-like" | "plasma_like" => Ok(M0Policy::PlasmaLike),
            "drude-like" | "drude_like" => Ok(M0Policy::DrudeLike),
            other => Err(format!(
                "unknown m0 policy `{other}` (expected plasma-like or drude-like)"
            )),
        }
    }
}

/// Cutoffs and tolerances for the Matsubara sum and the quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsConfig {
    /// The y integral of term m runs over [mγ, mγ + y_cut_offset].
    pub y_cut_offset: f64,
    /// Largest Matsubara frequency kept, rad/s.
    pub zeta_max: f64,
    /// Relative tolerance of every adaptive quadrature.
    pub quad_rel_tol: f64,
    /// Upper limit of the cylinder angle integral, rad.
    pub phi_max: f64,
    pub area_convention: AreaConvention,
    /// Required for tabulated materials, ignored otherwise.
    pub m0_policy: Option<M0Policy>,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            y_cut_offset: 50.0,
            zeta_max: 1e17,
            quad_rel_tol: 1e-9,
            phi_max: PI / 20.0,
            area_convention: AreaConvention::Cylinder,
            m0_policy: None,
        }
    }
}

impl NumericsConfig {
    /// Checks the temperature-independent invariants.
    pub fn validate(&self) -> Result<()> {
        if !(self.y_cut_offset.is_finite() && self.y_cut_offset >= 10.0) {
            return Err(invalid(
                "y_cut_offset",
                format!("must be >= 10, got {}", self.y_cut_offset),
            ));
        }
        if !(self.zeta_max.is_finite() && self.zeta_max > 0.0) {
            return Err(invalid("zeta_max", format!("must be > 0, got {}", self.zeta_max)));
        }
        if !(self.quad_rel_tol.is_finite() && self.quad_rel_tol > 0.0 && self.quad_rel_tol < 1.0) {
            return Err(invalid(
                "quad_rel_tol",
                format!("must be in (0, 1), got {}", self.quad_rel_tol),
            ));
        }
        if !(self.phi_max > 0.0 && self.phi_max <= PI / 2.0) {
            return Err(invalid(
                "phi_max",
                format!("must be in (0, pi/2], got {}", self.phi_max),
            ));
        }
        Ok(())
    }
}
