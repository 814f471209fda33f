//! Dynamical Casimir effect estimators for a parametrically driven cavity
//! mode, and dipole emission rates of the atoms used to detect the photons.

use std::f64::consts::PI;

use crate::error::{invalid, require_positive, CasimirError, Result};
use crate::units::{hz_to_angular, BOHR_RADIUS, C, EPS_0, E_CHARGE, FINE_STRUCTURE, HBAR};

/// Ground-state hyperfine splitting of ⁶Li, Hz.
pub const LI6_HYPERFINE_HZ: f64 = 228e6;
/// Drive frequency for parametric resonance with the ⁶Li splitting, Hz.
pub const LI6_DRIVE_HZ: f64 = 456e6;

/// Largest sinh argument accepted before the estimate is declared out of model.
pub const MAX_GROWTH_EXPONENT: f64 = 350.0;

/// Cavity and modulation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DceParams {
    pub q_factor: f64,
    /// Fractional boundary modulation δL/L.
    pub epsilon_mod: f64,
    /// Cavity mode angular frequency, rad/s.
    pub omega: f64,
    /// Geometry-dependent growth rate factor, rad/s.
    pub lambda_geom: f64,
}

impl DceParams {
    /// `lambda_geom` defaults to `omega`.
    pub fn new(q_factor: f64, epsilon_mod: f64, omega: f64, lambda_geom: Option<f64>) -> Result<Self> {
        let q_factor = require_positive("q_factor", q_factor)?;
        if !(epsilon_mod > 0.0 && epsilon_mod < 1.0) {
            return Err(invalid("epsilon_mod", format!("must be in (0, 1), got {epsilon_mod}")));
        }
        let omega = require_positive("omega", omega)?;
        let lambda_geom = require_positive("lambda_geom", lambda_geom.unwrap_or(omega))?;
        Ok(Self {
            q_factor,
            epsilon_mod,
            omega,
            lambda_geom,
        })
    }

    /// Parameters for a mode at `freq_hz`.
    pub fn from_hz(q_factor: f64, epsilon_mod: f64, freq_hz: f64) -> Result<Self> {
        Self::new(q_factor, epsilon_mod, hz_to_angular(freq_hz), None)
    }
}

/// Time at which the photon number is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elapsed {
    Seconds(f64),
    /// Growth stopped by cavity losses, λεt → Qε.
    Saturated,
}

/// N = sinh²(λεt), or sinh²(Qε) at saturation.
pub fn photon_number(p: &DceParams, at: Elapsed) -> Result<f64> {
    let x = match at {
        Elapsed::Seconds(t) => {
            if !(t.is_finite() && t >= 0.0) {
                return Err(invalid("t", format!("must be finite and >= 0 s, got {t}")));
            }
            p.lambda_geom * p.epsilon_mod * t
        }
        Elapsed::Saturated => p.q_factor * p.epsilon_mod,
    };
    if x > MAX_GROWTH_EXPONENT {
        return Err(CasimirError::OutOfModel(format!(
            "growth exponent {x} exceeds {MAX_GROWTH_EXPONENT}"
        )));
    }
    Ok(x.sinh().powi(2))
}

/// τ_sat = Q/ω.
pub fn saturation_time(p: &DceParams) -> f64 {
    p.q_factor / p.omega
}

/// Radiated power N ħω/τ, W.
pub fn photon_power(photons: f64, omega: f64, tau: f64) -> Result<f64> {
    if !(photons.is_finite() && photons >= 0.0) {
        return Err(invalid("photons", format!("must be finite and >= 0, got {photons}")));
    }
    Ok(photons * HBAR * require_positive("omega", omega)? / require_positive("tau", tau)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DipoleKind {
    Electric,
    /// Suppressed by (v/c)² relative to an electric dipole of equal moment.
    Magnetic,
}

/// An atomic transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSpec {
    /// rad/s.
    pub omega_t: f64,
    /// Dipole matrix element, C m.
    pub dipole_moment: f64,
    pub kind: DipoleKind,
    /// Only used for magnetic dipoles.
    pub v_over_c: Option<f64>,
}

impl TransitionSpec {
    pub fn electric(omega_t: f64, dipole_moment: f64) -> Result<Self> {
        Ok(Self {
            omega_t: require_positive("omega_t", omega_t)?,
            dipole_moment: require_positive("dipole_moment", dipole_moment)?,
            kind: DipoleKind::Electric,
            v_over_c: None,
        })
    }

    pub fn magnetic(omega_t: f64, dipole_moment: f64, v_over_c: f64) -> Result<Self> {
        if !(v_over_c > 0.0 && v_over_c < 1.0) {
            return Err(invalid("v_over_c", format!("must be in (0, 1), got {v_over_c}")));
        }
        Ok(Self {
            kind: DipoleKind::Magnetic,
            v_over_c: Some(v_over_c),
            ..Self::electric(omega_t, dipole_moment)?
        })
    }

    /// ⁶Li ground-state hyperfine line as a magnetic transition with an
    /// atomic-scale moment e·a₀ and v/c equal to the fine-structure constant.
    pub fn li6_hyperfine() -> Self {
        Self::magnetic(hz_to_angular(LI6_HYPERFINE_HZ), E_CHARGE * BOHR_RADIUS, FINE_STRUCTURE)
            .expect("valid constants")
    }
}

/// Spontaneous emission rate ω³D²/(π ε₀ ħ c³), times (v/c)² for magnetic
/// dipoles.
pub fn spontaneous_rate(t: &TransitionSpec) -> f64 {
    // Explicit products: `powi` may round differently when constant-folded.
    let (w, d) = (t.omega_t, t.dipole_moment);
    let electric = w * w * w * (d * d) / (PI * EPS_0 * HBAR * (C * C * C));
    match t.kind {
        DipoleKind::Electric => electric,
        DipoleKind::Magnetic => {
            let v = t.v_over_c.expect("magnetic transitions carry v/c");
            electric * v * v
        }
    }
}

/// Summary of the photon yield and of how fast the detecting atoms respond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionBudget {
    pub photons_saturated: f64,
    pub tau_sat: f64,
    pub power_w: f64,
    pub rate_spont: f64,
    /// `rate_spont` divided by the reference transition's rate.
    pub comparison_ratio: f64,
}

pub fn detection_budget(
    p: &DceParams,
    transition: &TransitionSpec,
    reference: &TransitionSpec,
) -> Result<DetectionBudget> {
    let photons_saturated = photon_number(p, Elapsed::Saturated)?;
    let tau_sat = saturation_time(p);
    let power_w = photon_power(photons_saturated, p.omega, tau_sat)?;
    let rate_spont = spontaneous_rate(transition);
    Ok(DetectionBudget {
        photons_saturated,
        tau_sat,
        power_w,
        rate_spont,
        comparison_ratio: rate_spont / spontaneous_rate(reference),
    })
}
