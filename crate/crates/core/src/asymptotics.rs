//! Closed-form limits: perfect conductors at zero temperature, the
//! low-temperature plasma-model expansions to first order in δ/d, and the
//! high-temperature (classical thermal) forces.

use std::f64::consts::PI;

use crate::error::{invalid, require_positive, Result};
use crate::materials::MaterialRecord;
use crate::units::{C, HBAR, K_B, ZETA_3, ZETA_7_2};

/// Casimir pressure of perfect conductors at T = 0: π²ħc/(240 d⁴).
pub fn ideal_pp_pressure(gap: f64) -> Result<f64> {
    let d = require_positive("gap", gap)?;
    Ok(PI * PI * HBAR * C / (240.0 * d.powi(4)))
}

/// Cylinder-plane force of perfect conductors at T = 0 to leading order in
/// d/a: π³ħcL√a/(384√2 d^{7/2}).
pub fn ideal_cp_force(length: f64, radius: f64, gap: f64) -> Result<f64> {
    let (l, a, d) = positive3(length, radius, gap)?;
    Ok(PI.powi(3) * HBAR * C * l * a.sqrt() / (384.0 * 2f64.sqrt() * d.powf(3.5)))
}

/// High-temperature plate pressure ζ(3) k_B T/(4π d³).
pub fn thermal_pp_pressure(gap: f64, temperature: f64) -> Result<f64> {
    let d = require_positive("gap", gap)?;
    let t = require_positive("temperature", temperature)?;
    Ok(ZETA_3 * K_B * t / (4.0 * PI * d.powi(3)))
}

/// High-temperature cylinder-plane force 3ζ(3) k_B T L√a/(16√2 d^{5/2}).
pub fn thermal_cp_force(length: f64, radius: f64, gap: f64, temperature: f64) -> Result<f64> {
    let (l, a, d) = positive3(length, radius, gap)?;
    let t = require_positive("temperature", temperature)?;
    Ok(3.0 * ZETA_3 * K_B * t * l * a.sqrt() / (16.0 * 2f64.sqrt() * d.powf(2.5)))
}

fn positive3(length: f64, radius: f64, gap: f64) -> Result<(f64, f64, f64)> {
    Ok((
        require_positive("length", length)?,
        require_positive("radius", radius)?,
        require_positive("gap", gap)?,
    ))
}

/// Temperature scale ħc/(2 k_B d) above which thermal photons dominate.
pub fn t_eff(gap: f64) -> Result<f64> {
    let d = require_positive("gap", gap)?;
    Ok(HBAR * C / (2.0 * K_B * d))
}

/// Penetration length δ = λ_p/2π = c/ω_p.
pub fn plasma_delta(material: &MaterialRecord) -> Result<f64> {
    material
        .plasma_frequency()
        .map(|wp| C / wp)
        .ok_or_else(|| invalid("material", format!("`{}` has no plasma frequency", material.name)))
}

/// Arguments of the low-temperature expansions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionInputs {
    /// T/T_eff.
    pub t_ratio: f64,
    /// δ/d.
    pub delta_over_d: f64,
}

impl ExpansionInputs {
    pub fn new(t_ratio: f64, delta_over_d: f64) -> Result<Self> {
        if !(t_ratio.is_finite() && t_ratio >= 0.0) {
            return Err(invalid("t_ratio", format!("must be finite and >= 0, got {t_ratio}")));
        }
        if !(delta_over_d.is_finite() && delta_over_d >= 0.0) {
            return Err(invalid(
                "delta_over_d",
                format!("must be finite and >= 0, got {delta_over_d}"),
            ));
        }
        Ok(Self { t_ratio, delta_over_d })
    }

    /// Inputs for `material` at `gap` and `temperature`.
    pub fn for_material(material: &MaterialRecord, gap: f64, temperature: f64) -> Result<Self> {
        let t = require_positive("temperature", temperature)?;
        Self::new(t / t_eff(gap)?, plasma_delta(material)? / gap)
    }

    /// The series hold for T ≪ T_eff and δ ≪ d.
    pub fn within_validity(&self) -> bool {
        self.t_ratio < 1.0 && self.delta_over_d < 0.2
    }
}

/// A series value with its validity advisory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expansion {
    pub ratio: f64,
    pub valid: bool,
}

/// F_pp/F_pp(T=0) ≈ 1 + t⁴/3 − (16δ/3d)[1 − (45ζ(3)/8π³) t³].
pub fn lowt_ratio_pp(x: ExpansionInputs) -> Expansion {
    let t = x.t_ratio;
    let ratio =
        1.0 + t.powi(4) / 3.0 - 16.0 * x.delta_over_d / 3.0 * (1.0 - 45.0 * ZETA_3 / (8.0 * PI.powi(3)) * t.powi(3));
    Expansion {
        ratio,
        valid: x.within_validity(),
    }
}

/// F_cp/F_cp(T=0) ≈ 1 + (132.096 ζ(7/2)/π^{9/2}) t^{7/2} − (δ/d)[14/3 − (48ζ(3)/π³) t³].
pub fn lowt_ratio_cp(x: ExpansionInputs) -> Expansion {
    let t = x.t_ratio;
    let ratio = 1.0 + 132.096 * ZETA_7_2 / PI.powf(4.5) * t.powf(3.5)
        - x.delta_over_d * (14.0 / 3.0 - 48.0 * ZETA_3 / PI.powi(3) * t.powi(3));
    Expansion {
        ratio,
        valid: x.within_validity(),
    }
}
