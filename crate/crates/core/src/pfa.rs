//! Cylinder-plane force from the plate pressure in the proximity force
//! approximation:
//!
//! ```text
//! F = 2 L a ∫_0^{φ_max} P(d + a(1 − cos φ)) w(φ) dφ
//! ```
//!
//! with w = 1, cos φ or √cos φ for the cylinder, plane and geometric-mean
//! area conventions. All three are integrated on the same nodes, so each
//! plate pressure is computed once.

use std::f64::consts::FRAC_PI_2;

use crate::config::{AreaConvention, NumericsConfig};
use crate::error::Result;
use crate::geometry::CylinderPlane;
use crate::lifshitz::{pressure_pp, ForceResult};
use crate::materials::MaterialRecord;
use crate::quadrature::{integrate_vec, QuadOptions};

/// Cylinder-plane force with the PFA validity flag.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderForce {
    pub force: ForceResult,
    pub convention: AreaConvention,
    /// False when d/a ≥ 0.01.
    pub pfa_valid: bool,
}

/// Forces under every area convention, in [`AreaConvention::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConventionForces {
    pub forces: [f64; 3],
    pub m_terms_used: usize,
    pub m_max: usize,
    pub rel_error_estimate: f64,
    pub pfa_valid: bool,
}

impl ConventionForces {
    pub fn get(&self, convention: AreaConvention) -> f64 {
        let idx = AreaConvention::ALL
            .iter()
            .position(|&c| c == convention)
            .expect("listed");
        self.forces[idx]
    }

    /// (max − min)/min over the three conventions.
    pub fn spread(&self) -> f64 {
        let max = self.forces.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.forces.iter().cloned().fold(f64::INFINITY, f64::min);
        (max - min) / min
    }
}

/// Integrates an arbitrary plate pressure `pressure(gap)` over the cylinder.
pub fn cylinder_forces_with<P>(
    pressure: P,
    geom: &CylinderPlane,
    phi_max: f64,
    cfg: &NumericsConfig,
) -> Result<ConventionForces>
where
    P: Fn(f64) -> Result<ForceResult>,
{
    cfg.validate()?;
    let checked = CylinderPlane::new(geom.length, geom.radius, geom.gap)?;
    let cfg = NumericsConfig { phi_max, ..*cfg };
    cfg.validate()?;
    let (d, a) = (checked.gap, checked.radius);

    let mut failure = None;
    let mut m_terms_used = 0;
    let mut m_max = 0;
    let mut worst_pressure_err: f64 = 0.0;
    let integrand = |phi: f64| -> [f64; 3] {
        if failure.is_some() {
            return [0.0; 3];
        }
        let half = (0.5 * phi).sin();
        let gap = d + 2.0 * a * half * half;
        match pressure(gap) {
            Ok(p) => {
                m_terms_used = m_terms_used.max(p.m_terms_used);
                m_max = m_max.max(p.m_max);
                worst_pressure_err = worst_pressure_err.max(p.rel_error_estimate);
                let cos = phi.cos();
                [p.magnitude, p.magnitude * cos, p.magnitude * cos.sqrt()]
            }
            Err(e) => {
                failure = Some(e);
                [0.0; 3]
            }
        }
    };

    // Panels scaled to the width √(2d/a) of the region that dominates.
    let width = (2.0 * d / a).sqrt();
    let mut points = vec![0.0];
    let mut edge = 0.5 * width;
    while edge < phi_max {
        points.push(edge);
        edge *= 2.0;
    }
    points.push(phi_max);

    let opts = QuadOptions {
        rel_tol: cfg.quad_rel_tol,
        abs_tol: 0.0,
        max_intervals: 500,
    };
    let q = integrate_vec(integrand, &points, opts);
    if let Some(e) = failure {
        return Err(e);
    }
    let q = q?;
    let scale = 2.0 * checked.length * a;
    let forces = q.value.map(|v| scale * v);
    let quad_err = (0..3).map(|k| q.abs_error[k] / q.value[k].abs()).fold(0.0, f64::max);
    Ok(ConventionForces {
        forces,
        m_terms_used,
        m_max,
        rel_error_estimate: quad_err + worst_pressure_err,
        pfa_valid: checked.pfa_valid(),
    })
}

/// Forces for all three area conventions between a `material` cylinder and plane.
pub fn cylinder_forces(
    material: &MaterialRecord,
    geom: &CylinderPlane,
    temperature: f64,
    cfg: &NumericsConfig,
) -> Result<ConventionForces> {
    cylinder_forces_with(
        |gap| pressure_pp(material, gap, temperature, cfg),
        geom,
        cfg.phi_max,
        cfg,
    )
}

/// Cylinder-plane force magnitude (N) under `cfg.area_convention`.
pub fn force_cp(
    material: &MaterialRecord,
    geom: &CylinderPlane,
    temperature: f64,
    cfg: &NumericsConfig,
) -> Result<CylinderForce> {
    let all = cylinder_forces(material, geom, temperature, cfg)?;
    Ok(CylinderForce {
        force: ForceResult {
            magnitude: all.get(cfg.area_convention),
            m_terms_used: all.m_terms_used,
            m_max: all.m_max,
            rel_error_estimate: all.rel_error_estimate,
            per_term_breakdown: None,
        },
        convention: cfg.area_convention,
        pfa_valid: all.pfa_valid,
    })
}

/// Relative spread (max − min)/min of the force across the area conventions.
pub fn pfa_spread(
    material: &MaterialRecord,
    geom: &CylinderPlane,
    temperature: f64,
    cfg: &NumericsConfig,
) -> Result<f64> {
    Ok(cylinder_forces(material, geom, temperature, cfg)?.spread())
}

/// Relative change of the force when the angular limit is raised from
/// `cfg.phi_max` to π/2.
pub fn phi_limit_robustness(
    material: &MaterialRecord,
    geom: &CylinderPlane,
    temperature: f64,
    cfg: &NumericsConfig,
) -> Result<f64> {
    let base = force_cp(material, geom, temperature, cfg)?.force.magnitude;
    let full_cfg = NumericsConfig {
        phi_max: FRAC_PI_2,
        ..*cfg
    };
    let full = force_cp(material, geom, temperature, &full_cfg)?.force.magnitude;
    Ok(((full - base) / base).abs())
}
