//! Lifshitz pressure between two identical parallel plates at finite
//! temperature.
//!
//! The pressure is
//!
//! ```text
//! P = (k_B T / π d³) Σ'_m ∫_{mγ}^{mγ+Y} dy y² Σ_pol 1/(r_pol⁻² e^{2y} − 1)
//! ```
//!
//! with γ = 2π d k_B T/(ħ c), the m = 0 term at half weight, and the
//! inverse reflection factors r⁻² evaluated at the Matsubara frequencies
//! ξ_m = 2π m k_B T/ħ. Each bracket is evaluated as
//! e^{−2y}/((r⁻² − 1) + (1 − e^{−2y})), which stays finite for r⁻² → 1.

use rayon::prelude::*;

use crate::config::{M0Policy, NumericsConfig};
use crate::error::{invalid, require_positive, CasimirError, Result};
use crate::geometry::ParallelPlates;
use crate::materials::{DielectricModel, MaterialRecord};
use crate::quadrature::{integrate, QuadOptions};
use crate::summation::CompensatedSum;
use crate::units::{C, HBAR, K_B, ZETA_3};

/// Temperature, gap and the derived dimensionless quantities of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalContext {
    /// Kelvin.
    pub temperature: f64,
    /// 1/(k_B T), in 1/J.
    pub beta: f64,
    /// Metres.
    pub gap: f64,
    /// 2π d k_B T/(ħ c): spacing of the Matsubara lower limits in y.
    pub gamma: f64,
}

impl ThermalContext {
    pub fn new(temperature: f64, gap: f64) -> Result<Self> {
        let temperature = require_positive("temperature", temperature)?;
        let gap = require_positive("gap", gap)?;
        Ok(Self {
            temperature,
            beta: 1.0 / (K_B * temperature),
            gap,
            gamma: 2.0 * std::f64::consts::PI * gap * K_B * temperature / (HBAR * C),
        })
    }

    /// ξ_m = 2π m k_B T/ħ in rad/s.
    pub fn matsubara_frequency(&self, m: usize) -> f64 {
        2.0 * std::f64::consts::PI * m as f64 * K_B * self.temperature / HBAR
    }

    /// Index of the last Matsubara frequency not above `zeta_max`.
    pub fn max_matsubara_index(&self, zeta_max: f64) -> usize {
        (zeta_max / self.matsubara_frequency(1)).floor() as usize
    }
}

/// Inverse squared reflection factors `(r_TM⁻², r_TE⁻²)` for permittivity
/// `eps` and normalized wavevector `p ≥ 1`.
pub fn reflection_factors(eps: f64, p: f64) -> Result<(f64, f64)> {
    if !(eps.is_finite() && eps > 1.0) {
        return Err(invalid(
            "eps",
            format!("permittivity must be finite and > 1, got {eps}"),
        ));
    }
    if !(p.is_finite() && p >= 1.0) {
        return Err(invalid("p", format!("must be finite and >= 1, got {p}")));
    }
    let excess = eps - 1.0;
    let s = (excess + p * p).sqrt();
    // εp − s and s − p rewritten without cancellation.
    let tm_den = excess * ((eps + 1.0) * p * p - 1.0) / (eps * p + s);
    let te_den = excess / (s + p);
    let tm = (eps * p + s) / tm_den;
    let te = (s + p) / te_den;
    Ok((tm * tm, te * te))
}

/// TE factor r_TE⁻² in the ξ → 0 limit at dimensionless wavevector `y` and
/// gap `gap`. Returns `f64::INFINITY` when the mode does not contribute.
///
/// For the plasma model the limit is [(√(α²+y²) + y)/(√(α²+y²) − y)]² with
/// α = ω_p d/c. Tabulated materials need an explicit `policy`.
pub fn m0_te_factor(material: &MaterialRecord, y: f64, gap: f64, policy: Option<M0Policy>) -> Result<f64> {
    require_positive("y", y)?;
    require_positive("gap", gap)?;
    Ok(match m0_te_alpha(material, gap, policy)? {
        Some(alpha) => plasma_te_limit(alpha, y),
        None => f64::INFINITY,
    })
}

fn plasma_te_limit(alpha: f64, y: f64) -> f64 {
    let s = (alpha * alpha + y * y).sqrt();
    let ratio = (s + y) * (s + y) / (alpha * alpha);
    ratio * ratio
}

/// α = ω_p d/c when the TE m=0 mode contributes, `None` when it does not.
fn m0_te_alpha(material: &MaterialRecord, gap: f64, policy: Option<M0Policy>) -> Result<Option<f64>> {
    let plasma_like = |wp: f64| Some(wp * gap / C);
    match &material.model {
        DielectricModel::Plasma { plasma_frequency } => Ok(plasma_like(*plasma_frequency)),
        DielectricModel::Drude { .. } => Ok(None),
        DielectricModel::Tabulated { plasma_frequency, .. } => match policy {
            None => Err(CasimirError::MissingM0Policy(material.name.clone())),
            Some(M0Policy::DrudeLike) => Ok(None),
            Some(M0Policy::PlasmaLike) => match plasma_frequency {
                Some(wp) => Ok(plasma_like(*wp)),
                None => Err(CasimirError::Validation {
                    record: material.name.clone(),
                    field: "plasma_frequency",
                    reason: "is required for the plasma-like m=0 policy".into(),
                }),
            },
        },
    }
}

/// 1/(r e^{2y} − 1), zero when r is infinite.
fn bracket(r: f64, y: f64) -> f64 {
    if r.is_infinite() {
        return 0.0;
    }
    let decay = (-2.0 * y).exp();
    decay / ((r - 1.0) - (-2.0 * y).exp_m1())
}

/// Plate surfaces entering the sum.
#[derive(Debug, Clone, Copy)]
enum Surface<'a> {
    Material(&'a MaterialRecord),
    /// r⁻² = 1 for both polarizations at every frequency.
    PerfectReflector,
}

/// Reflection data of one Matsubara term, fixed for all y.
#[derive(Debug, Clone, Copy)]
enum TermReflection {
    Perfect,
    /// m = 0: TM factor 1, TE from α (None = no TE contribution).
    Static {
        te_alpha: Option<f64>,
    },
    /// m ≥ 1: permittivity at ξ_m and the lower limit mγ.
    Dynamic {
        eps: f64,
        lower: f64,
    },
}

impl TermReflection {
    fn integrand(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let (tm, te) = match *self {
            TermReflection::Perfect => (1.0, 1.0),
            TermReflection::Static { te_alpha } => (1.0, te_alpha.map_or(f64::INFINITY, |a| plasma_te_limit(a, y))),
            TermReflection::Dynamic { eps, lower } => {
                let p = (y / lower).max(1.0);
                reflection_factors(eps, p).expect("eps > 1 and p >= 1")
            }
        };
        y * y * (bracket(tm, y) + bracket(te, y))
    }
}

/// Integrand `y ↦ y² [1/(r_TM⁻² e^{2y} − 1) + 1/(r_TE⁻² e^{2y} − 1)]` of
/// Matsubara term `m` (without the half weight at m = 0).
pub fn matsubara_integrand(
    material: &MaterialRecord,
    ctx: &ThermalContext,
    m: usize,
    policy: Option<M0Policy>,
) -> Result<impl Fn(f64) -> f64> {
    let term = term_reflection(Surface::Material(material), ctx, m, policy)?;
    Ok(move |y| term.integrand(y))
}

fn term_reflection(
    surface: Surface<'_>,
    ctx: &ThermalContext,
    m: usize,
    policy: Option<M0Policy>,
) -> Result<TermReflection> {
    Ok(match surface {
        Surface::PerfectReflector => TermReflection::Perfect,
        Surface::Material(material) if m == 0 => TermReflection::Static {
            te_alpha: m0_te_alpha(material, ctx.gap, policy)?,
        },
        Surface::Material(material) => TermReflection::Dynamic {
            eps: material.permittivity_iw(ctx.matsubara_frequency(m))?,
            lower: m as f64 * ctx.gamma,
        },
    })
}

/// Pressure (Pa) or force (N) magnitude with convergence diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceResult {
    pub magnitude: f64,
    /// Matsubara terms actually integrated (m = 0 included).
    pub m_terms_used: usize,
    /// Highest Matsubara index allowed by `zeta_max`.
    pub m_max: usize,
    pub rel_error_estimate: f64,
    /// Contribution of each integrated term, in the unit of `magnitude`.
    pub per_term_breakdown: Option<Vec<(usize, f64)>>,
}

impl ForceResult {
    fn scaled(mut self, factor: f64) -> Self {
        self.magnitude *= factor;
        if let Some(terms) = self.per_term_breakdown.as_mut() {
            for t in terms.iter_mut() {
                t.1 *= factor;
            }
        }
        self
    }
}

// Half-weight m = 0 TM term for perfect reflection, ζ(3)/8: a lower bound
// on the dimensionless Matsubara sum for every material.
const SUM_LOWER_BOUND: f64 = ZETA_3 / 8.0;

/// Upper bound on ∫_a^∞ y² · 2/(e^{2y} − 1) dy, which dominates any term
/// with lower limit `a > 0` because r⁻² ≥ 1.
fn term_upper_bound(a: f64) -> f64 {
    2.0 * (-2.0 * a).exp() * (0.5 * a * a + 0.5 * a + 0.25) / -(-2.0 * a).exp_m1()
}

fn pressure_impl(surface: Surface<'_>, gap: f64, temperature: f64, cfg: &NumericsConfig) -> Result<ForceResult> {
    cfg.validate()?;
    let ctx = ThermalContext::new(temperature, gap)?;
    if cfg.zeta_max <= ctx.matsubara_frequency(1) {
        return Err(invalid(
            "zeta_max",
            format!(
                "{:e} rad/s does not exceed the first Matsubara frequency {:e} rad/s",
                cfg.zeta_max,
                ctx.matsubara_frequency(1)
            ),
        ));
    }
    let m_max = ctx.max_matsubara_index(cfg.zeta_max);

    // Terms beyond `m_stop` are bounded by term_upper_bound and jointly
    // below `tail_budget`; they are counted as zero.
    let tail_budget = 1e-6 * cfg.quad_rel_tol * SUM_LOWER_BOUND;
    let m_stop = (1..=m_max)
        .find(|&m| term_upper_bound(m as f64 * ctx.gamma) * (m_max - m + 1) as f64 <= tail_budget)
        .unwrap_or(m_max + 1);
    let tail_bound = if m_stop <= m_max {
        term_upper_bound(m_stop as f64 * ctx.gamma) * (m_max - m_stop + 1) as f64
    } else {
        0.0
    };

    let abs_tol = cfg.quad_rel_tol * SUM_LOWER_BOUND / m_stop as f64;
    let opts = QuadOptions {
        rel_tol: cfg.quad_rel_tol,
        abs_tol,
        max_intervals: 2000,
    };
    let y_span = cfg.y_cut_offset;

    let terms: Vec<(f64, f64)> = (0..m_stop)
        .into_par_iter()
        .map(|m| {
            let term = term_reflection(surface, &ctx, m, cfg.m0_policy)?;
            let lower = m as f64 * ctx.gamma;
            let mut points = vec![lower];
            points.extend(
                [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
                    .iter()
                    .filter(|&&o| o < y_span)
                    .map(|o| lower + o),
            );
            points.push(lower + y_span);
            let q = integrate(|y| term.integrand(y), &points, opts)?;
            let weight = if m == 0 { 0.5 } else { 1.0 };
            Ok((weight * q.value[0], weight * q.abs_error[0]))
        })
        .collect::<Result<_>>()?;

    let mut sum = CompensatedSum::new();
    let mut err = CompensatedSum::new();
    for &(v, e) in &terms {
        sum.add(v);
        err.add(e);
    }
    let total = sum.value();
    let prefactor = K_B * temperature / (std::f64::consts::PI * gap.powi(3));
    Ok(ForceResult {
        magnitude: prefactor * total,
        m_terms_used: m_stop,
        m_max,
        rel_error_estimate: (err.value() + tail_bound) / total,
        per_term_breakdown: Some(
            terms
                .iter()
                .enumerate()
                .map(|(m, &(v, _))| (m, prefactor * v))
                .collect(),
        ),
    })
}

/// Casimir pressure magnitude (Pa) between two identical plates of
/// `material` at separation `gap` (m) and `temperature` (K).
pub fn pressure_pp(material: &MaterialRecord, gap: f64, temperature: f64, cfg: &NumericsConfig) -> Result<ForceResult> {
    pressure_impl(Surface::Material(material), gap, temperature, cfg)
}

/// Pressure between perfectly reflecting plates (every r⁻² = 1).
pub fn pressure_pp_perfect(gap: f64, temperature: f64, cfg: &NumericsConfig) -> Result<ForceResult> {
    pressure_impl(Surface::PerfectReflector, gap, temperature, cfg)
}

/// Force magnitude (N) between plates: area × pressure.
pub fn force_pp(
    material: &MaterialRecord,
    plates: &ParallelPlates,
    temperature: f64,
    cfg: &NumericsConfig,
) -> Result<ForceResult> {
    require_positive("area", plates.area)?;
    Ok(pressure_pp(material, plates.gap, temperature, cfg)?.scaled(plates.area))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{ModelKind, PermittivityTable};
    use crate::quadrature::QuadOptions;

    fn au(kind: ModelKind) -> MaterialRecord {
        MaterialRecord::gold().with_model(kind).unwrap()
    }

    #[test]
    fn matsubara_frequencies() {
        let ctx = ThermalContext::new(300.0, 1e-6).unwrap();
        assert_eq!(ctx.matsubara_frequency(0), 0.0);
        // 2π k_B (300 K)/ħ = 2.4677903e14 rad/s
        assert!((ctx.matsubara_frequency(1) - 2.4677903e14).abs() < 1e7);
        assert!((ctx.matsubara_frequency(1) / 2.46777e14 - 1.0).abs() < 1e-5);
        assert!((ctx.matsubara_frequency(405) - 9.994551e16).abs() < 1e10);
        assert!(ctx.matsubara_frequency(406) > 1e17);
        assert_eq!(ctx.max_matsubara_index(1e17), 405);
    }

    #[test]
    fn gamma_definition() {
        let ctx = ThermalContext::new(300.0, 3e-6).unwrap();
        let expected = 2.0 * std::f64::consts::PI * 3e-6 * K_B * 300.0 / (HBAR * C);
        assert!((ctx.gamma / expected - 1.0).abs() < 1e-15);
        // mγ = ξ_m d / c
        assert!((ctx.gamma * 7.0 / (ctx.matsubara_frequency(7) * 3e-6 / C) - 1.0).abs() < 1e-14);
        assert!(ThermalContext::new(0.0, 1e-6).is_err());
        assert!(ThermalContext::new(300.0, -1e-6).is_err());
    }

    #[test]
    fn reflection_factor_values() {
        assert_eq!(reflection_factors(4.0, 1.0).unwrap(), (9.0, 9.0));
        let (tm, te) = reflection_factors(1e12, 1.0).unwrap();
        assert!((tm - 1.0).abs() < 1e-5 && (te - 1.0).abs() < 1e-5);
        // 40-digit evaluation of the closed form.
        let (tm, te) = reflection_factors(2526.8, 2.0).unwrap();
        assert!((tm / 1.040_615_365_009_157_3 - 1.0).abs() < 1e-14);
        assert!((te / 1.172_500_621_014_808_5 - 1.0).abs() < 1e-14);
        assert!(reflection_factors(1.0, 2.0).is_err());
        assert!(reflection_factors(2.0, 0.5).is_err());
    }

    #[test]
    fn m0_factor_drude_and_plasma() {
        let drude = au(ModelKind::Drude);
        assert_eq!(m0_te_factor(&drude, 3.0, 1e-6, None).unwrap(), f64::INFINITY);
        assert_eq!(bracket(f64::INFINITY, 0.3), 0.0);

        let plasma = au(ModelKind::Plasma);
        let alpha = plasma.plasma_frequency().unwrap() * 3e-6 / C;
        let grazing = m0_te_factor(&plasma, 1e-6 * alpha, 3e-6, None).unwrap();
        assert!((grazing - 1.0).abs() < 1e-5);
        let v = m0_te_factor(&plasma, 10.0, 3e-6, None).unwrap();
        assert!((v / 1.339_205_662_499_673 - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn m0_factor_matches_vanishing_frequency_path() {
        let plasma = au(ModelKind::Plasma);
        let d = 3e-6;
        let y = 10.0;
        let limit = m0_te_factor(&plasma, y, d, None).unwrap();
        for xi in [1e6, 1e5, 1e4] {
            // p = y/(mγ) with mγ = ξ d/c
            let p = y * C / (xi * d);
            let (_, te) = reflection_factors(plasma.permittivity_iw(xi).unwrap(), p).unwrap();
            assert!((te / limit - 1.0).abs() < 1e-4, "xi={xi}: {te} vs {limit}");
        }
    }

    #[test]
    fn tabulated_needs_policy() {
        let table = PermittivityTable::new(&[(1e12, 1e8), (1e16, 2.0)]).unwrap();
        let tab = MaterialRecord::tabulated("t", table.clone(), None).unwrap();
        let cfg = NumericsConfig::default();
        assert!(matches!(
            pressure_pp(&tab, 10e-6, 300.0, &cfg),
            Err(CasimirError::MissingM0Policy(_))
        ));
        let plasma_like = NumericsConfig {
            m0_policy: Some(M0Policy::PlasmaLike),
            ..cfg
        };
        assert!(matches!(
            pressure_pp(&tab, 10e-6, 300.0, &plasma_like),
            Err(CasimirError::Validation { .. })
        ));
        let drude_like = NumericsConfig {
            m0_policy: Some(M0Policy::DrudeLike),
            ..cfg
        };
        assert!(pressure_pp(&tab, 10e-6, 300.0, &drude_like).is_ok());
        let with_wp = MaterialRecord::tabulated("t", table, Some(1.36734e16)).unwrap();
        assert!(pressure_pp(&with_wp, 10e-6, 300.0, &plasma_like).is_ok());
    }

    #[test]
    fn integrand_is_bounded_by_perfect_reflection() {
        let ctx = ThermalContext::new(300.0, 1e-6).unwrap();
        for kind in [ModelKind::Plasma, ModelKind::Drude] {
            let mat = au(kind);
            for m in [0usize, 1, 5, 40] {
                let f = matsubara_integrand(&mat, &ctx, m, None).unwrap();
                let lower = m as f64 * ctx.gamma;
                for i in 1..200 {
                    let y = lower + i as f64 * 0.25;
                    let v = f(y);
                    let ceiling = 2.0 * y * y / (2.0 * y).exp_m1();
                    assert!(v >= 0.0 && v <= ceiling * (1.0 + 1e-12), "m={m} y={y}: {v}");
                }
            }
        }
    }

    #[test]
    fn term_bound_dominates_perfect_term() {
        for a in [0.1, 1.0, 5.0, 20.0] {
            let q = integrate(
                |y| 2.0 * y * y / (2.0 * y).exp_m1(),
                &[a, a + 1.0, a + 4.0, a + 60.0],
                QuadOptions::default(),
            )
            .unwrap();
            assert!(q.value[0] <= term_upper_bound(a));
        }
    }

    #[test]
    fn thermal_limit_plasma_and_drude() {
        let cfg = NumericsConfig::default();
        let oracle = ZETA_3 * K_B * 300.0 / (4.0 * std::f64::consts::PI * 1e-15);
        assert!((oracle / 3.96218e-7 - 1.0).abs() < 1e-4);
        let plasma = pressure_pp(&au(ModelKind::Plasma), 10e-6, 300.0, &cfg).unwrap();
        assert!((plasma.magnitude / oracle - 1.0).abs() < 0.03, "{}", plasma.magnitude);
        let drude = pressure_pp(&au(ModelKind::Drude), 10e-6, 300.0, &cfg).unwrap();
        let r = drude.magnitude / oracle;
        assert!((0.47..=0.51).contains(&r), "{r}");
        assert_eq!(plasma.m_max, 405);
        assert!(plasma.rel_error_estimate >= 0.0 && plasma.rel_error_estimate < 1e-6);
    }

    #[test]
    fn breakdown_sums_to_total() {
        let r = pressure_pp(&au(ModelKind::Drude), 3e-6, 300.0, &NumericsConfig::default()).unwrap();
        let terms = r.per_term_breakdown.as_ref().unwrap();
        assert_eq!(terms.len(), r.m_terms_used);
        let s: f64 = terms.iter().map(|t| t.1).sum();
        assert!((s / r.magnitude - 1.0).abs() < 1e-12);
        assert!(terms.iter().all(|t| t.1 >= 0.0));
    }

    #[test]
    fn force_is_linear_in_area() {
        let cfg = NumericsConfig::default();
        let m = au(ModelKind::Plasma);
        let f1 = force_pp(&m, &ParallelPlates::new(0.012, 10e-6).unwrap(), 300.0, &cfg).unwrap();
        let f2 = force_pp(&m, &ParallelPlates::new(0.024, 10e-6).unwrap(), 300.0, &cfg).unwrap();
        assert_eq!(f2.magnitude, 2.0 * f1.magnitude);
        let oracle = 0.012 * ZETA_3 * K_B * 300.0 / (4.0 * std::f64::consts::PI * 1e-15);
        assert!((f1.magnitude / oracle - 1.0).abs() < 0.03);
        assert!((f1.magnitude / 4.75e-9 - 1.0).abs() < 0.03);
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = NumericsConfig::default();
        let m = au(ModelKind::Plasma);
        assert!(pressure_pp(&m, 0.0, 300.0, &cfg).is_err());
        assert!(pressure_pp(&m, 1e-6, 0.0, &cfg).is_err());
        let low_zeta = NumericsConfig { zeta_max: 1e14, ..cfg };
        assert!(pressure_pp(&m, 1e-6, 300.0, &low_zeta).is_err());
    }
}
