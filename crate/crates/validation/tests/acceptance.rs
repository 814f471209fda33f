//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use casimir_core::asymptotics::{ideal_pp_pressure, lowt_ratio_pp, thermal_pp_pressure, ExpansionInputs};
use casimir_core::dce::{detection_budget, photon_number, DceParams, Elapsed, TransitionSpec};
use casimir_core::lifshitz::{m0_te_factor, matsubara_integrand, reflection_factors};
use casimir_core::pfa::{cylinder_forces, force_cp, phi_limit_robustness};
use casimir_core::units::{ev_to_angular_frequency, hz_to_angular, C, HBAR};
use casimir_core::{pressure_pp, CylinderPlane, MaterialRecord, ModelKind, NumericsConfig, Result, ThermalContext};

const UM: f64 = 1e-6;

type Check = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn gold(kind: ModelKind) -> MaterialRecord {
    MaterialRecord::gold()
        .with_model(kind)
        .expect("gold has both parameters")
}

fn ideal_proxy() -> MaterialRecord {
    MaterialRecord::plasma("ideal-proxy", ev_to_angular_frequency(9000.0).unwrap()).unwrap()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ideal_limit() -> Result<Outcome> {
    let cfg = NumericsConfig::default();
    let p = pressure_pp(&ideal_proxy(), UM, 1.0, &cfg)?.magnitude;
    let target = PI * PI * HBAR * C / (240.0 * UM.powi(4));
    let err = rel(p, target);
    outcome(
        err < 5e-3 && rel(target, 1.30013e-3) < 1e-5,
        format!("P = {p:.6e} Pa vs {target:.6e} Pa, deviation {err:.2e} (limit 5e-3)"),
    )
}

fn high_temperature_limit() -> Result<Outcome> {
    let cfg = NumericsConfig::default();
    let d = 10.0 * UM;
    let target = thermal_pp_pressure(d, 300.0)?;
    let plasma = pressure_pp(&gold(ModelKind::Plasma), d, 300.0, &cfg)?.magnitude;
    let drude = pressure_pp(&gold(ModelKind::Drude), d, 300.0, &cfg)?.magnitude;
    let dev = rel(plasma, target);
    let ratio = drude / target;
    outcome(
        dev < 0.03 && (0.48..=0.52).contains(&ratio) && rel(target, 3.96218e-7) < 1e-4,
        format!("plasma deviation {dev:.3e} (limit 3e-2), drude ratio {ratio:.4} (window [0.48, 0.52])"),
    )
}

fn model_ordering() -> Result<Outcome> {
    let cfg = NumericsConfig::default();
    let (plasma, drude) = (gold(ModelKind::Plasma), gold(ModelKind::Drude));
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for d in log_grid(0.5 * UM, 30.0 * UM, 20) {
        let pp = (
            pressure_pp(&drude, d, 300.0, &cfg)?.magnitude,
            pressure_pp(&plasma, d, 300.0, &cfg)?.magnitude,
        );
        let geom = CylinderPlane::new(0.02, 0.01, d)?;
        let cp = (
            force_cp(&drude, &geom, 300.0, &cfg)?.force.magnitude,
            force_cp(&plasma, &geom, 300.0, &cfg)?.force.magnitude,
        );
        for (dr, pl) in [pp, cp] {
            violations += usize::from(dr >= pl);
            worst = worst.max(dr / pl);
        }
    }
    outcome(
        violations == 0,
        format!("{violations} of 40 points with drude >= plasma, largest drude/plasma {worst:.4}"),
    )
}

fn convention_spread() -> Result<Outcome> {
    let cfg = NumericsConfig::default();
    let mut worst: f64 = 0.0;
    for kind in [ModelKind::Plasma, ModelKind::Drude] {
        for d in [1.0 * UM, 3.0 * UM, 10.0 * UM] {
            let geom = CylinderPlane::new(0.02, 0.01, d)?;
            worst = worst.max(cylinder_forces(&gold(kind), &geom, 300.0, &cfg)?.spread());
        }
    }
    outcome(worst <= 0.012, format!("largest spread {worst:.3e} (limit 1.2e-2)"))
}

fn cutoff_robustness() -> Result<Outcome> {
    let base = NumericsConfig::default();
    let wide = NumericsConfig {
        y_cut_offset: 100.0,
        zeta_max: 2e17,
        ..base
    };
    let mut worst: f64 = 0.0;
    for kind in [ModelKind::Plasma, ModelKind::Drude] {
        for d in [1.0 * UM, 3.0 * UM, 10.0 * UM] {
            let a = pressure_pp(&gold(kind), d, 300.0, &base)?.magnitude;
            let b = pressure_pp(&gold(kind), d, 300.0, &wide)?.magnitude;
            worst = worst.max(rel(b, a));
        }
    }
    outcome(worst < 1e-3, format!("largest shift {worst:.3e} (limit 1e-3)"))
}

fn cylinder_scaling() -> Result<Outcome> {
    let cfg = NumericsConfig::default();
    let material = ideal_proxy();
    let gaps = log_grid(1.0 * UM, 5.0 * UM, 5);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &d in &gaps {
        let f = force_cp(&material, &CylinderPlane::new(0.02, 0.01, d)?, 1.0, &cfg)?
            .force
            .magnitude;
        xs.push(d.ln());
        ys.push(f.ln());
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    outcome(
        (slope + 3.5).abs() <= 0.05,
        format!("log-log slope {slope:.4} (target -3.5 +/- 0.05)"),
    )
}

fn lowt_consistency() -> Result<Outcome> {
    let cfg = NumericsConfig::default();
    let material = gold(ModelKind::Plasma);
    let d = 0.5 * UM;
    let full = pressure_pp(&material, d, 300.0, &cfg)?.magnitude / ideal_pp_pressure(d)?;
    let series = lowt_ratio_pp(ExpansionInputs::for_material(&material, d, 300.0)?).ratio;
    let dev = rel(series, full);
    outcome(
        dev <= 0.02,
        format!("full ratio {full:.5}, series {series:.5}, deviation {dev:.3e} (limit 2e-2)"),
    )
}

fn phi_limit() -> Result<Outcome> {
    let cfg = NumericsConfig::default();
    let geom = CylinderPlane::new(0.02, 0.01, 3.0 * UM)?;
    let change = phi_limit_robustness(&ideal_proxy(), &geom, 1.0, &cfg)?;
    let gold_change = phi_limit_robustness(&gold(ModelKind::Plasma), &geom, 300.0, &cfg)?;
    outcome(
        change < 1e-6,
        format!("ideal proxy at 1 K: relative change {change:.3e} (limit 1e-6); plasma Au at 300 K, not asserted: {gold_change:.3e}"),
    )
}

fn dce_numbers() -> Result<Outcome> {
    let omega = hz_to_angular(228e6);
    let one = photon_number(&DceParams::new(1e8, 1e-8, omega, None)?, Elapsed::Saturated)?;
    let four = photon_number(&DceParams::new(1e8, 4e-8, omega, None)?, Elapsed::Saturated)?;
    let li6 = TransitionSpec::li6_hyperfine();
    let budget = detection_budget(&DceParams::new(1e8, 1e-8, omega, None)?, &li6, &li6)?;
    let power = budget.power_w;
    let in_window = (1e-27..=1e-23).contains(&power);
    outcome(
        (one - 1.38110).abs() <= 1e-5 && (four - 744.74).abs() <= 0.01 && in_window,
        format!("N(Qe=1) = {one:.6}, N(Qe=4) = {four:.3}, power {power:.3e} W (window [1e-27, 1e-23])"),
    )
}

fn m0_limit() -> Result<Outcome> {
    let plasma = gold(ModelKind::Plasma);
    let d = 3.0 * UM;
    let mut worst: f64 = 0.0;
    for xi in [1e6, 1e5, 1e4] {
        for y in [0.1, 1.0, 5.0] {
            let limit = m0_te_factor(&plasma, y, d, None)?;
            let (_, te) = reflection_factors(plasma.permittivity_iw(xi)?, y * C / (xi * d))?;
            worst = worst.max(rel(te, limit));
        }
    }
    let drude = gold(ModelKind::Drude);
    let ctx = ThermalContext::new(300.0, d)?;
    let integrand = matsubara_integrand(&drude, &ctx, 0, None)?;
    let drude_te_zero = m0_te_factor(&drude, 1.0, d, None)? == f64::INFINITY
        && [0.1, 1.0, 5.0]
            .iter()
            .all(|&y: &f64| integrand(y) == y * y * ((-2.0 * y).exp() / -(-2.0 * y).exp_m1()));
    outcome(
        worst < 1e-4 && drude_te_zero,
        format!("plasma limit deviation {worst:.3e} (limit 1e-4), drude TE m=0 zero: {drude_te_zero}"),
    )
}

fn sweep_csv(threads: Option<usize>) -> Vec<u8> {
    let mut argv: Vec<String> = [
        "casimir",
        "sweep",
        "--geometry",
        "cp",
        "--L",
        "0.02",
        "--a",
        "0.01",
        "--d-min",
        "1e-6",
        "--d-max",
        "1e-5",
        "--points",
        "12",
        "--models",
        "plasma,drude,ideal,thermal,lowT",
        "--T",
        "300",
    ]
    .map(String::from)
    .to_vec();
    if let Some(n) = threads {
        argv.extend(["--threads".to_string(), n.to_string()]);
    }
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = casimir_cli::run_with(argv, &mut out, &mut err);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    out
}

fn determinism() -> Result<Outcome> {
    let reference = sweep_csv(Some(1));
    let runs = [
        sweep_csv(Some(1)),
        sweep_csv(Some(3)),
        sweep_csv(Some(8)),
        sweep_csv(None),
    ];
    let identical = runs.iter().all(|r| *r == reference);
    let lines = reference.iter().filter(|&&b| b == b'\n').count();
    outcome(
        identical && lines == 61,
        format!("{lines} lines; byte-identical across 1, 3, 8 and default threads: {identical}"),
    )
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("ideal-limit recovery", ideal_limit),
        ("high-temperature limit", high_temperature_limit),
        ("model ordering", model_ordering),
        ("area-convention spread", convention_spread),
        ("cutoff robustness", cutoff_robustness),
        ("cylinder-plane scaling", cylinder_scaling),
        ("low-temperature expansion", lowt_consistency),
        ("angular-limit robustness", phi_limit),
        ("dynamical Casimir numbers", dce_numbers),
        ("zero-frequency limit", m0_limit),
        ("sweep determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (status, detail) = match check() {
            Ok(o) => (if o.pass { "PASS" } else { "FAIL" }, o.detail),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        failed += usize::from(status == "FAIL");
        println!(
            "{status} {:>2} {name}: {detail} [{:.1} s]",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
