//! Physical constants (CODATA 2018 exact or recommended values) and unit bridges.

use crate::error::{invalid, Result};

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054571817e-34;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 2.99792458e8;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380649e-23;
/// Vacuum permittivity, F/m.
pub const EPS_0: f64 = 8.8541878128e-12;
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602176634e-19;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.29177210903e-11;
/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 7.2973525693e-3;

/// Riemann zeta at 3.
pub const ZETA_3: f64 = 1.2020569032;
/// Riemann zeta at 7/2.
pub const ZETA_7_2: f64 = 1.1267338673;

/// Converts a photon energy in electron-volts to an angular frequency in rad/s.
pub fn ev_to_angular_frequency(energy_ev: f64) -> Result<f64> {
    if !(energy_ev.is_finite() && energy_ev >= 0.0) {
        return Err(invalid(
            "energy",
            format!("must be finite and >= 0 eV, got {energy_ev}"),
        ));
    }
    Ok(energy_ev * (E_CHARGE / HBAR))
}

/// Angular frequency for an ordinary frequency in Hz.
pub fn hz_to_angular(freq_hz: f64) -> f64 {
    2.0 * std::f64::consts::PI * freq_hz
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ev_conversion_values() {
        assert_eq!(ev_to_angular_frequency(0.0).unwrap(), 0.0);
        assert!((ev_to_angular_frequency(9.0).unwrap() - 1.36734e16).abs() < 1e11);
        assert!((ev_to_angular_frequency(0.035).unwrap() - 5.31744e13).abs() < 1e9);
        // e/hbar
        assert!((ev_to_angular_frequency(1.0).unwrap() / 1.5192676e15 - 1.0).abs() < 1e-7);
    }

    #[test]
    fn ev_conversion_rejects_negative() {
        assert!(ev_to_angular_frequency(-1.0).is_err());
        assert!(ev_to_angular_frequency(f64::NAN).is_err());
    }

    #[test]
    fn zeta_constants_match_series() {
        // Direct sum plus the Euler-Maclaurin tail for n > N.
        fn zeta(s: f64) -> f64 {
            let n = 10_000u32;
            let head: f64 = (1..=n).rev().map(|k| (k as f64).powf(-s)).sum();
            let nf = n as f64;
            head + nf.powf(1.0 - s) / (s - 1.0) - 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0)
        }
        assert!((zeta(3.0) - ZETA_3).abs() < 1e-10);
        assert!((zeta(3.5) - ZETA_7_2).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn ev_conversion_is_linear(a in 0.0f64..100.0, b in 0.0f64..100.0) {
            let sum = ev_to_angular_frequency(a + b).unwrap();
            let parts = ev_to_angular_frequency(a).unwrap() + ev_to_angular_frequency(b).unwrap();
            prop_assert!((sum - parts).abs() <= 4.0 * f64::EPSILON * sum.max(1.0));
        }
    }
}
