//! CODATA-2018 physical constants and the handful of unit conversions the
//! parameter files need. All values are SI.

use std::f64::consts::PI;

/// Elementary charge (C), exact.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant (J s), exact.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Boltzmann constant (J/K), exact.
pub const K_B: f64 = 1.380_649e-23;
/// Electron rest mass (kg), CODATA-2018 recommended.
pub const M_E: f64 = 9.109_383_701_5e-31;

/// Bundle of the constants, for callers that prefer passing a value around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConstants {
    pub e: f64,
    pub h: f64,
    pub hbar: f64,
    pub k_b: f64,
    pub m_e: f64,
}

impl PhysConstants {
    pub const CODATA2018: PhysConstants = PhysConstants {
        e: E_CHARGE,
        h: PLANCK,
        hbar: HBAR,
        k_b: K_B,
        m_e: M_E,
    };
}

impl Default for PhysConstants {
    fn default() -> Self {
        Self::CODATA2018
    }
}

pub const HZ_PER_GHZ: f64 = 1e9;
pub const M2_PER_CM2: f64 = 1e-4;

pub fn ghz_to_hz(f_ghz: f64) -> f64 {
    f_ghz * HZ_PER_GHZ
}

pub fn hz_to_ghz(f_hz: f64) -> f64 {
    f_hz / HZ_PER_GHZ
}

/// Sheet density cm⁻² → m⁻².
pub fn per_cm2_to_per_m2(n: f64) -> f64 {
    n / M2_PER_CM2
}

/// Sheet density m⁻² → cm⁻².
pub fn per_m2_to_per_cm2(n: f64) -> f64 {
    n * M2_PER_CM2
}

/// Mobility cm²/Vs → m²/Vs.
pub fn cm2_to_m2(mu: f64) -> f64 {
    mu * M2_PER_CM2
}

pub fn m2_to_cm2(mu: f64) -> f64 {
    mu / M2_PER_CM2
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hbar_is_h_over_two_pi() {
        let c = PhysConstants::default();
        assert!((c.hbar - c.h / (2.0 * PI)).abs() / c.hbar < 1e-12);
    }

    proptest! {
        #[test]
        fn conversions_invert(x in 1e-6f64..1e20) {
            prop_assert!((hz_to_ghz(ghz_to_hz(x)) - x).abs() <= 1e-12 * x);
            prop_assert!((per_m2_to_per_cm2(per_cm2_to_per_m2(x)) - x).abs() <= 1e-12 * x);
            prop_assert!((m2_to_cm2(cm2_to_m2(x)) - x).abs() <= 1e-12 * x);
        }
    }
}
