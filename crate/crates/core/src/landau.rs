//! Single-particle Landau physics: cyclotron frequency, filling factor,
//! magnetic length, broadened density of states, and the localized versus
//! delocalized character of the states at the Fermi level.
//!
//! Spin is a degeneracy factor of 2 throughout; there is no Zeeman term.

use std::f64::consts::PI;

use crate::constants::{E_CHARGE, HBAR, PLANCK};
use crate::error::{Error, Result};
use crate::lineshape::lorentzian_density;
use crate::params::MaterialParams;

/// Levels kept above the one containing the evaluation energy.
const DOS_PADDING_LEVELS: usize = 50;

fn require_positive(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidField {
            value: b,
            expected: "> 0",
        })
    }
}

fn require_non_negative(b: f64) -> Result<()> {
    if b >= 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidField {
            value: b,
            expected: ">= 0",
        })
    }
}

/// f_c = eB/(2π m*) in Hz. Zero at B = 0.
pub fn cyclotron_frequency(b: f64, m: &MaterialParams) -> Result<f64> {
    require_non_negative(b)?;
    Ok(cyclotron_frequency_unchecked(b, m))
}

#[inline]
pub(crate) fn cyclotron_frequency_unchecked(b: f64, m: &MaterialParams) -> f64 {
    E_CHARGE * b / (2.0 * PI * m.m_star)
}

/// Spin-degenerate filling factor ν = h n_s/(2eB).
pub fn filling_factor(b: f64, m: &MaterialParams) -> Result<f64> {
    require_positive(b)?;
    Ok(filling_factor_unchecked(b, m))
}

#[inline]
pub(crate) fn filling_factor_unchecked(b: f64, m: &MaterialParams) -> f64 {
    PLANCK * m.n_s / (2.0 * E_CHARGE * b)
}

/// SI magnetic length √(ħ/(eB)) in m.
pub fn magnetic_length(b: f64) -> Result<f64> {
    require_positive(b)?;
    Ok((HBAR / (E_CHARGE * b)).sqrt())
}

/// Dipole length scale l₀·√ν of the extended states (m). Multiply by e for the
/// dipole moment.
pub fn dipole_scale(b: f64, m: &MaterialParams) -> Result<f64> {
    Ok(magnetic_length(b)? * filling_factor(b, m)?.sqrt())
}

/// Landau ladder at one field, E_n = ħω_c(n + ½), each level a Lorentzian of
/// full width Γ = ħ/τ_q.
#[derive(Debug, Clone, PartialEq)]
pub struct LandauSpectrum {
    pub b: f64,
    /// Cyclotron frequency (Hz).
    pub f_c: f64,
    /// Level spacing ħω_c (J).
    pub spacing: f64,
    /// Level energies (J), levels 0..=n_max.
    pub level_energies: Vec<f64>,
    /// Level width Γ (J).
    pub gamma: f64,
}

impl LandauSpectrum {
    pub fn new(b: f64, m: &MaterialParams, n_max: usize) -> Result<Self> {
        require_positive(b)?;
        m.validate()?;
        let f_c = cyclotron_frequency_unchecked(b, m);
        let spacing = HBAR * 2.0 * PI * f_c;
        let level_energies = (0..=n_max).map(|n| level_energy(spacing, n)).collect();
        Ok(Self {
            b,
            f_c,
            spacing,
            level_energies,
            gamma: HBAR / m.tau_q,
        })
    }

    /// Spectrum deep enough to evaluate the DOS up to `e_max`.
    pub fn covering(b: f64, m: &MaterialParams, e_max: f64) -> Result<Self> {
        let mut s = Self::new(b, m, 0)?;
        let n_max = levels_needed(e_max, s.spacing);
        s.level_energies = (0..=n_max).map(|n| level_energy(s.spacing, n)).collect();
        Ok(s)
    }

    pub fn n_max(&self) -> usize {
        self.level_energies.len() - 1
    }

    /// Degeneracy per level per unit area including spin, 2eB/h (m⁻²).
    pub fn degeneracy(&self) -> f64 {
        2.0 * E_CHARGE * self.b / PLANCK
    }
}

#[inline]
fn level_energy(spacing: f64, n: usize) -> f64 {
    spacing * (n as f64 + 0.5)
}

fn levels_needed(e: f64, spacing: f64) -> usize {
    (e.max(0.0) / spacing).ceil() as usize + DOS_PADDING_LEVELS
}

/// Lorentzian-broadened, spin-degenerate density of states at energy `e`
/// (states J⁻¹ m⁻²). Levels beyond the stored ladder are generated on demand so
/// the truncation always extends `DOS_PADDING_LEVELS` past `e`.
pub fn dos_at_energy(e: f64, spectrum: &LandauSpectrum) -> f64 {
    let n_max = spectrum.n_max().max(levels_needed(e, spectrum.spacing));
    let sum: f64 = (0..=n_max)
        .map(|n| lorentzian_density(e - level_energy(spectrum.spacing, n), spectrum.gamma))
        .sum();
    spectrum.degeneracy() * sum
}

/// Filling state at one field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermiState {
    pub nu: f64,
    /// Fermi energy (J) in the fixed-density approximation.
    pub e_f: f64,
    pub w_deloc: f64,
    pub w_loc: f64,
}

/// E_F = ħω_c·ν, so half-integer ν puts E_F on a level centre. The delocalized
/// weight sin²(πν) is 1 there and 0 at integer ν.
pub fn fermi_state(b: f64, m: &MaterialParams) -> Result<FermiState> {
    require_positive(b)?;
    Ok(fermi_state_unchecked(b, m))
}

pub(crate) fn fermi_state_unchecked(b: f64, m: &MaterialParams) -> FermiState {
    let nu = filling_factor_unchecked(b, m);
    let f_c = cyclotron_frequency_unchecked(b, m);
    let (w_deloc, w_loc) = localization_weights(nu);
    FermiState {
        nu,
        e_f: HBAR * 2.0 * PI * f_c * nu,
        w_deloc,
        w_loc,
    }
}

/// (w_deloc, w_loc) = (sin²πν, cos²πν), evaluated on the fractional part so
/// integer and half-integer ν give exact 0/1.
pub fn localization_weights(nu: f64) -> (f64, f64) {
    let frac = nu - nu.round();
    let (s, c) = (PI * frac).sin_cos();
    (s * s, c * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::M_E;

    fn gaas() -> MaterialParams {
        MaterialParams::default()
    }

    #[test]
    fn cyclotron_frequency_values() {
        let m = gaas();
        assert_eq!(cyclotron_frequency(0.0, &m).unwrap(), 0.0);
        // python oracle: e*0.5/(2*pi*0.067*m_e)
        let f = cyclotron_frequency(0.5, &m).unwrap();
        assert!((f - 208_899_178_151.739).abs() / f < 1e-12);
        assert_eq!(
            cyclotron_frequency(1.0, &m).unwrap(),
            2.0 * cyclotron_frequency(0.5, &m).unwrap()
        );
        assert!(cyclotron_frequency(-0.1, &m).is_err());
        assert_eq!(m.m_star, 0.067 * M_E);
    }

    #[test]
    fn filling_factor_values() {
        let m = gaas();
        let nu = filling_factor(1.0, &m).unwrap();
        assert!((nu - 6.823_851_699_924).abs() < 1e-9);
        assert_eq!(filling_factor(0.5, &m).unwrap(), 2.0 * nu);
        assert!(filling_factor(0.0, &m).is_err());
        assert!(filling_factor(-1.0, &m).is_err());
        for b in [0.07, 0.3, 0.911, 1.2] {
            let prod = filling_factor(b, &m).unwrap() * b;
            assert!((prod - nu).abs() / nu < 1e-12);
        }
    }

    #[test]
    fn magnetic_length_values() {
        let l = magnetic_length(1.0).unwrap();
        assert!((l - 2.565_564_181_522e-8).abs() < 1e-18);
        assert_eq!(magnetic_length(4.0).unwrap(), l / 2.0);
        assert!(magnetic_length(2.0).unwrap() < l);
        assert!(magnetic_length(0.0).is_err());
    }

    #[test]
    fn dipole_scale_values() {
        let m = gaas();
        let d = dipole_scale(1.0, &m).unwrap();
        assert!((d - 6.701_895_837e-8).abs() < 1e-16);
        let d2 = dipole_scale(2.0, &m).unwrap();
        assert!((d2 - d / 2.0).abs() / d < 1e-14);
        let dilute = MaterialParams { n_s: 1e3, ..m };
        assert!(dipole_scale(1.0, &dilute).unwrap() < 1e-12);
    }

    #[test]
    fn level_spacing_is_uniform() {
        let s = LandauSpectrum::new(0.37, &gaas(), 400).unwrap();
        for w in s.level_energies.windows(2) {
            let ulp = w[1] * f64::EPSILON;
            assert!(((w[1] - w[0]) - s.spacing).abs() <= 4.0 * ulp);
        }
        assert!(s.gamma > 0.0);
    }

    #[test]
    fn dos_peak_value_at_level_centre() {
        let m = gaas();
        let s = LandauSpectrum::new(1.0, &m, 60).unwrap();
        let e3 = s.level_energies[3];
        let single = s.degeneracy() * 2.0 / (PI * s.gamma);
        let total = dos_at_energy(e3, &s);
        // other levels only add
        assert!(total >= single);
        assert!((total - single) / single < 0.05);
    }

    #[test]
    fn dos_midpoint_is_local_minimum() {
        let s = LandauSpectrum::new(0.8, &gaas(), 60).unwrap();
        let mid = 0.5 * (s.level_energies[4] + s.level_energies[5]);
        let d = 1e-3 * s.spacing;
        let at = dos_at_energy(mid, &s);
        assert!(at < dos_at_energy(mid - d, &s));
        assert!(at < dos_at_energy(mid + d, &s));
    }

    /// Trapezoid quadrature of one level's Lorentzian, independent of the
    /// DOS summation path.
    fn quad_single_level(spectrum: &LandauSpectrum, n: usize, lo: f64, hi: f64) -> f64 {
        let steps = 200_000;
        let h = (hi - lo) / steps as f64;
        let c = spectrum.level_energies[n];
        let hw = spectrum.gamma / 2.0;
        let f = |e: f64| hw / (PI * ((e - c).powi(2) + hw * hw));
        let mut acc = 0.5 * (f(lo) + f(hi));
        for i in 1..steps {
            acc += f(lo + i as f64 * h);
        }
        spectrum.degeneracy() * acc * h
    }

    #[test]
    fn narrow_level_weight_is_degeneracy() {
        // Γ → 0: ±10⁴ Γ leaves (2/π)/(2·10⁴) ≈ 3e-5 of the weight outside
        let m = MaterialParams {
            tau_q: 1e-9,
            ..gaas()
        };
        let s = LandauSpectrum::new(1.0, &m, 10).unwrap();
        let c = s.level_energies[2];
        let w = quad_single_level(&s, 2, c - 1e4 * s.gamma, c + 1e4 * s.gamma);
        assert!((w - s.degeneracy()).abs() / s.degeneracy() < 1e-4);
    }

    #[test]
    fn window_weight_when_gamma_small() {
        // Γ = ħω_c/20: one inter-level window of the full DOS holds one level
        let m = gaas();
        let b = 1.0;
        let f_c = cyclotron_frequency(b, &m).unwrap();
        let tau_q = 20.0 / (2.0 * PI * f_c);
        let s = LandauSpectrum::new(b, &MaterialParams { tau_q, ..m }, 10).unwrap();
        let c = s.level_energies[5];
        let (lo, hi) = (c - s.spacing / 2.0, c + s.spacing / 2.0);
        let steps = 20_000;
        let h = (hi - lo) / steps as f64;
        let mut acc = 0.5 * (dos_at_energy(lo, &s) + dos_at_energy(hi, &s));
        for i in 1..steps {
            acc += dos_at_energy(lo + i as f64 * h, &s);
        }
        assert!(acc * h >= 0.99 * s.degeneracy());
        // the isolated level alone keeps (2/π)·atan(20) ≈ 0.968 of its weight
        let single = quad_single_level(&s, 5, lo, hi) / s.degeneracy();
        assert!((single - 2.0 / PI * 20f64.atan()).abs() < 1e-6);
    }

    #[test]
    fn fermi_state_weights() {
        let m = gaas();
        let nu1 = filling_factor(1.0, &m).unwrap();
        let b6 = nu1 / 6.0;
        let st = fermi_state(b6, &m).unwrap();
        assert!((st.nu - 6.0).abs() < 1e-12);
        assert!(st.w_deloc < 1e-12);
        assert!((st.w_loc - 1.0).abs() < 1e-12);
        let st = fermi_state(nu1 / 6.5, &m).unwrap();
        assert!((st.w_deloc - 1.0).abs() < 1e-12);
        // E_F sits on level 6 at ν = 6.5
        let s = LandauSpectrum::new(nu1 / 6.5, &m, 10).unwrap();
        assert!((st.e_f - s.level_energies[6]).abs() / st.e_f < 1e-12);
        for b in [0.1, 0.33, 0.77, 1.5] {
            let st = fermi_state(b, &m).unwrap();
            assert!((st.w_deloc + st.w_loc - 1.0).abs() < 1e-15);
        }
        assert!(fermi_state(0.0, &m).is_err());
    }

    #[test]
    fn localization_weight_is_periodic() {
        for k in 0..200 {
            let nu = 0.37 + 0.0731 * k as f64;
            let (a, _) = localization_weights(nu);
            let (b, _) = localization_weights(nu + 1.0);
            assert!((a - b).abs() < 1e-12);
        }
    }
}
