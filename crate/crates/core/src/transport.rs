//! Dark longitudinal resistivity: Drude background, first-harmonic
//! Shubnikov-de Haas oscillation with thermal and Dingle damping, and a
//! resonance-weighted cavity scattering channel that adds to the quantum
//! scattering rate.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::constants::{E_CHARGE, HBAR, K_B};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::landau::{cyclotron_frequency_unchecked, filling_factor_unchecked};
use crate::params::{MaterialParams, ResonatorParams};
use crate::polariton::magneto_plasmon_unchecked;

/// Dark ρ_xx(B) with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportTrace {
    pub b_axis: Grid1D,
    /// Ω per square.
    pub rho_xx: Vec<f64>,
    pub material: MaterialParams,
    pub resonator: ResonatorParams,
    pub eta_used: f64,
}

impl TransportTrace {
    pub fn b_values(&self) -> Vec<f64> {
        self.b_axis.to_vec()
    }
}

/// ρ₀ = 1/(n_s e μ), Ω/sq.
pub fn drude_rho0(m: &MaterialParams) -> f64 {
    1.0 / (m.n_s * E_CHARGE * m.mu)
}

/// Cavity-induced scattering rate 1/τ_cav(B) in s⁻¹:
/// (1/τ_p)·(2Ω_f)²/((f_mp − f_cav)² + (2Ω_f)² + κ²).
pub fn cavity_scattering_rate(b: f64, r: &ResonatorParams, m: &MaterialParams) -> Result<f64> {
    if !(b >= 0.0 && b.is_finite()) {
        return Err(Error::InvalidField {
            value: b,
            expected: ">= 0",
        });
    }
    Ok(cavity_rate_unchecked(b, r, m))
}

fn cavity_rate_unchecked(b: f64, r: &ResonatorParams, m: &MaterialParams) -> f64 {
    let two_omega = 2.0 * r.coupling();
    let detuning = magneto_plasmon_unchecked(b, r, m) - r.f_cav;
    let kappa = r.linewidth();
    let num = two_omega * two_omega;
    num / (detuning * detuning + num + kappa * kappa) / r.tau_p
}

/// X/sinh X with X = 2π² k_B T/(ħω_c).
pub fn thermal_damping(b: f64, m: &MaterialParams) -> f64 {
    let omega_c = 2.0 * PI * cyclotron_frequency_unchecked(b, m);
    let x = 2.0 * PI * PI * K_B * m.t_el / (HBAR * omega_c);
    if x < 1e-4 {
        1.0 - x * x / 6.0
    } else if x > 700.0 {
        0.0
    } else {
        x / x.sinh()
    }
}

/// exp(−π/(ω_c τ_q,eff)) with 1/τ_q,eff = 1/τ_q + 1/τ_cav(B).
pub fn dingle_damping(b: f64, r: &ResonatorParams, m: &MaterialParams) -> f64 {
    let omega_c = 2.0 * PI * cyclotron_frequency_unchecked(b, m);
    let rate = 1.0 / m.tau_q + cavity_rate_unchecked(b, r, m);
    (-PI * rate / omega_c).exp()
}

/// 4·A_T·A_D, the relative SdH amplitude before clipping.
pub fn sdh_envelope(b: f64, r: &ResonatorParams, m: &MaterialParams) -> f64 {
    4.0 * thermal_damping(b, m) * dingle_damping(b, r, m)
}

/// ρ_xx at one field (B > 0), clipped at 0.
pub fn rho_xx_at(b: f64, r: &ResonatorParams, m: &MaterialParams) -> f64 {
    let nu = filling_factor_unchecked(b, m);
    let osc = sdh_envelope(b, r, m) * (2.0 * PI * nu).cos();
    (drude_rho0(m) * (1.0 - osc)).max(0.0)
}

/// Dark trace on a positive B axis. Minima fall on integer ν.
pub fn rho_xx_dark(
    b_axis: &Grid1D,
    r: &ResonatorParams,
    m: &MaterialParams,
) -> Result<TransportTrace> {
    if !(b_axis.start() > 0.0) {
        return Err(Error::InvalidField {
            value: b_axis.start(),
            expected: "> 0 across the whole axis",
        });
    }
    m.validate()?;
    r.validate()?;
    let rho_xx = (0..b_axis.count())
        .into_par_iter()
        .map(|i| rho_xx_at(b_axis.sample(i), r, m))
        .collect();
    Ok(TransportTrace {
        b_axis: *b_axis,
        rho_xx,
        material: *m,
        resonator: *r,
        eta_used: r.eta,
    })
}
