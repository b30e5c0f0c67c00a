//! Sample parameter records and the flat JSON parameter file.

use serde::{Deserialize, Serialize};

use crate::constants::{self, E_CHARGE, M_E};
use crate::error::{Error, Result};

/// 2DEG material parameters, all SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Sheet density (m⁻²).
    pub n_s: f64,
    /// Effective mass (kg).
    pub m_star: f64,
    /// Mobility (m²/Vs).
    pub mu: f64,
    /// Quantum lifetime (s).
    pub tau_q: f64,
    /// Electron temperature (K).
    pub t_el: f64,
    /// Hall-bar width (m).
    pub width: f64,
    /// Voltage-probe separation (m).
    pub length: f64,
}

impl MaterialParams {
    pub fn validate(&self) -> Result<()> {
        positive("n_s", self.n_s)?;
        positive("m_star", self.m_star)?;
        positive("mu", self.mu)?;
        positive("tau_q", self.tau_q)?;
        positive("W", self.width)?;
        positive("L", self.length)?;
        if !(self.t_el >= 0.0 && self.t_el.is_finite()) {
            return Err(Error::param("T_el", format!("must be >= 0, got {}", self.t_el)));
        }
        Ok(())
    }

    pub fn m_star_ratio(&self) -> f64 {
        self.m_star / M_E
    }

    pub fn with_m_star_ratio(mut self, ratio: f64) -> Self {
        self.m_star = ratio * M_E;
        self
    }

    /// Drude transport lifetime τ_tr = μ m*/e (s).
    pub fn transport_lifetime(&self) -> f64 {
        self.mu * self.m_star / E_CHARGE
    }

    /// True when τ_tr ≥ τ_q, which is the physically expected ordering.
    pub fn lifetimes_consistent(&self) -> bool {
        self.transport_lifetime() >= self.tau_q
    }

    /// Sheet resistivity (Ω/sq) to the four-probe resistance between the probes.
    pub fn resistance_from_rho(&self, rho: f64) -> f64 {
        rho * self.length / self.width
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self {
            n_s: constants::per_cm2_to_per_m2(3.3e11),
            m_star: 0.067 * M_E,
            mu: constants::cm2_to_m2(3.1e6),
            tau_q: 5e-12,
            t_el: 0.1,
            width: 40e-6,
            length: 100e-6,
        }
    }
}

/// Resonator (cavity) parameters. Frequencies are ordinary frequencies in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorParams {
    /// Bare cavity frequency (Hz).
    pub f_cav: f64,
    /// Quality factor.
    pub q: f64,
    /// Normalized coupling Ω/ω_cav.
    pub eta: f64,
    /// Cavity-mediated scattering time (s).
    pub tau_p: f64,
    /// Zero-field magneto-plasmon frequency (Hz).
    pub f_p: f64,
}

impl ResonatorParams {
    pub fn ch205() -> Self {
        Self {
            f_cav: 205e9,
            q: 5.0,
            eta: 0.20,
            tau_p: 300e-12,
            f_p: 60e9,
        }
    }

    pub fn ch140() -> Self {
        Self {
            f_cav: 140e9,
            eta: 0.30,
            ..Self::ch205()
        }
    }

    /// Uncovered reference Hall bar: same numbers, no coupling.
    pub fn reference() -> Self {
        Self {
            eta: 0.0,
            ..Self::ch205()
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("f_cav", self.f_cav)?;
        positive("Q", self.q)?;
        positive("tau_p", self.tau_p)?;
        non_negative("eta", self.eta)?;
        non_negative("f_p", self.f_p)?;
        Ok(())
    }

    /// Coupling strength Ω_f = η·f_cav (Hz).
    pub fn coupling(&self) -> f64 {
        self.eta * self.f_cav
    }

    /// Cavity linewidth κ = f_cav/Q (Hz, full width).
    pub fn linewidth(&self) -> f64 {
        self.f_cav / self.q
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }
}

impl Default for ResonatorParams {
    fn default() -> Self {
        Self::ch205()
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be > 0, got {v}")))
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be >= 0, got {v}")))
    }
}

/// Flat JSON parameter file in lab units. Missing keys take the CH205 defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamFile {
    pub n_s_per_cm2: f64,
    pub m_star_ratio: f64,
    #[serde(rename = "mu_cm2_per_Vs")]
    pub mu_cm2_per_vs: f64,
    pub tau_q_ps: f64,
    #[serde(rename = "T_el_K")]
    pub t_el_k: f64,
    #[serde(rename = "W_um")]
    pub w_um: f64,
    #[serde(rename = "L_um")]
    pub l_um: f64,
    #[serde(rename = "f_cav_GHz")]
    pub f_cav_ghz: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub eta: f64,
    pub tau_p_ps: f64,
    #[serde(rename = "f_p_GHz")]
    pub f_p_ghz: f64,
}

pub const PARAM_FILE_KEYS: [&str; 12] = [
    "n_s_per_cm2",
    "m_star_ratio",
    "mu_cm2_per_Vs",
    "tau_q_ps",
    "T_el_K",
    "W_um",
    "L_um",
    "f_cav_GHz",
    "Q",
    "eta",
    "tau_p_ps",
    "f_p_GHz",
];

impl Default for ParamFile {
    fn default() -> Self {
        Self::from_params(&MaterialParams::default(), &ResonatorParams::default())
    }
}

impl ParamFile {
    pub fn from_params(m: &MaterialParams, r: &ResonatorParams) -> Self {
        Self {
            n_s_per_cm2: constants::per_m2_to_per_cm2(m.n_s),
            m_star_ratio: m.m_star_ratio(),
            mu_cm2_per_vs: constants::m2_to_cm2(m.mu),
            tau_q_ps: m.tau_q * 1e12,
            t_el_k: m.t_el,
            w_um: m.width * 1e6,
            l_um: m.length * 1e6,
            f_cav_ghz: constants::hz_to_ghz(r.f_cav),
            q: r.q,
            eta: r.eta,
            tau_p_ps: r.tau_p * 1e12,
            f_p_ghz: constants::hz_to_ghz(r.f_p),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Config("top level must be a JSON object".into()))?;
        if let Some(key) = obj.keys().find(|k| !PARAM_FILE_KEYS.contains(&k.as_str())) {
            return Err(Error::UnknownConfigKey(key.clone()));
        }
        serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("flat struct of floats serializes")
    }

    /// Convert to validated SI records.
    pub fn into_params(self) -> Result<(MaterialParams, ResonatorParams)> {
        let m = MaterialParams {
            n_s: constants::per_cm2_to_per_m2(self.n_s_per_cm2),
            m_star: self.m_star_ratio * M_E,
            mu: constants::cm2_to_m2(self.mu_cm2_per_vs),
            tau_q: self.tau_q_ps * 1e-12,
            t_el: self.t_el_k,
            width: self.w_um * 1e-6,
            length: self.l_um * 1e-6,
        };
        let r = ResonatorParams {
            f_cav: constants::ghz_to_hz(self.f_cav_ghz),
            q: self.q,
            eta: self.eta,
            tau_p: self.tau_p_ps * 1e-12,
            f_p: constants::ghz_to_hz(self.f_p_ghz),
        };
        m.validate()?;
        r.validate()?;
        Ok((m, r))
    }
}
