//! Physical-unit bookkeeping: fiber parameters, soliton normalization
//! scales, distributed-amplification noise intensity, and the launch-power
//! mapping. Everything downstream of this module works in normalized
//! (dimensionless) soliton units; this is the single place where watts,
//! kilometers and picoseconds are converted.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Planck constant, J s.
const PLANCK_J_S: f64 = 6.62607015e-34;

#[derive(Debug, Clone, Error)]
pub enum FiberError {
    #[error("invalid fiber parameter: {0}")]
    InvalidParameter(String),
    #[error("config parse error on line {line}: {reason}")]
    ConfigParse { line: usize, reason: String },
}

/// Physical transmission-system description. Defaults reproduce the standard
/// single-polarisation simulation setup (500 km of fiber with ideal
/// distributed Raman amplification at 1 mW power normalization).
#[derive(Debug, Clone, PartialEq)]
pub struct FiberSystem {
    /// Group-velocity dispersion β₂, ps²/km; anomalous (negative) for the
    /// focusing, bright-soliton case.
    pub beta2_ps2_per_km: f64,
    /// Kerr nonlinearity coefficient γ, 1/(W km).
    pub gamma_per_w_km: f64,
    /// Fiber attenuation, dB/km (compensated by the distributed gain, but it
    /// sets the spontaneous-emission noise floor).
    pub alpha_db_per_km: f64,
    /// Temperature-dependent phonon occupancy factor K_T.
    pub k_t: f64,
    /// Carrier frequency ν₀, THz.
    pub nu0_thz: f64,
    /// Power normalization P₀, mW.
    pub p0_mw: f64,
    /// Propagation distance, km.
    pub distance_km: f64,
    /// Use the polarisation-averaged nonlinearity γ* = 8γ/9.
    pub dual_pol: bool,
}

impl Default for FiberSystem {
    fn default() -> Self {
        FiberSystem {
            beta2_ps2_per_km: -21.67,
            gamma_per_w_km: 2.0,
            alpha_db_per_km: 0.20,
            k_t: 1.13,
            nu0_thz: 193.41,
            p0_mw: 1.0,
            distance_km: 500.0,
            dual_pol: false,
        }
    }
}

/// Normalization scales and noise figures derived from a [`FiberSystem`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    /// Distance scale ℓ₀ = (γ_eff P₀)⁻¹, km.
    pub l0_km: f64,
    /// Time scale τ₀ = sqrt(ℓ₀ |β₂|), ps.
    pub tau0_ps: f64,
    /// Dimensionless noise intensity D = σ₀² ℓ₀ / (P₀ τ₀).
    pub d_noise: f64,
    /// Normalized propagation distance Z = distance/ℓ₀.
    pub z_norm: f64,
    /// Accumulated amplitude-noise variance σ_N² = D Z / 2.
    pub sigma_n_sq: f64,
}

impl FiberSystem {
    fn effective_gamma(&self) -> f64 {
        if self.dual_pol {
            self.gamma_per_w_km * 8.0 / 9.0
        } else {
            self.gamma_per_w_km
        }
    }

    /// Derive the soliton normalization scales and noise intensity.
    pub fn derive_scales(&self) -> Result<DerivedScales, FiberError> {
        if !(self.beta2_ps2_per_km < 0.0) {
            return Err(FiberError::InvalidParameter(format!(
                "beta2 must be negative (anomalous dispersion), got {}",
                self.beta2_ps2_per_km
            )));
        }
        for (name, v) in [
            ("gamma", self.gamma_per_w_km),
            ("alpha", self.alpha_db_per_km),
            ("k_t", self.k_t),
            ("nu0", self.nu0_thz),
            ("p0", self.p0_mw),
            ("distance", self.distance_km),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(FiberError::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        let p0_w = self.p0_mw * 1e-3;
        let l0_km = 1.0 / (self.effective_gamma() * p0_w);
        let tau0_ps = (l0_km * self.beta2_ps2_per_km.abs()).sqrt();
        // Spontaneous-emission spectral density σ₀² = α_lin K_T hν₀, W/(km Hz).
        let alpha_lin_per_km = self.alpha_db_per_km * std::f64::consts::LN_10 / 10.0;
        let sigma0_sq = alpha_lin_per_km * self.k_t * PLANCK_J_S * self.nu0_thz * 1e12;
        let d_noise = sigma0_sq * l0_km / (p0_w * tau0_ps * 1e-12);
        let z_norm = self.distance_km / l0_km;
        Ok(DerivedScales {
            l0_km,
            tau0_ps,
            d_noise,
            z_norm,
            sigma_n_sq: d_noise * z_norm / 2.0,
        })
    }

    /// Normalized symbol period for a physical baud rate.
    pub fn symbol_period_norm(&self, baud_rate_gbd: f64) -> Result<f64, FiberError> {
        if !(baud_rate_gbd > 0.0) {
            return Err(FiberError::InvalidParameter(
                "baud rate must be positive".into(),
            ));
        }
        let scales = self.derive_scales()?;
        let ts_ps = 1e3 / baud_rate_gbd; // 1/GBd in ps
        Ok(ts_ps / scales.tau0_ps)
    }

    /// σ_S² = E[A] that realizes a given launch power: the sech soliton has
    /// normalized energy 2A per slot, so the average power is
    /// P₀ · 2 E[A] / T_s with T_s the normalized symbol period.
    pub fn power_to_sigma_s_sq(
        &self,
        launch_power_dbm: f64,
        symbol_period_norm: f64,
    ) -> Result<f64, FiberError> {
        if !(symbol_period_norm > 0.0) || !launch_power_dbm.is_finite() {
            return Err(FiberError::InvalidParameter(
                "need finite power and positive symbol period".into(),
            ));
        }
        let p_avg_mw = 10f64.powf(launch_power_dbm / 10.0);
        Ok(p_avg_mw / self.p0_mw * symbol_period_norm / 2.0)
    }

    /// Launch power (dBm) produced by a mean soliton amplitude σ_S².
    pub fn sigma_s_sq_to_power_dbm(
        &self,
        sigma_s_sq: f64,
        symbol_period_norm: f64,
    ) -> Result<f64, FiberError> {
        if !(sigma_s_sq > 0.0 && symbol_period_norm > 0.0) {
            return Err(FiberError::InvalidParameter(
                "need positive sigma_s_sq and symbol period".into(),
            ));
        }
        let p_avg_mw = self.p0_mw * 2.0 * sigma_s_sq / symbol_period_norm;
        Ok(10.0 * p_avg_mw.log10())
    }

    /// Parse the flat key=value config format. Unknown keys are rejected;
    /// missing keys keep their defaults. Lines starting with `#` are comments.
    pub fn from_config_str(text: &str) -> Result<Self, FiberError> {
        let mut sys = FiberSystem::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(FiberError::ConfigParse {
                line: idx + 1,
                reason: "expected key=value".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = |v: &str| {
                v.parse::<f64>().map_err(|e| FiberError::ConfigParse {
                    line: idx + 1,
                    reason: format!("bad number `{v}`: {e}"),
                })
            };
            match key {
                "beta2_ps2_per_km" => sys.beta2_ps2_per_km = parse_f64(value)?,
                "gamma_per_w_km" => sys.gamma_per_w_km = parse_f64(value)?,
                "alpha_db_per_km" => sys.alpha_db_per_km = parse_f64(value)?,
                "k_t" => sys.k_t = parse_f64(value)?,
                "nu0_thz" => sys.nu0_thz = parse_f64(value)?,
                "p0_mw" => sys.p0_mw = parse_f64(value)?,
                "distance_km" => sys.distance_km = parse_f64(value)?,
                "dual_pol" => {
                    sys.dual_pol = value.parse::<bool>().map_err(|_| FiberError::ConfigParse {
                        line: idx + 1,
                        reason: format!("bad bool `{value}`"),
                    })?
                }
                other => {
                    return Err(FiberError::ConfigParse {
                        line: idx + 1,
                        reason: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        Ok(sys)
    }

    /// Serialize to the same key=value format.
    pub fn to_config_string(&self) -> String {
        let mut fields = BTreeMap::new();
        fields.insert("beta2_ps2_per_km", self.beta2_ps2_per_km.to_string());
        fields.insert("gamma_per_w_km", self.gamma_per_w_km.to_string());
        fields.insert("alpha_db_per_km", self.alpha_db_per_km.to_string());
        fields.insert("k_t", self.k_t.to_string());
        fields.insert("nu0_thz", self.nu0_thz.to_string());
        fields.insert("p0_mw", self.p0_mw.to_string());
        fields.insert("distance_km", self.distance_km.to_string());
        fields.insert("dual_pol", self.dual_pol.to_string());
        let mut out = String::new();
        for (k, v) in fields {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }
}
