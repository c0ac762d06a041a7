//! Frequency-dependent permittivities.
//!
//! Frequencies are measured in units of the reference frequency ω₀, so the
//! single-oscillator Drude-Lorentz law reads
//!
//! ```text
//! ε(ω) = 1 + ω_P² / (ω_T² − ω² − iωγ)
//! ```
//!
//! with all three parameters in the same units.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dispersion law of a (non-magnetic, isotropic) material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PermittivityModel {
    /// Single Lorentz oscillator: coupling `omega_p`, resonance `omega_t`,
    /// linewidth `gamma`.
    DrudeLorentz { omega_p: f64, omega_t: f64, gamma: f64 },
    /// Frequency-independent permittivity.
    Constant(Complex64),
}

impl PermittivityModel {
    pub const VACUUM: PermittivityModel = PermittivityModel::Constant(Complex64::new(1.0, 0.0));

    pub fn drude_lorentz(omega_p: f64, omega_t: f64, gamma: f64) -> Result<Self> {
        let model = PermittivityModel::DrudeLorentz {
            omega_p,
            omega_t,
            gamma,
        };
        model.validate()?;
        Ok(model)
    }

    /// Drude-Lorentz model with the coupling given relative to the
    /// oscillator frequency, `omega_p = omega_p_rel * omega_t`.
    pub fn drude_lorentz_relative(omega_p_rel: f64, omega_t: f64, gamma: f64) -> Result<Self> {
        Self::drude_lorentz(omega_p_rel * omega_t, omega_t, gamma)
    }

    pub fn constant(eps: Complex64) -> Result<Self> {
        let model = PermittivityModel::Constant(eps);
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PermittivityModel::DrudeLorentz {
                omega_p,
                omega_t,
                gamma,
            } => {
                if !(omega_p.is_finite() && omega_p >= 0.0) {
                    return Err(Error::InvalidParameter(format!("omega_p must be >= 0, got {omega_p}")));
                }
                if !(omega_t.is_finite() && omega_t > 0.0) {
                    return Err(Error::InvalidParameter(format!("omega_t must be > 0, got {omega_t}")));
                }
                if !(gamma.is_finite() && gamma >= 0.0) {
                    return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {gamma}")));
                }
            }
            PermittivityModel::Constant(eps) => {
                if !(eps.re.is_finite() && eps.im.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "permittivity must be finite, got {eps}"
                    )));
                }
                if eps.im < 0.0 {
                    return Err(Error::InvalidParameter(format!("active medium (Im eps < 0): {eps}")));
                }
            }
        }
        Ok(())
    }

    /// Evaluates ε(ω). Frequencies within γ/2 of the oscillator resonance
    /// are accepted but logged.
    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::NonPositiveFrequency(omega));
        }
        Ok(match *self {
            PermittivityModel::DrudeLorentz {
                omega_p,
                omega_t,
                gamma,
            } => {
                if (omega - omega_t).abs() <= 0.5 * gamma {
                    log::warn!("omega = {omega} lies within the linewidth of the oscillator at {omega_t}");
                }
                let denom = Complex64::new(omega_t * omega_t - omega * omega, -omega * gamma);
                1.0 + omega_p * omega_p / denom
            }
            PermittivityModel::Constant(eps) => eps,
        })
    }

    pub fn is_vacuum(&self) -> bool {
        *self == Self::VACUUM
    }
}

/// Refractive index n = √ε on the passive branch: Re n ≥ 0, and Im n ≥ 0
/// when Re n = 0.
pub fn refractive_index(eps: Complex64) -> Complex64 {
    let n = eps.sqrt();
    if n.re < 0.0 || (n.re == 0.0 && n.im < 0.0) {
        -n
    } else {
        n
    }
}
