//! Equal-position reflection Green tensor of a planar stack as a Sommerfeld
//! integral over the transverse wavenumber k_∥.
//!
//! ```text
//! G^R = (i/4π) ∫₀^∞ dk_∥ k_∥ e^{iβd}/(2β) G̃(k_∥)
//! G̃_xx = G̃_yy = −(β²/k²) C^p_− + C^s_+,   G̃_zz = 2 (k_∥²/k²) C^p_+
//! C^q_± = [r₋ e^{iβ(2z−d)} + r₊ e^{−iβ(2z−d)} ± 2 r₊r₋ e^{iβd}] / (1 − r₊r₋ e^{2iβd})
//! ```
//!
//! The path leaves the origin on a half-ellipse below the real axis, comes
//! back to the axis past every branch point, and follows the axis until the
//! evanescent tail has decayed. Guided-mode poles of passive stacks and the
//! branch cuts of the Im β ≥ 0 sheet lie above the axis, so the dip never
//! crosses a singularity.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fresnel::{total_reflection, Polarization, Side, TransverseState};
use crate::quadrature::{self, Tolerance};
use crate::stack::Stack;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Minimum distance of the dipole from either boundary of its layer.
pub const MIN_BOUNDARY_DISTANCE: f64 = 1e-6;

// e^{-TAIL_EXPONENT} bounds the integrand beyond the truncation point
const TAIL_EXPONENT: f64 = 46.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    /// Maximal depth of the contour below the real axis. Defaults to
    /// 0.05 max Re k_n.
    pub ellipse_height: Option<f64>,
    /// Point where the contour returns to the real axis. Defaults to
    /// 1.1 max |k_n|.
    pub k_cross: Option<f64>,
    /// Truncation of the real-axis tail. Defaults to the point where
    /// e^{−2 k min(z, d − z)} has fallen below e^{−46}.
    pub tail_cap: Option<f64>,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-8,
            ellipse_height: None,
            k_cross: None,
            tail_cap: None,
            max_subdivisions: 5000,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_height(mut self, h: f64) -> Self {
        self.ellipse_height = Some(h);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if let Some(h) = self.ellipse_height {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::InvalidParameter(format!("ellipse height must be > 0, got {h}")));
            }
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }
}

/// Propagating / evanescent parts of the reflection Green tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenSplit {
    pub g_xx_prop: Complex64,
    pub g_xx_evan: Complex64,
    pub g_zz_prop: Complex64,
    pub g_zz_evan: Complex64,
}

/// Nonvanishing components of the equal-position reflection Green tensor
/// (g_yy = g_xx), in units of ω₀/c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionGreen {
    pub g_xx: Complex64,
    pub g_zz: Complex64,
    pub err_xx: f64,
    pub err_zz: f64,
    pub split: Option<GreenSplit>,
    pub evaluations: usize,
}

impl ReflectionGreen {
    pub fn g_yy(&self) -> Complex64 {
        self.g_xx
    }
}

/// Spectral integrand (g̃_xx, g̃_zz) at the node described by `state`, with
/// the (i/4π) k_∥ e^{iβd}/(2β) prefactor included.
pub fn integrand(state: &TransverseState, stack: &Stack, j: usize, z: f64) -> Result<(Complex64, Complex64)> {
    let beta = state.beta[j];
    let k_par = state.k_par;
    if beta.norm_sqr() == 0.0 {
        return Err(Error::Degenerate {
            context: "branch point of the host layer",
            k_par: k_par.to_string(),
        });
    }
    let d = stack.thickness(j);
    let k_sq = state.k_sq(j);
    let to_lower = (2.0 * I * beta * z).exp();
    let to_upper = (2.0 * I * beta * (d - z)).exp();
    let round_trip = state.round_trip[j];

    // e^{iβd} C^q_+ and e^{iβd} C^q_−
    let coefficients = |pol: Polarization| -> Result<(Complex64, Complex64)> {
        let r_up = total_reflection(stack, j, Side::Above, state, pol)?;
        let r_down = total_reflection(stack, j, Side::Below, state, pol)?;
        let single = r_down * to_lower + r_up * to_upper;
        let double = 2.0 * r_up * r_down * round_trip;
        let denom = 1.0 - r_up * r_down * round_trip;
        if denom.norm_sqr() == 0.0 {
            return Err(Error::Degenerate {
                context: "multiple-reflection denominator",
                k_par: k_par.to_string(),
            });
        }
        Ok(((single + double) / denom, (single - double) / denom))
    };
    let (s_plus, _) = coefficients(Polarization::S)?;
    let (p_plus, p_minus) = coefficients(Polarization::P)?;

    let g_xx = -(beta * beta / k_sq) * p_minus + s_plus;
    let g_zz = 2.0 * (k_par * k_par / k_sq) * p_plus;
    let prefactor = I / (4.0 * PI) * k_par / (2.0 * beta);
    Ok((prefactor * g_xx, prefactor * g_zz))
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    /// Lower half-ellipse from `start` to `end` on the real axis.
    Ellipse {
        start: f64,
        end: f64,
        height: f64,
        // cluster nodes at both ends to absorb a 1/√ branch singularity
        smooth_ends: bool,
    },
    Line {
        start: f64,
        end: f64,
    },
}

impl Piece {
    /// Point on the piece and its derivative for u ∈ [0, 1].
    fn point(&self, u: f64) -> (Complex64, Complex64) {
        match *self {
            Piece::Ellipse {
                start,
                end,
                height,
                smooth_ends,
            } => {
                let (s, ds) = if smooth_ends {
                    (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u))
                } else {
                    (u, 1.0)
                };
                let theta = PI * s;
                let center = 0.5 * (start + end);
                let semi = 0.5 * (end - start);
                let (sin, cos) = theta.sin_cos();
                let k = Complex64::new(center - semi * cos, -height * sin);
                let dk = Complex64::new(semi * sin, -height * cos) * (PI * ds);
                (k, dk)
            }
            Piece::Line { start, end } => (
                Complex64::new(start + (end - start) * u, 0.0),
                Complex64::new(end - start, 0.0),
            ),
        }
    }
}

/// Geometry of the integration path at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourGeometry {
    pub height: f64,
    pub k_cross: f64,
    pub k_max: f64,
    /// Wavenumber in the host layer.
    pub k_host: Complex64,
}

impl ContourGeometry {
    pub fn new(stack: &Stack, eps: &[Complex64], j: usize, z: f64, omega: f64, cfg: &QuadratureConfig) -> Result<Self> {
        let d = stack.thickness(j);
        let decay_length = z.min(d - z);
        if decay_length < MIN_BOUNDARY_DISTANCE {
            return Err(Error::TooCloseToBoundary { distance: decay_length });
        }
        let ks: Vec<Complex64> = eps
            .iter()
            .map(|e| crate::materials::refractive_index(*e) * omega)
            .collect();
        let max_re = ks.iter().map(|k| k.re).fold(0.0, f64::max);
        let max_abs = ks.iter().map(|k| k.norm()).fold(0.0, f64::max);
        let k_cross = cfg.k_cross.unwrap_or(1.1 * max_abs);
        if !(k_cross > max_re) {
            return Err(Error::InvalidParameter(format!(
                "k_cross = {k_cross} must exceed every Re k_n (max {max_re})"
            )));
        }
        let height = cfg.ellipse_height.unwrap_or(0.05 * max_re);
        let k_host = ks[j];
        let k_max = cfg.tail_cap.unwrap_or_else(|| {
            let reach = TAIL_EXPONENT / (2.0 * decay_length);
            (k_host.re * k_host.re + reach * reach).sqrt().max(k_cross + reach)
        });
        if !(k_max > k_cross) {
            return Err(Error::InvalidParameter(format!(
                "tail cap {k_max} must exceed k_cross = {k_cross}"
            )));
        }
        Ok(ContourGeometry {
            height,
            k_cross,
            k_max,
            k_host,
        })
    }

    fn total_path(&self) -> Vec<Piece> {
        vec![
            Piece::Ellipse {
                start: 0.0,
                end: self.k_cross,
                height: self.height,
                smooth_ends: false,
            },
            Piece::Line {
                start: self.k_cross,
                end: self.k_max,
            },
        ]
    }

    fn propagating_path(&self) -> Vec<Piece> {
        let kj = self.k_host.re;
        vec![Piece::Ellipse {
            start: 0.0,
            end: kj,
            height: self.height.min(0.5 * kj),
            smooth_ends: true,
        }]
    }

    fn evanescent_path(&self) -> Vec<Piece> {
        let kj = self.k_host.re;
        vec![
            Piece::Ellipse {
                start: kj,
                end: self.k_cross,
                height: self.height.min(0.5 * (self.k_cross - kj)),
                smooth_ends: true,
            },
            Piece::Line {
                start: self.k_cross,
                end: self.k_max,
            },
        ]
    }
}

struct PathIntegral {
    value: [Complex64; 2],
    error: [f64; 2],
    evaluations: usize,
}

fn integrate_path(
    stack: &Stack,
    eps: &[Complex64],
    j: usize,
    z: f64,
    omega: f64,
    pieces: &[Piece],
    tol: Tolerance,
) -> Result<PathIntegral> {
    // every piece is mapped onto [i, i + 1]; lines get a few starting panels
    let mut intervals = Vec::new();
    for (i, piece) in pieces.iter().enumerate() {
        let splits = match piece {
            Piece::Ellipse { .. } => 4,
            Piece::Line { .. } => 8,
        };
        for s in 0..splits {
            let a = i as f64 + s as f64 / splits as f64;
            let b = i as f64 + (s + 1) as f64 / splits as f64;
            intervals.push((a, b));
        }
    }
    let f = |t: f64| -> Result<[Complex64; 2]> {
        let index = (t.floor() as usize).min(pieces.len() - 1);
        let (k_par, dk) = pieces[index].point(t - index as f64);
        let state = TransverseState::new(stack, eps, omega, k_par);
        let (gxx, gzz) = integrand(&state, stack, j, z)?;
        Ok([gxx * dk, gzz * dk])
    };
    let r = quadrature::integrate(f, &intervals, tol)?;
    Ok(PathIntegral {
        value: r.value,
        error: r.error,
        evaluations: r.evaluations,
    })
}

/// Reflection Green tensor at height `z` inside layer `j` at frequency
/// `omega`. With `want_split` and a lossless host layer the propagating
/// (k_∥ < k_j) and evanescent parts are integrated separately as well.
pub fn integrate_green(
    stack: &Stack,
    j: usize,
    z: f64,
    omega: f64,
    cfg: &QuadratureConfig,
    want_split: bool,
) -> Result<ReflectionGreen> {
    cfg.validate()?;
    stack.check_layer_index(j)?;
    if !(omega > 0.0) {
        return Err(Error::NonPositiveFrequency(omega));
    }
    let d = stack.thickness(j);
    if !(z > 0.0 && z < d) {
        return Err(Error::InvalidParameter(format!("dipole height {z} outside (0, {d})")));
    }
    let eps = stack.permittivities(omega)?;
    let geometry = ContourGeometry::new(stack, &eps, j, z, omega, cfg)?;
    let tol = Tolerance {
        rel: cfg.rel_tol,
        // free-space Im G sets the natural scale
        abs: cfg.rel_tol * geometry.k_host.norm() / (6.0 * PI),
        max_subdivisions: cfg.max_subdivisions,
    };

    let total = integrate_path(stack, &eps, j, z, omega, &geometry.total_path(), tol)?;
    let mut evaluations = total.evaluations;

    let split = if want_split && eps[j].im == 0.0 && eps[j].re > 0.0 {
        let prop = integrate_path(stack, &eps, j, z, omega, &geometry.propagating_path(), tol)?;
        let evan = integrate_path(stack, &eps, j, z, omega, &geometry.evanescent_path(), tol)?;
        evaluations += prop.evaluations + evan.evaluations;
        Some(GreenSplit {
            g_xx_prop: prop.value[0],
            g_xx_evan: evan.value[0],
            g_zz_prop: prop.value[1],
            g_zz_evan: evan.value[1],
        })
    } else {
        None
    };

    Ok(ReflectionGreen {
        g_xx: total.value[0],
        g_zz: total.value[1],
        err_xx: total.error[0],
        err_zz: total.error[1],
        split,
        evaluations,
    })
}
