//! Normalized decay rates: bulk part with the real-cavity local-field
//! correction plus the reflected part from the Sommerfeld integral.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::materials::refractive_index;
use crate::sommerfeld::{integrate_green, QuadratureConfig, ReflectionGreen};
use crate::stack::{DipoleSpec, Orientation, Stack};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    /// Γ/Γ₀.
    pub gamma_total: f64,
    pub gamma_bulk: f64,
    /// Reflected part; negative values mean destructive interference.
    pub gamma_refl: f64,
    /// Propagating part of `gamma_refl` (k_∥ < k_j).
    pub gamma_prop: Option<f64>,
    /// Evanescent part of `gamma_refl` (k_∥ > k_j).
    pub gamma_evan: Option<f64>,
    pub orientation: Orientation,
    pub omega_a: f64,
    /// Quadrature error estimate of `gamma_total`.
    pub error_estimate: f64,
}

/// Rates of the three orientations from one Green tensor evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientationRates {
    pub x: RateResult,
    pub z: RateResult,
    pub avg: RateResult,
}

impl OrientationRates {
    pub fn get(&self, orientation: Orientation) -> &RateResult {
        match orientation {
            Orientation::X => &self.x,
            Orientation::Z => &self.z,
            Orientation::Average => &self.avg,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchReport {
    pub gamma_off: f64,
    pub gamma_on: f64,
    pub contrast: f64,
    pub omega_a: f64,
    /// Distinct permittivities of the off stack at `omega_a`, bottom up.
    pub eps_off: Vec<Complex64>,
    pub eps_on: Vec<Complex64>,
}

/// Local-field factor |3ε/(2ε + 1)|² of the real-cavity model.
pub fn local_field_factor(eps: Complex64) -> Result<f64> {
    let denom = 2.0 * eps + 1.0;
    if denom.norm_sqr() == 0.0 {
        return Err(Error::InvalidParameter(format!("2 eps + 1 vanishes for eps = {eps}")));
    }
    Ok((3.0 * eps / denom).norm_sqr())
}

/// Bulk decay rate Γ_bulk/Γ₀ of a dipole in a small vacuum cavity of
/// radius `cavity_radius` inside a medium of permittivity `eps`.
///
/// The O(ω R/c) remainder is dropped.
pub fn bulk_rate(eps: Complex64, omega_a: f64, cavity_radius: f64) -> Result<f64> {
    if eps.im < 0.0 {
        return Err(Error::InvalidParameter(format!("active medium eps = {eps}")));
    }
    if !(cavity_radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cavity radius must be positive, got {cavity_radius}"
        )));
    }
    if !(omega_a > 0.0) {
        return Err(Error::NonPositiveFrequency(omega_a));
    }
    let field = local_field_factor(eps)?;
    let n = refractive_index(eps);
    let (e1, e2) = (eps.re, eps.im);
    let abs_sq = eps.norm_sqr();
    let denom_sq = (2.0 * eps + 1.0).norm_sqr();
    let x = 1.0 / (omega_a * cavity_radius);
    let absorptive = if e2 == 0.0 {
        0.0
    } else {
        e2 / abs_sq
            * (x.powi(3) + (28.0 * abs_sq + 16.0 * e1 + 1.0) / (5.0 * denom_sq) * x
                - 2.0 / denom_sq * (2.0 * n.im * abs_sq + n.im * e1 + n.re * e2))
    };
    Ok(field * (n.re + absorptive))
}

fn refl_rate(field: f64, omega: f64, g: Complex64) -> f64 {
    field * 6.0 * PI / omega * g.im
}

/// Γ_x, Γ_z and the isotropic average for one dipole position.
pub fn orientation_rates(
    stack: &Stack,
    dipole: &DipoleSpec,
    cfg: &QuadratureConfig,
    want_split: bool,
) -> Result<OrientationRates> {
    dipole.validate(stack)?;
    let omega = dipole.omega_a;
    let eps_j = stack.material(dipole.layer).eval(omega)?;
    let gamma_bulk = bulk_rate(eps_j, omega, dipole.cavity_radius)?;
    let field = local_field_factor(eps_j)?;
    let green: ReflectionGreen = integrate_green(stack, dipole.layer, dipole.z, omega, cfg, want_split)?;
    let to_rate = |g: Complex64| refl_rate(field, omega, g);

    let make = |orientation, g: Complex64, err: f64, prop: Option<Complex64>, evan: Option<Complex64>| {
        let gamma_refl = to_rate(g);
        RateResult {
            gamma_total: gamma_bulk + gamma_refl,
            gamma_bulk,
            gamma_refl,
            gamma_prop: prop.map(to_rate),
            gamma_evan: evan.map(to_rate),
            orientation,
            omega_a: omega,
            error_estimate: field * 6.0 * PI / omega * err,
        }
    };
    let split = green.split;
    let x = make(
        Orientation::X,
        green.g_xx,
        green.err_xx,
        split.map(|s| s.g_xx_prop),
        split.map(|s| s.g_xx_evan),
    );
    let z = make(
        Orientation::Z,
        green.g_zz,
        green.err_zz,
        split.map(|s| s.g_zz_prop),
        split.map(|s| s.g_zz_evan),
    );
    let mean = |a: f64, b: f64| (2.0 * a + b) / 3.0;
    let avg = RateResult {
        gamma_total: mean(x.gamma_total, z.gamma_total),
        gamma_bulk,
        gamma_refl: mean(x.gamma_refl, z.gamma_refl),
        gamma_prop: x.gamma_prop.zip(z.gamma_prop).map(|(a, b)| mean(a, b)),
        gamma_evan: x.gamma_evan.zip(z.gamma_evan).map(|(a, b)| mean(a, b)),
        orientation: Orientation::Average,
        omega_a: omega,
        error_estimate: mean(x.error_estimate, z.error_estimate),
    };
    Ok(OrientationRates { x, z, avg })
}

/// Decay rate of `dipole` for its own orientation.
pub fn decay_rate(stack: &Stack, dipole: &DipoleSpec, cfg: &QuadratureConfig, want_split: bool) -> Result<RateResult> {
    Ok(*orientation_rates(stack, dipole, cfg, want_split)?.get(dipole.orientation))
}

fn distinct_permittivities(stack: &Stack, omega: f64) -> Result<Vec<Complex64>> {
    let mut out: Vec<Complex64> = Vec::new();
    for eps in stack.permittivities(omega)? {
        if !out.contains(&eps) {
            out.push(eps);
        }
    }
    Ok(out)
}

/// Compares the rate of one dipole in two stacks with the same geometry
/// but different materials.
pub fn switch_contrast(
    stack_off: &Stack,
    stack_on: &Stack,
    dipole: &DipoleSpec,
    cfg: &QuadratureConfig,
) -> Result<SwitchReport> {
    if !stack_off.same_geometry(stack_on) {
        return Err(Error::GeometryMismatch(format!(
            "{} vs {} layers or differing thicknesses",
            stack_off.layer_count(),
            stack_on.layer_count()
        )));
    }
    let gamma_off = decay_rate(stack_off, dipole, cfg, false)?.gamma_total;
    let gamma_on = decay_rate(stack_on, dipole, cfg, false)?.gamma_total;
    if !(gamma_off > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "off-state rate {gamma_off} is not positive; contrast undefined"
        )));
    }
    Ok(SwitchReport {
        gamma_off,
        gamma_on,
        contrast: gamma_on / gamma_off,
        omega_a: dipole.omega_a,
        eps_off: distinct_permittivities(stack_off, dipole.omega_a)?,
        eps_on: distinct_permittivities(stack_on, dipole.omega_a)?,
    })
}

/// Frequency search window with the size of the coarse grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchWindow {
    pub lo: f64,
    pub hi: f64,
    pub grid: usize,
}

impl SearchWindow {
    pub fn new(lo: f64, hi: f64, grid: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidParameter(format!("bad window [{lo}, {hi}]")));
        }
        if grid < 3 {
            return Err(Error::InvalidParameter(format!("grid needs >= 3 points, got {grid}")));
        }
        Ok(SearchWindow { lo, hi, grid })
    }

    fn nodes(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.grid - 1) as f64;
        (0..self.grid).map(|i| self.lo + step * i as f64).collect()
    }
}

const GOLDEN_TOL: f64 = 1e-6;

/// Maximizes `f` over the window: coarse grid, then golden-section search
/// around the best interior node to 1e-6 relative.
fn maximize<F>(window: &SearchWindow, mut f: F) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let nodes = window.nodes();
    let values: Vec<f64> = nodes.iter().map(|&w| f(w)).collect::<Result<_>>()?;
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    if best == 0 || best == nodes.len() - 1 {
        return Err(Error::NoResonance {
            lo: window.lo,
            hi: window.hi,
        });
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (nodes[best - 1], nodes[best + 1]);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a) > GOLDEN_TOL * 0.5 * (a + b) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let (mut arg, mut val) = if fc > fd { (c, fc) } else { (d, fd) };
    if values[best] > val {
        arg = nodes[best];
        val = values[best];
    }
    Ok((arg, val))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub omega: f64,
    pub gamma_peak: f64,
}

/// Frequency of maximal Γ_x within `window`.
pub fn find_defect_resonance(
    stack: &Stack,
    dipole: &DipoleSpec,
    cfg: &QuadratureConfig,
    window: &SearchWindow,
) -> Result<Resonance> {
    let probe = dipole.with_orientation(Orientation::X);
    let (omega, gamma_peak) = maximize(window, |w| {
        Ok(decay_rate(stack, &probe.with_omega(w), cfg, false)?.gamma_total)
    })?;
    Ok(Resonance { omega, gamma_peak })
}

/// Transition frequency within `window` that maximizes Γ_on/Γ_off for the
/// dipole's orientation, with the report at that frequency.
pub fn maximize_contrast(
    stack_off: &Stack,
    stack_on: &Stack,
    dipole: &DipoleSpec,
    cfg: &QuadratureConfig,
    window: &SearchWindow,
) -> Result<SwitchReport> {
    let (omega, _) = maximize(window, |w| {
        Ok(switch_contrast(stack_off, stack_on, &dipole.with_omega(w), cfg)?.contrast)
    })?;
    switch_contrast(stack_off, stack_on, &dipole.with_omega(omega), cfg)
}
