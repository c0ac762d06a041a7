//! Interface Fresnel coefficients and the layer recurrence giving the total
//! reflection seen from inside the dipole layer.
//!
//! Sign conventions: r^s = (β₁ − β₂)/(β₁ + β₂) and
//! r^p = (ε₂β₁ − ε₁β₂)/(ε₂β₁ + ε₁β₂), so a perfect mirror has r^s = −1 and
//! r^p = +1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::stack::Stack;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    /// TE
    S,
    /// TM
    P,
}

/// Side of the dipole layer whose stack is being looked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Towards the upper half-space (r₊).
    Above,
    /// Towards the lower half-space (r₋).
    Below,
}

/// Normal wavenumber β = √(k² − k_∥²) on the branch Im β ≥ 0, and Re β ≥ 0
/// on the branch cut itself.
pub fn normal_wavenumber(k_sq: Complex64, k_par: Complex64) -> Complex64 {
    let beta = (k_sq - k_par * k_par).sqrt();
    if beta.im < 0.0 || (beta.im == 0.0 && beta.re < 0.0) {
        -beta
    } else {
        beta
    }
}

/// Per-medium quantities at one frequency and one transverse wavenumber.
#[derive(Debug, Clone)]
pub struct TransverseState {
    pub omega: f64,
    pub k_par: Complex64,
    /// ε of every medium, half-spaces included.
    pub eps: Vec<Complex64>,
    /// β of every medium.
    pub beta: Vec<Complex64>,
    /// e^{2iβd} of every finite layer; 0 for the half-spaces.
    pub round_trip: Vec<Complex64>,
}

impl TransverseState {
    /// Builds the state from permittivities already evaluated at `omega`.
    pub fn new(stack: &Stack, eps: &[Complex64], omega: f64, k_par: Complex64) -> Self {
        let n = stack.media_count();
        debug_assert_eq!(eps.len(), n);
        let k0_sq = omega * omega;
        let beta: Vec<Complex64> = eps.iter().map(|&e| normal_wavenumber(e * k0_sq, k_par)).collect();
        let round_trip = (0..n)
            .map(|i| {
                if i == 0 || i == n - 1 {
                    Complex64::new(0.0, 0.0)
                } else {
                    (2.0 * I * beta[i] * stack.thickness(i)).exp()
                }
            })
            .collect();
        TransverseState {
            omega,
            k_par,
            eps: eps.to_vec(),
            beta,
            round_trip,
        }
    }

    pub fn from_stack(stack: &Stack, omega: f64, k_par: Complex64) -> Result<Self> {
        let eps = stack.permittivities(omega)?;
        Ok(Self::new(stack, &eps, omega, k_par))
    }

    /// k_n² = ε_n ω² of medium `n`.
    pub fn k_sq(&self, n: usize) -> Complex64 {
        self.eps[n] * (self.omega * self.omega)
    }
}

/// Reflection coefficient of the single interface between media `from` and
/// `to`, for a wave travelling in `from`.
pub fn fresnel_interface(state: &TransverseState, from: usize, to: usize, pol: Polarization) -> Result<Complex64> {
    let (bf, bt) = (state.beta[from], state.beta[to]);
    let (num, den) = match pol {
        Polarization::S => (bf - bt, bf + bt),
        Polarization::P => {
            let (ef, et) = (state.eps[from], state.eps[to]);
            (et * bf - ef * bt, et * bf + ef * bt)
        }
    };
    if num == Complex64::new(0.0, 0.0) {
        return Ok(num);
    }
    ratio(num, den, "fresnel interface", state.k_par)
}

fn ratio(num: Complex64, den: Complex64, context: &'static str, k_par: Complex64) -> Result<Complex64> {
    let r = num / den;
    if den.norm_sqr() == 0.0 || !r.re.is_finite() || !r.im.is_finite() {
        return Err(Error::Degenerate {
            context,
            k_par: k_par.to_string(),
        });
    }
    Ok(r)
}

/// Total reflection coefficient r^q_± of the stack on `side` of layer `j`,
/// referred to the corresponding boundary of layer `j`.
pub fn total_reflection(
    stack: &Stack,
    j: usize,
    side: Side,
    state: &TransverseState,
    pol: Polarization,
) -> Result<Complex64> {
    stack.check_layer_index(j)?;
    let last = stack.media_count() - 1;
    match side {
        Side::Above => {
            let mut r = fresnel_interface(state, last - 1, last, pol)?;
            for n in (j..last - 1).rev() {
                let r_int = fresnel_interface(state, n, n + 1, pol)?;
                let rt = r * state.round_trip[n + 1];
                r = ratio(r_int + rt, 1.0 + r_int * rt, "stack recurrence", state.k_par)?;
            }
            Ok(r)
        }
        Side::Below => {
            let mut r = fresnel_interface(state, 1, 0, pol)?;
            for n in 2..=j {
                let r_int = fresnel_interface(state, n, n - 1, pol)?;
                let rt = r * state.round_trip[n - 1];
                r = ratio(r_int + rt, 1.0 + r_int * rt, "stack recurrence", state.k_par)?;
            }
            Ok(r)
        }
    }
}
