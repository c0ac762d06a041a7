//! Planar multilayer geometry and the quarter-wave Bragg constructions.
//!
//! Layers are indexed from 1 (bottom) to N (top); index 0 is the lower
//! half-space and N + 1 the upper one. Thicknesses are in units of c/ω₀.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::materials::{refractive_index, PermittivityModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    pub thickness: f64,
    pub material: PermittivityModel,
}

impl Layer {
    pub fn new(thickness: f64, material: PermittivityModel) -> Result<Self> {
        if !(thickness.is_finite() && thickness > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "layer thickness must be positive and finite, got {thickness}"
            )));
        }
        material.validate()?;
        Ok(Layer { thickness, material })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stack {
    pub lower: PermittivityModel,
    pub layers: Vec<Layer>,
    pub upper: PermittivityModel,
}

impl Stack {
    pub fn new(lower: PermittivityModel, layers: Vec<Layer>, upper: PermittivityModel) -> Result<Self> {
        lower.validate()?;
        upper.validate()?;
        for layer in &layers {
            Layer::new(layer.thickness, layer.material)?;
        }
        Ok(Stack { lower, layers, upper })
    }

    /// Single vacuum layer of the given thickness inside vacuum.
    pub fn uniform_vacuum(thickness: f64) -> Result<Self> {
        Stack::new(
            PermittivityModel::VACUUM,
            vec![Layer::new(thickness, PermittivityModel::VACUUM)?],
            PermittivityModel::VACUUM,
        )
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// Number of media including both half-spaces.
    pub fn media_count(&self) -> usize {
        self.layers.len() + 2
    }

    /// Material of medium `index` (0 and N + 1 are the half-spaces).
    pub fn material(&self, index: usize) -> PermittivityModel {
        if index == 0 {
            self.lower
        } else if index <= self.layers.len() {
            self.layers[index - 1].material
        } else {
            self.upper
        }
    }

    /// Thickness of finite layer `index` (1-based).
    pub fn thickness(&self, index: usize) -> f64 {
        self.layers[index - 1].thickness
    }

    /// Permittivities of every medium at `omega`, half-spaces included.
    pub fn permittivities(&self, omega: f64) -> Result<Vec<Complex64>> {
        (0..self.media_count()).map(|i| self.material(i).eval(omega)).collect()
    }

    pub fn check_layer_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.layers.len() {
            return Err(Error::InvalidParameter(format!(
                "layer index {j} outside 1..={}",
                self.layers.len()
            )));
        }
        Ok(())
    }

    /// True when the stack reads identically bottom-up and top-down.
    pub fn mirror_symmetric(&self) -> bool {
        self.lower == self.upper && self.layers.iter().eq(self.layers.iter().rev())
    }

    /// Copy of the stack with every occurrence of `from` (layers and
    /// half-spaces) replaced by `to`; thicknesses are kept.
    pub fn with_material_replaced(&self, from: &PermittivityModel, to: PermittivityModel) -> Stack {
        let swap = |m: PermittivityModel| if m == *from { to } else { m };
        Stack {
            lower: swap(self.lower),
            layers: self
                .layers
                .iter()
                .map(|l| Layer {
                    thickness: l.thickness,
                    material: swap(l.material),
                })
                .collect(),
            upper: swap(self.upper),
        }
    }

    /// True when both stacks have the same layer count and thicknesses.
    pub fn same_geometry(&self, other: &Stack) -> bool {
        self.layers.len() == other.layers.len()
            && self
                .layers
                .iter()
                .zip(&other.layers)
                .all(|(a, b)| a.thickness == b.thickness)
    }
}

/// Which material hosts the dipole in a Bragg construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HostMaterial {
    #[default]
    Low,
    High,
}

/// Parameters of a symmetric quarter-wave stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BraggDesign {
    /// Bragg pairs on each side of the host layer.
    pub n_periods: usize,
    pub low: PermittivityModel,
    pub high: PermittivityModel,
    /// Design frequency at which every layer is a quarter wave thick.
    pub omega_mid: f64,
    /// Double the host layer to a half wave.
    pub defect: bool,
    pub host: HostMaterial,
}

/// Thickness of a quarter-wave layer at `omega` for the given material.
pub fn quarter_wave_thickness(material: &PermittivityModel, omega: f64) -> Result<f64> {
    let eps = material.eval(omega)?;
    if !(eps.re > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "quarter-wave layer needs Re eps > 0 at omega = {omega}, got {eps}"
        )));
    }
    Ok(0.5 * PI / (omega * refractive_index(eps).re))
}

/// Builds the symmetric Bragg stack `(H L)^(n-1) H [host] H (L H)^(n-1)`
/// between vacuum half-spaces and returns it with the host layer index.
///
/// With `defect` the host layer is a half wave thick. When the host is the
/// high-index material the roles of `low` and `high` swap.
pub fn build_bragg_stack(design: &BraggDesign) -> Result<(Stack, usize)> {
    if design.n_periods == 0 {
        return Err(Error::InvalidParameter("n_periods must be >= 1".into()));
    }
    if !(design.omega_mid > 0.0) {
        return Err(Error::NonPositiveFrequency(design.omega_mid));
    }
    let (host_material, other_material) = match design.host {
        HostMaterial::Low => (design.low, design.high),
        HostMaterial::High => (design.high, design.low),
    };
    let host_quarter = quarter_wave_thickness(&host_material, design.omega_mid)?;
    let other = Layer::new(
        quarter_wave_thickness(&other_material, design.omega_mid)?,
        other_material,
    )?;
    let spacer = Layer::new(host_quarter, host_material)?;
    let host = Layer::new(
        if design.defect {
            2.0 * host_quarter
        } else {
            host_quarter
        },
        host_material,
    )?;

    // one side, listed from the host outward
    let mut side = Vec::with_capacity(2 * design.n_periods - 1);
    side.push(other);
    for _ in 1..design.n_periods {
        side.push(spacer);
        side.push(other);
    }

    let mut layers: Vec<Layer> = side.iter().rev().copied().collect();
    layers.push(host);
    let host_index = layers.len();
    layers.extend(side.iter().copied());

    let stack = Stack::new(PermittivityModel::VACUUM, layers, PermittivityModel::VACUUM)?;
    Ok((stack, host_index))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Parallel to the layers.
    X,
    /// Normal to the layers.
    Z,
    /// Isotropic average, (2Γ_x + Γ_z)/3.
    Average,
}

/// Dipole location, orientation and transition frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSpec {
    /// 1-based index of the host layer.
    pub layer: usize,
    /// Height above the lower boundary of the host layer.
    pub z: f64,
    pub orientation: Orientation,
    pub omega_a: f64,
    /// Real-cavity radius entering the bulk local-field terms.
    pub cavity_radius: f64,
}

impl DipoleSpec {
    /// Dipole with the default cavity radius `1e-2 / omega_a`.
    pub fn new(layer: usize, z: f64, orientation: Orientation, omega_a: f64) -> Self {
        DipoleSpec {
            layer,
            z,
            orientation,
            omega_a,
            cavity_radius: default_cavity_radius(omega_a),
        }
    }

    /// Dipole at relative height `fraction` of the host layer thickness.
    pub fn at_fraction(
        stack: &Stack,
        layer: usize,
        fraction: f64,
        orientation: Orientation,
        omega_a: f64,
    ) -> Result<Self> {
        stack.check_layer_index(layer)?;
        let spec = DipoleSpec::new(layer, fraction * stack.thickness(layer), orientation, omega_a);
        spec.validate(stack)?;
        Ok(spec)
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_omega(mut self, omega_a: f64) -> Self {
        self.omega_a = omega_a;
        self
    }

    pub fn validate(&self, stack: &Stack) -> Result<()> {
        stack.check_layer_index(self.layer)?;
        let d = stack.thickness(self.layer);
        if !(self.z > 0.0 && self.z < d) {
            return Err(Error::InvalidParameter(format!(
                "dipole height {} outside (0, {d})",
                self.z
            )));
        }
        if !(self.omega_a > 0.0 && self.omega_a.is_finite()) {
            return Err(Error::NonPositiveFrequency(self.omega_a));
        }
        if !(self.cavity_radius > 0.0 && self.cavity_radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cavity radius must be positive, got {}",
                self.cavity_radius
            )));
        }
        let scale = self.z.min(d - self.z).min(2.0 * PI / self.omega_a);
        if self.cavity_radius >= 0.1 * scale {
            log::warn!(
                "cavity radius {} is not small against the local length scale {scale}",
                self.cavity_radius
            );
        }
        Ok(())
    }
}

pub fn default_cavity_radius(omega_a: f64) -> f64 {
    1e-2 / omega_a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(re: f64) -> PermittivityModel {
        PermittivityModel::constant(Complex64::new(re, 0.0)).unwrap()
    }

    fn design(n: usize, defect: bool) -> BraggDesign {
        BraggDesign {
            n_periods: n,
            low: constant(1.0),
            high: constant(4.0),
            omega_mid: 1.0,
            defect,
            host: HostMaterial::Low,
        }
    }

    #[test]
    fn single_period_thicknesses() {
        let (stack, j) = build_bragg_stack(&design(1, false)).unwrap();
        assert_eq!(stack.layer_count(), 3);
        assert_eq!(j, 2);
        assert!((stack.thickness(2) - PI / 2.0).abs() < 1e-15);
        assert!((stack.thickness(1) - PI / 4.0).abs() < 1e-15);
        assert!((stack.thickness(3) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn defect_doubles_host_only() {
        let (plain, _) = build_bragg_stack(&design(3, false)).unwrap();
        let (defect, j) = build_bragg_stack(&design(3, true)).unwrap();
        assert!((defect.thickness(j) - PI).abs() < 1e-15);
        for i in 1..=plain.layer_count() {
            if i != j {
                assert_eq!(plain.layers[i - 1], defect.layers[i - 1]);
            }
        }
    }

    #[test]
    fn thirty_periods_layout() {
        let (stack, j) = build_bragg_stack(&design(30, false)).unwrap();
        assert_eq!(stack.layer_count(), 4 * 30 - 1);
        assert_eq!(j, 60);
        assert!(stack.mirror_symmetric());
        let highs = stack.layers.iter().filter(|l| l.material == constant(4.0)).count();
        assert_eq!(highs, 60);
        // host is flanked by high-index layers
        assert_eq!(stack.material(j - 1), constant(4.0));
        assert_eq!(stack.material(j + 1), constant(4.0));
    }

    #[test]
    fn quarter_wave_everywhere() {
        let high = PermittivityModel::drude_lorentz_relative(1.7299, 20.0, 1e-7).unwrap();
        let d = BraggDesign {
            high,
            ..design(5, false)
        };
        let (stack, _) = build_bragg_stack(&d).unwrap();
        for layer in &stack.layers {
            let n = refractive_index(layer.material.eval(1.0).unwrap()).re;
            assert!((layer.thickness * n - PI / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn high_index_host() {
        let d = BraggDesign {
            host: HostMaterial::High,
            ..design(2, false)
        };
        let (stack, j) = build_bragg_stack(&d).unwrap();
        assert_eq!(stack.material(j), constant(4.0));
        assert_eq!(stack.material(j - 1), constant(1.0));
    }

    #[test]
    fn build_errors() {
        assert!(build_bragg_stack(&design(0, false)).is_err());
        let d = BraggDesign {
            high: constant(-2.0),
            ..design(2, false)
        };
        assert!(build_bragg_stack(&d).is_err());
    }

    #[test]
    fn symmetry_detection() {
        let (mut stack, _) = build_bragg_stack(&design(4, true)).unwrap();
        assert!(stack.mirror_symmetric());
        stack.layers.push(Layer::new(0.3, constant(4.0)).unwrap());
        assert!(!stack.mirror_symmetric());

        let empty = Stack::new(constant(2.0), vec![], constant(2.0)).unwrap();
        assert!(empty.mirror_symmetric());
        let interface = Stack::new(constant(2.0), vec![], constant(1.0)).unwrap();
        assert!(!interface.mirror_symmetric());
    }

    #[test]
    fn material_swap_keeps_geometry() {
        let (stack, _) = build_bragg_stack(&design(3, true)).unwrap();
        let swapped = stack.with_material_replaced(&constant(4.0), constant(4.1));
        assert!(stack.same_geometry(&swapped));
        assert!(swapped.layers.iter().all(|l| l.material != constant(4.0)));
        assert_eq!(swapped.lower, PermittivityModel::VACUUM);
    }

    #[test]
    fn dipole_validation() {
        let stack = Stack::uniform_vacuum(1.0).unwrap();
        assert!(DipoleSpec::new(1, 0.5, Orientation::X, 1.0).validate(&stack).is_ok());
        assert!(DipoleSpec::new(1, 0.0, Orientation::X, 1.0).validate(&stack).is_err());
        assert!(DipoleSpec::new(1, 1.0, Orientation::X, 1.0).validate(&stack).is_err());
        assert!(DipoleSpec::new(2, 0.5, Orientation::X, 1.0).validate(&stack).is_err());
        assert!(DipoleSpec::new(0, 0.5, Orientation::X, 1.0).validate(&stack).is_err());
        assert!(DipoleSpec::new(1, 0.5, Orientation::X, -1.0).validate(&stack).is_err());
        let mut d = DipoleSpec::new(1, 0.5, Orientation::X, 1.0);
        d.cavity_radius = 0.0;
        assert!(d.validate(&stack).is_err());
    }

    #[test]
    fn bad_layers_rejected() {
        assert!(Layer::new(0.0, PermittivityModel::VACUUM).is_err());
        assert!(Layer::new(f64::INFINITY, PermittivityModel::VACUUM).is_err());
    }
}
