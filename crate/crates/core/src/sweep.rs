//! Parameter sweeps with CSV output.

use std::io::Write;

use rayon::prelude::*;

use crate::config::{OrientationSelection, RunConfig, SweepAxis, SweepConfig};
use crate::emission::orientation_rates;
use crate::error::{Error, Result};
use crate::materials::PermittivityModel;
use crate::stack::{default_cavity_radius, DipoleSpec, Orientation, Stack};

pub const CSV_HEADER: &str = "axis,gamma_x,gamma_z,gamma_avg,gamma_prop,gamma_evan,err_est,status";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: f64,
    pub gamma_x: Option<f64>,
    pub gamma_z: Option<f64>,
    pub gamma_avg: Option<f64>,
    pub gamma_prop: Option<f64>,
    pub gamma_evan: Option<f64>,
    pub err_est: Option<f64>,
    /// `Ok` or the reason this point failed.
    pub status: std::result::Result<(), String>,
}

impl SweepRow {
    fn failed(axis: f64, err: Error) -> Self {
        SweepRow {
            axis,
            gamma_x: None,
            gamma_z: None,
            gamma_avg: None,
            gamma_prop: None,
            gamma_evan: None,
            err_est: None,
            status: Err(err.to_string()),
        }
    }

    pub fn csv_line(&self) -> String {
        let f = |v: Option<f64>| v.map(|x| format!("{x:.11e}")).unwrap_or_default();
        let status = match &self.status {
            Ok(()) => "ok".to_string(),
            Err(msg) => format!("error: {}", msg.replace([',', '\n'], ";")),
        };
        format!(
            "{:.11e},{},{},{},{},{},{},{}",
            self.axis,
            f(self.gamma_x),
            f(self.gamma_z),
            f(self.gamma_avg),
            f(self.gamma_prop),
            f(self.gamma_evan),
            f(self.err_est),
            status
        )
    }
}

impl RunConfig {
    /// Dipole described by the configuration, moved to `omega_a` and
    /// `z_fraction`.
    pub fn dipole_at(&self, omega_a: f64, z_fraction: f64) -> DipoleSpec {
        let d = self.stack.thickness(self.dipole.layer);
        let mut spec = DipoleSpec::new(
            self.dipole.layer,
            z_fraction * d,
            self.dipole.orientation.split_orientation(),
            omega_a,
        );
        spec.cavity_radius = self.dipole.cavity_radius.unwrap_or(default_cavity_radius(omega_a));
        spec
    }

    /// Dipole of the configuration as given.
    pub fn dipole_spec(&self) -> DipoleSpec {
        self.dipole_at(self.dipole.omega_a, self.dipole.z_fraction)
    }
}

fn with_linewidth(model: &PermittivityModel, gamma: f64) -> Result<PermittivityModel> {
    match *model {
        PermittivityModel::DrudeLorentz { omega_p, omega_t, .. } => {
            PermittivityModel::drude_lorentz(omega_p, omega_t, gamma)
        }
        PermittivityModel::Constant(_) => Err(Error::InvalidParameter("material has no linewidth".into())),
    }
}

fn evaluate(config: &RunConfig, sweep: &SweepConfig, value: f64) -> Result<SweepRow> {
    let swapped: Stack;
    let (stack, dipole) = match sweep.axis {
        SweepAxis::Frequency => (&config.stack, config.dipole_at(value, config.dipole.z_fraction)),
        SweepAxis::Position => (&config.stack, config.dipole_at(config.dipole.omega_a, value)),
        SweepAxis::Linewidth => {
            let name = sweep.material.as_deref().unwrap_or_default();
            let old = config
                .materials
                .get(name)
                .ok_or_else(|| Error::InvalidParameter(format!("undefined material '{name}'")))?;
            let new = with_linewidth(old, value)?;
            swapped = config.stack.with_material_replaced(old, new);
            (&swapped, config.dipole_spec())
        }
    };
    let rates = orientation_rates(stack, &dipole, &config.quadrature, sweep.split)?;
    let selection = config.dipole.orientation;
    let chosen = selection.orientations();
    let pick = |o: Orientation| chosen.contains(&o).then(|| rates.get(o).gamma_total);
    let split = rates.get(selection.split_orientation());
    let err = chosen.iter().map(|&o| rates.get(o).error_estimate).fold(0.0, f64::max);
    Ok(SweepRow {
        axis: value,
        gamma_x: pick(Orientation::X),
        gamma_z: pick(Orientation::Z),
        gamma_avg: pick(Orientation::Average),
        gamma_prop: split.gamma_prop,
        gamma_evan: split.gamma_evan,
        err_est: Some(err),
        status: Ok(()),
    })
}

/// Evaluates every sweep point, in ascending order. Points that fail carry
/// the error in their status. `threads = 1` runs serially; otherwise a pool
/// of that many workers (0 picks the machine default) is used. Results do
/// not depend on the thread count.
pub fn run_sweep(config: &RunConfig, threads: usize) -> Result<Vec<SweepRow>> {
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("configuration has no [sweep] section".into()))?;
    if config.dipole.orientation == OrientationSelection::All && sweep.split {
        log::info!("split columns report the orientation average");
    }
    let values = sweep.values();
    let point = |&v: &f64| evaluate(config, sweep, v).unwrap_or_else(|e| SweepRow::failed(v, e));
    if threads == 1 {
        return Ok(values.iter().map(point).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(|| values.par_iter().map(point).collect()))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}
