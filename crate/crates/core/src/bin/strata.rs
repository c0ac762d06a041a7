#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use strata::config::{parse_override, RunConfig};
use strata::emission::{find_defect_resonance, maximize_contrast, orientation_rates, switch_contrast, SwitchReport};
use strata::stack::Orientation;
use strata::sweep::{run_sweep, write_csv};

/// Spontaneous emission rates of a dipole inside a planar multilayer.
#[derive(Parser)]
#[command(name = "strata", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rates at the configured dipole position and frequency.
    Rate(Common),
    /// CSV sweep along the axis of the [sweep] section.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Off/on rate contrast using the [switch] section.
    Contrast(Common),
    /// Defect resonance search using the [resonance] section; with a
    /// [switch] section the switched-on state is searched as well.
    Resonance(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long, short)]
    config: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Replace a configuration value, e.g. dipole.omega_a=1.2 or material.H.gamma=1e-3.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

enum Failure {
    Config(String),
    Compute(String),
}

fn load(common: &Common) -> Result<RunConfig, Failure> {
    let text =
        fs::read_to_string(&common.config).map_err(|e| Failure::Config(format!("{}: {e}", common.config.display())))?;
    let overrides = common
        .overrides
        .iter()
        .map(|o| parse_override(o))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Config(e.to_string()))?;
    RunConfig::parse_with_overrides(&text, &overrides)
        .map_err(|e| Failure::Config(format!("{}: {e}", common.config.display())))
}

fn sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => fs::File::create(p)
            .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Failure::Config(format!("{}: {e}", p.display()))),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn io_err(e: io::Error) -> Failure {
    Failure::Compute(format!("write failed: {e}"))
}

fn compute<T>(r: strata::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Compute(e.to_string()))
}

fn print_report(out: &mut dyn Write, r: &SwitchReport) -> io::Result<()> {
    let eps = |v: &[num_complex::Complex64]| {
        v.iter()
            .map(|e| format!("{:.11e}{:+.11e}i", e.re, e.im))
            .collect::<Vec<_>>()
            .join(";")
    };
    writeln!(out, "omega_a={:.11e}", r.omega_a)?;
    writeln!(out, "gamma_off={:.11e}", r.gamma_off)?;
    writeln!(out, "gamma_on={:.11e}", r.gamma_on)?;
    writeln!(out, "contrast={:.11e}", r.contrast)?;
    writeln!(out, "eps_off={}", eps(&r.eps_off))?;
    writeln!(out, "eps_on={}", eps(&r.eps_on))
}

/// Returns true when every point succeeded.
fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Rate(common) => {
            let cfg = load(&common)?;
            let dipole = cfg.dipole_spec();
            let rates = compute(orientation_rates(&cfg.stack, &dipole, &cfg.quadrature, true))?;
            let mut out = sink(common.output.as_ref())?;
            writeln!(out, "omega_a={:.11e}", dipole.omega_a).map_err(io_err)?;
            writeln!(out, "z={:.11e}", dipole.z).map_err(io_err)?;
            for &o in cfg.dipole.orientation.orientations() {
                let r = rates.get(o);
                let tag = match o {
                    Orientation::X => "x",
                    Orientation::Z => "z",
                    Orientation::Average => "avg",
                };
                writeln!(out, "gamma_{tag}={:.11e}", r.gamma_total).map_err(io_err)?;
                writeln!(out, "gamma_{tag}_bulk={:.11e}", r.gamma_bulk).map_err(io_err)?;
                writeln!(out, "gamma_{tag}_refl={:.11e}", r.gamma_refl).map_err(io_err)?;
                if let (Some(p), Some(e)) = (r.gamma_prop, r.gamma_evan) {
                    writeln!(out, "gamma_{tag}_prop={p:.11e}").map_err(io_err)?;
                    writeln!(out, "gamma_{tag}_evan={e:.11e}").map_err(io_err)?;
                }
                writeln!(out, "err_{tag}={:.11e}", r.error_estimate).map_err(io_err)?;
            }
            out.flush().map_err(io_err)?;
            Ok(true)
        }
        Command::Sweep { common, threads } => {
            let cfg = load(&common)?;
            let rows = compute(run_sweep(&cfg, threads))?;
            let path = common.output.as_ref().or(cfg.output.as_ref());
            let mut out = sink(path)?;
            write_csv(&rows, &mut out).map_err(io_err)?;
            out.flush().map_err(io_err)?;
            let failed = rows.iter().filter(|r| r.status.is_err()).count();
            if failed > 0 {
                log::warn!("{failed} of {} points failed", rows.len());
            }
            Ok(failed == 0)
        }
        Command::Contrast(common) => {
            let cfg = load(&common)?;
            let switch = cfg
                .switch
                .as_ref()
                .ok_or_else(|| Failure::Config("configuration has no [switch] section".into()))?;
            let dipole = cfg.dipole_spec();
            let report = match &switch.window {
                Some(w) => compute(maximize_contrast(
                    &cfg.stack,
                    &switch.stack_on,
                    &dipole,
                    &cfg.quadrature,
                    w,
                ))?,
                None => compute(switch_contrast(&cfg.stack, &switch.stack_on, &dipole, &cfg.quadrature))?,
            };
            let mut out = sink(common.output.as_ref())?;
            print_report(&mut out, &report).map_err(io_err)?;
            out.flush().map_err(io_err)?;
            Ok(true)
        }
        Command::Resonance(common) => {
            let cfg = load(&common)?;
            let window = cfg
                .resonance
                .as_ref()
                .ok_or_else(|| Failure::Config("configuration has no [resonance] section".into()))?;
            let dipole = cfg.dipole_spec();
            let res = compute(find_defect_resonance(&cfg.stack, &dipole, &cfg.quadrature, window))?;
            let on = match &cfg.switch {
                Some(sw) => Some(compute(find_defect_resonance(
                    &sw.stack_on,
                    &dipole,
                    &cfg.quadrature,
                    window,
                ))?),
                None => None,
            };
            let mut out = sink(common.output.as_ref())?;
            writeln!(out, "omega_res={:.11e}", res.omega).map_err(io_err)?;
            writeln!(out, "gamma_peak={:.11e}", res.gamma_peak).map_err(io_err)?;
            if let Some(on) = on {
                writeln!(out, "omega_res_on={:.11e}", on.omega).map_err(io_err)?;
                writeln!(out, "gamma_peak_on={:.11e}", on.gamma_peak).map_err(io_err)?;
                writeln!(out, "shift={:.11e}", on.omega - res.omega).map_err(io_err)?;
            }
            out.flush().map_err(io_err)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
