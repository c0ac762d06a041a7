//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strata::config::RunConfig;
use strata::emission::{find_defect_resonance, maximize_contrast, orientation_rates, switch_contrast};
use strata::fresnel::{total_reflection, Polarization, Side, TransverseState};
use strata::materials::PermittivityModel;
use strata::sommerfeld::{integrate_green, ContourGeometry, QuadratureConfig};
use strata::stack::{DipoleSpec, Layer, Orientation, Stack};
use strata::sweep::run_sweep;

const BAND_EDGE: &str = include_str!("../recipes/band_edge.cfg");
const DEFECT: &str = include_str!("../recipes/defect.cfg");
const POSITION: &str = include_str!("../recipes/position.cfg");
const ORIENTATION: &str = include_str!("../recipes/orientation.cfg");
const ABSORPTION: &str = include_str!("../recipes/absorption.cfg");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    ((value - target) / target).abs() <= rel
}

fn recipe(text: &str, overrides: &[(&str, &str)]) -> RunConfig {
    let ov: Vec<(String, String)> = overrides.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    RunConfig::parse_with_overrides(text, &ov).expect("recipe parses")
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn permittivity() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (rel, re, im) in [(1.7299, 4.0, 7.5e-10), (1.7529, 4.0804, 7.7e-10)] {
        let eps = PermittivityModel::drude_lorentz_relative(rel, 20.0, 1e-7)
            .and_then(|m| m.eval(1.0))
            .map_err(e)?;
        ok &= within(eps.re, re, 1e-3) && within(eps.im, im, 0.1);
        lines.push(format!("eps={:.5}+{:.3e}i", eps.re, eps.im));
    }
    check(ok, lines.join(", "))
}

fn free_space() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let omega = rng.gen_range(0.1..10.0);
        let layers = (0..3)
            .map(|_| Layer::new(rng.gen_range(0.2..2.0), PermittivityModel::VACUUM).unwrap())
            .collect();
        let stack = Stack::new(PermittivityModel::VACUUM, layers, PermittivityModel::VACUUM).map_err(e)?;
        let fraction = rng.gen_range(0.1..0.9);
        let dipole = DipoleSpec::at_fraction(&stack, 2, fraction, Orientation::X, omega).map_err(e)?;
        let r = orientation_rates(&stack, &dipole, &cfg, false).map_err(e)?;
        for g in [r.x.gamma_total, r.z.gamma_total, r.avg.gamma_total] {
            worst = worst.max((g - 1.0).abs());
        }
    }
    check(worst <= 1e-6, format!("max |Γ-1| = {worst:.2e} over 20 frequencies"))
}

fn mirror() -> Outcome {
    let m = PermittivityModel::constant(Complex64::new(1e8, 0.0)).map_err(e)?;
    let stack = Stack::new(
        m,
        vec![Layer::new(1.0, PermittivityModel::VACUUM).map_err(e)?],
        PermittivityModel::VACUUM,
    )
    .map_err(e)?;
    let omega = 1.0;
    let dipole = DipoleSpec::new(1, 0.01 * 2.0 * std::f64::consts::PI / omega, Orientation::X, omega);
    let r = orientation_rates(&stack, &dipole, &QuadratureConfig::default(), false).map_err(e)?;
    let (gx, gz) = (r.x.gamma_total, r.z.gamma_total);
    check(gx < 0.05 && gz > 1.8 && gz < 2.2, format!("Γx={gx:.4}, Γz={gz:.4}"))
}

fn band_edge() -> Outcome {
    let cfg = recipe(BAND_EDGE, &[]);
    let sw = cfg.switch.as_ref().unwrap();
    let r = switch_contrast(&cfg.stack, &sw.stack_on, &cfg.dipole_spec(), &cfg.quadrature).map_err(e)?;
    check(
        within(r.gamma_off, 0.35, 0.15) && within(r.gamma_on, 0.6, 0.15),
        format!("ω_A=1.217: Γ_off={:.4}, Γ_on={:.4}", r.gamma_off, r.gamma_on),
    )
}

fn defect_switch() -> Outcome {
    let cfg = recipe(DEFECT, &[]);
    let sw = cfg.switch.as_ref().unwrap();
    let r = maximize_contrast(
        &cfg.stack,
        &sw.stack_on,
        &cfg.dipole_spec(),
        &cfg.quadrature,
        &sw.window.unwrap(),
    )
    .map_err(e)?;
    check(
        within(r.gamma_off, 0.25, 0.15) && within(r.gamma_on, 2.26, 0.15) && r.contrast >= 7.0,
        format!(
            "ω_A={:.6}: Γ_off={:.4}, Γ_on={:.4}, contrast={:.2}",
            r.omega_a, r.gamma_off, r.gamma_on, r.contrast
        ),
    )
}

fn resonance_shift() -> Outcome {
    let cfg = recipe(DEFECT, &[]);
    let sw = cfg.switch.as_ref().unwrap();
    let window = cfg.resonance.unwrap();
    let dipole = cfg.dipole_spec();
    let off = find_defect_resonance(&cfg.stack, &dipole, &cfg.quadrature, &window).map_err(e)?;
    let on = find_defect_resonance(&sw.stack_on, &dipole, &cfg.quadrature, &window).map_err(e)?;
    let shift = (on.omega - off.omega).abs();
    check(
        (0.5e-3..=2e-3).contains(&shift),
        format!(
            "ω_off={:.7}, ω_on={:.7}, |Δω|={shift:.3e} (window [5e-4, 2e-3])",
            off.omega, on.omega
        ),
    )
}

fn peak(cfg: &RunConfig) -> Result<f64, String> {
    let w = cfg.resonance.unwrap();
    Ok(
        find_defect_resonance(&cfg.stack, &cfg.dipole_spec(), &cfg.quadrature, &w)
            .map_err(e)?
            .gamma_peak,
    )
}

fn position() -> Outcome {
    let mut peaks = Vec::new();
    for z in ["0.5", "0.2", "0.05"] {
        peaks.push(peak(&recipe(POSITION, &[("dipole.z", z)]))?);
    }
    check(
        peaks[0] > peaks[1] && peaks[1] > peaks[2],
        format!(
            "peaks z=0.5/0.2/0.05: {:.4} > {:.4} > {:.4}",
            peaks[0], peaks[1], peaks[2]
        ),
    )
}

fn orientation() -> Outcome {
    let cfg = recipe(ORIENTATION, &[]);
    let r = orientation_rates(&cfg.stack, &cfg.dipole_spec(), &cfg.quadrature, false).map_err(e)?;
    let mut ok = r.z.gamma_total > r.x.gamma_total;
    let mut worst: f64 = 0.0;
    let rows = run_sweep(
        &recipe(
            ORIENTATION,
            &[("sweep.points", "9"), ("sweep.min", "0.9"), ("sweep.max", "1.1")],
        ),
        0,
    )
    .map_err(e)?;
    for row in &rows {
        let (x, z, avg) = (row.gamma_x.unwrap(), row.gamma_z.unwrap(), row.gamma_avg.unwrap());
        worst = worst.max((3.0 * avg - (2.0 * x + z)).abs() / (2.0 * x + z).abs());
        ok &= z > x;
    }
    ok &= worst <= 4.0 * f64::EPSILON;
    check(
        ok,
        format!(
            "ω=1: Γz={:.4} > Γx={:.4}; max rel |3Γavg-(2Γx+Γz)| = {worst:.1e}",
            r.z.gamma_total, r.x.gamma_total
        ),
    )
}

fn absorption() -> Outcome {
    let mut peaks = Vec::new();
    for g in ["1e-7", "1e-3", "1e-2"] {
        peaks.push(peak(&recipe(ABSORPTION, &[("material.H.gamma", g)]))?);
    }
    check(
        peaks[0] > peaks[1] && peaks[1] > peaks[2],
        format!(
            "peaks γ=1e-7/1e-3/1e-2: {:.5} > {:.5} > {:.5}",
            peaks[0], peaks[1], peaks[2]
        ),
    )
}

/// Normal wavenumber on the decaying branch, written out independently.
fn beta(eps: Complex64, omega: f64, k_par: Complex64) -> Complex64 {
    let b = (eps * omega * omega - k_par * k_par).sqrt();
    if b.im < 0.0 || (b.im == 0.0 && b.re < 0.0) {
        -b
    } else {
        b
    }
}

/// Characteristic-matrix reflection from medium `media[0]` onto the
/// layers `media[1..n-1]` (thicknesses `d`) and substrate `media[n-1]`.
fn matrix_reflection(media: &[Complex64], d: &[f64], omega: f64, k_par: Complex64, pol: Polarization) -> Complex64 {
    let admittance = |eps: Complex64| {
        let b = beta(eps, omega, k_par);
        match pol {
            Polarization::S => b,
            Polarization::P => b / eps,
        }
    };
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let mut m = [[one, Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), one]];
    for (eps, &t) in media[1..media.len() - 1].iter().zip(d) {
        let y = admittance(*eps);
        let delta = beta(*eps, omega, k_par) * t;
        let (c, s) = (delta.cos(), delta.sin());
        let layer = [[c, -i * s / y], [-i * y * s, c]];
        m = [
            [
                m[0][0] * layer[0][0] + m[0][1] * layer[1][0],
                m[0][0] * layer[0][1] + m[0][1] * layer[1][1],
            ],
            [
                m[1][0] * layer[0][0] + m[1][1] * layer[1][0],
                m[1][0] * layer[0][1] + m[1][1] * layer[1][1],
            ],
        ];
    }
    let y0 = admittance(media[0]);
    let ys = admittance(*media.last().unwrap());
    let a = y0 * m[0][0] + y0 * ys * m[0][1];
    let b = m[1][0] + ys * m[1][1];
    (a - b) / (a + b)
}

fn random_eps(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(
        rng.gen_range(1.0..6.0),
        if rng.gen_bool(0.5) {
            0.0
        } else {
            rng.gen_range(0.0..0.5)
        },
    )
}

fn oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let omega = rng.gen_range(0.5..2.0);
        let eps: Vec<Complex64> = (0..n + 2).map(|_| random_eps(&mut rng)).collect();
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.5)).collect();
        let layers = (0..n)
            .map(|i| Layer::new(d[i], PermittivityModel::constant(eps[i + 1]).unwrap()).unwrap())
            .collect();
        let stack = Stack::new(
            PermittivityModel::constant(eps[0]).unwrap(),
            layers,
            PermittivityModel::constant(eps[n + 1]).unwrap(),
        )
        .map_err(e)?;
        let k_max = eps.iter().map(|x| x.norm().sqrt()).fold(0.0, f64::max) * omega;
        let k_par = Complex64::new(rng.gen_range(0.0..1.5 * k_max), rng.gen_range(-0.2..0.2));
        let state = TransverseState::from_stack(&stack, omega, k_par).map_err(e)?;
        let j = rng.gen_range(1..=n);
        for pol in [Polarization::S, Polarization::P] {
            let above = total_reflection(&stack, j, Side::Above, &state, pol).map_err(e)?;
            let want = matrix_reflection(&eps[j..], &d[j..], omega, k_par, pol);
            worst = worst.max((above - want).norm() / want.norm());
            let media: Vec<Complex64> = eps[..=j].iter().rev().copied().collect();
            let thick: Vec<f64> = d[..j - 1].iter().rev().copied().collect();
            let below = total_reflection(&stack, j, Side::Below, &state, pol).map_err(e)?;
            let want = matrix_reflection(&media, &thick, omega, k_par, pol);
            worst = worst.max((below - want).norm() / want.norm());
        }
    }
    check(worst <= 1e-12, format!("max rel deviation {worst:.2e} over 100 stacks"))
}

fn contour() -> Outcome {
    let cfg = recipe(DEFECT, &[]);
    let spec = cfg.dipole_spec();
    let quad = QuadratureConfig::default().with_rel_tol(1e-11);
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let omega = 0.999 + 0.002 * i as f64 / 9.0;
        let eps = cfg.stack.permittivities(omega).map_err(e)?;
        let h = ContourGeometry::new(&cfg.stack, &eps, spec.layer, spec.z, omega, &quad)
            .map_err(e)?
            .height;
        let a = integrate_green(&cfg.stack, spec.layer, spec.z, omega, &quad.with_height(h), false).map_err(e)?;
        let b = integrate_green(&cfg.stack, spec.layer, spec.z, omega, &quad.with_height(0.5 * h), false).map_err(e)?;
        worst = worst
            .max((a.g_xx - b.g_xx).norm() / a.g_xx.norm())
            .max((a.g_zz - b.g_zz).norm() / a.g_zz.norm());
    }
    check(
        worst <= 1e-8,
        format!("max rel h vs h/2 difference {worst:.2e} over ω∈[0.999, 1.001]"),
    )
}

fn split() -> Outcome {
    let rel_tol = QuadratureConfig::default().rel_tol;
    let mut worst: f64 = 0.0;
    let mut sum_check = |r: &strata::emission::RateResult| {
        let (p, v) = (r.gamma_prop.unwrap(), r.gamma_evan.unwrap());
        worst = worst.max((p + v - r.gamma_refl).abs() / r.gamma_refl.abs());
        (p, v)
    };

    let gap = recipe(ORIENTATION, &[]);
    let rates = orientation_rates(&gap.stack, &gap.dipole_spec(), &gap.quadrature, true).map_err(e)?;
    sum_check(&rates.x);
    sum_check(&rates.avg);
    let (zp, ze) = sum_check(&rates.z);

    let defect = recipe(DEFECT, &[]);
    let res = find_defect_resonance(
        &defect.stack,
        &defect.dipole_spec(),
        &defect.quadrature,
        &defect.resonance.unwrap(),
    )
    .map_err(e)?;
    let at_peak = defect.dipole_spec().with_omega(res.omega);
    let rates = orientation_rates(&defect.stack, &at_peak, &defect.quadrature, true).map_err(e)?;
    let (xp, xe) = sum_check(&rates.x);
    sum_check(&rates.z);

    check(
        worst <= 10.0 * rel_tol && xp > xe && ze > zp,
        format!(
            "max rel |prop+evan-refl| = {worst:.1e}; x at ω_res={:.6}: prop {xp:.3} > evan {xe:.3}; z in gap: evan {ze:.3} > prop {zp:.3}",
            res.omega
        ),
    )
}

fn cli_sweep(threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_strata"))
        .args(["sweep", "--config"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/recipes/defect.cfg"))
        .args(["--override", "sweep.points=24", "--threads", threads])
        .output()
        .map_err(e)?;
    if !out.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let a = cli_sweep("1")?;
    let b = cli_sweep("1")?;
    let c = cli_sweep("4")?;
    let rows = a.iter().filter(|&&c| c == b'\n').count();
    check(
        a == b && a == c && rows == 25,
        format!(
            "{rows} lines, repeat identical: {}, serial == parallel: {}",
            a == b,
            a == c
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("permittivity reproduction", permittivity),
        ("free-space identity", free_space),
        ("mirror image limits", mirror),
        ("band-edge switch", band_edge),
        ("defect-resonance switch", defect_switch),
        ("band-gap shift", resonance_shift),
        ("position dependence", position),
        ("orientation behavior", orientation),
        ("absorption smoothing", absorption),
        ("transfer-matrix equivalence", oracle),
        ("contour invariance", contour),
        ("split consistency", split),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
