//! Line-oriented run configuration.
//!
//! ```text
//! # comment
//! [material H]
//! model = drude_lorentz        # or: constant (eps_re, eps_im)
//! omega_p_rel = 1.7299         # omega_p in units of omega_t
//! omega_t = 20
//! gamma = 1e-7
//!
//! [bragg]                      # or [layers] with "THICKNESS MATERIAL" rows
//! periods = 15                 # Bragg pairs on each side of the host
//! low = L
//! high = H
//! defect = true
//! omega_mid = 1
//!
//! [dipole]
//! layer = center               # or a 1-based index
//! z = 0.5                      # fraction of the host thickness
//! orientation = x              # x | z | avg | all
//! omega_a = 1.0
//!
//! [sweep]
//! axis = frequency             # frequency | position | linewidth
//! min = 0.99
//! max = 1.01
//! points = 201
//! ```
//!
//! Optional sections: `[quadrature]` (rel_tol, ellipse_height, k_cross,
//! tail_cap, max_subdivisions), `[switch]` (dot-path material overrides
//! describing the switched-on state, plus window_min/window_max/
//! window_points for contrast maximization) and `[resonance]` (min, max,
//! grid).

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

use crate::emission::SearchWindow;
use crate::materials::PermittivityModel;
use crate::sommerfeld::QuadratureConfig;
use crate::stack::{build_bragg_stack, BraggDesign, HostMaterial, Layer, Orientation, Stack};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    AtLine { line: usize, message: String },
    #[error("{0}")]
    General(String),
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        if line == 0 {
            ConfigError::General(message.into())
        } else {
            ConfigError::AtLine {
                line,
                message: message.into(),
            }
        }
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationSelection {
    X,
    Z,
    Average,
    All,
}

impl OrientationSelection {
    pub fn orientations(&self) -> &'static [Orientation] {
        match self {
            OrientationSelection::X => &[Orientation::X],
            OrientationSelection::Z => &[Orientation::Z],
            OrientationSelection::Average => &[Orientation::Average],
            OrientationSelection::All => &[Orientation::X, Orientation::Z, Orientation::Average],
        }
    }

    /// Orientation whose propagating/evanescent split is reported.
    pub fn split_orientation(&self) -> Orientation {
        match self {
            OrientationSelection::X => Orientation::X,
            OrientationSelection::Z => Orientation::Z,
            OrientationSelection::Average | OrientationSelection::All => Orientation::Average,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Frequency,
    Position,
    Linewidth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DipoleConfig {
    pub layer: usize,
    /// Height as a fraction of the host thickness.
    pub z_fraction: f64,
    pub orientation: OrientationSelection,
    pub omega_a: f64,
    /// Absolute cavity radius; `None` selects 1e-2/omega_a per point.
    pub cavity_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub split: bool,
    /// Material whose linewidth is swept (linewidth axis only).
    pub material: Option<String>,
}

impl SweepConfig {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchConfig {
    /// Same geometry as the main stack, switched-on materials.
    pub stack_on: Stack,
    pub window: Option<SearchWindow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub materials: BTreeMap<String, PermittivityModel>,
    pub stack: Stack,
    pub dipole: DipoleConfig,
    pub sweep: Option<SweepConfig>,
    pub quadrature: QuadratureConfig,
    pub switch: Option<SwitchConfig>,
    pub resonance: Option<SearchWindow>,
    pub output: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// raw document

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug, Clone)]
struct Section {
    kind: String,
    name: Option<String>,
    line: usize,
    entries: Vec<Entry>,
    // bare rows, used by [layers]
    rows: Vec<(Vec<String>, usize)>,
}

impl Section {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().rev().find(|e| e.key == key)
    }

    fn set(&mut self, key: &str, value: &str) {
        match self.entries.iter_mut().find(|e| e.key == key) {
            Some(e) => e.value = value.to_string(),
            None => self.entries.push(Entry {
                key: key.to_string(),
                value: value.to_string(),
                line: 0,
            }),
        }
    }

    fn label(&self) -> String {
        match &self.name {
            Some(n) => format!("[{} {}]", self.kind, n),
            None => format!("[{}]", self.kind),
        }
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for e in &self.entries {
            if !allowed.contains(&e.key.as_str()) {
                return Err(ConfigError::at(
                    e.line,
                    format!("unknown key '{}' in {}", e.key, self.label()),
                ));
            }
        }
        Ok(())
    }

    fn required(&self, key: &str) -> Result<&Entry> {
        self.get(key)
            .ok_or_else(|| ConfigError::at(self.line, format!("missing key '{key}' in {}", self.label())))
    }

    fn f64_or(&self, key: &str, default: Option<f64>) -> Result<Option<f64>> {
        match self.get(key) {
            Some(e) => parse_f64(e).map(Some),
            None => Ok(default),
        }
    }

    fn f64_req(&self, key: &str) -> Result<f64> {
        parse_f64(self.required(key)?)
    }

    fn usize_req(&self, key: &str) -> Result<usize> {
        let e = self.required(key)?;
        e.value.parse().map_err(|_| {
            ConfigError::at(
                e.line,
                format!("'{}' expects a non-negative integer, got '{}'", e.key, e.value),
            )
        })
    }

    fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some(e) => match e.value.as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                other => Err(ConfigError::at(
                    e.line,
                    format!("'{}' expects true or false, got '{other}'", e.key),
                )),
            },
        }
    }
}

fn parse_f64(e: &Entry) -> Result<f64> {
    e.value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ConfigError::at(e.line, format!("'{}' expects a number, got '{}'", e.key, e.value)))
}

#[derive(Debug, Clone)]
struct Document {
    sections: Vec<Section>,
}

impl Document {
    fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(header) = content.strip_prefix('[') {
                let header = header
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at(line, "unterminated section header"))?;
                let mut words = header.split_whitespace();
                let kind = words
                    .next()
                    .ok_or_else(|| ConfigError::at(line, "empty section header"))?
                    .to_string();
                let name = words.next().map(str::to_string);
                if words.next().is_some() {
                    return Err(ConfigError::at(line, format!("malformed section header '[{header}]'")));
                }
                let known = [
                    "material",
                    "bragg",
                    "layers",
                    "dipole",
                    "sweep",
                    "quadrature",
                    "switch",
                    "resonance",
                ];
                if !known.contains(&kind.as_str()) {
                    return Err(ConfigError::at(line, format!("unknown section [{kind}]")));
                }
                if (kind == "material") != name.is_some() {
                    return Err(ConfigError::at(
                        line,
                        format!("section [{header}]: only [material NAME] takes a name"),
                    ));
                }
                let duplicate = sections.iter().any(|s| s.kind == kind && s.name == name);
                if duplicate {
                    return Err(ConfigError::at(line, format!("duplicate section [{header}]")));
                }
                sections.push(Section {
                    kind,
                    name,
                    line,
                    entries: Vec::new(),
                    rows: Vec::new(),
                });
                continue;
            }
            let section = sections
                .last_mut()
                .ok_or_else(|| ConfigError::at(line, "content before the first section"))?;
            if let Some((key, value)) = content.split_once('=') {
                let key = key.trim();
                if key.is_empty() {
                    return Err(ConfigError::at(line, "empty key"));
                }
                section.entries.push(Entry {
                    key: key.to_string(),
                    value: value.trim().to_string(),
                    line,
                });
            } else if section.kind == "layers" {
                section
                    .rows
                    .push((content.split_whitespace().map(str::to_string).collect(), line));
            } else {
                return Err(ConfigError::at(
                    line,
                    format!("expected 'key = value', got '{content}'"),
                ));
            }
        }
        Ok(Document { sections })
    }

    fn section(&self, kind: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.kind == kind)
    }

    fn require(&self, kind: &str) -> Result<&Section> {
        self.section(kind)
            .ok_or_else(|| ConfigError::General(format!("missing section [{kind}]")))
    }

    /// Applies `path = value`, where path is `section.key` or
    /// `material.NAME.key`.
    fn apply_override(&mut self, path: &str, value: &str) -> Result<()> {
        let parts: Vec<&str> = path.split('.').collect();
        let (kind, name, key) = match parts.as_slice() {
            ["material", name, key] => ("material", Some(name.to_string()), *key),
            [kind, key] if *kind != "material" => (*kind, None, *key),
            _ => return Err(ConfigError::General(format!("bad override path '{path}'"))),
        };
        let section = self.sections.iter_mut().find(|s| s.kind == kind && s.name == name);
        match section {
            Some(s) => s.set(key, value),
            None => {
                if kind == "material" {
                    return Err(ConfigError::General(format!("override '{path}': no such material")));
                }
                let mut s = Section {
                    kind: kind.to_string(),
                    name: None,
                    line: 0,
                    entries: Vec::new(),
                    rows: Vec::new(),
                };
                s.set(key, value);
                self.sections.push(s);
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// validation

fn parse_material(section: &Section) -> Result<PermittivityModel> {
    let model = section.required("model")?;
    let built = match model.value.as_str() {
        "drude_lorentz" => {
            section.check_keys(&["model", "omega_p_rel", "omega_p", "omega_t", "gamma"])?;
            let omega_t = section.f64_req("omega_t")?;
            let gamma = section.f64_or("gamma", Some(0.0))?.unwrap();
            let omega_p = match (section.get("omega_p_rel"), section.get("omega_p")) {
                (Some(rel), None) => parse_f64(rel)? * omega_t,
                (None, Some(abs)) => parse_f64(abs)?,
                (Some(e), Some(_)) => {
                    return Err(ConfigError::at(e.line, "give either omega_p_rel or omega_p, not both"))
                }
                (None, None) => {
                    return Err(ConfigError::at(
                        section.line,
                        format!("missing key 'omega_p_rel' in {}", section.label()),
                    ))
                }
            };
            PermittivityModel::drude_lorentz(omega_p, omega_t, gamma)
        }
        "constant" => {
            section.check_keys(&["model", "eps_re", "eps_im"])?;
            let re = section.f64_req("eps_re")?;
            let im = section.f64_or("eps_im", Some(0.0))?.unwrap();
            PermittivityModel::constant(Complex64::new(re, im))
        }
        other => return Err(ConfigError::at(model.line, format!("unknown model '{other}'"))),
    };
    built.map_err(|e| ConfigError::at(section.line, format!("{}: {e}", section.label())))
}

fn lookup<'a>(
    materials: &'a BTreeMap<String, PermittivityModel>,
    name: &str,
    line: usize,
) -> Result<&'a PermittivityModel> {
    if name == "vacuum" && !materials.contains_key(name) {
        return Ok(&PermittivityModel::VACUUM);
    }
    materials
        .get(name)
        .ok_or_else(|| ConfigError::at(line, format!("undefined material '{name}'")))
}

fn parse_materials(doc: &Document) -> Result<BTreeMap<String, PermittivityModel>> {
    let mut out = BTreeMap::new();
    for s in doc.sections.iter().filter(|s| s.kind == "material") {
        out.insert(s.name.clone().unwrap(), parse_material(s)?);
    }
    Ok(out)
}

/// Stack plus the index of the layer named by `layer = center`.
fn parse_structure(doc: &Document, materials: &BTreeMap<String, PermittivityModel>) -> Result<(Stack, usize)> {
    match (doc.section("bragg"), doc.section("layers")) {
        (Some(_), Some(l)) => Err(ConfigError::at(l.line, "give either [bragg] or [layers], not both")),
        (None, None) => Err(ConfigError::General("missing section [bragg] or [layers]".into())),
        (Some(b), None) => {
            b.check_keys(&["periods", "low", "high", "defect", "omega_mid", "host"])?;
            let low_e = b.required("low")?;
            let high_e = b.required("high")?;
            let host = match b.get("host").map(|e| (e.value.as_str(), e.line)) {
                None | Some(("low", _)) => HostMaterial::Low,
                Some(("high", _)) => HostMaterial::High,
                Some((other, line)) => {
                    return Err(ConfigError::at(
                        line,
                        format!("host must be low or high, got '{other}'"),
                    ))
                }
            };
            let design = BraggDesign {
                n_periods: b.usize_req("periods")?,
                low: *lookup(materials, &low_e.value, low_e.line)?,
                high: *lookup(materials, &high_e.value, high_e.line)?,
                omega_mid: b.f64_or("omega_mid", Some(1.0))?.unwrap(),
                defect: b.bool_or("defect", false)?,
                host,
            };
            build_bragg_stack(&design).map_err(|e| ConfigError::at(b.line, e.to_string()))
        }
        (None, Some(l)) => {
            l.check_keys(&["lower", "upper"])?;
            let half_space = |key: &str| -> Result<PermittivityModel> {
                match l.get(key) {
                    Some(e) => lookup(materials, &e.value, e.line).copied(),
                    None => Ok(PermittivityModel::VACUUM),
                }
            };
            let mut layers = Vec::new();
            for (row, line) in &l.rows {
                let [d, name] = row.as_slice() else {
                    return Err(ConfigError::at(*line, "layer rows read 'THICKNESS MATERIAL'"));
                };
                let d: f64 = d
                    .parse()
                    .map_err(|_| ConfigError::at(*line, format!("bad thickness '{d}'")))?;
                let m = *lookup(materials, name, *line)?;
                layers.push(Layer::new(d, m).map_err(|e| ConfigError::at(*line, e.to_string()))?);
            }
            if layers.is_empty() {
                return Err(ConfigError::at(
                    l.line,
                    "[layers] needs at least one layer row to host the dipole",
                ));
            }
            let center = layers.len().div_ceil(2);
            let stack = Stack::new(half_space("lower")?, layers, half_space("upper")?)
                .map_err(|e| ConfigError::at(l.line, e.to_string()))?;
            Ok((stack, center))
        }
    }
}

fn parse_dipole(doc: &Document, stack: &Stack, center: usize) -> Result<DipoleConfig> {
    let s = doc.require("dipole")?;
    s.check_keys(&["layer", "z", "orientation", "omega_a", "cavity_radius"])?;
    let layer = match s.get("layer") {
        None => center,
        Some(e) if e.value == "center" => center,
        Some(e) => e
            .value
            .parse()
            .map_err(|_| ConfigError::at(e.line, format!("layer must be 'center' or an index, got '{}'", e.value)))?,
    };
    if layer == 0 || layer > stack.layer_count() {
        return Err(ConfigError::at(
            s.get("layer").map_or(s.line, |e| e.line),
            format!("layer {layer} outside 1..={}", stack.layer_count()),
        ));
    }
    let z_fraction = s.f64_or("z", Some(0.5))?.unwrap();
    if !(z_fraction > 0.0 && z_fraction < 1.0) {
        return Err(ConfigError::at(
            s.get("z").map_or(s.line, |e| e.line),
            "z must lie strictly between 0 and 1",
        ));
    }
    let orientation = match s.get("orientation").map(|e| (e.value.as_str(), e.line)) {
        None | Some(("x", _)) => OrientationSelection::X,
        Some(("z", _)) => OrientationSelection::Z,
        Some(("avg", _)) => OrientationSelection::Average,
        Some(("all", _)) => OrientationSelection::All,
        Some((other, line)) => {
            return Err(ConfigError::at(
                line,
                format!("orientation must be x, z, avg or all, got '{other}'"),
            ))
        }
    };
    let omega_a = s.f64_req("omega_a")?;
    if !(omega_a > 0.0) {
        return Err(ConfigError::at(s.required("omega_a")?.line, "omega_a must be positive"));
    }
    let cavity_radius = s.f64_or("cavity_radius", None)?;
    if let Some(r) = cavity_radius {
        if !(r > 0.0) {
            return Err(ConfigError::at(
                s.required("cavity_radius")?.line,
                "cavity_radius must be positive",
            ));
        }
    }
    Ok(DipoleConfig {
        layer,
        z_fraction,
        orientation,
        omega_a,
        cavity_radius,
    })
}

fn parse_sweep(
    doc: &Document,
    materials: &BTreeMap<String, PermittivityModel>,
) -> Result<Option<(SweepConfig, Option<PathBuf>)>> {
    let Some(s) = doc.section("sweep") else {
        return Ok(None);
    };
    s.check_keys(&["axis", "min", "max", "points", "split", "material", "spacing", "output"])?;
    let axis_e = s.required("axis")?;
    let axis = match axis_e.value.as_str() {
        "frequency" => SweepAxis::Frequency,
        "position" => SweepAxis::Position,
        "linewidth" => SweepAxis::Linewidth,
        other => return Err(ConfigError::at(axis_e.line, format!("unknown sweep axis '{other}'"))),
    };
    let min = s.f64_req("min")?;
    let max = s.f64_req("max")?;
    if !(min < max) {
        return Err(ConfigError::at(
            s.required("max")?.line,
            format!("sweep range needs min < max, got [{min}, {max}]"),
        ));
    }
    let points = s.usize_req("points")?;
    if points < 2 {
        return Err(ConfigError::at(
            s.required("points")?.line,
            "sweep needs at least 2 points",
        ));
    }
    let spacing = match s.get("spacing").map(|e| (e.value.as_str(), e.line)) {
        None | Some(("linear", _)) => Spacing::Linear,
        Some(("log", _)) => Spacing::Log,
        Some((other, line)) => {
            return Err(ConfigError::at(
                line,
                format!("spacing must be linear or log, got '{other}'"),
            ))
        }
    };
    if spacing == Spacing::Log && !(min > 0.0) {
        return Err(ConfigError::at(s.required("min")?.line, "log spacing needs min > 0"));
    }
    let material = match (axis, s.get("material")) {
        (SweepAxis::Linewidth, None) => {
            return Err(ConfigError::at(s.line, "missing key 'material' for the linewidth axis"))
        }
        (SweepAxis::Linewidth, Some(e)) => {
            match lookup(materials, &e.value, e.line)? {
                PermittivityModel::DrudeLorentz { .. } => {}
                _ => {
                    return Err(ConfigError::at(
                        e.line,
                        format!("material '{}' has no linewidth", e.value),
                    ))
                }
            }
            Some(e.value.clone())
        }
        (_, Some(e)) => return Err(ConfigError::at(e.line, "'material' only applies to the linewidth axis")),
        (_, None) => None,
    };
    match axis {
        SweepAxis::Frequency if !(min > 0.0) => {
            return Err(ConfigError::at(s.required("min")?.line, "frequencies must be positive"))
        }
        SweepAxis::Position if !(min > 0.0 && max < 1.0) => {
            return Err(ConfigError::at(
                s.required("min")?.line,
                "positions are fractions strictly inside (0, 1)",
            ))
        }
        SweepAxis::Linewidth if min < 0.0 => {
            return Err(ConfigError::at(
                s.required("min")?.line,
                "linewidths must be non-negative",
            ))
        }
        _ => {}
    }
    let output = s.get("output").map(|e| PathBuf::from(&e.value));
    Ok(Some((
        SweepConfig {
            axis,
            min,
            max,
            points,
            spacing,
            split: s.bool_or("split", false)?,
            material,
        },
        output,
    )))
}

fn parse_quadrature(doc: &Document) -> Result<QuadratureConfig> {
    let mut q = QuadratureConfig::default();
    let Some(s) = doc.section("quadrature") else {
        return Ok(q);
    };
    s.check_keys(&["rel_tol", "ellipse_height", "k_cross", "tail_cap", "max_subdivisions"])?;
    q.rel_tol = s.f64_or("rel_tol", Some(q.rel_tol))?.unwrap();
    q.ellipse_height = s.f64_or("ellipse_height", None)?;
    q.k_cross = s.f64_or("k_cross", None)?;
    q.tail_cap = s.f64_or("tail_cap", None)?;
    if s.get("max_subdivisions").is_some() {
        q.max_subdivisions = s.usize_req("max_subdivisions")?;
    }
    q.validate().map_err(|e| ConfigError::at(s.line, e.to_string()))?;
    Ok(q)
}

fn parse_window(s: &Section, lo: &str, hi: &str, n: &str, default_n: usize) -> Result<Option<SearchWindow>> {
    match (s.get(lo), s.get(hi)) {
        (None, None) => Ok(None),
        (Some(_), Some(_)) => {
            let grid = match s.get(n) {
                Some(_) => s.usize_req(n)?,
                None => default_n,
            };
            SearchWindow::new(s.f64_req(lo)?, s.f64_req(hi)?, grid)
                .map(Some)
                .map_err(|e| ConfigError::at(s.line, e.to_string()))
        }
        _ => Err(ConfigError::at(
            s.line,
            format!("{} needs both '{lo}' and '{hi}'", s.label()),
        )),
    }
}

impl RunConfig {
    /// Parses and validates a configuration.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_overrides(text, &[])
    }

    /// Parses a configuration after applying `(dot.path, value)` overrides.
    pub fn parse_with_overrides(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let mut doc = Document::parse(text)?;
        for (path, value) in overrides {
            doc.apply_override(path, value)?;
        }

        let materials = parse_materials(&doc)?;
        let (stack, center) = parse_structure(&doc, &materials)?;
        let dipole = parse_dipole(&doc, &stack, center)?;
        let quadrature = parse_quadrature(&doc)?;
        let (sweep, output) = match parse_sweep(&doc, &materials)? {
            Some((s, o)) => (Some(s), o),
            None => (None, None),
        };

        let switch = match doc.section("switch") {
            None => None,
            Some(s) => {
                let mut switched = doc.clone();
                let mut any = false;
                for e in &s.entries {
                    if e.key.starts_with("material.") {
                        switched
                            .apply_override(&e.key, &e.value)
                            .map_err(|err| ConfigError::at(e.line, err.to_string()))?;
                        any = true;
                    } else if !["window_min", "window_max", "window_points"].contains(&e.key.as_str()) {
                        return Err(ConfigError::at(
                            e.line,
                            format!(
                                "unknown key '{}' in [switch] (expected material.NAME.key overrides)",
                                e.key
                            ),
                        ));
                    }
                }
                if !any {
                    return Err(ConfigError::at(s.line, "[switch] needs at least one material override"));
                }
                let on_materials = parse_materials(&switched)?;
                let mut stack_on = stack.clone();
                for (name, off) in &materials {
                    let on = on_materials[name];
                    if on != *off {
                        stack_on = stack_on.with_material_replaced(off, on);
                    }
                }
                Some(SwitchConfig {
                    stack_on,
                    window: parse_window(s, "window_min", "window_max", "window_points", 41)?,
                })
            }
        };

        let resonance = match doc.section("resonance") {
            None => None,
            Some(s) => {
                s.check_keys(&["min", "max", "grid"])?;
                let w = parse_window(s, "min", "max", "grid", 41)?;
                if w.is_none() {
                    return Err(ConfigError::at(s.line, "missing key 'min' in [resonance]"));
                }
                w
            }
        };

        Ok(RunConfig {
            materials,
            stack,
            dipole,
            sweep,
            quadrature,
            switch,
            resonance,
            output,
        })
    }
}

/// Splits `KEY=VALUE` into a dot path and a value.
pub fn parse_override(arg: &str) -> Result<(String, String)> {
    let (k, v) = arg
        .split_once('=')
        .ok_or_else(|| ConfigError::General(format!("override '{arg}' is not KEY=VALUE")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}
