//! `key = value` experiment configuration.
//!
//! One assignment per line, `#` starts a comment, keys carry a dotted
//! section prefix. Every key is optional; see [`ExperimentConfig::default`].
//!
//! ```text
//! chain.n_ions = 3
//! detector.detuning = 1.0
//! detector.t_final = 25
//! cosmology.kind = de_sitter
//! cosmology.kappa = 0.2
//! sweep.axis = detuning
//! sweep.min = 0.5
//! sweep.max = 2
//! sweep.count = 4
//! methods = numeric, analytic_finite
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use ioncosmo_core::cosmo::{
    CosmoError, ScaleFactorModel, TabulatedScaleFactor, WindowShape, WindowSpec, DEFAULT_RAMP_FRACTION,
};
use ioncosmo_core::detector::{DetectorSpec, ResponseMethod};
use ioncosmo_core::ionchain::IonChainConfig;
use ioncosmo_core::numerics::QuadratureSettings;
use thiserror::Error;

/// What went wrong with a config key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigErrorKind {
    /// The line is not `key = value`.
    Syntax,
    /// The key is not recognized.
    UnknownKey,
    /// The value does not parse as the expected type.
    TypeMismatch(&'static str),
    /// The value parses but breaks an invariant.
    InvariantViolation(String),
}

/// First problem found in a config file. `line` is 1-based, 0 when the
/// offending value was a default.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {key}: {}", describe(.kind))]
pub struct ConfigError {
    /// Line of the offending assignment.
    pub line: usize,
    /// Key concerned.
    pub key: String,
    /// Category and detail.
    pub kind: ConfigErrorKind,
}

fn describe(kind: &ConfigErrorKind) -> String {
    match kind {
        ConfigErrorKind::Syntax => "expected `key = value`".into(),
        ConfigErrorKind::UnknownKey => "unknown key".into(),
        ConfigErrorKind::TypeMismatch(want) => format!("type mismatch, expected {want}"),
        ConfigErrorKind::InvariantViolation(msg) => format!("invariant violation: {msg}"),
    }
}

/// Scale-factor description as written in the config.
#[derive(Debug, Clone, PartialEq)]
pub enum CosmologyConfig {
    /// `a ≡ 1`.
    Flat,
    /// `a = e^{κt}`.
    DeSitter {
        /// Expansion rate.
        kappa: f64,
    },
    /// `a = (t/t₀)^q`.
    PowerLaw {
        /// Exponent q.
        exponent: f64,
        /// Reference time.
        t0: f64,
    },
    /// Sampled `(t, a)` with a conformal-time anchor.
    Tabulated {
        /// Samples, strictly increasing in `t`.
        samples: Vec<(f64, f64)>,
        /// Anchor time.
        anchor_time: f64,
        /// Conformal time at the anchor.
        anchor_chi: f64,
    },
}

impl CosmologyConfig {
    /// Core model for this description.
    pub fn model(&self) -> Result<ScaleFactorModel, CosmoError> {
        let model = match self {
            Self::Flat => ScaleFactorModel::Flat,
            Self::DeSitter { kappa } => ScaleFactorModel::DeSitter { kappa: *kappa },
            Self::PowerLaw { exponent, t0 } => ScaleFactorModel::PowerLaw {
                exponent: *exponent,
                t0: *t0,
            },
            Self::Tabulated {
                samples,
                anchor_time,
                anchor_chi,
            } => ScaleFactorModel::Tabulated(TabulatedScaleFactor::new(samples, *anchor_time, *anchor_chi)?),
        };
        model.validate()?;
        Ok(model)
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Self::Flat => "flat",
            Self::DeSitter { .. } => "de_sitter",
            Self::PowerLaw { .. } => "power_law",
            Self::Tabulated { .. } => "tabulated",
        }
    }

    /// Expansion rate when de Sitter.
    pub fn kappa(&self) -> Option<f64> {
        match self {
            Self::DeSitter { kappa } => Some(*kappa),
            _ => None,
        }
    }
}

/// Quantity varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// `detector.detuning`.
    Detuning,
    /// `cosmology.kappa` (de Sitter only).
    Kappa,
    /// `detector.t_final`.
    TFinal,
}

impl SweepAxis {
    /// Config spelling, also the CSV column name.
    pub fn name(self) -> &'static str {
        match self {
            Self::Detuning => "detuning",
            Self::Kappa => "kappa",
            Self::TFinal => "t_final",
        }
    }
}

/// Grid point spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    /// Evenly spaced.
    Linear,
    /// Geometric.
    Log,
}

/// Sweep grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Varied quantity.
    pub axis: SweepAxis,
    /// First grid value.
    pub min: f64,
    /// Last grid value.
    pub max: f64,
    /// Number of points.
    pub count: usize,
    /// Spacing.
    pub spacing: Spacing,
}

impl SweepSpec {
    /// Grid values, `min` and `max` included exactly.
    pub fn grid(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k == 0 {
                    return self.min;
                }
                if k == self.count - 1 {
                    return self.max;
                }
                let s = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + s * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + s * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    /// Comma-separated values with a header row.
    #[default]
    Csv,
    /// Single JSON document.
    Json,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

/// Laboratory parameters used only for unit conversions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    /// Laser wavenumber in 1/m, if known.
    pub laser_wavenumber: Option<f64>,
    /// Laser angle to the trap axis in rad.
    pub laser_angle: f64,
    /// Atomic transition frequency in units of ν, if known.
    pub atomic_frequency: Option<f64>,
}

/// Complete experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Ion chain.
    pub chain: IonChainConfig,
    /// Detector at the base point of the sweep.
    pub detector: DetectorSpec,
    /// Scale factor.
    pub cosmology: CosmologyConfig,
    /// Optional sweep; without it a run is a single point.
    pub sweep: Option<SweepSpec>,
    /// Output file, if not stdout.
    pub output_path: Option<PathBuf>,
    /// Output format.
    pub output_format: Format,
    /// Requested methods in canonical order.
    pub methods: Vec<ResponseMethod>,
    /// Quadrature settings for the numeric method.
    pub quadrature: QuadratureSettings,
    /// Laboratory parameters.
    pub physical: PhysicalConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            chain: IonChainConfig::calcium(2),
            detector: DetectorSpec {
                ion_index: 1,
                detuning: 1.0,
                coupling: 1.0,
                n_dim: 2,
                window: WindowSpec {
                    t_init: 0.0,
                    t_final: 10.0,
                    shape: WindowShape::Rectangular,
                },
            },
            cosmology: CosmologyConfig::Flat,
            sweep: None,
            output_path: None,
            output_format: Format::Csv,
            methods: vec![ResponseMethod::Numeric],
            quadrature: QuadratureSettings::default(),
            physical: PhysicalConfig {
                laser_wavenumber: None,
                laser_angle: 0.0,
                atomic_frequency: None,
            },
        }
    }
}

const KEYS: &[&str] = &[
    "chain.n_ions",
    "detector.ion_index",
    "detector.detuning",
    "detector.coupling",
    "detector.n_dim",
    "detector.window",
    "detector.ramp_fraction",
    "detector.t_init",
    "detector.t_final",
    "cosmology.kind",
    "cosmology.kappa",
    "cosmology.exponent",
    "cosmology.t0",
    "cosmology.table",
    "cosmology.anchor_time",
    "cosmology.anchor_chi",
    "sweep.axis",
    "sweep.min",
    "sweep.max",
    "sweep.count",
    "sweep.spacing",
    "output.path",
    "output.format",
    "methods",
    "quadrature.rel_tol",
    "quadrature.abs_tol",
    "quadrature.max_depth",
    "physical.trap_frequency_hz",
    "physical.ion_mass_kg",
    "physical.laser_wavenumber",
    "physical.laser_angle",
    "physical.atomic_frequency",
];

struct Entries {
    values: BTreeMap<&'static str, (String, usize)>,
}

impl Entries {
    fn line(&self, key: &str) -> usize {
        self.values.get(key).map_or(0, |v| v.1)
    }

    fn raw(&self, key: &'static str) -> Option<(&str, usize)> {
        self.values.get(key).map(|(v, l)| (v.as_str(), *l))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &'static str, want: &'static str) -> Result<Option<T>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => v.parse().map(Some).map_err(|_| ConfigError {
                line,
                key: key.into(),
                kind: ConfigErrorKind::TypeMismatch(want),
            }),
        }
    }

    fn real(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        let v: Option<f64> = self.parsed(key, "real number")?;
        match v {
            Some(x) if !x.is_finite() => Err(self.violation(key, "must be finite")),
            other => Ok(other),
        }
    }

    fn integer(&self, key: &'static str) -> Result<Option<usize>, ConfigError> {
        self.parsed(key, "non-negative integer")
    }

    fn choice<T: Copy>(
        &self,
        key: &'static str,
        options: &[(&str, T)],
        want: &'static str,
    ) -> Result<Option<T>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => options
                .iter()
                .find(|(name, _)| *name == v)
                .map(|(_, x)| Some(*x))
                .ok_or(ConfigError {
                    line,
                    key: key.into(),
                    kind: ConfigErrorKind::TypeMismatch(want),
                }),
        }
    }

    fn violation(&self, key: &str, msg: impl Into<String>) -> ConfigError {
        ConfigError {
            line: self.line(key),
            key: key.into(),
            kind: ConfigErrorKind::InvariantViolation(msg.into()),
        }
    }
}

fn tokenize(text: &str) -> Result<Entries, ConfigError> {
    let mut values = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError {
                line,
                key: content.into(),
                kind: ConfigErrorKind::Syntax,
            });
        };
        let key = key.trim();
        let mut value = value.trim();
        if value.len() >= 2 && value.starts_with('"') && value.ends_with('"') {
            value = &value[1..value.len() - 1];
        }
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(ConfigError {
                line,
                key: key.into(),
                kind: ConfigErrorKind::UnknownKey,
            });
        };
        if values.insert(known, (value.to_string(), line)).is_some() {
            return Err(ConfigError {
                line,
                key: key.into(),
                kind: ConfigErrorKind::InvariantViolation("key given twice".into()),
            });
        }
    }
    Ok(Entries { values })
}

fn parse_table(e: &Entries) -> Result<Option<Vec<(f64, f64)>>, ConfigError> {
    let Some((v, line)) = e.raw("cosmology.table") else {
        return Ok(None);
    };
    let mismatch = || ConfigError {
        line,
        key: "cosmology.table".into(),
        kind: ConfigErrorKind::TypeMismatch("comma-separated t:a pairs"),
    };
    v.split(',')
        .map(|pair| {
            let (t, a) = pair.split_once(':').ok_or_else(mismatch)?;
            let t: f64 = t.trim().parse().map_err(|_| mismatch())?;
            let a: f64 = a.trim().parse().map_err(|_| mismatch())?;
            Ok((t, a))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn parse_methods(e: &Entries) -> Result<Option<Vec<ResponseMethod>>, ConfigError> {
    let Some((v, line)) = e.raw("methods") else {
        return Ok(None);
    };
    let mut out = Vec::new();
    for name in v.split(',').map(str::trim) {
        let m = ResponseMethod::from_name(name).ok_or(ConfigError {
            line,
            key: "methods".into(),
            kind: ConfigErrorKind::TypeMismatch("numeric, analytic_infinite or analytic_finite"),
        })?;
        out.push(m);
    }
    out.sort();
    out.dedup();
    Ok(Some(out))
}

/// Parses and validates a config.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let e = tokenize(text)?;
    let mut cfg = ExperimentConfig::default();

    if let Some(n) = e.integer("chain.n_ions")? {
        cfg.chain.n_ions = n;
    }
    if let Some(f) = e.real("physical.trap_frequency_hz")? {
        cfg.chain.trap_frequency = f;
    }
    if let Some(m) = e.real("physical.ion_mass_kg")? {
        cfg.chain.ion_mass = m;
    }
    if let Err(err) = cfg.chain.validate() {
        let key = if e.line("chain.n_ions") > 0 || cfg.chain.n_ions < 2 || cfg.chain.n_ions > 32 {
            "chain.n_ions"
        } else if cfg.chain.trap_frequency > 0.0 {
            "physical.ion_mass_kg"
        } else {
            "physical.trap_frequency_hz"
        };
        return Err(e.violation(key, err.to_string()));
    }

    let d = &mut cfg.detector;
    if let Some(i) = e.integer("detector.ion_index")? {
        d.ion_index = i;
    }
    if let Some(x) = e.real("detector.detuning")? {
        d.detuning = x;
    }
    if let Some(x) = e.real("detector.coupling")? {
        d.coupling = x;
    }
    if let Some(n) = e.parsed::<u32>("detector.n_dim", "integer")? {
        d.n_dim = n;
    }
    if let Some(x) = e.real("detector.t_init")? {
        d.window.t_init = x;
    }
    if let Some(x) = e.real("detector.t_final")? {
        d.window.t_final = x;
    }
    let tukey = e.choice(
        "detector.window",
        &[("rectangular", false), ("tukey", true)],
        "rectangular or tukey",
    )?;
    let ramp = e.real("detector.ramp_fraction")?;
    d.window.shape = match (tukey.unwrap_or(false), ramp) {
        (true, r) => WindowShape::Tukey {
            ramp_fraction: r.unwrap_or(DEFAULT_RAMP_FRACTION),
        },
        (false, None) => WindowShape::Rectangular,
        (false, Some(_)) => {
            return Err(e.violation("detector.ramp_fraction", "only a tukey window has a ramp"));
        }
    };

    if d.ion_index < 1 || d.ion_index > cfg.chain.n_ions {
        return Err(e.violation("detector.ion_index", "must be between 1 and chain.n_ions"));
    }
    if !(d.detuning != 0.0) {
        return Err(e.violation("detector.detuning", "must be non-zero"));
    }
    if !(d.coupling > 0.0) {
        return Err(e.violation("detector.coupling", "must be positive"));
    }
    if d.n_dim < 2 {
        return Err(e.violation("detector.n_dim", "must be at least 2"));
    }
    if !(d.window.t_final > d.window.t_init) {
        return Err(e.violation("detector.t_final", "must exceed detector.t_init"));
    }
    if let Err(err) = d.window.validate() {
        return Err(e.violation("detector.ramp_fraction", err.to_string()));
    }

    let kind = e.choice(
        "cosmology.kind",
        &[("flat", 0u8), ("de_sitter", 1), ("power_law", 2), ("tabulated", 3)],
        "flat, de_sitter, power_law or tabulated",
    )?;
    let kappa = e.real("cosmology.kappa")?;
    let exponent = e.real("cosmology.exponent")?;
    let t0 = e.real("cosmology.t0")?;
    let table = parse_table(&e)?;
    let anchor_time = e.real("cosmology.anchor_time")?;
    let anchor_chi = e.real("cosmology.anchor_chi")?;
    let stray = |present: bool, key: &str, kind: &str| {
        if present {
            Err(e.violation(key, format!("not used by cosmology.kind = {kind}")))
        } else {
            Ok(())
        }
    };
    cfg.cosmology = match kind.unwrap_or(0) {
        0 => CosmologyConfig::Flat,
        1 => CosmologyConfig::DeSitter {
            kappa: kappa.ok_or_else(|| e.violation("cosmology.kappa", "required for de_sitter"))?,
        },
        2 => CosmologyConfig::PowerLaw {
            exponent: exponent.ok_or_else(|| e.violation("cosmology.exponent", "required for power_law"))?,
            t0: t0.unwrap_or(1.0),
        },
        _ => {
            let samples = table
                .clone()
                .ok_or_else(|| e.violation("cosmology.table", "required for tabulated"))?;
            let first = samples.first().map_or(0.0, |s| s.0);
            CosmologyConfig::Tabulated {
                samples,
                anchor_time: anchor_time.unwrap_or(first),
                anchor_chi: anchor_chi.unwrap_or(0.0),
            }
        }
    };
    let kind_name = cfg.cosmology.kind_name();
    stray(kappa.is_some() && kind != Some(1), "cosmology.kappa", kind_name)?;
    stray(exponent.is_some() && kind != Some(2), "cosmology.exponent", kind_name)?;
    stray(t0.is_some() && kind != Some(2), "cosmology.t0", kind_name)?;
    stray(table.is_some() && kind != Some(3), "cosmology.table", kind_name)?;
    stray(
        anchor_time.is_some() && kind != Some(3),
        "cosmology.anchor_time",
        kind_name,
    )?;
    stray(
        anchor_chi.is_some() && kind != Some(3),
        "cosmology.anchor_chi",
        kind_name,
    )?;
    let model_key = match kind.unwrap_or(0) {
        1 => "cosmology.kappa",
        2 => "cosmology.t0",
        3 => "cosmology.table",
        _ => "cosmology.kind",
    };
    if let Err(err) = cfg.cosmology.model() {
        return Err(e.violation(model_key, err.to_string()));
    }
    if let CosmologyConfig::PowerLaw { .. } = cfg.cosmology {
        if cfg.detector.window.t_init <= 0.0 {
            return Err(e.violation("detector.t_init", "power_law needs t_init > 0"));
        }
    }
    if let CosmologyConfig::Tabulated { samples, .. } = &cfg.cosmology {
        let (lo, hi) = (samples[0].0, samples[samples.len() - 1].0);
        if cfg.detector.window.t_init < lo || cfg.detector.window.t_final > hi {
            return Err(e.violation("detector.t_final", "window must lie inside cosmology.table"));
        }
    }

    let axis = e.choice(
        "sweep.axis",
        &[
            ("detuning", SweepAxis::Detuning),
            ("kappa", SweepAxis::Kappa),
            ("t_final", SweepAxis::TFinal),
        ],
        "detuning, kappa or t_final",
    )?;
    let spacing = e.choice(
        "sweep.spacing",
        &[("linear", Spacing::Linear), ("log", Spacing::Log)],
        "linear or log",
    )?;
    let min = e.real("sweep.min")?;
    let max = e.real("sweep.max")?;
    let count = e.integer("sweep.count")?;
    cfg.sweep = match axis {
        None => {
            for key in ["sweep.spacing", "sweep.min", "sweep.max", "sweep.count"] {
                if e.line(key) > 0 {
                    return Err(e.violation(key, "sweep.axis is not set"));
                }
            }
            None
        }
        Some(axis) => {
            let count = count.unwrap_or(1);
            let min = min.ok_or_else(|| e.violation("sweep.min", "required with sweep.axis"))?;
            let max = max.unwrap_or(min);
            let spec = SweepSpec {
                axis,
                min,
                max,
                count,
                spacing: spacing.unwrap_or(Spacing::Linear),
            };
            if count < 1 {
                return Err(e.violation("sweep.count", "must be at least 1"));
            }
            if count > 1 && !(min < max) {
                return Err(e.violation("sweep.max", "must exceed sweep.min"));
            }
            if spec.spacing == Spacing::Log && !(min > 0.0) {
                return Err(e.violation("sweep.min", "log spacing needs a positive range"));
            }
            check_axis(&cfg, &spec).map_err(|msg| e.violation("sweep.axis", msg))?;
            Some(spec)
        }
    };

    if let Some((v, _)) = e.raw("output.path") {
        cfg.output_path = Some(PathBuf::from(v));
    }
    if let Some(f) = e.choice(
        "output.format",
        &[("csv", Format::Csv), ("json", Format::Json)],
        "csv or json",
    )? {
        cfg.output_format = f;
    }
    if let Some(m) = parse_methods(&e)? {
        cfg.methods = m;
    }
    for m in &cfg.methods {
        let analytic = *m != ResponseMethod::Numeric;
        if analytic && cfg.cosmology.kappa().is_none() {
            return Err(e.violation("methods", format!("{} needs cosmology.kind = de_sitter", m.name())));
        }
        if analytic && cfg.detector.n_dim != 2 {
            return Err(e.violation("methods", format!("{} needs detector.n_dim = 2", m.name())));
        }
        if *m == ResponseMethod::AnalyticFinite && cfg.detector.window.shape != WindowShape::Rectangular {
            return Err(e.violation("methods", "analytic_finite needs a rectangular window"));
        }
    }

    let q = &mut cfg.quadrature;
    if let Some(x) = e.real("quadrature.rel_tol")? {
        q.rel_tol = x;
    }
    if let Some(x) = e.real("quadrature.abs_tol")? {
        q.abs_tol = x;
    }
    if let Some(x) = e.parsed::<u32>("quadrature.max_depth", "integer")? {
        q.max_depth = x;
    }
    if !(q.rel_tol > 0.0) {
        return Err(e.violation("quadrature.rel_tol", "must be positive"));
    }
    if !(q.abs_tol > 0.0) {
        return Err(e.violation("quadrature.abs_tol", "must be positive"));
    }
    if q.max_depth < 1 {
        return Err(e.violation("quadrature.max_depth", "must be at least 1"));
    }

    let p = &mut cfg.physical;
    p.laser_wavenumber = e.real("physical.laser_wavenumber")?;
    if let Some(a) = e.real("physical.laser_angle")? {
        p.laser_angle = a;
    }
    p.atomic_frequency = e.real("physical.atomic_frequency")?;
    if p.laser_wavenumber.is_some_and(|k| k <= 0.0) {
        return Err(e.violation("physical.laser_wavenumber", "must be positive"));
    }
    if p.atomic_frequency.is_some_and(|w| w <= 0.0) {
        return Err(e.violation("physical.atomic_frequency", "must be positive"));
    }

    Ok(cfg)
}

fn check_axis(cfg: &ExperimentConfig, spec: &SweepSpec) -> Result<(), String> {
    let lo = spec.min.min(spec.max);
    match spec.axis {
        SweepAxis::Detuning => {
            if spec.grid().contains(&0.0) {
                return Err("detuning grid must not contain zero".into());
            }
        }
        SweepAxis::Kappa => {
            if cfg.cosmology.kappa().is_none() {
                return Err("kappa sweeps need cosmology.kind = de_sitter".into());
            }
            if !(lo > 0.0) {
                return Err("kappa grid must be positive".into());
            }
        }
        SweepAxis::TFinal => {
            if !(lo > cfg.detector.window.t_init) {
                return Err("t_final grid must exceed detector.t_init".into());
            }
            if let CosmologyConfig::Tabulated { samples, .. } = &cfg.cosmology {
                if spec.min.max(spec.max) > samples[samples.len() - 1].0 {
                    return Err("t_final grid must lie inside cosmology.table".into());
                }
            }
        }
    }
    Ok(())
}

/// Canonical text form of a config; [`parse_config`] reads it back to an
/// equal value.
pub fn emit_config(cfg: &ExperimentConfig) -> String {
    let mut s = String::new();
    let mut put = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    put("chain.n_ions", cfg.chain.n_ions.to_string());
    let d = &cfg.detector;
    put("detector.ion_index", d.ion_index.to_string());
    put("detector.detuning", format!("{:?}", d.detuning));
    put("detector.coupling", format!("{:?}", d.coupling));
    put("detector.n_dim", d.n_dim.to_string());
    put("detector.t_init", format!("{:?}", d.window.t_init));
    put("detector.t_final", format!("{:?}", d.window.t_final));
    match d.window.shape {
        WindowShape::Rectangular => put("detector.window", "rectangular".into()),
        WindowShape::Tukey { ramp_fraction } => {
            put("detector.window", "tukey".into());
            put("detector.ramp_fraction", format!("{ramp_fraction:?}"));
        }
    }
    put("cosmology.kind", cfg.cosmology.kind_name().into());
    match &cfg.cosmology {
        CosmologyConfig::Flat => {}
        CosmologyConfig::DeSitter { kappa } => put("cosmology.kappa", format!("{kappa:?}")),
        CosmologyConfig::PowerLaw { exponent, t0 } => {
            put("cosmology.exponent", format!("{exponent:?}"));
            put("cosmology.t0", format!("{t0:?}"));
        }
        CosmologyConfig::Tabulated {
            samples,
            anchor_time,
            anchor_chi,
        } => {
            let table: Vec<String> = samples.iter().map(|(t, a)| format!("{t:?}:{a:?}")).collect();
            put("cosmology.table", table.join(", "));
            put("cosmology.anchor_time", format!("{anchor_time:?}"));
            put("cosmology.anchor_chi", format!("{anchor_chi:?}"));
        }
    }
    if let Some(sw) = &cfg.sweep {
        put("sweep.axis", sw.axis.name().into());
        put("sweep.min", format!("{:?}", sw.min));
        put("sweep.max", format!("{:?}", sw.max));
        put("sweep.count", sw.count.to_string());
        put(
            "sweep.spacing",
            match sw.spacing {
                Spacing::Linear => "linear",
                Spacing::Log => "log",
            }
            .into(),
        );
    }
    if let Some(p) = &cfg.output_path {
        put("output.path", format!("\"{}\"", p.display()));
    }
    put("output.format", cfg.output_format.name().into());
    let methods: Vec<&str> = cfg.methods.iter().map(|m| m.name()).collect();
    put("methods", methods.join(", "));
    put("quadrature.rel_tol", format!("{:?}", cfg.quadrature.rel_tol));
    put("quadrature.abs_tol", format!("{:?}", cfg.quadrature.abs_tol));
    put("quadrature.max_depth", cfg.quadrature.max_depth.to_string());
    put("physical.trap_frequency_hz", format!("{:?}", cfg.chain.trap_frequency));
    put("physical.ion_mass_kg", format!("{:?}", cfg.chain.ion_mass));
    if let Some(k) = cfg.physical.laser_wavenumber {
        put("physical.laser_wavenumber", format!("{k:?}"));
    }
    put("physical.laser_angle", format!("{:?}", cfg.physical.laser_angle));
    if let Some(w) = cfg.physical.atomic_frequency {
        put("physical.atomic_frequency", format!("{w:?}"));
    }
    s
}
