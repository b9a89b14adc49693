//! Outputs of the `modes`, `conformal` and `selftest` subcommands.

use std::fmt::Write as _;

use ioncosmo_core::cosmo::{
    build_conformal_map, detuning_schedule, lamb_dicke_drift, laser_frequency_schedule, laser_modulation_span,
    window_transform, TimeInterval, WindowSpec,
};
use ioncosmo_core::detector::{response_desitter_finite, response_numeric, DetectorSpec};
use ioncosmo_core::ionchain::{lamb_dicke, normal_modes, IonChainConfig};
use ioncosmo_core::numerics::QuadratureSettings;
use ioncosmo_core::Error;
use serde::Serialize;

use crate::config::{ExperimentConfig, Format};

/// Normal-mode table.
#[derive(Debug, Clone, Serialize)]
pub struct ModesReport {
    /// Equilibrium positions in trap length units.
    pub equilibrium_positions: Vec<f64>,
    /// Eigenvalues μ_p.
    pub eigenvalues_mu: Vec<f64>,
    /// ν_p/ν.
    pub frequencies: Vec<f64>,
    /// Rows of the mode matrix.
    pub mode_matrix: Vec<Vec<f64>>,
    /// 1-based detector ion the weights refer to.
    pub ion_index: usize,
    /// `b²/√μ` per mode for the detector ion.
    pub weights: Vec<f64>,
    /// Lamb-Dicke parameter when a laser wavenumber is configured.
    pub lamb_dicke: Option<f64>,
}

/// Computes the mode table of the configured chain.
pub fn modes_report(cfg: &ExperimentConfig) -> Result<ModesReport, Error> {
    let modes = normal_modes(&cfg.chain)?;
    let n = modes.len();
    let lamb = match cfg.physical.laser_wavenumber {
        Some(k) => Some(lamb_dicke(k, cfg.physical.laser_angle, &cfg.chain)?),
        None => None,
    };
    Ok(ModesReport {
        weights: modes.mode_weights(cfg.detector.ion_index)?,
        mode_matrix: (0..n).map(|p| modes.mode_matrix_b.row(p).to_vec()).collect(),
        equilibrium_positions: modes.equilibrium_positions,
        eigenvalues_mu: modes.eigenvalues_mu,
        frequencies: modes.frequencies,
        ion_index: cfg.detector.ion_index,
        lamb_dicke: lamb,
    })
}

/// Serializes a mode table: one CSV row per mode, or the whole report as JSON.
pub fn emit_modes(r: &ModesReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let n = r.frequencies.len();
            let mut s = String::from("mode,mu,frequency,weight,position");
            for m in 1..=n {
                let _ = write!(s, ",b_ion{m}");
            }
            s.push('\n');
            for p in 0..n {
                let _ = write!(
                    s,
                    "{},{:.16e},{:.16e},{:.16e},{:.16e}",
                    p + 1,
                    r.eigenvalues_mu[p],
                    r.frequencies[p],
                    r.weights[p],
                    r.equilibrium_positions[p]
                );
                for b in &r.mode_matrix[p] {
                    let _ = write!(s, ",{b:.16e}");
                }
                s.push('\n');
            }
            s
        }
    }
}

/// Conformal-time table over the detector window.
#[derive(Debug, Clone, Serialize)]
pub struct ConformalReport {
    /// Total laser frequency excursion `|Δ|(a(t_final) − a(t_init))`.
    pub laser_modulation_span: f64,
    /// Sample rows.
    pub rows: Vec<ConformalRow>,
}

/// One sample of the conformal map and the detector schedules.
#[derive(Debug, Clone, Serialize)]
pub struct ConformalRow {
    /// Cosmic time.
    pub t: f64,
    /// Conformal time.
    pub chi: f64,
    /// Scale factor.
    pub a: f64,
    /// `Δ(χ)`.
    pub detuning: f64,
    /// `F(χ)`.
    pub window: f64,
    /// `ω_L(χ)` when the atomic frequency is configured.
    pub laser_frequency: Option<f64>,
    /// `η(χ)/η` when the atomic frequency is configured.
    pub lamb_dicke_ratio: Option<f64>,
}

/// Tabulates the map and schedules at `points` evenly spaced cosmic times.
pub fn conformal_report(cfg: &ExperimentConfig, points: usize) -> Result<ConformalReport, Error> {
    let w = cfg.detector.window;
    let map = build_conformal_map(&cfg.cosmology.model()?, TimeInterval::new(w.t_init, w.t_final)?)?;
    let base = cfg.detector.detuning;
    let delta = detuning_schedule(&map, base);
    let window = window_transform(&cfg.detector.window, &map, cfg.detector.n_dim)?;
    let laser = cfg
        .physical
        .atomic_frequency
        .map(|wa| laser_frequency_schedule(&map, base, wa));
    let drift = match cfg.physical.atomic_frequency {
        Some(wa) => Some(lamb_dicke_drift(&map, base, wa - base)?),
        None => None,
    };
    let points = points.max(2);
    let mut rows = Vec::with_capacity(points);
    for k in 0..points {
        let t = if k == points - 1 {
            w.t_final
        } else {
            w.t_init + (w.t_final - w.t_init) * k as f64 / (points - 1) as f64
        };
        let chi = map.chi(t)?;
        rows.push(ConformalRow {
            t,
            chi,
            a: map.scale_factor(t)?,
            detuning: delta(chi)?,
            window: window(chi)?,
            laser_frequency: laser.as_ref().map(|f| f(chi)).transpose()?,
            lamb_dicke_ratio: drift.as_ref().map(|f| f(chi)).transpose()?,
        });
    }
    Ok(ConformalReport {
        laser_modulation_span: laser_modulation_span(&map, base, w.t_init, w.t_final)?,
        rows,
    })
}

/// Serializes a conformal table.
pub fn emit_conformal(r: &ConformalReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.16e}"));
            let mut s = String::from("t,chi,a,detuning,window,laser_frequency,lamb_dicke_ratio\n");
            for row in &r.rows {
                let _ = writeln!(
                    s,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
                    row.t,
                    row.chi,
                    row.a,
                    row.detuning,
                    row.window,
                    opt(row.laser_frequency),
                    opt(row.lamb_dicke_ratio)
                );
            }
            s
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// One point of the quadrature-vs-closed-form check.
#[derive(Debug, Clone, Serialize)]
pub struct SelftestPoint {
    /// Expansion rate.
    pub kappa: f64,
    /// Detuning.
    pub detuning: f64,
    /// Window length in e-folds.
    pub kappa_t: f64,
    /// Relative gap, or `None` when either side failed.
    pub gap: Option<f64>,
    /// Whether the gap is within tolerance.
    pub pass: bool,
}

/// Compares quadrature against the finite-window closed form on the
/// κ ∈ {0.05, 0.2, 0.5}, Δ ∈ {±0.5, ±1, ±2}, κT ∈ {2, 5, 10} grid for
/// ion 1 of a three-ion chain.
pub fn selftest(settings: &QuadratureSettings, tolerance: f64) -> Result<Vec<SelftestPoint>, Error> {
    let modes = normal_modes(&IonChainConfig::calcium(3))?;
    let mut out = Vec::new();
    for kappa in [0.05, 0.2, 0.5] {
        for detuning in [0.5, -0.5, 1.0, -1.0, 2.0, -2.0] {
            for kappa_t in [2.0, 5.0, 10.0] {
                let t_final = kappa_t / kappa;
                let gap = (|| -> Result<f64, Error> {
                    let spec = DetectorSpec {
                        ion_index: 1,
                        detuning,
                        coupling: 1.0,
                        n_dim: 2,
                        window: WindowSpec::rectangular(0.0, t_final)?,
                    };
                    let model = ioncosmo_core::cosmo::ScaleFactorModel::DeSitter { kappa };
                    let map = build_conformal_map(&model, TimeInterval::new(0.0, t_final)?)?;
                    let num = response_numeric(&modes, &spec, &map, settings)?.total;
                    let fin = response_desitter_finite(&modes, &spec, kappa, 0.0, t_final)?.total;
                    Ok((num - fin).abs() / fin.abs())
                })()
                .ok();
                out.push(SelftestPoint {
                    kappa,
                    detuning,
                    kappa_t,
                    gap,
                    pass: gap.is_some_and(|g| g <= tolerance),
                });
            }
        }
    }
    Ok(out)
}
