//! Grid evaluation of detector responses.

use std::f64::consts::PI;

use ioncosmo_core::cosmo::{build_conformal_map, TimeInterval};
use ioncosmo_core::detector::{
    gibbons_hawking_temperature, ratio_signature, response_desitter_finite, response_desitter_infinite,
    response_numeric, DetectorSpec, ResponseMethod, ResponseResult,
};
use ioncosmo_core::ionchain::{normal_modes, NormalModes};
use ioncosmo_core::Error;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{emit_config, CosmologyConfig, ExperimentConfig, SweepAxis};

/// One method's numbers at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodValues {
    /// Method that produced the numbers.
    pub method: String,
    /// Excitation probability.
    pub total: f64,
    /// Per-mode contributions, ascending in mode frequency.
    pub per_mode: Vec<f64>,
}

/// One grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    /// Value of the swept quantity.
    pub axis_value: f64,
    /// One entry per requested method, in request order; empty on failure.
    pub results: Vec<MethodValues>,
    /// Red/blue ratio `A(Δ)/A(−Δ)` by `metadata.ratio_method`.
    pub ratio: Option<f64>,
    /// `e^{−2πΔ/κ}` for de Sitter.
    pub boltzmann: Option<f64>,
    /// Gibbons-Hawking temperature κ/2π for de Sitter.
    pub temperature: Option<f64>,
    /// Relative gap between numeric and analytic_finite totals.
    pub gap: Option<f64>,
    /// Absolute error estimate of the numeric total.
    pub quadrature_error: Option<f64>,
    /// Failure message; all numeric fields are empty when set.
    pub error: Option<String>,
}

/// Run description stored with the rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    /// Program version.
    pub version: String,
    /// Only set when supplied by the caller, so runs stay byte-identical.
    pub timestamp: Option<String>,
    /// Swept quantity.
    pub axis: String,
    /// Requested methods.
    pub methods: Vec<String>,
    /// Method used for the `ratio` column.
    pub ratio_method: String,
    /// Number of normal modes.
    pub n_modes: usize,
    /// True for n > 2: the window carries the extra scale-factor powers but
    /// the response formula is the two-dimensional one.
    pub dimension_extension: bool,
    /// Canonical form of the config that produced the rows, without the
    /// output path.
    pub config: String,
}

/// Rows in grid order plus metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Run description.
    pub metadata: Metadata,
    /// One row per grid point.
    pub rows: Vec<Row>,
}

/// Method used for the ratio column: the cheapest requested one.
pub fn ratio_method(methods: &[ResponseMethod]) -> ResponseMethod {
    [
        ResponseMethod::AnalyticFinite,
        ResponseMethod::AnalyticInfinite,
        ResponseMethod::Numeric,
    ]
    .into_iter()
    .find(|m| methods.contains(m))
    .unwrap_or(ResponseMethod::Numeric)
}

/// Grid values of the run: the sweep grid, or the base detuning alone.
pub fn axis_grid(cfg: &ExperimentConfig) -> (SweepAxis, Vec<f64>) {
    match &cfg.sweep {
        Some(s) => (s.axis, s.grid()),
        None => (SweepAxis::Detuning, vec![cfg.detector.detuning]),
    }
}

/// Normal modes of the configured chain.
pub fn chain_modes(cfg: &ExperimentConfig) -> Result<NormalModes, Error> {
    Ok(normal_modes(&cfg.chain)?)
}

/// Evaluates every grid point, concurrently, keeping grid order. Point
/// failures end up in the row's `error` field.
pub fn run_sweep(cfg: &ExperimentConfig, timestamp: Option<String>) -> Result<SweepResult, Error> {
    let modes = chain_modes(cfg)?;
    let (axis, grid) = axis_grid(cfg);
    let rows: Vec<Row> = grid.par_iter().map(|&v| evaluate_point(cfg, &modes, axis, v)).collect();
    Ok(SweepResult {
        metadata: Metadata {
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            axis: axis.name().to_string(),
            methods: cfg.methods.iter().map(|m| m.name().to_string()).collect(),
            ratio_method: ratio_method(&cfg.methods).name().to_string(),
            n_modes: modes.len(),
            dimension_extension: cfg.detector.n_dim > 2,
            config: emit_config(&ExperimentConfig {
                output_path: None,
                ..cfg.clone()
            }),
        },
        rows,
    })
}

/// Detector and cosmology at one grid point.
pub fn point_setup(cfg: &ExperimentConfig, axis: SweepAxis, value: f64) -> (DetectorSpec, CosmologyConfig) {
    let mut det = cfg.detector;
    let mut cosmo = cfg.cosmology.clone();
    match axis {
        SweepAxis::Detuning => det.detuning = value,
        SweepAxis::Kappa => cosmo = CosmologyConfig::DeSitter { kappa: value },
        SweepAxis::TFinal => det.window.t_final = value,
    }
    (det, cosmo)
}

fn respond(
    cfg: &ExperimentConfig,
    modes: &NormalModes,
    det: &DetectorSpec,
    cosmo: &CosmologyConfig,
    method: ResponseMethod,
) -> Result<ResponseResult, Error> {
    let w = det.window;
    match method {
        ResponseMethod::Numeric => {
            let map = build_conformal_map(&cosmo.model()?, TimeInterval::new(w.t_init, w.t_final)?)?;
            response_numeric(modes, det, &map, &cfg.quadrature)
        }
        ResponseMethod::AnalyticInfinite => response_desitter_infinite(modes, det, desitter_kappa(cosmo)?),
        ResponseMethod::AnalyticFinite => {
            response_desitter_finite(modes, det, desitter_kappa(cosmo)?, w.t_init, w.t_final)
        }
    }
}

fn desitter_kappa(cosmo: &CosmologyConfig) -> Result<f64, Error> {
    cosmo
        .kappa()
        .ok_or(Error::InvalidDetector("analytic methods need a de Sitter cosmology"))
}

fn evaluate_point(cfg: &ExperimentConfig, modes: &NormalModes, axis: SweepAxis, value: f64) -> Row {
    let (det, cosmo) = point_setup(cfg, axis, value);
    let kappa = cosmo.kappa();
    let mut row = Row {
        axis_value: value,
        results: Vec::new(),
        ratio: None,
        boltzmann: kappa.map(|k| (-2.0 * PI * det.detuning / k).exp()),
        temperature: kappa.map(gibbons_hawking_temperature),
        gap: None,
        quadrature_error: None,
        error: None,
    };
    let outcome = (|| -> Result<(), Error> {
        let mut results = Vec::with_capacity(cfg.methods.len());
        for &m in &cfg.methods {
            let r = respond(cfg, modes, &det, &cosmo, m)?;
            if m == ResponseMethod::Numeric {
                row.quadrature_error = Some(r.quadrature_error);
            }
            results.push(r);
        }
        let rm = ratio_method(&cfg.methods);
        row.ratio = Some(match rm {
            ResponseMethod::AnalyticFinite => ratio_signature(
                modes,
                &det,
                desitter_kappa(&cosmo)?,
                det.window.t_init,
                det.window.t_final,
            )?,
            _ => {
                let fwd = results
                    .iter()
                    .find(|r| r.method == rm)
                    .map(|r| r.total)
                    .unwrap_or(f64::NAN);
                let back = respond(cfg, modes, &det.mirrored(), &cosmo, rm)?.total;
                if !(back.abs() >= ioncosmo_core::detector::RATIO_FLOOR) {
                    return Err(Error::DegenerateRatio(back));
                }
                fwd / back
            }
        });
        let total_of = |m| results.iter().find(|r| r.method == m).map(|r| r.total);
        if let (Some(num), Some(fin)) = (
            total_of(ResponseMethod::Numeric),
            total_of(ResponseMethod::AnalyticFinite),
        ) {
            row.gap = Some((num - fin).abs() / fin.abs());
        }
        row.results = results
            .into_iter()
            .map(|r| MethodValues {
                method: r.method.name().to_string(),
                total: r.total,
                per_mode: r.per_mode,
            })
            .collect();
        let finite = row
            .results
            .iter()
            .all(|r| r.total.is_finite() && r.per_mode.iter().all(|x| x.is_finite()))
            && [row.ratio, row.gap, row.quadrature_error]
                .iter()
                .flatten()
                .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidDetector("non-finite result"));
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        row.results.clear();
        row.ratio = None;
        row.gap = None;
        row.quadrature_error = None;
        row.error = Some(e.to_string());
    }
    row
}
