//! Scale factors, conformal-time maps and detector-picture schedules.
//!
//! For a comoving detector in a spatially flat FLRW universe the conformal
//! time obeys `dχ = dt / a(t)`. In the detector picture the lab clock runs in
//! χ while the detector gap, window and laser frequency are modulated by
//! `a[t(χ)]`.
//!
//! Integration constants: flat has `χ(0) = 0`, de Sitter `χ(0) = −1/κ`,
//! power law `χ(t₀) = 0`, and tabulated models carry an explicit anchor.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::numerics::{self, NumericsError};

const TABLE_QUAD_TOL: f64 = 1e-13;
const INVERSE_TOL: f64 = 1e-13;

/// Cosmology failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CosmoError {
    /// `a(t) <= 0` (or non-finite) somewhere on the requested domain.
    #[error("scale factor is not positive at t = {t} (a = {a})")]
    NonPositiveScaleFactor {
        /// Cosmic time.
        t: f64,
        /// Scale factor value.
        a: f64,
    },
    /// Evaluation outside the configured interval.
    #[error("{value} outside domain [{lo}, {hi}]")]
    DomainExceeded {
        /// Requested point.
        value: f64,
        /// Lower bound.
        lo: f64,
        /// Upper bound.
        hi: f64,
    },
    /// Model or window parameters violate their invariants.
    #[error("invalid model: {0}")]
    InvalidModel(&'static str),
    /// Failure in quadrature or root finding for tabulated models.
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A closed interval of cosmic time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeInterval {
    /// Start time.
    pub start: f64,
    /// End time.
    pub end: f64,
}

impl TimeInterval {
    /// `[start, end]`; requires `start < end`.
    pub fn new(start: f64, end: f64) -> Result<Self, CosmoError> {
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(CosmoError::InvalidModel("time interval must satisfy start < end"));
        }
        Ok(Self { start, end })
    }

    fn check(&self, t: f64) -> Result<(), CosmoError> {
        if t >= self.start && t <= self.end {
            Ok(())
        } else {
            Err(CosmoError::DomainExceeded {
                value: t,
                lo: self.start,
                hi: self.end,
            })
        }
    }
}

/// Sampled scale factor, interpolated as a monotone cubic in `ln a`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedScaleFactor {
    times: Vec<f64>,
    log_a: Vec<f64>,
    slopes: Vec<f64>,
    anchor_time: f64,
    anchor_chi: f64,
}

impl TabulatedScaleFactor {
    /// Builds the table from `(t, a)` samples with strictly increasing `t`.
    ///
    /// The conformal time is fixed by `χ(anchor_time) = anchor_chi`; the
    /// anchor must lie within the sampled range.
    pub fn new(samples: &[(f64, f64)], anchor_time: f64, anchor_chi: f64) -> Result<Self, CosmoError> {
        if samples.len() < 2 {
            return Err(CosmoError::InvalidModel(
                "tabulated scale factor needs at least two samples",
            ));
        }
        for &(t, a) in samples {
            if !(a.is_finite() && a > 0.0) {
                return Err(CosmoError::NonPositiveScaleFactor { t, a });
            }
            if !t.is_finite() {
                return Err(CosmoError::InvalidModel("tabulated times must be finite"));
            }
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(CosmoError::InvalidModel("tabulated times must be strictly increasing"));
        }
        let times: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let log_a: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
        if !(anchor_time >= times[0] && anchor_time <= times[times.len() - 1] && anchor_chi.is_finite()) {
            return Err(CosmoError::InvalidModel("tabulated anchor must lie inside the table"));
        }
        let slopes = pchip_slopes(&times, &log_a);
        Ok(Self {
            times,
            log_a,
            slopes,
            anchor_time,
            anchor_chi,
        })
    }

    /// Samples `(t, a)` as originally supplied (up to `exp(ln a)` rounding).
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().zip(&self.log_a).map(|(&t, &l)| (t, l.exp()))
    }

    /// Anchor `(t, χ)`.
    pub fn anchor(&self) -> (f64, f64) {
        (self.anchor_time, self.anchor_chi)
    }

    /// Sampled time range.
    pub fn range(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    fn segment(&self, t: f64) -> usize {
        let k = self.times.partition_point(|&x| x <= t);
        k.saturating_sub(1).min(self.times.len() - 2)
    }

    fn log_scale(&self, t: f64) -> f64 {
        let k = self.segment(t);
        let h = self.times[k + 1] - self.times[k];
        let s = (t - self.times[k]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.log_a[k] + h10 * h * self.slopes[k] + h01 * self.log_a[k + 1] + h11 * h * self.slopes[k + 1]
    }
}

// Fritsch-Butland weighted harmonic-mean slopes with the shape-preserving
// three-point end condition.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut d = alloc::vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| -> f64 {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() {
            0.0
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// Scale factor `a(t)` of the simulated cosmology.
#[derive(Debug, Clone, PartialEq)]
pub enum ScaleFactorModel {
    /// Minkowski: `a ≡ 1`.
    Flat,
    /// `a(t) = e^{κt}`.
    DeSitter {
        /// Expansion rate κ in units of ν.
        kappa: f64,
    },
    /// `a(t) = (t/t₀)^q`, defined for `t > 0`.
    PowerLaw {
        /// Exponent q.
        exponent: f64,
        /// Reference time t₀ > 0.
        t0: f64,
    },
    /// Interpolated samples.
    Tabulated(TabulatedScaleFactor),
}

impl ScaleFactorModel {
    /// Checks the parameter invariants.
    pub fn validate(&self) -> Result<(), CosmoError> {
        match self {
            Self::Flat | Self::Tabulated(_) => Ok(()),
            Self::DeSitter { kappa } => {
                if kappa.is_finite() && *kappa > 0.0 {
                    Ok(())
                } else {
                    Err(CosmoError::InvalidModel("de Sitter requires kappa > 0"))
                }
            }
            Self::PowerLaw { exponent, t0 } => {
                if exponent.is_finite() && t0.is_finite() && *t0 > 0.0 {
                    Ok(())
                } else {
                    Err(CosmoError::InvalidModel(
                        "power law requires finite exponent and t0 > 0",
                    ))
                }
            }
        }
    }

    /// Evaluates `a(t)`.
    pub fn scale_factor(&self, t: f64) -> Result<f64, CosmoError> {
        let a = match self {
            Self::Flat => 1.0,
            Self::DeSitter { kappa } => (kappa * t).exp(),
            Self::PowerLaw { exponent, t0 } => {
                if t <= 0.0 {
                    return Err(CosmoError::NonPositiveScaleFactor { t, a: 0.0 });
                }
                (t / t0).powf(*exponent)
            }
            Self::Tabulated(tab) => {
                let (lo, hi) = tab.range();
                if !(t >= lo && t <= hi) {
                    return Err(CosmoError::DomainExceeded { value: t, lo, hi });
                }
                tab.log_scale(t).exp()
            }
        };
        if !(a.is_finite() && a > 0.0) {
            return Err(CosmoError::NonPositiveScaleFactor { t, a });
        }
        Ok(a)
    }

    /// de Sitter expansion rate, if this is a de Sitter model.
    pub fn kappa(&self) -> Option<f64> {
        match self {
            Self::DeSitter { kappa } => Some(*kappa),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct TableIntegral {
    knots: Vec<f64>,
    chi_at_knots: Vec<f64>,
}

/// Invertible monotone map between cosmic time `t` and conformal time `χ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalMap {
    model: ScaleFactorModel,
    domain: TimeInterval,
    chi_lo: f64,
    chi_hi: f64,
    table: Option<TableIntegral>,
}

/// Builds the conformal map of `model` on `domain`.
pub fn build_conformal_map(model: &ScaleFactorModel, domain: TimeInterval) -> Result<ConformalMap, CosmoError> {
    model.validate()?;
    match model {
        ScaleFactorModel::PowerLaw { exponent, .. } => {
            if domain.start <= 0.0 && *exponent != 0.0 {
                return Err(CosmoError::NonPositiveScaleFactor {
                    t: domain.start,
                    a: 0.0,
                });
            }
        }
        ScaleFactorModel::Tabulated(tab) => {
            let (lo, hi) = tab.range();
            if domain.start < lo || domain.end > hi {
                return Err(CosmoError::DomainExceeded {
                    value: if domain.start < lo { domain.start } else { domain.end },
                    lo,
                    hi,
                });
            }
        }
        _ => {}
    }
    // Positivity at the ends covers the closed forms, which are monotone in t.
    model.scale_factor(domain.start)?;
    model.scale_factor(domain.end)?;

    let table = match model {
        ScaleFactorModel::Tabulated(tab) => Some(integrate_table(tab)?),
        _ => None,
    };
    let mut map = ConformalMap {
        model: model.clone(),
        domain,
        chi_lo: 0.0,
        chi_hi: 0.0,
        table,
    };
    map.chi_lo = map.chi_unchecked(domain.start)?;
    map.chi_hi = map.chi_unchecked(domain.end)?;
    if !(map.chi_lo < map.chi_hi) {
        return Err(CosmoError::InvalidModel(
            "conformal time is not increasing on the domain",
        ));
    }
    Ok(map)
}

// ∫ dt/a over part of one segment, to a tolerance relative to the integrand there.
fn segment_integral(tab: &TabulatedScaleFactor, a: f64, b: f64) -> Result<f64, CosmoError> {
    let inv_a = |t: f64| (-tab.log_scale(t)).exp();
    let scale = (b - a).abs() * inv_a(a).max(inv_a(b));
    Ok(numerics::integrate_simpson(
        inv_a,
        a,
        b,
        TABLE_QUAD_TOL * scale.max(f64::MIN_POSITIVE),
    )?)
}

fn integrate_table(tab: &TabulatedScaleFactor) -> Result<TableIntegral, CosmoError> {
    // Accumulate outward from the anchor so late-time values keep their digits.
    let knots = tab.times.clone();
    let n = knots.len();
    let k = tab.segment(tab.anchor_time);
    let mut chi = vec![0.0; n];
    chi[k] = tab.anchor_chi - segment_integral(tab, knots[k], tab.anchor_time)?;
    chi[k + 1] = tab.anchor_chi + segment_integral(tab, tab.anchor_time, knots[k + 1])?;
    for j in (0..k).rev() {
        chi[j] = chi[j + 1] - segment_integral(tab, knots[j], knots[j + 1])?;
    }
    for j in (k + 2)..n {
        chi[j] = chi[j - 1] + segment_integral(tab, knots[j - 1], knots[j])?;
    }
    Ok(TableIntegral {
        knots,
        chi_at_knots: chi,
    })
}

impl ConformalMap {
    /// Underlying scale-factor model.
    pub fn model(&self) -> &ScaleFactorModel {
        &self.model
    }

    /// Cosmic-time domain.
    pub fn domain(&self) -> TimeInterval {
        self.domain
    }

    /// Image of the domain in conformal time, `(χ(start), χ(end))`.
    pub fn chi_domain(&self) -> (f64, f64) {
        (self.chi_lo, self.chi_hi)
    }

    fn chi_unchecked(&self, t: f64) -> Result<f64, CosmoError> {
        Ok(match &self.model {
            ScaleFactorModel::Flat => t,
            ScaleFactorModel::DeSitter { kappa } => -(-kappa * t).exp() / kappa,
            ScaleFactorModel::PowerLaw { exponent, t0 } => {
                let q = *exponent;
                if q == 1.0 {
                    t0 * (t / t0).ln()
                } else {
                    t0 / (1.0 - q) * ((t / t0).powf(1.0 - q) - 1.0)
                }
            }
            ScaleFactorModel::Tabulated(tab) => {
                let table = self
                    .table
                    .as_ref()
                    .ok_or(CosmoError::InvalidModel("missing table integral"))?;
                let k = tab.segment(t);
                table.chi_at_knots[k] + segment_integral(tab, table.knots[k], t)?
            }
        })
    }

    /// Conformal time `χ(t)`.
    pub fn chi(&self, t: f64) -> Result<f64, CosmoError> {
        self.domain.check(t)?;
        self.chi_unchecked(t)
    }

    /// Cosmic time `t(χ)`.
    pub fn time(&self, chi: f64) -> Result<f64, CosmoError> {
        if !(chi >= self.chi_lo && chi <= self.chi_hi) {
            return Err(CosmoError::DomainExceeded {
                value: chi,
                lo: self.chi_lo,
                hi: self.chi_hi,
            });
        }
        let t = match &self.model {
            ScaleFactorModel::Flat => chi,
            ScaleFactorModel::DeSitter { kappa } => -(-kappa * chi).ln() / kappa,
            ScaleFactorModel::PowerLaw { exponent, t0 } => {
                let q = *exponent;
                if q == 1.0 {
                    t0 * (chi / t0).exp()
                } else {
                    t0 * (1.0 + (1.0 - q) * chi / t0).powf(1.0 / (1.0 - q))
                }
            }
            ScaleFactorModel::Tabulated(_) => {
                let table = self
                    .table
                    .as_ref()
                    .ok_or(CosmoError::InvalidModel("missing table integral"))?;
                let k = table
                    .chi_at_knots
                    .partition_point(|&c| c <= chi)
                    .saturating_sub(1)
                    .min(table.knots.len() - 2);
                let lo = table.knots[k].max(self.domain.start);
                let hi = table.knots[k + 1].min(self.domain.end);
                let tol = INVERSE_TOL * lo.abs().max(hi.abs()).max(1.0);
                numerics::find_root_monotone(|t| self.chi_unchecked(t).map_or(f64::NAN, |c| c - chi), lo, hi, tol)?
            }
        };
        // Rounding at the ends of the domain.
        Ok(t.clamp(self.domain.start, self.domain.end))
    }

    /// `dχ/dt = 1/a(t)`.
    pub fn dchi_dt(&self, t: f64) -> Result<f64, CosmoError> {
        self.domain.check(t)?;
        Ok(1.0 / self.model.scale_factor(t)?)
    }

    /// `a(t)` restricted to the domain.
    pub fn scale_factor(&self, t: f64) -> Result<f64, CosmoError> {
        self.domain.check(t)?;
        self.model.scale_factor(t)
    }

    /// `a[t(χ)]`.
    pub fn scale_at_chi(&self, chi: f64) -> Result<f64, CosmoError> {
        match &self.model {
            ScaleFactorModel::DeSitter { kappa } => {
                self.time(chi)?;
                Ok(-1.0 / (kappa * chi))
            }
            _ => {
                let t = self.time(chi)?;
                self.model.scale_factor(t)
            }
        }
    }
}

/// Detector coupling envelope in cosmic time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowShape {
    /// Sharp switch-on and switch-off.
    Rectangular,
    /// Raised-cosine ramps covering `ramp_fraction` of the window at each end.
    Tukey {
        /// Fraction in `[0, 0.5]`.
        ramp_fraction: f64,
    },
}

/// Default Tukey ramp fraction.
pub const DEFAULT_RAMP_FRACTION: f64 = 0.05;

/// Window `f(t)` in cosmic time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    /// Switch-on time.
    pub t_init: f64,
    /// Switch-off time.
    pub t_final: f64,
    /// Envelope shape.
    pub shape: WindowShape,
}

impl WindowSpec {
    /// Rectangular window on `[t_init, t_final]`.
    pub fn rectangular(t_init: f64, t_final: f64) -> Result<Self, CosmoError> {
        let w = Self {
            t_init,
            t_final,
            shape: WindowShape::Rectangular,
        };
        w.validate()?;
        Ok(w)
    }

    /// Tukey window on `[t_init, t_final]`.
    pub fn tukey(t_init: f64, t_final: f64, ramp_fraction: f64) -> Result<Self, CosmoError> {
        let w = Self {
            t_init,
            t_final,
            shape: WindowShape::Tukey { ramp_fraction },
        };
        w.validate()?;
        Ok(w)
    }

    /// Checks the invariants.
    pub fn validate(&self) -> Result<(), CosmoError> {
        if !(self.t_init.is_finite() && self.t_final.is_finite() && self.t_final > self.t_init) {
            return Err(CosmoError::InvalidModel("window requires t_final > t_init"));
        }
        if let WindowShape::Tukey { ramp_fraction } = self.shape {
            if !(0.0..=0.5).contains(&ramp_fraction) {
                return Err(CosmoError::InvalidModel("tukey ramp_fraction must lie in [0, 0.5]"));
            }
        }
        Ok(())
    }

    /// Window length.
    pub fn duration(&self) -> f64 {
        self.t_final - self.t_init
    }

    fn ramp(&self) -> f64 {
        match self.shape {
            WindowShape::Rectangular => 0.0,
            WindowShape::Tukey { ramp_fraction } => ramp_fraction * self.duration(),
        }
    }

    /// `f(t)`.
    pub fn value(&self, t: f64) -> f64 {
        if t < self.t_init || t > self.t_final {
            return 0.0;
        }
        let r = self.ramp();
        if r <= 0.0 {
            return 1.0;
        }
        let ramp = |x: f64| 0.5 * (1.0 - (core::f64::consts::PI * x / r).cos());
        if t < self.t_init + r {
            ramp(t - self.t_init)
        } else if t > self.t_final - r {
            ramp(self.t_final - t)
        } else {
            1.0
        }
    }

    /// Points where `f` or its derivatives are not smooth, ascending.
    pub fn breakpoints(&self) -> Vec<f64> {
        let r = self.ramp();
        let mut pts = alloc::vec![self.t_init];
        if r > 0.0 && 2.0 * r < self.duration() {
            pts.push(self.t_init + r);
            pts.push(self.t_final - r);
        }
        pts.push(self.t_final);
        pts
    }
}

/// `Δ(χ) = a[t(χ)] Δ`.
pub fn detuning_schedule(map: &ConformalMap, base_detuning: f64) -> impl Fn(f64) -> Result<f64, CosmoError> + '_ {
    move |chi| Ok(map.scale_at_chi(chi)? * base_detuning)
}

/// `F(χ) = a[t(χ)]^{(4−n)/2} f[t(χ)]` for an `n`-dimensional spacetime.
pub fn window_transform<'a>(
    window: &'a WindowSpec,
    map: &'a ConformalMap,
    n_dim: u32,
) -> Result<impl Fn(f64) -> Result<f64, CosmoError> + 'a, CosmoError> {
    if n_dim < 2 {
        return Err(CosmoError::InvalidModel("spacetime dimension must be at least 2"));
    }
    window.validate()?;
    let exponent = (4.0 - n_dim as f64) / 2.0;
    Ok(move |chi: f64| {
        let t = map.time(chi)?;
        let a = map.scale_at_chi(chi)?;
        Ok(a.powf(exponent) * window.value(t))
    })
}

/// `ω_L(χ) = ω_A − a[t(χ)] Δ`.
pub fn laser_frequency_schedule(
    map: &ConformalMap,
    base_detuning: f64,
    atomic_frequency: f64,
) -> impl Fn(f64) -> Result<f64, CosmoError> + '_ {
    move |chi| Ok(atomic_frequency - map.scale_at_chi(chi)? * base_detuning)
}

/// Lamb-Dicke drift `η(χ)/η = 1 − (Δ/ω_L)(a[t(χ)] − 1)` from the laser
/// wavenumber following the modulated laser frequency.
pub fn lamb_dicke_drift(
    map: &ConformalMap,
    base_detuning: f64,
    laser_frequency: f64,
) -> Result<impl Fn(f64) -> Result<f64, CosmoError> + '_, CosmoError> {
    if !(laser_frequency.is_finite() && laser_frequency > 0.0) {
        return Err(CosmoError::InvalidModel("laser frequency must be positive"));
    }
    let ratio = base_detuning / laser_frequency;
    Ok(move |chi| Ok(1.0 - ratio * (map.scale_at_chi(chi)? - 1.0)))
}

/// Range swept by the laser frequency between cosmic times `t_start` and
/// `t_end`: `|Δ| (a(t_end) − a(t_start))`.
pub fn laser_modulation_span(
    map: &ConformalMap,
    base_detuning: f64,
    t_start: f64,
    t_end: f64,
) -> Result<f64, CosmoError> {
    let schedule = laser_frequency_schedule(map, base_detuning, 0.0);
    let start = schedule(map.chi(t_start)?)?;
    let end = schedule(map.chi(t_end)?)?;
    Ok((end - start).abs())
}
