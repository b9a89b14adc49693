//! Leading-order response of a modulated two-level detector.
//!
//! For ion `m` with sideband detuning Δ and coupling Ω₀η the excitation
//! probability is
//!
//! ```text
//! A_m = (Ω₀η)² Σ_p [b_m^{(p)}]²/√μ_p · |∫ dχ F(χ) e^{−iΔ t(χ)} e^{−iν_p χ}|²
//! ```
//!
//! [`response_numeric`] evaluates the mode integrals by quadrature for any
//! scale factor. The de Sitter closed forms ([`response_desitter_infinite`]
//! and [`response_desitter_finite`]) serve as oracles for it.
//!
//! Sign convention: Δ > 0 is the red sideband (the ion is excited by absorbing
//! a phonon), Δ < 0 the blue sideband.

use alloc::vec::Vec;
use core::cell::RefCell;
use core::f64::consts::PI;

use crate::cosmo::{ConformalMap, CosmoError, WindowSpec};
use crate::ionchain::NormalModes;
use crate::numerics::{self, NumericsError, QuadratureSettings};
use crate::specfun::{self, rotated_power};
use crate::{ComplexValue, Error};

/// Upper bound on the number of quadrature panels per mode.
pub const MAX_PANELS: usize = 4_000_000;

/// Smallest denominator accepted by [`ratio_signature`].
pub const RATIO_FLOOR: f64 = 1e-300;

/// Parameters of the laser-driven detector ion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorSpec {
    /// 1-based index of the detector ion.
    pub ion_index: usize,
    /// Detuning Δ in units of ν; positive is the red sideband.
    pub detuning: f64,
    /// Coupling prefactor Ω₀η.
    pub coupling: f64,
    /// Spacetime dimension n ≥ 2.
    pub n_dim: u32,
    /// Window in cosmic time.
    pub window: WindowSpec,
}

impl DetectorSpec {
    /// Checks the invariants (Δ ≠ 0, coupling > 0, n ≥ 2, valid window).
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.detuning.is_finite() && self.detuning != 0.0) {
            return Err(Error::InvalidDetector("detuning must be finite and non-zero"));
        }
        if !(self.coupling.is_finite() && self.coupling > 0.0) {
            return Err(Error::InvalidDetector("coupling must be positive"));
        }
        if self.n_dim < 2 {
            return Err(Error::InvalidDetector("spacetime dimension must be at least 2"));
        }
        self.window.validate()?;
        Ok(())
    }

    /// Same detector on the opposite sideband.
    pub fn mirrored(&self) -> Self {
        Self {
            detuning: -self.detuning,
            ..*self
        }
    }
}

/// How a response was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResponseMethod {
    /// Adaptive quadrature of the mode integrals.
    Numeric,
    /// de Sitter closed form for an always-on detector.
    AnalyticInfinite,
    /// de Sitter closed form for a rectangular window.
    AnalyticFinite,
}

impl ResponseMethod {
    /// Every method, in output column order.
    pub const ALL: [ResponseMethod; 3] = [Self::Numeric, Self::AnalyticInfinite, Self::AnalyticFinite];

    /// Stable lower-case name.
    pub fn name(self) -> &'static str {
        match self {
            Self::Numeric => "numeric",
            Self::AnalyticInfinite => "analytic_infinite",
            Self::AnalyticFinite => "analytic_finite",
        }
    }

    /// Inverse of [`ResponseMethod::name`].
    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == name)
    }
}

/// Excitation probability with its per-mode breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseResult {
    /// Σ of `per_mode`.
    pub total: f64,
    /// Contribution of each normal mode, ascending in frequency.
    pub per_mode: Vec<f64>,
    /// Estimated absolute error of `total` (zero for closed forms).
    pub quadrature_error: f64,
    /// Method that produced the numbers.
    pub method: ResponseMethod,
    /// Set when n > 2: the window carries the extra powers of `a` but the
    /// response formula itself is the two-dimensional one.
    pub dimension_extension: bool,
}

impl ResponseResult {
    fn from_modes(per_mode: Vec<f64>, quadrature_error: f64, method: ResponseMethod, n_dim: u32) -> Self {
        Self {
            total: per_mode.iter().sum(),
            per_mode,
            quadrature_error,
            method,
            dimension_extension: n_dim > 2,
        }
    }
}

/// Gibbons-Hawking temperature κ/2π (in units of ν, with ħ = k_B = 1).
pub fn gibbons_hawking_temperature(kappa: f64) -> f64 {
    kappa / (2.0 * PI)
}

// Panel edges no wider than a quarter of the local oscillation period of
// Δ t + ν_p χ(t), whose rate is Δ + ν_p / a(t).
fn oscillation_panels(map: &ConformalMap, detuning: f64, nu: f64, segments: &[f64]) -> Result<Vec<f64>, Error> {
    let rate = |t: f64| -> Result<f64, CosmoError> { Ok((detuning + nu * map.dchi_dt(t)?).abs()) };
    let mut edges = Vec::new();
    edges.push(segments[0]);
    for w in segments.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let cap = (hi - lo) / 16.0;
        let mut t = lo;
        while t < hi {
            let quarter = |r: f64| if r > 0.0 { 0.5 * PI / r } else { f64::INFINITY };
            let mut h = quarter(rate(t)?).min(cap);
            let ahead = (t + h).min(hi);
            h = h.min(quarter(rate(ahead)?));
            let next = if t + h >= hi || hi - (t + h) < 1e-3 * h {
                hi
            } else {
                t + h
            };
            edges.push(next);
            t = next;
            if edges.len() > MAX_PANELS {
                return Err(Error::TooOscillatory(MAX_PANELS));
            }
        }
    }
    Ok(edges)
}

/// Detector response by adaptive quadrature, for any scale factor.
///
/// The mode integrals are evaluated in cosmic time,
/// `∫ dt f(t) a(t)^{(2−n)/2} e^{−iΔt} e^{−iν_p χ(t)}`, which is the
/// conformal-time integral after `dχ = dt/a`.
pub fn response_numeric(
    modes: &NormalModes,
    spec: &DetectorSpec,
    map: &ConformalMap,
    settings: &QuadratureSettings,
) -> Result<ResponseResult, Error> {
    spec.validate()?;
    let weights = modes.mode_weights(spec.ion_index)?;
    let domain = map.domain();
    let window = &spec.window;
    if window.t_init < domain.start || window.t_final > domain.end {
        return Err(CosmoError::DomainExceeded {
            value: if window.t_init < domain.start {
                window.t_init
            } else {
                window.t_final
            },
            lo: domain.start,
            hi: domain.end,
        }
        .into());
    }

    let exponent = (2.0 - spec.n_dim as f64) / 2.0;
    let segments = window.breakpoints();
    let c2 = spec.coupling * spec.coupling;
    let mut per_mode = Vec::with_capacity(weights.len());
    let mut total_error = 0.0;

    for (&w, &nu) in weights.iter().zip(&modes.frequencies) {
        let edges = oscillation_panels(map, spec.detuning, nu, &segments)?;
        let failure: RefCell<Option<CosmoError>> = RefCell::new(None);
        let integrand = |t: f64| -> ComplexValue {
            let eval = || -> Result<ComplexValue, CosmoError> {
                let chi = map.chi(t)?;
                let mut amp = window.value(t);
                if exponent != 0.0 {
                    amp *= map.scale_factor(t)?.powf(exponent);
                }
                Ok(ComplexValue::new(0.0, -(spec.detuning * t + nu * chi)).exp() * amp)
            };
            eval().unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                ComplexValue::new(f64::NAN, f64::NAN)
            })
        };
        let outcome = numerics::integrate_complex_panels(integrand, &edges, settings);
        if let Some(e) = failure.into_inner() {
            return Err(e.into());
        }
        let (amplitude, err) = match outcome {
            Ok(v) => v,
            Err(e @ NumericsError::MaxDepthExceeded { .. }) => return Err(e.into()),
            Err(e) => return Err(e.into()),
        };
        let modulus = amplitude.norm();
        per_mode.push(c2 * w * modulus * modulus);
        total_error += c2 * w * (2.0 * modulus * err + err * err);
    }

    Ok(ResponseResult::from_modes(
        per_mode,
        total_error,
        ResponseMethod::Numeric,
        spec.n_dim,
    ))
}

fn check_desitter(spec: &DetectorSpec, kappa: f64) -> Result<(), Error> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(CosmoError::InvalidModel("de Sitter requires kappa > 0").into());
    }
    if !(spec.detuning.is_finite() && spec.detuning != 0.0) {
        return Err(Error::InvalidDetector("detuning must be finite and non-zero"));
    }
    if !(spec.coupling.is_finite() && spec.coupling > 0.0) {
        return Err(Error::InvalidDetector("coupling must be positive"));
    }
    if spec.n_dim != 2 {
        return Err(Error::InvalidDetector("de Sitter closed forms assume n = 2"));
    }
    Ok(())
}

// (Ω₀η)²/(κΔ) · 2π/(e^{2πΔ/κ} − 1), positive for either sign of Δ.
fn planck_prefactor(coupling: f64, detuning: f64, kappa: f64) -> f64 {
    coupling * coupling / (kappa * detuning) * 2.0 * PI / (2.0 * PI * detuning / kappa).exp_m1()
}

/// Always-on de Sitter response: a Planck spectrum at temperature κ/2π.
///
/// The window in `spec` is ignored.
pub fn response_desitter_infinite(
    modes: &NormalModes,
    spec: &DetectorSpec,
    kappa: f64,
) -> Result<ResponseResult, Error> {
    check_desitter(spec, kappa)?;
    let weights = modes.mode_weights(spec.ion_index)?;
    let prefactor = planck_prefactor(spec.coupling, spec.detuning, kappa);
    let per_mode = weights.iter().map(|w| prefactor * w).collect();
    Ok(ResponseResult::from_modes(
        per_mode,
        0.0,
        ResponseMethod::AnalyticInfinite,
        spec.n_dim,
    ))
}

/// de Sitter response for a rectangular window on `[t_init, t_final]` in
/// cosmic time, from regularized incomplete gamma functions.
///
/// `t_init == t_final` gives zero.
pub fn response_desitter_finite(
    modes: &NormalModes,
    spec: &DetectorSpec,
    kappa: f64,
    t_init: f64,
    t_final: f64,
) -> Result<ResponseResult, Error> {
    check_desitter(spec, kappa)?;
    if !(t_init.is_finite() && t_final.is_finite() && t_final >= t_init) {
        return Err(CosmoError::InvalidModel("window requires t_final >= t_init").into());
    }
    let weights = modes.mode_weights(spec.ion_index)?;
    if t_final == t_init {
        let per_mode = alloc::vec![0.0; weights.len()];
        return Ok(ResponseResult::from_modes(
            per_mode,
            0.0,
            ResponseMethod::AnalyticFinite,
            spec.n_dim,
        ));
    }

    let beta = spec.detuning / kappa;
    let z = ComplexValue::new(0.0, beta);
    let prefactor = planck_prefactor(spec.coupling, spec.detuning, kappa);
    let u_final = (-kappa * t_final).exp();
    let u_init = (-kappa * t_init).exp();

    let mut per_mode = Vec::with_capacity(weights.len());
    for (&w, &nu) in weights.iter().zip(&modes.frequencies) {
        let alpha = nu / kappa;
        let q_final = specfun::regularized_q(z, ComplexValue::new(0.0, -alpha * u_final))?;
        let q_init = specfun::regularized_q(z, ComplexValue::new(0.0, -alpha * u_init))?;
        let value = prefactor * w * (q_final - q_init).norm_sqr();
        if !value.is_finite() {
            return Err(specfun::SpecfunError::NonFinite.into());
        }
        per_mode.push(value);
    }
    Ok(ResponseResult::from_modes(
        per_mode,
        0.0,
        ResponseMethod::AnalyticFinite,
        spec.n_dim,
    ))
}

/// Per-mode always-on kernel `(1/κ) ∫₀^∞ du u^{iβ−1} e^{iαu}` with β = Δ/κ and
/// α = ν_p/κ, i.e. `Γ(iβ) α^{−iβ} e^{−πβ/2} / κ`.
pub fn thermal_integral(kappa: f64, detuning: f64, mode_frequency: f64) -> Result<ComplexValue, Error> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(CosmoError::InvalidModel("de Sitter requires kappa > 0").into());
    }
    if !(mode_frequency.is_finite() && mode_frequency > 0.0) {
        return Err(Error::InvalidDetector("mode frequency must be positive"));
    }
    if !(detuning.is_finite() && detuning != 0.0) {
        return Err(Error::InvalidDetector("detuning must be finite and non-zero"));
    }
    let beta = detuning / kappa;
    let alpha = mode_frequency / kappa;
    let g = specfun::gamma(ComplexValue::new(0.0, beta))?;
    Ok(g * rotated_power(alpha, beta) / kappa)
}

/// Red/blue ratio `A(Δ; t_i, t_f) / A(−Δ; t_i, t_f)` of finite-window
/// de Sitter responses.
pub fn ratio_signature(
    modes: &NormalModes,
    spec: &DetectorSpec,
    kappa: f64,
    t_init: f64,
    t_final: f64,
) -> Result<f64, Error> {
    let forward = response_desitter_finite(modes, spec, kappa, t_init, t_final)?;
    let mirrored = response_desitter_finite(modes, &spec.mirrored(), kappa, t_init, t_final)?;
    if !(mirrored.total.abs() >= RATIO_FLOOR) {
        return Err(Error::DegenerateRatio(mirrored.total));
    }
    Ok(forward.total / mirrored.total)
}
