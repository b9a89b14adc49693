//! Complex gamma and upper incomplete gamma functions.
//!
//! `gamma` uses the Lanczos approximation (g = 7, nine terms) with the
//! reflection formula for `Re z < 1/2`. The upper incomplete gamma function is
//! computed as `Γ(z) − γ(z, b)` from a power series of the lower function when
//! `|b|` is small, otherwise from the Legendre continued fraction evaluated
//! with modified Lentz. Close to the negative real axis the continued fraction
//! loses accuracy; there the lower function is summed as
//! `b^z Σ (−b)^k / (k! (z + k))`, whose terms do not cancel.
//! All powers and logarithms are principal-branch.

use core::f64::consts::PI;

use thiserror::Error;

use crate::ComplexValue;

/// Failures of the special functions.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecfunError {
    /// `z` is (within 1e-14 of) a non-positive integer.
    #[error("gamma has a pole at z = {0}")]
    Pole(ComplexValue),
    /// Neither the series nor the continued fraction met tolerance.
    #[error("incomplete gamma did not converge within {0} iterations")]
    NonConvergence(usize),
    /// `Γ(z, 0)` diverges or oscillates without limit when `Re z <= 0`.
    #[error("upper incomplete gamma at b = 0 is undefined for Re z = {0} <= 0")]
    UndefinedAtZero(f64),
    /// An argument or result was NaN or infinite.
    #[error("non-finite value in special function")]
    NonFinite,
}

/// Iteration cap shared by the series and the continued fraction.
pub const MAX_ITERATIONS: usize = 10_000;

const POLE_TOLERANCE: f64 = 1e-14;
// |b| + Re b below which the reflected series is used for Re b < 0.
const REFLECTED_BAND: f64 = 8.0;
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_finite(z: ComplexValue) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn checked(z: ComplexValue) -> Result<ComplexValue, SpecfunError> {
    if is_finite(z) {
        Ok(z)
    } else {
        Err(SpecfunError::NonFinite)
    }
}

fn pole_check(z: ComplexValue) -> Result<(), SpecfunError> {
    let k = z.re.round();
    if k <= 0.0 && (z - ComplexValue::new(k, 0.0)).norm() < POLE_TOLERANCE {
        return Err(SpecfunError::Pole(z));
    }
    Ok(())
}

// ln Γ(z) for Re z >= 1/2 (not branch-continuous in Im; only exponentiated).
fn lanczos_ln_gamma(z: ComplexValue) -> ComplexValue {
    let z = z - 1.0;
    let mut x = ComplexValue::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Complex gamma function Γ(z), principal branch.
pub fn gamma(z: ComplexValue) -> Result<ComplexValue, SpecfunError> {
    if !is_finite(z) {
        return Err(SpecfunError::NonFinite);
    }
    pole_check(z)?;
    if z.re < 0.5 {
        // Γ(z) Γ(1 − z) = π / sin(πz)
        let s = (z * PI).sin();
        let g = lanczos_ln_gamma(1.0 - z).exp();
        checked(PI / (s * g))
    } else {
        checked(lanczos_ln_gamma(z).exp())
    }
}

// b^z e^{-b} with principal log of b.
fn power_exp_prefactor(z: ComplexValue, b: ComplexValue) -> ComplexValue {
    (z * b.ln() - b).exp()
}

fn lower_series(z: ComplexValue, b: ComplexValue) -> Result<ComplexValue, SpecfunError> {
    // γ(z, b) = b^z e^{-b} Σ_k b^k / (z (z+1) … (z+k))
    let mut term = 1.0 / z;
    let mut sum = term;
    for k in 1..MAX_ITERATIONS {
        term = term * b / (z + k as f64);
        sum += term;
        if term.norm() <= f64::EPSILON * sum.norm() {
            return checked(power_exp_prefactor(z, b) * sum);
        }
    }
    Err(SpecfunError::NonConvergence(MAX_ITERATIONS))
}

fn lower_series_reflected(z: ComplexValue, b: ComplexValue) -> Result<ComplexValue, SpecfunError> {
    let mut power = ComplexValue::new(1.0, 0.0);
    let mut sum = 1.0 / z;
    let bound = b.norm();
    for k in 1..MAX_ITERATIONS {
        power = power * (-b) / k as f64;
        let term = power / (z + k as f64);
        sum += term;
        if k as f64 > bound && term.norm() <= f64::EPSILON * sum.norm() {
            return checked((z * b.ln()).exp() * sum);
        }
    }
    Err(SpecfunError::NonConvergence(MAX_ITERATIONS))
}

fn upper_continued_fraction(z: ComplexValue, b: ComplexValue) -> Result<ComplexValue, SpecfunError> {
    const TINY: f64 = 1e-300;
    let tiny = ComplexValue::new(TINY, 0.0);
    let mut bn = b + 1.0 - z;
    let mut c = ComplexValue::new(1.0 / TINY, 0.0);
    let mut d = 1.0 / bn;
    let mut h = d;
    for i in 1..MAX_ITERATIONS {
        let i = i as f64;
        let an = -i * (ComplexValue::new(i, 0.0) - z);
        bn += 2.0;
        d = an * d + bn;
        if d.norm() < TINY {
            d = tiny;
        }
        c = bn + an / c;
        if c.norm() < TINY {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).norm() <= f64::EPSILON {
            return checked(power_exp_prefactor(z, b) * h);
        }
    }
    Err(SpecfunError::NonConvergence(MAX_ITERATIONS))
}

/// Upper incomplete gamma function Γ(z, b) = ∫_b^∞ x^{z−1} e^{−x} dx.
///
/// `b` may be any complex number off the negative real axis. Small non-zero
/// `|b|` is fine for every `z` off the poles; only `b = 0` with `Re z <= 0`
/// is rejected.
pub fn upper_incomplete_gamma(z: ComplexValue, b: ComplexValue) -> Result<ComplexValue, SpecfunError> {
    if !is_finite(z) || !is_finite(b) {
        return Err(SpecfunError::NonFinite);
    }
    if b == ComplexValue::new(0.0, 0.0) {
        if z.re > 0.0 {
            return gamma(z);
        }
        return Err(SpecfunError::UndefinedAtZero(z.re));
    }
    let r = b.norm();
    if b.re < 0.0 && r + b.re <= REFLECTED_BAND {
        let g = gamma(z)?;
        checked(g - lower_series_reflected(z, b)?)
    } else if r < 2.0 || (z.re > -2.0 && r < z.norm() + 1.0) {
        let g = gamma(z)?;
        checked(g - lower_series(z, b)?)
    } else {
        upper_continued_fraction(z, b)
    }
}

/// Regularized upper incomplete gamma function Q(z, b) = Γ(z, b) / Γ(z).
pub fn regularized_q(z: ComplexValue, b: ComplexValue) -> Result<ComplexValue, SpecfunError> {
    let g = gamma(z)?;
    let upper = upper_incomplete_gamma(z, b)?;
    checked(upper / g)
}

/// `(−iα)^{−iβ}` on the principal branch, written as `α^{−iβ} e^{−πβ/2}`.
///
/// This is the rotation picked out by damping `e^{iαu}` at large `u`; it is
/// evaluated directly rather than as a limit. Requires `α > 0`.
pub fn rotated_power(alpha: f64, beta: f64) -> ComplexValue {
    ComplexValue::new(0.0, -beta * alpha.ln()).exp() * (-PI * beta / 2.0).exp()
}
