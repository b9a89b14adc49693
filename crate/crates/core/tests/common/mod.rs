//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls the crate's quadrature or special functions, so these
//! can serve as oracles for them.
#![allow(dead_code)]

use ioncosmo_core::ComplexValue;
use std::f64::consts::PI;

pub fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

pub fn rel_err(a: ComplexValue, b: ComplexValue) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> ComplexValue>(f: F, a: f64, b: f64, n: usize) -> ComplexValue {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += f(a + k as f64 * h) * w;
    }
    sum * (h / 3.0)
}

/// Γ(z, b) by quadrature along the horizontal ray `x = b + s`, `s ≥ 0`, with
/// geometric grading `s = |b| (e^v − 1)` to resolve the start of the ray.
pub fn incomplete_gamma_by_quadrature(z: ComplexValue, b: ComplexValue, n: usize) -> ComplexValue {
    let scale = b.norm();
    let length = 80.0 + 3.0 * z.norm() + b.re.abs();
    let v_max = (1.0 + length / scale).ln();
    let integrand = |v: f64| {
        let ev = v.exp();
        let s = scale * (ev - 1.0);
        let x = b + s;
        ((z - 1.0) * x.ln() - x).exp() * (scale * ev)
    };
    simpson(integrand, 0.0, v_max, n)
}

/// `∫₀^∞ u^{iβ−1} e^{iαu} du` with both convergence factors applied
/// (`β → β − iε`, `α → α + iε`).
///
/// Split as: a Taylor-expanded piece on `[0, u₀]`, composite Simpson in
/// `v = ln u` on `[u₀, U]`, and the integration-by-parts asymptotic series
/// on `[U, ∞)`.
pub fn damped_thermal_integral(alpha: f64, beta: f64, eps: f64) -> ComplexValue {
    let s = c(eps, beta);
    let lambda = c(eps, -alpha);
    let u0: f64 = 1e-7;
    let big_u = 400.0 / alpha;

    let pw = |p: ComplexValue, u: f64| (p * u.ln()).exp();
    let head =
        pw(s, u0) / s - lambda * pw(s + 1.0, u0) / (s + 1.0) + lambda * lambda * pw(s + 2.0, u0) / (2.0 * (s + 2.0));

    let body = simpson(
        |v| {
            let u = v.exp();
            (s * v - lambda * u).exp()
        },
        u0.ln(),
        big_u.ln(),
        600_000,
    );

    let mut tail_sum = c(1.0, 0.0);
    let mut term = c(1.0, 0.0);
    for k in 1..6 {
        term = term * (s - k as f64) / (lambda * big_u);
        tail_sum += term;
    }
    let tail = (-lambda * big_u).exp() * pw(s - 1.0, big_u) / lambda * tail_sum;

    head + body + tail
}

/// Flat-space, rectangular-window response of ion `m` in closed form:
/// `Σ_p c² w_p 4 sin²((Δ+ν_p)T/2)/(Δ+ν_p)²` (and `c² w_p T²` on resonance).
pub fn flat_sinc2(weights: &[f64], freqs: &[f64], coupling: f64, detuning: f64, duration: f64) -> Vec<f64> {
    weights
        .iter()
        .zip(freqs)
        .map(|(w, nu)| {
            let x = detuning + nu;
            let amp2 = if x == 0.0 {
                duration * duration
            } else {
                4.0 * (x * duration / 2.0).sin().powi(2) / (x * x)
            };
            coupling * coupling * w * amp2
        })
        .collect()
}

/// The always-on de Sitter spectrum written out directly.
pub fn planck_total(weight_sum: f64, coupling: f64, detuning: f64, kappa: f64) -> f64 {
    coupling * coupling / (kappa * detuning) * 2.0 * PI / ((2.0 * PI * detuning / kappa).exp() - 1.0) * weight_sum
}
