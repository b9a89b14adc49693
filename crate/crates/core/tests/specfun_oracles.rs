#![allow(clippy::excessive_precision)]

mod common;

use common::{c, incomplete_gamma_by_quadrature, rel_err};
use ioncosmo_core::specfun::{gamma, regularized_q, upper_incomplete_gamma, SpecfunError};
use ioncosmo_core::ComplexValue;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[test]
fn imaginary_z_rotated_argument_against_contour_quadrature() {
    let z = c(0.0, 1.0);
    let b = c(0.0, -2.0);
    let oracle = incomplete_gamma_by_quadrature(z, b, 400_000);
    let value = upper_incomplete_gamma(z, b).unwrap();
    assert!(rel_err(value, oracle) < 1e-8, "{value} vs {oracle}");
}

#[test]
fn incomplete_gamma_over_tested_domain() {
    let cases = [
        (c(0.0, 1.0), c(0.0, -0.01)),
        (c(0.0, -3.0), c(0.0, -0.5)),
        (c(0.0, 5.0), c(0.0, -40.0)),
        (c(2.5, 1.0), c(1.0, 1.0)),
        (c(0.5, -2.0), c(10.0, -3.0)),
        (c(-1.5, 0.5), c(3.0, 0.2)),
        (c(4.0, 0.0), c(100.0, 0.0)),
        (c(12.0, 6.0), c(5.0, -5.0)),
        (c(1.0, 15.0), c(0.0, -20.0)),
        (c(0.0, 0.2), c(0.0, -99.0)),
    ];
    for (z, b) in cases {
        let oracle = incomplete_gamma_by_quadrature(z, b, 800_000);
        let value = upper_incomplete_gamma(z, b).unwrap();
        assert!(rel_err(value, oracle) < 1e-10, "z={z} b={b}: {value} vs {oracle}");
    }
}

// Reference values from a 30-digit evaluation.
#[test]
fn near_negative_axis_and_steep_imaginary_order() {
    let cases = [
        (
            c(5.623914669354579, -8.751349114586366),
            c(-17.161704527129775, -2.7464126772020054),
            c(-27.202731814598111, 46.340773681269502),
        ),
        (c(7.0, 10.0), c(-25.5, 2.0), c(-293118.71343981268, -1253050.6595030825)),
        (c(0.0, 2.0), c(-3.0, -0.5), c(559.45518454870388, -1947.0366074038326)),
        (
            c(-16.8, -0.7),
            c(-10.9, -14.2),
            c(5.8024816219858506e-19, 2.8248904087641878e-19),
        ),
        (
            c(-1.4, 18.8),
            c(0.2, 2.5),
            c(-8.1472025240500178e-16, 1.0622940932120384e-14),
        ),
    ];
    for (z, b, expect) in cases {
        let v = upper_incomplete_gamma(z, b).unwrap();
        assert!(rel_err(v, expect) < 1e-10, "z={z} b={b}: {v} vs {expect}");
    }
}

#[test]
fn recurrence_on_random_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut tested = 0;
    while tested < 100 {
        let z = c(rng.gen_range(0.0..20.0), rng.gen_range(-20.0..20.0));
        if z.norm() < 0.1 || z.norm() > 20.0 || z.re <= 0.0 {
            continue;
        }
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        assert!(rel_err(lhs, rhs) < 1e-11, "z = {z}");
        tested += 1;
    }
}

#[test]
fn modulus_identity_on_imaginary_axis() {
    for beta in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let g = gamma(c(0.0, beta)).unwrap();
        let lhs = g.norm_sqr() * beta * (PI * beta).sinh();
        assert!((lhs - PI).abs() / PI < 1e-10, "beta {beta}: {lhs}");
    }
}

#[test]
fn gamma_accuracy_at_large_argument() {
    // Γ(n) = (n−1)! up to the |z| ≤ 50 edge.
    let mut fact = 1.0f64;
    for n in 1..=50u32 {
        if n > 1 {
            fact *= (n - 1) as f64;
        }
        let g = gamma(c(n as f64, 0.0)).unwrap();
        assert!(rel_err(g, c(fact, 0.0)) < 1e-12, "n = {n}");
    }
}

#[test]
fn pole_errors() {
    assert!(matches!(gamma(c(0.0, 0.0)), Err(SpecfunError::Pole(_))));
    assert!(matches!(gamma(c(-7.0, 0.0)), Err(SpecfunError::Pole(_))));
}

#[test]
fn small_argument_limit() {
    // The gap Γ(z) − Γ(z, b) ~ b^z / z, so this tolerance needs Re z ≳ 1
    // and modest Im z.
    for z in [c(1.0, 0.0), c(1.0, 0.5), c(3.0, -1.0), c(2.0, 5.0)] {
        let g = gamma(z).unwrap();
        for mag in [1e-6, 1e-7] {
            for phase in [0.0, -PI / 2.0, 1.0] {
                let b = ComplexValue::from_polar(mag, phase);
                let v = upper_incomplete_gamma(z, b).unwrap();
                assert!(rel_err(v, g) < 1e-5, "z={z} b={b}");
            }
        }
    }
}

#[test]
fn quotient_is_composed_exactly() {
    let z = c(0.0, 2.0);
    let b = c(0.0, -5.0);
    let q = regularized_q(z, b).unwrap();
    assert_eq!(q, upper_incomplete_gamma(z, b).unwrap() / gamma(z).unwrap());
}

#[test]
fn worked_examples() {
    let v = upper_incomplete_gamma(c(1.0, 0.0), c(2.0, 0.0)).unwrap();
    assert!(rel_err(v, c((-2.0f64).exp(), 0.0)) < 1e-14);
    let v = upper_incomplete_gamma(c(3.0, 0.0), c(0.0, 0.0)).unwrap();
    assert!(rel_err(v, c(2.0, 0.0)) < 1e-14);
    let v = regularized_q(c(2.0, 0.0), c(0.0, 0.0)).unwrap();
    assert!(rel_err(v, c(1.0, 0.0)) < 1e-14);
    let v = regularized_q(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    assert!(rel_err(v, c((-1.0f64).exp(), 0.0)) < 1e-14);
}

proptest! {
    #[test]
    fn incomplete_recurrence(
        zr in -3.0f64..10.0,
        zi in -10.0f64..10.0,
        bmag in 0.01f64..100.0,
        barg in -3.0f64..3.0,
    ) {
        let z = c(zr, zi);
        let b = ComplexValue::from_polar(bmag, barg);
        prop_assume!(gamma(z).is_ok());
        let lhs = upper_incomplete_gamma(z + 1.0, b).unwrap();
        let rhs = z * upper_incomplete_gamma(z, b).unwrap() + (z * b.ln() - b).exp();
        let scale = lhs.norm().max(rhs.norm());
        prop_assert!((lhs - rhs).norm() <= 1e-9 * scale, "z={} b={} {} vs {}", z, b, lhs, rhs);
    }

    #[test]
    fn gamma_conjugate_symmetry(zr in -5.0f64..10.0, zi in 0.01f64..10.0) {
        let z = c(zr, zi);
        let a = gamma(z.conj()).unwrap();
        let b = gamma(z).unwrap().conj();
        prop_assert!(rel_err(a, b) < 1e-13);
    }

    #[test]
    fn returned_values_are_finite(zi in -20.0f64..20.0, bi in 0.01f64..100.0) {
        let v = upper_incomplete_gamma(c(0.0, zi), c(0.0, -bi));
        if let Ok(v) = v {
            prop_assert!(v.re.is_finite() && v.im.is_finite());
        }
    }
}
