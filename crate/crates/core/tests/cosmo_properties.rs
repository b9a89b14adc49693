use ioncosmo_core::cosmo::{
    build_conformal_map, detuning_schedule, lamb_dicke_drift, laser_frequency_schedule, laser_modulation_span,
    window_transform, ConformalMap, CosmoError, ScaleFactorModel, TabulatedScaleFactor, TimeInterval, WindowSpec,
};
use ioncosmo_core::numerics::find_root_monotone;
use proptest::prelude::*;

const KAPPA: f64 = 0.2;

fn desitter_map(lo: f64, hi: f64) -> ConformalMap {
    build_conformal_map(
        &ScaleFactorModel::DeSitter { kappa: KAPPA },
        TimeInterval::new(lo, hi).unwrap(),
    )
    .unwrap()
}

fn tabulated_desitter(lo: f64, hi: f64, n: usize) -> ConformalMap {
    let samples: Vec<(f64, f64)> = (0..=n)
        .map(|k| {
            let t = lo + (hi - lo) * k as f64 / n as f64;
            (t, (KAPPA * t).exp())
        })
        .collect();
    let tab = TabulatedScaleFactor::new(&samples, 0.0, -1.0 / KAPPA).unwrap();
    build_conformal_map(&ScaleFactorModel::Tabulated(tab), TimeInterval::new(lo, hi).unwrap()).unwrap()
}

fn bumpy_table() -> ConformalMap {
    let samples: Vec<(f64, f64)> = (0..=80)
        .map(|k| {
            let t = k as f64 * 0.25;
            (t, 1.0 + 0.5 * t + 0.3 * (t).sin())
        })
        .collect();
    let tab = TabulatedScaleFactor::new(&samples, 0.0, 0.0).unwrap();
    build_conformal_map(&ScaleFactorModel::Tabulated(tab), TimeInterval::new(0.0, 20.0).unwrap()).unwrap()
}

fn every_model() -> Vec<ConformalMap> {
    vec![
        build_conformal_map(&ScaleFactorModel::Flat, TimeInterval::new(-20.0, 20.0).unwrap()).unwrap(),
        desitter_map(-10.0 / KAPPA, 10.0 / KAPPA),
        build_conformal_map(
            &ScaleFactorModel::PowerLaw { exponent: 0.5, t0: 1.0 },
            TimeInterval::new(0.1, 50.0).unwrap(),
        )
        .unwrap(),
        build_conformal_map(
            &ScaleFactorModel::PowerLaw { exponent: 1.0, t0: 2.0 },
            TimeInterval::new(0.5, 40.0).unwrap(),
        )
        .unwrap(),
        build_conformal_map(
            &ScaleFactorModel::PowerLaw {
                exponent: 2.0 / 3.0,
                t0: 1.0,
            },
            TimeInterval::new(1.0, 30.0).unwrap(),
        )
        .unwrap(),
        tabulated_desitter(-20.0, 20.0, 80),
        bumpy_table(),
    ]
}

fn sample_times(map: &ConformalMap, n: usize) -> Vec<f64> {
    let d = map.domain();
    (0..n)
        .map(|k| d.start + (d.end - d.start) * k as f64 / (n - 1) as f64)
        .collect()
}

#[test]
fn forward_map_strictly_increasing() {
    for map in every_model() {
        let chis: Vec<f64> = sample_times(&map, 1000).iter().map(|&t| map.chi(t).unwrap()).collect();
        assert!(chis.windows(2).all(|w| w[1] > w[0]), "{:?}", map.model());
    }
}

#[test]
fn round_trip() {
    for map in every_model() {
        for t in sample_times(&map, 1000) {
            let back = map.time(map.chi(t).unwrap()).unwrap();
            assert!(
                (back - t).abs() <= 1e-10 * t.abs().max(1.0),
                "{:?} t={t} back={back}",
                map.model()
            );
        }
    }
}

#[test]
fn desitter_round_trip_over_twenty_efolds() {
    let map = desitter_map(-10.0 / KAPPA, 10.0 / KAPPA);
    for k in 0..=2000 {
        let t = (-10.0 + k as f64 * 0.01) / KAPPA;
        let back = map.time(map.chi(t).unwrap()).unwrap();
        assert!((back - t).abs() <= 1e-10 * t.abs().max(1.0));
    }
}

#[test]
fn desitter_derivative_matches_finite_differences() {
    let map = desitter_map(-30.0, 30.0);
    for k in 0..=50 {
        let t = -25.0 + k as f64;
        let h = 1e-4;
        let fd = (map.chi(t + h).unwrap() - map.chi(t - h).unwrap()) / (2.0 * h);
        let exact = (-KAPPA * t).exp();
        assert!((fd - exact).abs() / exact < 1e-6);
        assert!((map.dchi_dt(t).unwrap() - exact).abs() <= 1e-15 * exact);
    }
}

#[test]
fn schedules_consistent_with_scale_factor() {
    let base = 0.7;
    for map in every_model() {
        let delta = detuning_schedule(&map, base);
        for t in sample_times(&map, 200) {
            let a = map.scale_factor(t).unwrap();
            let got = delta(map.chi(t).unwrap()).unwrap();
            assert!(
                (got - a * base).abs() <= 1e-10 * (a * base).abs().max(1.0),
                "{:?} t={t}",
                map.model()
            );
        }
    }
}

#[test]
fn two_dimensional_window_is_scale_times_envelope() {
    for map in every_model() {
        let d = map.domain();
        let span = d.end - d.start;
        let window = WindowSpec::tukey(d.start + 0.1 * span, d.end - 0.1 * span, 0.2).unwrap();
        let f = window_transform(&window, &map, 2).unwrap();
        for t in sample_times(&map, 200) {
            let chi = map.chi(t).unwrap();
            let t_back = map.time(chi).unwrap();
            let expect = map.scale_factor(t_back).unwrap() * window.value(t_back);
            let got = f(chi).unwrap();
            assert!((got - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }
    }
}

#[test]
fn window_transform_examples() {
    let flat = build_conformal_map(&ScaleFactorModel::Flat, TimeInterval::new(0.0, 10.0).unwrap()).unwrap();
    let w = WindowSpec::rectangular(2.0, 5.0).unwrap();
    let f = window_transform(&w, &flat, 3).unwrap();
    assert_eq!(f(1.0).unwrap(), 0.0);
    assert_eq!(f(3.0).unwrap(), 1.0);
    assert_eq!(f(6.0).unwrap(), 0.0);

    let ds = desitter_map(0.0, 20.0);
    let w = WindowSpec::rectangular(0.0, 20.0).unwrap();
    let f2 = window_transform(&w, &ds, 2).unwrap();
    let f4 = window_transform(&w, &ds, 4).unwrap();
    for t in [1.0, 5.0, 13.0] {
        let chi = ds.chi(t).unwrap();
        let expect = -1.0 / (KAPPA * chi);
        assert!((f2(chi).unwrap() - expect).abs() / expect < 1e-12);
        assert!((f4(chi).unwrap() - 1.0).abs() < 1e-15);
    }
    assert!(window_transform(&w, &ds, 1).is_err());
}

#[test]
fn desitter_schedule_examples() {
    let map = desitter_map(-5.0, 30.0);
    let anchor = -1.0 / KAPPA;
    assert!((map.chi(0.0).unwrap() - anchor).abs() < 1e-15);
    let delta = detuning_schedule(&map, 1.0);
    assert!((delta(anchor).unwrap() - 1.0).abs() < 1e-14);
    let t_end = 15.0;
    let chi_end = -(-KAPPA * t_end).exp() / KAPPA;
    let expect = (KAPPA * t_end).exp();
    assert!((delta(chi_end).unwrap() - expect).abs() / expect < 1e-12);

    let omega_a = 1000.0;
    let laser = laser_frequency_schedule(&map, 1.0, omega_a);
    assert!((laser(anchor).unwrap() - (omega_a - 1.0)).abs() < 1e-12);
}

#[test]
fn flat_schedules_are_constant() {
    let map = build_conformal_map(&ScaleFactorModel::Flat, TimeInterval::new(0.0, 10.0).unwrap()).unwrap();
    let delta = detuning_schedule(&map, 0.3);
    let laser = laser_frequency_schedule(&map, 0.3, 5.0);
    let drift = lamb_dicke_drift(&map, 0.3, 4.7).unwrap();
    for chi in [0.0, 3.3, 10.0] {
        assert_eq!(delta(chi).unwrap(), 0.3);
        assert_eq!(laser(chi).unwrap(), 4.7);
        assert_eq!(drift(chi).unwrap(), 1.0);
    }
}

#[test]
fn lamb_dicke_drift_examples() {
    let map = desitter_map(0.0, 20.0);
    let omega_l = 1000.0;
    let drift = lamb_dicke_drift(&map, 1.0, omega_l).unwrap();
    let t_two = 2f64.ln() / KAPPA;
    let d = 1.0 - drift(map.chi(t_two).unwrap()).unwrap();
    assert!((d - 1e-3).abs() < 1e-12, "{d}");
    let t_21 = 21f64.ln() / KAPPA;
    let d = 1.0 - drift(map.chi(t_21).unwrap()).unwrap();
    assert!((d - 2e-2).abs() < 1e-12, "{d}");
    assert!(lamb_dicke_drift(&map, 1.0, 0.0).is_err());
}

#[test]
fn modulation_span_for_twenty_one_fold_expansion() {
    let t_end = 21f64.ln() / KAPPA;
    let map = desitter_map(0.0, t_end);
    let span = laser_modulation_span(&map, 1.0, 0.0, t_end).unwrap();
    assert!((span - 20.0).abs() < 1e-12);
}

#[test]
fn tabulated_exponential_matches_closed_form() {
    let exact = desitter_map(-20.0, 20.0);
    let tab = tabulated_desitter(-20.0, 20.0, 80);
    for t in sample_times(&exact, 1001) {
        let a = exact.chi(t).unwrap();
        let b = tab.chi(t).unwrap();
        assert!((a - b).abs() <= 1e-8 * a.abs(), "t={t}: {a} vs {b}");
    }
}

#[test]
fn tabulated_inverse_at_anchor() {
    let tab = tabulated_desitter(-20.0, 20.0, 80);
    let t = tab.time(-1.0 / KAPPA).unwrap();
    assert!(t.abs() <= 1e-10, "{t}");
    let t = find_root_monotone(|t| tab.chi(t).unwrap() + 1.0 / KAPPA, -20.0, 20.0, 1e-12).unwrap();
    assert!(t.abs() <= 1e-10, "{t}");
}

#[test]
fn evaluation_outside_domain_is_an_error() {
    let map = desitter_map(0.0, 10.0);
    assert!(matches!(map.chi(10.5), Err(CosmoError::DomainExceeded { .. })));
    assert!(matches!(map.chi(-0.5), Err(CosmoError::DomainExceeded { .. })));
    assert!(matches!(map.time(-0.01), Err(CosmoError::DomainExceeded { .. })));
}

#[test]
fn invalid_models_rejected() {
    let d = TimeInterval::new(0.0, 1.0).unwrap();
    assert!(build_conformal_map(&ScaleFactorModel::DeSitter { kappa: 0.0 }, d).is_err());
    assert!(build_conformal_map(&ScaleFactorModel::DeSitter { kappa: -1.0 }, d).is_err());
    assert!(build_conformal_map(&ScaleFactorModel::PowerLaw { exponent: 0.5, t0: 1.0 }, d).is_err());
    assert!(TimeInterval::new(1.0, 1.0).is_err());
    assert!(WindowSpec::rectangular(2.0, 1.0).is_err());
    assert!(WindowSpec::tukey(0.0, 1.0, 0.6).is_err());
}

proptest! {
    #[test]
    fn desitter_round_trip_any_rate(kappa in 0.01f64..2.0, x in -10.0f64..10.0) {
        let t = x / kappa;
        let map = build_conformal_map(
            &ScaleFactorModel::DeSitter { kappa },
            TimeInterval::new(-10.0 / kappa, 10.0 / kappa).unwrap(),
        ).unwrap();
        let back = map.time(map.chi(t).unwrap()).unwrap();
        prop_assert!((back - t).abs() <= 1e-10 * t.abs().max(1.0));
    }

    #[test]
    fn power_law_round_trip(q in -1.5f64..1.5, t in 0.2f64..30.0) {
        let map = build_conformal_map(
            &ScaleFactorModel::PowerLaw { exponent: q, t0: 1.0 },
            TimeInterval::new(0.2, 30.0).unwrap(),
        ).unwrap();
        let back = map.time(map.chi(t).unwrap()).unwrap();
        prop_assert!((back - t).abs() <= 1e-10 * t.max(1.0));
        prop_assert!(map.dchi_dt(t).unwrap() > 0.0);
    }
}

#[test]
fn wide_coarse_table_keeps_late_time_digits() {
    let exact = desitter_map(-10.0 / KAPPA, 10.0 / KAPPA);
    let tab = tabulated_desitter(-10.0 / KAPPA, 10.0 / KAPPA, 100);
    for t in sample_times(&exact, 1001) {
        let a = exact.chi(t).unwrap();
        let b = tab.chi(t).unwrap();
        assert!((a - b).abs() <= 1e-8 * a.abs(), "t={t}: {a} vs {b}");
        assert!((tab.time(b).unwrap() - t).abs() <= 1e-10 * t.abs().max(1.0));
    }
}
