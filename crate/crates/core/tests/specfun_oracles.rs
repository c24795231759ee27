mod common;

use common::{rel, simpson_richardson, Hp, EULER_GAMMA_40};
use vactorque::quadrature::{integrate_1d, integrate_semi_infinite, QuadratureConfig};
use vactorque::specfun::{
    delta, digamma, phi, phi_ratio, sine_integral, thermal_f, thermal_integral, zeta_even,
    ThermalFunctionOrder,
};

#[test]
fn delta_matches_high_precision() {
    let mut hp = Hp::new();
    for v in [1.0, 10.0, 3.7, 42.0] {
        assert!(rel(delta(v).unwrap(), hp.delta(v)) < 1e-12, "v = {v}");
    }
    assert_eq!(delta(0.0).unwrap(), 0.0);
    // small v: absolute bound 1e-15 v⁶
    for v in [0.5, 0.1, 0.01] {
        assert!(
            (delta(v).unwrap() - hp.delta(v)).abs() <= 1e-15 * v.powi(6),
            "v = {v}"
        );
    }
}

#[test]
fn phi_matches_high_precision() {
    let mut hp = Hp::new();
    assert_eq!(phi(0.0).unwrap(), 0.0);
    for i in 0..200 {
        let v = 10f64.powf(-3.0 + 5.3 * i as f64 / 199.0);
        let exact = hp.phi(v);
        assert!(rel(phi(v).unwrap(), exact) < 1e-10, "v = {v}");
    }
}

#[test]
fn phi_small_argument_two_terms() {
    let mut hp = Hp::new();
    let v: f64 = 0.01;
    let two = -4.0 / 9.0 * v.powi(8) + 28.0 / 225.0 * v.powi(10);
    let got = phi(v).unwrap();
    assert!(rel(got, hp.phi(v)) < 1e-12);
    // next term is O(v¹²), so two terms already agree to ~v⁴
    assert!(rel(got, two) < 1e-6);
}

#[test]
fn phi_large_argument_form() {
    let mut hp = Hp::new();
    let v: f64 = 50.0;
    let got = phi(v).unwrap();
    assert!(rel(got, hp.phi(v)) < 1e-10);
    let lead = -v.powi(4) + v.powi(5) * (2.0 * v).sin() + 3.0 * v.powi(4) * (2.0 * v).cos();
    assert!((got - lead).abs() < 20.0 * v.powi(3));
}

#[test]
fn phi_ratio_limits_and_values() {
    let mut hp = Hp::new();
    assert_eq!(phi_ratio(0.0, 8).unwrap(), -4.0 / 9.0);
    assert_eq!(phi_ratio(0.0, 6).unwrap(), 0.0);
    assert!(rel(phi_ratio(1.0, 5).unwrap(), hp.phi(1.0)) < 1e-12);
    for n in 4..=8 {
        for v in [0.2, 0.9, 1.1, 7.5] {
            assert!(
                rel(phi_ratio(v, n).unwrap(), hp.phi_ratio(v, n as i32)) < 1e-10,
                "v = {v}, n = {n}"
            );
        }
    }
}

#[test]
fn sine_integral_matches_series() {
    let mut hp = Hp::new();
    assert_eq!(sine_integral(0.0).unwrap(), 0.0);
    for x in [1.0, 0.3, 4.0, 12.0, 37.0, 100.0] {
        assert!(
            rel(sine_integral(x).unwrap(), hp.sine_integral(x)) < 1e-12,
            "x = {x}"
        );
    }
    assert!((sine_integral(1.0).unwrap() - 0.946_083_070_367_183).abs() < 1e-14);
    assert!((sine_integral(1e6).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 2e-6);
}

#[test]
fn digamma_identities() {
    assert!(rel(digamma(1.0).unwrap(), -EULER_GAMMA_40) < 1e-14);
    assert!(rel(digamma(0.5).unwrap(), -EULER_GAMMA_40 - 2.0 * 2f64.ln()) < 1e-14);
    // ψ(10) = −γ + H₉
    let h9: f64 = (1..=9).map(|k| 1.0 / k as f64).sum();
    assert!(rel(digamma(10.0).unwrap(), h9 - EULER_GAMMA_40) < 1e-14);
    assert!(digamma(0.0).is_err() && digamma(-1.0).is_err());
}

#[test]
fn zeta_even_values() {
    let pi = std::f64::consts::PI;
    assert!(rel(zeta_even(1).unwrap(), pi * pi / 6.0) < 1e-15);
    assert!(rel(zeta_even(2).unwrap(), pi.powi(4) / 90.0) < 1e-15);
    assert!(rel(zeta_even(4).unwrap(), pi.powi(8) / 9450.0) < 1e-15);
    // ζ(16) by direct summation
    let direct: f64 = (1..50).map(|k| (k as f64).powi(-16)).sum();
    assert!(rel(zeta_even(8).unwrap(), direct) < 1e-15);
}

#[test]
fn thermal_functions_against_quadrature() {
    let cfg = QuadratureConfig {
        rel_tol: 1e-12,
        abs_tol: 1e-300,
        ..QuadratureConfig::default()
    };
    let f9_1 = integrate_semi_infinite(|x: f64| x.powi(9) / (x * x + 1.0) / x.exp_m1(), 0.0, &cfg)
        .unwrap();
    assert!(
        rel(
            thermal_f(ThermalFunctionOrder::F9, 1.0).unwrap(),
            f9_1.value
        ) < 1e-8
    );
    for n in [3, 9] {
        let order = ThermalFunctionOrder::new(n).unwrap();
        for t in [0.1, 1.0, 10.0] {
            assert!(
                rel(
                    thermal_f(order, t).unwrap(),
                    thermal_integral(n, t).unwrap()
                ) < 1e-8,
                "n = {n}, t = {t}"
            );
        }
    }
}

#[test]
fn f9_is_dominated_by_its_leading_power_at_high_temperature() {
    let t: f64 = 10.0;
    let lead = 5040.0 * zeta_even(4).unwrap() * t.powi(8);
    let r = thermal_f(ThermalFunctionOrder::F9, t).unwrap() / lead;
    assert!((r - 1.0).abs() < 0.02, "ratio {r}");
}

#[test]
fn f3_vanishes_at_low_temperature() {
    let a = thermal_f(ThermalFunctionOrder::F3, 1e-2).unwrap();
    let b = thermal_f(ThermalFunctionOrder::F3, 1e-3).unwrap();
    assert!(a > 0.0 && b > 0.0 && b < a && b < 1e-10);
}

#[test]
fn phi_over_v6_integral_matches_fixed_grid_oracle() {
    let cfg = QuadratureConfig {
        rel_tol: 1e-12,
        abs_tol: 1e-300,
        ..QuadratureConfig::default()
    };
    let got = integrate_1d(|v| phi_ratio(v, 6).unwrap(), 0.0, 20.0, &cfg).unwrap();
    let mut hp = Hp::new();
    let oracle = simpson_richardson(
        |v| if v == 0.0 { 0.0 } else { hp.phi_ratio(v, 6) },
        0.0,
        20.0,
        4096,
    );
    assert!(rel(got.value, oracle) < 1e-9, "{} vs {}", got.value, oracle);
}
