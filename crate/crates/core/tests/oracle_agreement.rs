//! Production paths against the independent reference implementations.

use fourier_clt::covariance::{covariance_matrix_closed_form, FrequencyTuple};
use fourier_clt::mclab::frequency_tuple_sampler;
use fourier_clt::metrics::{target_cross_term, target_self_term};
use fourier_clt::oracles::{oracle_covariance, oracle_fourier_sum, oracle_mmd_terms};
use fourier_clt::rng::stream_rng;
use fourier_clt::spectral::{fourier_sum_checked, fourier_sum_grid_checked};
use fourier_clt::{sample_coefficients, CoefficientModel, Family};
use rand::Rng;

#[test]
fn fourier_sum_matches_oracle_on_random_cases() {
    let mut rng = stream_rng(11, 0);
    let families = [Family::Rademacher, Family::GaussianStd, Family::ExponentialCentered];
    for case in 0..1000u64 {
        let n = rng.random_range(1..=2000);
        let model = CoefficientModel::new(families[case as usize % 3]).unwrap();
        let a = sample_coefficients(&model, n, 12, case).unwrap();
        let nu: f64 = rng.random_range(-0.5..=0.5);
        let fast = fourier_sum_checked(a.coefficients(), nu).unwrap();
        let slow = oracle_fourier_sum(a.coefficients(), nu).value;
        let scale = a.coefficients().iter().map(|x| x.abs()).sum::<f64>() / (n as f64).sqrt();
        let err = (fast.re - slow.0).abs().max((fast.im - slow.1).abs());
        assert!(err <= 1e-10 * scale.max(1.0), "case {case}: n={n} nu={nu} err={err}");
    }
}

#[test]
fn rademacher_4096_at_0_137() {
    let model = CoefficientModel::new(Family::Rademacher).unwrap();
    let a = sample_coefficients(&model, 4096, 2024, 0).unwrap();
    let fast = fourier_sum_checked(a.coefficients(), 0.137).unwrap();
    let slow = oracle_fourier_sum(a.coefficients(), 0.137);
    assert!(slow.error_estimate < 1e-12);
    assert!((fast.re - slow.value.0).abs() <= 1e-10);
    assert!((fast.im - slow.value.1).abs() <= 1e-10);
}

#[test]
fn oracle_single_term_is_exact() {
    let r = oracle_fourier_sum(&[1.0], 0.3).value;
    let angle = 0.6 * std::f64::consts::PI;
    assert!((r.0 - angle.cos()).abs() < 1e-15);
    assert!((r.1 + angle.sin()).abs() < 1e-15);
}

#[test]
fn oracle_grid_parseval() {
    let model = CoefficientModel::new(Family::GaussianStd).unwrap();
    let a = sample_coefficients(&model, 256, 3, 0).unwrap();
    let a = a.coefficients();
    let energy: f64 = (1..=256)
        .map(|l| {
            let nu = l as f64 / 256.0;
            let nu = if nu > 0.5 { nu - 1.0 } else { nu };
            let (re, im) = oracle_fourier_sum(a, nu).value;
            re * re + im * im
        })
        .sum();
    let direct: f64 = a.iter().map(|x| x * x).sum();
    assert!((energy - direct).abs() / direct <= 1e-12);
    let grid = fourier_sum_grid_checked(a).unwrap();
    let grid_energy: f64 = grid.iter().map(|v| v.norm_sqr()).sum();
    assert!((grid_energy - direct).abs() / direct <= 1e-12);
}

#[test]
fn covariance_matches_oracle() {
    for t in 0..100u64 {
        let tuple = frequency_tuple_sampler(1 + (t % 4) as usize, 300 + t).unwrap();
        for n in [1usize, 2, 17, 1024] {
            let fast = covariance_matrix_closed_form(&tuple, n);
            let slow = oracle_covariance(tuple.nus(), n).value;
            for (i, row) in slow.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    assert!(
                        (fast[(i, j)] - v).abs() <= 1e-10,
                        "tuple {:?} n={n} entry ({i},{j}): {} vs {v}",
                        tuple.nus(),
                        fast[(i, j)]
                    );
                }
            }
        }
    }
}

#[test]
fn oracle_covariance_special_case_and_traces() {
    let c = oracle_covariance(&[0.25], 4).value;
    assert!((c[0][0] - 0.5).abs() < 1e-15 && (c[1][1] - 0.5).abs() < 1e-15);
    assert!(c[0][1].abs() < 1e-15 && c[1][0].abs() < 1e-15);
    let c = oracle_covariance(&[0.11, -0.37, 0.2], 31).value;
    for l in 0..3 {
        assert!((c[2 * l][2 * l] + c[2 * l + 1][2 * l + 1] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn mmd_terms_match_monte_carlo() {
    let est = oracle_mmd_terms(1.0, &[[0.0, 0.0]], 1_000_000, 9);
    assert!(est.self_term.error_estimate <= 1e-3);
    assert!(est.cross[0].error_estimate <= 1e-3);
    assert!((est.self_term.value - 0.5).abs() <= 4.0 * est.self_term.error_estimate);
    assert!((est.cross[0].value - 2.0 / 3.0).abs() <= 4.0 * est.cross[0].error_estimate);
    assert_eq!(target_self_term(1.0), 0.5);
    assert!((target_cross_term([0.0, 0.0], 1.0) - 2.0 / 3.0).abs() < 1e-15);

    let wide = oracle_mmd_terms(1e4, &[[0.3, -0.2]], 10_000, 1);
    assert!((wide.self_term.value - 1.0).abs() < 1e-6);
    assert!((wide.cross[0].value - 1.0).abs() < 1e-6);
    assert!((target_self_term(1e4) - 1.0).abs() < 1e-6);
    assert!((target_cross_term([0.3, -0.2], 1e4) - 1.0).abs() < 1e-6);
}

#[test]
fn frequency_tuple_strictness_agrees_with_oracle_view() {
    // A pair with equal moduli makes the limit singular: the oracle shows
    // a non-vanishing cross block.
    let c = oracle_covariance(&[0.2, -0.2], 4096).value;
    assert!(c[0][2].abs() > 0.4);
    assert!(FrequencyTuple::new(vec![0.2, -0.2]).is_err());
}
