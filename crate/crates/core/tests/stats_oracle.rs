mod common;

use bubblelab::stats::{ols2, t_cdf, t_quantile, Confidence};
use common::{brute_force_line, t_quantile_oracle, Gauss};

#[test]
fn quantile_matches_quadrature_oracle() {
    for &(p, df) in &[
        (0.975, 2),
        (0.975, 1),
        (0.95, 5),
        (0.99, 10),
        (0.9, 30),
        (0.975, 100),
    ] {
        let got = t_quantile(p, df).unwrap();
        let want = t_quantile_oracle(p, df);
        assert!((got - want).abs() < 1e-6, "p={p} df={df}: {got} vs {want}");
    }
    assert!((t_quantile(0.975, 2).unwrap() - 4.30265273).abs() < 1e-6);
}

#[test]
fn quantile_cdf_round_trip() {
    let dfs: Vec<u32> = (1..=30).chain([100, 1000]).collect();
    for &df in &dfs {
        for &p in &[0.9, 0.95, 0.975, 0.99] {
            let q = t_quantile(p, df).unwrap();
            let back = t_cdf(q, df as f64);
            assert!((back - p).abs() < 1e-8, "df={df} p={p}: cdf(q)={back}");
        }
    }
}

#[test]
fn ols_matches_brute_force() {
    let mut g = Gauss::new(11);
    for case in 0..100 {
        let n = 5 + (g.uniform() * 11.0) as usize;
        let (a, b) = (4.0 * g.normal(), 2.0 * g.normal());
        let x: Vec<f64> = (0..n).map(|_| 10.0 * g.uniform() - 5.0).collect();
        let y: Vec<f64> = x.iter().map(|x| a + b * x + 0.5 * g.normal()).collect();
        let fit = ols2(&x, &y).unwrap();
        let (ra, rb) = brute_force_line(&x, &y);
        assert!(
            (fit.a - ra).abs() < 1e-6,
            "case {case}: a {} vs {ra}",
            fit.a
        );
        assert!(
            (fit.b - rb).abs() < 1e-6,
            "case {case}: b {} vs {rb}",
            fit.b
        );
    }
}

#[test]
fn slope_interval_coverage() {
    let mut g = Gauss::new(2024);
    let x: Vec<f64> = (0..12).map(|i| i as f64 * 0.5).collect();
    let (a, b) = (1.0, 0.3);
    let trials = 10_000;
    let mut hits = 0;
    for _ in 0..trials {
        let y: Vec<f64> = x.iter().map(|x| a + b * x + g.normal()).collect();
        let fit = ols2(&x, &y).unwrap();
        let half = fit.b - fit.b_lower;
        if (fit.b - half..=fit.b + half).contains(&b) {
            hits += 1;
        }
    }
    let coverage = hits as f64 / trials as f64;
    assert!((coverage - 0.95).abs() <= 0.01, "coverage {coverage}");
}

#[test]
fn one_sided_lower_bound_coverage() {
    let mut g = Gauss::new(7);
    let x: Vec<f64> = (0..8).map(f64::from).collect();
    let trials = 4000;
    let mut hits = 0;
    for _ in 0..trials {
        let y: Vec<f64> = x.iter().map(|x| 2.0 - 0.1 * x + 0.3 * g.normal()).collect();
        let fit = bubblelab::stats::ols2_with(&x, &y, Confidence::OneSided).unwrap();
        if fit.b_lower <= -0.1 {
            hits += 1;
        }
    }
    let coverage = hits as f64 / trials as f64;
    assert!((coverage - 0.95).abs() < 0.015, "coverage {coverage}");
}
