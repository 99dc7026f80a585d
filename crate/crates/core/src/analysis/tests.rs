use super::*;
use crate::simulation::{monte_carlo, Method, SimConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Counting definition: sup_x max(|F_N(x) - F(x)|, |F_N(x-) - F(x)|) over sample points.
fn ks_brute_force<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for &x in samples {
        let le = samples.iter().filter(|&&s| s <= x).count() as f64 / n;
        let lt = samples.iter().filter(|&&s| s < x).count() as f64 / n;
        let c = cdf(x);
        d = d.max((le - c).abs()).max((lt - c).abs());
    }
    d
}

fn normals(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn single_point_at_median() {
    assert_eq!(ks_distance(&[0.0], normal::cdf).unwrap(), 0.5);
}

#[test]
fn ks_input_validation() {
    assert!(ks_distance(&[], normal::cdf).is_err());
    assert!(ks_distance(&[1.0, 0.0], normal::cdf).is_err());
    assert!(ks_distance(&[f64::NAN], normal::cdf).is_err());
}

#[test]
fn brute_force_agreement_on_random_small_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..1000 {
        let n = rng.random_range(1..=50);
        // coarse rounding produces ties
        let mut s: Vec<f64> = (0..n).map(|_| (rng.sample::<f64, _>(StandardNormal) * 4.0).round() / 4.0).collect();
        s.sort_by(f64::total_cmp);
        assert_eq!(ks_distance(&s, normal::cdf).unwrap(), ks_brute_force(&s, normal::cdf));
        let own = s.clone();
        let ecdf = move |x: f64| own.iter().filter(|&&v| v <= x).count() as f64 / own.len() as f64;
        assert_eq!(ks_distance(&s, &ecdf).unwrap(), ks_brute_force(&s, &ecdf));
    }
}

#[test]
fn normal_samples_pass_kolmogorov_bound() {
    let n = 100_000;
    let s = normals(1, n);
    assert!(ks_distance(&s, normal::cdf).unwrap() < 1.95 / (n as f64).sqrt());
}

#[test]
fn kolmogorov_tail() {
    assert!((kolmogorov_survival(1.358) - 0.05).abs() < 5e-4);
    assert!((kolmogorov_survival(1.949) - 0.001).abs() < 5e-5);
    assert_eq!(kolmogorov_survival(0.0), 1.0);
}

#[test]
fn two_sample() {
    let a = normals(2, 5000);
    let b = normals(3, 4000);
    assert!(ks_two_sample(&a, &b).unwrap().p_value > 0.001);
    let shifted: Vec<f64> = b.iter().map(|x| x + 0.2).collect();
    assert!(ks_two_sample(&a, &shifted).unwrap().p_value < 1e-6);
    let same = ks_two_sample(&a, &a).unwrap();
    assert_eq!(same.statistic, 0.0);
}

#[test]
fn moments_of_normal_sample() {
    let n = 100_000;
    let s = normals(4, n);
    let m = sample_moments(&s).unwrap();
    assert!(m.mean.abs() < 4.0 / (n as f64).sqrt());
    assert!((m.variance - 1.0).abs() < 4.0 * (2.0 / n as f64).sqrt());
    assert!((m.skewness_se / (6.0 / n as f64).sqrt() - 1.0).abs() < 0.05);
    assert!(m.skewness.abs() < 4.0 * m.skewness_se);
}

#[test]
fn cubic_roots() {
    // (x-1)(x-2)(x+3) = x³ - 7x + 6
    let r = depressed_cubic_roots(-7.0, 6.0);
    for (got, want) in r.iter().zip([-3.0, 1.0, 2.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    let r = depressed_cubic_roots(1.0, 2.0);
    assert_eq!(r.len(), 1);
    assert!((r[0].powi(3) + r[0] + 2.0).abs() < 1e-12);
}

fn small_n_law() -> CorrectedLaw {
    let params = SpikeParams::from_ell_factor(0.3, 50, 50).unwrap();
    EdgeworthApprox::new(&params, GammaMode::FiniteGammaN).unwrap().law()
}

#[test]
fn rectified_cdf_is_a_distribution_function() {
    let law = small_n_law();
    let g = RectifiedCdf::new(law);
    assert!(law.density(-6.0) < 0.0);
    let mut prev = 0.0;
    for k in 0..=4000 {
        let x = -20.0 + k as f64 * 0.01;
        let v = g.eval(x);
        assert!((0.0..=1.0).contains(&v));
        assert!(v >= prev, "x = {x}");
        prev = v;
    }
    for x in [-1.0, 0.0, 1.5] {
        assert_eq!(g.eval(x), law.cdf(x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn rectified_cdf_monotone(factor in 0.1f64..2.0, n in 10usize..500, p in 1usize..500) {
        let params = SpikeParams::from_ell_factor(factor, n, p).unwrap();
        let g = RectifiedCdf::new(EdgeworthApprox::new(&params, GammaMode::FiniteGammaN).unwrap().law());
        let xs: Vec<f64> = (0..=600).map(|k| -15.0 + k as f64 * 0.05).collect();
        for w in xs.windows(2) {
            prop_assert!(g.eval(w[0]) <= g.eval(w[1]));
        }
    }
}

fn samples(n: usize, p: usize, factor: f64, reps: usize) -> (SampleSet, SpikeParams) {
    let params = SpikeParams::from_ell_factor(factor, n, p).unwrap();
    let cfg = SimConfig::new(params, reps, 31, Method::Secular).unwrap().with_workers(1).unwrap();
    (monte_carlo(&cfg).unwrap(), params)
}

#[test]
fn compare_small_sample() {
    let (set, params) = samples(30, 3, 0.5, 10);
    let report = compare(&set, &params).unwrap();
    assert_eq!(report.fit.n_samples, 10);
    for ks in [report.fit.ks_vs_normal, report.fit.ks_vs_corrected] {
        assert!((0.0..=1.0).contains(&ks));
    }
    let approx = EdgeworthApprox::new(&params, GammaMode::FiniteGammaN).unwrap();
    assert!((report.fit.predicted_skewness - approx.predicted_skewness()).abs() < 1e-12);
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    for key in ["ks_vs_normal", "ks_vs_corrected", "sample_mean", "sample_var", "sample_skewness", "predicted_skewness", "validity_index", "n_samples", "metadata"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(compare(&set, &params).unwrap(), report);
}

#[test]
fn compare_rejects_mismatched_params() {
    let (set, _) = samples(30, 3, 0.5, 5);
    let other = SpikeParams::from_ell_factor(0.6, 30, 3).unwrap();
    assert!(matches!(compare(&set, &other), Err(Error::Domain(_))));
    let other = SpikeParams::from_ell_factor(0.5, 30, 4).unwrap();
    assert!(compare(&set, &other).is_err());
}

#[test]
fn figure_structure() {
    for (n, gamma) in [(50, 0.1), (50, 1.0), (100, 0.1), (100, 1.0)] {
        for factor in [0.3, 0.5] {
            let p = (gamma * n as f64) as usize;
            let (set, params) = samples(n, p, factor, 2000);
            let fig = figure_data(&set, &params, DEFAULT_BINS, DEFAULT_GRID_POINTS).unwrap();
            let m = &fig.metadata;
            assert!((fig.bulk_edge - (1.0 + gamma.sqrt()).powi(2)).abs() < 1e-12);
            let area: f64 = fig.histogram_edges.windows(2).zip(&fig.histogram_density).map(|(e, d)| (e[1] - e[0]) * d).sum();
            assert!((area - 1.0).abs() < 1e-9);
            let counted: f64 = fig.histogram_edges.windows(2).zip(&fig.histogram_density).map(|(e, d)| (e[1] - e[0]) * d * 2000.0).sum();
            assert!((counted - 2000.0).abs() < 1e-6);
            assert!((m.corrected_mass_trapezoid - m.corrected_mass_exact).abs() < 1e-6);
            assert!((m.normal_mass_trapezoid - m.normal_mass_exact).abs() < 1e-6);
            assert!(m.normal_mass_exact > 0.99);
            assert_eq!(m.predicted_crossings, 3);
            assert_eq!(m.density_crossings, 3, "n={n} gamma={gamma} factor={factor}");
            let lo = set.ell_hat().into_iter().fold(f64::INFINITY, f64::min);
            assert!(fig.grid[0] < lo);
        }
    }
}

#[test]
fn figure_bulk_edge_gamma_one() {
    let (set, params) = samples(20, 20, 0.5, 50);
    let fig = figure_data(&set, &params, 10, 100).unwrap();
    assert!((fig.bulk_edge - 4.0).abs() < 1e-12);
    assert!(fig.density_csv().starts_with("y,f_corrected,f_normal\n"));
    assert_eq!(fig.density_csv().lines().count(), 101);
    assert!(fig.histogram_csv().starts_with("bin_left,bin_right,density\n"));
    assert_eq!(fig.histogram_csv().lines().count(), 11);
    let meta: serde_json::Value = serde_json::from_str(&fig.metadata_json()).unwrap();
    assert_eq!(meta["bins"], 10);
    assert!(figure_data(&set, &params, 9, 100).is_err());
    assert!(figure_data(&set, &params, 10, 99).is_err());
}
