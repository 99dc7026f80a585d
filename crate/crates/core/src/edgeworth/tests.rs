use super::*;
use crate::quadrature;
use proptest::prelude::*;

fn params(ell: f64, n: usize, p: usize) -> SpikeParams {
    SpikeParams::new(ell, n, p).unwrap()
}

#[test]
fn centering_scaling_examples() {
    let (rho, sigma) = centering_scaling(3.0, 1.0).unwrap();
    assert!((rho - 4.5).abs() < 1e-15);
    assert!((sigma - 13.5f64.sqrt()).abs() < 1e-15);
    assert!((sigma - 3.674_235).abs() < 1e-6);
    let (rho, sigma) = centering_scaling(2.5, 1e-15).unwrap();
    assert!((rho - 2.5).abs() < 1e-13 && (sigma - SQRT_2 * 2.5).abs() < 1e-13);
    let (rho, sigma) = centering_scaling(2.0, 0.25).unwrap();
    assert!((rho - 2.5).abs() < 1e-15 && (sigma - 6f64.sqrt()).abs() < 1e-15);
    assert!(matches!(centering_scaling(1.9, 1.0), Err(Error::Subcritical { .. })));
}

#[test]
fn spike_params_construction() {
    let p = SpikeParams::from_gamma(3.0, 0.1, 100).unwrap();
    assert_eq!(p.p(), 10);
    assert_eq!(p.gamma_n(), 0.1);
    assert!(SpikeParams::with_gamma(3.0, 0.1, 100, 10).is_ok());
    assert!(SpikeParams::with_gamma(3.0, 0.11, 100, 10).is_err());
    assert!(SpikeParams::new(3.0, 0, 10).is_err());
    assert!(matches!(SpikeParams::new(1.5, 100, 100), Err(Error::Subcritical { .. })));
    let f = SpikeParams::from_ell_factor(0.5, 100, 10).unwrap();
    assert!((f.ell() - 1.974_341_649_025_257).abs() < 1e-14);
    assert!((f.ell_factor() - 0.5).abs() < 1e-15);
    assert!(dimension_for(0.001, 100).is_err());
}

#[test]
fn cumulant_example() {
    let a = cumulants(&params(3.0, 100, 100)).unwrap();
    assert!((a.kappa2 - 8.0 / 27.0).abs() < 1e-15);
    assert!((a.kappa3 - 64.0 / 81.0).abs() < 1e-15);
    assert!((a.mu_g - 2.0 / 9.0).abs() < 1e-15);
    assert!((a.kappa2 * a.sigma * a.sigma - 4.0).abs() < 1e-12);
    let tiny = cumulants(&params(3.0, 1_000_000_000, 1)).unwrap();
    assert!(tiny.mu_g < 1e-9 && tiny.alpha0 < 1e-8);
}

#[test]
fn p1_examples() {
    let pr = params(3.0, 100, 100);
    let v = p1(0.0, &pr, GammaMode::FiniteGammaN).unwrap();
    assert!((v - 1.0 / 6f64.sqrt()).abs() < 1e-15);
    assert!((v - 0.408_248).abs() < 1e-6);
    // γ = 0 leaves only (√2/3)(1 - x²)
    for &x in &[-2.0, 0.0, 0.5, 3.0] {
        let v = p1(x, &pr, GammaMode::LimitGamma(0.0)).unwrap();
        assert!((v - SQRT_2 / 3.0 * (1.0 - x * x)).abs() < 1e-15);
    }
    // at x = 1 only the constant term survives
    let at_one = p1(1.0, &pr, GammaMode::FiniteGammaN).unwrap();
    let expect = -SQRT_2 / 2.0 * 3.0 / 3f64.powf(1.5);
    assert!((at_one - expect).abs() < 1e-15 && at_one < 0.0);
    assert!(p1(0.0, &pr, GammaMode::LimitGamma(4.0)).is_err());
}

#[test]
fn corrected_cdf_examples() {
    let a = cumulants(&params(3.0, 100, 100)).unwrap();
    let v = corrected_cdf(0.0, &a, false);
    let expect = 0.5 + 0.1 / 6f64.sqrt() * normal::INV_SQRT_2PI;
    assert!((v - expect).abs() < 1e-15);
    assert!((v - 0.516_287).abs() < 1e-6);
    assert!(corrected_cdf(-40.0, &a, false).abs() < 1e-300);
    assert!((corrected_cdf(40.0, &a, false) - 1.0).abs() < 1e-15);
    let z = EdgeworthApprox::new(&params(3.0, 100, 100), GammaMode::LimitGamma(0.0)).unwrap();
    for &x in &[-1.0, 1.0] {
        assert!((corrected_cdf(x, &z, false) - normal::cdf(x)).abs() < 1e-16);
    }
}

#[test]
fn clamp_flag() {
    // n small enough that the left tail of F_E dips below zero
    let a = cumulants(&params(2.6, 50, 50)).unwrap();
    let x = grid(-6.0, -2.0, 0.01).find(|&x| corrected_cdf(x, &a, false) < 0.0);
    let x = x.expect("left tail of the corrected cdf goes negative");
    assert_eq!(corrected_cdf(x, &a, true), 0.0);
}

fn grid(lo: f64, hi: f64, step: f64) -> impl Iterator<Item = f64> {
    let n = ((hi - lo) / step).ceil() as usize;
    (0..n).map(move |i| lo + i as f64 * step)
}

#[test]
fn density_examples() {
    let a = cumulants(&params(2.2, 100, 25)).unwrap();
    assert!((corrected_density(0.0, &a) - normal::INV_SQRT_2PI).abs() < 1e-16);
    let total = quadrature::integrate_line(|x| a.density(x), 12.0, 1e-12).unwrap();
    assert!((total - 1.0).abs() < 1e-10);
    let mean = quadrature::integrate_line(|x| x * a.density(x), 12.0, 1e-12).unwrap();
    assert!((mean - a.inv_sqrt_n * a.alpha0).abs() < 1e-8);
    // somewhere in the left tail the density is negative
    assert!(grid(-20.0, -1.0, 0.01).any(|x| a.density(x) < 0.0));
}

#[test]
fn density_is_derivative_of_cdf() {
    for &(ell, n, p) in &[(3.0, 100, 100), (1.9743, 100, 10), (2.6, 50, 50)] {
        let a = cumulants(&params(ell, n, p)).unwrap();
        let h = 1e-5;
        for i in 0..=160 {
            let x = -4.0 + i as f64 * 0.05;
            let fd = (a.cdf(x + h) - a.cdf(x - h)) / (2.0 * h);
            assert!((fd - a.density(x)).abs() < 1e-6, "x = {x}");
        }
    }
}

/// Roots of the relative error cubic located by sign changes and bisection,
/// separate from the closed form.
fn numeric_roots(law: &CorrectedLaw) -> Vec<f64> {
    let q = |x: f64| law.relative_error(x);
    let mut roots = Vec::new();
    let step = 1e-3;
    let mut x = -10.0;
    while x < 10.0 {
        let (a, b) = (x, x + step);
        if q(a) == 0.0 {
            roots.push(a);
        } else if q(a).signum() != q(b).signum() && q(b) != 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..200 {
                let m = 0.5 * (lo + hi);
                if q(m).signum() == q(lo).signum() {
                    lo = m
                } else {
                    hi = m
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x = b;
    }
    roots
}

#[test]
fn relative_error_cubic_roots() {
    for &(ell, n, p) in &[(3.0, 100, 100), (1.9743, 100, 10), (2.6, 50, 50), (5.0, 40, 80)] {
        let law = cumulants(&params(ell, n, p)).unwrap().law();
        let closed = law.relative_error_roots().expect("real roots when supercritical");
        let found = numeric_roots(&law);
        assert_eq!(found.len(), 3, "roots {found:?}");
        for (c, f) in closed.iter().zip(&found) {
            assert!((c - f).abs() < 1e-10, "{c} vs {f}");
        }
    }
}

#[test]
fn rescaled_density_examples() {
    let a = cumulants(&params(1.9743, 100, 10)).unwrap();
    let scale = 1.0 / (a.sigma * a.inv_sqrt_n);
    assert!((a.rescaled_density(a.rho) - scale * normal::INV_SQRT_2PI).abs() < 1e-14);
    let half = 14.0 * a.sigma * a.inv_sqrt_n;
    let mass =
        quadrature::integrate(|y| a.rescaled_density(y), a.rho - half, a.rho + half, 1e-12).unwrap();
    assert!((mass - 1.0).abs() < 1e-10);
    // Right skew puts the mode left of the centering: f_E'(0) = φ(0) n^{-1/2} (α₀ - 3α₂) < 0.
    let (mut best, mut arg) = (f64::MIN, 0.0);
    for i in -2000..=2000 {
        let y = a.rho + i as f64 * 1e-3 * a.sigma * a.inv_sqrt_n;
        let v = a.rescaled_density(y);
        if v > best {
            best = v;
            arg = y;
        }
    }
    assert!(arg < a.rho);
    assert!(a.alpha0 < 3.0 * a.alpha2);
    let mean =
        quadrature::integrate(|y| y * a.rescaled_density(y), a.rho - half, a.rho + half, 1e-12).unwrap();
    assert!(mean > a.rho);
}

#[test]
fn quantile_examples() {
    let z = EdgeworthApprox::new(&params(3.0, 100, 100), GammaMode::LimitGamma(0.0)).unwrap();
    let m = z.quantile(0.5).unwrap();
    assert!((z.cdf(m) - 0.5).abs() < 1e-12);
    // the positive correction at 0 pushes the median left
    assert!(m < 0.0);

    let a = cumulants(&params(3.0, 100, 10)).unwrap();
    let x = corrected_quantile(0.975, &a).unwrap();
    assert!((a.cdf(x) - 0.975).abs() < 1e-12);

    for &(ell, n, p) in &[(3.0, 100, 100), (1.9743, 100, 10), (2.6, 50, 50)] {
        let a = cumulants(&params(ell, n, p)).unwrap();
        for i in 0..=60 {
            let x = -3.0 + i as f64 * 0.1;
            let u = a.cdf(x);
            if u <= 0.0 || a.density(x) <= 0.0 {
                // inside the left-tail dip the corrected cdf is not invertible
                continue;
            }
            let back = a.quantile(u).unwrap();
            assert!((back - x).abs() < 1e-10, "x = {x}, back = {back}");
        }
    }
    assert!(matches!(a.quantile(0.0), Err(Error::Domain(_))));
    assert!(matches!(a.quantile(1.0), Err(Error::Domain(_))));
    assert!(matches!(a.quantile(f64::NAN), Err(Error::Domain(_))));
}

#[test]
fn validity_index_examples() {
    let pr = SpikeParams::from_ell_factor(0.5, 100, 10).unwrap();
    let v = validity_index(&pr);
    assert!((v - 0.017_146_921_240_506_35).abs() < 1e-15);
    assert!(v <= VALIDITY_THRESHOLD);
    let a = cumulants(&pr).unwrap();
    assert!((v - 4.5 * a.alpha2 * a.alpha2 / 100.0).abs() < 1e-12);
    let near = validity_index(&params(2.0 + 1e-6, 100, 100));
    assert!(near > 1e10);
}

#[test]
fn gamma_to_zero_continuity() {
    let pr = params(2.5, 100, 50);
    for i in 0..=80 {
        let x = -4.0 + i as f64 * 0.1;
        let v = p1(x, &pr, GammaMode::LimitGamma(1e-8)).unwrap();
        assert!((v - SQRT_2 / 3.0 * (1.0 - x * x)).abs() < 1e-6);
    }
}

#[test]
fn petrov_first_order_equivalence() {
    for &(ell, n, p) in &[(3.0, 100, 100), (1.9743, 100, 10), (4.0, 30, 60)] {
        let a = cumulants(&params(ell, n, p)).unwrap();
        let chi3 = a.kappa3 / a.kappa2.powf(1.5);
        for i in -40..=40 {
            let x = i as f64 * 0.1;
            let first = a.kappa3 / (6.0 * a.kappa2.powf(1.5)) * (1.0 - x * x) * normal::pdf(x);
            assert!((petrov_q(1, &[chi3], x).unwrap() - first).abs() < 1e-12);
        }
    }
}

fn arb_params() -> impl Strategy<Value = (f64, usize, usize)> {
    (1usize..400, 1usize..400, 0.05f64..3.0).prop_map(|(n, p, over)| {
        let g = p as f64 / n as f64;
        (mp_functionals::critical_ell(g) * (1.0 + over), n, p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dual_forms_agree((ell, n, p) in arb_params(), x in -5.0f64..5.0) {
        let pr = params(ell, n, p);
        let a = cumulants(&pr).unwrap();
        let closed = p1(x, &pr, GammaMode::FiniteGammaN).unwrap();
        let scale = closed.abs().max(1.0);
        prop_assert!((a.p1(x) - closed).abs() < 1e-12 * scale);
        prop_assert!((a.law().p1(x) - closed).abs() < 1e-12 * scale);
        prop_assert!((a.law().cdf(x) - a.law().cdf_hermite(x)).abs() < 1e-14);
        prop_assert!((a.kappa2 * a.sigma * a.sigma - 4.0).abs() < 1e-12);
        // Hermite display with h = ℓ - 1
        let h = ell - 1.0;
        let g = pr.gamma_n();
        let d = (h * h - g).powf(1.5);
        prop_assert!((a.alpha2 - SQRT_2 / 3.0 * (h * h * h + g) / d).abs() < 1e-12 * a.alpha2.max(1.0));
        prop_assert!((a.alpha0 - g * ell / (SQRT_2 * d)).abs() < 1e-12 * a.alpha0.max(1.0));
        prop_assert!(a.kappa3 > 0.0 && a.alpha2 > 0.0);
    }

    #[test]
    fn parity_of_correction((ell, n, p) in arb_params(), x in 0.0f64..5.0) {
        let law = cumulants(&params(ell, n, p)).unwrap().law();
        prop_assert!((law.p1(x) - law.p1(-x)).abs() < 1e-12 * law.p1(x).abs().max(1.0));
        let q = law.relative_error(x);
        prop_assert!((q + law.relative_error(-x)).abs() < 1e-12 * q.abs().max(1.0));
    }
}
