//! Reference values from `oracles/reference_values.py` (scipy and mpmath) and
//! Monte Carlo checks at fixed seeds.

use approx::assert_relative_eq;
use num_complex::Complex;
use xcir::stats::{empirical_cf, ks_critical, ks_statistic};
use xcir::*;

#[test]
fn snc_density_and_cdf() {
    let cases = [
        (0.3, 0.5, 1.0, 0.2, 0.46857676592171893, 0.5956615570777242),
        (7.0, 3.0, 0.5, 2.0, 0.34518223398634496, 0.40054480763059686),
        (1.0, 0.0, 1.0, 0.5, 0.43939128946772243, 0.5204998778130466),
        (2.5, 1.3, 0.8, 3.0, 0.14436229812025977, 0.6992324195753659),
    ];
    for (l1, l2, c, x, pdf, cdf) in cases {
        let law = Snc::new(l1, l2, c).unwrap();
        assert_relative_eq!(law.density(x), pdf, max_relative = 1e-10);
        assert_relative_eq!(law.cdf(x), cdf, max_relative = 1e-10);
    }
    assert_relative_eq!(Snc::new(3.7, 2.1, 1.1).unwrap().cdf(5.0), 0.407015489508599, max_relative = 1e-10);
}

#[test]
fn snc_charfn_against_density_quadrature() {
    let cf = Snc::new(2.5, 1.3, 0.8).unwrap().charfn(0.7);
    let want = Complex::new(0.170052646774872371749881847095, 0.489282327424262570359358789983);
    assert!((cf - want).norm() < 1e-12);
}

#[test]
fn constant_model_bond_and_law() {
    let p = Params::constant(0.1, 0.2, 0.02, 0.03, 1.0).unwrap();
    let sol = solve_riccati(&p, 1.0, 1000).unwrap();
    assert_relative_eq!(sol.c(0.0), 0.94563651599563725, max_relative = 1e-10);
    assert_relative_eq!(sol.a(0.0), -0.0096442078403446753, max_relative = 1e-8);
    assert_relative_eq!(bond_price(&sol, 0.0, 0.03).unwrap(), 0.96270013369786217, max_relative = 1e-10);
    let law = Law::new(&p, 1.0).unwrap();
    assert_relative_eq!(law.sigma_integral(0.0).unwrap(), 0.0095162581964040437, max_relative = 1e-12);
}

#[test]
fn constant_model_call_prices() {
    let p = Params::constant(0.1, 0.2, 0.02, 0.03, 1.0).unwrap();
    let cfg = InversionConfig::default();
    for (k, want) in [(0.90, 0.07792785611724584), (0.95, 0.028965830376971768), (0.97, 0.011003854555968272)] {
        let spec = OptionSpec::new(0.5, 1.0, k).unwrap();
        assert_relative_eq!(price_call_laplace(&p, &spec, &cfg).unwrap().price, want, max_relative = 1e-8);
        assert_relative_eq!(price_call_fourier(&p, &spec, &cfg).unwrap().price, want, max_relative = 1e-8);
        assert_relative_eq!(price_call_constant_analytic(0.1, 0.2, 0.02, 0.03, 0.5, 1.0, k).unwrap(), want, max_relative = 1e-10);
    }
}

#[test]
fn density_matches_snc() {
    let p = Params::constant(0.3, 0.15, 0.03, 0.04, 1.0).unwrap();
    let law = Law::new(&p, 1.0).unwrap();
    let s0 = law.sigma_integral(0.0).unwrap();
    let snc = Snc::new(4.0 * 0.03 / (0.15 * 0.15), 0.04 * (-0.3f64).exp() / s0, s0.sqrt()).unwrap();
    let xs: Vec<f64> = (1..=400).map(|i| i as f64 * 0.0005).collect();
    let res = density_from_cf(&law, &xs, DensityConfig::default()).unwrap();
    assert!(res.warning.is_none());
    for (&x, &f) in xs.iter().zip(&res.density) {
        assert!((f - snc.density(x)).abs() < 1e-6 * (1.0 + snc.density(x)), "x={x}");
    }
}

#[test]
fn monte_carlo_terminal_law_matches_snc() {
    let (b, s, th, r0) = (0.5, 0.2, 0.03, 0.02);
    let p = Params::constant(b, s, th, r0, 1.0).unwrap();
    let rates = simulate_cir(&p, 1.0, &SimConfig::new(40_000, 1e-3, 11).unwrap()).unwrap().terminal();
    let law = Law::new(&p, 1.0).unwrap();
    let s0 = law.sigma_integral(0.0).unwrap();
    let snc = Snc::new(4.0 * th / (s * s), r0 * (-b as f64).exp() / s0, s0.sqrt()).unwrap();
    let ks = ks_statistic(&rates, |x| snc.cdf(x));
    assert!(ks < ks_critical(rates.len(), 0.01), "KS {ks}");
    for w in [5.0, 20.0, 50.0] {
        let e = empirical_cf(&rates, w);
        assert!((e.value - law.charfn_rate(w)).norm() < 4.0 * e.se);
    }
}

#[test]
fn monte_carlo_bond_and_option() {
    let p = Params::constant(0.1, 0.2, 0.02, 0.03, 1.0).unwrap();
    let cfg = SimConfig::new(100_000, 2e-3, 5).unwrap();
    let bond = mc_bond_price(&p, 1.0, &cfg).unwrap();
    assert!((bond.value - 0.96270013369786217).abs() < 4.0 * bond.se);
    let call = mc_option_price(&p, &OptionSpec::new(0.5, 1.0, 0.95).unwrap(), &cfg).unwrap();
    assert!((call.value - 0.028965830376971768).abs() < 4.0 * call.se);
}
