//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with `harness = false`; the process exits 0 once every criterion
//! has been evaluated and reported, whatever the verdicts.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xcir::charfn::fokker_planck_residual;
use xcir::montecarlo::constructive_charfn;
use xcir::optionpricer::price_call_constant_analytic;
use xcir::stats::{correlation, empirical_cf, ks_critical, ks_statistic, ComplexEstimate, Estimate};
use xcir::stochvol::{first_moment, pathwise_cf_correlated, pathwise_cf_independent, pathwise_first_moment, terminal_bins};
use xcir::*;

const SEED: u64 = 20_261_016;

struct Verdict {
    pass: bool,
    detail: String,
}

fn report(id: usize, name: &str, budget: Duration, f: impl FnOnce() -> Result<Verdict>) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok(v) => (v.pass && elapsed <= budget, v.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "criterion {id}: {} {name}; {detail}; runtime {:.2}s (budget {}s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn spline(f: impl Fn(f64) -> f64, horizon: f64, knots: usize) -> Curve {
    Curve::sample(f, 0.0, horizon, knots).unwrap()
}

/// Smooth periodic coefficients used by the Monte Carlo criteria.
fn seasonal() -> Params {
    Params::new(
        spline(|t| 0.1 + 0.05 * t, 1.0, 21),
        spline(|t| 0.2 + 0.03 * (2.0 * PI * t).cos(), 1.0, 41),
        spline(|t| 0.03 + 0.01 * (2.0 * PI * t).sin(), 1.0, 41),
        0.03,
        1.0,
    )
    .unwrap()
}

/// `d(t)` with one interior maximum and one interior minimum.
fn two_extrema() -> Params {
    Params::new(
        spline(|t| 0.2 - 0.1 * t, 1.0, 11),
        Curve::constant(0.2),
        spline(|t| 0.02 + 0.005 * (2.0 * PI * t).sin(), 1.0, 201),
        0.025,
        1.0,
    )
    .unwrap()
}

fn ramp() -> Params {
    Params::new(
        Curve::spline(vec![0.0, 0.5, 1.0], vec![0.1, 0.12, 0.2]).unwrap(),
        Curve::spline(vec![0.0, 0.3, 0.7, 1.0], vec![0.2, 0.22, 0.19, 0.21]).unwrap(),
        Curve::spline(vec![0.0, 1.0], vec![0.02, 0.03]).unwrap(),
        0.03,
        1.0,
    )
    .unwrap()
}

fn omega_grid() -> Vec<f64> {
    (0..81).map(|k| -20.0 + 0.5 * k as f64).collect()
}

fn mc_omegas() -> Vec<f64> {
    (1..=20).map(|k| k as f64).collect()
}

fn criterion1() -> Result<Verdict> {
    let sets = [(0.1, 0.2, 0.02, 0.03), (0.5, 0.3, 0.01, 0.05), (1.0, 0.1, 0.05, 0.01)];
    let mut worst = 0.0f64;
    for (b, s, th, r0) in sets {
        let law = Law::new(&Params::constant(b, s, th, r0, 1.0)?, 1.0)?;
        let s0 = law.sigma_integral(0.0)?;
        let snc = Snc::new(4.0 * th / (s * s), r0 * (-b as f64).exp() / s0, s0.sqrt())?;
        for w in omega_grid() {
            worst = worst.max((law.charfn_rate(w) - snc.charfn(w)).norm());
        }
    }
    Ok(Verdict { pass: worst < 1e-10, detail: format!("max |charfn_rate - snc| = {worst:.2e} (tol 1e-10)") })
}

fn criterion2() -> Result<Verdict> {
    let q = validate_assumption1(&two_extrema(), 1000)?.q_optima;
    let mut worst = 0.0f64;
    for p in [seasonal(), two_extrema(), ramp()] {
        let law = Law::new(&p, 1.0)?;
        for w in omega_grid() {
            worst = worst.max((law.charfn_rate(w) - law.charfn_rate_preibp(w)).norm());
        }
    }
    Ok(Verdict {
        pass: worst < 1e-9 && q == 2,
        detail: format!("max |post - pre IBP| = {worst:.2e} (tol 1e-9); interior extrema of d in set 2 = {q}"),
    })
}

fn criterion3() -> Result<Verdict> {
    let mut worst = 0.0f64;
    let (mut min_ratio, mut max_ratio) = (f64::INFINITY, 0.0f64);
    for p in [seasonal(), ramp()] {
        for t in [0.35, 0.6] {
            let law = Law::new(&p, t)?;
            for x in [0.5, 1.0, 3.0, 7.0, 15.0] {
                let r1 = fokker_planck_residual(&law, x, 1e-3, 1e-3)?.norm();
                let r2 = fokker_planck_residual(&law, x, 5e-4, 5e-4)?.norm();
                worst = worst.max(r1);
                min_ratio = min_ratio.min(r1 / r2);
                max_ratio = max_ratio.max(r1 / r2);
            }
        }
    }
    Ok(Verdict {
        pass: worst < 1e-4 && min_ratio > 3.0 && max_ratio < 5.0,
        detail: format!(
            "max residual at h=1e-3 = {worst:.2e} (tol 1e-4); halving ratio in [{min_ratio:.2}, {max_ratio:.2}] (want within (3, 5))"
        ),
    })
}

fn criterion4() -> Result<Verdict> {
    let p = seasonal();
    let law = Law::new(&p, 1.0)?;
    let rates = simulate_cir(&p, 1.0, &SimConfig::new(100_000, 1e-3, SEED)?)?.terminal();
    let mut worst = 0.0f64;
    for w in mc_omegas() {
        let est = empirical_cf(&rates, w);
        worst = worst.max((est.value - law.charfn_rate(w)).norm() / est.se);
    }
    Ok(Verdict { pass: worst < 3.0, detail: format!("max |empirical - charfn_rate|/SE = {worst:.2} over 20 ω (tol 3)") })
}

fn criterion5() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for (b, s, th, r0, t) in [(0.1, 0.2, 0.02, 0.03, 1.0), (0.5, 0.1, 0.03, 0.05, 5.0), (0.0, 0.2, 0.01, 0.02, 2.0)] {
        let p = Params::constant(b, s, th, r0, t)?;
        let sol = solve_riccati(&p, t, 1000)?;
        let got = bond_price(&sol, 0.0, r0)?;
        worst = worst.max((got - bond_price_constant_analytic(b, s, th, r0, t)).abs());
    }
    let p = seasonal();
    let riccati = bond_price(&solve_riccati(&p, 1.0, 1000)?, 0.0, p.r0)?;
    let mc = mc_bond_price(&p, 1.0, &SimConfig::new(1_000_000, 1e-3, SEED)?)?;
    let z = (mc.value - riccati).abs() / mc.se;
    Ok(Verdict {
        pass: worst < 1e-8 && z < 3.0,
        detail: format!(
            "max |Riccati - analytic| = {worst:.2e} (tol 1e-8); time-varying P(0,1) Riccati {riccati:.10} vs MC {:.10} ± {:.1e}, {z:.2} SE (tol 3)",
            mc.value, mc.se
        ),
    })
}

fn criterion6() -> Result<Verdict> {
    let cfg = InversionConfig::default();
    let strikes = [0.90, 0.95, 0.97];
    let constant = Params::constant(0.1, 0.2, 0.02, 0.03, 1.0)?;
    let (mut rel_analytic, mut lap_fou, mut z_mc) = (0.0f64, 0.0f64, 0.0f64);
    for &k in &strikes {
        let spec = OptionSpec::new(0.5, 1.0, k)?;
        let lap = price_call_laplace(&constant, &spec, &cfg)?.price;
        let fou = price_call_fourier(&constant, &spec, &cfg)?.price;
        let exact = price_call_constant_analytic(0.1, 0.2, 0.02, 0.03, 0.5, 1.0, k)?;
        rel_analytic = rel_analytic.max(((lap - exact) / exact).abs());
        lap_fou = lap_fou.max((lap - fou).abs());
    }
    let p = seasonal();
    let sim = SimConfig::new(1_000_000, 1e-3, SEED + 1)?;
    for &k in &strikes {
        let spec = OptionSpec::new(0.5, 1.0, k)?;
        let lap = price_call_laplace(&p, &spec, &cfg)?.price;
        let fou = price_call_fourier(&p, &spec, &cfg)?.price;
        lap_fou = lap_fou.max((lap - fou).abs());
        let mc = mc_option_price(&p, &spec, &sim)?;
        z_mc = z_mc.max((lap - mc.value).abs() / mc.se);
    }
    Ok(Verdict {
        pass: rel_analytic < 1e-4 && lap_fou < 1e-6 && z_mc < 3.0,
        detail: format!(
            "max rel |Laplace - analytic| = {rel_analytic:.2e} (tol 1e-4); max |Laplace - Fourier| = {lap_fou:.2e} (tol 1e-6); max |Laplace - MC|/SE = {z_mc:.2} (tol 3)"
        ),
    })
}

fn criterion7() -> Result<Verdict> {
    let p = seasonal();
    let law = Law::new(&p, 1.0)?;
    let omegas = mc_omegas();
    let mut errors = Vec::new();
    for n in [4usize, 8, 16] {
        let z = simulate_constructive(&p, 1.0, &ConstructiveConfig::new(n, 100_000, SEED))?;
        let est = constructive_charfn(&z, n, &omegas);
        let err = omegas.iter().zip(&est).map(|(&w, e)| (e - law.charfn_rate(w)).norm()).fold(0.0, f64::max);
        errors.push(err);
    }
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    // integer corner: d = 2, n = 4 gives 8 squared OU components
    let (n, b, s, th, r0) = (4usize, 0.1, 0.2, 0.02, 0.03);
    let corner = Params::constant(b, s, th, r0, 1.0)?;
    let z = simulate_constructive(&corner, 1.0, &ConstructiveConfig::new(n, 100_000, SEED + 2))?;
    let s0 = Law::new(&corner, 1.0)?.sigma_integral(0.0)?;
    let nf = n as f64;
    let target = Snc::new(nf * 4.0 * th / (s * s), nf * r0 * (-b as f64).exp() / s0, s0.sqrt())?;
    let ks = ks_statistic(&z, |x| target.cdf(x));
    let crit = ks_critical(z.len(), 0.01);
    Ok(Verdict {
        pass: monotone && ks < crit,
        detail: format!(
            "max CF error for n = 4, 8, 16: {:.2e}, {:.2e}, {:.2e} (monotone: {monotone}); integer corner KS {ks:.4} vs 1% critical {crit:.4}",
            errors[0], errors[1], errors[2]
        ),
    })
}

fn criterion8() -> Result<Verdict> {
    let model = IndependentVolModel {
        b: spline(|t| 0.1 + 0.05 * t, 1.0, 21),
        drift: RateDrift::Dimension(spline(|t| 3.0 + 0.5 * (2.0 * PI * t).sin(), 1.0, 41)),
        r0: 0.03,
        vol: VolDynamics { kappa: 1.0, mean: 0.04, xi: 0.5, v0: 0.04, cap: 1.0 },
        horizon: 1.0,
    };
    let cfg = SimConfig::new(100_000, 1e-3, SEED + 3)?.with_record_stride(10);
    let sim = simulate_stochvol_independent(&model, 1.0, &cfg)?;
    let rates = sim.rates.terminal();
    let mut worst_ind = 0.0f64;
    for w in mc_omegas() {
        let cond = pathwise_cf_independent(&model, w, &sim.vols);
        let diff: Vec<Complex<f64>> = rates.iter().zip(&cond).map(|(&r, &c)| Complex::new(0.0, w * r).exp() - c).collect();
        let est = ComplexEstimate::from_samples(&diff);
        worst_ind = worst_ind.max(est.value.norm() / est.se);
    }
    let fm = first_moment(&model, &sim.vols);
    let per_path = {
        let moments = pathwise_first_moment(&model, &sim.vols);
        let paired: Vec<f64> = rates.iter().zip(&moments).map(|(&r, &m)| r - m).collect();
        Estimate::from_samples(&paired)
    };
    let z_moment = per_path.value.abs() / per_path.se;
    drop(sim);

    let corr_model = CorrelatedVolModel {
        b: Curve::constant(0.2),
        theta_w: spline(|t| 0.02 + 0.005 * t, 1.0, 11),
        theta_v: Curve::constant(0.004),
        xi: 0.4,
        w0: 0.02,
        v0: 0.02,
        cap: 1.0,
        horizon: 1.0,
    };
    let sim = simulate_correlated_wv(&corr_model, 1.0, &SimConfig::new(100_000, 1e-3, SEED + 4)?.with_record_stride(10))?;
    let r = sim.rates.terminal();
    let mut worst_bin = 0.0f64;
    for bin in terminal_bins(&sim.vols, 10) {
        let vols = sim.vols.subset(&bin);
        for w in [2.0, 5.0, 10.0, 15.0, 20.0] {
            let cond = pathwise_cf_correlated(&corr_model, w, &vols);
            let diff: Vec<Complex<f64>> =
                bin.iter().zip(&cond).map(|(&i, &c)| Complex::new(0.0, w * r[i]).exp() - c).collect();
            let est = ComplexEstimate::from_samples(&diff);
            worst_bin = worst_bin.max(est.value.norm() / est.se);
        }
    }
    let rho = correlation(&r, &sim.vols.terminal());
    let lower = ((rho.atanh()) - 2.326 / ((r.len() - 3) as f64).sqrt()).tanh();
    Ok(Verdict {
        pass: worst_ind < 3.0 && z_moment < 3.0 && worst_bin < 3.0 && lower > 0.0,
        detail: format!(
            "independent: max CF gap {worst_ind:.2} SE over 20 ω; E[r(t)] = {:.6} vs first-moment formula {:.6}, {z_moment:.2} SE; correlated: max per-bin CF gap {worst_bin:.2} SE (10 bins × 5 ω); Corr(r, v) = {rho:.3}, 99% lower bound {lower:.3} (tol 3 SE, bound > 0)",
            Estimate::from_samples(&rates).value,
            fm.value
        ),
    })
}

fn criterion9() -> Result<Verdict> {
    let laws = [Snc::new(1.0, 0.0, 1.0)?, Snc::new(3.0, 2.5, 0.5)?, Snc::new(7.5, 40.0, 0.1)?];
    let mut mass_err = 0.0f64;
    let mut div_err = 0.0f64;
    let mut worst_ks = 0.0f64;
    let crit = ks_critical(100_000, 0.01);
    for (j, law) in laws.iter().enumerate() {
        let top = (law.mean() + 40.0 * law.variance().sqrt()).sqrt();
        // x = u² removes the x^{λ₁/2 - 1} singularity at the origin
        let mass: f64 = xcir::quad::adaptive(|u: f64| 2.0 * u * law.density(u * u), 0.0, top, 1e-13);
        mass_err = mass_err.max((mass - 1.0).abs());
        for n in [2usize, 5, 17] {
            let part = law.divide(n)?;
            for w in omega_grid() {
                div_err = div_err.max((part.charfn(w).powu(n as u32) - law.charfn(w)).norm());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10 + j as u64);
        let xs = law.sample(&mut rng, 100_000);
        worst_ks = worst_ks.max(ks_statistic(&xs, |x| law.cdf(x)));
    }
    Ok(Verdict {
        pass: mass_err < 1e-8 && div_err < 1e-12 && worst_ks < crit,
        detail: format!(
            "density mass error {mass_err:.2e} (tol 1e-8); divisibility CF error {div_err:.2e} (tol 1e-12); sampler KS {worst_ks:.4} vs 1% critical {crit:.4}"
        ),
    })
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        report(1, "constant-parameter reduction to SNC chi-squared", secs(1), criterion1),
        report(2, "integration-by-parts identity", secs(10), criterion2),
        report(3, "Fokker-Planck residual", secs(5), criterion3),
        report(4, "Monte Carlo vs characteristic function", secs(120), criterion4),
        report(5, "bond pricing", secs(180), criterion5),
        report(6, "option pricing", secs(300), criterion6),
        report(7, "constructive representation", secs(600), criterion7),
        report(8, "stochastic volatility", secs(600), criterion8),
        report(9, "distribution module", secs(60), criterion9),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
}
