//! Validation suites run against a model file.

use num_complex::Complex;
use xcir::charfn::fokker_planck_residual;
use xcir::montecarlo::constructive_charfn;
use xcir::stats::{correlation, empirical_cf, ComplexEstimate, Estimate};
use xcir::stochvol::{pathwise_cf_correlated, pathwise_cf_independent, pathwise_first_moment, terminal_bins};
use xcir::*;

use crate::model::ModelFile;

pub const SUITES: [&str; 8] = ["reduction", "ibp", "fokker-planck", "mc-cf", "mc-bond", "mc-option", "constructive", "stochvol"];

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `measured < tolerance`.
    fn below(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self { name: name.into(), measured, tolerance, pass: measured < tolerance }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub paths: usize,
    pub seed: u64,
    pub dt: f64,
}

fn omega_grid() -> Vec<f64> {
    (0..81).map(|k| -20.0 + 0.5 * k as f64).collect()
}

fn mc_omegas() -> Vec<f64> {
    (1..=20).map(|k| k as f64).collect()
}

pub fn run(model: &ModelFile, suite: &str, opts: &SuiteOptions) -> Result<Vec<Check>> {
    let p = &model.params;
    let t = p.horizon;
    match suite {
        "reduction" => {
            if !p.is_constant() {
                return Err(Error::Domain("the reduction suite needs a constant-parameter model".into()));
            }
            let law = Law::new(p, t)?;
            let (b, s, th) = (p.b.value(0.0), p.sigma.value(0.0), p.theta.value(0.0));
            let s0 = law.sigma_integral(0.0)?;
            let snc = Snc::new(4.0 * th / (s * s), p.r0 * (-b * t).exp() / s0, s0.sqrt())?;
            let err = omega_grid().into_iter().map(|w| (law.charfn_rate(w) - snc.charfn(w)).norm()).fold(0.0, f64::max);
            Ok(vec![Check::below("max |charfn_rate - snc charfn|", err, 1e-10)])
        }
        "ibp" => {
            let law = Law::new(p, t)?;
            let err = omega_grid()
                .into_iter()
                .map(|w| (law.charfn_rate(w) - law.charfn_rate_preibp(w)).norm())
                .fold(0.0, f64::max);
            Ok(vec![Check::below("max |charfn_rate - charfn_rate_preibp|", err, 1e-9)])
        }
        "fokker-planck" => {
            let (mut worst, mut lo, mut hi) = (0.0f64, f64::INFINITY, 0.0f64);
            for frac in [0.35, 0.6] {
                let law = Law::new(p, frac * t)?;
                for x in [0.5, 1.0, 3.0, 7.0, 15.0] {
                    let r1 = fokker_planck_residual(&law, x, 1e-3, 1e-3)?.norm();
                    let r2 = fokker_planck_residual(&law, x, 5e-4, 5e-4)?.norm();
                    worst = worst.max(r1);
                    lo = lo.min(r1 / r2);
                    hi = hi.max(r1 / r2);
                }
            }
            Ok(vec![
                Check::below("max residual at h=1e-3", worst, 1e-4),
                Check { name: "min residual ratio under h-halving".into(), measured: lo, tolerance: 3.0, pass: lo > 3.0 },
                Check::below("max residual ratio under h-halving", hi, 5.0),
            ])
        }
        "mc-cf" => {
            let law = Law::new(p, t)?;
            let rates = simulate_cir(p, t, &SimConfig::new(opts.paths, opts.dt, opts.seed)?)?.terminal();
            let worst = mc_omegas()
                .into_iter()
                .map(|w| {
                    let e = empirical_cf(&rates, w);
                    (e.value - law.charfn_rate(w)).norm() / e.se
                })
                .fold(0.0, f64::max);
            Ok(vec![Check::below("max |empirical CF - charfn_rate| in SE", worst, 3.0)])
        }
        "mc-bond" => {
            let riccati = bond_price(&solve_riccati(p, t, 1000)?, 0.0, p.r0)?;
            let mc = mc_bond_price(p, t, &SimConfig::new(opts.paths, opts.dt, opts.seed)?)?;
            eprintln!("P(0,{t}): riccati {riccati:.10} mc {:.10} se {:.3e}", mc.value, mc.se);
            Ok(vec![Check::below("|Riccati - MC| in SE", (riccati - mc.value).abs() / mc.se, 3.0)])
        }
        "mc-option" => {
            let (expiry, maturity) = (0.5 * t, t);
            let forward = bond_price(&solve_riccati(p, maturity, 1000)?, 0.0, p.r0)? / bond_price(&solve_riccati(p, expiry, 1000)?, 0.0, p.r0)?;
            let cfg = InversionConfig::default();
            let sim = SimConfig::new(opts.paths, opts.dt, opts.seed)?;
            let (mut z, mut gap) = (0.0f64, 0.0f64);
            for k in [0.98 * forward, forward, 1.01 * forward] {
                let spec = OptionSpec::new(expiry, maturity, k)?;
                let lap = price_call_laplace(p, &spec, &cfg)?.price;
                let fou = price_call_fourier(p, &spec, &cfg)?.price;
                let mc = mc_option_price(p, &spec, &sim)?;
                gap = gap.max((lap - fou).abs());
                if mc.se > 0.0 {
                    z = z.max((lap - mc.value).abs() / mc.se);
                }
            }
            Ok(vec![Check::below("max |Laplace - MC| in SE", z, 3.0), Check::below("max |Laplace - Fourier|", gap, 1e-6)])
        }
        "constructive" => {
            let law = Law::new(p, t)?;
            let omegas = mc_omegas();
            let mut errors = Vec::new();
            for n in [4usize, 8, 16] {
                let z = simulate_constructive(p, t, &ConstructiveConfig::new(n, opts.paths, opts.seed))?;
                let est = constructive_charfn(&z, n, &omegas);
                let err = omegas.iter().zip(&est).map(|(&w, e)| (e - law.charfn_rate(w)).norm()).fold(0.0, f64::max);
                eprintln!("n={n}: max CF error {err:.3e}");
                errors.push(err);
            }
            Ok(vec![
                Check::below("CF error ratio n=8 / n=4", errors[1] / errors[0], 1.0),
                Check::below("CF error ratio n=16 / n=8", errors[2] / errors[1], 1.0),
            ])
        }
        "stochvol" => stochvol_checks(model, opts),
        other => Err(Error::Domain(format!("unknown suite '{other}' (expected one of {})", SUITES.join(", ")))),
    }
}

fn stochvol_checks(model: &ModelFile, opts: &SuiteOptions) -> Result<Vec<Check>> {
    let t = model.params.horizon;
    let sim_cfg = SimConfig::new(opts.paths, opts.dt, opts.seed)?.with_record_stride(10);
    let mut checks = Vec::new();
    if let Some(ind) = &model.independent {
        let sim = simulate_stochvol_independent(ind, t, &sim_cfg)?;
        if let Some(w) = &sim.warning {
            eprintln!("warning: {w}");
        }
        let rates = sim.rates.terminal();
        let mut worst = 0.0f64;
        for w in mc_omegas() {
            let cond = pathwise_cf_independent(ind, w, &sim.vols);
            let diff: Vec<Complex<f64>> = rates.iter().zip(&cond).map(|(&r, &c)| Complex::new(0.0, w * r).exp() - c).collect();
            let e = ComplexEstimate::from_samples(&diff);
            worst = worst.max(e.value.norm() / e.se);
        }
        checks.push(Check::below("independent: max conditional CF gap in SE", worst, 3.0));
        let moments = pathwise_first_moment(ind, &sim.vols);
        let paired: Vec<f64> = rates.iter().zip(&moments).map(|(&r, &m)| r - m).collect();
        let e = Estimate::from_samples(&paired);
        checks.push(Check::below("independent: first-moment gap in SE", e.value.abs() / e.se, 3.0));
    }
    if let Some(cor) = &model.correlated {
        let sim = simulate_correlated_wv(cor, t, &sim_cfg.with_record_stride(10))?;
        let r = sim.rates.terminal();
        let mut worst = 0.0f64;
        for bin in terminal_bins(&sim.vols, 10) {
            let vols = sim.vols.subset(&bin);
            for w in [2.0, 5.0, 10.0, 15.0, 20.0] {
                let cond = pathwise_cf_correlated(cor, w, &vols);
                let diff: Vec<Complex<f64>> =
                    bin.iter().zip(&cond).map(|(&i, &c)| Complex::new(0.0, w * r[i]).exp() - c).collect();
                let e = ComplexEstimate::from_samples(&diff);
                worst = worst.max(e.value.norm() / e.se);
            }
        }
        checks.push(Check::below("correlated: max per-bin CF gap in SE", worst, 3.0));
        let rho = correlation(&r, &sim.vols.terminal());
        let lower = (rho.atanh() - 2.326 / ((r.len() - 3) as f64).sqrt()).tanh();
        checks.push(Check { name: "correlated: 99% lower bound of Corr(r, v)".into(), measured: lower, tolerance: 0.0, pass: lower > 0.0 });
    }
    if checks.is_empty() {
        return Err(Error::Domain("the stochvol suite needs a stochvol section in the model file".into()));
    }
    Ok(checks)
}
