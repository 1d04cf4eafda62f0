//! Simulation oracles: Euler schemes for the extended CIR SDE under the
//! risk-neutral and forward measures, the reset construction of the rate as
//! a normalized sum of squared Ornstein-Uhlenbeck components, and the
//! stochastic-volatility models of [`crate::stochvol`].
//!
//! Every path (or sample) draws from its own ChaCha8 stream keyed by
//! `(seed, index)`, so results do not depend on the rayon thread count.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bondpricing::{bond_price, solve_riccati_default};
use crate::error::{domain, Error, Result};
use crate::optionpricer::{forward_drift, OptionSpec};
use crate::quad;
use crate::real::{from_usize, lit, Real};
use crate::stats::Estimate;
use crate::stochvol::{CorrelatedVolModel, IndependentVolModel};
use crate::termstructure::{ExtendedCirParams, ParameterCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// `r⁺ = max(r, 0)` inside drift and diffusion.
    #[default]
    FullTruncation,
    /// `r ← |r + Δr|`.
    Reflection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n_paths: usize,
    pub dt: f64,
    pub seed: u64,
    pub scheme: Scheme,
    /// Record every `record_stride`-th step; 0 records only the endpoints.
    pub record_stride: usize,
}

impl SimConfig {
    pub fn new(n_paths: usize, dt: f64, seed: u64) -> Result<Self> {
        let cfg = Self { n_paths, dt, seed, scheme: Scheme::FullTruncation, record_stride: 0 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        Self { scheme, ..self }
    }

    pub fn with_record_stride(self, record_stride: usize) -> Self {
        Self { record_stride, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(domain("SimConfig: n_paths must be at least 1"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(domain(format!("SimConfig: dt must be positive, got {}", self.dt)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure<S: Real> {
    RiskNeutral,
    /// `t`-forward measure.
    Forward(S),
}

/// Simulated paths on a common time grid, stored row-major by path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet<S: Real> {
    times: Vec<S>,
    values: Vec<S>,
    measure: Measure<S>,
}

impl<S: Real> PathSet<S> {
    pub fn new(times: Vec<S>, values: Vec<S>, measure: Measure<S>) -> Result<Self> {
        if times.is_empty() || values.len() % times.len() != 0 {
            return Err(domain("PathSet: values do not fill whole paths"));
        }
        Ok(Self { times, values, measure })
    }

    pub fn times(&self) -> &[S] {
        &self.times
    }

    pub fn n_paths(&self) -> usize {
        self.values.len() / self.times.len()
    }

    pub fn n_times(&self) -> usize {
        self.times.len()
    }

    pub fn measure(&self) -> Measure<S> {
        self.measure
    }

    pub fn path(&self, i: usize) -> &[S] {
        let n = self.times.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn paths(&self) -> impl Iterator<Item = &[S]> {
        self.values.chunks(self.times.len())
    }

    /// Values at time index `j` across paths.
    pub fn column(&self, j: usize) -> Vec<S> {
        self.paths().map(|p| p[j]).collect()
    }

    pub fn terminal(&self) -> Vec<S> {
        self.column(self.times.len() - 1)
    }

    /// The paths with the given indices, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let mut values = Vec::with_capacity(indices.len() * self.times.len());
        for &i in indices {
            values.extend_from_slice(self.path(i));
        }
        Self { times: self.times.clone(), values, measure: self.measure }
    }

    /// Long-format CSV: `time,path_id,value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "time,path_id,value")?;
        for (i, p) in self.paths().enumerate() {
            for (t, v) in self.times.iter().zip(p) {
                writeln!(out, "{t},{i},{v}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn path_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Uniform step grid on `[0, t_end]` with left-point coefficients.
pub(crate) struct StepGrid<S: Real> {
    pub times: Vec<S>,
    pub dt: S,
    pub sqrt_dt: S,
    pub b: Vec<S>,
    pub theta: Vec<S>,
    pub sigma: Vec<S>,
}

impl<S: Real> StepGrid<S> {
    pub fn uniform(t_end: S, dt: f64) -> (Vec<S>, S) {
        let n = ((t_end.to_f64().unwrap_or(0.0) / dt) - 1e-9).ceil().max(1.0) as usize;
        let h = t_end / from_usize(n);
        let mut times: Vec<S> = (0..=n).map(|k| h * from_usize(k)).collect();
        times[n] = t_end;
        (times, h)
    }

    fn new(params: &ExtendedCirParams<S>, t_end: S, dt: f64, drift: Option<&ParameterCurve<S>>) -> Self {
        let (times, h) = Self::uniform(t_end, dt);
        let steps = &times[..times.len() - 1];
        let b_curve = drift.unwrap_or(&params.b);
        Self {
            b: steps.iter().map(|&s| b_curve.value(s)).collect(),
            theta: steps.iter().map(|&s| params.theta.value(s)).collect(),
            sigma: steps.iter().map(|&s| params.sigma.value(s)).collect(),
            dt: h,
            sqrt_dt: h.sqrt(),
            times,
        }
    }

    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }
}

pub(crate) fn record_steps(n_steps: usize, stride: usize) -> Vec<usize> {
    if stride == 0 {
        return vec![0, n_steps];
    }
    let mut v: Vec<usize> = (0..=n_steps).step_by(stride).collect();
    if *v.last().unwrap() != n_steps {
        v.push(n_steps);
    }
    v
}

/// One Euler step of `dr = (θ − b r)dt + σ√r dB`.
#[inline]
pub(crate) fn euler_step<S: Real>(scheme: Scheme, r: S, b: S, theta: S, sigma: S, dt: S, sqrt_dt: S, z: S) -> S {
    match scheme {
        Scheme::FullTruncation => {
            let rp = r.max(S::zero());
            r + (theta - b * rp) * dt + sigma * rp.sqrt() * sqrt_dt * z
        }
        Scheme::Reflection => (r + (theta - b * r) * dt + sigma * r.sqrt() * sqrt_dt * z).abs(),
    }
}

/// Runs one path, writing `max(r, 0)` at the recorded steps into `out`.
/// Returns the terminal rate and the trapezoid integral of `max(r, 0)`.
fn run_path<S: Real, R: Rng>(g: &StepGrid<S>, r0: S, scheme: Scheme, rng: &mut R, record: &[usize], out: &mut [S]) -> (S, S) {
    let half = lit::<S>(0.5);
    let mut r = r0;
    let mut integral = S::zero();
    let mut slot = 0;
    for k in 0..g.n_steps() {
        if slot < record.len() && record[slot] == k {
            if let Some(o) = out.get_mut(slot) {
                *o = r.max(S::zero());
            }
            slot += 1;
        }
        let z = S::sample_standard_normal(rng);
        let next = euler_step(scheme, r, g.b[k], g.theta[k], g.sigma[k], g.dt, g.sqrt_dt, z);
        integral = integral + half * g.dt * (r.max(S::zero()) + next.max(S::zero()));
        r = next;
    }
    let r = r.max(S::zero());
    if let Some(o) = out.get_mut(slot) {
        *o = r;
    }
    (r, integral)
}

fn check_time<S: Real>(params: &ExtendedCirParams<S>, t: S) -> Result<()> {
    if !(t > S::zero()) || t > params.horizon * (S::one() + S::epsilon() * lit(16.0)) {
        return Err(domain(format!("time {t} outside (0, horizon = {}]", params.horizon)));
    }
    Ok(())
}

fn simulate_grid<S: Real>(g: &StepGrid<S>, r0: S, cfg: &SimConfig, measure: Measure<S>) -> PathSet<S> {
    let record = record_steps(g.n_steps(), cfg.record_stride);
    let times: Vec<S> = record.iter().map(|&k| g.times[k]).collect();
    let n_t = times.len();
    let mut values = vec![S::zero(); cfg.n_paths * n_t];
    values.par_chunks_mut(n_t).enumerate().for_each(|(i, row)| {
        let mut rng = path_rng(cfg.seed, i);
        run_path(g, r0, cfg.scheme, &mut rng, &record, row);
    });
    PathSet { times, values, measure }
}

/// Euler-Maruyama paths of the rate on `[0, t_end]`.
pub fn simulate_cir<S: Real>(params: &ExtendedCirParams<S>, t_end: S, cfg: &SimConfig) -> Result<PathSet<S>> {
    cfg.validate()?;
    check_time(params, t_end)?;
    let g = StepGrid::new(params, t_end, cfg.dt, None);
    Ok(simulate_grid(&g, params.r0, cfg, Measure::RiskNeutral))
}

/// Paths on `[0, t]` under the `t`-forward measure, where the mean
/// reversion becomes `b(s) + σ²(s)C(s, t)`.
pub fn simulate_forward_measure<S: Real>(params: &ExtendedCirParams<S>, spec: &OptionSpec<S>, cfg: &SimConfig) -> Result<PathSet<S>> {
    cfg.validate()?;
    check_time(params, spec.bond_maturity)?;
    let sol = solve_riccati_default(params, spec.expiry)?;
    let drift = forward_drift(params, &sol)?;
    let g = StepGrid::new(params, spec.expiry, cfg.dt, Some(&drift));
    Ok(simulate_grid(&g, params.r0, cfg, Measure::Forward(spec.expiry)))
}

/// Terminal rates and pathwise `∫₀ᵗ r` for every path.
fn terminal_and_integral<S: Real>(g: &StepGrid<S>, r0: S, cfg: &SimConfig) -> Vec<(S, S)> {
    let record: [usize; 0] = [];
    (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            run_path(g, r0, cfg.scheme, &mut rng, &record, &mut [])
        })
        .collect()
}

/// `P(0, T) = E[exp(−∫₀ᵀ r)]` with the trapezoid rule along each path.
pub fn mc_bond_price<S: Real>(params: &ExtendedCirParams<S>, maturity: S, cfg: &SimConfig) -> Result<Estimate<S>> {
    cfg.validate()?;
    check_time(params, maturity)?;
    let g = StepGrid::new(params, maturity, cfg.dt, None);
    let disc: Vec<S> = terminal_and_integral(&g, params.r0, cfg).into_iter().map(|(_, i)| (-i).exp()).collect();
    Ok(Estimate::from_samples(&disc))
}

/// `E[exp(−∫₀ᵗ r) max(P(t, T) − K, 0)]` with `P(t, T)` from the Riccati
/// solution at the simulated `r(t)`.
pub fn mc_option_price<S: Real>(params: &ExtendedCirParams<S>, spec: &OptionSpec<S>, cfg: &SimConfig) -> Result<Estimate<S>> {
    cfg.validate()?;
    check_time(params, spec.bond_maturity)?;
    let sol = solve_riccati_default(params, spec.bond_maturity)?;
    if spec.strike >= sol.a(spec.expiry).exp() {
        return Ok(Estimate { value: S::zero(), se: S::zero() });
    }
    let g = StepGrid::new(params, spec.expiry, cfg.dt, None);
    let mut out = Vec::with_capacity(cfg.n_paths);
    for (r, integral) in terminal_and_integral(&g, params.r0, cfg) {
        let payoff = (bond_price(&sol, spec.expiry, r)? - spec.strike).max(S::zero());
        out.push((-integral).exp() * payoff);
    }
    Ok(Estimate::from_samples(&out))
}

/// `P(0, t)·Eᵗ[max(P(t, T) − K, 0)]` from forward-measure paths.
pub fn mc_option_price_forward<S: Real>(params: &ExtendedCirParams<S>, spec: &OptionSpec<S>, cfg: &SimConfig) -> Result<Estimate<S>> {
    let paths = simulate_forward_measure(params, spec, &cfg.with_record_stride(0))?;
    let to_maturity = solve_riccati_default(params, spec.bond_maturity)?;
    let to_expiry = solve_riccati_default(params, spec.expiry)?;
    let p0t = bond_price(&to_expiry, S::zero(), params.r0)?;
    let mut out = Vec::with_capacity(cfg.n_paths);
    for r in paths.terminal() {
        out.push(p0t * (bond_price(&to_maturity, spec.expiry, r)? - spec.strike).max(S::zero()));
    }
    Ok(Estimate::from_samples(&out))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructiveConfig {
    /// Divisibility level: the simulated process is the sum of `n`
    /// independent copies of the rate.
    pub n: usize,
    /// Number of reset intervals on `[0, t]`.
    pub resets: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// Upper bound on `⌈n·d(s)⌉`.
    pub max_components: usize,
}

impl ConstructiveConfig {
    /// `resets = 32·n`.
    pub fn new(n: usize, n_samples: usize, seed: u64) -> Self {
        Self { n, resets: 32 * n, n_samples, seed, max_components: 100_000 }
    }
}

/// Samples of `Z(t)`, the sum of `n` independent copies of `r(t)`, from the
/// reset construction: on each reset interval `[t_m, t_{m+1}]`, `⌈n d(t_m)⌉`
/// Ornstein-Uhlenbeck components `dx = −½b x ds + ½σ dW` all start at
/// `√(Z(t_m)/(n d(t_m)))` and are propagated exactly; at the interval end
/// `Z = Σ_{i<⌊nd⌋} x_i² + (nd − ⌊nd⌋)·x_last²`. `Z(0) = n r₀`.
///
/// The law of one copy is recovered by [`constructive_charfn`].
pub fn simulate_constructive<S: Real>(params: &ExtendedCirParams<S>, t_target: S, cc: &ConstructiveConfig) -> Result<Vec<S>> {
    check_time(params, t_target)?;
    if cc.n == 0 || cc.resets == 0 || cc.n_samples == 0 {
        return Err(domain("ConstructiveConfig: n, resets and n_samples must be positive"));
    }
    let m = cc.resets;
    let h = t_target / from_usize(m);
    let nf = from_usize::<S>(cc.n);
    let quarter = lit::<S>(0.25);
    struct Interval<S> {
        dim: S,
        whole: usize,
        frac: S,
        decay: S,
        sd: S,
    }
    let mut intervals = Vec::with_capacity(m);
    for j in 0..m {
        let (lo, hi) = (h * from_usize(j), if j + 1 == m { t_target } else { h * from_usize(j + 1) });
        let dim = nf * params.dimension_at(lo);
        if !(dim > S::zero()) || !dim.is_finite() {
            return Err(domain(format!("dimension not positive at t={lo}")));
        }
        let whole = dim.floor().to_usize().unwrap_or(usize::MAX);
        let frac = dim - dim.floor();
        let count = whole + usize::from(frac > S::zero());
        if count > cc.max_components {
            return Err(Error::Resource(format!("{count} components exceed the cap {}", cc.max_components)));
        }
        let decay = (-params.b.integral(lo, hi) * lit(0.5)).exp();
        let var: S = quad::adaptive(
            |s: S| {
                let sig = params.sigma.value(s);
                (-params.b.integral(s, hi)).exp() * sig * sig
            },
            lo,
            hi,
            lit(1e-14),
        );
        intervals.push(Interval { dim, whole, frac, decay, sd: (quarter * var).sqrt() });
    }
    let z0 = nf * params.r0;
    let samples = (0..cc.n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cc.seed, i);
            let mut z = z0;
            for iv in &intervals {
                let mean = iv.decay * (z / iv.dim).sqrt();
                let mut acc = S::zero();
                for _ in 0..iv.whole {
                    let x = mean + iv.sd * S::sample_standard_normal(&mut rng);
                    acc = acc + x * x;
                }
                if iv.frac > S::zero() {
                    let x = mean + iv.sd * S::sample_standard_normal(&mut rng);
                    acc = acc + iv.frac * x * x;
                }
                z = acc;
            }
            z
        })
        .collect();
    Ok(samples)
}

/// Estimate of the CF of one copy from samples of the `n`-fold sum: the
/// `n`-th root of the empirical CF, with the phase continued from `ω = 0`
/// along a grid of spacing `0.5/(|mean| + 4·sd)`.
pub fn constructive_charfn<S: Real>(samples: &[S], n: usize, omegas: &[S]) -> Vec<num_complex::Complex<S>> {
    use num_complex::Complex;
    let nf = from_usize::<S>(n);
    let count = from_usize::<S>(samples.len());
    let mean = samples.iter().fold(S::zero(), |a, &x| a + x) / count;
    let var = samples.iter().fold(S::zero(), |a, &x| a + (x - mean) * (x - mean)) / count;
    let step = lit::<S>(0.5) / (mean.abs() + lit::<S>(4.0) * var.sqrt()).max(S::epsilon());
    let cf = |w: S| crate::stats::empirical_cf(samples, w).value;
    omegas
        .iter()
        .map(|&w| {
            let k = (w.abs() / step).ceil().to_usize().unwrap_or(0).max(1);
            let mut phase = S::zero();
            let mut prev = Complex::new(S::one(), S::zero());
            for j in 1..=k {
                let cur = cf(w * from_usize::<S>(j) / from_usize::<S>(k));
                phase = phase + (cur * prev.conj()).arg();
                prev = cur;
            }
            Complex::from_polar(prev.norm().powf(nf.recip()), phase / nf)
        })
        .collect()
}

/// Rate and volatility paths of a stochastic-volatility model.
#[derive(Debug, Clone, PartialEq)]
pub struct StochVolPaths<S: Real> {
    pub rates: PathSet<S>,
    pub vols: PathSet<S>,
    /// Fraction of volatility steps that hit the clamp `[0, cap]`.
    pub clamp_fraction: f64,
    pub warning: Option<String>,
}

fn clamp_report(clamps: usize, steps: usize) -> (f64, Option<String>) {
    let frac = clamps as f64 / steps.max(1) as f64;
    let warning = (frac > 0.01).then(|| format!("volatility clamped on {:.2}% of steps", 100.0 * frac));
    (frac, warning)
}

/// Independent-volatility model: `σ(t) = √v(t)` pathwise, rate and
/// volatility driven by independent Brownian motions.
pub fn simulate_stochvol_independent<S: Real>(model: &IndependentVolModel<S>, t_end: S, cfg: &SimConfig) -> Result<StochVolPaths<S>> {
    cfg.validate()?;
    model.validate()?;
    if !(t_end > S::zero()) || t_end > model.horizon {
        return Err(domain(format!("time {t_end} outside (0, horizon = {}]", model.horizon)));
    }
    let (times, h) = StepGrid::uniform(t_end, cfg.dt);
    let n_steps = times.len() - 1;
    let sqrt_h = h.sqrt();
    let b: Vec<S> = times.iter().map(|&s| model.b.value(s)).collect();
    let drift: Vec<S> = times.iter().map(|&s| model.drift.value(s)).collect();
    let record = record_steps(n_steps, cfg.record_stride);
    let rec_times: Vec<S> = record.iter().map(|&k| times[k]).collect();
    let n_t = rec_times.len();
    let vol = &model.vol;
    let rows: Vec<(Vec<S>, Vec<S>, usize)> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            let (mut r, mut v) = (model.r0, vol.v0);
            let (mut rr, mut vv) = (Vec::with_capacity(n_t), Vec::with_capacity(n_t));
            let mut clamps = 0;
            let mut slot = 0;
            for k in 0..=n_steps {
                if record[slot] == k {
                    rr.push(r.max(S::zero()));
                    vv.push(v);
                    slot += 1;
                }
                if k == n_steps {
                    break;
                }
                let (z_r, z_v) = (S::sample_standard_normal(&mut rng), S::sample_standard_normal(&mut rng));
                let theta = model.drift.theta(drift[k], v);
                r = euler_step(cfg.scheme, r, b[k], theta, v.sqrt(), h, sqrt_h, z_r);
                let (next, clamped) = vol.step(v, h, sqrt_h, z_v);
                v = next;
                clamps += usize::from(clamped);
            }
            (rr, vv, clamps)
        })
        .collect();
    let mut rates = Vec::with_capacity(cfg.n_paths * n_t);
    let mut vols = Vec::with_capacity(cfg.n_paths * n_t);
    let mut clamps = 0;
    for (rr, vv, c) in rows {
        rates.extend(rr);
        vols.extend(vv);
        clamps += c;
    }
    let (clamp_fraction, warning) = clamp_report(clamps, cfg.n_paths * n_steps);
    Ok(StochVolPaths {
        rates: PathSet { times: rec_times.clone(), values: rates, measure: Measure::RiskNeutral },
        vols: PathSet { times: rec_times, values: vols, measure: Measure::RiskNeutral },
        clamp_fraction,
        warning,
    })
}

/// Correlated model `r = w + v`: `w` is square-root with diffusion `√(v w)`
/// and level `θ_w`, `v` mean-reverts to `θ_v` with diffusion `ξ v`; the two
/// Brownian drivers are independent. `rates` holds `r`, `vols` holds `v`.
pub fn simulate_correlated_wv<S: Real>(model: &CorrelatedVolModel<S>, t_end: S, cfg: &SimConfig) -> Result<StochVolPaths<S>> {
    cfg.validate()?;
    model.validate()?;
    if !(t_end > S::zero()) || t_end > model.horizon {
        return Err(domain(format!("time {t_end} outside (0, horizon = {}]", model.horizon)));
    }
    let (times, h) = StepGrid::uniform(t_end, cfg.dt);
    let n_steps = times.len() - 1;
    let sqrt_h = h.sqrt();
    let b: Vec<S> = times.iter().map(|&s| model.b.value(s)).collect();
    let tw: Vec<S> = times.iter().map(|&s| model.theta_w.value(s)).collect();
    let tv: Vec<S> = times.iter().map(|&s| model.theta_v.value(s)).collect();
    let record = record_steps(n_steps, cfg.record_stride);
    let rec_times: Vec<S> = record.iter().map(|&k| times[k]).collect();
    let n_t = rec_times.len();
    let rows: Vec<(Vec<S>, Vec<S>, usize)> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            let (mut w, mut v) = (model.w0, model.v0);
            let (mut rr, mut vv) = (Vec::with_capacity(n_t), Vec::with_capacity(n_t));
            let mut clamps = 0;
            let mut slot = 0;
            for k in 0..=n_steps {
                if record[slot] == k {
                    rr.push(w.max(S::zero()) + v);
                    vv.push(v);
                    slot += 1;
                }
                if k == n_steps {
                    break;
                }
                let (z_w, z_v) = (S::sample_standard_normal(&mut rng), S::sample_standard_normal(&mut rng));
                w = euler_step(cfg.scheme, w, b[k], tw[k], v.sqrt(), h, sqrt_h, z_w);
                let raw = v + (tv[k] - b[k] * v) * h + model.xi * v * sqrt_h * z_v;
                let next = raw.max(S::zero()).min(model.cap);
                clamps += usize::from(next != raw);
                v = next;
            }
            (rr, vv, clamps)
        })
        .collect();
    let mut rates = Vec::with_capacity(cfg.n_paths * n_t);
    let mut vols = Vec::with_capacity(cfg.n_paths * n_t);
    let mut clamps = 0;
    for (rr, vv, c) in rows {
        rates.extend(rr);
        vols.extend(vv);
        clamps += c;
    }
    let (clamp_fraction, warning) = clamp_report(clamps, cfg.n_paths * n_steps);
    Ok(StochVolPaths {
        rates: PathSet { times: rec_times.clone(), values: rates, measure: Measure::RiskNeutral },
        vols: PathSet { times: rec_times, values: vols, measure: Measure::RiskNeutral },
        clamp_fraction,
        warning,
    })
}
