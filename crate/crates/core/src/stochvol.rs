//! Rate transforms conditional on a realized volatility path.
//!
//! With `σ²(s) = v(s)` frozen along a path the rate is an extended CIR
//! process, so its conditional transform is the closed form of
//! [`crate::charfn`] with `Σ(s, t) = ¼∫ₛᵗ e^{−∫_τ^t b} v(τ) dτ` built from the
//! path. Path integrals use the trapezoid rule on the recorded grid.

use num_complex::Complex;

use crate::error::{domain, Error, Result};
use crate::montecarlo::PathSet;
use crate::real::{lit, Real};
use crate::stats::{ComplexEstimate, Estimate};
use crate::termstructure::{ExtendedCirParams, ParameterCurve};

/// `dv = κ(m − v)dt + ξ v dB^v`, kept in `[0, cap]` by clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolDynamics<S: Real> {
    pub kappa: S,
    pub mean: S,
    pub xi: S,
    pub v0: S,
    pub cap: S,
}

impl<S: Real> VolDynamics<S> {
    pub fn validate(&self) -> Result<()> {
        if !(self.v0 > S::zero()) || !(self.cap > self.v0) {
            return Err(domain("vol dynamics: need 0 < v0 < cap"));
        }
        if !(self.kappa >= S::zero()) || !(self.mean >= S::zero()) || !(self.xi >= S::zero()) {
            return Err(domain("vol dynamics: kappa, mean and xi must be nonnegative"));
        }
        Ok(())
    }

    /// One Euler step; the flag reports a clamp.
    #[inline]
    pub fn step(&self, v: S, dt: S, sqrt_dt: S, z: S) -> (S, bool) {
        let raw = v + self.kappa * (self.mean - v) * dt + self.xi * v * sqrt_dt * z;
        let next = raw.max(S::zero()).min(self.cap);
        (next, next != raw)
    }

    /// No randomness and `v ≡ v₀`.
    pub fn is_degenerate(&self) -> bool {
        self.xi == S::zero() && (self.kappa == S::zero() || self.mean == self.v0)
    }
}

/// How the rate's level enters once `σ² = v` is stochastic.
#[derive(Debug, Clone, PartialEq)]
pub enum RateDrift<S: Real> {
    /// `θ(s)` given directly.
    Theta(ParameterCurve<S>),
    /// Dimension `d(s)`, so that `θ(s) = d(s) v(s)/4`.
    Dimension(ParameterCurve<S>),
}

impl<S: Real> RateDrift<S> {
    pub fn curve(&self) -> &ParameterCurve<S> {
        match self {
            Self::Theta(c) | Self::Dimension(c) => c,
        }
    }

    pub(crate) fn value(&self, s: S) -> S {
        self.curve().value(s)
    }

    #[inline]
    pub(crate) fn theta(&self, curve_value: S, v: S) -> S {
        match self {
            Self::Theta(_) => curve_value,
            Self::Dimension(_) => curve_value * v * lit(0.25),
        }
    }
}

/// `dr = (−b r + θ)dt + √(v r) dB`, `v` from [`VolDynamics`], independent
/// drivers.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependentVolModel<S: Real> {
    pub b: ParameterCurve<S>,
    pub drift: RateDrift<S>,
    pub r0: S,
    pub vol: VolDynamics<S>,
    pub horizon: S,
}

impl<S: Real> IndependentVolModel<S> {
    pub fn validate(&self) -> Result<()> {
        self.vol.validate()?;
        if !(self.r0 > S::zero()) || !(self.horizon > S::zero()) {
            return Err(domain("stochvol model: need r0 > 0 and horizon > 0"));
        }
        for c in [&self.b, self.drift.curve()] {
            if !c.covers(S::zero(), self.horizon) {
                return Err(Error::InvalidParams("stochvol curve does not cover the horizon".into()));
            }
        }
        Ok(())
    }

    /// The deterministic model obtained when the volatility is degenerate.
    pub fn frozen_params(&self) -> Result<ExtendedCirParams<S>> {
        if !self.vol.is_degenerate() {
            return Err(domain("volatility is not degenerate"));
        }
        let v0 = self.vol.v0;
        let theta = match &self.drift {
            RateDrift::Theta(c) => c.clone(),
            RateDrift::Dimension(c) => scale_curve(c, v0 * lit(0.25))?,
        };
        ExtendedCirParams::new(self.b.clone(), ParameterCurve::constant(v0.sqrt()), theta, self.r0, self.horizon)
    }
}

fn scale_curve<S: Real>(c: &ParameterCurve<S>, k: S) -> Result<ParameterCurve<S>> {
    match c {
        ParameterCurve::Constant(x) => Ok(ParameterCurve::Constant(*x * k)),
        ParameterCurve::Cubic(_) => {
            let knots = c.knots().to_vec();
            let values = knots.iter().map(|&s| c.value(s) * k).collect();
            let slopes = knots.iter().map(|&s| c.derivative(s) * k).collect();
            ParameterCurve::hermite(knots, values, slopes)
        }
    }
}

/// `r = w + v` with
///
/// ```text
/// dw = (−b w + θ_w)dt + √(v w) dB
/// dv = (−b v + θ_v)dt + ξ v dB^v
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedVolModel<S: Real> {
    pub b: ParameterCurve<S>,
    pub theta_w: ParameterCurve<S>,
    pub theta_v: ParameterCurve<S>,
    pub xi: S,
    pub w0: S,
    pub v0: S,
    pub cap: S,
    pub horizon: S,
}

impl<S: Real> CorrelatedVolModel<S> {
    pub fn validate(&self) -> Result<()> {
        if !(self.w0 > S::zero()) || !(self.v0 > S::zero()) || !(self.cap > self.v0) || !(self.xi >= S::zero()) {
            return Err(domain("correlated model: need w0 > 0, 0 < v0 < cap, xi ≥ 0"));
        }
        if !(self.horizon > S::zero()) {
            return Err(domain("correlated model: horizon must be positive"));
        }
        for c in [&self.b, &self.theta_w, &self.theta_v] {
            if !c.covers(S::zero(), self.horizon) {
                return Err(Error::InvalidParams("stochvol curve does not cover the horizon".into()));
            }
        }
        Ok(())
    }
}

/// Deterministic ingredients on a recorded grid `s_0 = 0 < … < s_m = t`.
struct Kernel<S: Real> {
    /// `e^{−∫_{s_k}^t b}`.
    discount: Vec<S>,
    /// Trapezoid weights.
    weights: Vec<S>,
    /// Half-widths `(s_{k+1} − s_k)/2`.
    half: Vec<S>,
    /// Drift curve at the nodes.
    level: Vec<S>,
    x0: S,
}

impl<S: Real> Kernel<S> {
    fn new(b: &ParameterCurve<S>, level: &dyn Fn(S) -> S, times: &[S], x0: S) -> Self {
        let t = *times.last().unwrap();
        let m = times.len();
        let half: Vec<S> = times.windows(2).map(|w| (w[1] - w[0]) * lit(0.5)).collect();
        let mut weights = vec![S::zero(); m];
        for (k, &h) in half.iter().enumerate() {
            weights[k] = weights[k] + h;
            weights[k + 1] = weights[k + 1] + h;
        }
        Self {
            discount: times.iter().map(|&s| (-b.integral(s, t)).exp()).collect(),
            weights,
            half,
            level: times.iter().map(|&s| level(s)).collect(),
            x0,
        }
    }

    /// `Σ(s_k, t)` at every node.
    fn sigma(&self, v: &[S]) -> Vec<S> {
        let m = v.len();
        let mut out = vec![S::zero(); m];
        let quarter = lit::<S>(0.25);
        for k in (0..m - 1).rev() {
            out[k] = out[k + 1] + quarter * self.half[k] * (self.discount[k] * v[k] + self.discount[k + 1] * v[k + 1]);
        }
        out
    }

    fn theta(&self, drift: &RateDrift<S>, v: &[S]) -> Vec<S> {
        self.level.iter().zip(v).map(|(&l, &vk)| drift.theta(l, vk)).collect()
    }

    /// `log E[e^{u r(t)} | v]`.
    fn log_mgf(&self, sigma: &[S], theta: &[S], u: Complex<S>) -> Complex<S> {
        let one = Complex::new(S::one(), S::zero());
        let two_u = u * lit::<S>(2.0);
        let mut acc = (one - two_u * sigma[0]).inv() * (self.x0 * self.discount[0]);
        for k in 0..sigma.len() {
            acc = acc + (one - two_u * sigma[k]).inv() * (self.weights[k] * self.discount[k] * theta[k]);
        }
        u * acc
    }

    /// Conditional raw moments `E[r^k | v]`, `k = 1..=order`, via the
    /// cumulants `κ_j = j!·2^{j−1}·(x₀e₀Σ₀^{j−1} + ∫ e θ Σ^{j−1})`.
    fn moments(&self, sigma: &[S], theta: &[S], order: usize) -> Vec<S> {
        let mut kappa = Vec::with_capacity(order);
        let mut fact = S::one();
        let mut pow2 = S::one();
        for j in 1..=order {
            let e = (j - 1) as i32;
            let mut m = self.x0 * self.discount[0] * sigma[0].powi(e);
            for k in 0..sigma.len() {
                m = m + self.weights[k] * self.discount[k] * theta[k] * sigma[k].powi(e);
            }
            fact = fact * lit::<S>(j as f64);
            kappa.push(fact * pow2 * m);
            pow2 = pow2 * lit(2.0);
        }
        let mut mu = Vec::with_capacity(order);
        let k1 = kappa[0];
        mu.push(k1);
        if order >= 2 {
            mu.push(kappa[1] + k1 * k1);
        }
        if order >= 3 {
            mu.push(kappa[2] + lit::<S>(3.0) * kappa[1] * k1 + k1 * k1 * k1);
        }
        mu
    }
}

fn independent_kernel<S: Real>(model: &IndependentVolModel<S>, vols: &PathSet<S>) -> Kernel<S> {
    let drift = model.drift.clone();
    Kernel::new(&model.b, &move |s| drift.value(s), vols.times(), model.r0)
}

/// Conditional CF `E[e^{iωr(t)} | v]` for every volatility path.
pub fn pathwise_cf_independent<S: Real>(model: &IndependentVolModel<S>, omega: S, vols: &PathSet<S>) -> Vec<Complex<S>> {
    let kern = independent_kernel(model, vols);
    let u = Complex::new(S::zero(), omega);
    vols.paths()
        .map(|v| {
            let sigma = kern.sigma(v);
            let theta = kern.theta(&model.drift, v);
            kern.log_mgf(&sigma, &theta, u).exp()
        })
        .collect()
}

/// Path average of the conditional CF, with its standard error.
pub fn conditional_cf_independent<S: Real>(model: &IndependentVolModel<S>, omega: S, vols: &PathSet<S>) -> ComplexEstimate<S> {
    ComplexEstimate::from_samples(&pathwise_cf_independent(model, omega, vols))
}

/// Path average of the exact conditional Laplace transform `E[e^{−p r(t)} | v]`.
pub fn conditional_laplace_exact<S: Real>(model: &IndependentVolModel<S>, p: S, vols: &PathSet<S>) -> Estimate<S> {
    let kern = independent_kernel(model, vols);
    let u = Complex::new(-p, S::zero());
    let xs: Vec<S> = vols
        .paths()
        .map(|v| kern.log_mgf(&kern.sigma(v), &kern.theta(&model.drift, v), u).exp().re)
        .collect();
    Estimate::from_samples(&xs)
}

/// Truncated Taylor series `Σ_{k≤order} (−p)^k/k! · E[r(t)^k | v]`, averaged
/// over the volatility paths. `order` must be 1, 2 or 3.
pub fn conditional_laplace_taylor<S: Real>(model: &IndependentVolModel<S>, p: S, order: usize, vols: &PathSet<S>) -> Result<S> {
    if !(1..=3).contains(&order) {
        return Err(domain(format!("Taylor order must be 1, 2 or 3, got {order}")));
    }
    let kern = independent_kernel(model, vols);
    let mut total = S::zero();
    for v in vols.paths() {
        let mu = kern.moments(&kern.sigma(v), &kern.theta(&model.drift, v), order);
        let mut term = S::one();
        let mut acc = S::one();
        for (k, m) in mu.iter().enumerate() {
            term = term * (-p) / lit::<S>((k + 1) as f64);
            acc = acc + term * *m;
        }
        total = total + acc;
    }
    Ok(total / lit::<S>(vols.n_paths() as f64))
}

/// Conditional first moment `r₀e^{−∫b} + ∫ e^{−∫_s^t b} θ(s) ds` for every path
/// (it depends on the volatility only through `θ = d v/4`).
pub fn pathwise_first_moment<S: Real>(model: &IndependentVolModel<S>, vols: &PathSet<S>) -> Vec<S> {
    let kern = independent_kernel(model, vols);
    vols.paths().map(|v| kern.moments(&kern.sigma(v), &kern.theta(&model.drift, v), 1)[0]).collect()
}

/// Path average of [`pathwise_first_moment`].
pub fn first_moment<S: Real>(model: &IndependentVolModel<S>, vols: &PathSet<S>) -> Estimate<S> {
    Estimate::from_samples(&pathwise_first_moment(model, vols))
}

/// `E[e^{iω w(t)} | v]·e^{iω v(t)}` for every path of the correlated model.
pub fn pathwise_cf_correlated<S: Real>(model: &CorrelatedVolModel<S>, omega: S, vols: &PathSet<S>) -> Vec<Complex<S>> {
    let theta_w = model.theta_w.clone();
    let kern = Kernel::new(&model.b, &move |s| theta_w.value(s), vols.times(), model.w0);
    let drift = RateDrift::Theta(model.theta_w.clone());
    let u = Complex::new(S::zero(), omega);
    vols.paths()
        .map(|v| {
            let sigma = kern.sigma(v);
            let theta = kern.theta(&drift, v);
            let vt = *v.last().unwrap();
            (kern.log_mgf(&sigma, &theta, u) + u * vt).exp()
        })
        .collect()
}

/// `E[e^{iωr(t)} | v(t) ∈ bin]` from the volatility paths of one bin.
pub fn conditional_cf_correlated<S: Real>(model: &CorrelatedVolModel<S>, omega: S, bin: &PathSet<S>) -> Result<ComplexEstimate<S>> {
    if bin.n_paths() == 0 {
        return Err(domain("conditional_cf_correlated: empty bin"));
    }
    Ok(ComplexEstimate::from_samples(&pathwise_cf_correlated(model, omega, bin)))
}

/// Path indices split into `n_bins` equal-count bins by terminal value.
pub fn terminal_bins<S: Real>(paths: &PathSet<S>, n_bins: usize) -> Vec<Vec<usize>> {
    let term = paths.terminal();
    let mut idx: Vec<usize> = (0..term.len()).collect();
    idx.sort_by(|&a, &b| term[a].partial_cmp(&term[b]).expect("NaN terminal value"));
    let n = idx.len();
    (0..n_bins).map(|j| idx[j * n / n_bins..(j + 1) * n / n_bins].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::RateLaw;
    use crate::montecarlo::Measure;

    fn flat_vol_paths(v: f64, n_paths: usize, n_steps: usize, t: f64) -> PathSet<f64> {
        let times: Vec<f64> = (0..=n_steps).map(|k| t * k as f64 / n_steps as f64).collect();
        PathSet::new(times, vec![v; n_paths * (n_steps + 1)], Measure::RiskNeutral).unwrap()
    }

    fn degenerate() -> IndependentVolModel<f64> {
        IndependentVolModel {
            b: ParameterCurve::constant(0.1),
            drift: RateDrift::Theta(ParameterCurve::sample(|s: f64| 0.02 + 0.01 * s, 0.0, 1.0, 11).unwrap()),
            r0: 0.03,
            vol: VolDynamics { kappa: 0.0, mean: 0.04, xi: 0.0, v0: 0.04, cap: 1.0 },
            horizon: 1.0,
        }
    }

    #[test]
    fn degenerate_vol_reduces_to_rate_law() {
        let m = degenerate();
        let vols = flat_vol_paths(0.04, 2, 1000, 1.0);
        let law = RateLaw::new(&m.frozen_params().unwrap(), 1.0).unwrap();
        for w in [-15.0, -1.0, 0.5, 7.0, 20.0] {
            let est = conditional_cf_independent(&m, w, &vols);
            assert_eq!(est.se, 0.0);
            assert!((est.value - law.charfn_rate(w)).norm() < 1e-6, "ω={w}");
        }
        assert_eq!(conditional_cf_independent(&m, 0.0, &vols).value, Complex::new(1.0, 0.0));
    }

    #[test]
    fn taylor_orders() {
        let m = degenerate();
        let vols = flat_vol_paths(0.04, 1, 1000, 1.0);
        assert_eq!(conditional_laplace_taylor(&m, 0.0, 2, &vols).unwrap(), 1.0);
        assert!(conditional_laplace_taylor(&m, 0.1, 4, &vols).is_err());
        // order 1 against the deterministic first moment
        let mean = 0.03 * (-0.1f64).exp() + {
            let g = |s: f64| (-(0.1) * (1.0 - s)).exp() * (0.02 + 0.01 * s);
            crate::quad::adaptive(g, 0.0, 1.0, 1e-14)
        };
        let t1 = conditional_laplace_taylor(&m, 0.5, 1, &vols).unwrap();
        assert!((t1 - (1.0 - 0.5 * mean)).abs() < 1e-7);
        let p = 0.01;
        let exact = conditional_laplace_exact(&m, p, &vols).value;
        let mut prev = f64::INFINITY;
        for order in 1..=3 {
            let err = (conditional_laplace_taylor(&m, p, order, &vols).unwrap() - exact).abs();
            assert!(err < prev * 0.1, "order {order}: {err}");
            prev = err;
        }
    }

    #[test]
    fn correlated_reduces_without_vol() {
        let m = CorrelatedVolModel {
            b: ParameterCurve::constant(0.1),
            theta_w: ParameterCurve::constant(0.02),
            theta_v: ParameterCurve::constant(0.0),
            xi: 0.0,
            w0: 0.03,
            v0: 0.04,
            cap: 1.0,
            horizon: 1.0,
        };
        let vols = flat_vol_paths(0.04, 3, 1000, 1.0);
        let bin = vols.subset(&[0, 2]);
        let law = RateLaw::new(&ExtendedCirParams::constant(0.1, 0.2, 0.02, 0.03, 1.0).unwrap(), 1.0).unwrap();
        let w = 3.0;
        let got = conditional_cf_correlated(&m, w, &bin).unwrap().value;
        let want = law.charfn_rate(w) * Complex::new(0.0, w * 0.04).exp();
        assert!((got - want).norm() < 1e-6);
        assert!(conditional_cf_correlated(&m, w, &vols.subset(&[])).is_err());
    }

    #[test]
    fn bins_partition_by_terminal_value() {
        let times = vec![0.0, 1.0];
        let values: Vec<f64> = (0..10).flat_map(|i| [0.0, ((i * 7) % 10) as f64]).collect();
        let paths = PathSet::new(times, values, Measure::RiskNeutral).unwrap();
        let bins = terminal_bins(&paths, 5);
        assert_eq!(bins.len(), 5);
        let term = paths.terminal();
        for w in bins.windows(2) {
            let hi = w[0].iter().map(|&i| term[i]).fold(f64::MIN, f64::max);
            let lo = w[1].iter().map(|&i| term[i]).fold(f64::MAX, f64::min);
            assert!(hi <= lo);
        }
    }
}
