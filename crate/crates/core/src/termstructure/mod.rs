//! Time-varying model parameters `b(t)`, `σ(t)`, `θ(t)` of
//!
//! ```text
//! dr(t) = (−b(t) r(t) + θ(t)) dt + σ(t) √r(t) dB(t),   r(0) = r₀
//! ```
//!
//! and the quantities derived from them: the dimension curve
//! `d(t) = 4θ(t)/σ²(t)` and drift integrals `∫ b`.

mod curve;

pub use curve::{CurveDoc, ParameterCurve, PiecewiseCubic};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::real::{lit, Real};

/// The extended CIR model on `[0, horizon]`.
///
/// Construction checks structure (finite `r₀ > 0`, curves defined on the
/// horizon). Positivity of `σ` and `θ` is reported by
/// [`validate_assumption1`] rather than enforced, so that degenerate limits
/// (`σ ≡ 0`) remain representable.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedCirParams<S: Real> {
    pub b: ParameterCurve<S>,
    pub sigma: ParameterCurve<S>,
    pub theta: ParameterCurve<S>,
    pub r0: S,
    pub horizon: S,
}

impl<S: Real> ExtendedCirParams<S> {
    pub fn new(
        b: ParameterCurve<S>,
        sigma: ParameterCurve<S>,
        theta: ParameterCurve<S>,
        r0: S,
        horizon: S,
    ) -> Result<Self> {
        if !(r0 > S::zero()) || !r0.is_finite() {
            return Err(Error::InvalidParams(format!("r0 must be positive, got {r0}")));
        }
        if !(horizon > S::zero()) || !horizon.is_finite() {
            return Err(Error::InvalidParams(format!("horizon must be positive, got {horizon}")));
        }
        for (name, c) in [("b", &b), ("sigma", &sigma), ("theta", &theta)] {
            if !c.covers(S::zero(), horizon) {
                return Err(Error::InvalidParams(format!("curve {name} does not cover [0, {horizon}]")));
            }
        }
        Ok(Self { b, sigma, theta, r0, horizon })
    }

    /// All-constant model.
    pub fn constant(b: S, sigma: S, theta: S, r0: S, horizon: S) -> Result<Self> {
        Self::new(
            ParameterCurve::constant(b),
            ParameterCurve::constant(sigma),
            ParameterCurve::constant(theta),
            r0,
            horizon,
        )
    }

    pub fn is_constant(&self) -> bool {
        self.b.is_constant() && self.sigma.is_constant() && self.theta.is_constant()
    }

    /// Same model with `b` replaced (forward-measure drift, for instance).
    pub fn with_drift(&self, b: ParameterCurve<S>) -> Self {
        Self { b, ..self.clone() }
    }

    pub(crate) fn check_time(&self, t: S) -> Result<()> {
        let slack = S::epsilon() * lit(16.0) * (S::one() + self.horizon);
        if !(t >= S::zero()) || t > self.horizon + slack {
            return Err(domain(format!("time {t} outside [0, {}]", self.horizon)));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn dimension_at(&self, t: S) -> S {
        let s = self.sigma.value(t);
        lit::<S>(4.0) * self.theta.value(t) / (s * s)
    }

    /// `d'(t)` from the curve derivatives.
    #[inline]
    pub(crate) fn dimension_slope_at(&self, t: S) -> S {
        let s = self.sigma.value(t);
        let th = self.theta.value(t);
        lit::<S>(4.0) * self.theta.derivative(t) / (s * s)
            - lit::<S>(8.0) * th * self.sigma.derivative(t) / (s * s * s)
    }

    /// Union of knot grids of all three curves.
    pub(crate) fn breakpoints(&self) -> Vec<S> {
        let mut all: Vec<S> = self
            .b
            .knots()
            .iter()
            .chain(self.sigma.knots())
            .chain(self.theta.knots())
            .copied()
            .collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        all.dedup();
        all
    }
}

/// `d(t) = 4θ(t)/σ²(t)`.
pub fn dimension<S: Real>(params: &ExtendedCirParams<S>, t: S) -> Result<S> {
    params.check_time(t)?;
    Ok(params.dimension_at(t))
}

/// `∫ₛᵗ b(u) du`.
pub fn integrate_b<S: Real>(params: &ExtendedCirParams<S>, s: S, t: S) -> Result<S> {
    if s > t {
        return Err(domain(format!("integrate_b: s={s} > t={t}")));
    }
    params.check_time(s)?;
    params.check_time(t)?;
    Ok(params.b.integral(s, t))
}

/// Outcome of the grid check of positivity and regularity of `d(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    /// Interior extrema of `d`, estimated by sign changes of `d'` on the grid.
    pub q_optima: usize,
    pub min_d: f64,
    pub max_d: f64,
    /// `d'` has matching one-sided limits at every knot.
    pub differentiable: bool,
    pub violations: Vec<(f64, String)>,
}

impl DimensionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Scans `d(t)` on a uniform grid of `grid_resolution` intervals and reports
/// extrema count, minimum, and positivity breaches of `σ`, `θ`, `d`.
pub fn validate_assumption1<S: Real>(params: &ExtendedCirParams<S>, grid_resolution: usize) -> Result<DimensionReport> {
    if grid_resolution < 2 {
        return Err(domain("grid_resolution must be at least 2"));
    }
    let horizon = params.horizon;
    let step = horizon / lit(grid_resolution as f64);
    let mut probes: Vec<S> = (0..=grid_resolution).map(|i| step * lit(i as f64)).collect();
    for c in [&params.b, &params.sigma, &params.theta] {
        let k = c.knots();
        probes.extend(k.iter().copied().filter(|&t| t >= S::zero() && t <= horizon));
        probes.extend(k.windows(2).map(|w| (w[0] + w[1]) * lit(0.5)).filter(|&t| t >= S::zero() && t <= horizon));
    }
    probes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    probes.dedup();

    let mut violations = Vec::new();
    for &t in &probes {
        let s = params.sigma.value(t);
        let th = params.theta.value(t);
        if !(s > S::zero()) {
            violations.push((t.to_f64().unwrap(), format!("sigma(t) = {s} is not positive")));
        }
        if !(th > S::zero()) {
            violations.push((t.to_f64().unwrap(), format!("theta(t) = {th} is not positive")));
        }
        if params.b.value(t) < S::zero() {
            violations.push((t.to_f64().unwrap(), "b(t) is negative".to_string()));
        }
    }

    let mut min_d = f64::INFINITY;
    let mut max_d = f64::NEG_INFINITY;
    let mut slopes = Vec::with_capacity(grid_resolution + 1);
    for i in 0..=grid_resolution {
        let t = step * lit(i as f64);
        let d = params.dimension_at(t).to_f64().unwrap_or(f64::NAN);
        if d.is_finite() {
            min_d = min_d.min(d);
            max_d = max_d.max(d);
        }
        slopes.push(params.dimension_slope_at(t).to_f64().unwrap_or(f64::NAN));
    }
    if !(min_d > 0.0) {
        violations.push((0.0, format!("dimension d(t) not bounded away from zero (min {min_d})")));
    }

    // slopes below this scale are treated as flat
    let flat = 1e-9 * max_d.abs().max(1.0) / horizon.to_f64().unwrap();
    let mut q_optima = 0;
    let mut last_sign = 0i8;
    for &ds in &slopes {
        if !ds.is_finite() || ds.abs() <= flat {
            continue;
        }
        let sign = if ds > 0.0 { 1 } else { -1 };
        if last_sign != 0 && sign != last_sign {
            q_optima += 1;
        }
        last_sign = sign;
    }

    let mut differentiable = true;
    for c in [&params.sigma, &params.theta] {
        for &k in c.knots() {
            let (l, r) = (c.derivative_left(k), c.derivative(k));
            let scale = l.abs().max(r.abs()).max(S::one());
            if (l - r).abs() > scale * lit(1e-8) {
                differentiable = false;
            }
        }
    }

    Ok(DimensionReport { q_optima, min_d, max_d, differentiable, violations })
}
