//! Law of the short rate `r(t)` through its closed-form transforms.
//!
//! With `B(s, t) = ∫ₛᵗ b` and `Σ(s, t) = ¼∫ₛᵗ e^{−B(v, t)} σ²(v) dv`,
//!
//! ```text
//! E[e^{u r(t)}] = exp(u·( r₀e^{−B(0,t)} / (1 − 2uΣ(0,t))
//!                        + ∫₀ᵗ e^{−B(s,t)} θ(s) / (1 − 2uΣ(s,t)) ds ))
//! ```
//!
//! for every complex `u` off the cut `[1/(2Σ(0,t)), ∞)`. `u = iω` gives the
//! characteristic function, `u = −p` the Laplace transform.

use num_complex::Complex;

use crate::error::{domain, Error, Result};
use crate::quad::{self, gl10, gl20};
use crate::real::{from_usize, lit, Real};
use crate::termstructure::{ExtendedCirParams, ParameterCurve};

/// Uniform intervals in the cumulative `Σ` table (knots are added on top).
const TABLE_INTERVALS: usize = 64;

/// The distribution of `r(t)` for a fixed horizon `t`.
///
/// The drift curve may be overridden (forward-measure use); `σ` and `θ` are
/// always those of the model.
#[derive(Debug, Clone)]
pub struct RateLaw<S: Real> {
    params: ExtendedCirParams<S>,
    t: S,
    breaks: Vec<S>,
    nodes: Vec<S>,
    /// `G(x) = ∫₀ˣ e^{B(0,v)} σ²(v) dv` at `nodes`.
    g_cum: Vec<S>,
    b_total: S,
    /// Deterministic part of the mean; sets quadrature tolerances.
    scale: S,
}

impl<S: Real> RateLaw<S> {
    pub fn new(params: &ExtendedCirParams<S>, t: S) -> Result<Self> {
        Self::build(params.clone(), t, params.breakpoints())
    }

    /// Law of `r(t)` with `b` replaced by `drift` on `[0, t]`.
    ///
    /// The override is assumed continuously differentiable: its knots are not
    /// used as quadrature breakpoints (dense forward-measure curves would
    /// otherwise fragment every integral).
    pub fn with_drift(params: &ExtendedCirParams<S>, t: S, drift: ParameterCurve<S>) -> Result<Self> {
        if !drift.covers(S::zero(), t) {
            return Err(Error::InvalidParams(format!("drift override does not cover [0, {t}]")));
        }
        Self::build(params.with_drift(drift), t, params.breakpoints())
    }

    fn build(params: ExtendedCirParams<S>, t: S, breaks: Vec<S>) -> Result<Self> {
        if !(t > S::zero()) {
            return Err(domain(format!("rate law needs t > 0, got {t}")));
        }
        params.check_time(t)?;
        let breaks: Vec<S> = breaks.into_iter().filter(|&k| k > S::zero() && k < t).collect();
        let step = t / from_usize(TABLE_INTERVALS);
        let mut nodes: Vec<S> = (0..=TABLE_INTERVALS).map(|i| step * from_usize(i)).collect();
        nodes.extend(breaks.iter().copied());
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup_by(|a, b| (*a - *b).abs() <= t * lit(1e-14));
        *nodes.last_mut().unwrap() = t;

        let mut law = Self {
            params,
            t,
            breaks,
            nodes,
            g_cum: Vec::new(),
            b_total: S::zero(),
            scale: S::one(),
        };
        let mut g_cum = Vec::with_capacity(law.nodes.len());
        g_cum.push(S::zero());
        for w in law.nodes.windows(2) {
            let piece: S = gl20().integrate(w[0], w[1], &mut |v| law.g_density(v));
            g_cum.push(*g_cum.last().unwrap() + piece);
        }
        law.g_cum = g_cum;
        law.b_total = law.big_b(t);
        law.scale = law.r0_term() + law.theta_integral(|_| S::one());
        Ok(law)
    }

    pub fn params(&self) -> &ExtendedCirParams<S> {
        &self.params
    }

    pub fn t(&self) -> S {
        self.t
    }

    #[inline]
    fn big_b(&self, x: S) -> S {
        self.params.b.integral(S::zero(), x)
    }

    #[inline]
    fn g_density(&self, v: S) -> S {
        let s = self.params.sigma.value(v);
        self.big_b(v).exp() * s * s
    }

    fn g(&self, x: S) -> S {
        let k = self.nodes.partition_point(|&n| n <= x).saturating_sub(1).min(self.nodes.len() - 2);
        self.g_cum[k] + gl10().integrate(self.nodes[k], x, &mut |v| self.g_density(v))
    }

    /// `Σ(s, t)` without range checks.
    fn sigma_raw(&self, s: S) -> S {
        let diff = *self.g_cum.last().unwrap() - self.g(s);
        (lit::<S>(0.25) * (-self.b_total).exp() * diff).max(S::zero())
    }

    /// `Σ(s, t) = ¼∫ₛᵗ e^{−∫ᵥᵗb} σ²(v) dv` under the law's drift.
    pub fn sigma_integral(&self, s: S) -> Result<S> {
        if !(s >= S::zero()) || s > self.t {
            return Err(domain(format!("sigma_integral: s={s} outside [0, {}]", self.t)));
        }
        Ok(self.sigma_raw(s))
    }

    #[inline]
    fn r0_term(&self) -> S {
        self.params.r0 * (-self.b_total).exp()
    }

    /// `e^{−B(s,t)} θ(s)`.
    #[inline]
    fn theta_weight(&self, s: S) -> S {
        (self.big_b(s) - self.b_total).exp() * self.params.theta.value(s)
    }

    fn theta_integral<F: Fn(S) -> S>(&self, f: F) -> S {
        quad::adaptive_with_breaks(
            |s| self.theta_weight(s) * f(s),
            S::zero(),
            self.t,
            &self.breaks,
            lit(1e-15),
        )
    }

    /// `log E[e^{u r(t)}]`.
    pub fn log_mgf(&self, u: Complex<S>) -> Complex<S> {
        if u == Complex::new(S::zero(), S::zero()) {
            return u;
        }
        let one = Complex::new(S::one(), S::zero());
        let two_u = u * lit::<S>(2.0);
        let sigma0 = self.sigma_raw(S::zero());
        // Near the cut the integrand carries cancellation noise ~ eps·|u|Σ.
        let noise = lit::<S>(1e-15) * self.scale * (S::one() + u.norm() * sigma0);
        let tol = (lit::<S>(1e-13) * self.scale / u.norm().max(S::one())).max(noise);
        let integral: Complex<S> = quad::adaptive_with_breaks(
            |s| (one - two_u * self.sigma_raw(s)).inv() * self.theta_weight(s),
            S::zero(),
            self.t,
            &self.breaks,
            tol,
        );
        u * ((one - two_u * sigma0).inv() * self.r0_term() + integral)
    }

    /// `E[e^{u r(t)}]`.
    pub fn mgf(&self, u: Complex<S>) -> Complex<S> {
        self.log_mgf(u).exp()
    }

    /// `E[e^{iω r(t)}]`.
    pub fn charfn_rate(&self, omega: S) -> Complex<S> {
        self.mgf(Complex::new(S::zero(), omega))
    }

    /// `E[e^{−p r(t)}]`. Any `p` off the real half-line
    /// `(−∞, −1/(2Σ(0,t))]` is accepted; points on it are poles or branch
    /// points of the transform.
    pub fn laplace_rate(&self, p: Complex<S>) -> Result<Complex<S>> {
        let sigma0 = self.sigma_raw(S::zero());
        if p.im == S::zero() && sigma0 > S::zero() && p.re <= -(lit::<S>(2.0) * sigma0).recip() {
            return Err(domain(format!(
                "laplace_rate: p={} lies on the singular half-line p <= {}",
                p.re,
                -(lit::<S>(2.0) * sigma0).recip()
            )));
        }
        Ok(self.mgf(-p))
    }

    /// The characteristic function in its form before integration by parts:
    ///
    /// ```text
    /// exp(iω r₀e^{−B}/(1−2iωΣ(0,t))) · (1−2iωΣ(0,t))^{−d(0)/2}
    ///   · exp(−½ ∫₀ᵗ d′(s) log(1−2iωΣ(s,t)) ds)
    /// ```
    ///
    /// The logarithm follows a branch tracked continuously from `s = t`.
    pub fn charfn_rate_preibp(&self, omega: S) -> Complex<S> {
        if omega == S::zero() {
            return Complex::new(S::one(), S::zero());
        }
        let one = Complex::new(S::one(), S::zero());
        let two_u = Complex::new(S::zero(), lit::<S>(2.0) * omega);
        let branch = BranchTracker::new(|s| one - two_u * self.sigma_raw(s), self.t);
        let log_at = |s: S| {
            let z = one - two_u * self.sigma_raw(s);
            Complex::new(z.norm().ln(), branch.unwrap_arg(s, z.arg()))
        };
        let sigma0 = self.sigma_raw(S::zero());
        let tol = lit::<S>(1e-14) / omega.abs().max(S::one());
        let tail: Complex<S> = quad::adaptive_with_breaks(
            |s| log_at(s) * self.params.dimension_slope_at(s),
            S::zero(),
            self.t,
            &self.breaks,
            tol,
        );
        let u = Complex::new(S::zero(), omega);
        let lead = u * self.r0_term() / (one - two_u * sigma0);
        let d0 = self.params.dimension_at(S::zero());
        (lead - log_at(S::zero()) * (d0 * lit::<S>(0.5)) - tail * lit::<S>(0.5)).exp()
    }

    /// `E[r(t)] = r₀e^{−B(0,t)} + ∫₀ᵗ e^{−B(s,t)} θ(s) ds`.
    pub fn mean(&self) -> S {
        self.scale
    }

    /// `k`-th cumulant, `k! 2^{k−1} (r₀e^{−B}Σ(0,t)^{k−1} + ∫ e^{−B(s,t)}θ(s)Σ(s,t)^{k−1} ds)`.
    pub fn cumulant(&self, k: u32) -> S {
        assert!(k >= 1);
        if k == 1 {
            return self.scale;
        }
        let e = (k - 1) as i32;
        let mut factorial = S::one();
        for j in 2..=k {
            factorial = factorial * from_usize::<S>(j as usize);
        }
        let inner = self.r0_term() * self.sigma_raw(S::zero()).powi(e) + self.theta_integral(|s| self.sigma_raw(s).powi(e));
        factorial * lit::<S>(2.0).powi(e) * inner
    }

    pub fn variance(&self) -> S {
        self.cumulant(2)
    }
}

/// Continuous argument of `z(s)` along `s ∈ [0, t]`, anchored at `arg z(t) = 0`.
struct BranchTracker<S: Real> {
    step: S,
    /// Unwrapped argument at `s_j = t − j·step`.
    args: Vec<S>,
}

impl<S: Real> BranchTracker<S> {
    fn new<F: Fn(S) -> Complex<S>>(z: F, t: S) -> Self {
        let quarter = S::FRAC_PI_4();
        let mut n = 64usize;
        loop {
            let step = t / from_usize(n);
            let mut args = Vec::with_capacity(n + 1);
            let mut prev = S::zero();
            let mut ok = true;
            for j in 0..=n {
                let a = unwrap_near(z(t - step * from_usize(j)).arg(), prev);
                if j > 0 && (a - prev).abs() >= quarter {
                    ok = false;
                }
                args.push(a);
                prev = a;
            }
            if ok || n >= 1 << 16 {
                return Self { step, args };
            }
            n *= 2;
        }
    }

    fn unwrap_arg(&self, s: S, principal: S) -> S {
        let t = self.step * from_usize(self.args.len() - 1);
        let pos = ((t - s) / self.step).max(S::zero());
        let j = pos.floor().to_usize().unwrap_or(0).min(self.args.len() - 2);
        let frac = pos - from_usize(j);
        let reference = self.args[j] + (self.args[j + 1] - self.args[j]) * frac;
        unwrap_near(principal, reference)
    }
}

fn unwrap_near<S: Real>(a: S, reference: S) -> S {
    let two_pi = S::PI() * lit(2.0);
    a + two_pi * ((reference - a) / two_pi).round()
}

/// Density inversion settings.
#[derive(Debug, Clone, Copy)]
pub struct DensityConfig {
    /// Contour nodes of the fixed Talbot rule.
    pub n_quad: usize,
    /// Agreement required between the `n_quad` and `n_quad + 8` estimates,
    /// relative to `1 + |f|`.
    pub tolerance: f64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self { n_quad: 32, tolerance: 1e-7 }
    }
}

#[derive(Debug, Clone)]
pub struct DensityResult<S: Real> {
    pub x: Vec<S>,
    pub density: Vec<S>,
    /// Set when an estimate failed its convergence check or dipped below
    /// `−1e-6`.
    pub warning: Option<String>,
}

impl<S: Real> DensityResult<S> {
    /// Trapezoid mass over the grid (infinite values are skipped).
    pub fn mass(&self) -> S {
        trapezoid(&self.x, &self.density)
    }
}

pub fn trapezoid<S: Real>(x: &[S], f: &[S]) -> S {
    x.windows(2)
        .zip(f.windows(2))
        .filter(|(_, fv)| fv[0].is_finite() && fv[1].is_finite())
        .map(|(xv, fv)| (xv[1] - xv[0]) * (fv[0] + fv[1]) * lit(0.5))
        .sum()
}

/// Density of `r(t)` on `x_grid` by inverting the transform along a fixed
/// Talbot contour (all singularities lie on the negative real `p` axis).
///
/// At `x = 0` the density is `0` for `d(t) > 2`, infinite for `d(t) < 2`, and
/// `lim p·F̂(p)` when `d(t) = 2`.
pub fn density_from_cf<S: Real>(law: &RateLaw<S>, x_grid: &[S], cfg: DensityConfig) -> Result<DensityResult<S>> {
    if x_grid.is_empty() {
        return Err(domain("density_from_cf: empty grid"));
    }
    if x_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(domain("density_from_cf: grid must be strictly increasing"));
    }
    if cfg.n_quad < 8 {
        return Err(domain("density_from_cf: n_quad must be at least 8"));
    }
    let mut warning = None;
    let mut density = Vec::with_capacity(x_grid.len());
    let tol = lit::<S>(cfg.tolerance);
    let estimate = |x: S, warning: &mut Option<String>| -> S {
        let a = talbot(law, x, cfg.n_quad);
        let b = talbot(law, x, cfg.n_quad + 8);
        if !((a - b).abs() <= tol * (S::one() + b.abs())) && warning.is_none() {
            *warning = Some(format!("inversion at x={x} not converged: {a:e} vs {b:e}"));
        }
        b
    };
    let d_end = law.params.dimension_at(law.t);
    for &x in x_grid {
        let f = if x < S::zero() {
            S::zero()
        } else if x > S::zero() {
            estimate(x, &mut warning)
        } else if d_end > lit::<S>(2.0 + 1e-9) {
            S::zero()
        } else if d_end < lit::<S>(2.0 - 1e-9) {
            S::infinity()
        } else {
            origin_density(law)
        };
        if f < lit(-1e-6) && warning.is_none() {
            warning = Some(format!("negative density {f:e} at x={x}"));
        }
        density.push(f);
    }
    Ok(DensityResult { x: x_grid.to_vec(), density, warning })
}

/// `f(0+) = lim p·F̂(p)` for `d(t) = 2`, Richardson-extrapolated in `1/p`.
fn origin_density<S: Real>(law: &RateLaw<S>) -> S {
    let p = lit::<S>(1e6) / law.sigma_raw(S::zero()).max(S::min_positive_value());
    let g = |p: S| p * law.mgf(Complex::new(-p, S::zero())).re;
    lit::<S>(2.0) * g(p * lit(2.0)) - g(p)
}

/// Fixed Talbot inversion with `m` nodes at `x > 0`.
fn talbot<S: Real>(law: &RateLaw<S>, x: S, m: usize) -> S {
    let mf = from_usize::<S>(m);
    let r = lit::<S>(0.4) * mf / x;
    let mut acc = (law.mgf(Complex::new(-r, S::zero())) * (r * x).exp()).re * lit(0.5);
    for k in 1..m {
        let th = S::PI() * from_usize::<S>(k) / mf;
        let cot = th.cos() / th.sin();
        let p = Complex::new(r * th * cot, r * th);
        if p.re * x < lit(-46.0) {
            // e^{px} < 1e-20: the remaining nodes are negligible.
            break;
        }
        let sig = th + (th * cot - S::one()) * cot;
        let term = (p * x).exp() * law.mgf(-p) * Complex::new(S::one(), sig);
        acc = acc + term.re;
    }
    acc * r / mf
}

/// Finite-difference residual of the transformed Fokker-Planck equation
///
/// ```text
/// ∂ₜΦ̂ + θ(t) i x Φ̂ + (b(t) x + i σ²(t) x²/2) ∂ₓΦ̂,   Φ̂(x, t) = Φ(−x, t)/√(2π)
/// ```
///
/// at the law's horizon, with central differences of steps `h_t`, `h_x`.
pub fn fokker_planck_residual<S: Real>(law: &RateLaw<S>, x: S, h_t: S, h_x: S) -> Result<Complex<S>> {
    let t = law.t;
    if !(h_t > S::zero()) || h_t >= t || !(h_x > S::zero()) {
        return Err(domain("fokker_planck_residual: need 0 < h_t < t and h_x > 0"));
    }
    let params = &law.params;
    let norm = (S::PI() * lit(2.0)).sqrt().recip();
    let phi_hat = |l: &RateLaw<S>, x: S| l.charfn_rate(-x) * norm;
    let later = RateLaw::build(params.clone(), t + h_t, params.breakpoints())?;
    let earlier = RateLaw::build(params.clone(), t - h_t, params.breakpoints())?;
    let two = lit::<S>(2.0);
    let dt = (phi_hat(&later, x) - phi_hat(&earlier, x)) / (two * h_t);
    let dx = (phi_hat(law, x + h_x) - phi_hat(law, x - h_x)) / (two * h_x);
    let sigma = params.sigma.value(t);
    let i = Complex::new(S::zero(), S::one());
    let coeff = Complex::new(params.b.value(t) * x, sigma * sigma * x * x * lit(0.5));
    Ok(dt + i * (params.theta.value(t) * x) * phi_hat(law, x) + coeff * dx)
}
