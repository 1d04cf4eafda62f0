//! European call on a zero-coupon bond: expiry `t`, bond maturity `T`,
//! strike `K`, payoff `max(P(t, T) − K, 0)`.
//!
//! Under the `t`-forward measure the rate keeps its square-root form with
//! effective mean reversion `b(s) + σ²(s) C(s, t)`, so its law is a
//! [`RateLaw`] with an overridden drift. Since `P(t, T) = e^{A − C r(t)}`,
//! the call is exercised iff `r(t) < r* = (A − ln K)/C`.

use num_complex::Complex;

use crate::bondpricing::{bond_price, constant_affine_coefficients, solve_riccati, BondSolution, STEPS_PER_YEAR};
use crate::charfn::RateLaw;
use crate::error::{domain, Error, Result};
use crate::quad::{panel_euler, GaussLegendre};
use crate::real::{lit, Real};
use crate::sncchi2::SncChi2;
use crate::termstructure::{ExtendedCirParams, ParameterCurve};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionSpec<S: Real> {
    pub expiry: S,
    pub bond_maturity: S,
    pub strike: S,
}

impl<S: Real> OptionSpec<S> {
    /// Requires `0 < t < T` and `K ≥ 0` (`K = 0` is the bond itself).
    pub fn new(expiry: S, bond_maturity: S, strike: S) -> Result<Self> {
        if !(expiry > S::zero()) || !(bond_maturity > expiry) {
            return Err(domain(format!("need 0 < t < T, got t={expiry}, T={bond_maturity}")));
        }
        if !(strike >= S::zero()) || !strike.is_finite() {
            return Err(domain(format!("strike must be finite and nonnegative, got {strike}")));
        }
        Ok(Self { expiry, bond_maturity, strike })
    }

    fn check(&self, params: &ExtendedCirParams<S>) -> Result<()> {
        Self::new(self.expiry, self.bond_maturity, self.strike)?;
        if self.bond_maturity > params.horizon * (S::one() + S::epsilon() * lit(16.0)) {
            return Err(domain(format!("maturity {} beyond horizon {}", self.bond_maturity, params.horizon)));
        }
        Ok(())
    }
}

/// Bromwich / Fourier inversion settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionConfig {
    /// Bromwich line `Re p = a`; default `min(1/(2E[r(t)]), 1/(4Σ(0,t)))`.
    pub abscissa: Option<f64>,
    /// Ordinate beyond which the tail is summed by Euler averaging; default
    /// `10/Σ(0,t)`.
    pub truncation: Option<f64>,
    /// Gauss-Legendre nodes per half-period panel.
    pub n_points: usize,
    pub euler_terms: usize,
    /// Required agreement of successive Euler estimates.
    pub tolerance: f64,
    /// Riccati steps per unit of time.
    pub riccati_steps_per_year: usize,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            abscissa: None,
            truncation: None,
            n_points: 64,
            euler_terms: 12,
            tolerance: 1e-10,
            riccati_steps_per_year: STEPS_PER_YEAR,
        }
    }
}

impl InversionConfig {
    fn validate(&self) -> Result<()> {
        if self.n_points < 64 {
            return Err(domain("InversionConfig: n_points must be at least 64"));
        }
        if let Some(a) = self.abscissa {
            if !(a > 0.0) {
                return Err(domain("InversionConfig: abscissa must be positive"));
            }
        }
        if self.euler_terms < 2 {
            return Err(domain("InversionConfig: need at least two Euler terms"));
        }
        Ok(())
    }
}

/// A price with an optional numerical diagnostic (for instance a clamped
/// negative inversion result).
#[derive(Debug, Clone, PartialEq)]
pub struct OptionPrice<S: Real> {
    pub price: S,
    pub diagnostic: Option<String>,
}

impl<S: Real> OptionPrice<S> {
    fn clamped(raw: S) -> Self {
        if raw < S::zero() {
            let severity = if raw < lit(-1e-8) { "beyond tolerance" } else { "within tolerance" };
            return Self {
                price: S::zero(),
                diagnostic: Some(format!("negative inversion result {raw:e} clamped to 0 ({severity})")),
            };
        }
        Self { price: raw, diagnostic: None }
    }
}

/// Effective forward-measure mean reversion `b(s) + σ²(s) C(s, t)` on
/// `[0, t]`, as a Hermite curve on the Riccati grid of `c_expiry`.
pub fn forward_drift<S: Real>(params: &ExtendedCirParams<S>, c_expiry: &BondSolution<S>) -> Result<ParameterCurve<S>> {
    if let ParameterCurve::Constant(s) = params.sigma {
        if s == S::zero() {
            return Ok(params.b.clone());
        }
    }
    let grid = c_expiry.grid();
    let c = c_expiry.c_nodes();
    let c_dot = c_expiry.c_dot_nodes();
    let two = lit::<S>(2.0);
    let mut values = Vec::with_capacity(grid.len());
    let mut slopes = Vec::with_capacity(grid.len());
    for (k, &s) in grid.iter().enumerate() {
        let sig = params.sigma.value(s);
        values.push(params.b.value(s) + sig * sig * c[k]);
        slopes.push(params.b.derivative(s) + two * sig * params.sigma.derivative(s) * c[k] + sig * sig * c_dot[k]);
    }
    ParameterCurve::hermite(grid, values, slopes)
}

/// `∫₀^∞ e^{−pr} max(e^{A − C r} − K, 0) dr` in closed form.
pub fn payoff_laplace<S: Real>(p: Complex<S>, c_tt: S, a_tt: S, strike: S) -> Result<Complex<S>> {
    if !(c_tt > S::zero()) {
        return Err(domain(format!("payoff_laplace: C must be positive, got {c_tt}")));
    }
    let ea = a_tt.exp();
    if strike >= ea {
        return Ok(Complex::new(S::zero(), S::zero()));
    }
    let one = Complex::new(S::one(), S::zero());
    let pc = p + c_tt;
    if strike == S::zero() {
        return Ok(pc.inv() * ea);
    }
    let r_star = (a_tt - strike.ln()) / c_tt;
    let first = (one - (-(pc * r_star)).exp()) / pc * ea;
    let second = (one - (-(p * r_star)).exp()) / p * strike;
    Ok(first - second)
}

/// Ingredients shared by the transform pricers.
struct ForwardSetup<S: Real> {
    p0t: S,
    p0_big_t: S,
    c_tt: S,
    a_tt: S,
    law: RateLaw<S>,
}

fn forward_setup<S: Real>(params: &ExtendedCirParams<S>, spec: &OptionSpec<S>, steps_per_year: usize) -> Result<ForwardSetup<S>> {
    spec.check(params)?;
    let steps = |m: S| ((m.to_f64().unwrap_or(1.0) * steps_per_year as f64).ceil() as usize).max(10);
    let to_expiry = solve_riccati(params, spec.expiry, steps(spec.expiry))?;
    let to_maturity = solve_riccati(params, spec.bond_maturity, steps(spec.bond_maturity))?;
    let drift = forward_drift(params, &to_expiry)?;
    let law = RateLaw::with_drift(params, spec.expiry, drift)?;
    Ok(ForwardSetup {
        p0t: bond_price(&to_expiry, S::zero(), params.r0)?,
        p0_big_t: bond_price(&to_maturity, S::zero(), params.r0)?,
        c_tt: to_maturity.c(spec.expiry),
        a_tt: to_maturity.a(spec.expiry),
        law,
    })
}

fn head_panels<S: Real>(cfg: &InversionConfig, law: &RateLaw<S>, half_period: S) -> usize {
    let sigma0 = law.sigma_integral(S::zero()).unwrap_or(S::one());
    let trunc = cfg.truncation.map(lit::<S>).unwrap_or_else(|| lit::<S>(10.0) / sigma0);
    (trunc / half_period).ceil().to_usize().unwrap_or(1).clamp(1, 100_000)
}

fn converged<S: Real>(method: &'static str, est: S, prev: S, tol: f64) -> Result<S> {
    if !((est - prev).abs() <= lit(tol)) {
        return Err(Error::NotConverged {
            method,
            estimate: est.to_f64().unwrap_or(f64::NAN),
            previous: prev.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(est)
}

/// Call price by Bromwich inversion of the payoff transform against the
/// forward-measure law:
///
/// ```text
/// C(0) = P(0,t) · (1/2πi) ∫_{a−i∞}^{a+i∞} Ĉ(p) Eᵗ[e^{p r(t)}] dp
/// ```
///
/// The smooth part `e^{A}/(p + C) − K/p` of `Ĉ` is integrated by residues
/// (`e^{A} F̂ᵗ(C) − K`); the remainder `K C e^{−p r*}/(p(p + C))` is
/// integrated along `Re p = a` with Euler-accelerated panels.
pub fn price_call_laplace<S: Real>(params: &ExtendedCirParams<S>, spec: &OptionSpec<S>, cfg: &InversionConfig) -> Result<OptionPrice<S>> {
    cfg.validate()?;
    let setup = forward_setup(params, spec, cfg.riccati_steps_per_year)?;
    let ForwardSetup { p0t, c_tt, a_tt, ref law, .. } = setup;
    let k = spec.strike;
    if k >= a_tt.exp() {
        return Ok(OptionPrice { price: S::zero(), diagnostic: None });
    }
    let smooth = a_tt.exp() * law.mgf(Complex::new(-c_tt, S::zero())).re - k;
    if k == S::zero() {
        return Ok(OptionPrice::clamped(p0t * smooth));
    }
    let r_star = (a_tt - k.ln()) / c_tt;
    let sigma0 = law.sigma_integral(S::zero())?;
    let a = match cfg.abscissa {
        Some(a) => lit::<S>(a),
        None => (lit::<S>(2.0) * law.mean()).recip().min((lit::<S>(4.0) * sigma0).recip()),
    };
    if sigma0 > S::zero() && a >= (lit::<S>(2.0) * sigma0).recip() {
        return Err(domain(format!("abscissa {a} not below the singularity 1/(2Σ) = {}", (lit::<S>(2.0) * sigma0).recip())));
    }
    let rule = GaussLegendre::new(cfg.n_points);
    let half_period = S::PI() / r_star;
    let head = head_panels(cfg, law, half_period);
    let integrand = |y: S| {
        let p = Complex::new(a, y);
        let remainder = (-(p * r_star)).exp() * (k * c_tt) / (p * (p + c_tt));
        (remainder * law.mgf(p)).re / S::PI()
    };
    let (est, prev) = panel_euler(integrand, half_period, head, cfg.euler_terms, &rule);
    let tail = converged("laplace", est, prev, cfg.tolerance)?;
    Ok(OptionPrice::clamped(p0t * (smooth + tail)))
}

/// Gil-Pelaez: `P(X < x) = ½ − (1/π) ∫₀^∞ Im(e^{−iωx} φ(ω))/ω dω`.
fn gil_pelaez<S: Real, F: Fn(S) -> Complex<S>>(phi: F, x: S, head: usize, cfg: &InversionConfig, rule: &GaussLegendre) -> Result<S> {
    let integrand = |w: S| {
        if w == S::zero() {
            return S::zero();
        }
        (Complex::new(S::zero(), -w * x).exp() * phi(w)).im / (w * S::PI())
    };
    let (est, prev) = panel_euler(integrand, S::PI() / x, head, cfg.euler_terms, rule);
    Ok(lit::<S>(0.5) - converged("fourier", est, prev, cfg.tolerance)?)
}

/// Call price from the exercise region `r(t) < r*`:
/// `P(0,t)·(e^{A} E^t[e^{−C r} 1{r < r*}] − K Q^t(r < r*))`, both terms by
/// Gil-Pelaez inversion (the first under the measure tilted by `e^{−C r}`).
pub fn price_call_fourier<S: Real>(params: &ExtendedCirParams<S>, spec: &OptionSpec<S>, cfg: &InversionConfig) -> Result<OptionPrice<S>> {
    cfg.validate()?;
    let setup = forward_setup(params, spec, cfg.riccati_steps_per_year)?;
    let ForwardSetup { p0t, c_tt, a_tt, ref law, .. } = setup;
    let k = spec.strike;
    if k >= a_tt.exp() {
        return Ok(OptionPrice { price: S::zero(), diagnostic: None });
    }
    let tilt = law.mgf(Complex::new(-c_tt, S::zero()));
    if k == S::zero() {
        return Ok(OptionPrice::clamped(p0t * a_tt.exp() * tilt.re));
    }
    let r_star = (a_tt - k.ln()) / c_tt;
    let rule = GaussLegendre::new(cfg.n_points);
    let head = head_panels(cfg, law, S::PI() / r_star);
    let q = gil_pelaez(|w| law.charfn_rate(w), r_star, head, cfg, &rule)?;
    let q_tilted = gil_pelaez(|w| law.mgf(Complex::new(-c_tt, w)) / tilt, r_star, head, cfg, &rule)?;
    Ok(OptionPrice::clamped(p0t * (a_tt.exp() * tilt.re * q_tilted - k * q)))
}

/// `P(0, T)` recovered through the forward measure, `P(0,t)·e^{A(t,T)}·F̂ᵗ(C(t,T))`.
pub fn forward_bond_identity<S: Real>(params: &ExtendedCirParams<S>, spec: &OptionSpec<S>) -> Result<(S, S)> {
    let setup = forward_setup(params, spec, STEPS_PER_YEAR)?;
    let via_forward = setup.p0t * setup.a_tt.exp() * setup.law.mgf(Complex::new(-setup.c_tt, S::zero())).re;
    Ok((via_forward, setup.p0_big_t))
}

/// Classic constant-coefficient CIR bond call through two noncentral
/// chi-squared CDFs.
#[allow(clippy::too_many_arguments)]
pub fn price_call_constant_analytic<S: Real>(b: S, sigma: S, theta: S, r0: S, t: S, big_t: S, strike: S) -> Result<S> {
    if !(sigma > S::zero()) || !(t > S::zero()) || !(big_t > t) {
        return Err(domain("price_call_constant_analytic: need sigma > 0 and 0 < t < T"));
    }
    let (c_tt, a_tt) = constant_affine_coefficients(b, sigma, theta, big_t - t);
    let (c0t, a0t) = constant_affine_coefficients(b, sigma, theta, t);
    let (c0_big_t, a0_big_t) = constant_affine_coefficients(b, sigma, theta, big_t);
    let p0t = (-r0 * c0t + a0t).exp();
    let p0_big_t = (-r0 * c0_big_t + a0_big_t).exp();
    if strike >= a_tt.exp() {
        return Ok(S::zero());
    }
    if strike == S::zero() {
        return Ok(p0_big_t);
    }
    let r_star = (a_tt - strike.ln()) / c_tt;
    let two = lit::<S>(2.0);
    let s2 = sigma * sigma;
    let gamma = (b * b + two * s2).sqrt();
    let rho = two * gamma / (s2 * (gamma * t).exp_m1());
    let psi = (b + gamma) / s2;
    let dof = lit::<S>(4.0) * theta / s2;
    let growth = r0 * (gamma * t).exp();
    let cdf = |k: S| -> Result<S> {
        let nc = two * rho * rho * growth / k;
        Ok(SncChi2::new(dof, nc, S::one())?.cdf(two * r_star * k))
    };
    Ok(p0_big_t * cdf(rho + psi + c_tt)? - strike * p0t * cdf(rho + psi)?)
}

/// Strike grid priced in parallel with [`price_call_laplace`].
pub fn price_strikes_laplace(
    params: &ExtendedCirParams<f64>,
    expiry: f64,
    maturity: f64,
    strikes: &[f64],
    cfg: &InversionConfig,
) -> Result<Vec<OptionPrice<f64>>> {
    use rayon::prelude::*;
    strikes
        .par_iter()
        .map(|&k| price_call_laplace(params, &OptionSpec::new(expiry, maturity, k)?, cfg))
        .collect()
}
