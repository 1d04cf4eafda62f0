//! Zero-coupon bonds `P(t, T) = exp(−r C(t, T) + A(t, T))` with
//!
//! ```text
//! ∂ₜC = b(t) C + ½σ²(t) C² − 1,   C(T, T) = 0
//! A(t, T) = −∫ₜᵀ θ(u) C(u, T) du
//! ```

use crate::error::{domain, Error, Result};
use crate::real::{from_usize, lit, Real};
use crate::termstructure::ExtendedCirParams;

/// `|C|` above which the Riccati solution is declared divergent.
pub const BLOW_UP_GUARD: f64 = 1e6;

/// Default Riccati steps per unit of time.
pub const STEPS_PER_YEAR: usize = 1000;

/// `C(·, T)` and `A(·, T)` on a uniform grid of `[0, T]` with cubic Hermite
/// dense output.
#[derive(Debug, Clone)]
pub struct BondSolution<S: Real> {
    maturity: S,
    step: S,
    c: Vec<S>,
    c_dot: Vec<S>,
    a: Vec<S>,
    a_dot: Vec<S>,
}

/// Backward RK4 for `C`, Simpson (with Hermite midpoints) for `A`.
pub fn solve_riccati<S: Real>(params: &ExtendedCirParams<S>, maturity: S, n_steps: usize) -> Result<BondSolution<S>> {
    if !(maturity > S::zero()) {
        return Err(domain(format!("maturity must be positive, got {maturity}")));
    }
    if maturity > params.horizon * (S::one() + S::epsilon() * lit(16.0)) {
        return Err(domain(format!("maturity {maturity} beyond horizon {}", params.horizon)));
    }
    if n_steps < 10 {
        return Err(domain("solve_riccati: n_steps must be at least 10"));
    }
    let h = maturity / from_usize(n_steps);
    let half = lit::<S>(0.5);
    let rhs = |t: S, c: S| {
        let s = params.sigma.value(t);
        params.b.value(t) * c + half * s * s * c * c - S::one()
    };
    let mut c = vec![S::zero(); n_steps + 1];
    for k in (0..n_steps).rev() {
        let t1 = h * from_usize(k + 1);
        let y = c[k + 1];
        let k1 = rhs(t1, y);
        let k2 = rhs(t1 - h * half, y - h * half * k1);
        let k3 = rhs(t1 - h * half, y - h * half * k2);
        let k4 = rhs(t1 - h, y - h * k3);
        let next = y - h / lit(6.0) * (k1 + lit::<S>(2.0) * (k2 + k3) + k4);
        if !next.is_finite() || next.abs() > lit(BLOW_UP_GUARD) {
            return Err(Error::SolverFailure {
                time: (h * from_usize(k)).to_f64().unwrap_or(f64::NAN),
                magnitude: next.abs().to_f64().unwrap_or(f64::INFINITY),
            });
        }
        c[k] = next;
    }
    let times: Vec<S> = (0..=n_steps).map(|k| h * from_usize(k)).collect();
    let c_dot: Vec<S> = times.iter().zip(&c).map(|(&t, &y)| rhs(t, y)).collect();
    let a_dot: Vec<S> = times.iter().zip(&c).map(|(&t, &y)| params.theta.value(t) * y).collect();

    let mut a = vec![S::zero(); n_steps + 1];
    for k in (0..n_steps).rev() {
        let mid = times[k] + h * half;
        let c_mid = hermite_mid(c[k], c[k + 1], c_dot[k], c_dot[k + 1], h);
        let g_mid = params.theta.value(mid) * c_mid;
        let piece = h / lit(6.0) * (a_dot[k] + lit::<S>(4.0) * g_mid + a_dot[k + 1]);
        a[k] = a[k + 1] - piece;
    }
    Ok(BondSolution { maturity, step: h, c, c_dot, a, a_dot })
}

/// Riccati solution with the default resolution.
pub fn solve_riccati_default<S: Real>(params: &ExtendedCirParams<S>, maturity: S) -> Result<BondSolution<S>> {
    let steps = (maturity.to_f64().unwrap_or(1.0) * STEPS_PER_YEAR as f64).ceil().max(10.0) as usize;
    solve_riccati(params, maturity, steps)
}

fn hermite_mid<S: Real>(y0: S, y1: S, d0: S, d1: S, h: S) -> S {
    (y0 + y1) * lit(0.5) + (d0 - d1) * h * lit(0.125)
}

impl<S: Real> BondSolution<S> {
    pub fn maturity(&self) -> S {
        self.maturity
    }

    /// Solver grid `0, h, …, T`.
    pub fn grid(&self) -> Vec<S> {
        (0..self.c.len()).map(|k| self.step * from_usize(k)).collect()
    }

    fn locate(&self, t: S) -> (usize, S) {
        let n = self.c.len() - 1;
        let pos = (t / self.step).max(S::zero());
        let k = pos.floor().to_usize().unwrap_or(n).min(n - 1);
        (k, t - self.step * from_usize(k))
    }

    fn hermite(&self, y: &[S], dy: &[S], t: S) -> S {
        let (k, u) = self.locate(t);
        let h = self.step;
        let s = u / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let two = lit::<S>(2.0);
        let three = lit::<S>(3.0);
        let h00 = two * s3 - three * s2 + S::one();
        let h10 = s3 - two * s2 + s;
        let h01 = three * s2 - two * s3;
        let h11 = s3 - s2;
        h00 * y[k] + h10 * h * dy[k] + h01 * y[k + 1] + h11 * h * dy[k + 1]
    }

    /// `C(t, T)`; exactly zero at `t = T`.
    pub fn c(&self, t: S) -> S {
        if t >= self.maturity {
            return S::zero();
        }
        self.hermite(&self.c, &self.c_dot, t)
    }

    /// `∂ₜC(t, T)` from the Riccati right-hand side at the nearest node
    /// interpolated linearly.
    pub fn c_derivative(&self, t: S) -> S {
        let (k, u) = self.locate(t.min(self.maturity));
        let w = u / self.step;
        self.c_dot[k] * (S::one() - w) + self.c_dot[k + 1] * w
    }

    /// `A(t, T)`; exactly zero at `t = T`.
    pub fn a(&self, t: S) -> S {
        if t >= self.maturity {
            return S::zero();
        }
        self.hermite(&self.a, &self.a_dot, t)
    }

    pub fn c_nodes(&self) -> &[S] {
        &self.c
    }

    pub fn c_dot_nodes(&self) -> &[S] {
        &self.c_dot
    }
}

/// `P(t, T) = exp(−r C(t, T) + A(t, T))`.
pub fn bond_price<S: Real>(solution: &BondSolution<S>, t: S, r: S) -> Result<S> {
    if t > solution.maturity || !(t >= S::zero()) {
        return Err(domain(format!("bond_price: t={t} outside [0, {}]", solution.maturity)));
    }
    if t == solution.maturity {
        return Ok(S::one());
    }
    Ok((-r * solution.c(t) + solution.a(t)).exp())
}

/// Constant-coefficient `C(τ)` and `A(τ)`.
pub fn constant_affine_coefficients<S: Real>(b: S, sigma: S, theta: S, tau: S) -> (S, S) {
    if tau <= S::zero() {
        return (S::zero(), S::zero());
    }
    let two = lit::<S>(2.0);
    if sigma == S::zero() {
        // Linear ODE limit.
        if b == S::zero() {
            return (tau, -theta * tau * tau * lit(0.5));
        }
        let c = -(-b * tau).exp_m1() / b;
        return (c, -theta * (tau - c) / b);
    }
    let s2 = sigma * sigma;
    let gamma = (b * b + two * s2).sqrt();
    let em1 = (gamma * tau).exp_m1();
    let c = two * em1 / ((gamma + b) * em1 + two * gamma);
    let gm = two * s2 / (gamma + b); // γ − b without cancellation
    let delta = ((gamma + b) * (gm * tau * lit(0.5)).exp_m1() + gm * (-(gamma + b) * tau * lit(0.5)).exp_m1()) / (two * gamma);
    let a = -(two * theta / s2) * delta.ln_1p();
    (c, a)
}

/// Closed-form constant-coefficient CIR bond price.
pub fn bond_price_constant_analytic<S: Real>(b: S, sigma: S, theta: S, r: S, tau: S) -> S {
    let (c, a) = constant_affine_coefficients(b, sigma, theta, tau);
    (-r * c + a).exp()
}
