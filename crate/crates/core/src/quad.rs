//! Quadrature and series acceleration shared by the transform code.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex;

use crate::real::{from_usize, lit, Real};

/// Values that can be integrated: real scalars and complex numbers.
pub trait Integrand<S: Real>: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<S, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> S;
}

impl<S: Real> Integrand<S> for S {
    #[inline]
    fn zero() -> Self {
        S::zero()
    }
    #[inline]
    fn magnitude(self) -> S {
        self.abs()
    }
}

impl<S: Real> Integrand<S> for Complex<S> {
    #[inline]
    fn zero() -> Self {
        Complex::new(S::zero(), S::zero())
    }
    #[inline]
    fn magnitude(self) -> S {
        self.norm()
    }
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = nf * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule on `[a, b]`.
    #[inline]
    pub fn integrate<S, V, F>(&self, a: S, b: S, f: &mut F) -> V
    where
        S: Real,
        V: Integrand<S>,
        F: FnMut(S) -> V,
    {
        let half = (b - a) * lit(0.5);
        let mid = (a + b) * lit(0.5);
        let mut acc = V::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * lit(*x)) * lit(*w);
        }
        acc * half
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Shared 10-point rule used by the adaptive integrator.
pub fn gl10() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(10))
}

/// Shared 20-point rule for fixed high-order panels.
pub fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

const MAX_DEPTH: usize = 40;
/// Interval budget per call; keeps pathological integrands from stalling.
const MAX_INTERVALS: usize = 1 << 12;

/// Adaptive Gauss-Legendre: bisects until the 10-point estimate on an interval
/// agrees with the sum over its halves to within its share of `tol`
/// (absolute). Requests below the roundoff floor `~eps·∫|f|` are raised to it.
pub fn adaptive<S, V, F>(mut f: F, a: S, b: S, tol: S) -> V
where
    S: Real,
    V: Integrand<S>,
    F: FnMut(S) -> V,
{
    if a == b {
        return V::zero();
    }
    let rule = gl10();
    let mut abs_mass = S::zero();
    let whole = rule.integrate(a, b, &mut |x| {
        let v = f(x);
        abs_mass = abs_mass + v.magnitude();
        v
    });
    let abs_mass = abs_mass * (b - a).abs() / from_usize(rule.len());
    let floor = abs_mass * S::epsilon() * lit(64.0);
    let mut budget = MAX_INTERVALS;
    recurse(rule, &mut f, a, b, whole, tol.max(floor).max(S::min_positive_value()), 0, &mut budget)
}

#[allow(clippy::too_many_arguments)]
fn recurse<S, V, F>(rule: &GaussLegendre, f: &mut F, a: S, b: S, whole: V, tol: S, depth: usize, budget: &mut usize) -> V
where
    S: Real,
    V: Integrand<S>,
    F: FnMut(S) -> V,
{
    let mid = (a + b) * lit(0.5);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    let halves = left + right;
    let err = (halves - whole).magnitude();
    *budget = budget.saturating_sub(1);
    if err <= tol || depth >= MAX_DEPTH || *budget == 0 || mid == a || mid == b {
        return halves;
    }
    let half_tol = tol * lit(0.5);
    recurse(rule, f, a, mid, left, half_tol, depth + 1, budget) + recurse(rule, f, mid, b, right, half_tol, depth + 1, budget)
}

/// Adaptive integration over `[a, b]` after splitting at the given interior
/// breakpoints (kinks of the integrand).
pub fn adaptive_with_breaks<S, V, F>(mut f: F, a: S, b: S, breaks: &[S], tol: S) -> V
where
    S: Real,
    V: Integrand<S>,
    F: FnMut(S) -> V,
{
    let mut acc = V::zero();
    let mut lo = a;
    let inner: Vec<S> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    let pieces = from_usize::<S>(inner.len() + 1);
    for &x in inner.iter().chain(std::iter::once(&b)) {
        acc = acc + adaptive(&mut f, lo, x, tol / pieces);
        lo = x;
    }
    acc
}

/// Composite Simpson weights on a uniform grid of `n + 1` points; an odd
/// interval count closes with the 3/8 rule on the last three intervals.
pub fn simpson_weights<S: Real>(n: usize, h: S) -> Vec<S> {
    assert!(n >= 2, "simpson needs at least two intervals");
    let mut w = vec![S::zero(); n + 1];
    let third = h / lit(3.0);
    let simpson_end = if n % 2 == 0 { n } else { n - 3 };
    let mut i = 0;
    while i < simpson_end {
        w[i] = w[i] + third;
        w[i + 1] = w[i + 1] + third * lit(4.0);
        w[i + 2] = w[i + 2] + third;
        i += 2;
    }
    if n % 2 == 1 {
        let e = h * lit(3.0 / 8.0);
        w[n - 3] = w[n - 3] + e;
        w[n - 2] = w[n - 2] + e * lit(3.0);
        w[n - 1] = w[n - 1] + e * lit(3.0);
        w[n] = w[n] + e;
    }
    w
}

/// Euler (binomial) averaging of partial sums `S_start ..= S_{start+order}`
/// of an eventually alternating series.
pub fn euler_average<S, V>(partial_sums: &[V], start: usize, order: usize) -> V
where
    S: Real,
    V: Integrand<S>,
{
    assert!(start + order < partial_sums.len());
    let mut acc = V::zero();
    let mut binom = S::one();
    let norm = S::from_f64(2f64.powi(-(order as i32))).unwrap();
    for k in 0..=order {
        acc = acc + partial_sums[start + k] * (binom * norm);
        binom = binom * from_usize::<S>(order - k) / from_usize::<S>(k + 1);
    }
    acc
}

/// `∫₀^∞ f` for an integrand that oscillates with half-period `h` in its
/// tail: panels `[kh, (k+1)h]` are integrated with `rule`, the first `head`
/// partial sums taken as is and the tail accelerated by Euler averaging of
/// order `order`.
///
/// Returns the estimate started at panel `head + 1` and, for convergence
/// diagnostics, the one started at `head`.
pub fn panel_euler<S, V, F>(mut f: F, h: S, head: usize, order: usize, rule: &GaussLegendre) -> (V, V)
where
    S: Real,
    V: Integrand<S>,
    F: FnMut(S) -> V,
{
    let head = head.max(1);
    let n_panels = head + order + 2;
    let mut sums = Vec::with_capacity(n_panels);
    let mut acc = V::zero();
    for k in 0..n_panels {
        let lo = h * from_usize(k);
        acc = acc + rule.integrate(lo, lo + h, &mut f);
        sums.push(acc);
    }
    (euler_average(&sums, head, order), euler_average(&sums, head - 1, order))
}
