//! Sample statistics used by the Monte Carlo oracles.

use num_complex::Complex;

use crate::real::{from_usize, lit, Real};

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<S: Real> {
    pub value: S,
    pub se: S,
}

impl<S: Real> Estimate<S> {
    /// Sample mean and standard error of the mean.
    pub fn from_samples(xs: &[S]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self { value: S::nan(), se: S::nan() };
        }
        let nf = from_usize::<S>(n);
        let mean = xs.iter().fold(S::zero(), |a, &x| a + x) / nf;
        if n == 1 {
            return Self { value: mean, se: S::zero() };
        }
        let ss = xs.iter().fold(S::zero(), |a, &x| a + (x - mean) * (x - mean));
        Self { value: mean, se: (ss / (nf - S::one()) / nf).sqrt() }
    }

    /// `|self − target| ≤ k·se`.
    pub fn within(&self, target: S, k: S) -> bool {
        (self.value - target).abs() <= k * self.se
    }
}

/// Complex-valued estimate; `se` is `sqrt((Var Re + Var Im)/n)`, the
/// standard error of the modulus of the error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEstimate<S: Real> {
    pub value: Complex<S>,
    pub se: S,
}

impl<S: Real> ComplexEstimate<S> {
    pub fn from_samples(zs: &[Complex<S>]) -> Self {
        let n = zs.len();
        if n == 0 {
            return Self { value: Complex::new(S::nan(), S::nan()), se: S::nan() };
        }
        let nf = from_usize::<S>(n);
        let mean = zs.iter().fold(Complex::new(S::zero(), S::zero()), |a, &z| a + z) / nf;
        if n == 1 {
            return Self { value: mean, se: S::zero() };
        }
        let ss = zs.iter().fold(S::zero(), |a, &z| a + (z - mean).norm_sqr());
        Self { value: mean, se: (ss / (nf - S::one()) / nf).sqrt() }
    }

    pub fn within(&self, target: Complex<S>, k: S) -> bool {
        (self.value - target).norm() <= k * self.se
    }
}

/// Empirical characteristic function `mean(e^{iωx})` with its standard error.
pub fn empirical_cf<S: Real>(samples: &[S], omega: S) -> ComplexEstimate<S> {
    let n = samples.len();
    let (mut sc, mut ss, mut scc, mut sss) = (S::zero(), S::zero(), S::zero(), S::zero());
    for &x in samples {
        let (s, c) = (omega * x).sin_cos();
        sc = sc + c;
        ss = ss + s;
        scc = scc + c * c;
        sss = sss + s * s;
    }
    let nf = from_usize::<S>(n);
    let (mc, ms) = (sc / nf, ss / nf);
    let var = if n > 1 {
        ((scc - nf * mc * mc) + (sss - nf * ms * ms)) / (nf - S::one())
    } else {
        S::zero()
    };
    ComplexEstimate { value: Complex::new(mc, ms), se: (var.max(S::zero()) / nf).sqrt() }
}

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic<S: Real, F: Fn(S) -> S>(samples: &[S], cdf: F) -> S {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("NaN sample"));
    let nf = from_usize::<S>(xs.len());
    let mut d = S::zero();
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let lo = from_usize::<S>(i) / nf;
        let hi = from_usize::<S>(i + 1) / nf;
        d = d.max(f - lo).max(hi - f);
    }
    d
}

/// Asymptotic critical value of the KS statistic at significance `alpha`:
/// `sqrt(−ln(α/2)/2)/√n`.
pub fn ks_critical<S: Real>(n: usize, alpha: S) -> S {
    (-(alpha / lit(2.0)).ln() / lit(2.0)).sqrt() / from_usize::<S>(n).sqrt()
}

/// Pearson sample correlation.
pub fn correlation<S: Real>(x: &[S], y: &[S]) -> S {
    let nf = from_usize::<S>(x.len());
    let mx = x.iter().fold(S::zero(), |a, &v| a + v) / nf;
    let my = y.iter().fold(S::zero(), |a, &v| a + v) / nf;
    let (mut sxy, mut sxx, mut syy) = (S::zero(), S::zero(), S::zero());
    for (&a, &b) in x.iter().zip(y) {
        sxy = sxy + (a - mx) * (b - my);
        sxx = sxx + (a - mx) * (a - mx);
        syy = syy + (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}
