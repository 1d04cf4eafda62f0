//! Scaled noncentral chi-squared law `χ²(λ₁, λ₂, c)` with real degrees of
//! freedom `λ₁ > 0`, noncentrality `λ₂ ≥ 0` and scale `c > 0`: the law of
//! `c²·Y` where `Y` has characteristic function
//!
//! ```text
//! Φ_Y(ω) = exp(iλ₂ω / (1 − 2iω)) / (1 − 2iω)^{λ₁/2}
//! ```
//!
//! The density and CDF are Poisson mixtures of central chi-squared laws.

use num_complex::Complex;
use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::real::{from_usize, lit, Real};

/// Poisson tail mass below which the mixture series is truncated.
pub const SERIES_TAIL: f64 = 1e-14;
/// Hard cap on the number of mixture terms.
pub const SERIES_MAX_TERMS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SncChi2<S: Real> {
    lambda1: S,
    lambda2: S,
    c: S,
}

impl<S: Real> SncChi2<S> {
    pub fn new(lambda1: S, lambda2: S, c: S) -> Result<Self> {
        if !(lambda1 > S::zero()) || !lambda1.is_finite() {
            return Err(Error::InvalidParams(format!("lambda1 must be positive, got {lambda1}")));
        }
        if !(lambda2 >= S::zero()) || !lambda2.is_finite() {
            return Err(Error::InvalidParams(format!("lambda2 must be nonnegative, got {lambda2}")));
        }
        if !(c > S::zero()) || !c.is_finite() {
            return Err(Error::InvalidParams(format!("scale c must be positive, got {c}")));
        }
        Ok(Self { lambda1, lambda2, c })
    }

    pub fn lambda1(&self) -> S {
        self.lambda1
    }

    pub fn lambda2(&self) -> S {
        self.lambda2
    }

    pub fn scale(&self) -> S {
        self.c
    }

    pub fn mean(&self) -> S {
        self.c * self.c * (self.lambda1 + self.lambda2)
    }

    pub fn variance(&self) -> S {
        let c2 = self.c * self.c;
        lit::<S>(2.0) * c2 * c2 * (self.lambda1 + lit::<S>(2.0) * self.lambda2)
    }

    /// Poisson(λ₂/2) weights summed outward from the mode, truncated once the
    /// neglected mass is below [`SERIES_TAIL`] or [`SERIES_MAX_TERMS`] terms
    /// are collected.
    fn mixture_weights(&self) -> Vec<(usize, S)> {
        let mean = self.lambda2 * lit(0.5);
        if mean == S::zero() {
            return vec![(0, S::one())];
        }
        let tail = lit::<S>(SERIES_TAIL);
        let mode = mean.floor().to_usize().unwrap_or(0);
        let mf = from_usize::<S>(mode);
        let w_mode = (mf * mean.ln() - mean - (mf + S::one()).lgamma()).exp();
        let mut out = vec![(mode, w_mode)];
        let mut total = w_mode;
        // Downward: the remaining lower tail is bounded by w·m/(m − i).
        let mut w = w_mode;
        let mut i = mode;
        while i > 0 && out.len() < SERIES_MAX_TERMS {
            w = w * from_usize::<S>(i) / mean;
            i -= 1;
            out.push((i, w));
            total = total + w;
            let ratio = from_usize::<S>(i) / mean;
            if w / (S::one() - ratio) < tail * lit(1e-2) {
                break;
            }
        }
        let mut w = w_mode;
        let mut i = mode;
        while S::one() - total >= tail && out.len() < SERIES_MAX_TERMS {
            i += 1;
            w = w * mean / from_usize::<S>(i);
            out.push((i, w));
            total = total + w;
            if w == S::zero() {
                break;
            }
        }
        out
    }

    pub fn density(&self, x: S) -> S {
        if x < S::zero() {
            return S::zero();
        }
        let c2 = self.c * self.c;
        let y = x / c2;
        self.mixture_weights()
            .into_iter()
            .map(|(i, w)| {
                if w == S::zero() {
                    S::zero()
                } else {
                    w * central_density(self.lambda1 + lit::<S>(2.0) * from_usize::<S>(i), y)
                }
            })
            .sum::<S>()
            / c2
    }

    pub fn cdf(&self, x: S) -> S {
        if x <= S::zero() {
            return S::zero();
        }
        let half_y = x / (lit::<S>(2.0) * self.c * self.c);
        let total: S = self
            .mixture_weights()
            .into_iter()
            .map(|(i, w)| w * S::gamma_p(self.lambda1 * lit(0.5) + from_usize::<S>(i), half_y))
            .sum();
        total.min(S::one())
    }

    /// `E[e^{iωX}]`, principal branch for the fractional power.
    pub fn charfn(&self, omega: S) -> Complex<S> {
        let w = omega * self.c * self.c;
        let denom = Complex::new(S::one(), -lit::<S>(2.0) * w);
        let expo = Complex::new(S::zero(), self.lambda2 * w) / denom - denom.ln() * (self.lambda1 * lit(0.5));
        expo.exp()
    }

    /// `E[e^{−pX}]` for `Re(p) > −1/(2c²)`.
    pub fn laplace(&self, p: Complex<S>) -> Complex<S> {
        let c2 = self.c * self.c;
        let denom = Complex::new(S::one(), S::zero()) + p * (lit::<S>(2.0) * c2);
        (-(p * (self.lambda2 * c2)) / denom - denom.ln() * (self.lambda1 * lit(0.5))).exp()
    }

    /// The law of each of `n` i.i.d. summands: `χ²(λ₁/n, λ₂/n, c)`.
    pub fn divide(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("divide: n must be at least 1"));
        }
        if n == 1 {
            return Ok(*self);
        }
        let nf = from_usize::<S>(n);
        Self::new(self.lambda1 / nf, self.lambda2 / nf, self.c)
    }

    /// One draw: `N ~ Poisson(λ₂/2)`, `X = c²·Gamma(λ₁/2 + N, 2)`.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> S {
        let n = S::sample_poisson(self.lambda2 * lit(0.5), rng);
        let shape = self.lambda1 * lit(0.5) + S::from_u64(n).unwrap();
        self.c * self.c * S::sample_gamma(shape, lit(2.0), rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<S> {
        (0..count).map(|_| self.sample_one(rng)).collect()
    }
}

/// Central chi-squared density with `k` degrees of freedom.
fn central_density<S: Real>(k: S, y: S) -> S {
    let half_k = k * lit(0.5);
    if y == S::zero() {
        let two = lit::<S>(2.0);
        return if k < two {
            S::infinity()
        } else if k == two {
            lit(0.5)
        } else {
            S::zero()
        };
    }
    ((half_k - S::one()) * y.ln() - y * lit(0.5) - half_k * lit::<S>(2.0).ln() - half_k.lgamma()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(l1: f64, l2: f64, c: f64) -> SncChi2<f64> {
        SncChi2::new(l1, l2, c).unwrap()
    }

    #[test]
    fn central_two_dof_closed_forms() {
        let x = d(2.0, 0.0, 1.0);
        assert!((x.density(0.0) - 0.5).abs() < 1e-15);
        assert!((x.density(2.0) - (-1.0f64).exp() / 2.0).abs() < 1e-14);
        assert!((x.cdf(2.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-14);
        assert_eq!(x.cdf(0.0), 0.0);
        assert_eq!(x.density(-1.0), 0.0);
    }

    #[test]
    fn matches_independent_reference_values() {
        // scipy.stats.ncx2 (see tests/oracles/reference_values.py)
        assert!((d(2.5, 1.3, 0.8).density(1.0) - 0.2817166481581398).abs() < 1e-12);
        assert!((d(3.7, 2.1, 1.1).cdf(5.0) - 0.407015489508599).abs() < 1e-12);
        assert!((d(0.3, 0.5, 1.0).density(0.2) - 0.46857676592171893).abs() < 1e-12);
        assert!((d(0.3, 0.5, 1.0).cdf(0.2) - 0.5956615570777242).abs() < 1e-12);
        assert!((d(7.0, 3.0, 0.5).density(2.0) - 0.34518223398634496).abs() < 1e-12);
        assert!((d(7.0, 3.0, 0.5).cdf(2.0) - 0.40054480763059686).abs() < 1e-12);
        assert!((d(2.5, 1.3, 0.8).cdf(3.0) - 0.6992324195753659).abs() < 1e-12);
    }

    #[test]
    fn charfn_examples() {
        let x = d(2.5, 1.3, 0.8);
        assert_eq!(x.charfn(0.0), Complex::new(1.0, 0.0));
        // mpmath quadrature of e^{iωx} g(x)
        let want = Complex::new(0.170052646774872371749881847095, 0.489282327424262570359358789983);
        assert!((x.charfn(0.7) - want).norm() < 1e-12);
        let chi1 = d(1.0, 0.0, 1.0);
        let want = Complex::new(1.0, -1.0).powf(-0.5);
        assert!((chi1.charfn(0.5) - want).norm() < 1e-15);
    }

    #[test]
    fn charfn_matches_density_quadrature() {
        let x = d(2.5, 1.3, 0.8);
        let w = 0.7;
        let cf: Complex<f64> = quad::adaptive(|t: f64| Complex::new(0.0, w * t).exp() * x.density(t), 0.0, 60.0, 1e-12);
        assert!((cf - x.charfn(w)).norm() < 1e-7);
    }

    #[test]
    fn laplace_is_charfn_continued() {
        let x = d(2.5, 1.3, 0.8);
        let p = Complex::new(0.0, -0.7); // e^{-pX} = e^{i 0.7 X}
        assert!((x.laplace(p) - x.charfn(0.7)).norm() < 1e-14);
    }

    #[test]
    fn divide_examples() {
        let x = d(4.0, 2.0, 1.0);
        assert_eq!(x.divide(2).unwrap(), d(2.0, 1.0, 1.0));
        assert_eq!(x.divide(1).unwrap(), x);
        assert!(x.divide(0).is_err());
        let y = d(3.0, 0.9, 0.5);
        let third = y.divide(3).unwrap();
        assert!((third.lambda1() - 1.0).abs() < 1e-15 && (third.lambda2() - 0.3).abs() < 1e-15);
        for w in [-3.0, 0.4, 2.0] {
            assert!((third.charfn(w).powu(3) - y.charfn(w)).norm() < 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_centred() {
        let x = d(2.5, 1.3, 0.8);
        let a = x.sample(&mut ChaCha8Rng::seed_from_u64(9), 1000);
        let b = x.sample(&mut ChaCha8Rng::seed_from_u64(9), 1000);
        assert_eq!(a, b);
        let n = 200_000;
        let s = x.sample(&mut ChaCha8Rng::seed_from_u64(10), n);
        let mean = s.iter().sum::<f64>() / n as f64;
        let se = (x.variance() / n as f64).sqrt();
        assert!((mean - 2.432).abs() < 3.0 * se, "mean {mean}");
        assert!(s.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn small_dof_density_blows_up_at_origin() {
        assert!(d(1.0, 0.5, 1.0).density(0.0).is_infinite());
        assert_eq!(d(3.0, 0.5, 1.0).density(0.0), 0.0);
    }

    #[test]
    fn large_noncentrality_sums_around_the_mode() {
        // The bulk of Poisson(2500) sits far beyond any fixed number of leading terms.
        let x = d(2.0, 5000.0, 1.0);
        assert!((x.cdf(x.mean()) - 0.5).abs() < 0.02);
        let mass: f64 = quad::adaptive(|t: f64| x.density(t), 4000.0, 6200.0, 1e-10);
        assert!((mass - 1.0).abs() < 1e-8);
    }

    #[test]
    fn f32_variant() {
        let x = SncChi2::<f32>::new(2.0, 0.0, 1.0).unwrap();
        assert!((x.cdf(2.0) - (1.0 - (-1.0f32).exp())).abs() < 1e-6);
    }
}
