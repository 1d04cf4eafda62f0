//! Scalar abstraction.
//!
//! Every numerical routine in the crate is written against [`Real`] so the
//! same code runs in `f64` (the default, required for the tight oracle
//! tolerances) and `f32` (useful for large Monte Carlo ensembles). Special
//! functions and random variates are routed through the trait so that the
//! per-type implementation can reuse mature `f64` kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};

/// Floating point scalar used throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + std::fmt::LowerExp
    + Sum
    + Send
    + Sync
    + 'static
{
    /// `ln Γ(x)` for `x > 0`.
    fn lgamma(self) -> Self;

    /// Regularized lower incomplete gamma `P(a, x)`.
    fn gamma_p(a: Self, x: Self) -> Self;

    fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform draw on `[0, 1)`.
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Gamma variate with the given shape and scale (both positive).
    fn sample_gamma<R: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut R) -> Self;

    /// Poisson count with the given mean; a zero mean yields zero.
    fn sample_poisson<R: Rng + ?Sized>(mean: Self, rng: &mut R) -> u64;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn lgamma(self) -> Self {
                statrs::function::gamma::ln_gamma(self as f64) as $t
            }

            fn gamma_p(a: Self, x: Self) -> Self {
                if x <= 0.0 {
                    return 0.0;
                }
                if x.is_infinite() {
                    return 1.0;
                }
                statrs::function::gamma::gamma_lr(a as f64, x as f64) as $t
            }

            #[inline]
            fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }

            #[inline]
            fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.random::<$t>()
            }

            fn sample_gamma<R: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut R) -> Self {
                Gamma::new(shape, scale)
                    .expect("gamma parameters must be positive")
                    .sample(rng)
            }

            fn sample_poisson<R: Rng + ?Sized>(mean: Self, rng: &mut R) -> u64 {
                if mean <= 0.0 {
                    return 0;
                }
                let draw: $t = Poisson::new(mean)
                    .expect("poisson mean must be finite")
                    .sample(rng);
                draw as u64
            }
        }
    };
}

impl_real!(f64);
impl_real!(f32);

/// Lossless-enough literal conversion, `lit::<S>(0.5)`.
#[inline]
pub fn lit<S: Real>(x: f64) -> S {
    S::from_f64(x).expect("literal representable in scalar type")
}

#[inline]
pub fn from_usize<S: Real>(n: usize) -> S {
    S::from_usize(n).expect("count representable in scalar type")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gamma_p_limits() {
        assert_eq!(f64::gamma_p(1.5, 0.0), 0.0);
        assert_eq!(f64::gamma_p(1.5, f64::INFINITY), 1.0);
        // P(1, x) = 1 - e^{-x}
        assert!((f64::gamma_p(1.0, 2.0) - (1.0 - (-2.0f64).exp())).abs() < 1e-14);
        assert!((f32::gamma_p(1.0, 2.0) - (1.0 - (-2.0f32).exp())).abs() < 1e-6);
    }

    #[test]
    fn ln_gamma_matches_factorial() {
        assert!((Real::lgamma(5.0f64) - 24f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn poisson_zero_mean_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(f64::sample_poisson(0.0, &mut rng), 0);
    }
}
