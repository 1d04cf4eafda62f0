//! Extended Cox-Ingersoll-Ross short-rate model with time-varying
//! coefficients.

pub mod bondpricing;
pub mod charfn;
pub mod error;
pub mod montecarlo;
pub mod optionpricer;
pub mod quad;
pub mod real;
pub mod sncchi2;
pub mod stats;
pub mod stochvol;
pub mod termstructure;

pub use bondpricing::{bond_price, bond_price_constant_analytic, solve_riccati, BondSolution};
pub use charfn::{density_from_cf, fokker_planck_residual, DensityConfig, DensityResult, RateLaw};
pub use error::{Error, Result};
pub use optionpricer::{
    price_call_constant_analytic, price_call_fourier, price_call_laplace, InversionConfig, OptionPrice, OptionSpec,
};
pub use montecarlo::{
    mc_bond_price, mc_option_price, simulate_cir, simulate_constructive, simulate_correlated_wv, simulate_forward_measure,
    simulate_stochvol_independent, ConstructiveConfig, Measure, PathSet, Scheme, SimConfig, StochVolPaths,
};
pub use real::Real;
pub use sncchi2::SncChi2;
pub use stats::{ComplexEstimate, Estimate};
pub use stochvol::{CorrelatedVolModel, IndependentVolModel, RateDrift, VolDynamics};
pub use termstructure::{
    dimension, integrate_b, validate_assumption1, CurveDoc, DimensionReport, ExtendedCirParams, ParameterCurve,
};

/// `f64` instantiations.
pub type Curve = ParameterCurve<f64>;
pub type Params = ExtendedCirParams<f64>;
pub type Snc = SncChi2<f64>;
pub type Law = RateLaw<f64>;
