//! Model files.
//!
//! ```json
//! {
//!   "model": {
//!     "b": {"const": 0.1},
//!     "sigma": {"knots": [0, 0.5, 1], "values": [0.2, 0.22, 0.21]},
//!     "theta": {"const": 0.02},
//!     "r0": 0.03,
//!     "horizon": 1.0
//!   },
//!   "stochvol": {
//!     "independent": {"dimension": {"const": 3}, "kappa": 1, "mean": 0.04, "xi": 0.5, "v0": 0.04, "cap": 1},
//!     "correlated": {"theta_w": {"const": 0.02}, "theta_v": {"const": 0.004}, "xi": 0.4, "w0": 0.02, "v0": 0.02, "cap": 1}
//!   }
//! }
//! ```

use std::path::Path;

use serde::Deserialize;
use xcir::stochvol::{CorrelatedVolModel, IndependentVolModel, RateDrift, VolDynamics};
use xcir::{validate_assumption1, CurveDoc, Error, Params, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    model: RateDoc,
    #[serde(default)]
    stochvol: Option<StochVolDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RateDoc {
    b: CurveDoc,
    sigma: CurveDoc,
    theta: CurveDoc,
    r0: f64,
    horizon: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StochVolDoc {
    #[serde(default)]
    independent: Option<IndependentDoc>,
    #[serde(default)]
    correlated: Option<CorrelatedDoc>,
}

/// Independent-volatility section; the rate level is `dimension` if given,
/// otherwise `theta`, otherwise the model's `theta`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndependentDoc {
    #[serde(default)]
    dimension: Option<CurveDoc>,
    #[serde(default)]
    theta: Option<CurveDoc>,
    kappa: f64,
    mean: f64,
    xi: f64,
    v0: f64,
    cap: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorrelatedDoc {
    theta_w: CurveDoc,
    theta_v: CurveDoc,
    xi: f64,
    w0: f64,
    v0: f64,
    cap: f64,
}

#[derive(Debug, Clone)]
pub struct ModelFile {
    pub params: Params,
    pub independent: Option<IndependentVolModel<f64>>,
    pub correlated: Option<CorrelatedVolModel<f64>>,
}

impl ModelFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses and validates; any dimension-curve violation is an error.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let m = &doc.model;
        let params = Params::new(m.b.to_curve()?, m.sigma.to_curve()?, m.theta.to_curve()?, m.r0, m.horizon)?;
        let report = validate_assumption1(&params, 1000)?;
        if let Some((t, what)) = report.violations.first() {
            return Err(Error::InvalidParams(format!("{what} at t={t}")));
        }
        let (mut independent, mut correlated) = (None, None);
        if let Some(sv) = &doc.stochvol {
            if let Some(ind) = &sv.independent {
                let drift = match (&ind.dimension, &ind.theta) {
                    (Some(d), _) => RateDrift::Dimension(d.to_curve()?),
                    (None, Some(th)) => RateDrift::Theta(th.to_curve()?),
                    (None, None) => RateDrift::Theta(params.theta.clone()),
                };
                let model = IndependentVolModel {
                    b: params.b.clone(),
                    drift,
                    r0: params.r0,
                    vol: VolDynamics { kappa: ind.kappa, mean: ind.mean, xi: ind.xi, v0: ind.v0, cap: ind.cap },
                    horizon: params.horizon,
                };
                model.validate()?;
                independent = Some(model);
            }
            if let Some(c) = &sv.correlated {
                let model = CorrelatedVolModel {
                    b: params.b.clone(),
                    theta_w: c.theta_w.to_curve()?,
                    theta_v: c.theta_v.to_curve()?,
                    xi: c.xi,
                    w0: c.w0,
                    v0: c.v0,
                    cap: c.cap,
                    horizon: params.horizon,
                };
                model.validate()?;
                correlated = Some(model);
            }
        }
        Ok(Self { params, independent, correlated })
    }
}
