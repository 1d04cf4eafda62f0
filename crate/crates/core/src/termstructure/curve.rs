use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Deterministic function of time: a constant or a piecewise cubic over a
/// strictly increasing knot grid.
///
/// Outside the knot range the end pieces are extended polynomially, so a
/// curve spanning `[0, T]` can be evaluated at `T` plus rounding noise.
#[derive(Debug, Clone, PartialEq)]
pub enum ParameterCurve<S: Real> {
    Constant(S),
    Cubic(PiecewiseCubic<S>),
}

/// `p_i(u) = c0 + c1 u + c2 u² + c3 u³`, `u = t - knots[i]`, one row per interval.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCubic<S: Real> {
    knots: Vec<S>,
    coeffs: Vec<[S; 4]>,
    /// Antiderivative at each knot, relative to `knots[0]`.
    cumulative: Vec<S>,
}

impl<S: Real> ParameterCurve<S> {
    pub fn constant(value: S) -> Self {
        ParameterCurve::Constant(value)
    }

    /// Not-a-knot cubic spline through `(knots, values)`. Two knots give the
    /// chord, three the interpolating parabola. Cubic data is reproduced exactly.
    pub fn spline(knots: Vec<S>, values: Vec<S>) -> Result<Self> {
        check_knots(&knots, values.len())?;
        let coeffs = not_a_knot_coefficients(&knots, &values);
        Ok(ParameterCurve::Cubic(PiecewiseCubic::new(knots, coeffs)))
    }

    /// Cubic Hermite interpolant from values and first derivatives at the knots.
    pub fn hermite(knots: Vec<S>, values: Vec<S>, slopes: Vec<S>) -> Result<Self> {
        check_knots(&knots, values.len())?;
        if slopes.len() != knots.len() {
            return Err(Error::InvalidParams("hermite: one slope per knot required".into()));
        }
        let coeffs = (0..knots.len() - 1)
            .map(|i| {
                let h = knots[i + 1] - knots[i];
                let delta = (values[i + 1] - values[i]) / h;
                let c2 = (lit::<S>(3.0) * delta - lit::<S>(2.0) * slopes[i] - slopes[i + 1]) / h;
                let c3 = (slopes[i] + slopes[i + 1] - lit::<S>(2.0) * delta) / (h * h);
                [values[i], slopes[i], c2, c3]
            })
            .collect();
        Ok(ParameterCurve::Cubic(PiecewiseCubic::new(knots, coeffs)))
    }

    /// Spline through `f` sampled on `n_knots` uniform knots of `[start, end]`.
    pub fn sample<F: Fn(S) -> S>(f: F, start: S, end: S, n_knots: usize) -> Result<Self> {
        if n_knots < 2 || end <= start {
            return Err(Error::InvalidParams("sample: need n_knots >= 2 and end > start".into()));
        }
        let step = (end - start) / lit(n_knots as f64 - 1.0);
        let knots: Vec<S> = (0..n_knots)
            .map(|i| if i + 1 == n_knots { end } else { start + step * lit(i as f64) })
            .collect();
        let values = knots.iter().map(|&t| f(t)).collect();
        Self::spline(knots, values)
    }

    /// Checks the "positive curve" contract: every knot and every knot midpoint
    /// evaluates above zero.
    pub fn into_positive(self) -> Result<Self> {
        if let Some(t) = self.nonpositive_probe() {
            return Err(Error::InvalidParams(format!(
                "curve declared positive evaluates to {} at t={}",
                self.value(t),
                t
            )));
        }
        Ok(self)
    }

    fn nonpositive_probe(&self) -> Option<S> {
        match self {
            ParameterCurve::Constant(c) => (*c <= S::zero()).then(S::zero),
            ParameterCurve::Cubic(pc) => {
                let k = &pc.knots;
                k.iter()
                    .copied()
                    .chain(k.windows(2).map(|w| (w[0] + w[1]) * lit(0.5)))
                    .find(|&t| self.value(t) <= S::zero())
            }
        }
    }

    #[inline]
    pub fn value(&self, t: S) -> S {
        match self {
            ParameterCurve::Constant(c) => *c,
            ParameterCurve::Cubic(pc) => {
                let (i, u) = pc.locate(t);
                let c = &pc.coeffs[i];
                c[0] + u * (c[1] + u * (c[2] + u * c[3]))
            }
        }
    }

    /// First derivative; at a knot the right-hand piece is used.
    #[inline]
    pub fn derivative(&self, t: S) -> S {
        match self {
            ParameterCurve::Constant(_) => S::zero(),
            ParameterCurve::Cubic(pc) => {
                let (i, u) = pc.locate(t);
                let c = &pc.coeffs[i];
                c[1] + u * (lit::<S>(2.0) * c[2] + lit::<S>(3.0) * u * c[3])
            }
        }
    }

    /// Left-hand derivative, used to inspect one-sided limits at knots.
    pub fn derivative_left(&self, t: S) -> S {
        match self {
            ParameterCurve::Constant(_) => S::zero(),
            ParameterCurve::Cubic(pc) => {
                let i = pc.knots.partition_point(|&k| k < t).clamp(1, pc.coeffs.len()) - 1;
                let u = t - pc.knots[i];
                let c = &pc.coeffs[i];
                c[1] + u * (lit::<S>(2.0) * c[2] + lit::<S>(3.0) * u * c[3])
            }
        }
    }

    /// Exact integral over `[s, t]` (piecewise antiderivative); `s > t` gives
    /// the negated value.
    pub fn integral(&self, s: S, t: S) -> S {
        match self {
            ParameterCurve::Constant(c) => *c * (t - s),
            ParameterCurve::Cubic(pc) => pc.antiderivative(t) - pc.antiderivative(s),
        }
    }

    /// Knot grid (empty for constants).
    pub fn knots(&self) -> &[S] {
        match self {
            ParameterCurve::Constant(_) => &[],
            ParameterCurve::Cubic(pc) => &pc.knots,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, ParameterCurve::Constant(_))
    }

    /// Whether the curve is defined (without extrapolation) on `[0, horizon]`.
    pub fn covers(&self, start: S, end: S) -> bool {
        match self {
            ParameterCurve::Constant(_) => true,
            ParameterCurve::Cubic(pc) => {
                let slack = S::epsilon() * lit(16.0) * (S::one() + end.abs());
                pc.knots[0] <= start + slack && *pc.knots.last().unwrap() >= end - slack
            }
        }
    }
}

impl<S: Real> PiecewiseCubic<S> {
    fn new(knots: Vec<S>, coeffs: Vec<[S; 4]>) -> Self {
        let mut cumulative = Vec::with_capacity(knots.len());
        cumulative.push(S::zero());
        for (i, c) in coeffs.iter().enumerate() {
            let h = knots[i + 1] - knots[i];
            let prev = cumulative[i];
            cumulative.push(prev + piece_antiderivative(c, h));
        }
        Self { knots, coeffs, cumulative }
    }

    #[inline]
    fn locate(&self, t: S) -> (usize, S) {
        let n = self.coeffs.len();
        let i = self.knots.partition_point(|&k| k <= t).clamp(1, n) - 1;
        (i, t - self.knots[i])
    }

    fn antiderivative(&self, t: S) -> S {
        let (i, u) = self.locate(t);
        self.cumulative[i] + piece_antiderivative(&self.coeffs[i], u)
    }
}

#[inline]
fn piece_antiderivative<S: Real>(c: &[S; 4], u: S) -> S {
    u * (c[0] + u * (c[1] * lit(0.5) + u * (c[2] / lit(3.0) + u * c[3] * lit(0.25))))
}

fn check_knots<S: Real>(knots: &[S], n_values: usize) -> Result<()> {
    if knots.len() < 2 {
        return Err(Error::InvalidParams("curve needs at least two knots".into()));
    }
    if knots.len() != n_values {
        return Err(Error::InvalidParams(format!(
            "curve has {} knots but {} values",
            knots.len(),
            n_values
        )));
    }
    if knots.iter().any(|k| !k.is_finite()) {
        return Err(Error::InvalidParams("non-finite knot".into()));
    }
    if knots.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams("knots must be strictly increasing".into()));
    }
    Ok(())
}

/// Second-derivative formulation with not-a-knot ends, reduced to a
/// tridiagonal system by eliminating the end moments.
fn not_a_knot_coefficients<S: Real>(x: &[S], y: &[S]) -> Vec<[S; 4]> {
    let n = x.len();
    let two = lit::<S>(2.0);
    let six = lit::<S>(6.0);
    let h: Vec<S> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<S> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();

    let moments: Vec<S> = match n {
        2 => vec![S::zero(); 2],
        3 => {
            // single parabola: constant second derivative
            let m = two * (delta[1] - delta[0]) / (h[0] + h[1]);
            vec![m; 3]
        }
        _ => {
            // unknowns M_1 .. M_{n-2}; M_0 and M_{n-1} from the not-a-knot relations
            //   M_0 = ((h0+h1) M_1 - h0 M_2) / h1
            //   M_{n-1} = ((h_{n-3}+h_{n-2}) M_{n-2} - h_{n-2} M_{n-3}) / h_{n-3}
            let m = n - 2;
            let mut sub = vec![S::zero(); m];
            let mut diag = vec![S::zero(); m];
            let mut sup = vec![S::zero(); m];
            let mut rhs = vec![S::zero(); m];
            for k in 0..m {
                let i = k + 1;
                sub[k] = h[i - 1];
                diag[k] = two * (h[i - 1] + h[i]);
                sup[k] = h[i];
                rhs[k] = six * (delta[i] - delta[i - 1]);
            }
            // fold M_0 into row 0
            let (h0, h1) = (h[0], h[1]);
            diag[0] = diag[0] + h0 * (h0 + h1) / h1;
            sup[0] = sup[0] - h0 * h0 / h1;
            // fold M_{n-1} into the last row
            let (ha, hb) = (h[n - 3], h[n - 2]);
            diag[m - 1] = diag[m - 1] + hb * (ha + hb) / ha;
            sub[m - 1] = sub[m - 1] - hb * hb / ha;
            let inner = thomas(&sub, &diag, &sup, &rhs);
            let m0 = ((h0 + h1) * inner[0] - h0 * inner[1]) / h1;
            let ml = ((ha + hb) * inner[m - 1] - hb * inner[m - 2]) / ha;
            let mut all = Vec::with_capacity(n);
            all.push(m0);
            all.extend(inner);
            all.push(ml);
            all
        }
    };

    (0..n - 1)
        .map(|i| {
            let c2 = moments[i] / two;
            let c3 = (moments[i + 1] - moments[i]) / (six * h[i]);
            let c1 = delta[i] - h[i] * (two * moments[i] + moments[i + 1]) / six;
            [y[i], c1, c2, c3]
        })
        .collect()
}

fn thomas<S: Real>(sub: &[S], diag: &[S], sup: &[S], rhs: &[S]) -> Vec<S> {
    let m = diag.len();
    let mut c = vec![S::zero(); m];
    let mut d = vec![S::zero(); m];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for k in 1..m {
        let denom = diag[k] - sub[k] * c[k - 1];
        c[k] = sup[k] / denom;
        d[k] = (rhs[k] - sub[k] * d[k - 1]) / denom;
    }
    let mut out = vec![S::zero(); m];
    out[m - 1] = d[m - 1];
    for k in (0..m - 1).rev() {
        out[k] = d[k] - c[k] * out[k + 1];
    }
    out
}

/// JSON form of a curve: `{"const": x}` or `{"knots": [...], "values": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum CurveDoc {
    Const {
        #[serde(rename = "const")]
        value: f64,
    },
    Knots {
        knots: Vec<f64>,
        values: Vec<f64>,
    },
}

impl CurveDoc {
    pub fn to_curve<S: Real>(&self) -> Result<ParameterCurve<S>> {
        match self {
            CurveDoc::Const { value } => {
                if !value.is_finite() {
                    return Err(Error::Parse("non-finite constant curve".into()));
                }
                Ok(ParameterCurve::constant(lit(*value)))
            }
            CurveDoc::Knots { knots, values } => ParameterCurve::spline(
                knots.iter().map(|&k| lit(k)).collect(),
                values.iter().map(|&v| lit(v)).collect(),
            ),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
