//! Comparison functions: increasing maps with `φ(0) = 0` whose iterates are
//! summable.

use serde::{Deserialize, Serialize};

use super::CatalogError;

/// How many iterates `phi_tail_bound` may expand before giving up.
const TAIL_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ComparisonFunction {
    /// `φ(t) = k t`.
    Linear { k: f64 },
    /// `φ(t) = k t / (1 + t)`.
    Rational { k: f64 },
    /// Piecewise-linear through `(0, 0)` and the knots, extended past the
    /// last knot with the last segment's slope.
    Table { knots: Vec<(f64, f64)> },
}

impl ComparisonFunction {
    pub fn linear(k: f64) -> Self {
        ComparisonFunction::Linear { k }
    }

    /// Shape checks: finite non-negative parameters, `φ(0) = 0`, and
    /// monotonicity. Summability is certified separately by
    /// [`phi_tail_bound`].
    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |msg: &str| Err(CatalogError::Phi(msg.to_string()));
        match self {
            ComparisonFunction::Linear { k } | ComparisonFunction::Rational { k } => {
                if !(k.is_finite() && *k >= 0.0) {
                    return bad("coefficient must be finite and non-negative");
                }
            }
            ComparisonFunction::Table { knots } => {
                if knots.is_empty() {
                    return bad("table needs at least one knot");
                }
                let mut prev = (0.0, 0.0);
                for &(t, v) in knots {
                    if !(t.is_finite() && v.is_finite()) || t <= prev.0 || v < prev.1 {
                        return bad("knots must have increasing t and non-decreasing values");
                    }
                    prev = (t, v);
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ComparisonFunction::Linear { k } => k * t,
            ComparisonFunction::Rational { k } => k * t / (1.0 + t),
            ComparisonFunction::Table { knots } => {
                let mut prev = (0.0, 0.0);
                for &(kt, kv) in knots {
                    if t <= kt {
                        return prev.1 + (kv - prev.1) * (t - prev.0) / (kt - prev.0);
                    }
                    prev = (kt, kv);
                }
                let (a, b) = match knots.len() {
                    1 => ((0.0, 0.0), knots[0]),
                    m => (knots[m - 2], knots[m - 1]),
                };
                let slope = (b.1 - a.1) / (b.0 - a.0);
                b.1 + slope * (t - b.0)
            }
        }
    }

    /// `φⁿ(t)`.
    pub fn iterate(&self, t: f64, n: usize) -> f64 {
        (0..n).fold(t, |acc, _| self.eval(acc))
    }

    /// The slope `k` when `φ(t) = k t`.
    pub fn linear_coefficient(&self) -> Option<f64> {
        match *self {
            ComparisonFunction::Linear { k } => Some(k),
            _ => None,
        }
    }

    /// `sup { φ(u) / u : 0 < u ≤ v }`.
    pub fn ratio_bound(&self, v: f64) -> f64 {
        match self {
            ComparisonFunction::Linear { k } | ComparisonFunction::Rational { k } => *k,
            ComparisonFunction::Table { knots } => {
                // φ(u)/u is monotone on each linear piece, so the supremum is
                // attained at a knot, at v, or in the limit u → 0.
                let mut best = knots[0].1 / knots[0].0;
                for &(t, val) in knots.iter().filter(|&&(t, _)| t <= v) {
                    best = best.max(val / t);
                }
                if v > 0.0 {
                    best = best.max(self.eval(v) / v);
                }
                best
            }
        }
    }

    /// `φ(t) < t` on the probe points and in the small-`t` limit.
    pub fn below_identity(&self) -> bool {
        let probes = (-12..=6).map(|e| 10f64.powi(e));
        match self {
            ComparisonFunction::Linear { k } => *k < 1.0,
            ComparisonFunction::Rational { k } => *k <= 1.0,
            ComparisonFunction::Table { knots } => {
                knots.iter().all(|&(t, v)| v < t) && probes.into_iter().all(|t| self.eval(t) < t)
            }
        }
    }
}

/// Upper bound on `Σ_{j≥n} φʲ(t0)`.
///
/// Exact for linear `φ`; otherwise a truncated sum closed off by the
/// geometric majorant `x_M / (1 - q)` where `q` bounds `φ(u)/u` below the
/// current iterate `x_M`. Non-increasing in `n`.
pub fn phi_tail_bound(phi: &ComparisonFunction, t0: f64, n: usize) -> Result<f64, CatalogError> {
    if !(t0 >= 0.0 && t0.is_finite()) {
        return Err(CatalogError::Negative(t0));
    }
    if t0 == 0.0 {
        return Ok(0.0);
    }
    if let Some(k) = phi.linear_coefficient() {
        if k >= 1.0 {
            return Err(CatalogError::NotCertified);
        }
        if k == 0.0 {
            return Ok(if n == 0 { t0 } else { 0.0 });
        }
        return Ok(k.powi(n as i32) * t0 / (1.0 - k));
    }

    let mut x = t0;
    let mut partial = 0.0;
    for j in 0..TAIL_BUDGET {
        let q = phi.ratio_bound(x);
        if q < 1.0 && j >= n {
            return Ok(partial + x / (1.0 - q));
        }
        if j >= n {
            partial += x;
        }
        x = phi.eval(x);
        if x == 0.0 {
            return Ok(partial);
        }
    }
    Err(CatalogError::NotCertified)
}
