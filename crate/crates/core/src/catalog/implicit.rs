//! Implicit relations `G: ℝ₊⁶ → ℝ`.
//!
//! Arguments are ordered `(d(Tx,Ty), d(gx,gy), d(gx,Tx), d(gy,Ty), d(gx,Ty),
//! d(gy,Tx))`; a pair satisfies the contraction when `G ≤ 0`.

use super::{phi_tail_bound, CatalogError, ComparisonFunction};

/// Evaluator forms. Roman variants are the catalog members; the remaining
/// variants cover contraction conditions without a catalog counterpart and
/// user input.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, PartialEq)]
pub enum Form {
    /// `r1 - k r2`
    I { k: f64 },
    /// `r1 - φ(r2)`
    II { phi: ComparisonFunction },
    /// `r1 - k (r3 + r4)`
    III { k: f64 },
    /// `r1 - k (r5 + r6)`
    IV { k: f64 },
    /// `r1 - a1 r2 - a2 (r3 + r4) - a3 (r5 + r6)`
    V { a: [f64; 3] },
    /// `r1 - k r2 - L min{r3, r4, r5, r6}`
    VI { k: f64, l: f64 },
    /// `r1 - k max{r2, r3, r4, (r5 + r6)/2} - L min{r3, r4, r5, r6}`
    VII { k: f64, l: f64 },
    /// `r1 - k max{r2, .., r6}`
    VIII { k: f64 },
    /// `r1 - Σ a_i r_{i+1}`
    IX { a: [f64; 5] },
    /// `r1 - k max{r2, r3, r4, r5/2, r6/2}`
    X { k: f64 },
    /// `r1 - k max{r2, r3, r4} - (1 - k)(a r5 + b r6)`
    XI { k: f64, a: f64, b: f64 },
    /// `r1² - r1 (a1 r2 + a2 r3 + a3 r4) - a4 r5 r6`
    XII { a: [f64; 4] },
    /// `r1 - k r2 (r5 + r6)/(r1 + r2)`, or `r1` when `r1 + r2 = 0`
    XIII { k: f64 },
    /// `r1² - a1 max{r2², r3², r4²} - a2 max{r3 r5, r4 r6} - a3 r5 r6`
    XIV { a: [f64; 3] },
    /// `r1³ - k (r2³ + .. + r6³)`
    XV { k: f64 },
    /// `r1 - a1 r2 r4/(r2 + r4) - a2 r3 r6/(r5 + r6 + 1)`, or `r1` when
    /// `r2 + r4 = 0`
    XVI { a1: f64, a2: f64 },
    /// `r1 - k max{r2, (r3 + r4)/2, (r5 + r6)/2}`
    MaxAverage { k: f64 },
    /// `r1 - k max{r3, r4}`
    MaxSelf { k: f64 },
    /// `r1 - k max{r2, (r3 + r4)/2, r5, r6}`
    MaxMixed { k: f64 },
    /// `Σ c_i r_i`
    Linear { c: [f64; 6] },
    /// `r1 - φ(r2 (r5 + r6)/(r3 + r4))`, or `r1 - r2` when `r3 + r4 = 0`
    Quotient { phi: ComparisonFunction },
}

fn max(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Slope `ρ` with `G(r,s,s,r,r+s,0) ≤ 0 ⟹ r ≤ ρ s` for `Σ c_i r_i`.
fn linear_slope(c: &[f64; 6]) -> Option<f64> {
    let lead = c[0] + c[3] + c[4];
    let rest = c[1] + c[2] + c[4];
    (lead > 0.0).then(|| (-rest / lead).max(0.0))
}

/// Largest root in `[0, 1]` of `(1-k)ρ³ - k(2 + (1+ρ)³)`, bracketed from
/// above so the returned slope never undershoots.
fn cubic_slope(k: f64) -> Option<f64> {
    let f = |p: f64| (1.0 - k) * p.powi(3) - k * (2.0 + (1.0 + p).powi(3));
    if f(1.0) <= 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

impl Form {
    pub fn value(&self, r: &[f64; 6]) -> f64 {
        let [r1, r2, r3, r4, r5, r6] = *r;
        match self {
            Form::I { k } => r1 - k * r2,
            Form::II { phi } => r1 - phi.eval(r2),
            Form::III { k } => r1 - k * (r3 + r4),
            Form::IV { k } => r1 - k * (r5 + r6),
            Form::V { a } => r1 - a[0] * r2 - a[1] * (r3 + r4) - a[2] * (r5 + r6),
            Form::VI { k, l } => r1 - k * r2 - l * min(&[r3, r4, r5, r6]),
            Form::VII { k, l } => {
                r1 - k * max(&[r2, r3, r4, (r5 + r6) / 2.0]) - l * min(&[r3, r4, r5, r6])
            }
            Form::VIII { k } => r1 - k * max(&[r2, r3, r4, r5, r6]),
            Form::IX { a } => r1 - (a[0] * r2 + a[1] * r3 + a[2] * r4 + a[3] * r5 + a[4] * r6),
            Form::X { k } => r1 - k * max(&[r2, r3, r4, r5 / 2.0, r6 / 2.0]),
            Form::XI { k, a, b } => r1 - k * max(&[r2, r3, r4]) - (1.0 - k) * (a * r5 + b * r6),
            Form::XII { a } => r1 * r1 - r1 * (a[0] * r2 + a[1] * r3 + a[2] * r4) - a[3] * r5 * r6,
            Form::XIII { k } => {
                if r1 + r2 != 0.0 {
                    r1 - k * r2 * (r5 + r6) / (r1 + r2)
                } else {
                    r1
                }
            }
            Form::XIV { a } => {
                r1 * r1
                    - a[0] * max(&[r2 * r2, r3 * r3, r4 * r4])
                    - a[1] * max(&[r3 * r5, r4 * r6])
                    - a[2] * r5 * r6
            }
            Form::XV { k } => {
                r1.powi(3) - k * (r2.powi(3) + r3.powi(3) + r4.powi(3) + r5.powi(3) + r6.powi(3))
            }
            Form::XVI { a1, a2 } => {
                if r2 + r4 != 0.0 {
                    r1 - a1 * r2 * r4 / (r2 + r4) - a2 * r3 * r6 / (r5 + r6 + 1.0)
                } else {
                    r1
                }
            }
            Form::MaxAverage { k } => r1 - k * max(&[r2, (r3 + r4) / 2.0, (r5 + r6) / 2.0]),
            Form::MaxSelf { k } => r1 - k * max(&[r3, r4]),
            Form::MaxMixed { k } => r1 - k * max(&[r2, (r3 + r4) / 2.0, r5, r6]),
            Form::Linear { c } => c.iter().zip(r).map(|(c, r)| c * r).sum(),
            Form::Quotient { phi } => {
                if r3 + r4 != 0.0 {
                    r1 - phi.eval(r2 * (r5 + r6) / (r3 + r4))
                } else {
                    r1 - r2
                }
            }
        }
    }

    /// Slope of the linear comparison function extracted from the
    /// `G(r,s,s,r,r+s,0) ≤ 0` slice, when one exists below 1.
    fn slope(&self) -> Option<f64> {
        let slope = match *self {
            Form::I { k } | Form::VI { k, .. } | Form::VII { k, .. } => k,
            Form::X { k } | Form::XIII { k } | Form::MaxAverage { k } | Form::MaxSelf { k } => k,
            Form::III { k } | Form::IV { k } | Form::VIII { k } | Form::MaxMixed { k } => {
                if k >= 1.0 {
                    return None;
                }
                k / (1.0 - k)
            }
            Form::V { a } => linear_slope(&[1.0, -a[0], -a[1], -a[1], -a[2], -a[2]])?,
            Form::IX { a } => linear_slope(&[1.0, -a[0], -a[1], -a[2], -a[3], -a[4]])?,
            Form::Linear { c } => linear_slope(&c)?,
            Form::XI { k, a, .. } => {
                let m = (1.0 - k) * a;
                (k + m) / (1.0 - m)
            }
            Form::XII { a } => (a[0] + a[1]) / (1.0 - a[2]),
            Form::XIV { a } => (a[1] + (a[1] * a[1] + 4.0 * (a[0] + a[1])).sqrt()) / 2.0,
            Form::XV { k } => cubic_slope(k)?,
            Form::XVI { a1, .. } => (a1 - 1.0).max(0.0),
            Form::II { .. } | Form::Quotient { .. } => return None,
        };
        (slope.is_finite() && (0.0..1.0).contains(&slope)).then_some(slope)
    }

    /// The comparison function witnessing the first condition, if the form
    /// admits one.
    pub fn witness(&self) -> Option<ComparisonFunction> {
        match self {
            Form::II { phi } | Form::Quotient { phi } => {
                let certified = phi.validate().is_ok()
                    && phi.below_identity()
                    && phi_tail_bound(phi, 1.0, 0).is_ok();
                certified.then(|| phi.clone())
            }
            _ => self.slope().map(ComparisonFunction::linear),
        }
    }

    fn declared(&self, has_witness: bool) -> Declared {
        match *self {
            Form::Linear { c } => Declared {
                g1: has_witness && c[4] <= 0.0 && c[5] <= 0.0,
                g2: c[0] + c[2] + c[5] > 0.0,
                g3: c[0] + c[1] + c[4] + c[5] > 0.0,
            },
            Form::XV { k } => Declared {
                g1: has_witness,
                g2: 1.0 - 2.0 * k > 0.0,
                g3: 1.0 - 3.0 * k > 0.0,
            },
            Form::MaxMixed { k } => Declared {
                g1: has_witness,
                g2: k < 1.0,
                g3: k < 1.0,
            },
            Form::Quotient { .. } => Declared {
                g1: has_witness,
                g2: true,
                g3: false,
            },
            _ => Declared {
                g1: has_witness,
                g2: true,
                g3: true,
            },
        }
    }
}

/// Which of the three conditions a relation claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Declared {
    pub g1: bool,
    pub g2: bool,
    pub g3: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitRelation {
    name: String,
    form: Form,
    phi: Option<ComparisonFunction>,
    declared: Declared,
}

impl ImplicitRelation {
    /// Wraps a form without parameter validation; the declared flags and the
    /// witness are derived from the form itself.
    pub fn from_form(name: impl Into<String>, form: Form) -> Self {
        let phi = form.witness();
        let declared = form.declared(phi.is_some());
        ImplicitRelation {
            name: name.into(),
            form,
            phi,
            declared,
        }
    }

    /// `G = Σ c_i r_i`.
    pub fn linear(c: [f64; 6]) -> Self {
        ImplicitRelation::from_form("linear", Form::Linear { c })
    }

    /// The two-branch quotient form built on `phi`.
    pub fn quotient(phi: ComparisonFunction) -> Self {
        ImplicitRelation::from_form("quotient", Form::Quotient { phi })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn phi(&self) -> Option<&ComparisonFunction> {
        self.phi.as_ref()
    }

    pub fn declared(&self) -> Declared {
        self.declared
    }

    /// Whether the weaker path-based uniqueness hypothesis may stand in for
    /// the stronger one: only for the plain `k d(gx,gy)` and `φ(d(gx,gy))`
    /// contractions.
    pub fn admits_weak_uniqueness(&self) -> bool {
        matches!(self.form, Form::I { .. } | Form::II { .. })
    }

    pub fn eval(&self, r: &[f64; 6]) -> Result<f64, CatalogError> {
        if let Some(&neg) = r.iter().find(|&&x| x.is_nan() || x < 0.0) {
            return Err(CatalogError::Negative(neg));
        }
        Ok(self.form.value(r))
    }

    /// [`eval`](Self::eval) without the sign check, for callers that build
    /// the tuple from distances.
    #[inline]
    pub fn value(&self, r: &[f64; 6]) -> f64 {
        self.form.value(r)
    }
}
