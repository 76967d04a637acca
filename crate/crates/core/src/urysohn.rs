//! Discretized Urysohn equations `g u(t) = ∫₀ᵗ K(t, τ, u(τ)) dτ + α(t)` on a
//! uniform grid, solved as a coincidence problem in the sup-metric.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{phi_tail_bound, ComparisonFunction};
use crate::sampled::RealMap;
use crate::verify::Status;

/// Composition tolerance for `g ∘ g⁻¹`.
pub const INVERSE_TOL: f64 = 1e-10;
const H4_TOL: f64 = 1e-12;
const INVERSE_PROBES: [f64; 7] = [-2.0, -1.0, -0.25, 0.0, 0.25, 1.0, 2.0];

type KernelFn = dyn Fn(f64, f64, f64) -> f64 + Send + Sync;

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Kernel {
    Zero,
    /// `λ u`
    Linear {
        lambda: f64,
    },
    /// `λ sin u`
    Sine {
        lambda: f64,
    },
    #[serde(skip)]
    Custom(Arc<KernelFn>),
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::Zero => write!(f, "Zero"),
            Kernel::Linear { lambda } => write!(f, "Linear {{ lambda: {lambda} }}"),
            Kernel::Sine { lambda } => write!(f, "Sine {{ lambda: {lambda} }}"),
            Kernel::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Kernel {
    pub fn eval(&self, t: f64, tau: f64, u: f64) -> f64 {
        match self {
            Kernel::Zero => 0.0,
            Kernel::Linear { lambda } => lambda * u,
            Kernel::Sine { lambda } => lambda * u.sin(),
            Kernel::Custom(k) => k(t, tau, u),
        }
    }

    fn depends_on_t(&self) -> bool {
        matches!(self, Kernel::Custom(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Alpha {
    /// `Σ c_i tⁱ`, lowest degree first.
    Polynomial { coefficients: Vec<f64> },
    /// One value per grid node.
    Samples { values: Vec<f64> },
}

/// Comparator `η`; the relation is `{(u, v) : η(u(t), v(t)) ≤ 0 for all t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Eta {
    /// `η ≡ -1`.
    Universal,
    /// `η(a, b) = a - b`.
    Ordered,
}

impl Eta {
    pub fn eval(self, a: f64, b: f64) -> f64 {
        match self {
            Eta::Universal => -1.0,
            Eta::Ordered => a - b,
        }
    }

    /// `(u, v)` is related when `η(u_i, v_i) ≤ 0` at every node.
    pub fn relates(self, u: &[f64], v: &[f64]) -> bool {
        u.iter().zip(v).all(|(&a, &b)| self.eval(a, b) <= 0.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UrysohnError {
    #[error("horizon must be finite and positive, got {0}")]
    Horizon(f64),
    #[error("grid needs at least one interval")]
    GridSize,
    #[error("alpha samples: expected {expected} values, got {got}")]
    AlphaLength { expected: usize, got: usize },
    #[error("g has no inverse; supply one")]
    NoInverse,
    #[error("g-inverse does not compose to the identity at {0}")]
    BadInverse(f64),
    #[error("grid function has {got} values, the grid has {expected}")]
    GridMismatch { expected: usize, got: usize },
    #[error("non-finite value at node {node}")]
    NonFinite { node: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no convergence after {steps} steps")]
    NonConvergence { steps: usize, residuals: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct UrysohnProblem {
    pub kernel: Kernel,
    pub alpha: Alpha,
    pub g: RealMap,
    pub g_inverse: Option<RealMap>,
    pub horizon: f64,
    pub eta: Eta,
    pub phi: ComparisonFunction,
    pub grid_size: usize,
}

/// Values at the `N + 1` nodes `i·h`, `h = T / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub h: f64,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    pub fn sup_distance(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `t,u` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,u\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{}\n", self.node(i), v));
        }
        out
    }
}

impl UrysohnProblem {
    pub fn h(&self) -> f64 {
        self.horizon / self.grid_size as f64
    }

    pub fn nodes(&self) -> usize {
        self.grid_size + 1
    }

    pub fn g_inverse(&self) -> Result<RealMap, UrysohnError> {
        self.g_inverse
            .clone()
            .or_else(|| self.g.inverse())
            .ok_or(UrysohnError::NoInverse)
    }

    pub fn validate(&self) -> Result<(), UrysohnError> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(UrysohnError::Horizon(self.horizon));
        }
        if self.grid_size == 0 {
            return Err(UrysohnError::GridSize);
        }
        if let Alpha::Samples { values } = &self.alpha {
            if values.len() != self.nodes() {
                return Err(UrysohnError::AlphaLength {
                    expected: self.nodes(),
                    got: values.len(),
                });
            }
        }
        let inv = self.g_inverse()?;
        for y in INVERSE_PROBES {
            let x = inv.apply(y);
            // probes outside the range of g are skipped
            if x.is_nan() {
                continue;
            }
            if (self.g.apply(x) - y).abs() > INVERSE_TOL {
                return Err(UrysohnError::BadInverse(y));
            }
        }
        Ok(())
    }

    pub fn grid_function(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        let h = self.h();
        GridFunction {
            h,
            values: (0..self.nodes()).map(|i| f(i as f64 * h)).collect(),
        }
    }

    pub fn alpha_at(&self, i: usize) -> f64 {
        match &self.alpha {
            Alpha::Polynomial { coefficients } => {
                let t = i as f64 * self.h();
                coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c)
            }
            Alpha::Samples { values } => values[i],
        }
    }

    fn check_grid(&self, u: &GridFunction) -> Result<(), UrysohnError> {
        if u.values.len() != self.nodes() {
            return Err(UrysohnError::GridMismatch {
                expected: self.nodes(),
                got: u.values.len(),
            });
        }
        Ok(())
    }

    pub fn apply_g(&self, u: &GridFunction) -> GridFunction {
        GridFunction {
            h: u.h,
            values: u.values.iter().map(|&x| self.g.apply(x)).collect(),
        }
    }

    fn kernel_row(&self, t: f64, u: &GridFunction, upto: usize) -> Result<Vec<f64>, UrysohnError> {
        (0..=upto)
            .map(|j| {
                let k = self.kernel.eval(t, u.node(j), u.values[j]);
                if k.is_finite() {
                    Ok(k)
                } else {
                    Err(UrysohnError::NonFinite { node: j })
                }
            })
            .collect()
    }

    /// Composite trapezoid rule on `[0, t_i]` plus `α(t_i)` at every node.
    pub fn apply_t(&self, u: &GridFunction) -> Result<GridFunction, UrysohnError> {
        self.check_grid(u)?;
        let h = self.h();
        let n = self.nodes();
        let mut out = Vec::with_capacity(n);
        if self.kernel.depends_on_t() {
            for i in 0..n {
                let row = self.kernel_row(u.node(i), u, i)?;
                let integral = if i == 0 {
                    0.0
                } else {
                    h * (0.5 * row[0] + row[1..i].iter().sum::<f64>() + 0.5 * row[i])
                };
                out.push(integral + self.alpha_at(i));
            }
        } else {
            let row = self.kernel_row(0.0, u, n - 1)?;
            let mut integral = 0.0;
            for i in 0..n {
                if i > 0 {
                    integral += 0.5 * h * (row[i - 1] + row[i]);
                }
                out.push(integral + self.alpha_at(i));
            }
        }
        for (node, v) in out.iter().enumerate() {
            if !v.is_finite() {
                return Err(UrysohnError::NonFinite { node });
            }
        }
        Ok(GridFunction { h, values: out })
    }

    /// `max_i |g(u_i) - (Tu)_i|`.
    pub fn residual(&self, u: &GridFunction) -> Result<f64, UrysohnError> {
        Ok(self.apply_g(u).sup_distance(&self.apply_t(u)?))
    }

    /// Nodewise `g⁻¹`.
    pub fn pull_back(&self, v: &GridFunction) -> Result<GridFunction, UrysohnError> {
        let inv = self.g_inverse()?;
        let values: Vec<f64> = v.values.iter().map(|&y| inv.apply(y)).collect();
        if let Some(node) = values.iter().position(|x| !x.is_finite()) {
            return Err(UrysohnError::NonFinite { node });
        }
        Ok(GridFunction { h: v.h, values })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HEntry {
    pub condition: &'static str,
    pub status: Status,
    pub witness: Option<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HReport {
    pub entries: Vec<HEntry>,
}

impl HReport {
    pub fn status(&self, condition: &str) -> Status {
        self.entries
            .iter()
            .find(|e| e.condition == condition)
            .map_or(Status::NotApplicable, |e| e.status)
    }

    pub fn accepted(&self) -> bool {
        self.entries.iter().all(|e| e.status.accepted())
    }
}

/// Constants, linear and quadratic profiles on the problem grid.
pub fn default_samples(problem: &UrysohnProblem) -> Vec<GridFunction> {
    let mut out: Vec<GridFunction> = [-1.0, -0.5, 0.0, 0.5, 1.0]
        .iter()
        .map(|&c| problem.grid_function(|_| c))
        .collect();
    out.push(problem.grid_function(|t| t));
    out.push(problem.grid_function(|t| -t));
    out.push(problem.grid_function(|t| t * t));
    out.push(problem.grid_function(|t| 1.0 - t));
    out
}

fn entry(
    condition: &'static str,
    status: Status,
    witness: Option<String>,
    note: Option<&str>,
) -> HEntry {
    HEntry {
        condition,
        status,
        witness,
        note: note.map(str::to_string),
    }
}

/// Checks H1 at `u0` on every node, H2 and H4 on all pairs of `samples`,
/// records H3 as asserted and decides H5 exactly.
pub fn check_h(
    problem: &UrysohnProblem,
    u0: &GridFunction,
    samples: &[GridFunction],
) -> Result<HReport, UrysohnError> {
    problem.validate()?;
    let eta = problem.eta;
    let mut entries = Vec::new();

    let gu0 = problem.apply_g(u0);
    let tu0 = problem.apply_t(u0)?;
    let bad = (0..problem.nodes()).find(|&i| eta.eval(gu0.values[i], tu0.values[i]) > 0.0);
    entries.push(entry(
        "H1",
        Status::from_bool(bad.is_none()),
        bad.map(|i| format!("eta(g u0, T u0) > 0 at t = {}", u0.node(i))),
        Some("checked at every grid node"),
    ));

    let images: Vec<(GridFunction, GridFunction)> = samples
        .iter()
        .map(|u| Ok((problem.apply_g(u), problem.apply_t(u)?)))
        .collect::<Result<_, UrysohnError>>()?;
    let related_pairs = || {
        (0..samples.len())
            .flat_map(|a| (0..samples.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| eta.relates(&images[a].0.values, &images[b].0.values))
    };

    let bad_h2 =
        related_pairs().find(|&(a, b)| !eta.relates(&images[a].1.values, &images[b].1.values));
    entries.push(entry(
        "H2",
        if bad_h2.is_none() {
            Status::Sampled
        } else {
            Status::Fails
        },
        bad_h2.map(|(a, b)| format!("samples {a} and {b}: g-images related, T-images not")),
        None,
    ));

    entries.push(entry(
        "H3",
        Status::Asserted,
        None,
        Some("subsequence condition is not decidable; asserted"),
    ));

    let phi = &problem.phi;
    let phi_ok =
        phi.validate().is_ok() && phi.below_identity() && phi_tail_bound(phi, 1.0, 0).is_ok();
    let mut bad_h4 = None;
    if phi_ok {
        'pairs: for (a, b) in related_pairs() {
            let (u, v) = (&samples[a], &samples[b]);
            let (gu, gv) = (&images[a].0, &images[b].0);
            for i in 0..problem.nodes() {
                let t = u.node(i);
                for j in 0..=i {
                    let tau = u.node(j);
                    let lhs = (problem.kernel.eval(t, tau, u.values[j])
                        - problem.kernel.eval(t, tau, v.values[j]))
                    .abs();
                    let rhs = phi.eval((gu.values[j] - gv.values[j]).abs());
                    if lhs > rhs + H4_TOL {
                        bad_h4 = Some(format!(
                            "samples {a} and {b} at (t, tau) = ({t}, {tau}): {lhs} > {rhs}"
                        ));
                        break 'pairs;
                    }
                }
            }
        }
    } else {
        bad_h4 = Some("phi is not a certified comparison function".into());
    }
    entries.push(entry(
        "H4",
        if bad_h4.is_none() {
            Status::Sampled
        } else {
            Status::Fails
        },
        bad_h4,
        None,
    ));

    let h5 = problem.horizon < 1.0;
    entries.push(entry(
        "H5",
        Status::from_bool(h5),
        (!h5).then(|| {
            format!(
                "sup of the integral of 1 over [0, t] is {} >= 1",
                problem.horizon
            )
        }),
        Some("as stated this forces the horizon below 1"),
    ));
    Ok(HReport { entries })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UrysohnSolution {
    pub u: GridFunction,
    /// `d∞(g u_n, T u_n)` for every iterate.
    pub residuals: Vec<f64>,
    /// Every consecutive pair of g-images is related.
    pub relation_preserving: bool,
}

impl UrysohnSolution {
    pub fn steps(&self) -> usize {
        self.residuals.len() - 1
    }
}

/// `u_{n+1} = g⁻¹(T u_n)` until `d∞(g u_n, T u_n) ≤ tol`.
pub fn solve(
    problem: &UrysohnProblem,
    u0: &GridFunction,
    tol: f64,
    max_iter: usize,
) -> Result<UrysohnSolution, UrysohnError> {
    problem.validate()?;
    problem.check_grid(u0)?;
    if problem.horizon >= 1.0 {
        return Err(UrysohnError::Precondition(format!(
            "H5 fails: horizon {} >= 1",
            problem.horizon
        )));
    }
    let mut u = u0.clone();
    let mut gu = problem.apply_g(&u);
    let mut tu = problem.apply_t(&u)?;
    if !problem.eta.relates(&gu.values, &tu.values) {
        return Err(UrysohnError::Precondition("H1 fails at u0".into()));
    }
    let mut residuals = Vec::new();
    let mut relation_preserving = true;
    for step in 0..=max_iter {
        let r = gu.sup_distance(&tu);
        residuals.push(r);
        if r <= tol {
            return Ok(UrysohnSolution {
                u,
                residuals,
                relation_preserving,
            });
        }
        if step == max_iter {
            break;
        }
        u = problem.pull_back(&tu)?;
        let next = problem.apply_g(&u);
        relation_preserving &= problem.eta.relates(&gu.values, &next.values);
        gu = next;
        tu = problem.apply_t(&u)?;
    }
    Err(UrysohnError::NonConvergence {
        steps: max_iter,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk(n: usize) -> UrysohnProblem {
        UrysohnProblem {
            kernel: Kernel::Linear { lambda: 0.5 },
            alpha: Alpha::Polynomial {
                coefficients: vec![0.0, 1.0, -0.25],
            },
            g: RealMap::Identity,
            g_inverse: None,
            horizon: 0.9,
            eta: Eta::Universal,
            phi: ComparisonFunction::linear(0.5),
            grid_size: n,
        }
    }

    /// Plain loop with no relation bookkeeping.
    fn reference_path(p: &UrysohnProblem, u0: &GridFunction, tol: f64) -> GridFunction {
        let mut u = u0.clone();
        loop {
            let tu = p.apply_t(&u).unwrap();
            if u.sup_distance(&tu) <= tol {
                return u;
            }
            u = tu;
        }
    }

    #[test]
    fn exact_solution_is_reproduced_by_the_trapezoid_rule() {
        let p = desk(200);
        let exact = p.grid_function(|t| t);
        let tu = p.apply_t(&exact).unwrap();
        assert!(tu.sup_distance(&exact) < 1e-14);
    }

    #[test]
    fn zero_input_maps_to_alpha() {
        let p = desk(200);
        let zero = p.grid_function(|_| 0.0);
        let tu = p.apply_t(&zero).unwrap();
        for (i, v) in tu.values.iter().enumerate() {
            assert_eq!(*v, p.alpha_at(i));
        }
        let top = p.residual(&zero).unwrap();
        assert!((top - (0.9 - 0.81 / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn zero_problem_has_zero_residual() {
        let mut p = desk(10);
        p.kernel = Kernel::Zero;
        p.alpha = Alpha::Polynomial {
            coefficients: vec![],
        };
        let zero = p.grid_function(|_| 0.0);
        assert_eq!(p.residual(&zero).unwrap(), 0.0);
    }

    #[test]
    fn zero_kernel_solves_in_one_step() {
        let mut p = desk(50);
        p.kernel = Kernel::Zero;
        let sol = solve(&p, &p.grid_function(|_| 0.0), 1e-12, 10).unwrap();
        assert_eq!(sol.steps(), 1);
        assert_eq!(sol.u.values[50], p.alpha_at(50));
    }

    #[test]
    fn desk_problem_report() {
        let p = desk(50);
        let u0 = p.grid_function(|_| 0.0);
        let report = check_h(&p, &u0, &default_samples(&p)).unwrap();
        assert_eq!(report.status("H1"), Status::Holds);
        assert_eq!(report.status("H2"), Status::Sampled);
        assert_eq!(report.status("H3"), Status::Asserted);
        assert_eq!(report.status("H4"), Status::Sampled);
        assert_eq!(report.status("H5"), Status::Holds);
        assert!(report.accepted());

        let mut wide = desk(50);
        wide.horizon = 1.5;
        let report = check_h(&wide, &wide.grid_function(|_| 0.0), &[]).unwrap();
        assert_eq!(report.status("H5"), Status::Fails);
        assert!(solve(&wide, &wide.grid_function(|_| 0.0), 1e-8, 100).is_err());
    }

    #[test]
    fn ordered_comparator_reads_nodes() {
        let mut p = desk(20);
        p.eta = Eta::Ordered;
        // g u0 = -1 lies below T u0 = α - t/2 + ... at every node
        let below = p.grid_function(|_| -1.0);
        assert_eq!(
            check_h(&p, &below, &[]).unwrap().status("H1"),
            Status::Holds
        );
        let above = p.grid_function(|_| 1.0);
        let report = check_h(&p, &above, &[]).unwrap();
        assert_eq!(report.status("H1"), Status::Fails);
    }

    #[test]
    fn steep_kernel_fails_h4() {
        let mut p = desk(20);
        p.kernel = Kernel::Linear { lambda: 0.8 };
        let report = check_h(&p, &p.grid_function(|_| 0.0), &default_samples(&p)).unwrap();
        assert_eq!(report.status("H4"), Status::Fails);
    }

    #[test]
    fn universal_comparator_matches_reference_bitwise() {
        let p = desk(200);
        let u0 = p.grid_function(|_| 0.0);
        let sol = solve(&p, &u0, 1e-8, 60).unwrap();
        assert!(sol.relation_preserving);
        assert_eq!(sol.u, reference_path(&p, &u0, 1e-8));
        let exact = p.grid_function(|t| t);
        assert!(sol.u.sup_distance(&exact) <= 5e-3);
        for w in sol.residuals.windows(2) {
            assert!(w[1] <= 0.55 * w[0]);
        }
    }

    #[test]
    fn time_dependent_kernel_uses_full_rows() {
        let mut p = desk(100);
        p.kernel = Kernel::Custom(Arc::new(|t, tau, _| t - tau));
        p.alpha = Alpha::Polynomial {
            coefficients: vec![],
        };
        // ∫₀ᵗ (t - τ) dτ = t²/2; trapezoid is exact for linear integrands
        let tu = p.apply_t(&p.grid_function(|_| 0.0)).unwrap();
        let expected = p.grid_function(|t| t * t / 2.0);
        assert!(tu.sup_distance(&expected) < 1e-14);
    }

    #[test]
    fn affine_g_needs_consistent_inverse() {
        let mut p = desk(10);
        p.g = RealMap::Affine { a: 2.0, b: 0.0 };
        assert!(p.validate().is_ok());
        p.g_inverse = Some(RealMap::Affine { a: 1.0, b: 0.0 });
        assert!(matches!(p.validate(), Err(UrysohnError::BadInverse(_))));
        p.g = RealMap::Constant { value: 0.0 };
        p.g_inverse = None;
        assert_eq!(p.validate(), Err(UrysohnError::NoInverse));
    }

    #[test]
    fn csv_export() {
        let p = desk(2);
        let csv = p.grid_function(|t| 2.0 * t).to_csv();
        assert_eq!(csv, "t,u\n0,0\n0.45,0.9\n0.9,1.8\n");
    }
}
