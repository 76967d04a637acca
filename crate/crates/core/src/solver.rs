//! Picard-type coincidence iteration `g x_{n+1} = T x_n`.

use thiserror::Error;

use crate::catalog::ComparisonFunction;
use crate::metric::FiniteMetricSpace;
use crate::relation::Relation;

pub const DEFAULT_TOL_FINITE: f64 = 1e-10;
pub const DEFAULT_TOL_CONTINUOUS: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Slack allowed when comparing observed residuals with `φⁿ(d₀)`.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("map tables must have {expected} entries, got T: {t}, g: {g}")]
    Length { expected: usize, t: usize, g: usize },
    #[error("map value {value} at point {at} is outside the space")]
    OutOfRange { at: usize, value: usize },
    #[error("hypothesis (b) violated at {at}: T-image has no g-preimage")]
    MissingPreimage { at: String, residuals: Vec<f64> },
    #[error("no coincidence within {steps} steps; last residual {}", residuals.last().copied().unwrap_or(f64::NAN))]
    NonConvergence { steps: usize, residuals: Vec<f64> },
}

/// A pair of self-maps of `{0, .., n-1}` with a least-index g-preimage table.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingPair {
    t: Vec<usize>,
    g: Vec<usize>,
    preimage: Vec<Option<usize>>,
}

impl MappingPair {
    pub fn new(n: usize, t: Vec<usize>, g: Vec<usize>) -> Result<Self, SolveError> {
        if t.len() != n || g.len() != n {
            return Err(SolveError::Length {
                expected: n,
                t: t.len(),
                g: g.len(),
            });
        }
        for (at, &value) in t.iter().chain(&g).enumerate() {
            if value >= n {
                return Err(SolveError::OutOfRange { at: at % n, value });
            }
        }
        let mut preimage = vec![None; n];
        for (x, &gx) in g.iter().enumerate() {
            preimage[gx].get_or_insert(x);
        }
        Ok(MappingPair { t, g, preimage })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t(&self) -> &[usize] {
        &self.t
    }

    pub fn g(&self) -> &[usize] {
        &self.g
    }

    /// Least `x` with `g x = y`.
    pub fn preimage(&self, y: usize) -> Option<usize> {
        self.preimage[y]
    }

    /// `g(X)` in ascending order.
    pub fn g_image(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&y| self.preimage[y].is_some())
            .collect()
    }

    /// `T(X)` in ascending order.
    pub fn t_image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.len()];
        for &v in &self.t {
            hit[v] = true;
        }
        (0..self.len()).filter(|&y| hit[y]).collect()
    }
}

/// What the iteration needs from a pair of maps on some point type.
pub trait CoincidenceSystem {
    type Point: Clone;

    fn apply_t(&self, x: &Self::Point) -> Self::Point;
    fn apply_g(&self, x: &Self::Point) -> Self::Point;
    /// Some `x` with `g x = y`, chosen deterministically.
    fn g_preimage(&self, y: &Self::Point) -> Option<Self::Point>;
    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;
    fn describe(&self, x: &Self::Point) -> String;
}

pub struct FiniteSystem<'a> {
    pub space: &'a FiniteMetricSpace,
    pub pair: &'a MappingPair,
}

impl CoincidenceSystem for FiniteSystem<'_> {
    type Point = usize;

    fn apply_t(&self, x: &usize) -> usize {
        self.pair.t[*x]
    }

    fn apply_g(&self, x: &usize) -> usize {
        self.pair.g[*x]
    }

    fn g_preimage(&self, y: &usize) -> Option<usize> {
        self.pair.preimage(*y)
    }

    fn distance(&self, a: &usize, b: &usize) -> f64 {
        self.space.d(*a, *b)
    }

    fn describe(&self, x: &usize) -> String {
        self.space.label(*x).to_string()
    }
}

/// `X(T, g, R) = {w : (gw, Tw) ∈ R}`.
pub fn start_set(pair: &MappingPair, r: &Relation) -> Vec<usize> {
    (0..pair.len())
        .filter(|&w| r.contains(pair.g[w], pair.t[w]))
        .collect()
}

/// Least `x₀` with `(g x₀, T x₀) ∈ R`.
pub fn find_start(pair: &MappingPair, r: &Relation) -> Option<usize> {
    (0..pair.len()).find(|&w| r.contains(pair.g[w], pair.t[w]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace<P> {
    pub x: Vec<P>,
    pub gx: Vec<P>,
    /// `d(g x_n, T x_n)`, which equals `d(g x_n, g x_{n+1})` along the trace.
    pub residuals: Vec<f64>,
}

impl<P> IterationTrace<P> {
    /// Number of preimage steps taken.
    pub fn steps(&self) -> usize {
        self.x.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Coincidence,
    PointOfCoincidence,
    CommonFixedPoint,
    Violation,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::Coincidence => "coincidence",
            CertificateKind::PointOfCoincidence => "point-of-coincidence",
            CertificateKind::CommonFixedPoint => "common-fixed-point",
            CertificateKind::Violation => "violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<P> {
    pub kind: CertificateKind,
    pub point: P,
    pub residual: f64,
    pub note: String,
}

/// Runs `x_{n+1} = preimage(T x_n)` until `d(g x_n, T x_n) ≤ tol`.
pub fn iterate<S: CoincidenceSystem>(
    system: &S,
    x0: S::Point,
    tol: f64,
    max_iter: usize,
) -> Result<(IterationTrace<S::Point>, Certificate<S::Point>), SolveError> {
    let mut trace = IterationTrace {
        x: Vec::new(),
        gx: Vec::new(),
        residuals: Vec::new(),
    };
    let mut x = x0;
    for step in 0..=max_iter {
        let gx = system.apply_g(&x);
        let tx = system.apply_t(&x);
        let residual = system.distance(&gx, &tx);
        trace.x.push(x.clone());
        trace.gx.push(gx);
        trace.residuals.push(residual);
        if residual <= tol {
            let cert = Certificate {
                kind: CertificateKind::Coincidence,
                point: x,
                residual,
                note: format!("d(gw, Tw) <= {tol:e} after {step} steps"),
            };
            return Ok((trace, cert));
        }
        if step == max_iter {
            break;
        }
        x = match system.g_preimage(&tx) {
            Some(next) => next,
            None => {
                return Err(SolveError::MissingPreimage {
                    at: system.describe(&x),
                    residuals: trace.residuals,
                })
            }
        };
    }
    Err(SolveError::NonConvergence {
        steps: max_iter,
        residuals: trace.residuals,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub n: usize,
    /// `d(g x_n, g x_{n+1})`.
    pub observed: f64,
    /// `φⁿ(d₀)`.
    pub bound: f64,
    /// `d(g x_n, g x_m)` for the final index `m`.
    pub gap: f64,
    /// `Σ_{j=n}^{m-1} φʲ(d₀)`.
    pub cauchy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub rows: Vec<BoundRow>,
    pub holds: bool,
}

/// Checks the residual decay `d(g x_n, g x_{n+1}) ≤ φⁿ(d₀)` and the Cauchy
/// estimate `d(g x_n, g x_m) ≤ Σ_{j=n}^{m-1} φʲ(d₀)` along a trace.
pub fn error_bounds<S: CoincidenceSystem>(
    system: &S,
    trace: &IterationTrace<S::Point>,
    phi: &ComparisonFunction,
) -> BoundsReport {
    let Some(&d0) = trace.residuals.first() else {
        return BoundsReport {
            rows: Vec::new(),
            holds: true,
        };
    };
    let m = trace.gx.len() - 1;
    let powers: Vec<f64> = std::iter::successors(Some(d0), |&t| Some(phi.eval(t)))
        .take(m.max(1) + 1)
        .collect();
    let mut holds = true;
    let rows = (0..trace.residuals.len())
        .map(|n| {
            let observed = trace.residuals[n];
            let bound = powers[n.min(powers.len() - 1)];
            let gap = system.distance(&trace.gx[n], &trace.gx[m]);
            let cauchy: f64 = powers[n.min(m)..m].iter().sum();
            holds &= observed <= bound + BOUND_SLACK && gap <= cauchy + BOUND_SLACK;
            BoundRow {
                n,
                observed,
                bound,
                gap,
                cauchy,
            }
        })
        .collect();
    BoundsReport { rows, holds }
}

/// Upgrades a coincidence point `w` to the common fixed point `z = g w` when
/// `T` and `g` commute at `w`.
pub fn promote_to_common_fixed_point<S: CoincidenceSystem>(
    system: &S,
    w: &S::Point,
    tol: f64,
) -> Certificate<S::Point> {
    let gw = system.apply_g(w);
    let tw = system.apply_t(w);
    let violation = |point: S::Point, residual: f64, note: String| Certificate {
        kind: CertificateKind::Violation,
        point,
        residual,
        note,
    };
    let r = system.distance(&gw, &tw);
    if r > tol {
        return violation(w.clone(), r, "d(gw, Tw) exceeds tolerance".to_string());
    }
    let commute = system.distance(&system.apply_t(&gw), &system.apply_g(&tw));
    if commute > tol {
        return violation(
            w.clone(),
            commute,
            "T(gw) != g(Tw): no commutation at w".to_string(),
        );
    }
    let z = gw;
    let dz_t = system.distance(&z, &system.apply_t(&z));
    if dz_t > tol {
        return violation(z, dz_t, "Tz != z".to_string());
    }
    let dz_g = system.distance(&z, &system.apply_g(&z));
    if dz_g > tol {
        return violation(z, dz_g, "gz != z".to_string());
    }
    Certificate {
        kind: CertificateKind::CommonFixedPoint,
        point: z,
        residual: dz_t.max(dz_g),
        note: "z = gw with Tz = gz = z".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step_fixture() -> (FiniteMetricSpace, MappingPair, Relation) {
        let labels = ["0", "0.5", "1", "2"].map(String::from).to_vec();
        let space =
            FiniteMetricSpace::from_coordinates(labels, &[0.0, 0.5, 1.0, 2.0], vec![0, 2]).unwrap();
        let pair = MappingPair::new(4, vec![0, 0, 0, 2], vec![0, 0, 2, 3]).unwrap();
        let r = Relation::new(4, [(0, 0), (2, 2), (3, 3), (0, 2), (0, 3), (2, 3)]).unwrap();
        (space, pair, r)
    }

    #[test]
    fn preimages_are_least_index() {
        let (_, pair, _) = step_fixture();
        assert_eq!(pair.preimage(0), Some(0));
        assert_eq!(pair.preimage(1), None);
        assert_eq!(pair.g_image(), vec![0, 2, 3]);
        assert_eq!(pair.t_image(), vec![0, 2]);
        assert!(MappingPair::new(2, vec![0, 2], vec![0, 1]).is_err());
        assert!(MappingPair::new(2, vec![0], vec![0, 1]).is_err());
    }

    #[test]
    fn start_point_and_immediate_coincidence() {
        let (space, pair, r) = step_fixture();
        assert_eq!(find_start(&pair, &r), Some(0));
        assert_eq!(start_set(&pair, &r), vec![0, 1]);
        let sys = FiniteSystem {
            space: &space,
            pair: &pair,
        };
        let (trace, cert) = iterate(&sys, 1, DEFAULT_TOL_FINITE, 10).unwrap();
        assert_eq!(cert.kind, CertificateKind::Coincidence);
        assert_eq!((cert.point, cert.residual, trace.steps()), (1, 0.0, 0));
    }

    #[test]
    fn iteration_from_the_top() {
        let (space, pair, _) = step_fixture();
        let sys = FiniteSystem {
            space: &space,
            pair: &pair,
        };
        let (trace, cert) = iterate(&sys, 3, DEFAULT_TOL_FINITE, 10).unwrap();
        // coordinates: g(2) = 2, T(2) = 1 -> x1 = 1; g(1) = 1, T(1) = 0 -> x2 = 0
        assert_eq!(trace.x, vec![3, 2, 0]);
        assert_eq!(trace.residuals, vec![1.0, 1.0, 0.0]);
        assert_eq!(cert.point, 0);
        let promoted = promote_to_common_fixed_point(&sys, &cert.point, DEFAULT_TOL_FINITE);
        assert_eq!(promoted.kind, CertificateKind::CommonFixedPoint);
        assert_eq!(promoted.point, 0);
    }

    #[test]
    fn missing_preimage_names_the_point() {
        let space = FiniteMetricSpace::from_coordinates(
            vec!["a".into(), "b".into()],
            &[0.0, 1.0],
            vec![0, 1],
        )
        .unwrap();
        let pair = MappingPair::new(2, vec![1, 1], vec![0, 0]).unwrap();
        let sys = FiniteSystem {
            space: &space,
            pair: &pair,
        };
        let err = iterate(&sys, 0, 1e-10, 5).unwrap_err();
        assert_eq!(
            err.to_string(),
            "hypothesis (b) violated at a: T-image has no g-preimage"
        );
    }

    #[test]
    fn identity_pair_promotes_everywhere() {
        let (space, _, _) = step_fixture();
        let pair = MappingPair::new(4, (0..4).collect(), (0..4).collect()).unwrap();
        let sys = FiniteSystem {
            space: &space,
            pair: &pair,
        };
        for x in 0..4 {
            let (_, c) = iterate(&sys, x, 1e-10, 1).unwrap();
            assert_eq!(c.point, x);
            let p = promote_to_common_fixed_point(&sys, &x, 1e-10);
            assert_eq!((p.kind, p.point), (CertificateKind::CommonFixedPoint, x));
        }
    }

    #[test]
    fn non_commuting_coincidence_is_a_violation() {
        let space = FiniteMetricSpace::from_coordinates(
            vec!["a".into(), "b".into(), "c".into()],
            &[0.0, 1.0, 2.0],
            vec![0, 1, 2],
        )
        .unwrap();
        // g0 = T0 = 1, but T1 = 2 while g1 = 0
        let pair = MappingPair::new(3, vec![1, 2, 2], vec![1, 0, 2]).unwrap();
        let sys = FiniteSystem {
            space: &space,
            pair: &pair,
        };
        let c = promote_to_common_fixed_point(&sys, &0, 1e-12);
        assert_eq!(c.kind, CertificateKind::Violation);
        assert!(c.note.contains("commutation"));
    }

    /// `T x = x / 2` on `{0} ∪ {2^-j}`, g the identity.
    struct Halving;

    impl CoincidenceSystem for Halving {
        type Point = f64;
        fn apply_t(&self, x: &f64) -> f64 {
            x / 2.0
        }
        fn apply_g(&self, x: &f64) -> f64 {
            *x
        }
        fn g_preimage(&self, y: &f64) -> Option<f64> {
            Some(*y)
        }
        fn distance(&self, a: &f64, b: &f64) -> f64 {
            (a - b).abs()
        }
        fn describe(&self, x: &f64) -> String {
            x.to_string()
        }
    }

    #[test]
    fn halving_residuals_meet_the_bound_exactly() {
        let (trace, cert) = iterate(&Halving, 1.0, 2f64.powi(-8), 100).unwrap();
        assert_eq!(cert.residual, 2f64.powi(-8));
        for (n, r) in trace.residuals.iter().enumerate() {
            assert_eq!(*r, 2f64.powi(-(n as i32) - 1));
        }
        let report = error_bounds(&Halving, &trace, &ComparisonFunction::linear(0.5));
        assert!(report.holds);
        assert!(report.rows.iter().all(|row| row.observed == row.bound));
        assert!(report.rows.iter().all(|row| row.gap == row.cauchy));
    }

    #[test]
    fn too_weak_phi_is_flagged() {
        let (trace, _) = iterate(&Halving, 1.0, 2f64.powi(-8), 100).unwrap();
        let report = error_bounds(&Halving, &trace, &ComparisonFunction::linear(0.4));
        assert!(!report.holds);
    }

    #[test]
    fn non_convergence_keeps_history() {
        let err = iterate(&Halving, 1.0, 0.0, 3).unwrap_err();
        match err {
            SolveError::NonConvergence { steps, residuals } => {
                assert_eq!(steps, 3);
                assert_eq!(residuals.len(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
