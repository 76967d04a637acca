//! Exhaustive hypothesis checks on finite instances.
//!
//! Every predicate here is decided by full enumeration. Hypotheses that hold
//! on all finite spaces (completeness, self-closedness, continuity) are
//! reported as holding with the reason attached.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{
    check_g1, check_g2, check_g3, ConditionReport, Corollary3, Grid, ImplicitRelation,
};
use crate::metric::{
    finite_d_self_closed, finite_r_completeness, FiniteMetricSpace, MetricViolation,
};
use crate::parallel;
use crate::relation::{
    complete_violation, find_g_path, g_directedness, tg_closed_violation, Relation,
};
use crate::solver::{find_start, MappingPair};

/// Contraction values at or below this count as `G ≤ 0`.
pub const CONTRACTION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("metric axiom violated: {0}")]
    Metric(MetricViolation),
    #[error("instance sizes disagree: space has {space} points, maps {maps}, relation {relation}")]
    Size {
        space: usize,
        maps: usize,
        relation: usize,
    },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    /// Taken on the user's word.
    Asserted,
    NotApplicable,
    /// Holds on every sample checked; not a proof.
    Sampled,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    /// Whether the status may license a conclusion.
    pub fn accepted(self) -> bool {
        matches!(self, Status::Holds | Status::Asserted | Status::Sampled)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Asserted => "asserted",
            Status::NotApplicable => "not-applicable",
            Status::Sampled => "holds-on-samples",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Hypothesis {
    A,
    B,
    C,
    D,
    YComplete,
    G1,
    G2,
    G3,
    E1,
    E2GRContinuous,
    E2Continuous,
    E2SelfClosed,
    E1Prime,
    E2Prime,
    U1,
    U1Weak,
    U1Prime,
    U1DoublePrime,
    U2,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 19] = [
        Hypothesis::A,
        Hypothesis::B,
        Hypothesis::C,
        Hypothesis::D,
        Hypothesis::YComplete,
        Hypothesis::G1,
        Hypothesis::G2,
        Hypothesis::G3,
        Hypothesis::E1,
        Hypothesis::E2GRContinuous,
        Hypothesis::E2Continuous,
        Hypothesis::E2SelfClosed,
        Hypothesis::E1Prime,
        Hypothesis::E2Prime,
        Hypothesis::U1,
        Hypothesis::U1Weak,
        Hypothesis::U1Prime,
        Hypothesis::U1DoublePrime,
        Hypothesis::U2,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Hypothesis::A => "a",
            Hypothesis::B => "b",
            Hypothesis::C => "c",
            Hypothesis::D => "d",
            Hypothesis::YComplete => "Y-complete",
            Hypothesis::G1 => "G1",
            Hypothesis::G2 => "G2",
            Hypothesis::G3 => "G3",
            Hypothesis::E1 => "e1",
            Hypothesis::E2GRContinuous => "e2:gR-continuous",
            Hypothesis::E2Continuous => "e2:continuous",
            Hypothesis::E2SelfClosed => "e2:self-closed",
            Hypothesis::E1Prime => "e1'",
            Hypothesis::E2Prime => "e2'",
            Hypothesis::U1 => "u1",
            Hypothesis::U1Weak => "u1~",
            Hypothesis::U1Prime => "u1'",
            Hypothesis::U1DoublePrime => "u1''",
            Hypothesis::U2 => "u2",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Hypothesis::A => "some x0 has (gx0, Tx0) in R",
            Hypothesis::B => "T(X) is inside Y and g(X)",
            Hypothesis::C => "R is (T,g)-closed",
            Hypothesis::D => "G(...) <= 0 whenever (gx, gy) in R",
            Hypothesis::YComplete => "Y is R-complete",
            Hypothesis::G1 => "G decreasing in r5, r6 and G(r,s,s,r,r+s,0) <= 0 => r <= phi(s)",
            Hypothesis::G2 => "G(r,0,r,0,0,r) > 0",
            Hypothesis::G3 => "G(r,r,0,0,r,r) > 0",
            Hypothesis::E1 => "Y is inside g(X)",
            Hypothesis::E2GRContinuous => "T is (g,R)-continuous",
            Hypothesis::E2Continuous => "T and g are continuous",
            Hypothesis::E2SelfClosed => "R restricted to Y is d-self-closed",
            Hypothesis::E1Prime => "T and g are R-compatible",
            Hypothesis::E2Prime => "T and g are R-continuous",
            Hypothesis::U1 => "g-paths with [gw,Tw] in R join all of T(X) in R|g(X)^s",
            Hypothesis::U1Weak => "plain g-paths join all of T(X) in R^s",
            Hypothesis::U1Prime => "R restricted to g(X) is complete",
            Hypothesis::U1DoublePrime => {
                "T(X) is (g,R|g(X)^s)-directed and Delta is inside X(T,g,R^s)"
            }
            Hypothesis::U2 => "T and g commute at coincidence points",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub hypothesis: Hypothesis,
    pub status: Status,
    pub witness: Option<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rank {
    None,
    Coincidence,
    PointOfCoincidenceUnique,
    CommonFixedPointUnique,
}

impl Rank {
    pub fn as_str(self) -> &'static str {
        match self {
            Rank::None => "none",
            Rank::Coincidence => "coincidence",
            Rank::PointOfCoincidenceUnique => "point-of-coincidence-unique",
            Rank::CommonFixedPointUnique => "common-fixed-point-unique",
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which contractive condition an instance asserts.
#[derive(Debug, Clone, PartialEq)]
pub enum Contraction {
    Implicit(ImplicitRelation),
    Explicit(Corollary3),
}

impl Contraction {
    pub fn relation(&self) -> ImplicitRelation {
        match self {
            Contraction::Implicit(g) => g.clone(),
            Contraction::Explicit(c) => c.implicit(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteInstance {
    pub space: FiniteMetricSpace,
    pub pair: MappingPair,
    pub relation: Relation,
    pub contraction: Contraction,
}

/// `(d(Tx,Ty), d(gx,gy), d(gx,Tx), d(gy,Ty), d(gx,Ty), d(gy,Tx))`.
pub fn distance_tuple(
    space: &FiniteMetricSpace,
    pair: &MappingPair,
    x: usize,
    y: usize,
) -> [f64; 6] {
    let (t, g) = (pair.t(), pair.g());
    [
        space.d(t[x], t[y]),
        space.d(g[x], g[y]),
        space.d(g[x], t[x]),
        space.d(g[y], t[y]),
        space.d(g[x], t[y]),
        space.d(g[y], t[x]),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairValue {
    pub x: usize,
    pub y: usize,
    pub value: f64,
    pub args: [f64; 6],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionCheck {
    pub holds: bool,
    /// Pairs with `(gx, gy) ∈ R`.
    pub checked: usize,
    /// Pair with the largest value, least pair on ties.
    pub worst: Option<PairValue>,
    /// Same, restricted to pairs with `d(Tx, Ty) > 0`.
    pub worst_moving: Option<PairValue>,
}

fn scan_contraction<V>(
    space: &FiniteMetricSpace,
    pair: &MappingPair,
    r: &Relation,
    value: V,
) -> ContractionCheck
where
    V: Fn(&[f64; 6]) -> f64 + Sync,
{
    let g = pair.g();
    let n = space.len();
    let at = |x: usize, y: usize| value(&distance_tuple(space, pair, x, y));
    let wrap = |best: parallel::BestPair| {
        best.map(|((x, y), v)| PairValue {
            x,
            y,
            value: v,
            args: distance_tuple(space, pair, x, y),
        })
    };
    let (worst, checked) = parallel::max_pair(n, |x, y| r.contains(g[x], g[y]), at);
    let (moving, _) = parallel::max_pair(
        n,
        |x, y| r.contains(g[x], g[y]) && space.d(pair.t()[x], pair.t()[y]) > 0.0,
        at,
    );
    let worst = wrap(worst);
    ContractionCheck {
        holds: worst.as_ref().is_none_or(|w| w.value <= CONTRACTION_TOL),
        checked,
        worst,
        worst_moving: wrap(moving),
    }
}

/// Evaluates `G` on every pair with `(gx, gy) ∈ R`.
pub fn check_contraction(
    space: &FiniteMetricSpace,
    pair: &MappingPair,
    r: &Relation,
    g: &ImplicitRelation,
) -> ContractionCheck {
    scan_contraction(space, pair, r, |args| g.value(args))
}

/// Same scan with an explicit inequality; the value is `lhs - rhs`.
pub fn check_contraction_explicit(
    space: &FiniteMetricSpace,
    pair: &MappingPair,
    r: &Relation,
    c: &Corollary3,
) -> ContractionCheck {
    scan_contraction(space, pair, r, |args| {
        let (lhs, rhs) = c.sides(args);
        lhs - rhs
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoincidenceSets {
    /// `C(T, g)`.
    pub points: Vec<usize>,
    /// `{gx : x ∈ C(T, g)}`.
    pub values: Vec<usize>,
    /// `{z : z = Tz = gz}`.
    pub common_fixed_points: Vec<usize>,
}

pub fn brute_force_coincidence(pair: &MappingPair) -> CoincidenceSets {
    let (t, g) = (pair.t(), pair.g());
    let points: Vec<usize> = (0..pair.len()).filter(|&x| t[x] == g[x]).collect();
    let mut values: Vec<usize> = points.iter().map(|&x| g[x]).collect();
    values.sort_unstable();
    values.dedup();
    let common_fixed_points = (0..pair.len())
        .filter(|&z| t[z] == z && g[z] == z)
        .collect();
    CoincidenceSets {
        points,
        values,
        common_fixed_points,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathEntry {
    pub alpha: usize,
    pub beta: usize,
    pub witnesses: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathCheck {
    pub holds: bool,
    pub table: Vec<PathEntry>,
}

fn g_image_mask(pair: &MappingPair) -> Vec<bool> {
    let mut mask = vec![false; pair.len()];
    for &v in pair.g() {
        mask[v] = true;
    }
    mask
}

/// g-paths between every ordered pair of `T(X)`. With `interior` set the
/// search runs in `R|g(X)` and demands `[gw, Tw] ∈ R` at interior
/// witnesses; without it, plain g-paths in `Rˢ`.
pub fn check_u1(pair: &MappingPair, r: &Relation, interior: bool) -> PathCheck {
    let restricted = if interior {
        r.restricted(&g_image_mask(pair)).ok()
    } else {
        Some(r.clone())
    };
    let images = pair.t_image();
    let mut table = Vec::new();
    for &alpha in &images {
        for &beta in &images {
            let witnesses = restricted.as_ref().and_then(|rel| {
                find_g_path(
                    rel,
                    pair.g(),
                    pair.t(),
                    alpha,
                    beta,
                    interior,
                    pair.len().max(1),
                )
                .ok()
                .flatten()
                .map(|p| p.witnesses)
            });
            table.push(PathEntry {
                alpha,
                beta,
                witnesses,
            });
        }
    }
    PathCheck {
        holds: table.iter().all(|e| e.witnesses.is_some()),
        table,
    }
}

/// `(u1')`: `R|g(X)` complete. Returns the first incomparable pair.
pub fn check_u1_prime(pair: &MappingPair, r: &Relation) -> Option<(usize, usize)> {
    complete_violation(r, &pair.g_image())
}

/// `(u1'')`: `T(X)` is `(g, R|g(X)ˢ)`-directed and every `z` in
/// `Δ(T(X), g, Rˢ)` has `[gz, Tz] ∈ R`. Returns a failure description.
pub fn check_u1_double_prime(pair: &MappingPair, r: &Relation) -> Result<(), String> {
    let images = pair.t_image();
    let restricted = r
        .restricted(&g_image_mask(pair))
        .map_err(|_| "R has no edges inside g(X)".to_string())?;
    let directed = g_directedness(&images, pair.g(), &restricted.symmetric_closure());
    if let Some(&(x, y, _)) = directed.witnesses.iter().find(|w| w.2.is_none()) {
        return Err(format!("no common g-upper point for ({x}, {y})"));
    }
    let delta = g_directedness(&images, pair.g(), &r.symmetric_closure()).delta;
    match delta
        .iter()
        .find(|&&z| !r.comparable(pair.g()[z], pair.t()[z]))
    {
        Some(z) => Err(format!("{z} is in Delta but [gz, Tz] is not in R")),
        None => Ok(()),
    }
}

/// R-compatibility on a finite space. An R-preserving pair of sequences with
/// a common limit is eventually constant at some point of coincidence `v`
/// with `(v, v) ∈ R`, and every such `v` is reached by a constant sequence;
/// compatibility therefore reduces to `g v = T v` at those `v`.
pub fn compatibility_violation(pair: &MappingPair, r: &Relation) -> Option<usize> {
    let (t, g) = (pair.t(), pair.g());
    brute_force_coincidence(pair)
        .values
        .into_iter()
        .find(|&v| r.contains(v, v) && g[v] != t[v])
}

/// `(g, R)`-continuity on a finite space. An R-preserving sequence with
/// `g x_n → g x` eventually stays in the fibre `g⁻¹(gx)` and cycles through
/// a closed R-walk there, so T must be constant on every fibre that carries
/// a closed walk. Returns two points of such a fibre with different T-values.
pub fn gr_continuity_violation(pair: &MappingPair, r: &Relation) -> Option<(usize, usize)> {
    let (t, g) = (pair.t(), pair.g());
    for y in pair.g_image() {
        let fibre: Vec<usize> = (0..pair.len()).filter(|&x| g[x] == y).collect();
        let m = fibre.len();
        let mut reach = vec![false; m * m];
        for (i, &a) in fibre.iter().enumerate() {
            for (j, &b) in fibre.iter().enumerate() {
                reach[i * m + j] = r.contains(a, b);
            }
        }
        for k in 0..m {
            for i in 0..m {
                if reach[i * m + k] {
                    for j in 0..m {
                        if reach[k * m + j] {
                            reach[i * m + j] = true;
                        }
                    }
                }
            }
        }
        let cyclic = (0..m).any(|i| reach[i * m + i]);
        if cyclic {
            if let Some(&b) = fibre.iter().find(|&&b| t[b] != t[fibre[0]]) {
                return Some((fibre[0], b));
            }
        }
    }
    None
}

/// Points `w ∈ C(T, g)` with `T(gw) ≠ g(Tw)`.
pub fn commutation_violation(pair: &MappingPair) -> Option<usize> {
    let (t, g) = (pair.t(), pair.g());
    brute_force_coincidence(pair)
        .points
        .into_iter()
        .find(|&w| t[g[w]] != g[t[w]])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub verdicts: Vec<Verdict>,
    pub rank: Rank,
    pub start: Option<usize>,
    #[serde(skip)]
    pub contraction: Option<ContractionCheck>,
    #[serde(skip)]
    pub conditions: Vec<ConditionReport>,
    pub coincidence: Option<CoincidenceSets>,
    pub paths: Option<PathCheck>,
}

impl VerificationReport {
    pub fn status(&self, h: Hypothesis) -> Status {
        self.verdicts
            .iter()
            .find(|v| v.hypothesis == h)
            .map_or(Status::NotApplicable, |v| v.status)
    }

    pub fn verdict(&self, h: Hypothesis) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.hypothesis == h)
    }
}

/// The conclusion licensed by a set of verdicts.
///
/// Existence needs (a)–(d), the first two conditions on G, completeness of
/// Y, and either (e) or (e'). Uniqueness of the point of coincidence adds a
/// path hypothesis and the third condition; commutation then yields a unique
/// common fixed point.
pub fn conclusion_rank(status: impl Fn(Hypothesis) -> Status) -> Rank {
    use Hypothesis as H;
    let ok = |h| status(h).accepted();
    let base = [H::A, H::B, H::C, H::D, H::YComplete, H::G1, H::G2]
        .into_iter()
        .all(ok);
    let e = ok(H::E1) && (ok(H::E2GRContinuous) || ok(H::E2Continuous) || ok(H::E2SelfClosed));
    let e_prime = ok(H::E1Prime) && ok(H::E2Prime);
    if !(base && (e || e_prime)) {
        return Rank::None;
    }
    let paths = ok(H::U1) || ok(H::U1Weak) || ok(H::U1Prime) || ok(H::U1DoublePrime);
    if !(paths && ok(H::G3)) {
        return Rank::Coincidence;
    }
    if !ok(H::U2) {
        return Rank::PointOfCoincidenceUnique;
    }
    Rank::CommonFixedPointUnique
}

fn holds_or(status: bool, witness: impl FnOnce() -> String) -> (Status, Option<String>) {
    if status {
        (Status::Holds, None)
    } else {
        (Status::Fails, Some(witness()))
    }
}

/// Decides every hypothesis on a finite instance and assigns the conclusion
/// rank, cross-checked against brute-force enumeration.
pub fn verify(inst: &FiniteInstance) -> Result<VerificationReport, VerifyError> {
    let FiniteInstance {
        space,
        pair,
        relation: r,
        contraction,
    } = inst;
    let n = space.len();
    if pair.len() != n || r.len() != n {
        return Err(VerifyError::Size {
            space: n,
            maps: pair.len(),
            relation: r.len(),
        });
    }
    space.validate().map_err(VerifyError::Metric)?;
    let label = |i: usize| space.label(i).to_string();
    let (t, g) = (pair.t(), pair.g());
    let implicit = contraction.relation();
    let mut verdicts = Vec::new();
    let mut push =
        |h: Hypothesis, (status, witness): (Status, Option<String>), note: Option<String>| {
            verdicts.push(Verdict {
                hypothesis: h,
                status,
                witness,
                note,
            })
        };

    let start = find_start(pair, r);
    push(
        Hypothesis::A,
        match start {
            Some(x0) => (Status::Holds, Some(format!("x0 = {}", label(x0)))),
            None => (Status::Fails, Some("no x with (gx, Tx) in R".into())),
        },
        None,
    );

    let g_mask = g_image_mask(pair);
    let bad_b = (0..n).find(|&x| !space.in_subspace(t[x]) || !g_mask[t[x]]);
    push(
        Hypothesis::B,
        holds_or(bad_b.is_none(), || {
            let x = bad_b.unwrap_or_default();
            format!("T({}) = {} is outside Y or g(X)", label(x), label(t[x]))
        }),
        None,
    );

    let bad_c = tg_closed_violation(r, t, g);
    push(
        Hypothesis::C,
        holds_or(bad_c.is_none(), || {
            let (x, y) = bad_c.unwrap_or_default();
            format!(
                "(g{0}, g{1}) in R but (T{0}, T{1}) not in R",
                label(x),
                label(y)
            )
        }),
        None,
    );

    let contraction_check = match contraction {
        Contraction::Implicit(g_rel) => check_contraction(space, pair, r, g_rel),
        Contraction::Explicit(c) => check_contraction_explicit(space, pair, r, c),
    };
    let worst_note = contraction_check.worst.as_ref().map(|w| {
        format!(
            "max value {:.6} at ({}, {})",
            w.value,
            label(w.x),
            label(w.y)
        )
    });
    push(
        Hypothesis::D,
        holds_or(contraction_check.holds, || {
            let w = contraction_check
                .worst
                .as_ref()
                .expect("a failing scan has a worst pair");
            format!("({}, {}) gives {:.6} > 0", label(w.x), label(w.y), w.value)
        }),
        worst_note,
    );

    push(
        Hypothesis::YComplete,
        (
            Status::from_bool(finite_r_completeness(space, r).holds),
            None,
        ),
        Some(finite_r_completeness(space, r).reason.to_string()),
    );

    let grid = Grid::standard();
    let declared = implicit.declared();
    let conditions = vec![
        check_g1(&implicit, &grid),
        check_g2(&implicit, &grid),
        check_g3(&implicit, &grid),
    ];
    for (h, report, claimed) in [
        (Hypothesis::G1, &conditions[0], declared.g1),
        (Hypothesis::G2, &conditions[1], declared.g2),
        (Hypothesis::G3, &conditions[2], declared.g3),
    ] {
        let note = match (claimed, report.holds) {
            (true, true) => None,
            (false, false) => Some("not claimed by the form".to_string()),
            (true, false) => Some("claimed by the form but refuted on the grid".to_string()),
            (false, true) => Some("passes the grid but is not claimed by the form".to_string()),
        };
        push(
            h,
            holds_or(claimed && report.holds, || {
                report
                    .detail
                    .clone()
                    .unwrap_or_else(|| "not claimed".into())
            }),
            note,
        );
    }

    let bad_e1 = space.subspace().iter().copied().find(|&y| !g_mask[y]);
    push(
        Hypothesis::E1,
        holds_or(bad_e1.is_none(), || {
            format!(
                "{} is in Y but not in g(X)",
                label(bad_e1.unwrap_or_default())
            )
        }),
        None,
    );

    let bad_gr = gr_continuity_violation(pair, r);
    push(
        Hypothesis::E2GRContinuous,
        holds_or(bad_gr.is_none(), || {
            let (a, b) = bad_gr.unwrap_or_default();
            format!(
                "fibre of g through {} and {} carries a closed R-walk but T differs",
                label(a),
                label(b)
            )
        }),
        None,
    );
    push(
        Hypothesis::E2Continuous,
        (Status::Holds, None),
        Some("every map on a finite metric space is continuous".into()),
    );
    let self_closed = finite_d_self_closed(space, r, space.subspace());
    push(
        Hypothesis::E2SelfClosed,
        (Status::from_bool(self_closed.holds), None),
        Some(self_closed.reason.to_string()),
    );

    let bad_compat = compatibility_violation(pair, r);
    push(
        Hypothesis::E1Prime,
        holds_or(bad_compat.is_none(), || {
            format!(
                "point of coincidence {} has (v, v) in R but gv != Tv",
                label(bad_compat.unwrap_or_default())
            )
        }),
        Some("convergent R-preserving sequences are eventually constant".into()),
    );
    push(
        Hypothesis::E2Prime,
        (Status::Holds, None),
        Some("convergent sequences in a finite space are eventually constant".into()),
    );

    let paths = check_u1(pair, r, true);
    let first_missing = |check: &PathCheck| {
        check
            .table
            .iter()
            .find(|e| e.witnesses.is_none())
            .map(|e| format!("no g-path from {} to {}", label(e.alpha), label(e.beta)))
            .unwrap_or_default()
    };
    push(
        Hypothesis::U1,
        holds_or(paths.holds, || first_missing(&paths)),
        None,
    );
    if implicit.admits_weak_uniqueness() {
        let weak = check_u1(pair, r, false);
        push(
            Hypothesis::U1Weak,
            holds_or(weak.holds, || first_missing(&weak)),
            None,
        );
    } else {
        push(
            Hypothesis::U1Weak,
            (Status::NotApplicable, None),
            Some("only for the plain k d(gx,gy) and phi(d(gx,gy)) contractions".into()),
        );
    }
    let bad_u1p = check_u1_prime(pair, r);
    push(
        Hypothesis::U1Prime,
        holds_or(bad_u1p.is_none(), || {
            let (a, b) = bad_u1p.unwrap_or_default();
            format!("{} and {} are incomparable", label(a), label(b))
        }),
        Some("implies u1".into()),
    );
    let u1pp = check_u1_double_prime(pair, r);
    push(
        Hypothesis::U1DoublePrime,
        holds_or(u1pp.is_ok(), || u1pp.clone().unwrap_err()),
        Some("implies u1".into()),
    );

    let bad_u2 = commutation_violation(pair);
    push(
        Hypothesis::U2,
        holds_or(bad_u2.is_none(), || {
            let w = bad_u2.unwrap_or_default();
            format!("T(g{0}) != g(T{0})", label(w))
        }),
        None,
    );

    let rank = conclusion_rank(|h| {
        verdicts
            .iter()
            .find(|v| v.hypothesis == h)
            .map_or(Status::NotApplicable, |v| v.status)
    });
    let sets = brute_force_coincidence(pair);
    cross_check(rank, &sets)?;
    Ok(VerificationReport {
        verdicts,
        rank,
        start,
        contraction: Some(contraction_check),
        conditions,
        coincidence: Some(sets),
        paths: Some(paths),
    })
}

fn cross_check(rank: Rank, sets: &CoincidenceSets) -> Result<(), VerifyError> {
    if rank >= Rank::Coincidence && sets.points.is_empty() {
        return Err(VerifyError::Inconsistent(
            "existence licensed but no coincidence point exists".into(),
        ));
    }
    if rank >= Rank::PointOfCoincidenceUnique && sets.values.len() != 1 {
        return Err(VerifyError::Inconsistent(format!(
            "uniqueness licensed but there are {} points of coincidence",
            sets.values.len()
        )));
    }
    if rank == Rank::CommonFixedPointUnique && sets.common_fixed_points.len() != 1 {
        return Err(VerifyError::Inconsistent(format!(
            "unique common fixed point licensed but there are {}",
            sets.common_fixed_points.len()
        )));
    }
    Ok(())
}
