//! Instances on real intervals, checked on a finite sample of points.
//!
//! Verdicts that quantify over the whole interval are reported as holding on
//! samples; properties that no sample can decide (continuity, compatibility,
//! self-closedness) come from user assertions.

use serde::{Deserialize, Serialize};

use crate::catalog::{check_g1, check_g2, check_g3, Grid, ImplicitRelation};
use crate::solver::CoincidenceSystem;
use crate::verify::{
    conclusion_rank, Hypothesis, Status, Verdict, VerificationReport, CONTRACTION_TOL,
};

/// Tolerance for equality of real values.
pub const EQ_TOL: f64 = 1e-12;

/// Points of `Y` probed for `Y ⊆ g(X)`.
const SUBSPACE_PROBES: usize = 101;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RealMap {
    Constant {
        value: f64,
    },
    Identity,
    Square,
    Sqrt,
    /// `a x + b`
    Affine {
        a: f64,
        b: f64,
    },
    /// `Σ c_i xⁱ`, lowest degree first.
    Polynomial {
        coefficients: Vec<f64>,
    },
}

impl RealMap {
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            RealMap::Constant { value } => *value,
            RealMap::Identity => x,
            RealMap::Square => x * x,
            RealMap::Sqrt => x.sqrt(),
            RealMap::Affine { a, b } => a * x + b,
            RealMap::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
            }
        }
    }

    /// Inverse on the non-negative half-line where one exists in closed form.
    pub fn inverse(&self) -> Option<RealMap> {
        match *self {
            RealMap::Identity => Some(RealMap::Identity),
            RealMap::Square => Some(RealMap::Sqrt),
            RealMap::Sqrt => Some(RealMap::Square),
            RealMap::Affine { a, b } if a != 0.0 => Some(RealMap::Affine {
                a: 1.0 / a,
                b: -b / a,
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RealRelation {
    Universal,
    LessEq,
    Diagonal,
    /// `x ≤ y` and `y - x` an even integer.
    LeEvenDifference,
}

impl RealRelation {
    pub fn contains(self, a: f64, b: f64) -> bool {
        match self {
            RealRelation::Universal => true,
            RealRelation::LessEq => a <= b + EQ_TOL,
            RealRelation::Diagonal => (a - b).abs() <= EQ_TOL,
            RealRelation::LeEvenDifference => {
                let half = (b - a) / 2.0;
                a <= b + EQ_TOL && (half - half.round()).abs() <= EQ_TOL
            }
        }
    }

    pub fn comparable(self, a: f64, b: f64) -> bool {
        self.contains(a, b) || self.contains(b, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    #[serde(default)]
    pub lo_open: bool,
    #[serde(default)]
    pub hi_open: bool,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open {
            x > self.lo
        } else {
            x >= self.lo - EQ_TOL
        };
        let below = if self.hi_open {
            x < self.hi
        } else {
            x <= self.hi + EQ_TOL
        };
        above && below
    }

    pub fn is_closed(&self) -> bool {
        !self.lo_open && !self.hi_open && self.lo.is_finite() && self.hi.is_finite()
    }

    /// `count` evenly spaced points, pulled inside open ends.
    pub fn probes(&self, count: usize) -> Vec<f64> {
        let span = self.hi - self.lo;
        (0..count)
            .map(|i| self.lo + span * i as f64 / (count - 1).max(1) as f64)
            .filter(|&x| self.contains(x))
            .collect()
    }
}

/// Properties the user vouches for.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Assertions {
    pub g_r_continuous: bool,
    pub t_and_g_continuous: bool,
    pub y_d_self_closed: bool,
    pub r_compatible: bool,
    pub r_continuous: bool,
    pub y_r_complete: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledInstance {
    pub domain: Interval,
    pub subspace: Interval,
    pub t: RealMap,
    pub g: RealMap,
    pub g_inverse: Option<RealMap>,
    pub relation: RealRelation,
    pub contraction: ImplicitRelation,
    pub samples: Vec<f64>,
    pub assertions: Assertions,
}

impl SampledInstance {
    fn inverse(&self) -> Option<RealMap> {
        self.g_inverse.clone().or_else(|| self.g.inverse())
    }

    /// A domain point mapped onto `y` by g, if the inverse finds one.
    pub fn preimage(&self, y: f64) -> Option<f64> {
        let x = self.inverse()?.apply(y);
        (x.is_finite() && self.domain.contains(x) && (self.g.apply(x) - y).abs() <= 1e-10)
            .then_some(x)
    }

    /// Samples inside the domain together with the preimages of their
    /// T-images, sorted and deduplicated.
    pub fn points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .samples
            .iter()
            .copied()
            .filter(|&x| self.domain.contains(x))
            .collect();
        let extra: Vec<f64> = pts
            .iter()
            .filter_map(|&x| self.preimage(self.t.apply(x)))
            .collect();
        pts.extend(extra);
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() <= EQ_TOL);
        pts
    }

    fn tuple(&self, x: f64, y: f64) -> [f64; 6] {
        let (tx, ty, gx, gy) = (
            self.t.apply(x),
            self.t.apply(y),
            self.g.apply(x),
            self.g.apply(y),
        );
        [
            (tx - ty).abs(),
            (gx - gy).abs(),
            (gx - tx).abs(),
            (gy - ty).abs(),
            (gx - ty).abs(),
            (gy - tx).abs(),
        ]
    }
}

pub struct SampledSystem<'a>(pub &'a SampledInstance);

impl CoincidenceSystem for SampledSystem<'_> {
    type Point = f64;

    fn apply_t(&self, x: &f64) -> f64 {
        self.0.t.apply(*x)
    }

    fn apply_g(&self, x: &f64) -> f64 {
        self.0.g.apply(*x)
    }

    fn g_preimage(&self, y: &f64) -> Option<f64> {
        self.0.preimage(*y)
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        (a - b).abs()
    }

    fn describe(&self, x: &f64) -> String {
        format!("{x}")
    }
}

fn dedup_values(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= EQ_TOL);
    v
}

/// Breadth-first g-path search over sample points.
fn sampled_path(
    inst: &SampledInstance,
    pts: &[f64],
    alpha: f64,
    beta: f64,
    interior: bool,
) -> Option<usize> {
    let rel = inst.relation;
    let g: Vec<f64> = pts.iter().map(|&p| inst.g.apply(p)).collect();
    let t: Vec<f64> = pts.iter().map(|&p| inst.t.apply(p)).collect();
    let mut depth: Vec<Option<usize>> = vec![None; pts.len()];
    let mut queue = std::collections::VecDeque::new();
    for i in 0..pts.len() {
        if (g[i] - alpha).abs() <= EQ_TOL {
            depth[i] = Some(0);
            queue.push_back(i);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = depth[u].expect("queued vertices have a depth");
        for v in 0..pts.len() {
            if !rel.comparable(g[u], g[v]) {
                continue;
            }
            if (g[v] - beta).abs() <= EQ_TOL {
                return Some(du + 1);
            }
            if depth[v].is_none() && (!interior || rel.comparable(g[v], t[v])) {
                depth[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    None
}

fn sampled_or(ok: bool, witness: impl FnOnce() -> String) -> (Status, Option<String>) {
    if ok {
        (Status::Sampled, None)
    } else {
        (Status::Fails, Some(witness()))
    }
}

fn asserted(flag: bool) -> (Status, Option<String>) {
    if flag {
        (Status::Asserted, None)
    } else {
        (Status::NotApplicable, Some("not asserted".into()))
    }
}

/// Checks every hypothesis on the sample points. Only existence of a start
/// point is decided exactly; the rank is licensed on samples.
pub fn verify_sampled(inst: &SampledInstance) -> VerificationReport {
    let pts = inst.points();
    let rel = inst.relation;
    let (t, g) = (&inst.t, &inst.g);
    let mut verdicts = Vec::new();
    let mut push = |h, (status, witness): (Status, Option<String>), note: Option<&str>| {
        verdicts.push(Verdict {
            hypothesis: h,
            status,
            witness,
            note: note.map(str::to_string),
        })
    };

    let start = pts
        .iter()
        .copied()
        .find(|&x| rel.contains(g.apply(x), t.apply(x)));
    push(
        Hypothesis::A,
        match start {
            Some(x) => (Status::Holds, Some(format!("x0 = {x}"))),
            None => (Status::Fails, Some("no sample x with (gx, Tx) in R".into())),
        },
        None,
    );

    let bad_b = pts.iter().copied().find(|&x| {
        let tx = t.apply(x);
        !inst.subspace.contains(tx) || inst.preimage(tx).is_none()
    });
    push(
        Hypothesis::B,
        sampled_or(bad_b.is_none(), || {
            format!("T({}) is outside Y or g(X)", bad_b.unwrap_or_default())
        }),
        None,
    );

    let pairs = || pts.iter().flat_map(|&x| pts.iter().map(move |&y| (x, y)));
    let bad_c = pairs().find(|&(x, y)| {
        rel.contains(g.apply(x), g.apply(y)) && !rel.contains(t.apply(x), t.apply(y))
    });
    push(
        Hypothesis::C,
        sampled_or(bad_c.is_none(), || {
            let (x, y) = bad_c.unwrap_or_default();
            format!("(g{x}, g{y}) in R but (T{x}, T{y}) not in R")
        }),
        None,
    );

    let worst = pairs()
        .filter(|&(x, y)| rel.contains(g.apply(x), g.apply(y)))
        .map(|(x, y)| (x, y, inst.contraction.value(&inst.tuple(x, y))))
        .fold(None, |best: Option<(f64, f64, f64)>, cur| match best {
            Some(b) if b.2 >= cur.2 => Some(b),
            _ => Some(cur),
        });
    let d_ok = worst.is_none_or(|w| w.2 <= CONTRACTION_TOL);
    push(
        Hypothesis::D,
        sampled_or(d_ok, || {
            let (x, y, v) = worst.unwrap_or_default();
            format!("({x}, {y}) gives {v:.6} > 0")
        }),
        None,
    );

    push(
        Hypothesis::YComplete,
        if inst.subspace.is_closed() {
            (Status::Holds, None)
        } else {
            asserted(inst.assertions.y_r_complete)
        },
        inst.subspace
            .is_closed()
            .then_some("closed bounded interval of the real line"),
    );

    let grid = Grid::standard();
    let declared = inst.contraction.declared();
    let mut conditions = Vec::new();
    for (h, report, claimed) in [
        (
            Hypothesis::G1,
            check_g1(&inst.contraction, &grid),
            declared.g1,
        ),
        (
            Hypothesis::G2,
            check_g2(&inst.contraction, &grid),
            declared.g2,
        ),
        (
            Hypothesis::G3,
            check_g3(&inst.contraction, &grid),
            declared.g3,
        ),
    ] {
        let ok = claimed && report.holds;
        let why = (!ok).then(|| {
            report
                .detail
                .clone()
                .unwrap_or_else(|| "not claimed".into())
        });
        push(h, (Status::from_bool(ok), why), None);
        conditions.push(report);
    }

    let bad_e1 = inst
        .subspace
        .probes(SUBSPACE_PROBES)
        .into_iter()
        .find(|&y| inst.preimage(y).is_none());
    push(
        Hypothesis::E1,
        sampled_or(bad_e1.is_none(), || {
            format!(
                "{} is in Y but has no g-preimage",
                bad_e1.unwrap_or_default()
            )
        }),
        None,
    );
    push(
        Hypothesis::E2GRContinuous,
        asserted(inst.assertions.g_r_continuous),
        None,
    );
    push(
        Hypothesis::E2Continuous,
        asserted(inst.assertions.t_and_g_continuous),
        None,
    );
    push(
        Hypothesis::E2SelfClosed,
        asserted(inst.assertions.y_d_self_closed),
        None,
    );
    push(
        Hypothesis::E1Prime,
        asserted(inst.assertions.r_compatible),
        None,
    );
    push(
        Hypothesis::E2Prime,
        asserted(inst.assertions.r_continuous),
        None,
    );

    let images = dedup_values(pts.iter().map(|&x| t.apply(x)).collect());
    let all_paths = |interior: bool| {
        images.iter().find_map(|&a| {
            images
                .iter()
                .find(|&&b| sampled_path(inst, &pts, a, b, interior).is_none())
                .map(|&b| format!("no g-path from {a} to {b}"))
        })
    };
    let missing = all_paths(true);
    push(
        Hypothesis::U1,
        sampled_or(missing.is_none(), || missing.clone().unwrap_or_default()),
        None,
    );
    if inst.contraction.admits_weak_uniqueness() {
        let missing = all_paths(false);
        push(
            Hypothesis::U1Weak,
            sampled_or(missing.is_none(), || missing.clone().unwrap_or_default()),
            None,
        );
    } else {
        push(Hypothesis::U1Weak, (Status::NotApplicable, None), None);
    }

    let g_values = dedup_values(pts.iter().map(|&x| g.apply(x)).collect());
    let incomparable = g_values.iter().enumerate().find_map(|(i, &a)| {
        g_values[i..]
            .iter()
            .find(|&&b| !rel.comparable(a, b))
            .map(|&b| (a, b))
    });
    push(
        Hypothesis::U1Prime,
        sampled_or(incomparable.is_none(), || {
            let (a, b) = incomparable.unwrap_or_default();
            format!("{a} and {b} are incomparable")
        }),
        Some("implies u1"),
    );

    let serves = |a: f64, z: f64| rel.comparable(a, g.apply(z));
    let mut directed_failure = None;
    let mut delta_failure = None;
    for (i, &a) in images.iter().enumerate() {
        for &b in &images[i..] {
            let zs: Vec<f64> = pts
                .iter()
                .copied()
                .filter(|&z| serves(a, z) && serves(b, z))
                .collect();
            if zs.is_empty() && directed_failure.is_none() {
                directed_failure = Some(format!("no common g-upper point for ({a}, {b})"));
            }
            if let Some(z) = zs
                .into_iter()
                .find(|&z| !rel.comparable(g.apply(z), t.apply(z)))
            {
                delta_failure.get_or_insert(format!("{z} is in Delta but [gz, Tz] is not in R"));
            }
        }
    }
    let u1pp = directed_failure.or(delta_failure);
    push(
        Hypothesis::U1DoublePrime,
        sampled_or(u1pp.is_none(), || u1pp.clone().unwrap_or_default()),
        Some("implies u1"),
    );

    let coincidences: Vec<f64> = pts
        .iter()
        .copied()
        .filter(|&x| (g.apply(x) - t.apply(x)).abs() <= EQ_TOL)
        .collect();
    let bad_u2 = coincidences
        .iter()
        .copied()
        .find(|&w| (t.apply(g.apply(w)) - g.apply(t.apply(w))).abs() > EQ_TOL);
    push(
        Hypothesis::U2,
        sampled_or(bad_u2.is_none(), || {
            format!("T(g{0}) != g(T{0})", bad_u2.unwrap_or_default())
        }),
        None,
    );

    let rank = conclusion_rank(|h| {
        verdicts
            .iter()
            .find(|v| v.hypothesis == h)
            .map_or(Status::NotApplicable, |v| v.status)
    });
    VerificationReport {
        verdicts,
        rank,
        start: None,
        contraction: None,
        conditions,
        coincidence: None,
        paths: None,
    }
}

/// Sample points of the instance that are coincidence points.
pub fn sampled_coincidences(inst: &SampledInstance) -> Vec<f64> {
    inst.points()
        .into_iter()
        .filter(|&x| (inst.g.apply(x) - inst.t.apply(x)).abs() <= EQ_TOL)
        .collect()
}
