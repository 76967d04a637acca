//! Binary relations over a finite, densely indexed point set.
//!
//! A [`Relation`] stores its edge set as a row-major membership table so that
//! `contains` is a single lookup; every predicate in this module is an
//! exhaustive scan over points or pairs of points.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::parallel;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RelationError {
    #[error("relation has no edges")]
    Empty,
    #[error("edge ({0}, {1}) references a point outside 0..{2}")]
    OutOfRange(usize, usize, usize),
    #[error("endpoint {0} has no g-preimage")]
    NoPreimage(usize),
    #[error("maximum path length must be at least 1")]
    ZeroLength,
    #[error("order is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("order is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("order is not transitive at ({0}, {1}, {2})")]
    NotTransitive(usize, usize, usize),
}

/// A non-empty binary relation on `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    member: Vec<bool>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

impl Relation {
    pub fn new<I>(n: usize, edges: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut member = vec![false; n * n];
        let mut any = false;
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(RelationError::OutOfRange(i, j, n));
            }
            member[i * n + j] = true;
            any = true;
        }
        if !any {
            return Err(RelationError::Empty);
        }
        Ok(Relation { n, member })
    }

    /// The diagonal `{(i, i)}`.
    pub fn diagonal(n: usize) -> Result<Self, RelationError> {
        Relation::new(n, (0..n).map(|i| (i, i)))
    }

    /// `X × X`.
    pub fn universal(n: usize) -> Result<Self, RelationError> {
        Relation::new(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j))))
    }

    fn from_table(n: usize, member: Vec<bool>) -> Result<Self, RelationError> {
        if member.iter().any(|&b| b) {
            Ok(Relation { n, member })
        } else {
            Err(RelationError::Empty)
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.member[i * self.n + j]
    }

    /// `[i, j] ∈ R`: the two points are comparable in either direction.
    #[inline]
    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.contains(i, j) || self.contains(j, i)
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.contains(i, j))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn symmetric_closure(&self) -> Relation {
        let n = self.n;
        let mut member = self.member.clone();
        for i in 0..n {
            for j in 0..n {
                if self.contains(i, j) {
                    member[j * n + i] = true;
                }
            }
        }
        Relation { n, member }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.contains(i, j) == self.contains(j, i)))
    }

    /// `R|_S`, the edges with both endpoints in `subset`. Fails with
    /// [`RelationError::Empty`] when no edge survives.
    pub fn restricted(&self, subset: &[bool]) -> Result<Relation, RelationError> {
        let n = self.n;
        let mut member = vec![false; n * n];
        for i in (0..n).filter(|&i| subset[i]) {
            for j in (0..n).filter(|&j| subset[j]) {
                member[i * n + j] = self.contains(i, j);
            }
        }
        Relation::from_table(n, member)
    }

    /// `(s_k, s_{k+1}) ∈ R` for every consecutive pair.
    pub fn is_preserving(&self, seq: &[usize]) -> bool {
        seq.windows(2).all(|w| self.contains(w[0], w[1]))
    }
}

/// `R` is `(T, g)`-closed when `(gx, gy) ∈ R` implies `(Tx, Ty) ∈ R`.
/// Returns the least violating pair `(x, y)` if there is one.
pub fn tg_closed_violation(r: &Relation, t: &[usize], g: &[usize]) -> Option<(usize, usize)> {
    parallel::first_pair(r.len(), |x, y| {
        r.contains(g[x], g[y]) && !r.contains(t[x], t[y])
    })
}

pub fn is_tg_closed(r: &Relation, t: &[usize], g: &[usize]) -> bool {
    tg_closed_violation(r, t, g).is_none()
}

pub fn is_t_closed(r: &Relation, t: &[usize]) -> bool {
    let id: Vec<usize> = (0..r.len()).collect();
    is_tg_closed(r, t, &id)
}

/// Every pair of points of `subset` is comparable under `r`.
pub fn is_complete_on(r: &Relation, subset: &[usize]) -> bool {
    complete_violation(r, subset).is_none()
}

pub fn complete_violation(r: &Relation, subset: &[usize]) -> Option<(usize, usize)> {
    for (a, &x) in subset.iter().enumerate() {
        for &y in &subset[a..] {
            if !r.comparable(x, y) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Outcome of a `(g, R)`-directedness scan.
#[derive(Debug, Clone, PartialEq)]
pub struct Directedness {
    pub holds: bool,
    /// One entry per unordered pair `x ≤ y` of the queried set, with the
    /// least `z` satisfying `(x, gz) ∈ R` and `(y, gz) ∈ R`.
    pub witnesses: Vec<(usize, usize, Option<usize>)>,
    /// `Δ(D, g, R)`: every `z` that serves some pair, ascending.
    pub delta: Vec<usize>,
}

pub fn g_directedness(d: &[usize], g: &[usize], r: &Relation) -> Directedness {
    let n = r.len();
    let mut in_delta = vec![false; n];
    let mut witnesses = Vec::new();
    let mut holds = true;
    for (a, &x) in d.iter().enumerate() {
        for &y in &d[a..] {
            let mut first = None;
            for z in 0..n {
                if r.contains(x, g[z]) && r.contains(y, g[z]) {
                    in_delta[z] = true;
                    first.get_or_insert(z);
                }
            }
            holds &= first.is_some();
            witnesses.push((x, y, first));
        }
    }
    let delta = (0..n).filter(|&z| in_delta[z]).collect();
    Directedness {
        holds,
        witnesses,
        delta,
    }
}

/// A witness chain `w_0 .. w_l` whose g-images join two points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GPath {
    pub witnesses: Vec<usize>,
}

impl GPath {
    pub fn length(&self) -> usize {
        self.witnesses.len().saturating_sub(1)
    }

    /// Re-checks every defining property against `r` (symmetrised here).
    pub fn is_valid(
        &self,
        r: &Relation,
        g: &[usize],
        t: &[usize],
        alpha: usize,
        beta: usize,
        interior_condition: bool,
    ) -> bool {
        let w = &self.witnesses;
        if w.len() < 2 || g[w[0]] != alpha || g[w[w.len() - 1]] != beta {
            return false;
        }
        if !w.windows(2).all(|p| r.comparable(g[p[0]], g[p[1]])) {
            return false;
        }
        !interior_condition || w[1..w.len() - 1].iter().all(|&v| r.comparable(g[v], t[v]))
    }
}

/// Breadth-first search for a shortest g-path from `alpha` to `beta`.
///
/// Vertices are points; `u → v` is an arc when `(gu, gv) ∈ Rˢ`. With
/// `interior_condition` set, interior vertices must also satisfy
/// `[gw, Tw] ∈ R`. Ties are broken towards the least index.
pub fn find_g_path(
    r: &Relation,
    g: &[usize],
    t: &[usize],
    alpha: usize,
    beta: usize,
    interior_condition: bool,
    max_len: usize,
) -> Result<Option<GPath>, RelationError> {
    let n = r.len();
    if max_len == 0 {
        return Err(RelationError::ZeroLength);
    }
    let starts: Vec<usize> = (0..n).filter(|&w| g[w] == alpha).collect();
    if starts.is_empty() {
        return Err(RelationError::NoPreimage(alpha));
    }
    if !(0..n).any(|w| g[w] == beta) {
        return Err(RelationError::NoPreimage(beta));
    }

    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut depth: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    for &s in &starts {
        depth[s] = Some(0);
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        let du = depth[u].expect("queued vertices have a depth");
        if du + 1 > max_len {
            break;
        }
        for v in 0..n {
            if !r.comparable(g[u], g[v]) {
                continue;
            }
            if g[v] == beta {
                let mut witnesses = vec![v, u];
                let mut cur = u;
                while let Some(p) = parent[cur] {
                    witnesses.push(p);
                    cur = p;
                }
                witnesses.reverse();
                return Ok(Some(GPath { witnesses }));
            }
            let admissible = !interior_condition || r.comparable(g[v], t[v]);
            if du + 1 < max_len && depth[v].is_none() && admissible {
                depth[v] = Some(du + 1);
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    Ok(None)
}

/// Edges `{(i, j) : i ⪯ j}` after checking that `le` is a partial order.
pub fn order_relation<F>(n: usize, le: F) -> Result<Relation, RelationError>
where
    F: Fn(usize, usize) -> bool,
{
    check_partial_order(n, &le)?;
    Relation::new(
        n,
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| le(i, j)),
    )
}

/// Edges `{(i, j) : i ⪯ j or j ⪯ i}`.
pub fn comparability_relation<F>(n: usize, le: F) -> Result<Relation, RelationError>
where
    F: Fn(usize, usize) -> bool,
{
    check_partial_order(n, &le)?;
    Relation::new(
        n,
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| le(i, j) || le(j, i)),
    )
}

fn check_partial_order<F>(n: usize, le: &F) -> Result<(), RelationError>
where
    F: Fn(usize, usize) -> bool,
{
    for i in 0..n {
        if !le(i, i) {
            return Err(RelationError::NotReflexive(i));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && le(i, j) && le(j, i) {
                return Err(RelationError::NotAntisymmetric(i, j));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if le(i, j) && le(j, k) && !le(i, k) {
                    return Err(RelationError::NotTransitive(i, j, k));
                }
            }
        }
    }
    Ok(())
}
