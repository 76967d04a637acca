//! Finite metric spaces with a distinguished subspace `Y`.

use thiserror::Error;

use crate::relation::Relation;

/// Slack allowed in the triangle inequality.
pub const TRIANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("distance matrix is {rows}x{cols} but there are {labels} labels")]
    Dimension {
        labels: usize,
        rows: usize,
        cols: usize,
    },
    #[error("space has no points")]
    NoPoints,
    #[error("subspace Y is empty")]
    EmptySubspace,
    #[error("subspace index {0} is out of range")]
    SubspaceOutOfRange(usize),
    #[error("metric axiom violated: {0}")]
    Axiom(MetricViolation),
}

/// The first axiom failure found by [`FiniteMetricSpace::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricViolation {
    NonZeroDiagonal(usize),
    Asymmetric(usize, usize),
    NotPositive(usize, usize),
    /// `d(i, j) > d(i, k) + d(k, j)`.
    Triangle(usize, usize, usize),
}

impl std::fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            MetricViolation::NonZeroDiagonal(i) => write!(f, "d({i},{i}) != 0"),
            MetricViolation::Asymmetric(i, j) => write!(f, "d({i},{j}) != d({j},{i})"),
            MetricViolation::NotPositive(i, j) => write!(f, "d({i},{j}) is not positive"),
            MetricViolation::Triangle(i, j, k) => {
                write!(f, "d({i},{j}) > d({i},{k}) + d({k},{j})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    subspace: Vec<usize>,
}

impl FiniteMetricSpace {
    /// Builds a space from an explicit matrix. Only shapes are checked here;
    /// call [`validate`](Self::validate) for the metric axioms.
    pub fn new(
        labels: Vec<String>,
        matrix: Vec<Vec<f64>>,
        subspace: Vec<usize>,
    ) -> Result<Self, MetricError> {
        let n = labels.len();
        if n == 0 {
            return Err(MetricError::NoPoints);
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(MetricError::Dimension {
                labels: n,
                rows: matrix.len(),
                cols: matrix.iter().map(Vec::len).find(|&c| c != n).unwrap_or(n),
            });
        }
        if subspace.is_empty() {
            return Err(MetricError::EmptySubspace);
        }
        if let Some(&bad) = subspace.iter().find(|&&i| i >= n) {
            return Err(MetricError::SubspaceOutOfRange(bad));
        }
        let mut subspace = subspace;
        subspace.sort_unstable();
        subspace.dedup();
        Ok(FiniteMetricSpace {
            labels,
            dist: matrix.into_iter().flatten().collect(),
            subspace,
        })
    }

    /// Points on the real line under `|x - y|`.
    pub fn from_coordinates(
        labels: Vec<String>,
        coords: &[f64],
        subspace: Vec<usize>,
    ) -> Result<Self, MetricError> {
        let matrix = coords
            .iter()
            .map(|&a| coords.iter().map(|&b| (a - b).abs()).collect())
            .collect();
        FiniteMetricSpace::new(labels, matrix, subspace)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn subspace(&self) -> &[usize] {
        &self.subspace
    }

    pub fn in_subspace(&self, i: usize) -> bool {
        self.subspace.binary_search(&i).is_ok()
    }

    /// Smallest distance between distinct points, or `None` for one point.
    pub fn separation(&self) -> Option<f64> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.d(i, j))
            .reduce(f64::min)
    }

    /// Checks identity, symmetry, positivity, then every triangle `(i, j, k)`
    /// in lexicographic order, returning the first failure.
    pub fn validate(&self) -> Result<(), MetricViolation> {
        let n = self.len();
        for i in 0..n {
            if self.d(i, i) != 0.0 {
                return Err(MetricViolation::NonZeroDiagonal(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if self.d(i, j) != self.d(j, i) {
                    return Err(MetricViolation::Asymmetric(i, j));
                }
                // also rejects NaN
                if self.d(i, j).is_nan() || self.d(i, j) <= 0.0 {
                    return Err(MetricViolation::NotPositive(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.d(i, j) > self.d(i, k) + self.d(k, j) + TRIANGLE_TOL {
                        return Err(MetricViolation::Triangle(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A hypothesis that holds on every valid finite input, together with the
/// argument for it so reports can cite coverage explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rationale {
    pub holds: bool,
    pub reason: &'static str,
}

const CAUCHY_EVENTUALLY_CONSTANT: &str = "in a finite metric space every Cauchy sequence is \
     eventually constant once its terms are closer than the minimum separation, so it \
     converges to its tail value, which lies in any subset containing the tail";

const CONVERGENT_EVENTUALLY_CONSTANT: &str = "an R-preserving sequence converging to x in a \
     finite space is eventually constant at x, so (x, x) is in R and the constant tail is a \
     subsequence comparable to its limit";

pub fn finite_r_completeness(_space: &FiniteMetricSpace, _r: &Relation) -> Rationale {
    Rationale {
        holds: true,
        reason: CAUCHY_EVENTUALLY_CONSTANT,
    }
}

pub fn finite_d_self_closed(
    _space: &FiniteMetricSpace,
    _r: &Relation,
    _subset: &[usize],
) -> Rationale {
    Rationale {
        holds: true,
        reason: CONVERGENT_EVENTUALLY_CONSTANT,
    }
}
