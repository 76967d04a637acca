//! JSON instance files: one tagged object per mode.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{
    make_catalog, make_corollary3, CatalogError, ComparisonFunction, ImplicitRelation, Params,
};
use crate::metric::{FiniteMetricSpace, MetricError};
use crate::relation::{Relation, RelationError};
use crate::sampled::{Assertions, Interval, RealMap, RealRelation, SampledInstance};
use crate::solver::{
    MappingPair, SolveError, DEFAULT_MAX_ITER, DEFAULT_TOL_CONTINUOUS, DEFAULT_TOL_FINITE,
};
use crate::urysohn::{Alpha, Eta, Kernel, UrysohnError, UrysohnProblem};
use crate::verify::{Contraction, FiniteInstance};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Maps(#[from] SolveError),
    #[error(transparent)]
    Urysohn(#[from] UrysohnError),
}

fn invalid(msg: impl Into<String>) -> InstanceError {
    InstanceError::Invalid(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ContractionSpec {
    Catalog {
        id: String,
        #[serde(default)]
        params: Params,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi: Option<ComparisonFunction>,
    },
    Corollary3 {
        id: u8,
        #[serde(default)]
        params: Params,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi: Option<ComparisonFunction>,
    },
    Linear {
        coefficients: [f64; 6],
    },
    Quotient {
        phi: ComparisonFunction,
    },
}

impl ContractionSpec {
    pub fn build(&self) -> Result<Contraction, CatalogError> {
        Ok(match self {
            ContractionSpec::Catalog { id, params, phi } => {
                Contraction::Implicit(make_catalog(id, params, phi.as_ref())?)
            }
            ContractionSpec::Corollary3 { id, params, phi } => {
                Contraction::Explicit(make_corollary3(*id, params, phi.as_ref())?)
            }
            ContractionSpec::Linear { coefficients } => {
                Contraction::Implicit(ImplicitRelation::linear(*coefficients))
            }
            ContractionSpec::Quotient { phi } => {
                Contraction::Implicit(ImplicitRelation::quotient(phi.clone()))
            }
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec<P> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<P>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    pub subspace: Vec<String>,
    pub relation: Vec<(String, String)>,
    pub t: BTreeMap<String, String>,
    pub g: BTreeMap<String, String>,
    pub contraction: ContractionSpec,
    #[serde(default)]
    pub solver: SolverSpec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuousSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub domain: Interval,
    pub subspace: Interval,
    pub t: RealMap,
    pub g: RealMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_inverse: Option<RealMap>,
    pub relation: RealRelation,
    pub contraction: ContractionSpec,
    pub samples: Vec<f64>,
    #[serde(default)]
    pub assertions: Assertions,
    #[serde(default)]
    pub solver: SolverSpec<f64>,
}

fn identity() -> RealMap {
    RealMap::Identity
}

fn zero_alpha() -> Alpha {
    Alpha::Polynomial {
        coefficients: vec![],
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UrysohnSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub kernel: Kernel,
    pub alpha: Alpha,
    #[serde(default = "identity")]
    pub g: RealMap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_inverse: Option<RealMap>,
    pub horizon: f64,
    pub eta: Eta,
    pub phi: ComparisonFunction,
    pub grid_size: usize,
    /// Starting function, same encoding as `alpha`.
    #[serde(default = "zero_alpha")]
    pub u0: Alpha,
    /// Known solution used to report the discretization error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Alpha>,
    #[serde(default)]
    pub solver: SolverSpec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum InstanceFile {
    Finite(FiniteSpec),
    Continuous(ContinuousSpec),
    Urysohn(UrysohnSpec),
}

/// Solver settings after defaults are applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<P> {
    pub x0: Option<P>,
    pub tol: f64,
    pub max_iter: usize,
}

impl<P: Clone> SolverSpec<P> {
    fn resolve<Q>(
        &self,
        default_tol: f64,
        x0: impl FnOnce(&P) -> Result<Q, InstanceError>,
    ) -> Result<SolverOptions<Q>, InstanceError> {
        let tol = self.tol.unwrap_or(default_tol);
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(invalid(format!(
                "tolerance must be finite and non-negative, got {tol}"
            )));
        }
        Ok(SolverOptions {
            x0: self.x0.as_ref().map(x0).transpose()?,
            tol,
            max_iter: self.max_iter.unwrap_or(DEFAULT_MAX_ITER),
        })
    }
}

impl FiniteSpec {
    pub fn index_of(&self, label: &str) -> Result<usize, InstanceError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| invalid(format!("undeclared label {label:?}")))
    }

    fn table(
        &self,
        name: &str,
        map: &BTreeMap<String, String>,
    ) -> Result<Vec<usize>, InstanceError> {
        for key in map.keys() {
            self.index_of(key)?;
        }
        self.labels
            .iter()
            .map(|l| {
                let image = map
                    .get(l)
                    .ok_or_else(|| invalid(format!("map {name} is undefined at {l:?}")))?;
                self.index_of(image)
            })
            .collect()
    }

    pub fn build(&self) -> Result<(FiniteInstance, SolverOptions<usize>), InstanceError> {
        let mut seen = BTreeSet::new();
        if let Some(dup) = self.labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(invalid(format!("duplicate label {dup:?}")));
        }
        let subspace = self
            .subspace
            .iter()
            .map(|l| self.index_of(l))
            .collect::<Result<Vec<_>, _>>()?;
        let space = match (&self.coordinates, &self.matrix) {
            (Some(c), None) => {
                FiniteMetricSpace::from_coordinates(self.labels.clone(), c, subspace)?
            }
            (None, Some(m)) => FiniteMetricSpace::new(self.labels.clone(), m.clone(), subspace)?,
            _ => return Err(invalid("give exactly one of coordinates or matrix")),
        };
        let n = self.labels.len();
        let pair = MappingPair::new(n, self.table("T", &self.t)?, self.table("g", &self.g)?)?;
        let edges = self
            .relation
            .iter()
            .map(|(a, b)| Ok((self.index_of(a)?, self.index_of(b)?)))
            .collect::<Result<Vec<_>, InstanceError>>()?;
        let relation = Relation::new(n, edges)?;
        let contraction = self.contraction.build()?;
        let options = self
            .solver
            .resolve(DEFAULT_TOL_FINITE, |l| self.index_of(l))?;
        Ok((
            FiniteInstance {
                space,
                pair,
                relation,
                contraction,
            },
            options,
        ))
    }
}

impl ContinuousSpec {
    pub fn build(&self) -> Result<(SampledInstance, SolverOptions<f64>), InstanceError> {
        for iv in [&self.domain, &self.subspace] {
            if iv.lo.is_nan() || iv.hi.is_nan() || iv.lo > iv.hi {
                return Err(invalid(format!("empty interval [{}, {}]", iv.lo, iv.hi)));
            }
        }
        if self.samples.iter().all(|&x| !self.domain.contains(x)) {
            return Err(invalid("no sample lies in the domain"));
        }
        if self.g_inverse.is_none() && self.g.inverse().is_none() {
            return Err(invalid("g has no closed-form inverse; supply g_inverse"));
        }
        let inst = SampledInstance {
            domain: self.domain,
            subspace: self.subspace,
            t: self.t.clone(),
            g: self.g.clone(),
            g_inverse: self.g_inverse.clone(),
            relation: self.relation,
            contraction: self.contraction.build()?.relation(),
            samples: self.samples.clone(),
            assertions: self.assertions,
        };
        let options = self.solver.resolve(DEFAULT_TOL_CONTINUOUS, |&x| {
            if self.domain.contains(x) {
                Ok(x)
            } else {
                Err(invalid(format!("x0 = {x} is outside the domain")))
            }
        })?;
        Ok((inst, options))
    }
}

impl UrysohnSpec {
    pub fn build(&self) -> Result<(UrysohnProblem, SolverOptions<f64>), InstanceError> {
        let problem = UrysohnProblem {
            kernel: self.kernel.clone(),
            alpha: self.alpha.clone(),
            g: self.g.clone(),
            g_inverse: self.g_inverse.clone(),
            horizon: self.horizon,
            eta: self.eta,
            phi: self.phi.clone(),
            grid_size: self.grid_size,
        };
        problem.validate()?;
        for f in std::iter::once(&self.u0).chain(&self.exact) {
            if let Alpha::Samples { values } = f {
                if values.len() != problem.nodes() {
                    return Err(invalid(format!(
                        "expected {} node values, got {}",
                        problem.nodes(),
                        values.len()
                    )));
                }
            }
        }
        let options = self.solver.resolve(DEFAULT_TOL_CONTINUOUS, |&x| Ok(x))?;
        Ok((problem, options))
    }

    /// Grid function encoded like `alpha` on the problem grid.
    pub fn grid_values(problem: &UrysohnProblem, f: &Alpha) -> crate::urysohn::GridFunction {
        let alt = UrysohnProblem {
            alpha: f.clone(),
            ..problem.clone()
        };
        crate::urysohn::GridFunction {
            h: problem.h(),
            values: (0..problem.nodes()).map(|i| alt.alpha_at(i)).collect(),
        }
    }
}

pub fn parse(text: &str) -> Result<InstanceFile, InstanceError> {
    Ok(serde_json::from_str(text)?)
}

/// Pretty JSON with struct fields in declaration order and map keys sorted.
pub fn canonical_json(file: &InstanceFile) -> String {
    let mut out = serde_json::to_string_pretty(file).expect("instance files serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify, Rank};

    const STEP: &str = r#"{
        "mode": "finite",
        "labels": ["0", "0.5", "1", "2"],
        "coordinates": [0, 0.5, 1, 2],
        "subspace": ["0", "1"],
        "relation": [["0","0"],["1","1"],["2","2"],["0","1"],["0","2"],["1","2"]],
        "t": {"0": "0", "0.5": "0", "1": "0", "2": "1"},
        "g": {"0": "0", "0.5": "0", "1": "1", "2": "2"},
        "contraction": {"kind": "linear", "coefficients": [1, 0, 0, 0, -0.2, -0.6]},
        "solver": {"x0": "0.5"}
    }"#;

    #[test]
    fn finite_round_trip_is_idempotent() {
        let file = parse(STEP).unwrap();
        let once = canonical_json(&file);
        let twice = canonical_json(&parse(&once).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn finite_build_and_verify() {
        let InstanceFile::Finite(spec) = parse(STEP).unwrap() else {
            panic!()
        };
        let (inst, opts) = spec.build().unwrap();
        assert_eq!(opts.x0, Some(1));
        assert_eq!(opts.tol, DEFAULT_TOL_FINITE);
        let report = verify(&inst).unwrap();
        assert_eq!(
            report.rank,
            Rank::CommonFixedPointUnique,
            "{:#?}",
            report.verdicts
        );
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(
            parse(&STEP[..STEP.len() / 2]),
            Err(InstanceError::Parse(_))
        ));
        let dup = STEP.replace(r#""0.5", "1", "2"]"#, r#""0.5", "1", "1"]"#);
        let InstanceFile::Finite(spec) = parse(&dup).unwrap() else {
            panic!()
        };
        assert!(spec.build().unwrap_err().to_string().contains("duplicate"));
        let partial = STEP.replace(r#", "2": "1"}"#, "}");
        let InstanceFile::Finite(spec) = parse(&partial).unwrap() else {
            panic!()
        };
        assert!(spec.build().unwrap_err().to_string().contains("undefined"));
        let stray = STEP.replace(r#"["1","2"]]"#, r#"["1","7"]]"#);
        let InstanceFile::Finite(spec) = parse(&stray).unwrap() else {
            panic!()
        };
        assert!(spec.build().unwrap_err().to_string().contains("undeclared"));
        assert!(parse(&STEP.replace("\"subspace\"", "\"subspaces\"")).is_err());
    }

    #[test]
    fn out_of_range_catalog_parameters_are_input_errors() {
        let bad = STEP.replace(
            r#"{"kind": "linear", "coefficients": [1, 0, 0, 0, -0.2, -0.6]}"#,
            r#"{"kind": "catalog", "id": "I", "params": {"k": 1}}"#,
        );
        let InstanceFile::Finite(spec) = parse(&bad).unwrap() else {
            panic!()
        };
        assert!(matches!(spec.build(), Err(InstanceError::Catalog(_))));
    }
}
