//! Comparison functions, implicit relations and the contraction catalog.

mod checks;
mod corollary;
mod implicit;
mod listing;
mod members;
mod phi;

use thiserror::Error;

pub use checks::{check_g1, check_g2, check_g3, ConditionReport, Grid};
pub use corollary::{make_corollary3, Corollary3, COROLLARY3_IDS};
pub use implicit::{Declared, Form, ImplicitRelation};
pub use listing::{ListingEntry, CATALOG_LISTING, COROLLARY3_LISTING};
pub use members::{make_catalog, CATALOG_IDS};
pub use phi::{phi_tail_bound, ComparisonFunction};

/// Named real parameters of a catalog form, e.g. `{"k": 0.5}`.
pub type Params = std::collections::BTreeMap<String, f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("argument {0} is negative")]
    Negative(f64),
    #[error("invalid comparison function: {0}")]
    Phi(String),
    #[error("not certified in Φ: no geometric tail within the iteration budget")]
    NotCertified,
    #[error("unknown id {0}")]
    UnknownId(String),
    #[error("{id}: missing parameter {name}")]
    MissingParam { id: String, name: String },
    #[error("{id}: unexpected parameter {name}")]
    UnexpectedParam { id: String, name: String },
    #[error("{id}: constraint violated: {constraint}")]
    Constraint {
        id: String,
        constraint: &'static str,
    },
}
