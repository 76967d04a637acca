//! Constructors for catalog members I–XVI with their parameter constraints.

use super::{CatalogError, ComparisonFunction, Form, ImplicitRelation, Params};

pub const CATALOG_IDS: [&str; 16] = [
    "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII", "XIII", "XIV", "XV",
    "XVI",
];

/// Pulls named parameters out of a map, rejecting missing, non-finite and
/// leftover entries.
pub(super) struct ParamReader<'a> {
    id: String,
    params: &'a Params,
    taken: Vec<&'static str>,
}

impl<'a> ParamReader<'a> {
    pub(super) fn new(id: impl Into<String>, params: &'a Params) -> Self {
        ParamReader {
            id: id.into(),
            params,
            taken: Vec::new(),
        }
    }

    pub(super) fn get(&mut self, name: &'static str) -> Result<f64, CatalogError> {
        self.taken.push(name);
        match self.params.get(name) {
            Some(&v) if v.is_finite() => Ok(v),
            Some(_) => Err(self.violated("parameters must be finite")),
            None => Err(CatalogError::MissingParam {
                id: self.id.clone(),
                name: name.to_string(),
            }),
        }
    }

    pub(super) fn finish(self) -> Result<(), CatalogError> {
        match self
            .params
            .keys()
            .find(|k| !self.taken.contains(&k.as_str()))
        {
            Some(extra) => Err(CatalogError::UnexpectedParam {
                id: self.id,
                name: extra.clone(),
            }),
            None => Ok(()),
        }
    }

    pub(super) fn violated(&self, constraint: &'static str) -> CatalogError {
        CatalogError::Constraint {
            id: self.id.clone(),
            constraint,
        }
    }

    pub(super) fn require(&self, ok: bool, constraint: &'static str) -> Result<(), CatalogError> {
        if ok {
            Ok(())
        } else {
            Err(self.violated(constraint))
        }
    }
}

pub(super) fn unit(k: f64) -> bool {
    (0.0..1.0).contains(&k)
}

pub(super) fn half(k: f64) -> bool {
    (0.0..0.5).contains(&k)
}

/// A user-supplied `φ` must be a certified member of `Φ` lying strictly
/// below the identity.
pub(super) fn check_phi(
    reader: &ParamReader<'_>,
    phi: Option<&ComparisonFunction>,
) -> Result<ComparisonFunction, CatalogError> {
    let phi = phi.ok_or_else(|| CatalogError::MissingParam {
        id: reader.id.clone(),
        name: "phi".to_string(),
    })?;
    phi.validate()?;
    reader.require(phi.below_identity(), "phi(t) < t for all t > 0")?;
    super::phi_tail_bound(phi, 1.0, 0)?;
    Ok(phi.clone())
}

/// Builds catalog member `id` after checking its printed parameter range.
/// `phi` is consulted only by member II.
pub fn make_catalog(
    id: &str,
    params: &Params,
    phi: Option<&ComparisonFunction>,
) -> Result<ImplicitRelation, CatalogError> {
    let mut p = ParamReader::new(id, params);
    let form = match id {
        "I" | "X" | "XIII" => {
            let k = p.get("k")?;
            p.require(unit(k), "k in [0, 1)")?;
            match id {
                "I" => Form::I { k },
                "X" => Form::X { k },
                _ => Form::XIII { k },
            }
        }
        "II" => Form::II {
            phi: check_phi(&p, phi)?,
        },
        "III" | "IV" | "VIII" => {
            let k = p.get("k")?;
            p.require(half(k), "k in [0, 1/2)")?;
            match id {
                "III" => Form::III { k },
                "IV" => Form::IV { k },
                _ => Form::VIII { k },
            }
        }
        "V" => {
            let a = [p.get("a1")?, p.get("a2")?, p.get("a3")?];
            p.require(a.iter().all(|&x| unit(x)), "a1, a2, a3 in [0, 1)")?;
            p.require(a[0] + 2.0 * a[1] + 2.0 * a[2] < 1.0, "a1 + 2 a2 + 2 a3 < 1")?;
            Form::V { a }
        }
        "VI" | "VII" => {
            let (k, l) = (p.get("k")?, p.get("L")?);
            p.require(unit(k), "k in [0, 1)")?;
            p.require(l >= 0.0, "L >= 0")?;
            if id == "VI" {
                Form::VI { k, l }
            } else {
                Form::VII { k, l }
            }
        }
        "IX" => {
            let a = [
                p.get("a1")?,
                p.get("a2")?,
                p.get("a3")?,
                p.get("a4")?,
                p.get("a5")?,
            ];
            p.require(a.iter().all(|&x| x > 0.0), "a1, .., a5 > 0")?;
            p.require(a.iter().sum::<f64>() < 1.0, "a1 + .. + a5 < 1")?;
            Form::IX { a }
        }
        "XI" => {
            let (k, a, b) = (p.get("k")?, p.get("a")?, p.get("b")?);
            p.require(unit(k), "k in [0, 1)")?;
            p.require(half(a) && half(b), "a, b in [0, 1/2)")?;
            Form::XI { k, a, b }
        }
        "XII" => {
            let a = [p.get("a1")?, p.get("a2")?, p.get("a3")?, p.get("a4")?];
            p.require(a[0] > 0.0, "a1 > 0")?;
            p.require(a[1..].iter().all(|&x| x >= 0.0), "a2, a3, a4 >= 0")?;
            p.require(a[0] + a[1] + a[2] < 1.0, "a1 + a2 + a3 < 1")?;
            p.require(a[0] + a[3] < 1.0, "a1 + a4 < 1")?;
            Form::XII { a }
        }
        "XIV" => {
            let a = [p.get("a1")?, p.get("a2")?, p.get("a3")?];
            p.require(a.iter().all(|&x| x >= 0.0), "a1, a2, a3 >= 0")?;
            p.require(a[0] + 2.0 * a[1] < 1.0, "a1 + 2 a2 < 1")?;
            p.require(a[0] + a[2] < 1.0, "a1 + a3 < 1")?;
            Form::XIV { a }
        }
        "XV" => {
            let k = p.get("k")?;
            p.require((0.0..1.0 / 11.0).contains(&k), "k in [0, 1/11)")?;
            Form::XV { k }
        }
        "XVI" => {
            let (a1, a2) = (p.get("a1")?, p.get("a2")?);
            p.require(a1 > 0.0 && a2 > 0.0, "a1, a2 > 0")?;
            p.require(a1 < 2.0, "a1 < 2")?;
            Form::XVI { a1, a2 }
        }
        _ => return Err(CatalogError::UnknownId(id.to_string())),
    };
    p.finish()?;
    Ok(ImplicitRelation::from_form(id, form))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, f64)]) -> Params {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn printed_ranges() {
        assert!(make_catalog("I", &params(&[("k", 0.9)]), None).is_ok());
        let err = make_catalog("I", &params(&[("k", 1.0)]), None).unwrap_err();
        assert_eq!(err.to_string(), "I: constraint violated: k in [0, 1)");
        assert!(make_catalog("V", &params(&[("a1", 0.3), ("a2", 0.2), ("a3", 0.1)]), None).is_ok());
        let err = make_catalog("XV", &params(&[("k", 0.2)]), None).unwrap_err();
        assert!(err.to_string().contains("k in [0, 1/11)"));
        assert!(make_catalog("XV", &params(&[("k", 1.0 / 11.0)]), None).is_err());
        assert!(make_catalog("XVI", &params(&[("a1", 2.0), ("a2", 0.5)]), None).is_err());
        assert!(make_catalog("XVI", &params(&[("a1", 1.5), ("a2", 0.5)]), None).is_ok());
    }

    #[test]
    fn parameter_bookkeeping() {
        assert!(matches!(
            make_catalog("I", &params(&[]), None),
            Err(CatalogError::MissingParam { .. })
        ));
        assert!(matches!(
            make_catalog("I", &params(&[("k", 0.5), ("c", 1.0)]), None),
            Err(CatalogError::UnexpectedParam { .. })
        ));
        assert!(matches!(
            make_catalog("XVII", &params(&[]), None),
            Err(CatalogError::UnknownId(_))
        ));
        assert!(make_catalog("I", &params(&[("k", f64::NAN)]), None).is_err());
    }

    #[test]
    fn member_ii_needs_phi_below_identity() {
        let p = params(&[]);
        assert!(make_catalog("II", &p, None).is_err());
        assert!(make_catalog("II", &p, Some(&ComparisonFunction::linear(1.0))).is_err());
        let g = make_catalog("II", &p, Some(&ComparisonFunction::Rational { k: 0.5 })).unwrap();
        assert_eq!(g.phi(), Some(&ComparisonFunction::Rational { k: 0.5 }));
    }

    #[test]
    fn evaluation_examples() {
        let g = make_catalog("I", &params(&[("k", 0.5)]), None).unwrap();
        assert_eq!(g.eval(&[1.0, 3.0, 0.0, 0.0, 0.0, 0.0]).unwrap(), -0.5);
        assert_eq!(g.phi(), Some(&ComparisonFunction::linear(0.5)));
    }
}
