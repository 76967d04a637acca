//! Explicit metric inequalities numbered 16 to 35, each paired with an
//! equivalent implicit relation.

use super::members::{check_phi, half, unit, ParamReader};
use super::{CatalogError, ComparisonFunction, Form, ImplicitRelation, Params};

pub const COROLLARY3_IDS: [u8; 20] = [
    16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 31, 32, 33, 34, 35,
];

/// One explicit contraction condition on the tuple
/// `(d(Tx,Ty), d(gx,gy), d(gx,Tx), d(gy,Ty), d(gx,Ty), d(gy,Tx))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Corollary3 {
    id: u8,
    form: Form,
}

fn max(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

impl Corollary3 {
    pub fn id(&self) -> u8 {
        self.id
    }

    /// `(lhs, rhs)` of the inequality `lhs ≤ rhs`.
    pub fn sides(&self, d: &[f64; 6]) -> (f64, f64) {
        let [tt, gg, gx_tx, gy_ty, gx_ty, gy_tx] = *d;
        let self_sum = gx_tx + gy_ty;
        let cross_sum = gx_ty + gy_tx;
        match self.form {
            Form::I { k } => (tt, k * gg),
            Form::II { ref phi } => (tt, phi.eval(gg)),
            Form::III { k } => (tt, k * self_sum),
            Form::IV { k } => (tt, k * cross_sum),
            Form::MaxAverage { k } => (tt, k * max(&[gg, self_sum / 2.0, cross_sum / 2.0])),
            Form::MaxSelf { k } => (tt, k * max(&[gx_tx, gy_ty])),
            Form::V { a } => (tt, a[0] * gg + a[1] * self_sum + a[2] * cross_sum),
            Form::MaxMixed { k } => (tt, k * max(&[gg, self_sum / 2.0, gx_ty, gy_tx])),
            Form::VI { k, l } => (tt, k * gg + l * min(&[gx_tx, gy_ty, gx_ty, gy_tx])),
            Form::Linear { c } => (
                tt,
                -c[1] * gg - c[2] * gx_tx - c[3] * gy_ty - c[4] * cross_sum,
            ),
            Form::VII { k, l } => (
                tt,
                k * max(&[gg, gx_tx, gy_ty, cross_sum / 2.0])
                    + l * min(&[gx_tx, gy_ty, gx_ty, gy_tx]),
            ),
            Form::VIII { k } => (tt, k * max(&[gg, gx_tx, gy_ty, gx_ty, gy_tx])),
            Form::IX { a } => (
                tt,
                a[0] * gg + a[1] * gx_tx + a[2] * gy_ty + a[3] * gx_ty + a[4] * gy_tx,
            ),
            Form::X { k } => (tt, k * max(&[gg, gx_tx, gy_ty, gx_ty / 2.0, gy_tx / 2.0])),
            Form::XI { k, a, b } => (
                tt,
                k * max(&[gg, gx_tx, gy_ty]) + (1.0 - k) * (a * gx_ty + b * gy_tx),
            ),
            Form::XII { a } => (
                tt * tt,
                tt * (a[0] * gg + a[1] * gx_tx + a[2] * gy_ty) + a[3] * gx_ty * gy_tx,
            ),
            Form::XIII { k } => {
                let rhs = if tt + gg != 0.0 {
                    k * gg * cross_sum / (tt + gg)
                } else {
                    0.0
                };
                (tt, rhs)
            }
            Form::XIV { a } => (
                tt * tt,
                a[0] * max(&[gg * gg, gx_tx * gx_tx, gy_ty * gy_ty])
                    + a[1] * max(&[gx_tx * gx_ty, gy_ty * gy_tx])
                    + a[2] * gx_ty * gy_tx,
            ),
            Form::XV { k } => (
                tt.powi(3),
                k * (gg.powi(3) + gx_tx.powi(3) + gy_ty.powi(3) + gx_ty.powi(3) + gy_tx.powi(3)),
            ),
            Form::XVI { a1, a2 } => {
                let rhs = if gg + gy_ty != 0.0 {
                    a1 * gg * gy_ty / (gg + gy_ty) + a2 * gx_tx * gy_tx / (cross_sum + 1.0)
                } else {
                    0.0
                };
                (tt, rhs)
            }
            Form::Quotient { .. } => unreachable!("no numbered condition uses the quotient form"),
        }
    }

    pub fn holds(&self, d: &[f64; 6]) -> bool {
        self.holds_within(d, 0.0)
    }

    pub fn holds_within(&self, d: &[f64; 6], tol: f64) -> bool {
        let (lhs, rhs) = self.sides(d);
        lhs <= rhs + tol
    }

    /// The `G ≤ 0` form of the same condition.
    pub fn implicit(&self) -> ImplicitRelation {
        ImplicitRelation::from_form(format!("({})", self.id), self.form.clone())
    }
}

/// Builds condition `id` (16 to 35) after checking its printed range.
pub fn make_corollary3(
    id: u8,
    params: &Params,
    phi: Option<&ComparisonFunction>,
) -> Result<Corollary3, CatalogError> {
    let mut p = ParamReader::new(format!("({id})"), params);
    let form = match id {
        16 | 20 | 21 | 23 | 29 | 32 | 34 => {
            let k = p.get("k")?;
            p.require(unit(k), "k in [0, 1)")?;
            match id {
                16 => Form::I { k },
                20 => Form::MaxAverage { k },
                21 => Form::MaxSelf { k },
                23 => Form::MaxMixed { k },
                29 => Form::X { k },
                32 => Form::XIII { k },
                _ => Form::XV { k },
            }
        }
        17 => Form::II {
            phi: check_phi(&p, phi)?,
        },
        18 | 19 | 27 => {
            let k = p.get("k")?;
            p.require(half(k), "k in [0, 1/2)")?;
            match id {
                18 => Form::III { k },
                19 => Form::IV { k },
                _ => Form::VIII { k },
            }
        }
        22 => {
            let a = [p.get("a1")?, p.get("a2")?, p.get("a3")?];
            p.require(a.iter().all(|&x| unit(x)), "a1, a2, a3 in [0, 1)")?;
            p.require(a[0] + 2.0 * a[1] + 2.0 * a[2] < 1.0, "a1 + 2 a2 + 2 a3 < 1")?;
            Form::V { a }
        }
        24 | 26 => {
            let (k, l) = (p.get("k")?, p.get("L")?);
            p.require(unit(k), "k in [0, 1)")?;
            p.require(l >= 0.0, "L >= 0")?;
            if id == 24 {
                Form::VI { k, l }
            } else {
                Form::VII { k, l }
            }
        }
        25 => {
            let a = [p.get("a1")?, p.get("a2")?, p.get("a3")?, p.get("a4")?];
            p.require(a.iter().all(|&x| x >= 0.0), "a1, .., a4 >= 0")?;
            p.require(
                a[0] + a[1] + a[2] + 2.0 * a[3] < 1.0,
                "a1 + a2 + a3 + 2 a4 < 1",
            )?;
            Form::Linear {
                c: [1.0, -a[0], -a[1], -a[2], -a[3], -a[3]],
            }
        }
        28 => {
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
        30 => {
            let (k, a, b) = (p.get("k")?, p.get("a")?, p.get("b")?);
            p.require(unit(k), "k in [0, 1)")?;
            p.require(half(a) && half(b), "a, b in [0, 1/2)")?;
            Form::XI { k, a, b }
        }
        31 => {
            let a = [p.get("a1")?, p.get("a2")?, p.get("a3")?, p.get("a4")?];
            p.require(a[0] > 0.0, "a1 > 0")?;
            p.require(a[1..].iter().all(|&x| x >= 0.0), "a2, a3, a4 >= 0")?;
            p.require(a[0] + a[1] + a[2] < 1.0, "a1 + a2 + a3 < 1")?;
            p.require(a[0] + a[3] < 1.0, "a1 + a4 < 1")?;
            Form::XII { a }
        }
        33 => {
            let a = [p.get("a1")?, p.get("a2")?, p.get("a3")?];
            p.require(a[0] > 0.0, "a1 > 0")?;
            p.require(a[1] >= 0.0 && a[2] >= 0.0, "a2, a3 >= 0")?;
            p.require(a[0] + 2.0 * a[1] < 1.0, "a1 + 2 a2 < 1")?;
            p.require(a[0] + a[2] < 1.0, "a1 + a3 < 1")?;
            Form::XIV { a }
        }
        35 => {
            let (a1, a2) = (p.get("a1")?, p.get("a2")?);
            p.require(a1 > 0.0 && a2 > 0.0, "a1, a2 > 0")?;
            p.require(a1 < 2.0, "a1 < 2")?;
            Form::XVI { a1, a2 }
        }
        _ => return Err(CatalogError::UnknownId(id.to_string())),
    };
    p.finish()?;
    Ok(Corollary3 { id, form })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, f64)]) -> Params {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn printed_examples() {
        let c16 = make_corollary3(16, &params(&[("k", 0.9)]), None).unwrap();
        assert!(!c16.holds(&[1.0, 1.0, 1.0, 1.0, 1.0, 1.0]));
        let c18 = make_corollary3(18, &params(&[("k", 0.4)]), None).unwrap();
        assert!(c18.holds(&[0.5, 0.0, 1.0, 0.5, 0.0, 0.0]));
        assert!((c18.sides(&[0.5, 0.0, 1.0, 0.5, 0.0, 0.0]).1 - 0.6).abs() < 1e-15);
    }

    #[test]
    fn ranges() {
        assert!(make_corollary3(18, &params(&[("k", 0.5)]), None).is_err());
        assert!(make_corollary3(34, &params(&[("k", 0.5)]), None).is_ok());
        assert!(make_corollary3(36, &params(&[]), None).is_err());
        assert!(make_corollary3(
            25,
            &params(&[("a1", 0.2), ("a2", 0.2), ("a3", 0.2), ("a4", 0.2)]),
            None
        )
        .is_err());
    }

    #[test]
    fn wide_cubic_range_loses_the_first_condition() {
        let c = make_corollary3(34, &params(&[("k", 0.5)]), None).unwrap();
        let g = c.implicit();
        assert!(!g.declared().g1);
        assert!(!g.declared().g2);
        let c = make_corollary3(34, &params(&[("k", 0.05)]), None).unwrap();
        assert!(c.implicit().declared().g1);
    }
}
