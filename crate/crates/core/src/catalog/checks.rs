//! Grid checks for the three conditions on implicit relations.

use super::ImplicitRelation;

/// Margin required for every strict inequality.
const STRICT: f64 = 1e-12;

/// Sizes of the fifth/sixth-argument perturbations in the monotonicity probe.
const PERTURBATIONS: [f64; 3] = [0.05, 0.5, 5.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub values: Vec<f64>,
}

impl Grid {
    /// `lo, lo + step, ..` up to `hi` inclusive, computed as `lo + i·step`.
    pub fn uniform(lo: f64, hi: f64, step: f64) -> Self {
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        Grid {
            values: (0..count).map(|i| lo + i as f64 * step).collect(),
        }
    }

    /// `{0, 0.1, .., 10}`.
    pub fn standard() -> Self {
        Grid::uniform(0.0, 10.0, 0.1)
    }

    fn positive(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied().filter(|&r| r > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub condition: &'static str,
    pub holds: bool,
    pub checked: usize,
    /// Smallest slack seen; negative when violated.
    pub worst_margin: f64,
    /// Argument tuple of the first violation.
    pub witness: Option<[f64; 6]>,
    pub detail: Option<String>,
}

impl ConditionReport {
    fn new(condition: &'static str) -> Self {
        ConditionReport {
            condition,
            holds: true,
            checked: 0,
            worst_margin: f64::INFINITY,
            witness: None,
            detail: None,
        }
    }

    fn record(&mut self, margin: f64, ok: bool, at: [f64; 6], why: impl FnOnce() -> String) {
        self.checked += 1;
        self.worst_margin = self.worst_margin.min(margin);
        if !ok && self.holds {
            self.holds = false;
            self.witness = Some(at);
            self.detail = Some(why());
        }
    }
}

/// Monotone decrease in the fifth and sixth arguments, probed around each
/// slice point `(r, s, s, r, r+s, 0)`, and `G(r,s,s,r,r+s,0) ≤ 0 ⟹ r ≤ φ(s)`
/// for the attached `φ`.
pub fn check_g1(g: &ImplicitRelation, grid: &Grid) -> ConditionReport {
    let mut report = ConditionReport::new("G1");
    for &r in &grid.values {
        for &s in &grid.values {
            let base = [r, s, s, r, r + s, 0.0];
            let g0 = g.value(&base);
            let slack = STRICT * (1.0 + g0.abs());
            for delta in PERTURBATIONS {
                for arg in [4, 5] {
                    let mut moved = base;
                    moved[arg] += delta;
                    let gm = g.value(&moved);
                    report.record(g0 - gm, gm <= g0 + slack, moved, || {
                        format!("increases in argument {} at {moved:?}", arg + 1)
                    });
                }
            }
            if g0 > 0.0 {
                continue;
            }
            match g.phi() {
                Some(phi) => {
                    let bound = phi.eval(s);
                    let margin = bound - r;
                    report.record(margin, margin >= -STRICT * (1.0 + s), base, || {
                        format!("G(r,s,s,r,r+s,0) <= 0 but r = {r} > phi({s}) = {bound}")
                    });
                }
                None => {
                    // every member of Φ lies below the identity
                    let refuted = r > 0.0 && r >= s;
                    report.record(s - r, !refuted, base, || {
                        format!("G(r,s,s,r,r+s,0) <= 0 with r = {r} >= s = {s}; no comparison function can bound it")
                    });
                }
            }
        }
    }
    if report.holds && g.phi().is_none() {
        report.holds = false;
        report.detail = Some("no comparison function attached".to_string());
    }
    report
}

fn check_strict(
    g: &ImplicitRelation,
    grid: &Grid,
    condition: &'static str,
    at: fn(f64) -> [f64; 6],
) -> ConditionReport {
    let mut report = ConditionReport::new(condition);
    for r in grid.positive() {
        let args = at(r);
        let v = g.value(&args);
        report.record(v, v > STRICT, args, || {
            format!("G{args:?} = {v} is not positive")
        });
    }
    report
}

/// `G(r, 0, r, 0, 0, r) > 0` for grid `r > 0`.
pub fn check_g2(g: &ImplicitRelation, grid: &Grid) -> ConditionReport {
    check_strict(g, grid, "G2", |r| [r, 0.0, r, 0.0, 0.0, r])
}

/// `G(r, r, 0, 0, r, r) > 0` for grid `r > 0`.
pub fn check_g3(g: &ImplicitRelation, grid: &Grid) -> ConditionReport {
    check_strict(g, grid, "G3", |r| [r, r, 0.0, 0.0, r, r])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_catalog, ComparisonFunction, Params};

    #[test]
    fn standard_grid_shape() {
        let g = Grid::standard();
        assert_eq!(g.values.len(), 101);
        assert_eq!(g.values[100], 10.0);
    }

    #[test]
    fn member_one_passes() {
        let p: Params = [("k".to_string(), 0.5)].into();
        let g = make_catalog("I", &p, None).unwrap();
        let grid = Grid::standard();
        assert!(check_g1(&g, &grid).holds);
        let g2 = check_g2(&g, &grid);
        assert!(g2.holds);
        assert!((g2.worst_margin - 0.1).abs() < 1e-15);
        assert!((check_g3(&g, &grid).worst_margin - 0.05).abs() < 1e-15);
    }

    #[test]
    fn increasing_fifth_argument_fails() {
        let g = ImplicitRelation::linear([1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let report = check_g1(&g, &Grid::standard());
        assert!(!report.holds);
        let w = report.witness.unwrap();
        assert!(w[4] > w[0] + w[1]);
    }

    #[test]
    fn steep_linear_form_is_refuted_without_phi() {
        let g = ImplicitRelation::linear([1.0, 0.0, -0.6, -0.6, 0.0, 0.0]);
        let report = check_g1(&g, &Grid::standard());
        assert!(!report.holds);
        let w = report.witness.unwrap();
        assert!(w[0] >= w[1] && w[0] > 0.0);
    }

    #[test]
    fn quotient_form_fails_third_condition() {
        let g = ImplicitRelation::quotient(ComparisonFunction::linear(0.5));
        let grid = Grid::standard();
        assert!(check_g1(&g, &grid).holds);
        assert!(check_g2(&g, &grid).holds);
        let g3 = check_g3(&g, &grid);
        assert!(!g3.holds);
        assert_eq!(g3.worst_margin, 0.0);
    }
}
