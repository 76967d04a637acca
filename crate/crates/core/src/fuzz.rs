//! Seeded random finite instances and a soundness sweep over them.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{make_catalog, ComparisonFunction, Params};
use crate::metric::FiniteMetricSpace;
use crate::relation::Relation;
use crate::solver::{error_bounds, iterate, FiniteSystem, MappingPair, DEFAULT_TOL_FINITE};
use crate::verify::{
    brute_force_coincidence, check_u1, verify, Contraction, FiniteInstance, Hypothesis, Rank,
    VerifyError,
};

/// Sweep configuration, also the on-disk seed file format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzConfig {
    pub seed: u64,
    /// Accepted instances to collect.
    pub instances: usize,
    pub max_attempts: usize,
    #[serde(default = "default_min_points")]
    pub min_points: usize,
    #[serde(default = "default_max_points")]
    pub max_points: usize,
}

fn default_min_points() -> usize {
    3
}

fn default_max_points() -> usize {
    8
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            instances: 500,
            max_attempts: 20_000,
            min_points: default_min_points(),
            max_points: default_max_points(),
        }
    }
}

/// Random catalog member with valid parameters; every member except II
/// derives a linear comparison function, and II is given one.
pub fn random_catalog(rng: &mut impl Rng) -> (String, Params, Option<ComparisonFunction>) {
    const IDS: [&str; 16] = [
        "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII", "XIII", "XIV",
        "XV", "XVI",
    ];
    let id = IDS[rng.gen_range(0..IDS.len())];
    let mut p = Params::new();
    let mut set = |name: &str, v: f64| {
        p.insert(name.to_string(), v);
    };
    let mut phi = None;
    match id {
        "I" | "X" | "XIII" => set("k", rng.gen_range(0.0..0.95)),
        "II" => phi = Some(ComparisonFunction::linear(rng.gen_range(0.0..0.95))),
        "III" | "IV" | "VIII" => set("k", rng.gen_range(0.0..0.49)),
        "V" => {
            let a1 = rng.gen_range(0.0..0.9);
            let rest = (1.0 - a1) / 2.0;
            let a2 = rng.gen_range(0.0..rest * 0.9);
            set("a1", a1);
            set("a2", a2);
            set("a3", rng.gen_range(0.0..(rest - a2) * 0.9 + 1e-9));
        }
        "VI" | "VII" => {
            set("k", rng.gen_range(0.0..0.95));
            set("L", rng.gen_range(0.0..3.0));
        }
        "IX" => {
            let w: Vec<f64> = (0..5).map(|_| rng.gen_range(0.01..1.0)).collect();
            // the fourth weight enters the comparison slope twice
            let scale = rng.gen_range(0.1..0.95) / (w.iter().sum::<f64>() + w[3]);
            for (i, wi) in w.iter().enumerate() {
                set(&format!("a{}", i + 1), wi * scale);
            }
        }
        "XI" => {
            set("k", rng.gen_range(0.0..0.95));
            set("a", rng.gen_range(0.0..0.49));
            set("b", rng.gen_range(0.0..0.49));
        }
        "XII" => {
            let a1 = rng.gen_range(0.01..0.9);
            let a2 = rng.gen_range(0.0..(1.0 - a1) * 0.9);
            set("a1", a1);
            set("a2", a2);
            set("a3", rng.gen_range(0.0..(1.0 - a1 - a2) * 0.9));
            set("a4", rng.gen_range(0.0..(1.0 - a1) * 0.9));
        }
        "XIV" => {
            let a1 = rng.gen_range(0.0..0.9);
            set("a1", a1);
            set("a2", rng.gen_range(0.0..(1.0 - a1) / 2.0 * 0.9));
            set("a3", rng.gen_range(0.0..(1.0 - a1) * 0.9));
        }
        "XV" => set("k", rng.gen_range(0.0..1.0 / 11.0 * 0.95)),
        _ => {
            set("a1", rng.gen_range(0.01..1.95));
            set("a2", rng.gen_range(0.01..3.0));
        }
    }
    (id.to_string(), p, phi)
}

/// Random instance on `n` points of the line with T valued in `g(X)`, Y
/// containing `T(X)`, and a relation grown from one start pair and closed
/// under the (T,g) rule.
pub fn random_instance(rng: &mut impl Rng, min_points: usize, max_points: usize) -> FiniteInstance {
    let n = rng.gen_range(min_points..=max_points);
    let mut coords: Vec<f64> = sample(rng, 41, n)
        .into_iter()
        .map(|i| i as f64 / 4.0)
        .collect();
    coords.sort_by(f64::total_cmp);
    let labels = coords.iter().map(|c| c.to_string()).collect();

    let g: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let mut g_image = g.clone();
    g_image.sort_unstable();
    g_image.dedup();
    // few distinct T-values keep contractions plausible
    let spread = rng.gen_range(1..=g_image.len().min(3));
    let targets: Vec<usize> = (0..spread)
        .map(|_| g_image[rng.gen_range(0..g_image.len())])
        .collect();
    let t: Vec<usize> = (0..n)
        .map(|_| targets[rng.gen_range(0..targets.len())])
        .collect();

    let mut in_y = vec![false; n];
    for &v in &t {
        in_y[v] = true;
    }
    for flag in in_y.iter_mut() {
        if rng.gen_bool(0.25) {
            *flag = true;
        }
    }
    let subspace = (0..n).filter(|&i| in_y[i]).collect();

    let x0 = rng.gen_range(0..n);
    let mut member = vec![false; n * n];
    member[g[x0] * n + t[x0]] = true;
    for _ in 0..rng.gen_range(0..=n) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        member[a * n + b] = true;
    }
    loop {
        let mut grew = false;
        for x in 0..n {
            for y in 0..n {
                if member[g[x] * n + g[y]] && !member[t[x] * n + t[y]] {
                    member[t[x] * n + t[y]] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let edges = (0..n * n).filter(|&i| member[i]).map(|i| (i / n, i % n));

    let (id, params, phi) = random_catalog(rng);
    FiniteInstance {
        space: FiniteMetricSpace::from_coordinates(labels, &coords, subspace)
            .expect("distinct coordinates give a metric"),
        pair: MappingPair::new(n, t, g).expect("maps are total"),
        relation: Relation::new(n, edges).expect("relation holds the start pair"),
        contraction: Contraction::Implicit(
            make_catalog(&id, &params, phi.as_ref()).expect("sampled parameters are in range"),
        ),
    }
}

/// Generator for attempt `index` of a sweep seeded with `seed`.
pub fn attempt_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub attempts: usize,
    pub accepted: usize,
    pub bound_violations: Vec<u64>,
    pub limit_violations: Vec<u64>,
    /// Attempts where u1' or u1'' held but u1 did not.
    pub path_exceptions: Vec<u64>,
    /// Attempts where the verifier's cross-check fired.
    pub inconsistencies: Vec<u64>,
}

impl FuzzSummary {
    pub fn clean(&self) -> bool {
        self.bound_violations.is_empty()
            && self.limit_violations.is_empty()
            && self.path_exceptions.is_empty()
            && self.inconsistencies.is_empty()
    }
}

/// Collects instances licensed at least to a coincidence point and checks
/// the a priori bound, the limit, and the path implications on each.
pub fn sweep(config: &FuzzConfig) -> FuzzSummary {
    let mut summary = FuzzSummary {
        seed: config.seed,
        ..FuzzSummary::default()
    };
    for index in 0..config.max_attempts as u64 {
        if summary.accepted >= config.instances {
            break;
        }
        summary.attempts += 1;
        let mut rng = attempt_rng(config.seed, index);
        let inst = random_instance(&mut rng, config.min_points, config.max_points);
        let report = match verify(&inst) {
            Ok(r) => r,
            Err(VerifyError::Inconsistent(_)) => {
                summary.inconsistencies.push(index);
                continue;
            }
            Err(_) => continue,
        };
        if report.rank < Rank::Coincidence {
            continue;
        }
        summary.accepted += 1;

        let witness_u1 = report.status(Hypothesis::U1Prime).accepted()
            || report.status(Hypothesis::U1DoublePrime).accepted();
        if witness_u1 && !check_u1(&inst.pair, &inst.relation, true).holds {
            summary.path_exceptions.push(index);
        }

        let system = FiniteSystem {
            space: &inst.space,
            pair: &inst.pair,
        };
        let x0 = report.start.expect("condition (a) gives a start");
        let phi = inst
            .contraction
            .relation()
            .phi()
            .cloned()
            .expect("G1 needs a comparison function");
        match iterate(&system, x0, DEFAULT_TOL_FINITE, 10 * inst.pair.len() + 10) {
            Ok((trace, cert)) => {
                if !error_bounds(&system, &trace, &phi).holds {
                    summary.bound_violations.push(index);
                }
                if !brute_force_coincidence(&inst.pair)
                    .points
                    .contains(&cert.point)
                {
                    summary.limit_violations.push(index);
                }
            }
            Err(_) => summary.limit_violations.push(index),
        }
    }
    summary
}
