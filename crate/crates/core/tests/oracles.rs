//! Library predicates against brute-force enumeration on small random inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relfix::metric::{finite_d_self_closed, FiniteMetricSpace};
use relfix::relation::{find_g_path, g_directedness, Relation};
use relfix::solver::MappingPair;
use relfix::verify::{brute_force_coincidence, check_u1_prime, gr_continuity_violation};

struct Small {
    n: usize,
    t: Vec<usize>,
    g: Vec<usize>,
    r: Relation,
}

fn small(rng: &mut ChaCha8Rng, max_n: usize) -> Small {
    let n = rng.gen_range(2..=max_n);
    let t = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let g = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let density = rng.gen_range(0.1..0.8);
    let mut edges: Vec<(usize, usize)> = (0..n * n)
        .filter(|_| rng.gen_bool(density))
        .map(|i| (i / n, i % n))
        .collect();
    if edges.is_empty() {
        edges.push((0, 0));
    }
    let r = Relation::new(n, edges).unwrap();
    Small { n, t, g, r }
}

fn comparable(r: &Relation, a: usize, b: usize) -> bool {
    r.contains(a, b) || r.contains(b, a)
}

/// Every sequence of `len + 1` points, in lexicographic order.
fn sequences(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(len as u32 + 1);
    (0..total).map(move |mut code| {
        let mut seq = vec![0; len + 1];
        for slot in seq.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        seq
    })
}

fn is_g_path(s: &Small, w: &[usize], alpha: usize, beta: usize, interior: bool) -> bool {
    s.g[w[0]] == alpha
        && s.g[w[w.len() - 1]] == beta
        && w.windows(2).all(|p| comparable(&s.r, s.g[p[0]], s.g[p[1]]))
        && (!interior
            || w[1..w.len() - 1]
                .iter()
                .all(|&v| comparable(&s.r, s.g[v], s.t[v])))
}

#[test]
fn shortest_g_paths_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..150 {
        let s = small(&mut rng, 5);
        let images: Vec<usize> = {
            let mut v = s.g.clone();
            v.sort_unstable();
            v.dedup();
            v
        };
        for &alpha in &images {
            for &beta in &images {
                for interior in [false, true] {
                    let found = find_g_path(&s.r, &s.g, &s.t, alpha, beta, interior, 4).unwrap();
                    let shortest = (1..=4).find(|&len| {
                        sequences(s.n, len).any(|w| is_g_path(&s, &w, alpha, beta, interior))
                    });
                    match (&found, shortest) {
                        (Some(p), Some(len)) => {
                            assert_eq!(p.length(), len);
                            assert!(p.is_valid(&s.r, &s.g, &s.t, alpha, beta, interior));
                            assert!(is_g_path(&s, &p.witnesses, alpha, beta, interior));
                        }
                        (None, None) => {}
                        _ => panic!("search {found:?} vs enumeration {shortest:?}"),
                    }
                }
            }
        }
    }
}

#[test]
fn delta_matches_set_builder() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..300 {
        let s = small(&mut rng, 6);
        let d: Vec<usize> = (0..s.n).filter(|_| rng.gen_bool(0.5)).collect();
        let out = g_directedness(&d, &s.g, &s.r);
        let expected: Vec<usize> = (0..s.n)
            .filter(|&z| {
                d.iter().any(|&x| {
                    d.iter()
                        .any(|&y| s.r.contains(x, s.g[z]) && s.r.contains(y, s.g[z]))
                })
            })
            .collect();
        assert_eq!(out.delta, expected);
        let directed = d.iter().all(|&x| {
            d.iter()
                .all(|&y| (0..s.n).any(|z| s.r.contains(x, s.g[z]) && s.r.contains(y, s.g[z])))
        });
        assert_eq!(out.holds, directed);
    }
}

#[test]
fn coincidence_sets_match_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..300 {
        let s = small(&mut rng, 7);
        let pair = MappingPair::new(s.n, s.t.clone(), s.g.clone()).unwrap();
        let sets = brute_force_coincidence(&pair);
        let points: Vec<usize> = (0..s.n).filter(|&x| s.t[x] == s.g[x]).collect();
        let mut values: Vec<usize> = points.iter().map(|&x| s.t[x]).collect();
        values.sort_unstable();
        values.dedup();
        let fixed: Vec<usize> = (0..s.n).filter(|&x| s.t[x] == x && s.g[x] == x).collect();
        assert_eq!(sets.points, points);
        assert_eq!(sets.values, values);
        assert_eq!(sets.common_fixed_points, fixed);
    }
}

#[test]
fn total_comparability_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..300 {
        let s = small(&mut rng, 6);
        let pair = MappingPair::new(s.n, s.t.clone(), s.g.clone()).unwrap();
        let all =
            s.g.iter()
                .all(|&a| s.g.iter().all(|&b| comparable(&s.r, a, b)));
        assert_eq!(check_u1_prime(&pair, &s.r).is_none(), all);
    }
}

/// A convergent R-preserving sequence on a finite space ends in a cycle on
/// which g is constant; (g,R)-continuity at every x with that g-value asks
/// T to equal Tx along the cycle.
fn gr_continuity_oracle(s: &Small) -> bool {
    let max_len = s.n + 1;
    (1..=max_len).all(|len| {
        sequences(s.n, len - 1).all(|cycle| {
            let closes =
                (0..cycle.len()).all(|i| s.r.contains(cycle[i], cycle[(i + 1) % cycle.len()]));
            let v = s.g[cycle[0]];
            let g_constant = cycle.iter().all(|&x| s.g[x] == v);
            let fibre = (0..s.n).filter(|&x| s.g[x] == v);
            !(closes && g_constant)
                || fibre
                    .into_iter()
                    .all(|x| cycle.iter().all(|&c| s.t[c] == s.t[x]))
        })
    })
}

#[test]
fn gr_continuity_matches_cycle_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut violations = 0;
    for _ in 0..200 {
        let s = small(&mut rng, 5);
        let pair = MappingPair::new(s.n, s.t.clone(), s.g.clone()).unwrap();
        let oracle = gr_continuity_oracle(&s);
        assert_eq!(gr_continuity_violation(&pair, &s.r).is_none(), oracle);
        violations += usize::from(!oracle);
    }
    assert!(violations > 0);
}

/// On a finite space every convergent R-preserving sequence is eventually
/// constant, so its tail is comparable to the limit.
#[test]
fn self_closedness_matches_tail_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..100 {
        let s = small(&mut rng, 5);
        let coords: Vec<f64> = (0..s.n).map(|i| i as f64).collect();
        let labels = (0..s.n).map(|i| i.to_string()).collect();
        let space = FiniteMetricSpace::from_coordinates(labels, &coords, vec![0]).unwrap();
        let all: Vec<usize> = (0..s.n).collect();
        let oracle = (0..s.n).all(|y| !s.r.contains(y, y) || comparable(&s.r, y, y));
        assert_eq!(finite_d_self_closed(&space, &s.r, &all).holds, oracle);
    }
}
