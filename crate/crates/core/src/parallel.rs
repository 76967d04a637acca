//! Pair scans split across worker threads.
//!
//! Results never depend on the worker count: the first-witness scan reduces
//! by least `(x, y)` and the maximum scan breaks ties the same way.

use std::thread;

/// Below this many rows a scan runs on the calling thread.
const PARALLEL_ROWS: usize = 64;

/// Worker cap from `RELFIX_THREADS`, else the machine's parallelism.
pub fn worker_count() -> usize {
    std::env::var("RELFIX_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

fn row_chunks(n: usize, workers: usize) -> Vec<(usize, usize)> {
    let per = n.div_ceil(workers.max(1));
    (0..n)
        .step_by(per.max(1))
        .map(|lo| (lo, (lo + per).min(n)))
        .collect()
}

/// Least pair `(x, y)` in lexicographic order with `pred(x, y)`.
pub fn first_pair<F>(n: usize, pred: F) -> Option<(usize, usize)>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    let scan =
        |lo: usize, hi: usize| (lo..hi).find_map(|x| (0..n).find(|&y| pred(x, y)).map(|y| (x, y)));
    let workers = worker_count();
    if n < PARALLEL_ROWS || workers == 1 {
        return scan(0, n);
    }
    thread::scope(|s| {
        let handles: Vec<_> = row_chunks(n, workers)
            .into_iter()
            .map(|(lo, hi)| s.spawn(move || scan(lo, hi)))
            .collect();
        // chunks are in row order, so the first hit is the global minimum
        handles
            .into_iter()
            .map(|h| h.join().expect("pair scan worker panicked"))
            .find_map(|r| r)
    })
}

/// Largest value and the pair attaining it.
pub type BestPair = Option<((usize, usize), f64)>;

/// Maximum of `value(x, y)` over pairs admitted by `admit`, with the least
/// pair winning ties. Also returns the number of admitted pairs.
pub fn max_pair<A, V>(n: usize, admit: A, value: V) -> (BestPair, usize)
where
    A: Fn(usize, usize) -> bool + Sync,
    V: Fn(usize, usize) -> f64 + Sync,
{
    let scan = |lo: usize, hi: usize| {
        let mut best: BestPair = None;
        let mut count = 0;
        for x in lo..hi {
            for y in 0..n {
                if !admit(x, y) {
                    continue;
                }
                count += 1;
                let v = value(x, y);
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some(((x, y), v));
                }
            }
        }
        (best, count)
    };
    let workers = worker_count();
    if n < PARALLEL_ROWS || workers == 1 {
        return scan(0, n);
    }
    thread::scope(|s| {
        let handles: Vec<_> = row_chunks(n, workers)
            .into_iter()
            .map(|(lo, hi)| s.spawn(move || scan(lo, hi)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("pair scan worker panicked"))
            .fold((None, 0), |(best, total): (BestPair, usize), (b, c)| {
                let best = match (best, b) {
                    (Some(a), Some(b)) if b.1 > a.1 => Some(b),
                    (None, b) => b,
                    (a, _) => a,
                };
                (best, total + c)
            })
    })
}
