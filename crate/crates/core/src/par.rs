//! Reduction helpers with a fixed summation order.
//!
//! Partial sums are taken over fixed-size chunks and then added in chunk
//! order, so results do not depend on how rayon schedules the work. Setting
//! `WGLAB_DETERMINISTIC=1` additionally runs reductions on the calling thread.

use std::sync::atomic::{AtomicU8, Ordering};

use rayon::prelude::*;

const CHUNK: usize = 4096;

// 0 = unread, 1 = off, 2 = on
static MODE: AtomicU8 = AtomicU8::new(0);

pub fn deterministic() -> bool {
    match MODE.load(Ordering::Relaxed) {
        1 => false,
        2 => true,
        _ => {
            let on = std::env::var("WGLAB_DETERMINISTIC").map(|v| v == "1").unwrap_or(false);
            MODE.store(if on { 2 } else { 1 }, Ordering::Relaxed);
            on
        }
    }
}

pub fn set_deterministic(on: bool) {
    MODE.store(if on { 2 } else { 1 }, Ordering::Relaxed);
}

/// `Σ f(x)` over a slice, chunked in a fixed order.
pub fn sum_map<T: Sync>(xs: &[T], f: impl Fn(&T) -> f64 + Sync) -> f64 {
    if deterministic() || xs.len() <= CHUNK {
        return xs.chunks(CHUNK).map(|c| c.iter().map(&f).sum::<f64>()).sum();
    }
    let partials: Vec<f64> = xs.par_chunks(CHUNK).map(|c| c.iter().map(&f).sum::<f64>()).collect();
    partials.iter().sum()
}

/// `Σ f(i)` for `i in 0..n`, chunked in a fixed order.
pub fn sum_index(n: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    let chunks = n.div_ceil(CHUNK);
    let part = |c: usize| -> f64 {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        (lo..hi).map(&f).sum()
    };
    if deterministic() || chunks <= 1 {
        return (0..chunks).map(part).sum();
    }
    let partials: Vec<f64> = (0..chunks).into_par_iter().map(part).collect();
    partials.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunked_sums_match_sequential_order() {
        let xs: Vec<f64> = (0..20_000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let a = sum_map(&xs, |x| *x);
        let b = sum_index(xs.len(), |i| xs[i]);
        assert_eq!(a.to_bits(), b.to_bits());
        let seq: f64 = xs.chunks(CHUNK).map(|c| c.iter().sum::<f64>()).sum();
        assert_eq!(a.to_bits(), seq.to_bits());
    }
}
