//! N-dimensional FFTs on row-major buffers, one axis at a time.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let planner = PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()));
    let mut p = planner.lock().expect("fft planner poisoned");
    if inverse {
        p.plan_fft_inverse(n)
    } else {
        p.plan_fft_forward(n)
    }
}

// how many lines go into one parallel task
const LINES_PER_TASK: usize = 64;

/// Unnormalized transform of `data` (shape `shape`, row-major) along `axes`.
/// Forward uses `e^{-2πi kn/N}`, inverse `e^{+2πi kn/N}`.
pub fn transform_axes(data: &mut [C64], shape: &[usize], axes: &[usize], inverse: bool) {
    debug_assert_eq!(data.len(), shape.iter().product::<usize>());
    for &axis in axes {
        let n = shape[axis];
        if n == 1 {
            continue;
        }
        let fft = plan(n, inverse);
        let stride: usize = shape[axis + 1..].iter().product();
        if stride == 1 {
            data.par_chunks_mut(n * LINES_PER_TASK).for_each(|c| fft.process(c));
            continue;
        }
        // gather strided lines into contiguous storage, transform, scatter back
        let block = n * stride;
        let mut buf = vec![C64::new(0.0, 0.0); data.len()];
        {
            let src = &*data;
            buf.par_chunks_mut(n).enumerate().for_each(|(line, out)| {
                let o = line / stride;
                let s = line % stride;
                let base = o * block + s;
                for (k, v) in out.iter_mut().enumerate() {
                    *v = src[base + k * stride];
                }
            });
        }
        buf.par_chunks_mut(n * LINES_PER_TASK).for_each(|c| fft.process(c));
        data.par_chunks_mut(block).enumerate().for_each(|(o, blk)| {
            for s in 0..stride {
                let line = &buf[(o * stride + s) * n..(o * stride + s + 1) * n];
                for (k, v) in line.iter().enumerate() {
                    blk[k * stride + s] = *v;
                }
            }
        });
    }
}

/// Signed integer frequency of storage index `k` on an axis of length `n`.
/// For even `n` the Nyquist index maps to `-n/2`.
pub fn signed_index(k: usize, n: usize) -> i64 {
    if 2 * k < n {
        k as i64
    } else {
        k as i64 - n as i64
    }
}
