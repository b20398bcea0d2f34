//! Littlewood–Paley shells and the de-aliasing mask.
//!
//! The cutoff template is `η(r) = 1` for `r ≤ 1`, `0` for `r ≥ 2`, and the
//! quintic smoothstep `1 - (6s⁵ - 15s⁴ + 10s³)`, `s = r - 1`, in between.
//! It is C² across both seams. Shells are `P_1 = η(|ζ|)` and
//! `P_N = η(|ζ|/N) - η(2|ζ|/N)` for `N ≥ 2`, so `Σ_{N ≤ K} P_N = η(|ζ|/K)`.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::waveguide::WaveguideField;
use crate::error::{Error, Result};

pub fn eta(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let s = r - 1.0;
        1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
    }
}

pub fn check_dyadic(n: u64) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::arg(format!("frequency level must be a power of two >= 1, got {n}")));
    }
    Ok(())
}

/// Symbol of `P_N` at radius `r`.
pub fn shell_symbol(n: u64, r: f64) -> f64 {
    let n = n as f64;
    if n == 1.0 {
        eta(r)
    } else {
        eta(r / n) - eta(2.0 * r / n)
    }
}

fn radius(z: [f64; 4]) -> f64 {
    (z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3]).sqrt()
}

/// `P_N f` on the full 4-D frequency `(ξ, k)`.
pub fn lp_project(f: &WaveguideField, n: u64) -> Result<WaveguideField> {
    check_dyadic(n)?;
    Ok(f.with_symbol(|z| C64::new(shell_symbol(n, radius(z)), 0.0)))
}

/// `P_{≤N} f = Σ_{N' ≤ N} P_{N'} f`, symbol `η(|ζ|/N)`.
pub fn lp_project_le(f: &WaveguideField, n: u64) -> Result<WaveguideField> {
    check_dyadic(n)?;
    let nf = n as f64;
    Ok(f.with_symbol(|z| C64::new(eta(radius(z) / nf), 0.0)))
}

/// Dyadic levels `1, 2, ..., K` with `K` the smallest power of two at or
/// above the largest resolved `|ζ|`, so the shells sum to the identity.
pub fn resolved_shells(spec: &GridSpec) -> Vec<u64> {
    let top = spec.max_frequency().max(1.0);
    let mut out = vec![1u64];
    while (*out.last().unwrap() as f64) < top {
        let next = out.last().unwrap() * 2;
        out.push(next);
    }
    out
}

/// Which directions get the 2/3-rule truncation after a nonlinear product.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dealias {
    Off,
    /// The two R² directions only; the torus modes stay exact.
    #[default]
    Box,
    All,
}

fn keep(freq: f64, side: f64, n: usize) -> bool {
    (freq * side / TAU).abs() <= n as f64 / 3.0 + 1e-9
}

impl Dealias {
    /// The 0/1 mask as a symbol, or `None` when nothing is removed.
    pub fn mask(self, spec: &GridSpec) -> Option<impl Fn([f64; 4]) -> C64 + Sync> {
        if self == Dealias::Off {
            return None;
        }
        let (l, nx) = (spec.box_side, spec.nx);
        let (p, my) = (spec.torus_period, spec.my);
        let all = self == Dealias::All;
        Some(move |z: [f64; 4]| {
            let ok = keep(z[0], l, nx) && keep(z[1], l, nx) && (!all || (keep(z[2], p, my) && keep(z[3], p, my)));
            C64::new(if ok { 1.0 } else { 0.0 }, 0.0)
        })
    }

    pub fn apply(self, f: &mut WaveguideField) {
        if let Some(m) = self.mask(&f.spec().clone()) {
            f.apply_symbol(m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eta_template() {
        assert_eq!(eta(0.3), 1.0);
        assert_eq!(eta(1.0), 1.0);
        assert_eq!(eta(2.0), 0.0);
        assert!((eta(1.5) - 0.5).abs() < 1e-15);
        // C¹ at the seams: one-sided difference quotients vanish
        let h = 1e-6;
        assert!((eta(1.0 + h) - 1.0).abs() / h < 1e-9);
        assert!(eta(2.0 - h) / h < 1e-9);
        for i in 0..100 {
            let r = 1.0 + i as f64 / 100.0;
            assert!(eta(r) >= eta(r + 0.01));
        }
    }

    #[test]
    fn non_dyadic_rejected() {
        let f = WaveguideField::zeros(&GridSpec::new(6.0, 8, 3, 0.1).unwrap());
        assert!(lp_project(&f, 3).is_err());
        assert!(lp_project(&f, 0).is_err());
        assert!(lp_project(&f, 4).is_ok());
    }

    #[test]
    fn plane_wave_shell_locality() {
        let spec = GridSpec::new(6.0, 8, 3, 0.1).unwrap();
        let f = WaveguideField::plane_wave(&spec, C64::new(1.0, 0.0), [0.0, 0.0, 1.0, 0.0]);
        assert!(lp_project(&f, 1).unwrap().max_abs_diff(&f).unwrap() < 1e-13);
        assert!(lp_project(&f, 4).unwrap().physical().data().iter().all(|v| v.norm() < 1e-13));
    }

    #[test]
    fn shells_partition_unity() {
        let spec = GridSpec::new(5.0, 16, 5, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = WaveguideField::random_band_limited(&spec, &mut rng, f64::INFINITY, 0.0);
        let mut acc = WaveguideField::zeros(&spec);
        for n in resolved_shells(&spec) {
            acc = acc.add(&lp_project(&f, n).unwrap()).unwrap();
        }
        let err = acc.sub(&f).unwrap().raw_sq_sum().sqrt() / f.raw_sq_sum().sqrt();
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn box_mask_leaves_torus_alone() {
        let spec = GridSpec::new(6.0, 8, 3, 0.1).unwrap();
        let m = Dealias::Box.mask(&spec).unwrap();
        assert_eq!(m([0.0, 0.0, 1.0, -1.0]).re, 1.0);
        let xi_top = TAU / 6.0 * 3.0;
        assert_eq!(m([xi_top, 0.0, 0.0, 0.0]).re, 0.0);
        let spec5 = GridSpec::new(6.0, 8, 5, 0.1).unwrap();
        let a = Dealias::All.mask(&spec5).unwrap();
        assert_eq!(a([0.0, 0.0, 1.0, 0.0]).re, 1.0);
        assert_eq!(a([0.0, 0.0, 2.0, 0.0]).re, 0.0);
        assert!(Dealias::Off.mask(&spec).is_none());
    }
}
