//! Probe of the frequency-localized Strichartz estimate
//! `‖e^{itΔ}P_{≤N}u0‖_{l^q_γ L^p(I_γ × R²×T²)} ≲ N^{2−6/p}‖u0‖_{L²}`
//! with `I_γ = [2πγ, 2π(γ+1))`.
//!
//! Only a finite number of windows is used and each window's time integral
//! is a midpoint rule, so the probe measures a restricted norm.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::linear::linear_symbol;
use crate::field::multiplier::check_dyadic;
use crate::field::norms::mass;
use crate::field::{eta, GridSpec, WaveguideField};

/// The scaling exponent `2 − 6/p`.
pub fn strichartz_exponent(p: f64) -> f64 {
    2.0 - 6.0 / p
}

/// The dual exponent with `1/q + 1/p = 1/2`.
pub fn paired_q(p: f64) -> f64 {
    1.0 / (0.5 - 1.0 / p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzProbeConfig {
    pub p: f64,
    pub q: f64,
    /// Dyadic frequency level.
    pub n: u64,
    /// Number of random data in a probe run.
    #[serde(default = "default_samples")]
    pub sample_count: usize,
    /// Number of length-2π windows.
    #[serde(default = "default_windows")]
    pub windows: usize,
    /// Midpoint nodes per window.
    #[serde(default = "default_nodes")]
    pub nodes_per_window: usize,
}

fn default_samples() -> usize {
    20
}
fn default_windows() -> usize {
    8
}
fn default_nodes() -> usize {
    64
}

impl StrichartzProbeConfig {
    /// Config for exponent `p` with `q` determined by `p`.
    pub fn new(p: f64, n: u64) -> Result<Self> {
        let c = StrichartzProbeConfig {
            p,
            q: paired_q(p),
            n,
            sample_count: default_samples(),
            windows: default_windows(),
            nodes_per_window: default_nodes(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 10.0 / 3.0) || !self.p.is_finite() {
            return Err(Error::arg(format!("p must exceed 10/3, got {}", self.p)));
        }
        if (1.0 / self.q + 1.0 / self.p - 0.5).abs() > 1e-12 {
            return Err(Error::arg(format!("q = {} violates 1/q + 1/p = 1/2 for p = {}", self.q, self.p)));
        }
        check_dyadic(self.n)?;
        if self.windows == 0 || self.nodes_per_window == 0 {
            return Err(Error::arg("windows and nodes_per_window must be >= 1"));
        }
        Ok(())
    }
}

/// One probe measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrichartzRecord {
    pub grid: GridSpec,
    pub p: f64,
    pub q: f64,
    #[serde(rename = "N")]
    pub n: u64,
    pub seed: u64,
    pub quotient: f64,
}

/// `‖e^{itΔ}P_{≤N}u0‖_{l^q_γ L^p} / (N^{2−6/p}‖u0‖_{L²})`.
pub fn strichartz_quotient(u0: &WaveguideField, cfg: &StrichartzProbeConfig) -> Result<f64> {
    cfg.validate()?;
    let m = mass(u0);
    if m == 0.0 {
        return Err(Error::arg("the Strichartz quotient is undefined for zero data"));
    }
    let nf = cfg.n as f64;
    let low = u0.with_symbol(|z| {
        let r = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3]).sqrt();
        crate::C64::new(eta(r / nf), 0.0)
    });
    let cell = u0.spec().cell_volume();
    let h = TAU / cfg.nodes_per_window as f64;
    let mut lq = 0.0;
    for g in 0..cfg.windows {
        let mut lp = 0.0;
        for k in 0..cfg.nodes_per_window {
            let t = TAU * g as f64 + (k as f64 + 0.5) * h;
            let u = low.with_symbol(linear_symbol(t)).into_physical();
            lp += h * cell * crate::par::sum_map(u.data(), |v| v.norm().powf(cfg.p));
        }
        lq += lp.powf(cfg.q / cfg.p);
    }
    let norm = lq.powf(1.0 / cfg.q);
    Ok(norm / (nf.powf(strichartz_exponent(cfg.p)) * m.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exponents() {
        assert_eq!(strichartz_exponent(4.0), 0.5);
        assert_eq!(paired_q(4.0), 4.0);
        assert!(StrichartzProbeConfig::new(10.0 / 3.0, 1).is_err());
        assert!(StrichartzProbeConfig::new(4.0, 3).is_err());
        let mut c = StrichartzProbeConfig::new(4.0, 2).unwrap();
        c.q = 3.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn homogeneous_of_degree_zero() {
        let spec = GridSpec::new(4.0, 8, 3, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = WaveguideField::random_band_limited(&spec, &mut rng, 6.0, 1.0);
        let mut cfg = StrichartzProbeConfig::new(4.0, 2).unwrap();
        cfg.windows = 2;
        cfg.nodes_per_window = 8;
        let a = strichartz_quotient(&u, &cfg).unwrap();
        let b = strichartz_quotient(&u.scale(C64::new(2.0, 0.0)), &cfg).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        assert!(strichartz_quotient(&WaveguideField::zeros(&spec), &cfg).is_err());
    }
}
