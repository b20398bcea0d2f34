use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::field::norms::{grad_sq, l4_pow4, mass, spectral_weighted_sq};
use crate::field::WaveguideField;

/// Mass, energy, momentum and full energy of a field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConservedSet {
    pub mass: f64,
    pub energy: f64,
    pub momentum: [f64; 2],
    pub full_energy: f64,
}

/// One row of the diagnostics time series.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub time: f64,
    pub mass: f64,
    pub energy: f64,
    pub momentum_x1: f64,
    pub momentum_x2: f64,
    pub full_energy: f64,
    pub e_ls_if_resonant: Option<f64>,
}

impl DiagnosticsRecord {
    pub fn from_set(step: usize, time: f64, c: &ConservedSet) -> Self {
        DiagnosticsRecord {
            step,
            time,
            mass: c.mass,
            energy: c.energy,
            momentum_x1: c.momentum[0],
            momentum_x2: c.momentum[1],
            full_energy: c.full_energy,
            e_ls_if_resonant: None,
        }
    }
}

// first derivatives drop the unpaired Nyquist mode
pub(crate) fn odd_freq(xi: f64, side: f64, n: usize) -> f64 {
    if (xi * side / TAU).abs() >= n as f64 / 2.0 - 1e-9 {
        0.0
    } else {
        xi
    }
}

/// `P = Im ∫ ū ∇_x u` over the two R² directions.
pub fn momentum(f: &WaveguideField) -> [f64; 2] {
    let (l, n) = (f.spec().box_side, f.spec().nx);
    [spectral_weighted_sq(f, |z| odd_freq(z[0], l, n)), spectral_weighted_sq(f, |z| odd_freq(z[1], l, n))]
}

/// `E = ½‖∇u‖² + ¼‖u‖⁴_{L⁴}`.
pub fn energy(f: &WaveguideField) -> f64 {
    0.5 * grad_sq(f) + 0.25 * l4_pow4(f)
}

pub fn conserved_set(f: &WaveguideField) -> ConservedSet {
    let m = mass(f);
    let e = energy(f);
    ConservedSet { mass: m, energy: e, momentum: momentum(f), full_energy: 0.5 * m + e }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GridSpec;
    use crate::C64;

    #[test]
    fn zero_field() {
        let c = conserved_set(&WaveguideField::zeros(&GridSpec::new(6.0, 8, 3, 0.1).unwrap()));
        assert_eq!(c, ConservedSet::default());
    }

    #[test]
    fn real_field_has_no_momentum() {
        let spec = GridSpec::new(8.0, 16, 3, 0.1).unwrap();
        let f = WaveguideField::from_fn(&spec, |p| C64::new((-(p[0] * p[0]) - 2.0 * p[1] * p[1]).exp() * (1.0 + p[2].cos()), 0.0));
        let c = conserved_set(&f);
        assert!(c.momentum[0].abs() < 1e-13 && c.momentum[1].abs() < 1e-13);
        assert!(c.energy >= 0.0 && c.full_energy >= c.mass / 2.0);
    }

    #[test]
    fn plane_wave_energy() {
        let spec = GridSpec::new(6.0, 8, 5, 0.1).unwrap();
        let amp = C64::new(0.3, 0.4);
        let f = WaveguideField::plane_wave(&spec, amp, [0.0, 0.0, 2.0, -1.0]);
        let vol = spec.volume();
        let a2 = amp.norm_sqr();
        let want = 0.5 * a2 * 5.0 * vol + 0.25 * a2 * a2 * vol;
        assert!((energy(&f) - want).abs() < 1e-12 * want);
    }

    #[test]
    fn moving_wave_momentum() {
        let spec = GridSpec::new(6.0, 8, 3, 0.1).unwrap();
        let xi = TAU / 6.0;
        let f = WaveguideField::plane_wave(&spec, C64::new(1.0, 0.0), [xi, 0.0, 0.0, 0.0]);
        let p = momentum(&f);
        assert!((p[0] - xi * spec.volume()).abs() < 1e-12 * spec.volume());
        assert!(p[1].abs() < 1e-12);
    }
}
