use num_complex::Complex64 as C64;

use crate::field::WaveguideField;

/// Symbol of `e^{itΔ}`: `e^{-it|ζ|²}`.
pub fn linear_symbol(t: f64) -> impl Fn([f64; 4]) -> C64 + Sync {
    move |z| C64::from_polar(1.0, -t * (z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3]))
}

/// `e^{itΔ} f`, returned in the representation of `f`.
pub fn linear_propagate(f: &WaveguideField, t: f64) -> WaveguideField {
    let repr = f.repr();
    f.with_symbol(linear_symbol(t)).in_repr(repr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::norms::mass;
    use crate::field::GridSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn zero_time_is_identity() {
        let spec = GridSpec::new(6.0, 8, 3, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = WaveguideField::random_band_limited(&spec, &mut rng, f64::INFINITY, 0.0);
        assert!(linear_propagate(&f, 0.0).max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn torus_eigenfunction_at_time_pi() {
        let spec = GridSpec::new(6.0, 8, 3, 0.1).unwrap();
        let f = WaveguideField::plane_wave(&spec, C64::new(1.0, 0.0), [0.0, 0.0, 1.0, 0.0]);
        let g = linear_propagate(&f, PI);
        assert!(g.max_abs_diff(&f.scale_real(-1.0)).unwrap() < 1e-12);
    }

    #[test]
    fn unitary_and_group_property() {
        let spec = GridSpec::new(5.0, 8, 5, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = WaveguideField::random_band_limited(&spec, &mut rng, f64::INFINITY, 0.0);
        let a = linear_propagate(&linear_propagate(&f, 0.3), 0.45);
        let b = linear_propagate(&f, 0.75);
        let m = mass(&f);
        assert!((mass(&b) - m).abs() <= 1e-12 * m);
        assert!(mass(&a.sub(&b).unwrap()).sqrt() <= 1e-12 * m.sqrt());
    }
}
