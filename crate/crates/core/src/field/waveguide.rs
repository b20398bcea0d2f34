use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::transform;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Repr {
    Physical,
    Spectral,
}

impl Repr {
    pub fn name(self) -> &'static str {
        match self {
            Repr::Physical => "physical",
            Repr::Spectral => "spectral",
        }
    }
}

/// A complex field on the 4-D grid, stored row-major over `(x1, x2, y1, y2)`.
///
/// In the spectral representation the entries are Fourier-series
/// coefficients, so `‖u‖²_{L²} = volume · Σ|c|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveguideField {
    spec: GridSpec,
    data: Vec<C64>,
    repr: Repr,
}

const ALL_AXES: [usize; 4] = [0, 1, 2, 3];

impl WaveguideField {
    pub fn zeros(spec: &GridSpec) -> Self {
        WaveguideField { spec: spec.clone(), data: vec![C64::new(0.0, 0.0); spec.len()], repr: Repr::Physical }
    }

    /// Samples `f(x1, x2, y1, y2)` at the grid points.
    pub fn from_fn(spec: &GridSpec, f: impl Fn([f64; 4]) -> C64 + Sync) -> Self {
        let x = spec.x_axis().coords();
        let y = spec.y_axis().coords();
        let (nx, my) = (spec.nx, spec.my);
        let mut data = vec![C64::new(0.0, 0.0); spec.len()];
        data.par_chunks_mut(my * my).enumerate().for_each(|(row, out)| {
            let (i1, i2) = (row / nx, row % nx);
            for j1 in 0..my {
                for j2 in 0..my {
                    out[j1 * my + j2] = f([x[i1], x[i2], y[j1], y[j2]]);
                }
            }
        });
        WaveguideField { spec: spec.clone(), data, repr: Repr::Physical }
    }

    /// Builds spectral coefficients from `f(ξ1, ξ2, k1, k2)`.
    pub fn from_spectral_fn(spec: &GridSpec, f: impl Fn([f64; 4]) -> C64 + Sync) -> Self {
        let data = Self::symbol_table(spec, f);
        WaveguideField { spec: spec.clone(), data, repr: Repr::Spectral }
    }

    pub fn from_data(spec: &GridSpec, repr: Repr, data: Vec<C64>) -> Result<Self> {
        spec.validate()?;
        if data.len() != spec.len() {
            return Err(Error::GridMismatch(format!("data holds {} values, grid needs {}", data.len(), spec.len())));
        }
        if data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::arg("field data contains non-finite values"));
        }
        Ok(WaveguideField { spec: spec.clone(), data, repr })
    }

    /// `amp · e^{i⟨ζ, (x, y)⟩}` for a 4-vector of angular frequencies.
    pub fn plane_wave(spec: &GridSpec, amp: C64, zeta: [f64; 4]) -> Self {
        Self::from_fn(spec, |p| amp * C64::from_polar(1.0, zeta[0] * p[0] + zeta[1] * p[1] + zeta[2] * p[2] + zeta[3] * p[3]))
    }

    /// Random coefficients with standard normal parts on `|ζ| ≤ band`,
    /// weighted by `⟨ζ⟩^{-decay}`.
    pub fn random_band_limited(spec: &GridSpec, rng: &mut impl Rng, band: f64, decay: f64) -> Self {
        let fx = spec.x_axis().freqs();
        let fy = spec.y_axis().freqs();
        let (nx, my) = (spec.nx, spec.my);
        let mut data = vec![C64::new(0.0, 0.0); spec.len()];
        for (idx, v) in data.iter_mut().enumerate() {
            let j2 = idx % my;
            let j1 = (idx / my) % my;
            let i2 = (idx / (my * my)) % nx;
            let i1 = idx / (my * my * nx);
            let r2 = fx[i1] * fx[i1] + fx[i2] * fx[i2] + fy[j1] * fy[j1] + fy[j2] * fy[j2];
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            if r2.sqrt() <= band {
                *v = C64::new(re, im) * (1.0 + r2).powf(-decay / 2.0);
            }
        }
        WaveguideField { spec: spec.clone(), data, repr: Repr::Spectral }.into_physical()
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn to_spectral(&self) -> Result<Self> {
        if self.repr != Repr::Physical {
            return Err(Error::WrongRepresentation { expected: "physical", found: self.repr.name() });
        }
        Ok(self.clone().into_spectral())
    }

    pub fn to_physical(&self) -> Result<Self> {
        if self.repr != Repr::Spectral {
            return Err(Error::WrongRepresentation { expected: "spectral", found: self.repr.name() });
        }
        Ok(self.clone().into_physical())
    }

    /// Converts if needed; a spectral input passes through.
    pub fn into_spectral(mut self) -> Self {
        if self.repr == Repr::Physical {
            transform::forward(&mut self.data, &self.spec.shape(), &self.spec.axes(), &ALL_AXES);
            self.repr = Repr::Spectral;
        }
        self
    }

    pub fn into_physical(mut self) -> Self {
        if self.repr == Repr::Spectral {
            transform::backward(&mut self.data, &self.spec.shape(), &self.spec.axes(), &ALL_AXES);
            self.repr = Repr::Physical;
        }
        self
    }

    pub fn spectral(&self) -> Self {
        self.clone().into_spectral()
    }

    pub fn physical(&self) -> Self {
        self.clone().into_physical()
    }

    pub fn in_repr(self, repr: Repr) -> Self {
        match repr {
            Repr::Physical => self.into_physical(),
            Repr::Spectral => self.into_spectral(),
        }
    }

    /// Multiplies every coefficient by `symbol(ξ1, ξ2, k1, k2)`. The field is
    /// moved to the spectral representation first.
    pub fn apply_symbol(&mut self, symbol: impl Fn([f64; 4]) -> C64 + Sync) {
        if self.repr == Repr::Physical {
            transform::forward(&mut self.data, &self.spec.shape(), &self.spec.axes(), &ALL_AXES);
            self.repr = Repr::Spectral;
        }
        let fx = self.spec.x_axis().freqs();
        let fy = self.spec.y_axis().freqs();
        let (nx, my) = (self.spec.nx, self.spec.my);
        self.data.par_chunks_mut(my * my).enumerate().for_each(|(row, out)| {
            let (i1, i2) = (row / nx, row % nx);
            for j1 in 0..my {
                for j2 in 0..my {
                    out[j1 * my + j2] *= symbol([fx[i1], fx[i2], fy[j1], fy[j2]]);
                }
            }
        });
    }

    /// Tabulates `symbol` in storage order for repeated use with
    /// [`WaveguideField::multiply_spectral`].
    pub fn symbol_table(spec: &GridSpec, symbol: impl Fn([f64; 4]) -> C64 + Sync) -> Vec<C64> {
        let mut t = WaveguideField { spec: spec.clone(), data: vec![C64::new(1.0, 0.0); spec.len()], repr: Repr::Spectral };
        t.apply_symbol(symbol);
        t.data
    }

    /// Multiplies coefficients by a tabulated symbol.
    pub fn multiply_spectral(&mut self, table: &[C64]) {
        if self.repr == Repr::Physical {
            transform::forward(&mut self.data, &self.spec.shape(), &self.spec.axes(), &ALL_AXES);
            self.repr = Repr::Spectral;
        }
        self.data.par_iter_mut().zip(table.par_iter()).for_each(|(v, m)| *v *= m);
    }

    pub fn with_symbol(&self, symbol: impl Fn([f64; 4]) -> C64 + Sync) -> Self {
        let mut out = self.clone();
        out.apply_symbol(symbol);
        out
    }

    /// Pointwise map over physical values; `f` sees the coordinates too.
    pub fn map_physical(&self, f: impl Fn([f64; 4], C64) -> C64 + Sync) -> Self {
        let src = self.physical();
        let x = self.spec.x_axis().coords();
        let y = self.spec.y_axis().coords();
        let (nx, my) = (self.spec.nx, self.spec.my);
        let mut data = src.data;
        data.par_chunks_mut(my * my).enumerate().for_each(|(row, out)| {
            let (i1, i2) = (row / nx, row % nx);
            for j1 in 0..my {
                for j2 in 0..my {
                    let v = &mut out[j1 * my + j2];
                    *v = f([x[i1], x[i2], y[j1], y[j2]], *v);
                }
            }
        });
        WaveguideField { spec: self.spec.clone(), data, repr: Repr::Physical }
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.data.par_iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// `self + c · other`, in the representation of `self`.
    pub fn axpy(&self, c: C64, other: &WaveguideField) -> Result<Self> {
        if !self.spec.same_shape(&other.spec) {
            return Err(Error::GridMismatch("fields live on different grids".into()));
        }
        let other = other.clone().in_repr(self.repr);
        let mut out = self.clone();
        out.data.par_iter_mut().zip(other.data.par_iter()).for_each(|(a, b)| *a += c * b);
        Ok(out)
    }

    pub fn add(&self, other: &WaveguideField) -> Result<Self> {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &WaveguideField) -> Result<Self> {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    /// Pointwise complex conjugate (returned in physical representation).
    pub fn conj(&self) -> Self {
        let mut out = self.physical();
        out.data.par_iter_mut().for_each(|v| *v = v.conj());
        out
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    /// Reinterprets the samples on another grid of the same shape.
    pub(crate) fn relabel(mut self, spec: &GridSpec) -> Result<Self> {
        if spec.nx != self.spec.nx || spec.my != self.spec.my {
            return Err(Error::GridMismatch("relabelling needs identical point counts".into()));
        }
        self.spec = spec.clone();
        Ok(self)
    }

    #[cfg(test)]
    /// Plain `Σ|u|²` over stored values (no quadrature weight).
    pub(crate) fn raw_sq_sum(&self) -> f64 {
        crate::par::sum_map(&self.data, |v| v.norm_sqr())
    }

    /// Largest pointwise modulus of the difference, in physical space.
    pub fn max_abs_diff(&self, other: &WaveguideField) -> Result<f64> {
        let d = self.physical().sub(other)?;
        Ok(d.data.iter().fold(0.0_f64, |m, v| m.max(v.norm())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> GridSpec {
        GridSpec::new(6.0, 8, 3, 0.1).unwrap()
    }

    #[test]
    fn wrong_representation_is_rejected() {
        let f = WaveguideField::zeros(&grid());
        assert!(f.to_physical().is_err());
        let s = f.to_spectral().unwrap();
        assert!(s.to_spectral().is_err());
        assert!(s.to_physical().unwrap().is_zero());
    }

    #[test]
    fn torus_plane_wave_is_a_single_coefficient() {
        let g = grid();
        let f = WaveguideField::plane_wave(&g, C64::new(1.0, 0.0), [0.0, 0.0, 1.0, 0.0]);
        let s = f.to_spectral().unwrap();
        let k = g.index(0, 0, g.y_index(1).unwrap(), 0);
        for (i, c) in s.data().iter().enumerate() {
            let want = if i == k { 1.0 } else { 0.0 };
            assert!((c - want).norm() < 1e-13, "i={i} {c}");
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let g = grid();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = WaveguideField::random_band_limited(&g, &mut rng, f64::INFINITY, 0.0);
        let back = f.to_spectral().unwrap().to_physical().unwrap();
        let scale = f.data().iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        assert!(back.max_abs_diff(&f).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn from_data_checks_length_and_finiteness() {
        let g = grid();
        assert!(WaveguideField::from_data(&g, Repr::Physical, vec![C64::new(0.0, 0.0); 3]).is_err());
        let mut d = vec![C64::new(0.0, 0.0); g.len()];
        d[5] = C64::new(f64::NAN, 0.0);
        assert!(WaveguideField::from_data(&g, Repr::Physical, d).is_err());
    }
}
