use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{Grid2, GridSpec};
use super::plane;
use super::transform;
use super::waveguide::{Repr, WaveguideField};
use crate::error::{Error, Result};
use crate::lattice::{ball, LatticePoint};

/// A family `{u_j}` of 2-D fields indexed by the lattice points of the
/// l∞ ball of radius `trunc`, stored in physical representation.
///
/// Components are plain torus Fourier coefficients: the waveguide field
/// they describe is `u(x, y) = Σ_j e^{i⟨j, y⟩} u_j(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResonantState {
    trunc: i64,
    grid: Grid2,
    components: Vec<Vec<C64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonantNormKind {
    /// `(Σ_p ⟨p⟩² ‖v_p‖²_{L²})^{1/2}`
    H1L2,
    /// `(Σ_p ⟨p⟩^{2s} ‖v_p‖²_{H^k})^{1/2}`
    HsHk { s: f64, k: f64 },
    /// `Σ_p ⟨p⟩² ‖v_p‖²_{L²}`
    ELs,
    /// Half of [`ResonantNormKind::ELs`].
    ELsHalf,
}

impl ResonantState {
    pub fn zeros(trunc: i64, grid: Grid2) -> Result<Self> {
        if trunc < 0 {
            return Err(Error::Truncation(format!("trunc must be >= 0, got {trunc}")));
        }
        let count = ((2 * trunc + 1) * (2 * trunc + 1)) as usize;
        Ok(ResonantState { trunc, grid, components: vec![vec![C64::new(0.0, 0.0); grid.len()]; count] })
    }

    /// Samples `f(j, x)` for every component.
    pub fn from_fn(trunc: i64, grid: Grid2, f: impl Fn(LatticePoint, [f64; 2]) -> C64 + Sync) -> Result<Self> {
        let mut s = Self::zeros(trunc, grid)?;
        let x = grid.axis().coords();
        let nx = grid.nx;
        let points: Vec<LatticePoint> = ball(trunc).collect();
        s.components.par_iter_mut().zip(points.par_iter()).for_each(|(c, &p)| {
            for (i, v) in c.iter_mut().enumerate() {
                *v = f(p, [x[i / nx], x[i % nx]]);
            }
        });
        Ok(s)
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn points(&self) -> impl Iterator<Item = LatticePoint> {
        ball(self.trunc)
    }

    pub fn index(&self, p: LatticePoint) -> Option<usize> {
        if p.linf() > self.trunc {
            return None;
        }
        let w = 2 * self.trunc + 1;
        Some(((p.a + self.trunc) * w + (p.b + self.trunc)) as usize)
    }

    pub fn component(&self, p: LatticePoint) -> Option<&[C64]> {
        self.index(p).map(|i| self.components[i].as_slice())
    }

    pub fn component_mut(&mut self, p: LatticePoint) -> Option<&mut [C64]> {
        self.index(p).map(move |i| self.components[i].as_mut_slice())
    }

    pub fn components(&self) -> &[Vec<C64>] {
        &self.components
    }

    pub(crate) fn components_mut(&mut self) -> &mut [Vec<C64>] {
        &mut self.components
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().flatten().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.components.par_iter_mut().flatten().for_each(|v| *v *= c);
        out
    }

    /// `self + c · other`.
    pub fn axpy(&self, c: C64, other: &ResonantState) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.components.par_iter_mut().zip(other.components.par_iter()).for_each(|(a, b)| a.iter_mut().zip(b).for_each(|(x, y)| *x += c * y));
        Ok(out)
    }

    pub fn sub(&self, other: &ResonantState) -> Result<Self> {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.components.par_iter_mut().flatten().for_each(|v| *v = v.conj());
        out
    }

    pub(crate) fn check_compatible(&self, other: &ResonantState) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::Truncation(format!("trunc {} vs {}", self.trunc, other.trunc)));
        }
        if self.grid != other.grid {
            return Err(Error::GridMismatch("resonant states on different planes".into()));
        }
        Ok(())
    }

    /// `‖v_p‖²_{L²(R²)}`, zero outside the truncation.
    pub fn l2_sq(&self, p: LatticePoint) -> f64 {
        self.component(p).map(|c| plane::l2_sq(c, &self.grid)).unwrap_or(0.0)
    }

    pub fn mass(&self) -> f64 {
        self.components.iter().map(|c| plane::l2_sq(c, &self.grid)).sum()
    }

    pub fn e_ls(&self) -> f64 {
        self.points().zip(&self.components).map(|(p, c)| p.bracket_sq() * plane::l2_sq(c, &self.grid)).sum()
    }

    pub fn norm(&self, kind: ResonantNormKind) -> f64 {
        match kind {
            ResonantNormKind::ELs => self.e_ls(),
            ResonantNormKind::ELsHalf => 0.5 * self.e_ls(),
            ResonantNormKind::H1L2 => self.e_ls().sqrt(),
            ResonantNormKind::HsHk { s, k } => {
                self.points().zip(&self.components).map(|(p, c)| p.bracket_sq().powf(s) * plane::sobolev_sq(c, &self.grid, k)).sum::<f64>().sqrt()
            }
        }
    }

    /// Linear flow `e^{itΔ_x}` on every component.
    pub fn linear_flow(&self, t: f64) -> Self {
        let mut out = self.clone();
        let g = self.grid;
        out.components.par_iter_mut().for_each(|c| {
            plane::forward(c, &g);
            plane::apply_symbol(c, &g, |a, b| C64::from_polar(1.0, -t * (a * a + b * b)));
            plane::backward(c, &g);
        });
        out
    }

    /// Torus-mode slicing: component `q` is the `y`-Fourier coefficient of
    /// `f` at integer mode `q` (zero when the grid does not resolve it).
    pub fn from_waveguide(f: &WaveguideField, trunc: i64) -> Result<Self> {
        let spec = f.spec();
        let mut s = Self::zeros(trunc, spec.plane())?;
        let mut y_spec = f.physical().into_data();
        transform::forward(&mut y_spec, &spec.shape(), &spec.axes(), &[2, 3]);
        let my = spec.my;
        let points: Vec<LatticePoint> = ball(trunc).collect();
        s.components.par_iter_mut().zip(points.par_iter()).for_each(|(c, p)| {
            if let (Some(k1), Some(k2)) = (spec.y_index(p.a), spec.y_index(p.b)) {
                for (i, v) in c.iter_mut().enumerate() {
                    *v = y_spec[i * my * my + k1 * my + k2];
                }
            }
        });
        Ok(s)
    }

    /// Torus synthesis `Σ_q w(q) e^{i⟨q, y⟩} v_q(x)` on `spec`, reading the
    /// component samples as grid values of the target (same `nx`).
    pub fn synthesize(&self, spec: &GridSpec, weight: impl Fn(LatticePoint) -> C64) -> Result<WaveguideField> {
        if self.trunc > spec.max_mode() {
            return Err(Error::Truncation(format!("trunc {} exceeds the largest torus mode {} of the grid", self.trunc, spec.max_mode())));
        }
        if self.grid.nx != spec.nx {
            return Err(Error::GridMismatch(format!("nx {} vs {}", self.grid.nx, spec.nx)));
        }
        let my = spec.my;
        let mut data = vec![C64::new(0.0, 0.0); spec.len()];
        for (p, c) in self.points().zip(&self.components) {
            let w = weight(p);
            let (k1, k2) = (spec.y_index(p.a).unwrap(), spec.y_index(p.b).unwrap());
            data.par_chunks_mut(my * my).zip(c.par_iter()).for_each(|(out, v)| {
                out[k1 * my + k2] = w * v;
            });
        }
        transform::backward(&mut data, &spec.shape(), &spec.axes(), &[2, 3]);
        WaveguideField::from_data(spec, Repr::Physical, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid2 {
        Grid2::new(8.0, 16).unwrap()
    }

    fn gauss(x: [f64; 2]) -> f64 {
        (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp()
    }

    #[test]
    fn e_ls_of_single_components() {
        let v =
            ResonantState::from_fn(2, grid(), |p, x| if p == LatticePoint::ORIGIN { C64::new(gauss(x), 0.0) } else { C64::new(0.0, 0.0) }).unwrap();
        assert!((v.e_ls() - v.l2_sq(LatticePoint::ORIGIN)).abs() < 1e-14);

        let u = ResonantState::from_fn(2, grid(), |p, _| if p == LatticePoint::new(1, 0) { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
            .unwrap()
            .scale(C64::new(1.0 / 8.0, 0.0));
        assert!((u.l2_sq(LatticePoint::new(1, 0)) - 1.0).abs() < 1e-14);
        assert!((u.e_ls() - 2.0).abs() < 1e-14);
        assert!((u.norm(ResonantNormKind::H1L2).powi(2) - u.e_ls()).abs() < 1e-14);
        assert!((u.norm(ResonantNormKind::ELsHalf) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn negative_trunc_rejected() {
        assert!(ResonantState::zeros(-1, grid()).is_err());
        assert_eq!(ResonantState::zeros(2, grid()).unwrap().components().len(), 25);
    }

    #[test]
    fn slicing_then_synthesis_is_identity() {
        let spec = GridSpec::new(8.0, 16, 5, 0.1).unwrap();
        let f = WaveguideField::from_fn(&spec, |p| C64::new(gauss([p[0], p[1]]), 0.0) * (1.0 + 0.5 * C64::from_polar(1.0, p[2] - 2.0 * p[3])));
        let v = ResonantState::from_waveguide(&f, 2).unwrap();
        let back = v.synthesize(&spec, |_| C64::new(1.0, 0.0)).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
        assert!(v.synthesize(&GridSpec::new(8.0, 16, 3, 0.1).unwrap(), |_| C64::new(1.0, 0.0)).is_err());
    }
}
