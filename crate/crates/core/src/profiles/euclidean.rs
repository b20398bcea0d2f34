//! Euclidean profiles: a 4-D profile concentrated at scale `N^{-1}` and
//! transplanted to a neighbourhood of the origin of R²×T² by the identity
//! chart.
//!
//! The 4-D box is the `N`-dilation of the waveguide grid (same `nx`, `my`,
//! box and period multiplied by `N`), so `φ_N(x) = N(Q_Nφ)(Nx)` on the
//! waveguide grid is an exact index map: sample `i` of `f_N` is `N` times
//! sample `i` of `Q_Nφ`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::evolution::symmetry::check_power_of_two;
use crate::field::{eta, GridSpec, WaveguideField};

/// Radius of the unit ball the identity chart is defined on.
pub const CHART_RADIUS: f64 = 1.0;

/// Samples below this fraction of the peak count as outside the support.
const SUPPORT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct EuclideanProfileSpec {
    /// The profile on the 4-D box.
    pub phi: WaveguideField,
    pub n: f64,
}

/// The 4-D box for scale `N` over the waveguide grid `spec`.
pub fn euclidean_grid(spec: &GridSpec, n: f64) -> Result<GridSpec> {
    check_power_of_two(n)?;
    if n < 1.0 {
        return Err(Error::arg(format!("N must be >= 1, got {n}")));
    }
    let g = GridSpec { box_side: spec.box_side * n, torus_period: spec.torus_period * n, ..spec.clone() };
    g.validate()?;
    Ok(g)
}

fn radius(p: [f64; 4]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]).sqrt()
}

impl EuclideanProfileSpec {
    /// Samples `phi` on the 4-D box that belongs to `waveguide` and `N`.
    pub fn from_generator(waveguide: &GridSpec, n: f64, phi: impl Fn([f64; 4]) -> C64 + Sync) -> Result<Self> {
        let g = euclidean_grid(waveguide, n)?;
        Ok(EuclideanProfileSpec { phi: WaveguideField::from_fn(&g, phi), n })
    }

    /// The waveguide grid this profile lands on.
    pub fn target_grid(&self) -> Result<GridSpec> {
        check_power_of_two(self.n)?;
        let s = self.phi.spec();
        let g = GridSpec { box_side: s.box_side / self.n, torus_period: s.torus_period / self.n, ..s.clone() };
        g.validate()?;
        Ok(g)
    }

    /// `Q_Nφ = η(x/N^{1/2}) φ` on the 4-D box.
    pub fn cutoff(&self) -> WaveguideField {
        let sn = self.n.sqrt();
        self.phi.map_physical(|p, v| v * eta(radius(p) / sn))
    }
}

/// Largest radius where `|g|` exceeds the support tolerance.
fn support_radius(g: &WaveguideField) -> f64 {
    let peak = g.data().iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let spec = g.spec();
    let (xs, ys) = (spec.x_axis().coords(), spec.y_axis().coords());
    let (nx, my) = (spec.nx, spec.my);
    let mut r: f64 = 0.0;
    for (i, v) in g.data().iter().enumerate() {
        if v.norm() > SUPPORT_TOLERANCE * peak {
            let p = [xs[i / (nx * my * my)], xs[(i / (my * my)) % nx], ys[(i / my) % my], ys[i % my]];
            r = r.max(radius(p));
        }
    }
    r
}

/// `f_N(y) = N (Q_Nφ)(N y)` on the waveguide grid.
pub fn euclidean_profile(spec: &EuclideanProfileSpec) -> Result<WaveguideField> {
    if !(spec.n >= 1.0) {
        return Err(Error::arg(format!("N must be >= 1, got {}", spec.n)));
    }
    let target = spec.target_grid()?;
    let q = spec.cutoff().physical();
    let reach = support_radius(&q) / spec.n;
    let torus_half = target.torus_period / 2.0;
    if reach > CHART_RADIUS || reach >= torus_half {
        return Err(Error::arg(format!(
            "profile support reaches radius {reach:.4} after rescaling by N = {}; it must stay inside the unit ball",
            spec.n
        )));
    }
    q.scale_real(spec.n).relabel(&target)
}
