use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::fft::signed_index;
use crate::error::{Error, Result};

fn default_period() -> f64 {
    TAU
}

/// Discretization of R² × T²: a periodic box `[-L/2, L/2)²` with `nx`
/// points per side, and `my` Fourier modes per torus direction.
///
/// The torus period defaults to 2π. Rescaling produces other periods, and
/// with a non-default period the same type doubles as a 4-D Euclidean box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub box_side: f64,
    pub nx: usize,
    pub my: usize,
    pub dt: f64,
    #[serde(default = "default_period")]
    pub torus_period: f64,
}

/// One periodic axis: `n` points starting at `origin` with spacing `side / n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub n: usize,
    pub side: f64,
    pub origin: f64,
}

impl Axis {
    pub fn h(&self) -> f64 {
        self.side / self.n as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.h()
    }

    /// Angular frequency stored at index `k`.
    pub fn freq(&self, k: usize) -> f64 {
        TAU / self.side * signed_index(k, self.n) as f64
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    pub fn freqs(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.freq(k)).collect()
    }
}

impl GridSpec {
    pub fn new(box_side: f64, nx: usize, my: usize, dt: f64) -> Result<Self> {
        let g = GridSpec { box_side, nx, my, dt, torus_period: TAU };
        g.validate()?;
        Ok(g)
    }

    pub fn with_torus_period(mut self, period: f64) -> Result<Self> {
        self.torus_period = period;
        self.validate()?;
        Ok(self)
    }

    pub fn with_dt(mut self, dt: f64) -> Result<Self> {
        self.dt = dt;
        self.validate()?;
        Ok(self)
    }

    /// Checks every invariant; messages start with the offending field name.
    pub fn validate(&self) -> Result<()> {
        if !(self.box_side > 0.0 && self.box_side.is_finite()) {
            return Err(Error::InvalidGrid(format!("box_side must be > 0, got {}", self.box_side)));
        }
        if self.nx < 8 || !self.nx.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("nx must be a power of two >= 8, got {}", self.nx)));
        }
        if self.my == 0 || self.my.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("my must be odd and >= 1, got {}", self.my)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidGrid(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.torus_period > 0.0 && self.torus_period.is_finite()) {
            return Err(Error::InvalidGrid(format!("torus_period must be > 0, got {}", self.torus_period)));
        }
        Ok(())
    }

    pub fn shape(&self) -> [usize; 4] {
        [self.nx, self.nx, self.my, self.my]
    }

    pub fn len(&self) -> usize {
        self.nx * self.nx * self.my * self.my
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x_axis(&self) -> Axis {
        Axis { n: self.nx, side: self.box_side, origin: -self.box_side / 2.0 }
    }

    /// Torus points are centered on 0 so that a neighborhood of the origin
    /// is a plain coordinate chart.
    pub fn y_axis(&self) -> Axis {
        let h = self.torus_period / self.my as f64;
        Axis { n: self.my, side: self.torus_period, origin: -(((self.my - 1) / 2) as f64) * h }
    }

    pub fn axes(&self) -> [Axis; 4] {
        let (x, y) = (self.x_axis(), self.y_axis());
        [x, x, y, y]
    }

    pub fn hx(&self) -> f64 {
        self.x_axis().h()
    }

    pub fn hy(&self) -> f64 {
        self.y_axis().h()
    }

    pub fn cell_volume(&self) -> f64 {
        self.hx().powi(2) * self.hy().powi(2)
    }

    pub fn volume(&self) -> f64 {
        self.box_side.powi(2) * self.torus_period.powi(2)
    }

    pub fn torus_area(&self) -> f64 {
        self.torus_period.powi(2)
    }

    pub fn index(&self, i1: usize, i2: usize, j1: usize, j2: usize) -> usize {
        ((i1 * self.nx + i2) * self.my + j1) * self.my + j2
    }

    /// Largest torus mode `(my - 1) / 2`.
    pub fn max_mode(&self) -> i64 {
        ((self.my - 1) / 2) as i64
    }

    /// Integer torus mode stored at index `k`.
    pub fn y_mode(&self, k: usize) -> i64 {
        signed_index(k, self.my)
    }

    /// Storage index of integer torus mode `q`, if resolved.
    pub fn y_index(&self, q: i64) -> Option<usize> {
        if q.abs() > self.max_mode() {
            None
        } else {
            Some(q.rem_euclid(self.my as i64) as usize)
        }
    }

    pub fn plane(&self) -> Grid2 {
        Grid2 { box_side: self.box_side, nx: self.nx }
    }

    pub fn same_shape(&self, other: &GridSpec) -> bool {
        self.nx == other.nx && self.my == other.my && self.box_side == other.box_side && self.torus_period == other.torus_period
    }

    /// Largest `|ζ|` over the resolved 4-D frequency grid.
    pub fn max_frequency(&self) -> f64 {
        let fx = self.x_axis().freqs().into_iter().fold(0.0_f64, |m, f| m.max(f.abs()));
        let fy = self.y_axis().freqs().into_iter().fold(0.0_f64, |m, f| m.max(f.abs()));
        (2.0 * fx * fx + 2.0 * fy * fy).sqrt()
    }
}

/// The two R² directions of a grid, used by the resonant system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid2 {
    pub box_side: f64,
    pub nx: usize,
}

impl Grid2 {
    pub fn new(box_side: f64, nx: usize) -> Result<Self> {
        if !(box_side > 0.0 && box_side.is_finite()) {
            return Err(Error::InvalidGrid(format!("box_side must be > 0, got {box_side}")));
        }
        if nx < 8 || !nx.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("nx must be a power of two >= 8, got {nx}")));
        }
        Ok(Grid2 { box_side, nx })
    }

    pub fn axis(&self) -> Axis {
        Axis { n: self.nx, side: self.box_side, origin: -self.box_side / 2.0 }
    }

    pub fn len(&self) -> usize {
        self.nx * self.nx
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_area(&self) -> f64 {
        self.axis().h().powi(2)
    }

    pub fn area(&self) -> f64 {
        self.box_side * self.box_side
    }
}
