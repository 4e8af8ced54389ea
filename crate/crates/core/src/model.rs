//! Value types shared by every other module.
//!
//! Grids are uniform, half-open lattices `start + j·spacing`, `j = 0..n`, with
//! `start = center - half_width` and `spacing = 2·half_width / n`. The center
//! sits on node `n/2`. This layout is what the FFT-based transform expects.

use std::f64::consts::PI;
use std::ops::Deref;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Grid size used when a caller does not choose one.
pub const DEFAULT_GRID_N: usize = 4096;

/// Window half-width in units of the evolved width `σ_t`.
pub const DEFAULT_PAD: f64 = 8.0;

/// Smallest admissible window padding.
pub const MIN_PAD: f64 = 4.0;

/// Smallest admissible grid size.
pub const MIN_GRID_N: usize = 16;

/// Physical parameters of the constant-force Gaussian packet.
///
/// `sigma` is the initial width in the convention `|ψ(x,0)|² ∝ exp(-(x-x0)²/σ²)`,
/// so the position variance is `σ²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketSpec {
    mass: f64,
    hbar: f64,
    sigma: f64,
    p0: f64,
    x0: f64,
    force: f64,
}

impl PacketSpec {
    pub fn new(mass: f64, hbar: f64, sigma: f64, p0: f64, x0: f64, force: f64) -> Result<Self> {
        positive("mass", mass)?;
        positive("hbar", hbar)?;
        positive("sigma", sigma)?;
        finite("p0", p0)?;
        finite("x0", x0)?;
        finite("force", force)?;
        Ok(Self {
            mass,
            hbar,
            sigma,
            p0,
            x0,
            force,
        })
    }

    /// `m = ħ = σ = 1`, at rest at the origin, no force.
    pub fn natural() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
            sigma: 1.0,
            p0: 0.0,
            x0: 0.0,
            force: 0.0,
        }
    }

    pub fn with_force(self, force: f64) -> Result<Self> {
        Self::new(self.mass, self.hbar, self.sigma, self.p0, self.x0, force)
    }

    pub fn with_p0(self, p0: f64) -> Result<Self> {
        Self::new(self.mass, self.hbar, self.sigma, p0, self.x0, self.force)
    }

    pub fn with_x0(self, x0: f64) -> Result<Self> {
        Self::new(self.mass, self.hbar, self.sigma, self.p0, x0, self.force)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn force(&self) -> f64 {
        self.force
    }

    /// Dimensionless time `ħt/(mσ²)`.
    pub fn tau(&self, t: f64) -> f64 {
        self.hbar * t / (self.mass * self.sigma * self.sigma)
    }

    /// Time at which `tau` reaches the given value.
    pub fn time_for_tau(&self, tau: f64) -> f64 {
        tau * self.mass * self.sigma * self.sigma / self.hbar
    }

    /// `σ_t² = σ²(1 + τ²)`; the position variance at time `t` is `σ_t²/2`.
    pub fn width_sq(&self, t: f64) -> f64 {
        let tau = self.tau(t);
        self.sigma * self.sigma * (1.0 + tau * tau)
    }

    /// Classical center `x0 + p0·t/m + f·t²/(2m)`.
    pub fn center(&self, t: f64) -> f64 {
        self.x0 + self.p0 * t / self.mass + 0.5 * self.force * t * t / self.mass
    }

    /// Classical momentum `p0 + f·t`.
    pub fn momentum(&self, t: f64) -> f64 {
        self.p0 + self.force * t
    }

    /// Planck's constant `h = 2πħ`.
    pub fn planck(&self) -> f64 {
        2.0 * PI * self.hbar
    }
}

impl Default for PacketSpec {
    fn default() -> Self {
        Self::natural()
    }
}

fn finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        })
    }
}

/// A uniform lattice of `n` nodes on `[center - half_width, center + half_width)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformGrid {
    n: usize,
    center: f64,
    half_width: f64,
}

impl UniformGrid {
    pub fn new(n: usize, center: f64, half_width: f64) -> Result<Self> {
        if n < MIN_GRID_N || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two and at least {MIN_GRID_N}"
            )));
        }
        if !center.is_finite() {
            return Err(Error::InvalidGrid(format!("center {center} is not finite")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half_width {half_width} must be positive and finite"
            )));
        }
        Ok(Self {
            n,
            center,
            half_width,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// First node.
    pub fn start(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn point(&self, j: usize) -> f64 {
        self.start() + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        let (start, h) = (self.start(), self.spacing());
        (0..self.n).map(move |j| start + j as f64 * h)
    }

    /// Lattice with the same extent, centered elsewhere.
    pub fn recentered(&self, center: f64) -> Result<Self> {
        Self::new(self.n, center, self.half_width)
    }

    /// Lattice reciprocal to this one under `e^{-ipx/ħ}`:
    /// `spacing · reciprocal spacing · n = 2πħ`.
    pub fn reciprocal(&self, hbar: f64, center: f64) -> Result<Self> {
        let spacing = 2.0 * PI * hbar / (self.n as f64 * self.spacing());
        Self::new(self.n, center, 0.5 * self.n as f64 * spacing)
    }
}

/// Access to the underlying lattice of a typed grid.
pub trait Lattice: Clone {
    fn lattice(&self) -> &UniformGrid;
}

/// Position-space lattice (length units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SpaceGrid(UniformGrid);

/// Momentum-space lattice (momentum units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MomentumGrid(UniformGrid);

impl SpaceGrid {
    pub fn new(n: usize, center: f64, half_width: f64) -> Result<Self> {
        UniformGrid::new(n, center, half_width).map(Self)
    }

    /// Position lattice reciprocal to `grid`.
    pub fn reciprocal_to(grid: &MomentumGrid, hbar: f64, center: f64) -> Result<Self> {
        grid.0.reciprocal(hbar, center).map(Self)
    }
}

impl MomentumGrid {
    pub fn new(n: usize, center: f64, half_width: f64) -> Result<Self> {
        UniformGrid::new(n, center, half_width).map(Self)
    }

    /// Momentum lattice reciprocal to `grid`, centered at `center`.
    pub fn reciprocal_to(grid: &SpaceGrid, hbar: f64, center: f64) -> Result<Self> {
        grid.0.reciprocal(hbar, center).map(Self)
    }
}

impl Deref for SpaceGrid {
    type Target = UniformGrid;
    fn deref(&self) -> &UniformGrid {
        &self.0
    }
}

impl Deref for MomentumGrid {
    type Target = UniformGrid;
    fn deref(&self) -> &UniformGrid {
        &self.0
    }
}

impl Lattice for SpaceGrid {
    fn lattice(&self) -> &UniformGrid {
        &self.0
    }
}

impl Lattice for MomentumGrid {
    fn lattice(&self) -> &UniformGrid {
        &self.0
    }
}

/// Complex amplitudes sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField<G> {
    grid: G,
    values: Vec<Complex64>,
}

impl<G: Lattice> ComplexField<G> {
    pub fn new(grid: G, values: Vec<Complex64>) -> Result<Self> {
        check_len(grid.lattice(), values.len())?;
        if let Some(index) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: G, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.lattice().points().map(f).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &G {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `Σ|ψ|²·spacing`.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.lattice().spacing()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sq().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Normalization {
                drift: 1.0,
                tolerance: 0.0,
            });
        }
        let values = self.values.iter().map(|v| v / norm).collect();
        Ok(Self {
            grid: self.grid.clone(),
            values,
        })
    }

    pub fn density(&self) -> DensityProfile<G> {
        DensityProfile {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v.norm_sqr()).collect(),
        }
    }
}

/// Non-negative density sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile<G> {
    grid: G,
    values: Vec<f64>,
}

impl<G: Lattice> DensityProfile<G> {
    pub fn new(grid: G, values: Vec<f64>) -> Result<Self> {
        check_len(grid.lattice(), values.len())?;
        if let Some(index) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: G, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.lattice().points().map(f).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &G {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `Σρ·spacing`.
    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.lattice().spacing()
    }
}

fn check_len(grid: &UniformGrid, actual: usize) -> Result<()> {
    if grid.n() == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: grid.n(),
            actual,
        })
    }
}

/// One sample of the entropy time series. All entropies are in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyRecord {
    pub t: f64,
    pub tau: f64,
    pub s_x: f64,
    pub s_p: f64,
    pub s_joint_closed: f64,
    pub s_joint_numeric: f64,
    pub bound: f64,
}

impl EntropyRecord {
    /// Distance of the closed-form joint entropy above the lower bound.
    pub fn bound_gap(&self) -> f64 {
        self.s_joint_closed - self.bound
    }
}

/// Position grid of [`DEFAULT_GRID_N`] nodes following the packet at time `t`.
pub fn make_adaptive_grid(spec: &PacketSpec, t: f64, pad: f64) -> Result<SpaceGrid> {
    make_adaptive_grid_with(spec, t, pad, DEFAULT_GRID_N)
}

/// Position grid centered on the classical center `x_c(t)` with half-width
/// `pad·σ_t`.
pub fn make_adaptive_grid_with(spec: &PacketSpec, t: f64, pad: f64, n: usize) -> Result<SpaceGrid> {
    finite("t", t)?;
    if !(pad.is_finite() && pad >= MIN_PAD) {
        return Err(Error::InvalidParameter {
            name: "pad",
            value: pad,
            reason: "must be at least 4 widths",
        });
    }
    SpaceGrid::new(n, spec.center(t), pad * spec.width_sq(t).sqrt())
}
