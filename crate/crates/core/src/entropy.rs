//! Differential entropies of the marginal densities and the joint entropy
//!
//! ```text
//! S_j(t) = -∫ρ_x ln ρ_x dx - ∫ρ_p ln ρ_p dp - ln(2πħ)
//! ```
//!
//! for one particle in one dimension. The closed form for the packet is
//! `ln[(e/2)·√(1 + τ²)]`, bounded below by `1 - ln 2`.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::model::{
    make_adaptive_grid_with, DensityProfile, EntropyRecord, Lattice, MomentumGrid, PacketSpec,
    SpaceGrid, DEFAULT_PAD,
};
use crate::quantum::{fourier_transform, sample_position_density, sample_psi};

/// Allowed normalization drift of a density handed to [`differential_entropy`].
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Densities below this value contribute nothing (`0·ln 0 = 0`).
pub const DENSITY_FLOOR: f64 = 1e-300;

/// Largest per-axis grid accepted by [`JointDensity`].
pub const MAX_JOINT_N: usize = 512;

fn check_normalized(total: f64) -> Result<()> {
    let drift = (total - 1.0).abs();
    if drift > NORMALIZATION_TOL || !drift.is_finite() {
        Err(Error::Normalization {
            drift,
            tolerance: NORMALIZATION_TOL,
        })
    } else {
        Ok(())
    }
}

fn neg_rho_ln_rho(rho: f64) -> f64 {
    if rho < DENSITY_FLOOR {
        0.0
    } else {
        -rho * rho.ln()
    }
}

/// `-∫ρ ln ρ` in nats, by the trapezoid rule on the (periodic) grid.
pub fn differential_entropy<G: Lattice>(density: &DensityProfile<G>) -> Result<f64> {
    check_normalized(density.total())?;
    let h = density.grid().lattice().spacing();
    Ok(density
        .values()
        .iter()
        .map(|&r| neg_rho_ln_rho(r))
        .sum::<f64>()
        * h)
}

/// `1 - ln 2`, the smallest joint entropy any one-dimensional state can have.
pub fn leipnik_bound() -> f64 {
    1.0 - LN_2
}

/// `ln[(e/2)·√(1 + τ²)] = (1 - ln 2) + ½·ln(1 + τ²)`.
pub fn joint_entropy_closed(spec: &PacketSpec, t: f64) -> f64 {
    let tau = spec.tau(t);
    leipnik_bound() + 0.5 * (tau * tau).ln_1p()
}

/// Marginal entropies and the joint entropy from the numerical route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericEntropy {
    pub s_x: f64,
    pub s_p: f64,
    pub s_joint: f64,
}

/// Numerical joint entropy at time `t` on an adaptive grid of `n` nodes.
///
/// `ρ_x` is sampled from the closed-form position density; `ρ_p` is
/// `|ψ̃|²` from the spectral transform of the sampled wave function, so the
/// momentum side never touches the closed-form momentum density.
pub fn numeric_entropies(spec: &PacketSpec, t: f64, n: usize, pad: f64) -> Result<NumericEntropy> {
    let grid = make_adaptive_grid_with(spec, t, pad, n)?;
    let rho_x = sample_position_density(spec, grid, t)?;
    let psi = sample_psi(spec, grid, t)?;
    let rho_p = fourier_transform(&psi, spec.hbar())?.density();
    let s_x = differential_entropy(&rho_x)?;
    let s_p = differential_entropy(&rho_p)?;
    Ok(NumericEntropy {
        s_x,
        s_p,
        s_joint: s_x + s_p - spec.planck().ln(),
    })
}

/// [`numeric_entropies`] with the default padding, returning `S_j` only.
pub fn joint_entropy_numeric(spec: &PacketSpec, t: f64, n: usize) -> Result<f64> {
    numeric_entropies(spec, t, n, DEFAULT_PAD).map(|e| e.s_joint)
}

/// Closed and numerical entropies at one time.
pub fn entropy_record(spec: &PacketSpec, t: f64, n: usize, pad: f64) -> Result<EntropyRecord> {
    let numeric = numeric_entropies(spec, t, n, pad).map_err(|e| e.at_time(t))?;
    Ok(EntropyRecord {
        t,
        tau: spec.tau(t),
        s_x: numeric.s_x,
        s_p: numeric.s_p,
        s_joint_closed: joint_entropy_closed(spec, t),
        s_joint_numeric: numeric.s_joint,
        bound: leipnik_bound(),
    })
}

/// Product density `g(x, p) = ρ_x(x)·ρ_p(p)` on a small phase-space grid.
#[derive(Debug, Clone)]
pub struct JointDensity {
    x_grid: SpaceGrid,
    p_grid: MomentumGrid,
    /// Row-major, one row per `x` node.
    values: Vec<f64>,
}

impl JointDensity {
    pub fn from_product(
        rho_x: &DensityProfile<SpaceGrid>,
        rho_p: &DensityProfile<MomentumGrid>,
    ) -> Result<Self> {
        for n in [rho_x.grid().n(), rho_p.grid().n()] {
            if n > MAX_JOINT_N {
                return Err(Error::GridTooLarge {
                    n,
                    max: MAX_JOINT_N,
                });
            }
        }
        let values = rho_x
            .values()
            .iter()
            .flat_map(|&a| rho_p.values().iter().map(move |&b| a * b))
            .collect();
        Ok(Self {
            x_grid: *rho_x.grid(),
            p_grid: *rho_p.grid(),
            values,
        })
    }

    pub fn x_grid(&self) -> &SpaceGrid {
        &self.x_grid
    }

    pub fn p_grid(&self) -> &MomentumGrid {
        &self.p_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell(&self) -> f64 {
        self.x_grid.spacing() * self.p_grid.spacing()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell()
    }
}

/// `-∬ g ln g dx dp - ln(2πħ)` over the full phase-space grid.
pub fn joint_entropy_from_product(joint: &JointDensity, hbar: f64) -> Result<f64> {
    check_normalized(joint.total())?;
    let s = joint
        .values()
        .iter()
        .map(|&g| neg_rho_ln_rho(g))
        .sum::<f64>()
        * joint.cell();
    Ok(s - (2.0 * std::f64::consts::PI * hbar).ln())
}
