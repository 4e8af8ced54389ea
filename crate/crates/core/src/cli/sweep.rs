use rayon::prelude::*;

use super::config::RunConfig;
use crate::entropy::{entropy_record, NORMALIZATION_TOL};
use crate::error::{Error, Result};
use crate::model::{
    make_adaptive_grid_with, DensityProfile, EntropyRecord, Lattice, MomentumGrid, SpaceGrid,
};
use crate::quantum::{sample_momentum_density, sample_position_density};

/// Entropy time series over `config.times()`.
///
/// Times are evaluated concurrently; the first failure in time order is
/// returned, tagged with its `t`.
pub fn run_entropy_sweep(config: &RunConfig) -> Result<Vec<EntropyRecord>> {
    config.validate()?;
    let spec = config.packet()?;
    config
        .times()
        .into_par_iter()
        .map(|t| entropy_record(&spec, t, config.grid_n, config.pad))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// One fixed-time slice of a density surface.
#[derive(Debug, Clone)]
pub struct DensitySlice<G> {
    pub t: f64,
    pub density: DensityProfile<G>,
}

fn check_slice<G: Lattice>(t: f64, density: &DensityProfile<G>) -> Result<()> {
    let drift = (density.total() - 1.0).abs();
    if drift > NORMALIZATION_TOL {
        return Err(Error::Normalization {
            drift,
            tolerance: NORMALIZATION_TOL,
        }
        .at_time(t));
    }
    Ok(())
}

/// `|ψ(x,t)|²` on the adaptive window at every sweep time.
pub fn run_density_surface(config: &RunConfig) -> Result<Vec<DensitySlice<SpaceGrid>>> {
    config.validate()?;
    let spec = config.packet()?;
    config
        .times()
        .into_par_iter()
        .map(|t| {
            let grid = make_adaptive_grid_with(&spec, t, config.pad, config.grid_n)?;
            let density = sample_position_density(&spec, grid, t)?;
            check_slice(t, &density)?;
            Ok(DensitySlice { t, density })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// `|ψ̃(p,t)|²` on the momentum window reciprocal to each adaptive position
/// window, centered on `p0 + f·t`.
pub fn run_momentum_surface(config: &RunConfig) -> Result<Vec<DensitySlice<MomentumGrid>>> {
    config.validate()?;
    let spec = config.packet()?;
    config
        .times()
        .into_par_iter()
        .map(|t| {
            let xgrid = make_adaptive_grid_with(&spec, t, config.pad, config.grid_n)?;
            let grid = MomentumGrid::reciprocal_to(&xgrid, spec.hbar(), spec.momentum(t))?;
            let density = sample_momentum_density(&spec, grid, t)?;
            check_slice(t, &density)?;
            Ok(DensitySlice { t, density })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}
