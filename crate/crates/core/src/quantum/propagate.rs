//! Evolution by direct quadrature of `ψ(x, T) = ∫ K(x, y; T) ψ(y, 0) dy`.
//!
//! This route never uses the closed-form wave function, so it is an
//! independent oracle for it. The trapezoid sum is exact up to aliasing as
//! long as the largest local wavenumber of the integrand,
//! `m·|x - y|/(ħT) + |k_ψ| + |f|T/(2ħ)`, stays below `2π/Δy`. When the input
//! grid is too coarse for that, the input is first refined by band-limited
//! (zero-padded spectrum) interpolation.

use num_complex::Complex64;
use rayon::prelude::*;

use super::fourier::{fourier_transform, inverse_fourier_transform};
use super::moments;
use crate::classical::{kernel_unchecked, van_vleck_prefactor};
use crate::error::{Error, Result};
use crate::model::{ComplexField, MomentumGrid, PacketSpec, SpaceGrid};

/// Allowed drift of `Σ|ψ|²Δx` between input and output.
pub const NORM_DRIFT_TOL: f64 = 1e-6;

/// Amplitudes below this fraction of the peak count as outside the support.
const SUPPORT_CUTOFF: f64 = 1e-16;

/// Upper limit on the refined quadrature grid.
const MAX_REFINED_POINTS: usize = 1 << 24;

/// Output window for [`propagate_with_kernel`]: the union of the input window
/// and the predicted final window, with as many nodes as the input.
///
/// The final window is centered on `⟨x⟩ + ⟨p⟩T/m + fT²/(2m)` and scaled from
/// the exact variance law of linear potentials,
/// `Var_x(T) = Var_x + 2·cov·T/m + Var_p·T²/m²`, keeping the input's padding
/// ratio.
pub fn propagation_target(
    spec: &PacketSpec,
    initial: &ComplexField<SpaceGrid>,
    duration: f64,
) -> Result<SpaceGrid> {
    let grid = initial.grid();
    let mo = moments(initial, spec.hbar())?;
    let m = spec.mass();
    let t = duration;
    let center = mo.mean_x + mo.mean_p * t / m + 0.5 * spec.force() * t * t / m;
    let var = mo.var_x + 2.0 * mo.cov_xp * t / m + mo.var_p * t * t / (m * m);
    let pad = grid.half_width() / (2.0 * mo.var_x).sqrt();
    let half = pad * (2.0 * var).sqrt();
    let lo = grid.start().min(center - half);
    let hi = (grid.start() + 2.0 * grid.half_width()).max(center + half);
    SpaceGrid::new(grid.n(), 0.5 * (lo + hi), 0.5 * (hi - lo))
}

/// Propagates `initial` by `duration` onto [`propagation_target`].
pub fn propagate_with_kernel(
    spec: &PacketSpec,
    initial: &ComplexField<SpaceGrid>,
    duration: f64,
) -> Result<ComplexField<SpaceGrid>> {
    check_duration(duration)?;
    let target = propagation_target(spec, initial, duration)?;
    propagate_with_kernel_onto(spec, initial, duration, &target)
}

/// Propagates `initial` by `duration`, evaluating the result at the nodes of
/// `target`.
pub fn propagate_with_kernel_onto(
    spec: &PacketSpec,
    initial: &ComplexField<SpaceGrid>,
    duration: f64,
    target: &SpaceGrid,
) -> Result<ComplexField<SpaceGrid>> {
    check_duration(duration)?;
    let hbar = spec.hbar();
    let (first, last) = support(initial.values());
    let grid = initial.grid();
    let (a, b) = (grid.point(first), grid.point(last));
    let (c, d) = (target.start(), target.point(target.n() - 1));
    let span = (d - a).max(b - c).max(0.0);

    let spectrum = fourier_transform(initial, hbar)?;
    let (lo_k, hi_k) = support(spectrum.values());
    let k_max = spectrum
        .grid()
        .point(lo_k)
        .abs()
        .max(spectrum.grid().point(hi_k).abs())
        / hbar;
    let band = spec.mass() * span / (hbar * duration)
        + k_max
        + spec.force().abs() * duration / (2.0 * hbar);
    let required = 2.0 * std::f64::consts::PI / band;
    let mut refine = 1usize;
    while grid.spacing() / refine as f64 > required {
        refine *= 2;
        if grid.n() * refine > MAX_REFINED_POINTS {
            return Err(Error::InvalidParameter {
                name: "duration",
                value: duration,
                reason: "too short to resolve the kernel on this grid",
            });
        }
    }

    let (nodes, values) = if refine == 1 {
        let nodes: Vec<f64> = (first..=last).map(|j| grid.point(j)).collect();
        (nodes, initial.values()[first..=last].to_vec())
    } else {
        let fine = refine_field(initial, &spectrum, refine, hbar)?;
        let range = first * refine..=(last * refine + refine - 1).min(fine.grid().n() - 1);
        let nodes: Vec<f64> = range.clone().map(|j| fine.grid().point(j)).collect();
        (nodes, fine.values()[range].to_vec())
    };
    let h = grid.spacing() / refine as f64;

    let prefactor = van_vleck_prefactor(spec, duration)?;
    let out: Vec<Complex64> = target
        .points()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|x| {
            nodes
                .iter()
                .zip(&values)
                .map(|(&y, v)| kernel_unchecked(spec, prefactor, x, y, duration) * v)
                .sum::<Complex64>()
                * h
        })
        .collect();

    let result = ComplexField::new(*target, out)?;
    let drift = (result.norm_sq() - initial.norm_sq()).abs();
    if drift > NORM_DRIFT_TOL {
        return Err(Error::Accuracy {
            drift,
            tolerance: NORM_DRIFT_TOL,
        });
    }
    Ok(result)
}

fn check_duration(duration: f64) -> Result<()> {
    if duration.is_finite() && duration > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "duration",
            value: duration,
            reason: "must be positive",
        })
    }
}

/// First and last index whose amplitude exceeds the support cutoff.
fn support(values: &[Complex64]) -> (usize, usize) {
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let cut = SUPPORT_CUTOFF * peak;
    let first = values.iter().position(|v| v.norm() > cut).unwrap_or(0);
    let last = values
        .iter()
        .rposition(|v| v.norm() > cut)
        .unwrap_or(values.len() - 1);
    (first, last)
}

/// Band-limited interpolation onto a grid `refine` times finer over the same
/// window: the spectrum is zero-padded on a wider momentum window with the same
/// spacing and transformed back.
fn refine_field(
    field: &ComplexField<SpaceGrid>,
    spectrum: &ComplexField<MomentumGrid>,
    refine: usize,
    hbar: f64,
) -> Result<ComplexField<SpaceGrid>> {
    let grid = field.grid();
    let n = grid.n();
    let fine_grid = SpaceGrid::new(n * refine, grid.center(), grid.half_width())?;
    let wide = MomentumGrid::reciprocal_to(&fine_grid, hbar, spectrum.grid().center())?;
    let offset = (n * refine - n) / 2;
    let mut padded = vec![Complex64::new(0.0, 0.0); n * refine];
    padded[offset..offset + n].copy_from_slice(spectrum.values());
    let padded = ComplexField::new(wide, padded)?;
    inverse_fourier_transform(&padded, hbar, &fine_grid)
}
