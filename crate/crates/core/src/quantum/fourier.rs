//! Position ↔ momentum transform with the continuum convention
//!
//! ```text
//! ψ̃(p) = (2πħ)^{-1/2} ∫ e^{-ipx/ħ} ψ(x) dx
//! ```
//!
//! sampled exactly at the nodes of a reciprocal grid. With `x_j = x_min + j·Δx`
//! and `p_k = p_min + k·Δp`, `Δx·Δp·n = 2πħ`, the kernel factors as
//! `e^{-ip_k x_min/ħ} · e^{-ip_min jΔx/ħ} · e^{-2πijk/n}`, so one FFT plus two
//! diagonal phase ramps gives the trapezoid value of the integral on any
//! (off-center) pair of windows.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::model::{ComplexField, MomentumGrid, SpaceGrid, UniformGrid};

const RECIPROCITY_TOL: f64 = 1e-9;

fn check_reciprocal(x: &UniformGrid, p: &UniformGrid, hbar: f64) -> Result<()> {
    if x.n() != p.n() {
        return Err(Error::LengthMismatch {
            expected: x.n(),
            actual: p.n(),
        });
    }
    let product = x.spacing() * p.spacing() * x.n() as f64;
    let h = 2.0 * PI * hbar;
    if (product - h).abs() > RECIPROCITY_TOL * h {
        return Err(Error::InvalidGrid(format!(
            "grids are not reciprocal: Δx·Δp·n = {product}, expected 2πħ = {h}"
        )));
    }
    Ok(())
}

/// `out_k = scale · e^{sign·i p_k x_min/ħ} · FFT_sign[ v_j e^{sign·i p_min jΔx/ħ} ]`
fn transform(
    values: &[Complex64],
    from: &UniformGrid,
    to: &UniformGrid,
    hbar: f64,
    sign: f64,
) -> Vec<Complex64> {
    let n = from.n();
    let (from_min, to_min) = (from.start(), to.start());
    let (h_from, h_to) = (from.spacing(), to.spacing());

    let mut buf: Vec<Complex64> = values
        .iter()
        .enumerate()
        .map(|(j, v)| v * Complex64::cis(sign * to_min * j as f64 * h_from / hbar))
        .collect();

    let mut planner = FftPlanner::<f64>::new();
    let fft = if sign < 0.0 {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    };
    fft.process(&mut buf);

    let scale = h_from / (2.0 * PI * hbar).sqrt();
    buf.iter_mut().enumerate().for_each(|(k, v)| {
        let node = to_min + k as f64 * h_to;
        *v *= Complex64::cis(sign * node * from_min / hbar) * scale;
    });
    buf
}

/// Forward transform onto an explicit reciprocal momentum grid.
pub fn fourier_transform_onto(
    field: &ComplexField<SpaceGrid>,
    hbar: f64,
    target: &MomentumGrid,
) -> Result<ComplexField<MomentumGrid>> {
    check_reciprocal(field.grid(), target, hbar)?;
    let values = transform(field.values(), field.grid(), target, hbar, -1.0);
    ComplexField::new(*target, values)
}

/// Inverse transform onto an explicit reciprocal position grid.
pub fn inverse_fourier_transform(
    field: &ComplexField<MomentumGrid>,
    hbar: f64,
    target: &SpaceGrid,
) -> Result<ComplexField<SpaceGrid>> {
    check_reciprocal(target, field.grid(), hbar)?;
    let values = transform(field.values(), field.grid(), target, hbar, 1.0);
    ComplexField::new(*target, values)
}

/// Forward transform onto the reciprocal grid centered on the spectral peak.
///
/// A first pass on the zero-centered window locates the peak node; the second
/// pass uses the window of the same width centered on that node, so packets
/// with large mean momentum are not split across the window edge.
pub fn fourier_transform(
    field: &ComplexField<SpaceGrid>,
    hbar: f64,
) -> Result<ComplexField<MomentumGrid>> {
    let centered = MomentumGrid::reciprocal_to(field.grid(), hbar, 0.0)?;
    let first = fourier_transform_onto(field, hbar, &centered)?;
    let peak = argmax_norm(first.values());
    let p_peak = centered.point(peak);
    if peak == centered.n() / 2 {
        return Ok(first);
    }
    let shifted = MomentumGrid::reciprocal_to(field.grid(), hbar, p_peak)?;
    fourier_transform_onto(field, hbar, &shifted)
}

/// `∂ⁿψ/∂xⁿ` by multiplication with `(ip/ħ)ⁿ` in momentum space.
pub fn spectral_derivative(
    field: &ComplexField<SpaceGrid>,
    hbar: f64,
    order: u32,
) -> Result<ComplexField<SpaceGrid>> {
    let spectrum = fourier_transform(field, hbar)?;
    let grid = *spectrum.grid();
    let scaled: Vec<Complex64> = spectrum
        .values()
        .iter()
        .zip(grid.points())
        .map(|(v, p)| v * (Complex64::i() * p / hbar).powu(order))
        .collect();
    inverse_fourier_transform(&ComplexField::new(grid, scaled)?, hbar, field.grid())
}

pub(crate) fn argmax_norm(values: &[Complex64]) -> usize {
    values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}
