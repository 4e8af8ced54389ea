//! Closed-form evolution of the Gaussian packet under a constant force, its
//! densities, and the numerical routes that check them.
//!
//! With `τ = ħt/(mσ²)`, `X(t)` the classical center and `P(t) = p0 + f·t`,
//!
//! ```text
//! ψ(x,t) = [(1-iτ)/(1+iτ)]^{1/4} [πσ²(1+τ²)]^{-1/4}
//!          · exp[-(x-X)²(1-iτ) / (2σ²(1+τ²))]
//!          · exp[iP·x/ħ - (i/ħ)∫₀ᵗ P(s)²/(2m) ds]
//! ```

mod fourier;
mod propagate;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::model::{ComplexField, DensityProfile, Lattice, MomentumGrid, PacketSpec, SpaceGrid};

pub use fourier::{
    fourier_transform, fourier_transform_onto, inverse_fourier_transform, spectral_derivative,
};
pub use propagate::{propagate_with_kernel, propagate_with_kernel_onto, propagation_target};

/// `∫₀ᵗ (p0 + f·s)²/(2m) ds = (p0²t + p0·f·t² + f²t³/3)/(2m)`.
pub fn phase_integral(spec: &PacketSpec, t: f64) -> f64 {
    let (p0, f) = (spec.p0(), spec.force());
    (p0 * p0 * t + p0 * f * t * t + f * f * t * t * t / 3.0) / (2.0 * spec.mass())
}

/// Closed-form wave function at `(x, t)`.
pub fn psi_closed(spec: &PacketSpec, x: f64, t: f64) -> Complex64 {
    let tau = spec.tau(t);
    let spread = 1.0 + tau * tau;
    let sigma_sq = spec.sigma() * spec.sigma();
    let chirp = Complex64::new(1.0, -tau);

    let ratio = (chirp / Complex64::new(1.0, tau)).powf(0.25);
    let amplitude = (PI * sigma_sq * spread).powf(-0.25);
    let u = x - spec.center(t);
    let gauss = (-(u * u) * chirp / (2.0 * sigma_sq * spread)).exp();
    let plane = Complex64::cis((spec.momentum(t) * x - phase_integral(spec, t)) / spec.hbar());
    ratio * amplitude * gauss * plane
}

/// `|ψ(x,t)|²`: Gaussian with mean `X(t)` and variance `σ_t²/2`.
pub fn position_density(spec: &PacketSpec, x: f64, t: f64) -> f64 {
    let width_sq = spec.width_sq(t);
    let u = x - spec.center(t);
    (PI * width_sq).powf(-0.5) * (-(u * u) / width_sq).exp()
}

/// `|ψ̃(p,t)|² = (σ²/πħ²)^{1/2} exp(-σ²(p - P(t))²/ħ²)`; the width does not
/// depend on time.
pub fn momentum_density(spec: &PacketSpec, p: f64, t: f64) -> f64 {
    let a = spec.sigma() / spec.hbar();
    let u = p - spec.momentum(t);
    a / PI.sqrt() * (-(a * a) * u * u).exp()
}

/// `ψ(·, t)` sampled on `grid`.
pub fn sample_psi(spec: &PacketSpec, grid: SpaceGrid, t: f64) -> Result<ComplexField<SpaceGrid>> {
    ComplexField::from_fn(grid, |x| psi_closed(spec, x, t))
}

pub fn sample_position_density(
    spec: &PacketSpec,
    grid: SpaceGrid,
    t: f64,
) -> Result<DensityProfile<SpaceGrid>> {
    DensityProfile::from_fn(grid, |x| position_density(spec, x, t))
}

pub fn sample_momentum_density(
    spec: &PacketSpec,
    grid: MomentumGrid,
    t: f64,
) -> Result<DensityProfile<MomentumGrid>> {
    DensityProfile::from_fn(grid, |p| momentum_density(spec, p, t))
}

/// The packet at one instant, in the position representation.
#[derive(Debug, Clone)]
pub struct EvolvedState {
    pub spec: PacketSpec,
    pub t: f64,
    pub field: ComplexField<SpaceGrid>,
}

impl EvolvedState {
    pub fn closed_form(spec: PacketSpec, t: f64, grid: SpaceGrid) -> Result<Self> {
        let field = sample_psi(&spec, grid, t)?;
        Ok(Self { spec, t, field })
    }

    pub fn momentum(&self) -> Result<ComplexField<MomentumGrid>> {
        fourier_transform(&self.field, self.spec.hbar())
    }
}

/// First and second moments of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean_x: f64,
    pub var_x: f64,
    pub mean_p: f64,
    pub var_p: f64,
    /// Symmetrized covariance `⟨(xp + px)/2⟩ - ⟨x⟩⟨p⟩`.
    pub cov_xp: f64,
}

fn density_moments<G: Lattice>(rho: &DensityProfile<G>) -> (f64, f64) {
    let grid = rho.grid().lattice();
    let h = grid.spacing();
    let total = rho.total();
    let mean = rho
        .values()
        .iter()
        .zip(grid.points())
        .map(|(r, x)| r * x)
        .sum::<f64>()
        * h
        / total;
    let var = rho
        .values()
        .iter()
        .zip(grid.points())
        .map(|(r, x)| r * (x - mean) * (x - mean))
        .sum::<f64>()
        * h
        / total;
    (mean, var)
}

/// Grid moments; the momentum side goes through [`fourier_transform`].
pub fn moments(field: &ComplexField<SpaceGrid>, hbar: f64) -> Result<Moments> {
    let norm = field.norm_sq();
    let (mean_x, var_x) = density_moments(&field.density());
    let (mean_p, var_p) = density_moments(&fourier_transform(field, hbar)?.density());
    // ⟨(xp+px)/2⟩ = Re ∫ ψ* x (-iħ ∂ₓψ) dx
    let dpsi = spectral_derivative(field, hbar, 1)?;
    let h = field.grid().spacing();
    let sym = field
        .values()
        .iter()
        .zip(dpsi.values())
        .zip(field.grid().points())
        .map(|((v, d), x)| (v.conj() * x * (-Complex64::i() * hbar) * d).re)
        .sum::<f64>()
        * h
        / norm;
    Ok(Moments {
        mean_x,
        var_x,
        mean_p,
        var_p,
        cov_xp: sym - mean_x * mean_p,
    })
}

/// Time step of the central difference in [`schrodinger_residual`], in units
/// of `mσ²/ħ`.
pub const RESIDUAL_TIME_STEP: f64 = 1e-5;

/// `‖iħ∂ₜψ - Hψ‖ / ‖ψ‖` with `H = -(ħ²/2m)∂ₓₓ - f·x`, evaluated on `grid`.
///
/// `∂ₜ` is a central difference of the closed form; `∂ₓₓ` is spectral.
pub fn schrodinger_residual(spec: &PacketSpec, t: f64, grid: SpaceGrid) -> Result<f64> {
    let dt = spec.time_for_tau(RESIDUAL_TIME_STEP);
    let psi = sample_psi(spec, grid, t)?;
    let ahead = sample_psi(spec, grid, t + dt)?;
    let behind = sample_psi(spec, grid, t - dt)?;
    let d2 = spectral_derivative(&psi, spec.hbar(), 2)?;
    let (hbar, m, f) = (spec.hbar(), spec.mass(), spec.force());

    let mut res_sq = 0.0;
    let mut norm_sq = 0.0;
    for (j, x) in grid.points().enumerate() {
        let dpsi_dt = (ahead.values()[j] - behind.values()[j]) / (2.0 * dt);
        let lhs = Complex64::i() * hbar * dpsi_dt;
        let rhs = -hbar * hbar / (2.0 * m) * d2.values()[j] - f * x * psi.values()[j];
        res_sq += (lhs - rhs).norm_sqr();
        norm_sq += psi.values()[j].norm_sqr();
    }
    Ok((res_sq / norm_sq).sqrt())
}

/// Multiplies `candidate` by the global phase that aligns it with `reference`
/// at the reference density peak.
pub fn align_global_phase(reference: &[Complex64], candidate: &[Complex64]) -> Vec<Complex64> {
    let peak = fourier::argmax_norm(reference);
    let ratio = reference[peak] / candidate[peak];
    let phase = if ratio.norm() > 0.0 {
        ratio / ratio.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    candidate.iter().map(|c| c * phase).collect()
}

/// `‖a - b‖₂ / ‖b‖₂`.
pub fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let norm: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (diff / norm).sqrt()
}

/// Relative L2 distance between `candidate` and `reference` after global
/// phase alignment.
pub fn phase_aligned_error(reference: &[Complex64], candidate: &[Complex64]) -> f64 {
    relative_l2(&align_global_phase(reference, candidate), reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_adaptive_grid_with;

    fn spec(p0: f64, f: f64) -> PacketSpec {
        PacketSpec::new(1.0, 1.0, 1.0, p0, 0.0, f).unwrap()
    }

    #[test]
    fn initial_peak() {
        let v = psi_closed(&spec(0.0, 0.0), 0.0, 0.0);
        assert!((v.re - PI.powf(-0.25)).abs() < 1e-15);
        assert!((v.re - 0.7511255).abs() < 1e-7);
        assert_eq!(v.im, 0.0);
        assert!((position_density(&spec(0.0, 0.0), 0.0, 0.0) - 0.5641896).abs() < 1e-7);
    }

    #[test]
    fn phase_integral_matches_quadrature() {
        let s = spec(1.0, 1.0);
        // Simpson on ∫₀¹ (1+τ)²/2 dτ
        let n = 1000;
        let h = 1.0 / n as f64;
        let simpson: f64 = (0..=n)
            .map(|k| {
                let tau = k as f64 * h;
                let w = if k == 0 || k == n {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * (1.0 + tau).powi(2) / 2.0
            })
            .sum::<f64>()
            * h
            / 3.0;
        assert!((simpson - 7.0 / 6.0).abs() < 1e-12);
        assert!((phase_integral(&s, 1.0) - simpson).abs() < 1e-12);
    }

    #[test]
    fn moving_peak_value() {
        let s = spec(0.0, 1.0);
        let expected = (5.0 * PI).powf(-0.5);
        assert!((expected - 0.2523133).abs() < 1e-7);
        assert!((psi_closed(&s, 2.0, 2.0).norm_sqr() - expected).abs() < 1e-15);
        assert!((position_density(&s, 2.0, 2.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn density_is_modulus_squared() {
        let s = PacketSpec::new(1.7, 0.6, 0.8, -1.2, 0.4, 2.5).unwrap();
        for &t in &[-0.5, 0.0, 0.3, 2.0] {
            for &x in &[-3.0, -0.1, 0.0, 1.5, 4.0] {
                let a = psi_closed(&s, x, t).norm_sqr();
                let b = position_density(&s, x, t);
                assert!(
                    (a - b).abs() < 1e-14 * b.max(1e-300) + 1e-300,
                    "x {x} t {t}"
                );
            }
        }
    }

    #[test]
    fn densities_normalize() {
        let s = spec(1.0, 2.0);
        for &t in &[0.0, 1.0, 3.0] {
            let grid = make_adaptive_grid_with(&s, t, 8.0, 1024).unwrap();
            let rho = sample_position_density(&s, grid, t).unwrap();
            assert!((rho.total() - 1.0).abs() < 1e-12);
            let pgrid = MomentumGrid::new(1024, s.momentum(t), 8.0).unwrap();
            let rho_p = sample_momentum_density(&s, pgrid, t).unwrap();
            assert!((rho_p.total() - 1.0).abs() < 1e-12);
        }
        assert!((momentum_density(&spec(0.0, 0.0), 0.0, 4.0) - 0.5641896).abs() < 1e-7);
    }

    #[test]
    fn momentum_peak_via_transform() {
        let s = spec(1.0, 2.0);
        let grid = make_adaptive_grid_with(&s, 1.0, 8.0, 2048).unwrap();
        let phi = EvolvedState::closed_form(s, 1.0, grid)
            .unwrap()
            .momentum()
            .unwrap();
        let peak = fourier::argmax_norm(phi.values());
        assert!((phi.grid().point(peak) - 3.0).abs() <= phi.grid().spacing());
    }

    #[test]
    fn transform_matches_corrected_momentum_density() {
        let s = spec(1.0, 0.0);
        let grid = make_adaptive_grid_with(&s, 0.0, 8.0, 4096).unwrap();
        let target = MomentumGrid::reciprocal_to(&grid, 1.0, 1.0).unwrap();
        let phi =
            fourier_transform_onto(&sample_psi(&s, grid, 0.0).unwrap(), 1.0, &target).unwrap();
        let at_one = phi.values()[target.n() / 2].norm_sqr();
        assert!((at_one - 0.5641896).abs() < 1e-7);
        assert!((at_one - PI.powf(-0.5)).abs() < 1e-8);
    }

    #[test]
    fn residual_is_small() {
        for &f in &[0.0, 1.0, -2.0] {
            let s = spec(1.0, f);
            for &t in &[0.5, 1.0, 2.0] {
                let grid = make_adaptive_grid_with(&s, t, 8.0, 1024).unwrap();
                let r = schrodinger_residual(&s, t, grid).unwrap();
                assert!(r < 1e-5, "f {f} t {t}: {r}");
            }
        }
    }

    #[test]
    fn residual_detects_wrong_force_sign() {
        // Evaluating the operator with the opposite force must not vanish.
        let s = spec(0.0, 1.0);
        let wrong = spec(0.0, -1.0);
        let grid = make_adaptive_grid_with(&s, 1.0, 8.0, 1024).unwrap();
        let psi = sample_psi(&s, grid, 1.0).unwrap();
        let dt = 1e-5;
        let ahead = sample_psi(&s, grid, 1.0 + dt).unwrap();
        let behind = sample_psi(&s, grid, 1.0 - dt).unwrap();
        let d2 = spectral_derivative(&psi, 1.0, 2).unwrap();
        let mut res = 0.0;
        for (j, x) in grid.points().enumerate() {
            let lhs = Complex64::i() * (ahead.values()[j] - behind.values()[j]) / (2.0 * dt);
            let rhs = -0.5 * d2.values()[j] - wrong.force() * x * psi.values()[j];
            res += (lhs - rhs).norm_sqr() * grid.spacing();
        }
        assert!(res.sqrt() > 0.1);
    }

    #[test]
    fn ehrenfest_and_variances() {
        let s = PacketSpec::new(1.0, 1.0, 1.0, 1.0, 0.5, 5.0).unwrap();
        for &t in &[0.0, 0.7, 2.0] {
            let grid = make_adaptive_grid_with(&s, t, 8.0, 4096).unwrap();
            let m = moments(&sample_psi(&s, grid, t).unwrap(), 1.0).unwrap();
            assert!((m.mean_x - s.center(t)).abs() < 1e-8, "t {t}: {}", m.mean_x);
            assert!(
                (m.mean_p - s.momentum(t)).abs() < 1e-8,
                "t {t}: {}",
                m.mean_p
            );
            assert!((m.var_x - s.width_sq(t) / 2.0).abs() < 1e-8);
            assert!((m.var_p - 0.5).abs() < 1e-8);
            // dVar_x/dt = 2·cov/m with Var_x = σ²(1+τ²)/2 gives cov = ħτ/2
            assert!((m.cov_xp - s.tau(t) / 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn phase_alignment() {
        let a: Vec<Complex64> = (0..8)
            .map(|k| Complex64::new(1.0 + k as f64, 0.5))
            .collect();
        let b: Vec<Complex64> = a.iter().map(|v| v * Complex64::cis(1.234)).collect();
        assert!(phase_aligned_error(&a, &b) < 1e-15);
        assert!(relative_l2(&b, &a) > 0.1);
    }
}
