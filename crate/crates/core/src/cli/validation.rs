//! Cross-checks between the closed forms and their independent numerical
//! routes. Every check reports the raw measured error next to its tolerance.

use num_complex::Complex64;
use serde::Serialize;

use super::config::RunConfig;
use crate::classical::{
    classical_action, classical_path, classical_velocity, compose_kernels, kernel, lagrangian,
};
use crate::entropy::{joint_entropy_closed, leipnik_bound, numeric_entropies};
use crate::error::Result;
use crate::model::{make_adaptive_grid_with, MomentumGrid, PacketSpec};
use crate::quantum::{
    fourier_transform, fourier_transform_onto, inverse_fourier_transform, moments,
    momentum_density, phase_aligned_error, propagate_with_kernel, sample_psi, schrodinger_residual,
};

pub const PROPAGATION_TOL: f64 = 1e-6;
pub const MOMENTUM_LINF_TOL: f64 = 1e-8;
pub const RESIDUAL_TOL: f64 = 1e-5;
pub const EHRENFEST_TOL: f64 = 1e-8;
pub const COMPOSITION_TOL: f64 = 1e-4;
pub const ACTION_TOL: f64 = 1e-9;
pub const ENTROPY_TOL: f64 = 1e-6;
pub const BOUND_TOL: f64 = 1e-12;
pub const ROUND_TRIP_TOL: f64 = 1e-12;

/// Dimensionless times of the entropy agreement check.
pub const ENTROPY_TAUS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];

/// Force used by the cross-force check when the configured force is zero.
pub const CROSS_FORCE: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    fn new(name: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_owned(),
            measured,
            tolerance,
            passed: measured.is_finite() && measured <= tolerance,
            detail: None,
        }
    }

    fn from_result(name: &str, measured: Result<f64>, tolerance: f64) -> Self {
        match measured {
            Ok(m) => Self::new(name, m, tolerance),
            Err(e) => Self {
                detail: Some(e.to_string()),
                ..Self::new(name, f64::INFINITY, tolerance)
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Which group of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Kernel propagation, kernel composition and the action oracle.
    Kernel,
    Full,
}

/// Runs every check of `suite` for the packet and grid described by `config`.
pub fn run_validation(config: &RunConfig, suite: Suite) -> Result<ValidationReport> {
    config.validate()?;
    let spec = config.packet()?;
    let mut checks = vec![
        CheckResult::from_result(
            "kernel_propagation",
            kernel_propagation(&spec, config),
            PROPAGATION_TOL,
        ),
        CheckResult::from_result(
            "kernel_composition",
            kernel_composition(&spec),
            COMPOSITION_TOL,
        ),
        CheckResult::from_result("action_oracle", action_oracle(&spec), ACTION_TOL),
    ];
    if suite == Suite::Full {
        checks.extend([
            CheckResult::from_result(
                "momentum_transform",
                momentum_transform(&spec, config),
                MOMENTUM_LINF_TOL,
            ),
            CheckResult::from_result("momentum_peak", momentum_peak(&spec, config), 1.0),
            CheckResult::from_result(
                "fourier_round_trip",
                round_trip(&spec, config),
                ROUND_TRIP_TOL,
            ),
            CheckResult::from_result(
                "schrodinger_residual",
                residual(&spec, config),
                RESIDUAL_TOL,
            ),
            CheckResult::from_result("ehrenfest", ehrenfest(&spec, config), EHRENFEST_TOL),
            entropy_agreement(&spec, config),
            CheckResult::from_result(
                "force_independence",
                force_independence(&spec, config),
                ENTROPY_TOL,
            ),
            CheckResult::new("entropy_bound", bound_violation(&spec, config), BOUND_TOL),
        ]);
    }
    Ok(ValidationReport { checks })
}

/// Kernel-propagated vs closed-form state after `T = mσ²/ħ`.
fn kernel_propagation(spec: &PacketSpec, config: &RunConfig) -> Result<f64> {
    let duration = spec.time_for_tau(1.0);
    let grid = make_adaptive_grid_with(spec, 0.0, config.pad, config.grid_n)?;
    let initial = sample_psi(spec, grid, 0.0)?;
    let evolved = propagate_with_kernel(spec, &initial, duration)?;
    let exact = sample_psi(spec, *evolved.grid(), duration)?;
    Ok(phase_aligned_error(exact.values(), evolved.values()))
}

/// Spot points `(x'', x', T1, T2)` in units of `σ` and `mσ²/ħ`.
const COMPOSITION_POINTS: [(f64, f64, f64, f64); 5] = [
    (0.0, 0.0, 0.5, 0.5),
    (1.0, -1.0, 0.3, 0.7),
    (2.0, 0.5, 1.0, 1.0),
    (-1.5, 0.7, 0.25, 1.5),
    (0.3, 2.2, 2.0, 0.4),
];

fn kernel_composition(spec: &PacketSpec) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(xb, xa, t1, t2) in &COMPOSITION_POINTS {
        let (xb, xa) = (spec.x0() + xb * spec.sigma(), spec.x0() + xa * spec.sigma());
        let (t1, t2) = (spec.time_for_tau(t1), spec.time_for_tau(t2));
        let composed = compose_kernels(spec, xb, xa, t1, t2)?;
        let direct = kernel(spec, xb, xa, t1 + t2)?.value();
        worst = worst.max((composed - direct).norm());
    }
    Ok(worst)
}

/// Simpson quadrature of the Lagrangian along the classical path.
pub fn action_by_quadrature(
    spec: &PacketSpec,
    x_start: f64,
    x_end: f64,
    duration: f64,
) -> Result<f64> {
    let n = 2000;
    let h = duration / n as f64;
    let mut acc = 0.0;
    for k in 0..=n {
        let tau = k as f64 * h;
        let w = if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let x = classical_path(spec, x_start, x_end, duration, tau.min(duration))?;
        let v = classical_velocity(spec, x_start, x_end, duration, tau)?;
        acc += w * lagrangian(spec, x, v);
    }
    Ok(acc * h / 3.0)
}

fn action_oracle(spec: &PacketSpec) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(xa, xb, t) in &[(0.0, 0.0, 1.0), (-1.0, 2.0, 0.5), (0.3, -0.8, 2.0)] {
        let (xa, xb, t) = (xa * spec.sigma(), xb * spec.sigma(), spec.time_for_tau(t));
        let exact = classical_action(spec, xa, xb, t)?.0;
        worst = worst.max((action_by_quadrature(spec, xa, xb, t)? - exact).abs());
    }
    Ok(worst)
}

fn check_times(spec: &PacketSpec, config: &RunConfig) -> [f64; 3] {
    [0.0, spec.time_for_tau(1.0), config.t_max]
}

/// L∞ distance between `|FFT ψ|²` and the closed-form momentum density.
fn momentum_transform(spec: &PacketSpec, config: &RunConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for t in check_times(spec, config) {
        let grid = make_adaptive_grid_with(spec, t, config.pad, config.grid_n)?;
        let target = MomentumGrid::reciprocal_to(&grid, spec.hbar(), spec.momentum(t))?;
        let phi = fourier_transform_onto(&sample_psi(spec, grid, t)?, spec.hbar(), &target)?;
        for (v, p) in phi.values().iter().zip(target.points()) {
            worst = worst.max((v.norm_sqr() - momentum_density(spec, p, t)).abs());
        }
    }
    Ok(worst)
}

/// Peak of `|FFT ψ|²` relative to `p0 + f·t`, in momentum-grid spacings.
fn momentum_peak(spec: &PacketSpec, config: &RunConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for t in check_times(spec, config) {
        let grid = make_adaptive_grid_with(spec, t, config.pad, config.grid_n)?;
        let phi = fourier_transform(&sample_psi(spec, grid, t)?, spec.hbar())?;
        let values = phi.values();
        let peak = (0..values.len())
            .max_by(|&a, &b| values[a].norm_sqr().total_cmp(&values[b].norm_sqr()))
            .unwrap_or(0);
        worst = worst.max((phi.grid().point(peak) - spec.momentum(t)).abs() / phi.grid().spacing());
    }
    Ok(worst)
}

fn round_trip(spec: &PacketSpec, config: &RunConfig) -> Result<f64> {
    let t = config.t_max;
    let grid = make_adaptive_grid_with(spec, t, config.pad, config.grid_n)?;
    let psi = sample_psi(spec, grid, t)?;
    let back =
        inverse_fourier_transform(&fourier_transform(&psi, spec.hbar())?, spec.hbar(), &grid)?;
    Ok(back
        .values()
        .iter()
        .zip(psi.values())
        .map(|(a, b): (&Complex64, &Complex64)| (a - b).norm())
        .fold(0.0, f64::max))
}

fn residual(spec: &PacketSpec, config: &RunConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for tau in [0.5, 1.0, 2.0] {
        let t = spec.time_for_tau(tau);
        let grid = make_adaptive_grid_with(spec, t, config.pad, config.grid_n)?;
        worst = worst.max(schrodinger_residual(spec, t, grid)?);
    }
    Ok(worst)
}

/// Largest deviation of grid means and variances from the classical laws.
fn ehrenfest(spec: &PacketSpec, config: &RunConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    let var_p = spec.hbar() * spec.hbar() / (2.0 * spec.sigma() * spec.sigma());
    for t in check_times(spec, config) {
        let grid = make_adaptive_grid_with(spec, t, config.pad, config.grid_n)?;
        let m = moments(&sample_psi(spec, grid, t)?, spec.hbar())?;
        for err in [
            m.mean_x - spec.center(t),
            m.mean_p - spec.momentum(t),
            m.var_x - spec.width_sq(t) / 2.0,
            m.var_p - var_p,
        ] {
            worst = worst.max(err.abs());
        }
    }
    Ok(worst)
}

fn entropy_agreement(spec: &PacketSpec, config: &RunConfig) -> CheckResult {
    let mut worst = 0.0f64;
    for tau in ENTROPY_TAUS {
        let t = spec.time_for_tau(tau);
        match numeric_entropies(spec, t, config.grid_n, config.pad) {
            Ok(e) => worst = worst.max((e.s_joint - joint_entropy_closed(spec, t)).abs()),
            Err(e) => {
                return CheckResult {
                    detail: Some(format!("tau = {tau}: {e}")),
                    ..CheckResult::new("entropy_agreement", f64::INFINITY, ENTROPY_TOL)
                }
            }
        }
    }
    CheckResult::new("entropy_agreement", worst, ENTROPY_TOL)
}

/// Numerical `S_j` with the configured force against the same packet with no
/// force, at several `τ`.
fn force_independence(spec: &PacketSpec, config: &RunConfig) -> Result<f64> {
    let force = if spec.force() == 0.0 {
        CROSS_FORCE
    } else {
        spec.force()
    };
    let forced = spec.with_force(force)?;
    let free = spec.with_force(0.0)?;
    let mut worst = 0.0f64;
    for tau in [0.0, 1.0, 2.0, 5.0] {
        let t = spec.time_for_tau(tau);
        let a = numeric_entropies(&forced, t, config.grid_n, config.pad)?.s_joint;
        let b = numeric_entropies(&free, t, config.grid_n, config.pad)?.s_joint;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// Largest violation of the lower bound or of monotonicity over the sweep.
fn bound_violation(spec: &PacketSpec, config: &RunConfig) -> f64 {
    let bound = leipnik_bound();
    let mut worst = 0.0f64;
    let mut previous = f64::NEG_INFINITY;
    for t in config.times() {
        let s = joint_entropy_closed(spec, t);
        worst = worst.max(bound - s).max(previous - s);
        previous = s;
    }
    worst
}
