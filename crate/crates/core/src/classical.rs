//! Classical mechanics of the linear potential `V(x) = -f·x` and the exact
//! Feynman kernel built from it.
//!
//! For a Lagrangian at most quadratic in `x` and `ẋ` the semiclassical form
//! `F·exp(iS_cl/ħ)` is exact, so [`kernel`] is the full propagator.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::PacketSpec;

/// Classical action along the classical path (action units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionValue(pub f64);

/// Kernel amplitude `K(x'', x'; T)` (inverse length units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue(pub Complex64);

impl KernelValue {
    pub fn value(&self) -> Complex64 {
        self.0
    }
}

fn check_duration(duration: f64) -> Result<()> {
    if duration.is_finite() && duration > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "duration",
            value: duration,
            reason: "kernel is singular at coincident times; duration must be > 0",
        })
    }
}

/// Lagrangian `m·v²/2 + f·x`.
pub fn lagrangian(spec: &PacketSpec, x: f64, v: f64) -> f64 {
    0.5 * spec.mass() * v * v + spec.force() * x
}

/// Position at elapsed time `tau` on the classical path from `x_start` to
/// `x_end` in time `duration`.
pub fn classical_path(
    spec: &PacketSpec,
    x_start: f64,
    x_end: f64,
    duration: f64,
    tau: f64,
) -> Result<f64> {
    check_duration(duration)?;
    if !(tau.is_finite() && (0.0..=duration).contains(&tau)) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "must lie in [0, duration]",
        });
    }
    if tau == duration {
        return Ok(x_end);
    }
    let accel = spec.force() / spec.mass();
    let v0 = (x_end - x_start) / duration - 0.5 * accel * duration;
    Ok(x_start + v0 * tau + 0.5 * accel * tau * tau)
}

/// Velocity on the same path.
pub fn classical_velocity(
    spec: &PacketSpec,
    x_start: f64,
    x_end: f64,
    duration: f64,
    tau: f64,
) -> Result<f64> {
    check_duration(duration)?;
    let accel = spec.force() / spec.mass();
    Ok((x_end - x_start) / duration - 0.5 * accel * duration + accel * tau)
}

/// `S_cl = m(Δx)²/(2T) + (x_end + x_start)·f·T/2 - f²T³/(24m)`.
pub fn classical_action(
    spec: &PacketSpec,
    x_start: f64,
    x_end: f64,
    duration: f64,
) -> Result<ActionValue> {
    check_duration(duration)?;
    let (m, f, t) = (spec.mass(), spec.force(), duration);
    let dx = x_end - x_start;
    Ok(ActionValue(
        0.5 * m * dx * dx / t + 0.5 * (x_end + x_start) * f * t - f * f * t * t * t / (24.0 * m),
    ))
}

/// `∂²S_cl/∂x'∂x''`, which is `-m/T` for every linear potential.
pub fn mixed_action_derivative(spec: &PacketSpec, duration: f64) -> Result<f64> {
    check_duration(duration)?;
    Ok(-spec.mass() / duration)
}

/// `[i/(2πħ) · ∂²S_cl/∂x'∂x'']^{1/2}` on the principal branch, which equals
/// `e^{-iπ/4}·√(m/(2πħT))`.
pub fn van_vleck_prefactor(spec: &PacketSpec, duration: f64) -> Result<Complex64> {
    let mixed = mixed_action_derivative(spec, duration)?;
    Ok((Complex64::i() * mixed / (2.0 * PI * spec.hbar())).sqrt())
}

/// Propagator `K(x_end, x_start; duration)`.
pub fn kernel(spec: &PacketSpec, x_end: f64, x_start: f64, duration: f64) -> Result<KernelValue> {
    let prefactor = van_vleck_prefactor(spec, duration)?;
    let action = classical_action(spec, x_start, x_end, duration)?.0;
    Ok(KernelValue(
        prefactor * Complex64::cis(action / spec.hbar()),
    ))
}

/// Kernel without argument checks, for inner quadrature loops.
pub(crate) fn kernel_unchecked(
    spec: &PacketSpec,
    prefactor: Complex64,
    x_end: f64,
    x_start: f64,
    duration: f64,
) -> Complex64 {
    let (m, f, t) = (spec.mass(), spec.force(), duration);
    let dx = x_end - x_start;
    let action =
        0.5 * m * dx * dx / t + 0.5 * (x_end + x_start) * f * t - f * f * t * t * t / (24.0 * m);
    prefactor * Complex64::cis(action / spec.hbar())
}

/// Trapezoid nodes used by [`compose_kernels`].
pub const COMPOSITION_POINTS: usize = 1 << 17;

/// Half-window of the composition quadrature in units of `√(ħT_eff/m)`.
pub const COMPOSITION_WINDOW: f64 = 400.0;

/// Value of `ε·W²` for the Gaussian regulator `e^{-ε(y-y_s)²}`.
const COMPOSITION_DAMPING: f64 = 40.0;

/// `∫ K(x_end, y; t2)·K(y, x_start; t1) dy` by regulated quadrature.
///
/// The integrand is a pure chirp. It is centered on the classical point
/// `y_s = x_cl(t1)` of the path from `x_start` to `x_end` over `t1 + t2`,
/// damped by `e^{-ε(y-y_s)²}` so the window edges contribute nothing, and the
/// `O(ε)` bias is removed by Richardson extrapolation from `ε` and `2ε`.
pub fn compose_kernels(
    spec: &PacketSpec,
    x_end: f64,
    x_start: f64,
    t1: f64,
    t2: f64,
) -> Result<Complex64> {
    check_duration(t1)?;
    check_duration(t2)?;
    let total = t1 + t2;
    let y_s = classical_path(spec, x_start, x_end, total, t1)?;
    let t_eff = t1 * t2 / total;
    let half = COMPOSITION_WINDOW * (spec.hbar() * t_eff / spec.mass()).sqrt();
    let eps = COMPOSITION_DAMPING / (half * half);
    let h = 2.0 * half / COMPOSITION_POINTS as f64;
    let pre1 = van_vleck_prefactor(spec, t1)?;
    let pre2 = van_vleck_prefactor(spec, t2)?;

    let regulated = |eps: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=COMPOSITION_POINTS {
            let u = -half + j as f64 * h;
            let y = y_s + u;
            let w = if j == 0 || j == COMPOSITION_POINTS {
                0.5
            } else {
                1.0
            };
            let k2 = kernel_unchecked(spec, pre2, x_end, y, t2);
            let k1 = kernel_unchecked(spec, pre1, y, x_start, t1);
            acc += k2 * k1 * (w * (-eps * u * u).exp());
        }
        acc * h
    };
    Ok(regulated(eps) * 2.0 - regulated(2.0 * eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: f64, hbar: f64, f: f64) -> PacketSpec {
        PacketSpec::new(m, hbar, 1.0, 0.0, 0.0, f).unwrap()
    }

    /// Shooting oracle: RK4 for m·ẍ = f with a secant correction of v0.
    fn shoot(spec: &PacketSpec, a: f64, b: f64, duration: f64, tau: f64) -> f64 {
        let steps = 2000;
        let run = |v0: f64, until: f64| -> f64 {
            let h = until / steps as f64;
            let acc = spec.force() / spec.mass();
            let (mut x, mut v) = (a, v0);
            for _ in 0..steps {
                // RK4 for (x, v)' = (v, acc)
                let (k1x, k1v) = (v, acc);
                let (k2x, k2v) = (v + 0.5 * h * k1v, acc);
                let (k3x, k3v) = (v + 0.5 * h * k2v, acc);
                let (k4x, k4v) = (v + h * k3v, acc);
                x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
                v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            }
            x
        };
        let (g0, g1) = (0.0, 1.0);
        let (e0, e1) = (run(g0, duration) - b, run(g1, duration) - b);
        let v0 = g0 - e0 * (g1 - g0) / (e1 - e0);
        if tau == 0.0 {
            a
        } else {
            run(v0, tau)
        }
    }

    #[test]
    fn path_boundary_conditions() {
        let s = spec(1.3, 1.0, -0.7);
        for &(a, b, t) in &[(0.0, 1.0, 1.0), (-2.5, 3.0, 0.4), (1.0, 1.0, 7.0)] {
            assert_eq!(classical_path(&s, a, b, t, 0.0).unwrap(), a);
            assert_eq!(classical_path(&s, a, b, t, t).unwrap(), b);
        }
    }

    #[test]
    fn path_matches_shooting_oracle() {
        let s = spec(1.0, 1.0, 1.0);
        let oracle = shoot(&s, 0.0, 0.0, 1.0, 0.5);
        assert!((oracle + 0.125).abs() < 1e-12, "oracle {oracle}");
        let x = classical_path(&s, 0.0, 0.0, 1.0, 0.5).unwrap();
        assert!((x + 0.125).abs() < 1e-15);

        let s = spec(2.0, 1.0, -3.0);
        for &tau in &[0.1, 0.9, 1.7] {
            let want = shoot(&s, -1.0, 0.5, 2.0, tau);
            let got = classical_path(&s, -1.0, 0.5, 2.0, tau).unwrap();
            assert!((got - want).abs() < 1e-10, "tau {tau}: {got} vs {want}");
        }
    }

    #[test]
    fn path_rejects_bad_times() {
        let s = spec(1.0, 1.0, 1.0);
        assert!(classical_path(&s, 0.0, 1.0, 0.0, 0.0).is_err());
        assert!(classical_path(&s, 0.0, 1.0, -1.0, 0.0).is_err());
        assert!(classical_path(&s, 0.0, 1.0, 1.0, 1.5).is_err());
        assert!(classical_action(&s, 0.0, 1.0, 0.0).is_err());
        assert!(kernel(&s, 0.0, 1.0, -2.0).is_err());
        assert!(van_vleck_prefactor(&s, 0.0).is_err());
    }

    #[test]
    fn euler_lagrange_residual() {
        let s = spec(1.0, 1.0, 1.0);
        let h = 1e-3;
        let (a, b, t) = (-0.3, 0.8, 1.0);
        let x = |tau: f64| classical_path(&s, a, b, t, tau).unwrap();
        let mut tau = h;
        while tau + h < t {
            let acc = (x(tau + h) - 2.0 * x(tau) + x(tau - h)) / (h * h);
            assert!((s.mass() * acc - s.force()).abs() <= 1e-6, "tau {tau}");
            tau += 0.01;
        }
    }

    /// Simpson quadrature of the Lagrangian along `path`/`vel`.
    fn action_integral(
        s: &PacketSpec,
        t: f64,
        path: impl Fn(f64) -> f64,
        vel: impl Fn(f64) -> f64,
    ) -> f64 {
        let n = 2000;
        let h = t / n as f64;
        (0..=n)
            .map(|k| {
                let tau = k as f64 * h;
                let w = if k == 0 || k == n {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * lagrangian(s, path(tau), vel(tau))
            })
            .sum::<f64>()
            * h
            / 3.0
    }

    #[test]
    fn action_examples() {
        let free = spec(1.0, 1.0, 0.0);
        assert_eq!(classical_action(&free, 0.7, 0.7, 3.0).unwrap().0, 0.0);
        assert!((classical_action(&free, 0.0, 1.0, 1.0).unwrap().0 - 0.5).abs() < 1e-15);
        let s = spec(1.0, 1.0, 1.0);
        let value = classical_action(&s, 0.0, 0.0, 1.0).unwrap().0;
        assert!((value + 1.0 / 24.0).abs() < 1e-15);
        let oracle = action_integral(
            &s,
            1.0,
            |tau| classical_path(&s, 0.0, 0.0, 1.0, tau).unwrap(),
            |tau| classical_velocity(&s, 0.0, 0.0, 1.0, tau).unwrap(),
        );
        assert!((oracle - value).abs() < 1e-12, "{oracle}");
    }

    #[test]
    fn action_is_minimal_along_classical_path() {
        let s = spec(1.0, 1.0, 2.0);
        let (a, b, t) = (0.2, -0.4, 1.5);
        let s_cl = classical_action(&s, a, b, t).unwrap().0;
        for &eps in &[1e-3, -1e-3, 1e-2] {
            let w = PI / t;
            let perturbed = action_integral(
                &s,
                t,
                |tau| classical_path(&s, a, b, t, tau).unwrap() + eps * (w * tau).sin(),
                |tau| classical_velocity(&s, a, b, t, tau).unwrap() + eps * w * (w * tau).cos(),
            );
            let gain = perturbed - s_cl;
            // Second variation is m·ε²π²/(4T) for this mode.
            let expected = s.mass() * eps * eps * w * w * t / 4.0;
            assert!(gain >= -1e-12, "eps {eps}: gain {gain}");
            assert!(
                (gain - expected).abs() < 1e-9,
                "eps {eps}: {gain} vs {expected}"
            );
        }
    }

    #[test]
    fn mixed_derivative_by_finite_differences() {
        let s = spec(1.7, 1.0, 0.9);
        let (a, b, t) = (0.3, -1.1, 0.8);
        let h = 1e-3;
        let act = |xa: f64, xb: f64| classical_action(&s, xa, xb, t).unwrap().0;
        let fd = (act(a + h, b + h) - act(a + h, b - h) - act(a - h, b + h) + act(a - h, b - h))
            / (4.0 * h * h);
        let exact = mixed_action_derivative(&s, t).unwrap();
        assert!((fd - exact).abs() < 1e-6, "{fd} vs {exact}");
    }

    #[test]
    fn prefactor_examples() {
        let inv_sqrt_2pi = 1.0 / (2.0 * PI).sqrt();
        let k = van_vleck_prefactor(&spec(1.0, 1.0, 0.0), 1.0).unwrap();
        assert!((k.norm() - inv_sqrt_2pi).abs() < 1e-15);
        assert!((k.arg() + PI / 4.0).abs() < 1e-15);
        assert!((inv_sqrt_2pi - 0.3989423).abs() < 1e-7);
        let k = van_vleck_prefactor(&spec(4.0, 1.0, 0.0), 1.0).unwrap();
        assert!((k.norm() - 0.7978846).abs() < 1e-7);
        let k = van_vleck_prefactor(&spec(1.0, 1.0, 0.0), 0.25).unwrap();
        assert!((k.norm() - 0.7978846).abs() < 1e-7);
        assert!((k.arg() + PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(&spec(1.0, 1.0, 0.0), 0.0, 0.0, 1.0).unwrap().value();
        let want = Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), -PI / 4.0);
        assert!((k - want).norm() < 1e-15);

        let s = spec(1.0, 1.0, 1.0);
        for &(xb, xa) in &[(0.0, 0.0), (3.0, -2.0), (-10.0, 4.5)] {
            let k = kernel(&s, xb, xa, 1.0).unwrap().value();
            assert!((k.norm() - 0.3989423).abs() < 1e-7);
        }
        let k = kernel(&s, 0.0, 0.0, 1.0).unwrap().value();
        let phase = Complex64::cis(-1.0 / 24.0 - PI / 4.0);
        assert!((k / k.norm() - phase).norm() < 1e-14);
    }

    #[test]
    fn zero_force_limit_is_continuous() {
        let free = spec(1.0, 1.0, 0.0);
        let weak = spec(1.0, 1.0, 1e-8);
        for &(xb, xa, t) in &[(0.0, 0.0, 1.0), (1.0, -1.0, 0.5), (2.0, 0.3, 2.0)] {
            let a = kernel(&free, xb, xa, t).unwrap().value();
            let b = kernel(&weak, xb, xa, t).unwrap().value();
            assert!((a - b).norm() <= 1e-7);
        }
    }

    #[test]
    fn composition_reproduces_kernel() {
        let s = PacketSpec::new(1.0, 1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        for &(xb, xa, t1, t2) in &[(0.0, 0.0, 1.0, 1.0), (1.5, -0.5, 0.3, 0.7)] {
            let composed = compose_kernels(&s, xb, xa, t1, t2).unwrap();
            let direct = kernel(&s, xb, xa, t1 + t2).unwrap().value();
            assert!((composed - direct).norm() < 1e-4, "{composed} vs {direct}");
        }
    }
}
