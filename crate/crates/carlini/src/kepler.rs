//! Kepler's equation and anomaly conversions.
//!
//! For an elliptic orbit of eccentricity `c`, the mean anomaly `u`, the
//! eccentric anomaly `θ` and the true anomaly `v` are tied together by
//!
//! ```text
//! u = θ − c sin θ                     (mean from eccentric)
//! r = a (1 − c cos θ)                 (radius vector)
//! v = 2 arctan(√((1+c)/(1−c)) tan(θ/2))
//! ```
//!
//! Going from `u` back to `θ` is the transcendental step. Two solvers are
//! provided: damped-free Newton iteration with the analytic seed
//! `θ₀ = u + 0.85·c·sign(sin u)`, and the plain fixed-point recurrence
//! `θ_{i+1} = u + c sin θ_i`, whose convergence degrades as `c → 1` (the
//! global contraction factor is `c`). The fixed-point map solves the same
//! equation as the Newton route; a historical device iterated the analogous
//! map `x_{i+1} = z − e sin x_i`, which belongs to the opposite sign
//! convention `x + e sin x = z` and is not reproduced here.
//!
//! Angles are normalized to [0, 2π) at the API boundary only; internally the
//! computation runs on the reduced angle and the removed multiple of 2π is
//! restored on return, so `θ(u + 2πk) = θ(u) + 2πk` holds exactly.

use crate::{Error, Result};

const TAU: f64 = 2.0 * std::f64::consts::PI;
const NEWTON_ITER_CAP: u32 = 64;

/// An elliptic orbit: eccentricity in [0, 1), semi-major axis > 0.
#[derive(Clone, Copy, Debug)]
pub struct Orbit {
    eccentricity: f64,
    semi_major: f64,
}

impl Orbit {
    pub fn new(eccentricity: f64, semi_major: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eccentricity) {
            return Err(Error::domain(format!(
                "eccentricity must lie in [0, 1), got {eccentricity}"
            )));
        }
        if !(semi_major > 0.0) || !semi_major.is_finite() {
            return Err(Error::domain(format!(
                "semi-major axis must be positive and finite, got {semi_major}"
            )));
        }
        Ok(Orbit {
            eccentricity,
            semi_major,
        })
    }

    /// Unit semi-major axis.
    pub fn with_eccentricity(eccentricity: f64) -> Result<Self> {
        Orbit::new(eccentricity, 1.0)
    }

    pub fn eccentricity(&self) -> f64 {
        self.eccentricity
    }

    pub fn semi_major(&self) -> f64 {
        self.semi_major
    }
}

/// Which solver produced a [`SolveReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Newton,
    FixedPoint,
}

/// Outcome of a Kepler solve: the eccentric anomaly, the iteration count and
/// the final residual `|θ − c sin θ − u|`.
#[derive(Clone, Copy, Debug)]
pub struct SolveReport {
    pub theta: f64,
    pub iterations: u32,
    pub residual: f64,
    pub method: SolveMethod,
}

impl SolveReport {
    pub fn converged(&self, tol: f64) -> bool {
        self.residual <= tol
    }
}

/// Mean, eccentric and true anomaly plus radius, bundled for one epoch.
#[derive(Clone, Copy, Debug)]
pub struct AnomalyState {
    pub mean: f64,
    pub eccentric: f64,
    pub true_anomaly: f64,
    pub radius: f64,
}

fn reduce(u: f64) -> (f64, f64) {
    let r = u.rem_euclid(TAU);
    (r, u - r)
}

/// Newton iteration on `g(θ) = θ − c sin θ − u`.
///
/// Seed `θ₀ = u + 0.85·c·sign(sin u)`; converges in a handful of steps over
/// the whole (c, u) grid up to c = 0.99.
pub fn solve_kepler_newton(orbit: &Orbit, u: f64, tol: f64) -> Result<SolveReport> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tol must be > 0, got {tol}")));
    }
    let c = orbit.eccentricity;
    let (ur, shift) = reduce(u);
    let s = ur.sin();
    let mut theta = if s == 0.0 { ur } else { ur + 0.85 * c * s.signum() };
    let mut iterations = 0;
    loop {
        let g = theta - c * theta.sin() - ur;
        if g.abs() <= tol {
            return Ok(SolveReport {
                theta: theta + shift,
                iterations,
                residual: g.abs(),
                method: SolveMethod::Newton,
            });
        }
        if iterations >= NEWTON_ITER_CAP {
            return Err(Error::Convergence {
                what: format!("kepler newton (c={c}, u={u})"),
                iterations,
            });
        }
        theta -= g / (1.0 - c * theta.cos());
        iterations += 1;
    }
}

/// Fixed-point recurrence `θ_{i+1} = u + c sin θ_i` from `θ₀ = u`.
///
/// Non-convergence is reported (last iterate, residual above `tol`), not
/// raised: inspect [`SolveReport::converged`].
pub fn solve_kepler_fixed_point(orbit: &Orbit, u: f64, tol: f64, max_iter: u32) -> Result<SolveReport> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tol must be > 0, got {tol}")));
    }
    if max_iter < 1 {
        return Err(Error::domain("max_iter must be ≥ 1".to_string()));
    }
    let c = orbit.eccentricity;
    let (ur, shift) = reduce(u);
    let mut theta = ur;
    let mut residual = (theta - c * theta.sin() - ur).abs();
    let mut iterations = 0;
    while iterations < max_iter {
        theta = ur + c * theta.sin();
        iterations += 1;
        residual = (theta - c * theta.sin() - ur).abs();
        if residual <= tol {
            break;
        }
    }
    Ok(SolveReport {
        theta: theta + shift,
        iterations,
        residual,
        method: SolveMethod::FixedPoint,
    })
}

/// True anomaly from eccentric anomaly, continuous branch.
///
/// Uses `v = θ + 2 atan2(β sin θ, 1 − β cos θ)` with `β = c/(1 + √(1−c²))`,
/// which is algebraically the arctan form but never evaluates a tangent near
/// its pole; `v − θ` is 2π-periodic and v(0) = 0, v(π) = π.
pub fn eccentric_to_true(orbit: &Orbit, theta: f64) -> f64 {
    let c = orbit.eccentricity;
    let beta = c / (1.0 + (1.0 - c * c).sqrt());
    theta + 2.0 * (beta * theta.sin()).atan2(1.0 - beta * theta.cos())
}

/// Radius vector `a (1 − c cos θ)`.
pub fn radius(orbit: &Orbit, theta: f64) -> f64 {
    orbit.semi_major * (1.0 - orbit.eccentricity * theta.cos())
}

/// Mean anomaly from eccentric anomaly (the forward, closed-form direction).
pub fn mean_from_eccentric(orbit: &Orbit, theta: f64) -> f64 {
    theta - orbit.eccentricity * theta.sin()
}

/// Solve for `θ`, then assemble mean/eccentric/true anomaly and radius.
pub fn anomaly_state(orbit: &Orbit, u: f64, tol: f64) -> Result<AnomalyState> {
    let report = solve_kepler_newton(orbit, u, tol)?;
    Ok(AnomalyState {
        mean: u,
        eccentric: report.theta,
        true_anomaly: eccentric_to_true(orbit, report.theta),
        radius: radius(orbit, report.theta),
    })
}
