//! Carnot-Carathéodory distance by geodesic shooting.
//!
//! Geodesics leaving the origin project to circular arcs in the `(x, y)`
//! plane (straight segments in the degenerate case), and the `z` coordinate
//! picks up the signed area between the arc and its chord. Rotational
//! symmetry fixes the initial direction once the total turning angle `θ` is
//! known, so shooting reduces to one scalar equation
//!
//! ```text
//! μ(θ) = (θ - sin θ) / (8 sin²(θ/2)) = |z| / (x² + y²),   θ ∈ [0, 2π)
//! ```
//!
//! with `μ` increasing from 0 to ∞. The length is then `r (θ/2) / sin(θ/2)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{group_law, HeisenbergPoint};

/// Iteration budget of the shooting solver.
pub const SHOOTING_BUDGET: usize = 200;

const SAMPLES: usize = 33;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicResult {
    pub length: f64,
    /// Points along the minimizing path, from the start to the end point.
    pub samples: Vec<HeisenbergPoint>,
    /// Coordinate distance between the last sample and the requested end point.
    pub solver_residual: f64,
    /// Total turning angle of the projected arc.
    pub turning_angle: f64,
    pub iterations: usize,
}

/// `θ - sin θ`, with a series near zero.
fn theta_minus_sin(t: f64) -> f64 {
    if t.abs() < 1e-2 {
        let t2 = t * t;
        t * t2 * (1.0 / 6.0 - t2 * (1.0 / 120.0 - t2 * (1.0 / 5040.0 - t2 / 362_880.0)))
    } else {
        t - t.sin()
    }
}

/// `(ψ - sin ψ) / (2ψ²)`: enclosed area per unit squared length.
fn area_factor(psi: f64) -> f64 {
    if psi == 0.0 {
        0.0
    } else {
        theta_minus_sin(psi) / (2.0 * psi * psi)
    }
}

fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// `ln μ(θ)` and its derivative.
fn log_mu(theta: f64) -> (f64, f64) {
    let half = 0.5 * theta;
    let s = half.sin();
    let n = theta_minus_sin(theta);
    let d = 8.0 * s * s;
    let dn = 2.0 * s * s;
    let value = n.ln() - d.ln();
    let slope = dn / n - half.cos() / s;
    (value, slope)
}

/// Solves `ln μ(θ) = ln m` on `(0, 2π)`.
fn solve_turning_angle(m: f64) -> Result<(f64, usize)> {
    let target = m.ln();
    let (mut lo, mut hi) = (0.0_f64, 2.0 * PI);
    let mut theta = if m < 0.05 {
        12.0 * m
    } else {
        // μ ~ π / (2π - θ)² near the top of the interval.
        (2.0 * PI - (PI / m).sqrt()).clamp(0.5, 2.0 * PI - 1e-12)
    };
    if !(theta > lo && theta < hi) {
        theta = PI;
    }
    for it in 1..=SHOOTING_BUDGET {
        let (f, df) = log_mu(theta);
        let resid = f - target;
        if resid.abs() <= 4.0 * f64::EPSILON * target.abs().max(1.0) {
            return Ok((theta, it));
        }
        if resid > 0.0 {
            hi = theta;
        } else {
            lo = theta;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok((0.5 * (lo + hi), it));
        }
        // Damped Newton, falling back to bisection when the step leaves the bracket.
        let mut next = f64::NAN;
        if df.is_finite() && df > 0.0 {
            let step = resid / df;
            let mut damping = 1.0;
            for _ in 0..4 {
                let cand = theta - damping * step;
                if cand > lo && cand < hi {
                    next = cand;
                    break;
                }
                damping *= 0.5;
            }
        }
        if !next.is_finite() || next == theta {
            next = 0.5 * (lo + hi);
        }
        theta = next;
    }
    let (f, _) = log_mu(theta);
    Err(Error::ConvergenceFailure {
        iterations: SHOOTING_BUDGET,
        residual: (f - target).abs(),
        tol: 4.0 * f64::EPSILON,
    })
}

/// Point at arclength `t` on the horizontal lift of the arc with initial
/// direction `alpha` and signed curvature `kappa`.
fn arc_point(alpha: f64, kappa: f64, t: f64) -> HeisenbergPoint {
    let psi = kappa * t;
    let chord = t * sinc(0.5 * psi);
    let dir = alpha + 0.5 * psi;
    HeisenbergPoint::new(chord * dir.cos(), chord * dir.sin(), t * t * area_factor(psi))
}

/// CC distance from the origin to `target`.
pub fn cc_distance_from_origin(target: &HeisenbergPoint, tol: f64) -> Result<GeodesicResult> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let [x, y, z] = target.as_array();
    if !(x.is_finite() && y.is_finite() && z.is_finite()) {
        return Err(Error::domain("target coordinates must be finite"));
    }
    let r = x.hypot(y);
    let sign = if z < 0.0 { -1.0 } else { 1.0 };
    let (theta, iterations) = if z == 0.0 {
        (0.0, 0)
    } else if r == 0.0 {
        (2.0 * PI, 0)
    } else {
        solve_turning_angle(z.abs() / (r * r))?
    };
    let length = if r == 0.0 {
        2.0 * (PI * z.abs()).sqrt()
    } else {
        r / sinc(0.5 * theta)
    };
    let kappa = if length > 0.0 { sign * theta / length } else { 0.0 };
    let alpha = if r == 0.0 { 0.0 } else { y.atan2(x) - sign * 0.5 * theta };
    let samples: Vec<HeisenbergPoint> = (0..SAMPLES)
        .map(|i| {
            let t = length * i as f64 / (SAMPLES - 1) as f64;
            arc_point(alpha, kappa, t)
        })
        .collect();
    let solver_residual = samples.last().map_or(0.0, |e| e.coord_distance(target));
    if solver_residual > tol {
        return Err(Error::ConvergenceFailure {
            iterations,
            residual: solver_residual,
            tol,
        });
    }
    Ok(GeodesicResult {
        length,
        samples,
        solver_residual,
        turning_angle: theta,
        iterations,
    })
}

/// CC distance between `g` and `h`, computed at the origin after left
/// translation by `g⁻¹`. The returned samples run from `g` to `h`.
pub fn cc_distance(g: &HeisenbergPoint, h: &HeisenbergPoint, tol: f64) -> Result<GeodesicResult> {
    let rel = group_law(&g.inverse(), h);
    let mut res = cc_distance_from_origin(&rel, tol)?;
    for p in res.samples.iter_mut() {
        *p = group_law(g, p);
    }
    res.solver_residual = res.samples.last().map_or(0.0, |e| e.coord_distance(h));
    if res.solver_residual > tol {
        return Err(Error::ConvergenceFailure {
            iterations: res.iterations,
            residual: res.solver_residual,
            tol,
        });
    }
    Ok(res)
}
