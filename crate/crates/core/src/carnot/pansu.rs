//! Pansu difference quotients `δ_{1/t}( f(g)⁻¹ f(g δ_t h) )`.

use crate::error::Result;
use crate::heisenberg::{group_law, HeisenbergPoint};

use super::dilate;

/// Difference quotient of a fallible map; errors from `f` propagate.
pub fn try_pansu_quotient<F, E>(
    f: F,
    g: &HeisenbergPoint,
    h: &HeisenbergPoint,
    t: f64,
) -> std::result::Result<HeisenbergPoint, E>
where
    F: Fn(&HeisenbergPoint) -> std::result::Result<HeisenbergPoint, E>,
{
    debug_assert!(t > 0.0, "scale must be positive");
    let base = f(g)?;
    let moved = f(&group_law(g, &dilate(h, t)))?;
    Ok(dilate(&group_law(&base.inverse(), &moved), 1.0 / t))
}

pub fn pansu_quotient<F>(f: F, g: &HeisenbergPoint, h: &HeisenbergPoint, t: f64) -> HeisenbergPoint
where
    F: Fn(&HeisenbergPoint) -> HeisenbergPoint,
{
    let ok: Result<HeisenbergPoint> = try_pansu_quotient(|p| Ok(f(p)), g, h, t);
    ok.expect("infallible map")
}

/// Quotients at `t0, t0/2, ..., t0/2^(steps-1)`.
pub fn pansu_schedule<F>(
    f: F,
    g: &HeisenbergPoint,
    h: &HeisenbergPoint,
    t0: f64,
    steps: usize,
) -> Vec<(f64, HeisenbergPoint)>
where
    F: Fn(&HeisenbergPoint) -> HeisenbergPoint,
{
    (0..steps)
        .map(|k| {
            let t = t0 * 0.5f64.powi(k as i32);
            (t, pansu_quotient(&f, g, h, t))
        })
        .collect()
}

/// Ratios `|Q_{k+2} - Q_{k+1}| / |Q_{k+1} - Q_k|` of successive differences
/// (coordinate norm). A difference at or below `floor` counts as converged and
/// yields a ratio of 0.
pub fn cauchy_ratios(schedule: &[(f64, HeisenbergPoint)], floor: f64) -> Vec<f64> {
    let diffs: Vec<f64> = schedule
        .windows(2)
        .map(|w| w[1].1.coord_distance(&w[0].1))
        .collect();
    diffs
        .windows(2)
        .map(|d| if d[1] <= floor { 0.0 } else { d[1] / d[0] })
        .collect()
}

/// First-order Richardson extrapolation `2 Q(t/2) - Q(t)` on consecutive pairs.
pub fn richardson(schedule: &[(f64, HeisenbergPoint)]) -> Vec<HeisenbergPoint> {
    schedule
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].1, w[1].1);
            HeisenbergPoint::new(2.0 * b.x - a.x, 2.0 * b.y - a.y, 2.0 * b.z - a.z)
        })
        .collect()
}
