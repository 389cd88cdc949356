//! Monte-Carlo volume of Korányi balls.
//!
//! Haar measure on the group is Lebesgue measure in exponential coordinates,
//! and the ball `{‖g‖ <= r}` lies in the box `|x|, |y| <= r`, `|z| <= r²/4`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::heisenberg::HeisenbergPoint;

use super::koranyi_norm;

const CHUNK: usize = 1 << 14;

/// Hit-or-miss estimate of the volume of the gauge ball of radius `r`.
///
/// Samples are drawn in fixed-size chunks, each with its own ChaCha stream
/// derived from `seed`, so the estimate is identical under every execution
/// strategy.
pub fn gauge_ball_volume(r: f64, samples: usize, seed: u64, exec: Execution) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let chunks = samples.div_ceil(CHUNK);
    let zmax = 0.25 * r * r;
    let hits: u64 = exec
        .map_range(chunks, |c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut hit = 0u64;
            for _ in 0..n {
                let p = HeisenbergPoint::new(
                    rng.random_range(-r..=r),
                    rng.random_range(-r..=r),
                    rng.random_range(-zmax..=zmax),
                );
                if koranyi_norm(&p) <= r {
                    hit += 1;
                }
            }
            hit
        })
        .into_iter()
        .sum();
    let box_volume = 2.0 * r * 2.0 * r * 2.0 * zmax;
    Ok(box_volume * hits as f64 / samples as f64)
}

/// Log-log slope of Monte-Carlo ball volume against radius; the
/// homogeneous dimension 4 is expected. Each radius uses an independent
/// stream of samples.
pub fn volume_growth_exponent(
    radii: &[f64],
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<f64> {
    if radii.len() < 2 {
        return Err(Error::invalid("need at least two radii"));
    }
    let pts = radii
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let v = gauge_ball_volume(r, samples, seed.wrapping_add(i as u64), exec)?;
            Ok((r.ln(), v.ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}
