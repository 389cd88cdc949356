//! Sub-Riemannian geometry of the Heisenberg group: Carnot dilations, the
//! Korányi gauge, Carnot-Carathéodory distance, word growth of the discrete
//! subgroup, and Pansu difference quotients.

mod geodesic;
mod growth;
mod pansu;
mod volume;

pub use geodesic::{cc_distance, cc_distance_from_origin, GeodesicResult, SHOOTING_BUDGET};
pub use growth::{
    ball_sizes, discrete_ball_sizes, growth_exponent, CayleyGroup, DiscreteHeisenberg, FreeGroup2,
    GroupKind, GrowthReport, SquareLattice, DEFAULT_ELEMENT_BUDGET, FIT_RESIDUAL_THRESHOLD,
};
pub use pansu::{cauchy_ratios, pansu_quotient, pansu_schedule, richardson, try_pansu_quotient};
pub use volume::{gauge_ball_volume, volume_growth_exponent};

use crate::heisenberg::HeisenbergPoint;

/// Gauge constant in `((x² + y²)² + C z²)^(1/4)`.
pub const KORANYI_CONSTANT: f64 = 16.0;

/// `δ_λ(x, y, z) = (λx, λy, λ²z)`, a group automorphism for every `λ > 0`.
pub fn dilate(g: &HeisenbergPoint, lambda: f64) -> HeisenbergPoint {
    debug_assert!(lambda > 0.0, "dilation factor must be positive");
    HeisenbergPoint::new(lambda * g.x, lambda * g.y, lambda * lambda * g.z)
}

/// Homogeneous norm `((x² + y²)² + 16 z²)^(1/4)`.
pub fn koranyi_norm(g: &HeisenbergPoint) -> f64 {
    let r2 = g.x * g.x + g.y * g.y;
    (r2 * r2 + KORANYI_CONSTANT * g.z * g.z).sqrt().sqrt()
}
