//! Curvature attached to the entropic index, `k(q) = -(ln(2 - q))²`, and a
//! finite-difference Brioschi evaluator used to check it on an explicit
//! constant-curvature metric.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qalgebra::QParam;

/// `-(ln(2 - q))²`, defined for `q < 2`.
pub fn curvature_of_q(q: QParam) -> Result<f64> {
    let qv = q.value();
    if !(qv < 2.0) {
        return Err(Error::domain(format!("curvature requires q < 2, got {qv}")));
    }
    let l = (2.0 - qv).ln();
    Ok(-(l * l))
}

/// Both indices with curvature `k <= 0`: `2 - e^{+a}` (below 1) and
/// `2 - e^{-a}` (in `[1, 2)`), where `a = sqrt(-k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBranches {
    pub below_one: f64,
    pub above_one: f64,
}

pub fn q_of_curvature(k: f64) -> Result<CurvatureBranches> {
    if !(k <= 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("curvature must be finite and <= 0, got {k}")));
    }
    let a = (-k).sqrt();
    Ok(CurvatureBranches {
        below_one: 2.0 - a.exp(),
        above_one: 2.0 - (-a).exp(),
    })
}

/// First fundamental form `E du² + 2F du dv + G dv²` of a surface patch.
pub trait SurfaceMetric {
    fn components(&self, u: f64, v: f64) -> (f64, f64, f64);
}

/// The warped product `dx² + e^{2ax} dy²`, of constant curvature `-a²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelMetric {
    pub k: f64,
    pub a: f64,
}

impl ModelMetric {
    pub fn from_curvature(k: f64) -> Result<Self> {
        if !(k <= 0.0) || !k.is_finite() {
            return Err(Error::domain(format!("model metric needs finite k <= 0, got {k}")));
        }
        Ok(ModelMetric { k, a: (-k).sqrt() })
    }

    pub fn from_q(q: QParam) -> Result<Self> {
        Self::from_curvature(curvature_of_q(q)?)
    }
}

impl SurfaceMetric for ModelMetric {
    fn components(&self, u: f64, _v: f64) -> (f64, f64, f64) {
        (1.0, 0.0, (2.0 * self.a * u).exp())
    }
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Gaussian curvature at `(u, v)` by the Brioschi formula, with every
/// derivative of `E, F, G` taken by central differences of step `h`.
/// The truncation error is `O(h²)`.
pub fn gaussian_curvature_numeric<M: SurfaceMetric>(m: &M, u: f64, v: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::domain(format!("step must be positive, got {h}")));
    }
    let at = |du: f64, dv: f64| m.components(u + du, v + dv);
    let c = at(0.0, 0.0);
    let (pu, mu) = (at(h, 0.0), at(-h, 0.0));
    let (pv, mv) = (at(0.0, h), at(0.0, -h));
    let (pp, pm, mp, mm) = (at(h, h), at(h, -h), at(-h, h), at(-h, -h));

    let d_u = |s: fn(&(f64, f64, f64)) -> f64| (s(&pu) - s(&mu)) / (2.0 * h);
    let d_v = |s: fn(&(f64, f64, f64)) -> f64| (s(&pv) - s(&mv)) / (2.0 * h);
    let d_uu = |s: fn(&(f64, f64, f64)) -> f64| (s(&pu) - 2.0 * s(&c) + s(&mu)) / (h * h);
    let d_vv = |s: fn(&(f64, f64, f64)) -> f64| (s(&pv) - 2.0 * s(&c) + s(&mv)) / (h * h);
    let d_uv = |s: fn(&(f64, f64, f64)) -> f64| (s(&pp) - s(&pm) - s(&mp) + s(&mm)) / (4.0 * h * h);

    let e_: fn(&(f64, f64, f64)) -> f64 = |t| t.0;
    let f_: fn(&(f64, f64, f64)) -> f64 = |t| t.1;
    let g_: fn(&(f64, f64, f64)) -> f64 = |t| t.2;
    let (e, f, g) = c;

    let (eu, ev, evv) = (d_u(e_), d_v(e_), d_vv(e_));
    let (fu, fv, fuv) = (d_u(f_), d_v(f_), d_uv(f_));
    let (gu, gv, guu) = (d_u(g_), d_v(g_), d_uu(g_));

    let m1 = [
        [-0.5 * evv + fuv - 0.5 * guu, 0.5 * eu, fu - 0.5 * ev],
        [fv - 0.5 * gu, e, f],
        [0.5 * gv, f, g],
    ];
    let m2 = [[0.0, 0.5 * ev, 0.5 * gu], [0.5 * ev, e, f], [0.5 * gu, f, g]];
    let w = e * g - f * f;
    Ok((det3(m1) - det3(m2)) / (w * w))
}
