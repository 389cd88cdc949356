//! Deformed arithmetic attached to the entropic index `q`.
//!
//! The q-addition `x ⊕_q y = x + y + (1 - q) x y` is an abelian group law on
//! the half-line where `1 + (1 - q) x > 0`, and [`tau`] is an isomorphism
//! from that group onto `(ℝ, +)`. [`q_exp`] and [`q_log`] are the deformed
//! exponential and logarithm used by the entropy closed forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this distance from 1 the deformed formulas are replaced by their
/// first-order expansion in `1 - q`.
pub const EPS_SWITCH: f64 = 1e-8;

/// The entropic index together with its deformed/undeformed classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QParam {
    q: f64,
    deformed: bool,
}

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::domain(format!("entropic index must be finite, got {q}")));
        }
        Ok(QParam {
            q,
            deformed: (q - 1.0).abs() > EPS_SWITCH,
        })
    }

    /// The Boltzmann-Gibbs index `q = 1`.
    pub fn bgs() -> Self {
        QParam {
            q: 1.0,
            deformed: false,
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.q
    }

    /// `1 - q`, the coefficient that appears in every deformed formula.
    #[inline]
    pub fn one_minus(self) -> f64 {
        1.0 - self.q
    }

    /// True iff `|q - 1| > EPS_SWITCH`.
    #[inline]
    pub fn is_deformed(self) -> bool {
        self.deformed
    }
}

impl TryFrom<f64> for QParam {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        QParam::new(q)
    }
}

impl From<QParam> for f64 {
    fn from(q: QParam) -> f64 {
        q.q
    }
}

/// `x ⊕_q y = x + y + (1 - q) x y`.
///
/// At `q = 0` this is the tilde-addition `x + y + xy` satisfied by the
/// rescaled entropy; the evaluation order `(x + y) + x*y` matches the corner
/// entry of a unitriangular matrix product bit for bit. Forming `x * y` first
/// keeps the result exactly symmetric in `x` and `y`.
#[inline]
pub fn q_add(x: f64, y: f64, q: QParam) -> f64 {
    x + y + q.one_minus() * (x * y)
}

/// The inverse of `x` under [`q_add`]: `-x / (1 + (1 - q) x)`.
pub fn q_negate(x: f64, q: QParam) -> Result<f64> {
    let denom = 1.0 + q.one_minus() * x;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::SingularElement { x, q: q.value() });
    }
    Ok(-x / denom)
}

/// Isomorphism from `(dom, ⊕_q)` onto `(ℝ, +)`: `ln(1 + (1 - q) x) / (1 - q)`.
pub fn tau(x: f64, q: QParam) -> Result<f64> {
    let a = q.one_minus();
    let bracket = 1.0 + a * x;
    if !(bracket > 0.0) {
        return Err(Error::domain(format!(
            "tau undefined: 1 + (1 - q) x = {bracket} <= 0 (x = {x}, q = {})",
            q.value()
        )));
    }
    if q.is_deformed() {
        Ok((a * x).ln_1p() / a)
    } else {
        Ok(x - 0.5 * a * x * x)
    }
}

/// Deformed exponential with the cutoff convention: zero wherever
/// `1 + (1 - q) x <= 0`.
pub fn q_exp(x: f64, q: QParam) -> f64 {
    let a = q.one_minus();
    let bracket = 1.0 + a * x;
    if !(bracket > 0.0) {
        return 0.0;
    }
    if q.is_deformed() {
        ((a * x).ln_1p() / a).exp()
    } else {
        (x - 0.5 * a * x * x).exp()
    }
}

/// Deformed logarithm `(x^(1-q) - 1) / (1 - q)`, defined for `x > 0`.
pub fn q_log(x: f64, q: QParam) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("q_log requires x > 0, got {x}")));
    }
    let a = q.one_minus();
    let l = x.ln();
    if q.is_deformed() {
        Ok((a * l).exp_m1() / a)
    } else {
        Ok(l + 0.5 * a * l * l)
    }
}
