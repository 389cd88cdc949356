//! The group of 3×3 upper unitriangular matrices, its Lie algebra, and the
//! embedding `x ↦ S(x)` whose products carry both the ordinary sum (on the
//! secondary diagonal) and the tilde-addition `x + y + xy` (in the corner).
//!
//! The algebra is spanned by `X = E12`, `Y = E23`, `Z = E13` with
//! `[X, Y] = Z` the only nonzero bracket, so every series involved
//! terminates after the quadratic term.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A unit upper-triangular 3×3 matrix, stored by its strictly-upper entries.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct UpperUnitriangular {
    pub a12: f64,
    pub a13: f64,
    pub a23: f64,
}

impl UpperUnitriangular {
    pub const IDENTITY: Self = UpperUnitriangular {
        a12: 0.0,
        a13: 0.0,
        a23: 0.0,
    };

    pub fn new(a12: f64, a13: f64, a23: f64) -> Self {
        UpperUnitriangular { a12, a13, a23 }
    }

    /// Row-major dense form, for display.
    pub fn to_rows(&self) -> [[f64; 3]; 3] {
        [
            [1.0, self.a12, self.a13],
            [0.0, 1.0, self.a23],
            [0.0, 0.0, 1.0],
        ]
    }

    pub fn inverse(&self) -> Self {
        UpperUnitriangular {
            a12: -self.a12,
            a13: self.a12 * self.a23 - self.a13,
            a23: -self.a23,
        }
    }
}

impl Mul for UpperUnitriangular {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        multiply(&self, &rhs)
    }
}

/// `S(x)`: every strictly-upper entry equal to `x`.
pub fn embed(x: f64) -> UpperUnitriangular {
    UpperUnitriangular {
        a12: x,
        a13: x,
        a23: x,
    }
}

/// Matrix product in closed form.
pub fn multiply(a: &UpperUnitriangular, b: &UpperUnitriangular) -> UpperUnitriangular {
    UpperUnitriangular {
        a12: a.a12 + b.a12,
        a13: a.a13 + b.a13 + a.a12 * b.a23,
        a23: a.a23 + b.a23,
    }
}

/// `|xy|`: how far the secondary diagonal of `S(x) S(y)` is from that of
/// `S(x ⊕̃ y)`. Zero exactly when one factor is the identity, so the image of
/// `S` is not closed under multiplication.
pub fn embedding_defect(x: f64, y: f64) -> f64 {
    let prod = multiply(&embed(x), &embed(y));
    let target = embed(prod.a13);
    (prod.a12 - target.a12).abs()
}

/// Coefficients on the `X, Y, Z` basis of the Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LieVector {
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl LieVector {
    pub const ZERO: Self = LieVector {
        cx: 0.0,
        cy: 0.0,
        cz: 0.0,
    };
    pub const X: Self = LieVector {
        cx: 1.0,
        cy: 0.0,
        cz: 0.0,
    };
    pub const Y: Self = LieVector {
        cx: 0.0,
        cy: 1.0,
        cz: 0.0,
    };
    pub const Z: Self = LieVector {
        cx: 0.0,
        cy: 0.0,
        cz: 1.0,
    };

    pub fn new(cx: f64, cy: f64, cz: f64) -> Self {
        LieVector { cx, cy, cz }
    }

    pub fn scale(self, s: f64) -> Self {
        LieVector::new(s * self.cx, s * self.cy, s * self.cz)
    }
}

impl Add for LieVector {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        LieVector::new(self.cx + o.cx, self.cy + o.cy, self.cz + o.cz)
    }
}

impl Sub for LieVector {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        LieVector::new(self.cx - o.cx, self.cy - o.cy, self.cz - o.cz)
    }
}

impl Neg for LieVector {
    type Output = Self;

    fn neg(self) -> Self {
        LieVector::new(-self.cx, -self.cy, -self.cz)
    }
}

pub fn bracket(u: &LieVector, v: &LieVector) -> LieVector {
    LieVector::new(0.0, 0.0, u.cx * v.cy - v.cx * u.cy)
}

/// `I + M + M²/2`; exact because `M³ = 0`.
pub fn exp_map(u: &LieVector) -> UpperUnitriangular {
    UpperUnitriangular {
        a12: u.cx,
        a13: u.cz + 0.5 * u.cx * u.cy,
        a23: u.cy,
    }
}

/// `N - N²/2` with `N = A - I`; exact because `N³ = 0`.
pub fn log_map(a: &UpperUnitriangular) -> LieVector {
    LieVector {
        cx: a.a12,
        cy: a.a23,
        cz: a.a13 - 0.5 * a.a12 * a.a23,
    }
}

/// A group element in exponential coordinates: `exp(xX + yY + zZ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HeisenbergPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl HeisenbergPoint {
    pub const ORIGIN: Self = HeisenbergPoint {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        HeisenbergPoint { x, y, z }
    }

    pub fn inverse(self) -> Self {
        HeisenbergPoint::new(-self.x, -self.y, -self.z)
    }

    pub fn to_lie(self) -> LieVector {
        LieVector::new(self.x, self.y, self.z)
    }

    pub fn from_lie(v: LieVector) -> Self {
        HeisenbergPoint::new(v.cx, v.cy, v.cz)
    }

    pub fn to_matrix(self) -> UpperUnitriangular {
        exp_map(&self.to_lie())
    }

    /// Euclidean distance in coordinates.
    pub fn coord_distance(&self, other: &Self) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2)).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Mul for HeisenbergPoint {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        group_law(&self, &rhs)
    }
}

/// Product in exponential coordinates (BCH truncated at the first bracket).
pub fn group_law(g: &HeisenbergPoint, h: &HeisenbergPoint) -> HeisenbergPoint {
    HeisenbergPoint {
        x: g.x + h.x,
        y: g.y + h.y,
        z: g.z + h.z + 0.5 * (g.x * h.y - g.y * h.x),
    }
}

/// `g h g⁻¹ h⁻¹`.
pub fn group_commutator(g: &HeisenbergPoint, h: &HeisenbergPoint) -> HeisenbergPoint {
    let gh = group_law(g, h);
    let ghg = group_law(&gh, &g.inverse());
    group_law(&ghg, &h.inverse())
}

/// Name of the coordinate convention used by [`group_law`].
pub const GROUP_LAW_CONVENTION: &str = "exponential coordinates, z' = z1 + z2 + (x1*y2 - y1*x2)/2";
