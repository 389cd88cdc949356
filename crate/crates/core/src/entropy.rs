//! Tsallis and Boltzmann-Gibbs-Shannon entropies of finite distributions.
//!
//! Zero-weight atoms are outside the support: they contribute nothing to
//! `Σ p_i^q` when `q >= 0`, and make `p_i^q` diverge when `q < 0`, which is
//! reported as a domain error.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qalgebra::{q_add, QParam};

/// Accepted deviation of `Σ p_i` from 1.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Nonnegative weights summing to one, optionally attached to observable values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    weights: Vec<f64>,
    support: Option<Vec<f64>>,
}

impl DiscreteDistribution {
    /// Validates and wraps `weights`. Inputs are never renormalized.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("distribution has no atoms"));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::invalid(format!("weight {i} is {w}, expected a finite value >= 0")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invalid(format!(
                "weights sum to {sum}, off from 1 by more than {NORMALIZATION_TOL:e}"
            )));
        }
        Ok(DiscreteDistribution {
            weights,
            support: None,
        })
    }

    pub fn with_support(weights: Vec<f64>, support: Vec<f64>) -> Result<Self> {
        let d = Self::new(weights)?;
        d.attach_support(support)
    }

    /// Divides nonnegative masses by their total. This is the only
    /// constructor that rescales its input.
    pub fn from_masses(masses: Vec<f64>) -> Result<Self> {
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::invalid("masses must be finite and nonnegative"));
        }
        let total: f64 = masses.iter().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("total mass must be positive"));
        }
        let mut w: Vec<f64> = masses.into_iter().map(|m| m / total).collect();
        // Push the last-ulp rounding into the largest weight.
        let err = 1.0 - w.iter().sum::<f64>();
        if let Some(imax) = argmax(&w) {
            w[imax] += err;
        }
        Self::new(w)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("uniform distribution needs n >= 1"));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn attach_support(mut self, support: Vec<f64>) -> Result<Self> {
        if support.len() != self.weights.len() {
            return Err(Error::invalid(format!(
                "support has {} points for {} weights",
                support.len(),
                self.weights.len()
            )));
        }
        if support.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("support values must be finite"));
        }
        self.support = Some(support);
        Ok(self)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn support(&self) -> Option<&[f64]> {
        self.support.as_deref()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Parses comma-separated weights, e.g. `"0.5,0.5"`.
    pub fn parse_inline(s: &str) -> Result<Self> {
        let weights = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::invalid(format!("bad weight {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights)
    }

    /// Reads one atom per CSV row as `weight[,x]`. A header row is accepted
    /// when its first field is not numeric.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut weights = Vec::new();
        let mut xs = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let first = rec.get(0).unwrap_or("");
            let w = match first.parse::<f64>() {
                Ok(w) => w,
                Err(_) if line == 0 => continue,
                Err(e) => return Err(Error::invalid(format!("row {}: bad weight {first:?}: {e}", line + 1))),
            };
            weights.push(w);
            match rec.len() {
                1 => {}
                2 => {
                    let x = rec[1]
                        .parse::<f64>()
                        .map_err(|e| Error::invalid(format!("row {}: bad x: {e}", line + 1)))?;
                    xs.push(x);
                }
                n => return Err(Error::invalid(format!("row {}: expected 1 or 2 fields, got {n}", line + 1))),
            }
        }
        let d = Self::new(weights)?;
        match xs.len() {
            0 => Ok(d),
            n if n == d.len() => d.attach_support(xs),
            _ => Err(Error::invalid("either every row or no row must carry an x value")),
        }
    }
}

fn argmax(v: &[f64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
}

/// An entropy value together with the index it was computed at (k_B = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyValue {
    pub value: f64,
    pub q: QParam,
}

fn check_support_powers(weights: &[f64], q: QParam) -> Result<()> {
    if q.value() < 0.0 && weights.contains(&0.0) {
        return Err(Error::domain(format!(
            "a zero-weight atom makes p^q diverge for q = {} < 0",
            q.value()
        )));
    }
    Ok(())
}

/// `Σ_{p_i > 0} p_i^t`.
fn power_sum(weights: &[f64], t: f64) -> f64 {
    weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|w| w.powf(t))
        .fold(Neumaier::default(), Neumaier::add)
        .value()
}

/// `(1 - Σ p_i^q) / (q - 1)`, or `-Σ p_i ln p_i` when `q` is within the
/// switch band around 1.
///
/// The deformed branch is evaluated as `Σ p_i ln_q(1/p_i)` with `expm1`,
/// which avoids the cancellation in `1 - Σ p_i^q` for `q` close to 1.
pub fn tsallis_entropy(p: &DiscreteDistribution, q: QParam) -> Result<EntropyValue> {
    check_support_powers(&p.weights, q)?;
    let value = if q.is_deformed() {
        let qm1 = q.value() - 1.0;
        -p.weights
            .iter()
            .filter(|&&w| w > 0.0)
            .map(|&w| w * (qm1 * w.ln()).exp_m1())
            .fold(Neumaier::default(), Neumaier::add)
            .value()
            / qm1
    } else {
        bgs_entropy(&p.weights)
    };
    Ok(EntropyValue { value, q })
}

fn bgs_entropy(weights: &[f64]) -> f64 {
    -weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| w * w.ln())
        .fold(Neumaier::default(), Neumaier::add)
        .value()
}

/// Compensated running sum. Joint distributions have thousands of atoms and
/// at negative `q` their terms reach magnitudes where plain summation loses
/// the last digits the composition law is checked to.
#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(self, x: f64) -> Self {
        let t = self.sum + x;
        let comp = if self.sum.abs() >= x.abs() {
            self.comp + ((self.sum - t) + x)
        } else {
            self.comp + ((x - t) + self.sum)
        };
        Neumaier { sum: t, comp }
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// `(1 - q) S_q`, which composes under `x + y + xy`.
pub fn rescaled_entropy(p: &DiscreteDistribution, q: QParam) -> Result<EntropyValue> {
    let s = tsallis_entropy(p, q)?;
    Ok(EntropyValue {
        value: q.one_minus() * s.value,
        q,
    })
}

/// Joint distribution of two independent systems, row-major over `(i, j)`.
/// Supports are dropped since the joint observable is not scalar.
pub fn product_distribution(
    p1: &DiscreteDistribution,
    p2: &DiscreteDistribution,
) -> DiscreteDistribution {
    let weights = p1
        .weights
        .iter()
        .flat_map(|&a| p2.weights.iter().map(move |&b| a * b))
        .collect();
    // Products of normalized weights stay normalized up to rounding that is
    // far inside the tolerance for any size we can hold in memory.
    DiscreteDistribution {
        weights,
        support: None,
    }
}

/// Right-hand side of the composition law: `S1 ⊕_q S2`.
///
/// Both values must have been computed at `q`.
pub fn composition_rhs(s1: &EntropyValue, s2: &EntropyValue, q: QParam) -> f64 {
    debug_assert!(s1.q == q && s2.q == q, "entropies computed at a different q");
    q_add(s1.value, s2.value, q)
}

/// Escort distribution `p_i^q / Σ_j p_j^q`, support carried through.
pub fn escort(p: &DiscreteDistribution, q: QParam) -> Result<DiscreteDistribution> {
    check_support_powers(&p.weights, q)?;
    if !q.is_deformed() && q.value() == 1.0 {
        return Ok(p.clone());
    }
    let qv = q.value();
    // Work in log space so that large |q| neither overflows nor underflows.
    let logs: Vec<f64> = p
        .weights
        .iter()
        .map(|&w| if w > 0.0 { qv * w.ln() } else { f64::NEG_INFINITY })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::domain("escort normalization vanishes"));
    }
    let masses: Vec<f64> = logs.iter().map(|&l| (l - top).exp()).collect();
    let mut out = DiscreteDistribution::from_masses(masses)?;
    out.support = p.support.clone();
    Ok(out)
}

/// Jackson q-derivative `(f(qx) - f(x)) / ((q - 1) x)`.
pub fn jackson_derivative<F>(f: F, q: QParam, x: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if x == 0.0 {
        return Err(Error::domain("Jackson derivative is undefined at x = 0"));
    }
    if !q.is_deformed() {
        return Err(Error::domain(
            "Jackson derivative at q = 1 is the ordinary derivative; use its limit instead",
        ));
    }
    let qv = q.value();
    Ok((f(qv * x) - f(x)) / ((qv - 1.0) * x))
}

/// Abe's form of the entropy: minus the Jackson derivative of
/// `t ↦ Σ p_i^t` at `t = 1`.
pub fn abe_entropy(p: &DiscreteDistribution, q: QParam) -> Result<EntropyValue> {
    check_support_powers(&p.weights, q)?;
    let d = jackson_derivative(|t| power_sum(&p.weights, t), q, 1.0)?;
    Ok(EntropyValue { value: -d, q })
}

/// A density sampled on a uniform grid, for quadrature of the continuum entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    density: Vec<f64>,
    cell_volume: f64,
}

impl GridDensity {
    /// `Σ ρ_i Δ` must be within `mass_tol` of 1.
    pub fn new(density: Vec<f64>, cell_volume: f64, mass_tol: f64) -> Result<Self> {
        if !(cell_volume > 0.0) || !cell_volume.is_finite() {
            return Err(Error::invalid("cell volume must be positive and finite"));
        }
        if density.is_empty() || density.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::invalid("density values must be finite and nonnegative"));
        }
        let mass = density.iter().sum::<f64>() * cell_volume;
        if (mass - 1.0).abs() > mass_tol {
            return Err(Error::invalid(format!("density integrates to {mass}, not 1")));
        }
        Ok(GridDensity {
            density,
            cell_volume,
        })
    }

    /// Samples `rho` at the midpoints of `n` cells covering `[lo, hi]`.
    pub fn sample<F: Fn(f64) -> f64>(rho: F, lo: f64, hi: f64, n: usize, mass_tol: f64) -> Result<Self> {
        if n == 0 || !(hi > lo) {
            return Err(Error::invalid("grid needs n >= 1 and hi > lo"));
        }
        let h = (hi - lo) / n as f64;
        let density = (0..n).map(|i| rho(lo + (i as f64 + 0.5) * h)).collect();
        Self::new(density, h, mass_tol)
    }

    /// Midpoint-rule value of `(1 - ∫ ρ^q) / (q - 1)`, or of `-∫ ρ ln ρ` at `q = 1`.
    pub fn tsallis_entropy(&self, q: QParam) -> Result<EntropyValue> {
        check_support_powers(&self.density, q)?;
        let dv = self.cell_volume;
        let value = if q.is_deformed() {
            let qv = q.value();
            (1.0 - power_sum(&self.density, qv) * dv) / (qv - 1.0)
        } else {
            bgs_entropy(&self.density) * dv
        };
        Ok(EntropyValue { value, q })
    }
}
