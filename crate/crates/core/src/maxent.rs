//! Maximum Tsallis entropy on a finite support under escort-moment
//! constraints.
//!
//! Each constraint is written as `c_k(p) = Σ_i p_i^q f_k(x_i) = 0` with a
//! centered observable `f_k` (`x - m` for a mean, `(x - m)² - v` for a
//! variance about the mean `m`), which is the escort moment condition
//! multiplied by `Σ p^q`. Stationarity of the Lagrangian forces
//!
//! ```text
//! p_i ∝ q_exp(-Σ_k λ_k f_k(x_i))
//! ```
//!
//! so the solver runs in two phases: projected gradient ascent of an
//! augmented Lagrangian on the probability simplex, which supplies starting
//! multipliers, then damped Newton on the multipliers until the escort
//! moments match their targets. Atoms where the q-exponential bracket is
//! nonpositive get weight exactly zero.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::entropy::{escort, tsallis_entropy, DiscreteDistribution};
use crate::error::{Error, Result};
use crate::qalgebra::QParam;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintKind {
    /// `Σ p_i x_i`; only meaningful as a `q = 1` control.
    OrdinaryMean,
    EscortMean,
    /// Escort second moment about the escort mean; needs an escort-mean
    /// constraint alongside it.
    EscortVariance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxentProblem {
    pub support: Vec<f64>,
    pub q: QParam,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
}

impl MaxentProblem {
    pub fn new(support: Vec<f64>, q: QParam, constraints: Vec<Constraint>) -> Result<Self> {
        let p = MaxentProblem {
            support,
            q,
            constraints,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_json_reader<R: Read>(r: R) -> Result<Self> {
        let p: MaxentProblem = serde_json::from_reader(r)?;
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.support.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("support values must be finite"));
        }
        let (lo, hi) = self.range();
        if self.support.len() < 2 || !(hi > lo) {
            return Err(Error::invalid("support needs at least two distinct points"));
        }
        if !(self.q.value() > 0.0) {
            return Err(Error::domain(format!(
                "maxent is defined here for q > 0, got {}",
                self.q.value()
            )));
        }
        let count = |k| self.constraints.iter().filter(|c| c.kind == k).count();
        let means = count(ConstraintKind::OrdinaryMean) + count(ConstraintKind::EscortMean);
        if means > 1 || count(ConstraintKind::EscortVariance) > 1 {
            return Err(Error::invalid("at most one mean and one variance constraint"));
        }
        if count(ConstraintKind::OrdinaryMean) > 0 && self.q.is_deformed() {
            return Err(Error::domain("ordinary-mean constraints are only supported at q = 1"));
        }
        if count(ConstraintKind::EscortVariance) > 0 && means == 0 {
            return Err(Error::invalid("an escort-variance constraint needs an escort-mean constraint"));
        }
        if self.constraints.iter().any(|c| !c.target.is_finite()) {
            return Err(Error::invalid("constraint targets must be finite"));
        }
        Ok(())
    }

    fn range(&self) -> (f64, f64) {
        let lo = self.support.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.support.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    fn mean_target(&self) -> Option<f64> {
        self.constraints
            .iter()
            .find(|c| c.kind != ConstraintKind::EscortVariance)
            .map(|c| c.target)
    }

    /// Direct range check: the mean must lie strictly inside the support
    /// hull, and the variance strictly between the smallest and largest
    /// variance attainable with that mean.
    pub fn check_feasible(&self) -> Result<()> {
        let (lo, hi) = self.range();
        let Some(m) = self.mean_target() else {
            return Ok(());
        };
        if !(m > lo && m < hi) {
            return Err(Error::Infeasible(format!("mean {m} is outside ({lo}, {hi})")));
        }
        for c in &self.constraints {
            if c.kind != ConstraintKind::EscortVariance {
                continue;
            }
            let v = c.target;
            let max_var = (m - lo) * (hi - m);
            let below = self.support.iter().copied().filter(|&x| x <= m).fold(f64::NEG_INFINITY, f64::max);
            let above = self.support.iter().copied().filter(|&x| x >= m).fold(f64::INFINITY, f64::min);
            let min_var = (m - below) * (above - m);
            if !(v > min_var && v < max_var) {
                return Err(Error::Infeasible(format!(
                    "variance {v} is outside the attainable range ({min_var}, {max_var}) for mean {m}"
                )));
            }
        }
        Ok(())
    }

    /// Centered observables `f_k(x_i)`, one row per constraint.
    fn observables(&self) -> Vec<Vec<f64>> {
        let m = self.mean_target().unwrap_or(0.0);
        self.constraints
            .iter()
            .map(|c| match c.kind {
                ConstraintKind::OrdinaryMean | ConstraintKind::EscortMean => {
                    self.support.iter().map(|&x| x - c.target).collect()
                }
                ConstraintKind::EscortVariance => self
                    .support
                    .iter()
                    .map(|&x| (x - m) * (x - m) - c.target)
                    .collect(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxentSolution {
    pub distribution: DiscreteDistribution,
    /// Multipliers of the constraints `Σ p^q f_k = 0`, in problem order.
    pub multipliers: Vec<f64>,
    /// Max of the tangent-space stationarity residual and the moment errors.
    pub kkt_residual: f64,
    pub iterations: usize,
    pub entropy: f64,
}

impl MaxentSolution {
    /// `x,weight` table with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,weight\n");
        let xs = self.distribution.support().unwrap_or(&[]);
        for (x, w) in xs.iter().zip(self.distribution.weights()) {
            out.push_str(&format!("{x:?},{w:?}\n"));
        }
        out
    }
}

/// `Σ_i P_i x_i^power` with `P` the escort distribution of `p`.
pub fn escort_moment(p: &DiscreteDistribution, q: QParam, power: u32) -> Result<f64> {
    if !(power == 1 || power == 2) {
        return Err(Error::invalid(format!("escort moment power must be 1 or 2, got {power}")));
    }
    let xs = p
        .support()
        .ok_or_else(|| Error::invalid("escort moments need a support"))?;
    let e = escort(p, q)?;
    Ok(e.weights()
        .iter()
        .zip(xs)
        .map(|(w, x)| w * x.powi(power as i32))
        .sum())
}

/// Weights `p(λ)` of the stationary family, or `None` when `λ` leaves the
/// admissible region (`q > 1` with a nonpositive bracket).
struct Family<'a> {
    q: QParam,
    obs: &'a [Vec<f64>],
    n: usize,
}

struct FamilyPoint {
    p: Vec<f64>,
    /// Normalized escort weights.
    escort: Vec<f64>,
    /// `q / u_i` (1 at `q = 1`); zero on cut-off atoms.
    c: Vec<f64>,
    /// `u_i = 1 - (1 - q) Σ λ f`.
    u: Vec<f64>,
}

impl<'a> Family<'a> {
    fn eval(&self, lambda: &[f64]) -> Option<FamilyPoint> {
        let q = self.q;
        let a = q.one_minus();
        let mut logp = vec![f64::NEG_INFINITY; self.n];
        let mut u = vec![1.0; self.n];
        for i in 0..self.n {
            let s: f64 = lambda.iter().zip(self.obs).map(|(l, f)| l * f[i]).sum();
            if q.is_deformed() {
                let ui = 1.0 - a * s;
                u[i] = ui;
                if ui > 0.0 {
                    logp[i] = ui.ln() / a;
                } else if q.value() > 1.0 {
                    return None;
                }
            } else {
                logp[i] = -s;
            }
        }
        let top = logp.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return None;
        }
        let mut p: Vec<f64> = logp.iter().map(|&l| (l - top).exp()).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= total);
        let qv = q.value();
        let mut escort: Vec<f64> = logp.iter().map(|&l| (qv * (l - top)).exp()).collect();
        let et: f64 = escort.iter().sum();
        escort.iter_mut().for_each(|v| *v /= et);
        let c = (0..self.n)
            .map(|i| {
                if p[i] == 0.0 {
                    0.0
                } else if q.is_deformed() {
                    qv / u[i]
                } else {
                    1.0
                }
            })
            .collect();
        Some(FamilyPoint { p, escort, c, u })
    }

    /// Normalized escort moments of the centered observables.
    fn residual(&self, pt: &FamilyPoint) -> Vec<f64> {
        self.obs
            .iter()
            .map(|f| pt.escort.iter().zip(f).map(|(w, v)| w * v).sum())
            .collect()
    }

    fn jacobian(&self, pt: &FamilyPoint) -> Vec<Vec<f64>> {
        let k = self.obs.len();
        let mut jac = vec![vec![0.0; k]; k];
        for (j, fj) in self.obs.iter().enumerate() {
            let mean_cf: f64 = (0..self.n).map(|i| pt.escort[i] * pt.c[i] * fj[i]).sum();
            for (row, fk) in jac.iter_mut().zip(self.obs) {
                row[j] = (0..self.n)
                    .map(|i| fk[i] * pt.escort[i] * (mean_cf - pt.c[i] * fj[i]))
                    .sum();
            }
        }
        jac
    }
}

/// Gaussian elimination with partial pivoting for the small Newton systems.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (top, rest) = a.split_at_mut(row);
            for (dst, src) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *dst -= f * src;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Euclidean projection onto the probability simplex (sort-based).
pub(crate) fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &x) in s.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Smallest weight used when evaluating gradients that blow up at 0.
const GRADIENT_FLOOR: f64 = 1e-12;

/// Gradient of `S_q`.
fn entropy_gradient(p: &[f64], q: QParam) -> Vec<f64> {
    p.iter()
        .map(|&pi| {
            let pi = pi.max(GRADIENT_FLOOR);
            if q.is_deformed() {
                let qv = q.value();
                -qv * pi.powf(qv - 1.0) / (qv - 1.0)
            } else {
                -pi.ln() - 1.0
            }
        })
        .collect()
}

/// Phase one: projected gradient ascent of the augmented Lagrangian of the
/// normalized escort constraints. Returns multipliers for the unnormalized
/// constraints together with the iterations spent.
fn warm_start(obs: &[Vec<f64>], q: QParam, budget: usize) -> (Vec<f64>, usize) {
    let k = obs.len();
    let n = obs.first().map_or(0, |f| f.len());
    if k == 0 || budget == 0 {
        return (vec![0.0; k], 0);
    }
    let qv = q.value();
    let penalty = 50.0;
    let mut mult = vec![0.0; k];
    let mut p = vec![1.0 / n as f64; n];
    let mut step = 1.0 / n as f64;

    let moments = |p: &[f64]| -> (Vec<f64>, f64) {
        let w: Vec<f64> = p.iter().map(|&x| if x > 0.0 { x.powf(qv) } else { 0.0 }).collect();
        let z: f64 = w.iter().sum();
        (
            obs.iter()
                .map(|f| w.iter().zip(f).map(|(a, b)| a * b).sum::<f64>() / z)
                .collect(),
            z,
        )
    };
    let objective = |p: &[f64], mult: &[f64]| -> f64 {
        let s = if q.is_deformed() {
            (1.0 - p.iter().filter(|&&x| x > 0.0).map(|x| x.powf(qv)).sum::<f64>()) / (qv - 1.0)
        } else {
            -p.iter().filter(|&&x| x > 0.0).map(|x| x * x.ln()).sum::<f64>()
        };
        let (c, _) = moments(p);
        s - c.iter().zip(mult).map(|(ci, mi)| mi * ci + 0.5 * penalty * ci * ci).sum::<f64>()
    };

    let mut iters = 0;
    let mut current = objective(&p, &mult);
    while iters < budget {
        iters += 1;
        let (c, z) = moments(&p);
        let gs = entropy_gradient(&p, q);
        // d/dp_i of the normalized moment: q p^{q-1} (f_i - c) / Z.
        let grad: Vec<f64> = (0..n)
            .map(|i| {
                let dp = qv * p[i].max(GRADIENT_FLOOR).powf(qv - 1.0) / z;
                let pull: f64 = (0..k).map(|r| (mult[r] + penalty * c[r]) * dp * (obs[r][i] - c[r])).sum();
                gs[i] - pull
            })
            .collect();
        let trial: Vec<f64> = p.iter().zip(&grad).map(|(a, g)| a + step * g).collect();
        let cand = project_to_simplex(&trial);
        let val = objective(&cand, &mult);
        if val > current {
            let moved: f64 = cand.iter().zip(&p).map(|(a, b)| (a - b).abs()).sum();
            p = cand;
            current = val;
            step *= 1.5;
            if moved < 1e-12 {
                let (c, _) = moments(&p);
                for r in 0..k {
                    mult[r] += penalty * c[r];
                }
                current = objective(&p, &mult);
                if norm_inf(&c) < 1e-6 {
                    break;
                }
            }
        } else {
            step *= 0.5;
            if step < 1e-16 {
                let (c, _) = moments(&p);
                for r in 0..k {
                    mult[r] += penalty * c[r];
                }
                current = objective(&p, &mult);
                step = 1.0 / n as f64;
            }
        }
    }
    // Multipliers of Σ p^q f = 0 are those of the normalized form divided by Σ p^q.
    let (c, z) = moments(&p);
    let lambda = (0..k).map(|r| (mult[r] + penalty * c[r]) / z).collect();
    (lambda, iters)
}

/// Newton polish on the multipliers, from `start`.
fn newton(family: &Family, start: Vec<f64>, tol: f64, budget: usize) -> Option<(Vec<f64>, FamilyPoint, usize)> {
    let mut lambda = start;
    let mut pt = family.eval(&lambda)?;
    let mut res = family.residual(&pt);
    let mut it = 0;
    while it < budget {
        if norm_inf(&res) <= 1e-3 * tol {
            break;
        }
        it += 1;
        let jac = family.jacobian(&pt);
        let step = solve_dense(jac, res.iter().map(|r| -r).collect())?;
        let current = norm_inf(&res);
        let mut damping = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = lambda.iter().zip(&step).map(|(l, s)| l + damping * s).collect();
            if let Some(cp) = family.eval(&cand) {
                let cr = family.residual(&cp);
                if norm_inf(&cr) < current {
                    lambda = cand;
                    pt = cp;
                    res = cr;
                    accepted = true;
                    break;
                }
            }
            damping *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Some((lambda, pt, it))
}

/// Stationarity on the tangent space of the simplex plus moment errors.
fn kkt_residual(family: &Family, lambda: &[f64], pt: &FamilyPoint) -> f64 {
    let q = family.q;
    let qv = q.value();
    let n = family.n;
    let grad: Vec<Option<f64>> = (0..n)
        .map(|i| {
            let pi = pt.p[i];
            if pi == 0.0 {
                return None;
            }
            let s: f64 = lambda.iter().zip(family.obs).map(|(l, f)| l * f[i]).sum();
            Some(if q.is_deformed() {
                // ∂S/∂p - Σ λ ∂c/∂p = q p^{q-1} (1/(1-q) - Σ λ f)
                qv * pi.powf(qv - 1.0) * (1.0 / (1.0 - qv) - s)
            } else {
                -pi.ln() - 1.0 - s
            })
        })
        .collect();
    let active: Vec<f64> = grad.iter().flatten().copied().collect();
    let alpha = active.iter().sum::<f64>() / active.len() as f64;
    let stationarity = active.iter().map(|g| (g - alpha).powi(2)).sum::<f64>().sqrt();
    // A cut-off atom is only admissible where the bracket is nonpositive.
    let cutoff = (0..n)
        .filter(|&i| pt.p[i] == 0.0)
        .map(|i| pt.u[i].max(0.0))
        .fold(0.0, f64::max);
    let moments = norm_inf(&family.residual(pt));
    stationarity.max(cutoff).max(moments)
}

/// Maximizes `S_q` over distributions on the problem's support subject to
/// its moment constraints.
pub fn solve_maxent(prob: &MaxentProblem, tol: f64, max_iter: usize) -> Result<MaxentSolution> {
    prob.validate()?;
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    prob.check_feasible()?;
    let obs = prob.observables();
    let family = Family {
        q: prob.q,
        obs: &obs,
        n: prob.support.len(),
    };

    let (warm, warm_iters) = warm_start(&obs, prob.q, max_iter / 2);
    let newton_budget = max_iter.saturating_sub(warm_iters).max(1);

    let mut best: Option<(Vec<f64>, FamilyPoint, usize, f64)> = None;
    for start in [warm, vec![0.0; obs.len()]] {
        if let Some((lambda, pt, it)) = newton(&family, start, tol, newton_budget) {
            let r = kkt_residual(&family, &lambda, &pt);
            let better = best.as_ref().is_none_or(|b| r < b.3);
            if better {
                best = Some((lambda, pt, it, r));
            }
            if r <= tol {
                break;
            }
        }
    }
    let Some((lambda, pt, it, resid)) = best else {
        return Err(Error::ConvergenceFailure {
            iterations: max_iter,
            residual: f64::INFINITY,
            tol,
        });
    };
    let iterations = warm_iters + it;
    if !(resid <= tol) {
        return Err(Error::ConvergenceFailure {
            iterations,
            residual: resid,
            tol,
        });
    }
    let distribution = DiscreteDistribution::from_masses(pt.p)?.attach_support(prob.support.clone())?;
    let entropy = tsallis_entropy(&distribution, prob.q)?.value;
    Ok(MaxentSolution {
        distribution,
        multipliers: lambda,
        kkt_residual: resid,
        iterations,
        entropy,
    })
}
