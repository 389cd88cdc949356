//! Word-metric ball growth of finitely generated groups.
//!
//! Balls are enumerated breadth-first from the identity over a symmetric
//! generating set. Each frontier is expanded as a batch (optionally in
//! parallel) and deduplicated against the visited set, so the per-radius
//! counts depend only on the set of elements reached, never on scheduling.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Default cap on the number of enumerated elements.
pub const DEFAULT_ELEMENT_BUDGET: usize = 50_000_000;

/// Largest per-point RMS residual of the log-log fit still accepted as
/// polynomial growth.
pub const FIT_RESIDUAL_THRESHOLD: f64 = 0.05;

/// Smallest radius admitted into the fit window.
const MIN_FIT_RADIUS: u32 = 5;
const MIN_FIT_POINTS: usize = 5;

/// A group presented by a finite symmetric generating set.
pub trait CayleyGroup: Sync {
    type Elem: Clone + Eq + Hash + Send + Sync;

    fn identity(&self) -> Self::Elem;

    /// Right multiplication by each generator and each inverse.
    fn neighbors(&self, g: &Self::Elem) -> Vec<Self::Elem>;
}

/// The integer Heisenberg group in matrix coordinates `(a12, a23, a13)`
/// with the polarized law `(a, b, c)(a', b', c') = (a + a', b + b', c + c' + ab')`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DiscreteHeisenberg;

impl CayleyGroup for DiscreteHeisenberg {
    type Elem = (i64, i64, i64);

    fn identity(&self) -> Self::Elem {
        (0, 0, 0)
    }

    fn neighbors(&self, &(a, b, c): &Self::Elem) -> Vec<Self::Elem> {
        vec![
            (a + 1, b, c),
            (a - 1, b, c),
            (a, b + 1, c + a),
            (a, b - 1, c - a),
        ]
    }
}

/// `ℤ²` with the standard generators, the abelian control.
#[derive(Debug, Clone, Copy, Default)]
pub struct SquareLattice;

impl CayleyGroup for SquareLattice {
    type Elem = (i64, i64);

    fn identity(&self) -> Self::Elem {
        (0, 0)
    }

    fn neighbors(&self, &(a, b): &Self::Elem) -> Vec<Self::Elem> {
        vec![(a + 1, b), (a - 1, b), (a, b + 1), (a, b - 1)]
    }
}

/// Free group on two generators, the exponential-growth control.
///
/// Reduced words are packed two bits per letter (`a, A, b, B` as 0..4)
/// together with their length, which caps them at 32 letters.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeGroup2;

impl FreeGroup2 {
    const MAX_LEN: u8 = 32;

    fn inverse_letter(l: u64) -> u64 {
        l ^ 1
    }
}

impl CayleyGroup for FreeGroup2 {
    /// `(length, packed letters)`, last letter in the low bits.
    type Elem = (u8, u64);

    fn identity(&self) -> Self::Elem {
        (0, 0)
    }

    fn neighbors(&self, &(len, word): &Self::Elem) -> Vec<Self::Elem> {
        let last = if len > 0 { Some(word & 3) } else { None };
        (0..4u64)
            .filter_map(|l| match last {
                Some(prev) if prev == Self::inverse_letter(l) => Some((len - 1, word >> 2)),
                _ if len < Self::MAX_LEN => Some((len + 1, (word << 2) | l)),
                _ => None,
            })
            .collect()
    }
}

/// The groups offered on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Heisenberg,
    Z2,
    Free2,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Heisenberg => "heisenberg",
            GroupKind::Z2 => "z2",
            GroupKind::Free2 => "free2",
        })
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heisenberg" => Ok(GroupKind::Heisenberg),
            "z2" => Ok(GroupKind::Z2),
            "free2" => Ok(GroupKind::Free2),
            other => Err(Error::invalid(format!("unknown group {other:?}"))),
        }
    }
}

/// Ball sizes of a Cayley graph with an optional log-log fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    /// `(radius, |B(radius)|)` for radius `0..=r_max`.
    pub records: Vec<(u32, u64)>,
    pub fitted_exponent: Option<f64>,
    /// RMS residual per point of the log-log fit.
    pub fit_residual: Option<f64>,
    /// Inclusive radius range used by the fit.
    pub window: Option<(u32, u32)>,
}

impl GrowthReport {
    pub fn sizes(&self) -> Vec<u64> {
        self.records.iter().map(|&(_, s)| s).collect()
    }

    /// `radius,ball_size` table with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,ball_size\n");
        for (r, s) in &self.records {
            out.push_str(&format!("{r},{s}\n"));
        }
        out
    }
}

/// Breadth-first ball sizes `|B(0)|, ..., |B(r_max)|` for any Cayley group.
pub fn ball_sizes<G: CayleyGroup>(
    group: &G,
    r_max: u32,
    budget: usize,
    exec: Execution,
) -> Result<GrowthReport> {
    let id = group.identity();
    let mut visited: HashSet<G::Elem> = HashSet::new();
    visited.insert(id.clone());
    let mut frontier = vec![id];
    let mut records = vec![(0u32, 1u64)];
    for r in 1..=r_max {
        let seen = &visited;
        let candidates = exec.flat_map(&frontier, |g| {
            group
                .neighbors(g)
                .into_iter()
                .filter(|h| !seen.contains(h))
                .collect::<Vec<_>>()
        });
        let mut next = Vec::with_capacity(candidates.len());
        for h in candidates {
            if visited.insert(h.clone()) {
                if visited.len() > budget {
                    return Err(Error::ResourceLimit { budget });
                }
                next.push(h);
            }
        }
        records.push((r, visited.len() as u64));
        frontier = next;
    }
    Ok(GrowthReport {
        records,
        fitted_exponent: None,
        fit_residual: None,
        window: None,
    })
}

/// Ball sizes of one of the built-in groups.
pub fn discrete_ball_sizes(
    kind: GroupKind,
    r_max: u32,
    budget: usize,
    exec: Execution,
) -> Result<GrowthReport> {
    match kind {
        GroupKind::Heisenberg => ball_sizes(&DiscreteHeisenberg, r_max, budget, exec),
        GroupKind::Z2 => ball_sizes(&SquareLattice, r_max, budget, exec),
        GroupKind::Free2 => {
            if r_max > FreeGroup2::MAX_LEN as u32 {
                return Err(Error::ResourceLimit { budget });
            }
            ball_sizes(&FreeGroup2, r_max, budget, exec)
        }
    }
}

/// Least-squares slope of `ln |B(r)|` against `ln r` over the tail window
/// `max(5, r_max/2) ..= r_max`.
///
/// Fails with [`Error::FitRejected`] when the RMS residual exceeds
/// [`FIT_RESIDUAL_THRESHOLD`], i.e. when the log-log curve is visibly not a
/// straight line.
pub fn growth_exponent(report: &GrowthReport) -> Result<GrowthReport> {
    let r_max = report.records.iter().map(|&(r, _)| r).max().unwrap_or(0);
    let lo = MIN_FIT_RADIUS.max(r_max / 2);
    let pts: Vec<(f64, f64)> = report
        .records
        .iter()
        .filter(|&&(r, _)| r >= lo)
        .map(|&(r, s)| ((r as f64).ln(), (s as f64).ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::invalid(format!(
            "need at least {MIN_FIT_POINTS} records with radius >= {MIN_FIT_RADIUS}, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let rms = (ssr / n).sqrt();
    if rms > FIT_RESIDUAL_THRESHOLD {
        return Err(Error::FitRejected {
            exponent: slope,
            residual: rms,
            threshold: FIT_RESIDUAL_THRESHOLD,
        });
    }
    Ok(GrowthReport {
        records: report.records.clone(),
        fitted_exponent: Some(slope),
        fit_residual: Some(rms),
        window: Some((lo, r_max)),
    })
}
