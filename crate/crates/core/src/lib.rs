//! Nonextensive (Tsallis) entropy, the q-deformed arithmetic behind its
//! composition law, and the Heisenberg-group geometry in which ordinary and
//! deformed additions sit side by side.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`qalgebra`] | `⊕_q`, its inverse, `tau`, `q_exp`, `q_log` |
//! | [`entropy`] | `S_q`, escort distributions, Jackson derivative, Abe's form |
//! | [`heisenberg`] | the embedding `x ↦ S(x)`, matrix product, exp/log, BCH |
//! | [`carnot`] | dilations, Korányi gauge, CC distance, ball growth, Pansu quotients |
//! | [`curvature`] | `k(q) = -(ln(2-q))²` and a Brioschi check |
//! | [`maxent`] | escort-constrained maximum entropy on a grid |
//!
//! ```
//! use tsallis_core::prelude::*;
//!
//! let q = QParam::new(2.0).unwrap();
//! let half = DiscreteDistribution::new(vec![0.5, 0.5]).unwrap();
//! let s = tsallis_entropy(&half, q).unwrap();
//! let joint = product_distribution(&half, &half);
//! let s12 = tsallis_entropy(&joint, q).unwrap();
//! assert!((s12.value - q_add(s.value, s.value, q)).abs() < 1e-15);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carnot;
pub mod curvature;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod heisenberg;
pub mod maxent;
pub mod qalgebra;

pub use error::{Error, Result};
pub use exec::Execution;

pub mod prelude {
    pub use crate::carnot::{
        cc_distance, dilate, discrete_ball_sizes, growth_exponent, koranyi_norm, pansu_quotient,
        GeodesicResult, GroupKind, GrowthReport,
    };
    pub use crate::curvature::{curvature_of_q, gaussian_curvature_numeric, ModelMetric};
    pub use crate::entropy::{
        abe_entropy, composition_rhs, escort, jackson_derivative, product_distribution,
        rescaled_entropy, tsallis_entropy, DiscreteDistribution, EntropyValue,
    };
    pub use crate::error::{Error, Result};
    pub use crate::exec::Execution;
    pub use crate::heisenberg::{
        bracket, embed, embedding_defect, exp_map, group_law, log_map, multiply, HeisenbergPoint,
        LieVector, UpperUnitriangular,
    };
    pub use crate::maxent::{
        escort_moment, solve_maxent, Constraint, ConstraintKind, MaxentProblem, MaxentSolution,
    };
    pub use crate::qalgebra::{q_add, q_exp, q_log, q_negate, tau, QParam};
}
