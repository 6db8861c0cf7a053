//! # tvbound
//!
//! Lower bounds on the total variation distance between two probability
//! measures whose means and variances (or covariance matrices) are known.
//!
//! | Item | What it gives |
//! |------|---------------|
//! | [`tv_lower_bound_1d`] | tight 1-D bound `a^2 / ((sigma_P + sigma_Q)^2 + a^2)` |
//! | [`tv_lower_bound_nd`] | d-D bound `a^T a / (2 (tr S_P + tr S_Q) + a^T a)` |
//! | [`construct_tight_witness`] | a pair of discrete laws attaining the 1-D bound |
//! | [`construct_vanishing_sequence`] | equal-means pairs with TV = 1/k |
//! | [`minimize_tv_on_grid`] | LP minimum of TV over laws on a finite grid |
//! | [`check_nd_bound_random`] | randomized property check of the d-D bound |
//!
//! Here `a = m_P - m_Q` (or the mean-difference vector in d dimensions).
//!
//! ## Invariants worth knowing
//!
//! - Every bound value lies in `[0, 1]` and depends on the means only
//!   through `a`.
//! - In 1-D the bound is attained whenever `a != 0`; for `a = 0` the
//!   infimum 0 is attained only when the deviations agree.
//! - The competing stationary values ([`two_point_tv`], [`anchored_tv`],
//!   [`sibling_branch_tv`]) never undercut the tight bound.
//!
//! ## Parallelism
//!
//! The `parallel` feature (on by default) runs sweeps, randomized checks and
//! LP batches on rayon. [`Execution`] picks the strategy per call; results
//! are identical either way.

pub mod discrete;
pub mod error;
pub mod exec;
pub mod moments;
pub mod oracle;
pub mod summation;
pub mod witness;

pub use discrete::{check_moments, tv_distance, DiscreteDist, MomentSummary};
pub use error::{Error, Result, Side};
pub use exec::Execution;
pub use moments::{
    anchored_tv, gap, radical_v, sibling_branch_tv, tv_lower_bound_1d, tv_lower_bound_nd,
    two_point_tv, Anchor, BoundReport1D, MomentPair1D, MomentPairND, Moments1D, MomentsND,
    SiblingBranch,
};
pub use oracle::{
    build_grid, check_nd_bound_random, check_nd_bound_random_with, formulate, minimize_tv_batch,
    minimize_tv_on_grid, solve, GridSpec, LPStandardForm, OracleResult, OracleStatus,
};
pub use witness::{
    construct_case_c_witness, construct_tight_witness, construct_two_point,
    construct_vanishing_sequence, WitnessKind, WitnessPair,
};
