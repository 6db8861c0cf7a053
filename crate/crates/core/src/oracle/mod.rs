//! Numerical verifier for the 1-D bound.
//!
//! Minimizes `TV(P, Q)` over all pairs supported on a fixed finite grid
//! whose first two moments equal the targets exactly. The problem is a
//! linear program in the probability vectors, solved by the dense simplex in
//! [`simplex`]. On any grid the optimum is an upper bound on the true
//! infimum, and it is exact once the grid contains a minimizing pair's
//! support.

mod nd_check;
pub mod simplex;

pub use nd_check::{check_nd_bound_random, check_nd_bound_random_with, discrete_nd_moments};

use serde::Serialize;

use crate::discrete::{check_moments, merge_tolerance, DiscreteDist};
use crate::error::{Error, Result, Side};
use crate::exec::Execution;
use crate::moments::{gap, MomentPair1D};
use crate::summation::compensated_sum;
use crate::witness::construct_tight_witness;
use simplex::{solve_standard_form, SimplexStatus};

/// Relative tolerance used to certify the oracle's optimal pair.
pub const ORACLE_MOMENT_TOL: f64 = 1e-7;

pub const DEFAULT_GRID_COUNT: usize = 121;
pub const DEFAULT_GRID_HALF_WIDTH_SIGMAS: f64 = 6.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub extra_points: Vec<f64>,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, count: usize) -> Self {
        Self { lo, hi, count, extra_points: Vec::new() }
    }

    pub fn with_extra_points(mut self, extra: impl IntoIterator<Item = f64>) -> Self {
        self.extra_points.extend(extra);
        self
    }

    /// `[min(m) - 6 sigma_max, max(m) + 6 sigma_max]` with 121 points. When
    /// both deviations vanish, the half-width falls back to `max(|a|, 1)`.
    pub fn default_for(pair: &MomentPair1D) -> Self {
        let (mp, mq) = (pair.p_side().mean(), pair.q_side().mean());
        let sigma_max = pair.p_side().stddev().max(pair.q_side().stddev());
        let half_width = if sigma_max > 0.0 {
            DEFAULT_GRID_HALF_WIDTH_SIGMAS * sigma_max
        } else {
            gap(pair).abs().max(1.0)
        };
        Self::new(mp.min(mq) - half_width, mp.max(mq) + half_width, DEFAULT_GRID_COUNT)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo >= self.hi {
            return Err(Error::BadParameter(format!(
                "grid needs finite lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.count < 2 {
            return Err(Error::BadParameter(format!(
                "grid needs at least 2 points, got {}",
                self.count
            )));
        }
        if self.extra_points.iter().any(|x| !x.is_finite()) {
            return Err(Error::BadParameter("non-finite extra grid point".into()));
        }
        Ok(())
    }
}

/// Equally spaced points on `[lo, hi]` merged with the extra points, sorted
/// and deduplicated.
pub fn build_grid(spec: &GridSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let last = (spec.count - 1) as f64;
    let mut pts: Vec<f64> = (0..spec.count)
        .map(|i| {
            if i == spec.count - 1 {
                spec.hi
            } else {
                spec.lo + (spec.hi - spec.lo) * (i as f64 / last)
            }
        })
        .chain(spec.extra_points.iter().copied())
        .collect();
    pts.sort_by(f64::total_cmp);
    let tol = merge_tolerance(pts.iter().map(|x| x.abs()).fold(0.0, f64::max));
    pts.dedup_by(|later, kept| *later - *kept <= tol);
    Ok(pts)
}

/// `min c^T x  s.t.  A x = b, x >= 0` for the grid TV problem.
///
/// Column layout (n = grid size): `p_1..p_n`, `q_1..q_n`, `t_1..t_n`,
/// `s_plus_1..s_plus_n`, `s_minus_1..s_minus_n`. The first six rows are the
/// mass, mean and second-moment constraints for P then Q; the remaining
/// `2n` rows read `p_i - q_i - t_i + s_plus_i = 0` and
/// `q_i - p_i - t_i + s_minus_i = 0`, so that `t_i >= |p_i - q_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct LPStandardForm {
    pub objective: Vec<f64>,
    pub constraint_matrix: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub variable_names: Vec<String>,
    grid: Vec<f64>,
    targets: MomentPair1D,
}

impl LPStandardForm {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn columns(&self) -> usize {
        self.objective.len()
    }
}

pub fn formulate(pair: &MomentPair1D, grid: &[f64]) -> LPStandardForm {
    let n = grid.len();
    let cols = 5 * n;
    let (p_off, q_off, t_off, sp_off, sm_off) = (0, n, 2 * n, 3 * n, 4 * n);

    let mut objective = vec![0.0; cols];
    objective[t_off..t_off + n].iter_mut().for_each(|c| *c = 0.5);

    let mut matrix = Vec::with_capacity(6 + 2 * n);
    let mut rhs = Vec::with_capacity(6 + 2 * n);
    for (offset, target) in [(p_off, pair.p_side()), (q_off, pair.q_side())] {
        for (power, value) in [(0, 1.0), (1, target.mean()), (2, target.second_moment())] {
            let mut row = vec![0.0; cols];
            for (i, &x) in grid.iter().enumerate() {
                row[offset + i] = x.powi(power);
            }
            matrix.push(row);
            rhs.push(value);
        }
    }
    for (sign, slack_off) in [(1.0, sp_off), (-1.0, sm_off)] {
        for i in 0..n {
            let mut row = vec![0.0; cols];
            row[p_off + i] = sign;
            row[q_off + i] = -sign;
            row[t_off + i] = -1.0;
            row[slack_off + i] = 1.0;
            matrix.push(row);
            rhs.push(0.0);
        }
    }

    let mut variable_names = Vec::with_capacity(cols);
    for prefix in ["p", "q", "t", "s_plus", "s_minus"] {
        variable_names.extend((1..=n).map(|i| format!("{prefix}_{i}")));
    }
    LPStandardForm {
        objective,
        constraint_matrix: matrix,
        rhs,
        variable_names,
        grid: grid.to_vec(),
        targets: *pair,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OracleStatus {
    Optimal,
    Infeasible,
    NumericFailure,
}

/// Outcome of a grid minimization. When `Optimal`, `tv_min` is the TV of
/// `(p_opt, q_opt)`, both of which reproduce the target moments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub status: OracleStatus,
    pub tv_min: Option<f64>,
    pub p_opt: Option<DiscreteDist>,
    pub q_opt: Option<DiscreteDist>,
    pub iterations: usize,
}

impl OracleResult {
    fn failed(status: OracleStatus, iterations: usize) -> Self {
        Self { status, tv_min: None, p_opt: None, q_opt: None, iterations }
    }
}

/// Masses below this are solver round-off and are dropped before
/// renormalizing.
const DUST: f64 = 1e-13;

fn extract(grid: &[f64], raw: &[f64]) -> Option<DiscreteDist> {
    let clean: Vec<f64> = raw.iter().map(|&p| if p > DUST { p } else { 0.0 }).collect();
    let total = compensated_sum(clean.iter().copied());
    if total.is_nan() || total <= 0.0 {
        return None;
    }
    let probs = clean.iter().map(|p| p / total).collect();
    DiscreteDist::new(grid.to_vec(), probs).ok().map(|d| d.compact())
}

/// Solves the LP and certifies the optimal pair against the moment targets
/// it was built from.
pub fn solve(lp: &LPStandardForm) -> OracleResult {
    let targets = &lp.targets;
    let sol = solve_standard_form(&lp.objective, &lp.constraint_matrix, &lp.rhs);
    let iterations = sol.iterations;
    let x = match sol.status {
        SimplexStatus::Optimal => sol.x.expect("optimal solution carries a point"),
        SimplexStatus::Infeasible => return OracleResult::failed(OracleStatus::Infeasible, iterations),
        SimplexStatus::Unbounded | SimplexStatus::IterationLimit | SimplexStatus::SingularBasis => {
            return OracleResult::failed(OracleStatus::NumericFailure, iterations)
        }
    };
    let n = lp.grid.len();
    let (Some(p), Some(q)) = (extract(&lp.grid, &x[..n]), extract(&lp.grid, &x[n..2 * n])) else {
        return OracleResult::failed(OracleStatus::NumericFailure, iterations);
    };
    let certified = [(Side::P, &p), (Side::Q, &q)]
        .into_iter()
        .all(|(side, d)| check_moments(d, targets.side(side), ORACLE_MOMENT_TOL));
    if !certified {
        return OracleResult::failed(OracleStatus::NumericFailure, iterations);
    }
    let tv = crate::discrete::tv_distance(&p, &q);
    OracleResult { status: OracleStatus::Optimal, tv_min: Some(tv), p_opt: Some(p), q_opt: Some(q), iterations }
}

/// Grid, formulation and solve in one step. With `include_witness_points`
/// (and distinct means) the tight witness's support is added to the grid,
/// which makes the optimum equal to the closed-form bound.
pub fn minimize_tv_on_grid(
    pair: &MomentPair1D,
    spec: &GridSpec,
    include_witness_points: bool,
) -> Result<OracleResult> {
    let mut spec = spec.clone();
    if include_witness_points && gap(pair) != 0.0 {
        let w = construct_tight_witness(pair)?;
        spec.extra_points.extend(w.p_dist.support().iter().chain(w.q_dist.support()));
    }
    let grid = build_grid(&spec)?;
    Ok(solve(&formulate(pair, &grid)))
}

/// Independent grid minimizations, results in input order.
pub fn minimize_tv_batch(
    jobs: &[(MomentPair1D, GridSpec)],
    include_witness_points: bool,
    exec: Execution,
) -> Vec<Result<OracleResult>> {
    exec.map_slice(jobs, |(pair, spec)| minimize_tv_on_grid(pair, spec, include_witness_points))
}
