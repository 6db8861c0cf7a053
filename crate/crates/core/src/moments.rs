//! Moment records and the closed-form bound formulas.
//!
//! Every bound here is a function of the mean gap `a = m_P - m_Q` and the
//! standard deviations only. For one dimension the tight bound is
//!
//! ```text
//! TV(P, Q) >= a^2 / ((sigma_P + sigma_Q)^2 + a^2)
//! ```
//!
//! and the remaining 1-D quantities (two-point pair, sibling three-point
//! branch, anchored stationary values) are the competing stationary values
//! of the same minimization, all of which sit at or above the tight bound.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result, Side};

/// Mean and standard deviation of a distribution on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments1D {
    mean: f64,
    stddev: f64,
}

impl Moments1D {
    pub fn new(mean: f64, stddev: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::InvalidMoments(format!("mean must be finite, got {mean}")));
        }
        if !stddev.is_finite() {
            return Err(Error::InvalidMoments(format!(
                "standard deviation must be finite, got {stddev}"
            )));
        }
        if stddev < 0.0 {
            return Err(Error::InvalidMoments(format!(
                "standard deviation must be non-negative, got {stddev}"
            )));
        }
        Ok(Self { mean, stddev })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn stddev(&self) -> f64 {
        self.stddev
    }

    pub fn variance(&self) -> f64 {
        self.stddev * self.stddev
    }

    /// E[X^2] = m^2 + sigma^2.
    pub fn second_moment(&self) -> f64 {
        self.mean * self.mean + self.stddev * self.stddev
    }
}

/// Moment constraints for a pair (P, Q) on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentPair1D {
    p_side: Moments1D,
    q_side: Moments1D,
}

impl MomentPair1D {
    pub fn new(p_side: Moments1D, q_side: Moments1D) -> Self {
        Self { p_side, q_side }
    }

    /// Shorthand for `(m_P, sigma_P, m_Q, sigma_Q)`.
    pub fn from_scalars(m_p: f64, sigma_p: f64, m_q: f64, sigma_q: f64) -> Result<Self> {
        Ok(Self::new(Moments1D::new(m_p, sigma_p)?, Moments1D::new(m_q, sigma_q)?))
    }

    pub fn p_side(&self) -> Moments1D {
        self.p_side
    }

    pub fn q_side(&self) -> Moments1D {
        self.q_side
    }

    /// The same constraints with the roles of P and Q exchanged.
    pub fn swapped(&self) -> Self {
        Self { p_side: self.q_side, q_side: self.p_side }
    }

    pub fn side(&self, side: Side) -> Moments1D {
        match side {
            Side::P => self.p_side,
            Side::Q => self.q_side,
        }
    }
}

/// Which measure keeps the exclusive atom in an anchored stationary
/// configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Anchor {
    /// P carries an atom where Q has no mass (requires sigma_Q > 0).
    PAnchored,
    /// Q carries an atom where P has no mass (requires sigma_P > 0).
    QAnchored,
}

impl Anchor {
    pub fn flipped(self) -> Self {
        match self {
            Anchor::PAnchored => Anchor::QAnchored,
            Anchor::QAnchored => Anchor::PAnchored,
        }
    }
}

pub fn gap(pair: &MomentPair1D) -> f64 {
    pair.p_side.mean - pair.q_side.mean
}

/// `v = sqrt((sigma_Q^2 - sigma_P^2)^2 + 2 a^2 (sigma_P^2 + sigma_Q^2) + a^4)`.
///
/// Evaluated exactly in this expanded form; every term is non-negative.
pub fn radical_v(pair: &MomentPair1D) -> f64 {
    let a = gap(pair);
    let a2 = a * a;
    let vp = pair.p_side.variance();
    let vq = pair.q_side.variance();
    let diff = vq - vp;
    (diff * diff + 2.0 * a2 * (vp + vq) + a2 * a2).sqrt()
}

/// Tight lower bound on TV for the 1-D moment set. Returns 0 when the means
/// coincide: that is the infimum, which is not attained unless the
/// standard deviations also agree.
pub fn tv_lower_bound_1d(pair: &MomentPair1D) -> f64 {
    let a = gap(pair);
    if a == 0.0 {
        return 0.0;
    }
    let a2 = a * a;
    let s = pair.p_side.stddev + pair.q_side.stddev;
    a2 / (s * s + a2)
}

/// TV of the unique pair supported on a common two-point set: `a^2 / v`.
pub fn two_point_tv(pair: &MomentPair1D) -> Result<f64> {
    let a = gap(pair);
    if a == 0.0 {
        return Err(Error::GapZero);
    }
    Ok((a * a / radical_v(pair)).min(1.0))
}

/// The other three-point branch, `a^2 / ((sigma_P - sigma_Q)^2 + a^2)`.
///
/// `valid` is the side condition `a / (sigma_P - sigma_Q) < 0` under which
/// that branch is realizable; it is false when the deviations are equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiblingBranch {
    pub value: f64,
    pub valid: bool,
}

pub fn sibling_branch_tv(pair: &MomentPair1D) -> Result<SiblingBranch> {
    let a = gap(pair);
    if a == 0.0 {
        return Err(Error::GapZero);
    }
    let a2 = a * a;
    let d = pair.p_side.stddev - pair.q_side.stddev;
    let value = a2 / (d * d + a2);
    // a/d < 0 without dividing: opposite signs, d nonzero.
    let valid = d != 0.0 && (a < 0.0) != (d < 0.0);
    Ok(SiblingBranch { value, valid })
}

/// Stationary TV of the anchored three-point configuration.
///
/// P-anchored: `2a^2 / (v + sigma_P^2 - sigma_Q^2 + a^2)`, needs sigma_Q > 0.
/// Q-anchored: the same with P and Q exchanged, needs sigma_P > 0.
pub fn anchored_tv(pair: &MomentPair1D, anchor: Anchor) -> Result<f64> {
    let a = gap(pair);
    if a == 0.0 {
        return Err(Error::GapZero);
    }
    let (anchored, other) = match anchor {
        Anchor::PAnchored => (pair.p_side, pair.q_side),
        Anchor::QAnchored => (pair.q_side, pair.p_side),
    };
    if other.stddev == 0.0 {
        return Err(Error::DegenerateVariance(match anchor {
            Anchor::PAnchored => Side::Q,
            Anchor::QAnchored => Side::P,
        }));
    }
    let a2 = a * a;
    let v = radical_v(pair);
    let c = anchored.variance() - other.variance() + a2;
    // v^2 - c^2 = 4 a^2 sigma_other^2, so for c < 0 the denominator v + c is
    // rewritten to avoid cancellation.
    let value = if c >= 0.0 { 2.0 * a2 / (v + c) } else { (v - c) / (2.0 * other.variance()) };
    // Exactly 1 when the anchored side is a point mass; clamp the rounding.
    Ok(value.min(1.0))
}

/// All 1-D bound quantities for one moment pair.
///
/// Absent diagnostics are those whose preconditions fail for this pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport1D {
    pub gap_a: f64,
    pub radical_v: f64,
    pub tight_bound: f64,
    /// False when the means coincide and the deviations differ: the bound 0
    /// is then only an infimum.
    pub attained: bool,
    pub two_point_tv: Option<f64>,
    pub sibling_branch_tv: Option<f64>,
    pub sibling_branch_valid: Option<bool>,
    pub anchored_p_tv: Option<f64>,
    pub anchored_q_tv: Option<f64>,
}

impl BoundReport1D {
    pub fn compute(pair: &MomentPair1D) -> Self {
        let a = gap(pair);
        let sibling = sibling_branch_tv(pair).ok();
        Self {
            gap_a: a,
            radical_v: radical_v(pair),
            tight_bound: tv_lower_bound_1d(pair),
            attained: a != 0.0 || pair.p_side.stddev == pair.q_side.stddev,
            two_point_tv: two_point_tv(pair).ok(),
            sibling_branch_tv: sibling.map(|s| s.value),
            sibling_branch_valid: sibling.map(|s| s.valid),
            anchored_p_tv: anchored_tv(pair, Anchor::PAnchored).ok(),
            anchored_q_tv: anchored_tv(pair, Anchor::QAnchored).ok(),
        }
    }
}

const SYMMETRY_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;

/// Mean vector and covariance matrix of a distribution on R^d.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentsND {
    mean: Vec<f64>,
    covariance: Vec<Vec<f64>>,
}

impl MomentsND {
    /// Validates shape, finiteness, symmetry and positive semidefiniteness.
    /// The stored covariance is the symmetrized input `(S + S^T) / 2`.
    pub fn new(mean: Vec<f64>, covariance: Vec<Vec<f64>>) -> Result<Self> {
        let d = mean.len();
        if d == 0 {
            return Err(Error::InvalidMoments("dimension must be at least 1".into()));
        }
        if covariance.len() != d || covariance.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidMoments(format!(
                "covariance must be {d}x{d} to match the mean vector"
            )));
        }
        if mean.iter().chain(covariance.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidMoments("non-finite entry in mean or covariance".into()));
        }
        for (i, row) in covariance.iter().enumerate() {
            for (j, &x) in row.iter().enumerate().skip(i + 1) {
                let delta = (x - covariance[j][i]).abs();
                if delta > SYMMETRY_TOL {
                    return Err(Error::InvalidMoments(format!(
                        "covariance not symmetric at ({i},{j}): |difference| = {delta:e}"
                    )));
                }
            }
        }
        let sym = DMatrix::from_fn(d, d, |i, j| 0.5 * (covariance[i][j] + covariance[j][i]));
        let max_diag = (0..d).map(|i| sym[(i, i)]).fold(f64::NEG_INFINITY, f64::max);
        let min_eig = sym.symmetric_eigenvalues().min();
        if min_eig < -PSD_TOL * (1.0 + max_diag) {
            return Err(Error::InvalidMoments(format!(
                "covariance not positive semidefinite: minimum eigenvalue {min_eig:e}"
            )));
        }
        let covariance = (0..d).map(|i| (0..d).map(|j| sym[(i, j)]).collect()).collect();
        Ok(Self { mean, covariance })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &[Vec<f64>] {
        &self.covariance
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.covariance[i][i]).sum()
    }

    /// Embeds 1-D moments as a d = 1 record.
    pub fn from_1d(m: Moments1D) -> Self {
        Self { mean: vec![m.mean()], covariance: vec![vec![m.variance()]] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentPairND {
    p_side: MomentsND,
    q_side: MomentsND,
}

impl MomentPairND {
    pub fn new(p_side: MomentsND, q_side: MomentsND) -> Result<Self> {
        if p_side.dim() != q_side.dim() {
            return Err(Error::DimensionMismatch { p: p_side.dim(), q: q_side.dim() });
        }
        Ok(Self { p_side, q_side })
    }

    pub fn p_side(&self) -> &MomentsND {
        &self.p_side
    }

    pub fn q_side(&self) -> &MomentsND {
        &self.q_side
    }

    pub fn dim(&self) -> usize {
        self.p_side.dim()
    }

    /// Squared norm of the mean gap, `a^T a`.
    pub fn gap_norm_sq(&self) -> f64 {
        self.p_side
            .mean
            .iter()
            .zip(&self.q_side.mean)
            .map(|(p, q)| (p - q) * (p - q))
            .sum()
    }
}

/// `a^T a / (2 (tr S_P + tr S_Q) + a^T a)`, or 0 when the means coincide.
pub fn tv_lower_bound_nd(pair: &MomentPairND) -> f64 {
    let gap_sq = pair.gap_norm_sq();
    if gap_sq == 0.0 {
        return 0.0;
    }
    gap_sq / (2.0 * (pair.p_side.trace() + pair.q_side.trace()) + gap_sq)
}
