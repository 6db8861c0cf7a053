//! Finite discrete distributions on the real line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::Moments1D;
use crate::summation::{compensated_sum, NeumaierSum};

const MASS_TOL: f64 = 1e-12;
const MERGE_REL_TOL: f64 = 1e-12;

/// Merge tolerance for support points, relative to the largest magnitude.
pub fn merge_tolerance(max_abs: f64) -> f64 {
    MERGE_REL_TOL * (1.0 + max_abs)
}

/// A probability vector on a strictly increasing finite support.
///
/// Atoms with probability exactly zero are kept; see [`DiscreteDist::compact`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDist")]
pub struct DiscreteDist {
    support: Vec<f64>,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawDist {
    support: Vec<f64>,
    probs: Vec<f64>,
}

impl TryFrom<RawDist> for DiscreteDist {
    type Error = Error;

    fn try_from(raw: RawDist) -> Result<Self> {
        DiscreteDist::new(raw.support, raw.probs)
    }
}

impl DiscreteDist {
    /// Builds a distribution from atoms in any order. Points closer than the
    /// merge tolerance are identified and their probabilities summed.
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "support has {} points but probs has {} entries",
                support.len(),
                probs.len()
            )));
        }
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if support.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDistribution("non-finite support point".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("invalid probability {p}")));
        }
        let total = compensated_sum(probs.iter().copied());
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }

        let mut atoms: Vec<(f64, f64)> = support.into_iter().zip(probs).collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let max_abs = atoms.iter().map(|a| a.0.abs()).fold(0.0, f64::max);
        let tol = merge_tolerance(max_abs);

        let mut support = Vec::with_capacity(atoms.len());
        let mut probs: Vec<f64> = Vec::with_capacity(atoms.len());
        for (x, p) in atoms {
            match support.last() {
                Some(&last) if x - last <= tol => *probs.last_mut().unwrap() += p,
                _ => {
                    support.push(x);
                    probs.push(p);
                }
            }
        }
        Ok(Self { support, probs })
    }

    /// Unit mass at `x`.
    pub fn point_mass(x: f64) -> Result<Self> {
        Self::new(vec![x], vec![1.0])
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support.iter().copied().zip(self.probs.iter().copied())
    }

    /// Drops zero-probability atoms.
    pub fn compact(&self) -> Self {
        let (support, probs) = self.atoms().filter(|&(_, p)| p > 0.0).unzip();
        Self { support, probs }
    }

    fn max_abs(&self) -> f64 {
        self.support.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn moments(&self) -> MomentSummary {
        let mean = compensated_sum(self.atoms().map(|(x, p)| p * x));
        let second_moment = compensated_sum(self.atoms().map(|(x, p)| p * x * x));
        // Central second moment directly, so large offsets do not cancel.
        let variance = compensated_sum(self.atoms().map(|(x, p)| {
            let d = x - mean;
            p * d * d
        }))
        .max(0.0);
        MomentSummary { mean, second_moment, variance }
    }
}

/// First two moments of a discrete distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
}

/// `1/2 * sum |p_i - q_i|` over the merged support.
pub fn tv_distance(p: &DiscreteDist, q: &DiscreteDist) -> f64 {
    let tol = merge_tolerance(p.max_abs().max(q.max_abs()));
    let (xs, ps) = (p.support(), p.probs());
    let (ys, qs) = (q.support(), q.probs());
    let (mut i, mut j) = (0, 0);
    let mut acc = NeumaierSum::new();
    while i < xs.len() || j < ys.len() {
        if j == ys.len() || (i < xs.len() && xs[i] < ys[j] - tol) {
            acc.add(ps[i]);
            i += 1;
        } else if i == xs.len() || ys[j] < xs[i] - tol {
            acc.add(qs[j]);
            j += 1;
        } else {
            acc.add((ps[i] - qs[j]).abs());
            i += 1;
            j += 1;
        }
    }
    (0.5 * acc.value()).clamp(0.0, 1.0)
}

/// Whether `d` has the target mean and variance, each to relative tolerance
/// `tol` (scaled by `1 + |m|` and `1 + sigma^2` respectively).
pub fn check_moments(d: &DiscreteDist, target: Moments1D, tol: f64) -> bool {
    let m = d.moments();
    let var = target.variance();
    (m.mean - target.mean()).abs() <= tol * (1.0 + target.mean().abs())
        && (m.variance - var).abs() <= tol * (1.0 + var)
}
