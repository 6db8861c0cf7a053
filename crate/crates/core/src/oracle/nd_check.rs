//! Randomized check of the d-dimensional trace bound.
//!
//! Each trial draws a shared random support in R^d and two random
//! probability vectors on it, computes the exact means, covariances and TV
//! of that draw, and tests `TV >= bound(moments) - 1e-10`. Trial `i` uses
//! stream `i` of a ChaCha generator seeded with `seed`, so the count is
//! reproducible under either execution strategy.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::moments::{tv_lower_bound_nd, MomentPairND, MomentsND};
use crate::summation::{compensated_sum, NeumaierSum};

const VIOLATION_TOL: f64 = 1e-10;

/// Mean and covariance of a discrete law on `points` (each of length d).
pub fn discrete_nd_moments(points: &[Vec<f64>], probs: &[f64]) -> Result<MomentsND> {
    if points.is_empty() || points.len() != probs.len() {
        return Err(Error::InvalidDistribution(
            "need one probability per point and at least one point".into(),
        ));
    }
    let d = points[0].len();
    if points.iter().any(|x| x.len() != d) {
        return Err(Error::InvalidDistribution("points differ in dimension".into()));
    }
    let mean: Vec<f64> = (0..d)
        .map(|k| compensated_sum(points.iter().zip(probs).map(|(x, p)| p * x[k])))
        .collect();
    let mut cov = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in i..d {
            let mut acc = NeumaierSum::new();
            for (x, p) in points.iter().zip(probs) {
                acc.add(p * (x[i] - mean[i]) * (x[j] - mean[j]));
            }
            cov[i][j] = acc.value();
            cov[j][i] = cov[i][j];
        }
    }
    MomentsND::new(mean, cov)
}

fn random_simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    // Exponential spacings give a uniform draw on the simplex; some trials
    // zero out atoms so that supports only partly overlap.
    let sparse = rng.random_bool(0.25);
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            if sparse && rng.random_bool(0.4) {
                0.0
            } else {
                -(1.0 - rng.random::<f64>()).ln()
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[rng.random_range(0..n)] = 1.0;
    }
    let total = compensated_sum(w.iter().copied());
    w.iter().map(|x| x / total).collect()
}

/// Whether one seeded trial violates the bound.
fn trial_violates(d: usize, atoms: usize, seed: u64, trial: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let scale = 10f64.powf(rng.random_range(-1.0..1.0));
    let points: Vec<Vec<f64>> = (0..atoms)
        .map(|_| (0..d).map(|_| scale * rng.random_range(-1.0..1.0)).collect())
        .collect();
    let p = random_simplex_point(&mut rng, atoms);
    let q = random_simplex_point(&mut rng, atoms);

    let tv = 0.5 * compensated_sum(p.iter().zip(&q).map(|(a, b)| (a - b).abs()));
    let (Ok(mp), Ok(mq)) = (discrete_nd_moments(&points, &p), discrete_nd_moments(&points, &q))
    else {
        // Computed covariances are PSD up to round-off; a rejection here is
        // itself a defect worth counting.
        return true;
    };
    let pair = MomentPairND::new(mp, mq).expect("shared dimension");
    tv < tv_lower_bound_nd(&pair) - VIOLATION_TOL
}

/// Counts trials in which the d-dimensional bound exceeds the exact TV.
pub fn check_nd_bound_random(d: usize, atoms: usize, trials: usize, seed: u64) -> Result<usize> {
    check_nd_bound_random_with(d, atoms, trials, seed, Execution::default())
}

pub fn check_nd_bound_random_with(
    d: usize,
    atoms: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<usize> {
    if !(1..=4).contains(&d) {
        return Err(Error::BadParameter(format!("dimension must be in 1..=4, got {d}")));
    }
    if atoms < d + 2 {
        return Err(Error::BadParameter(format!("need at least d + 2 = {} atoms", d + 2)));
    }
    if trials == 0 {
        return Err(Error::BadParameter("need at least one trial".into()));
    }
    Ok(exec.count_indices(trials, |i| trial_violates(d, atoms, seed, i as u64)))
}
