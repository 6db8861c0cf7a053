//! Independent numerical oracles shared by the integration tests. Nothing in
//! here calls the closed-form bound formulas.

#![allow(dead_code)]

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvbound::MomentPair1D;

pub fn pair(mp: f64, sp: f64, mq: f64, sq: f64) -> MomentPair1D {
    MomentPair1D::from_scalars(mp, sp, mq, sq).unwrap()
}

/// Two-point pair found by root finding on the moment equations.
#[derive(Debug, Clone, Copy)]
pub struct TwoPointRoot {
    pub p: f64,
    pub q: f64,
    pub x1: f64,
    pub x2: f64,
}

impl TwoPointRoot {
    pub fn tv(&self) -> f64 {
        (self.p - self.q).abs()
    }
}

/// Parametrize P on `{x1 > x2}` by `p = P(x2)` so that P's moments hold,
/// pin Q's mass `q` on the same support by its mean, and bisect on Q's
/// second-moment residual.
pub fn two_point_by_bisection(mp: f64, sp: f64, mq: f64, sq: f64) -> TwoPointRoot {
    let support = |p: f64| {
        let x1 = mp + sp * (p / (1.0 - p)).sqrt();
        let x2 = mp - sp * ((1.0 - p) / p).sqrt();
        (x1, x2)
    };
    let residual = |p: f64| {
        let (x1, x2) = support(p);
        let q = (x1 - mq) / (x1 - x2);
        (1.0 - q) * x1 * x1 + q * x2 * x2 - (mq * mq + sq * sq)
    };
    let steps = 20_000;
    let grid: Vec<f64> = (1..steps).map(|i| i as f64 / steps as f64).collect();
    let (mut lo, mut hi) = grid
        .windows(2)
        .map(|w| (w[0], w[1]))
        .find(|&(a, b)| residual(a).signum() != residual(b).signum())
        .expect("a sign change of the residual");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(lo).signum() == residual(mid).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let (x1, x2) = support(p);
    TwoPointRoot { p, q: (x1 - mq) / (x1 - x2), x1, x2 }
}

fn normal_pdf(x: f64, m: f64, s: f64) -> f64 {
    let z = (x - m) / s;
    (-0.5 * z * z).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
        + adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// TV between two normal laws: `1/2 * integral |p - q|`, split at the
/// density crossings so every panel has a smooth integrand.
pub fn gaussian_tv_quadrature(mp: f64, sp: f64, mq: f64, sq: f64, tol: f64) -> f64 {
    let f = |x: f64| (normal_pdf(x, mp, sp) - normal_pdf(x, mq, sq)).abs();
    let reach = 40.0 * sp.max(sq);
    let lo = mp.min(mq) - reach;
    let hi = mp.max(mq) + reach;

    // Crossings solve a quadratic in x from log p(x) = log q(x).
    let mut cuts = vec![lo, hi];
    let (ap, aq) = (1.0 / (sp * sp), 1.0 / (sq * sq));
    let qa = 0.5 * (aq - ap);
    let qb = mp * ap - mq * aq;
    let qc = 0.5 * (mq * mq * aq - mp * mp * ap) + (sq / sp).ln();
    if qa.abs() < 1e-300 {
        if qb != 0.0 {
            cuts.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let r = disc.sqrt();
            cuts.push((-qb - r) / (2.0 * qa));
            cuts.push((-qb + r) / (2.0 * qa));
        }
    }
    cuts.retain(|x| x.is_finite() && *x >= lo && *x <= hi);
    cuts.push(mp);
    cuts.push(mq);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let panels = (cuts.len() - 1) as f64;
    0.5 * cuts
        .windows(2)
        .map(|w| adaptive_simpson(&f, w[0], w[1], tol / panels))
        .sum::<f64>()
}

/// Reproducible random 1-D configuration stream.
pub struct ConfigStream {
    rng: ChaCha8Rng,
}

impl ConfigStream {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    /// Gap magnitude in `[gap_lo, gap_hi]` with random sign, deviations in
    /// `[sigma_lo, sigma_hi]`, and a random common offset.
    pub fn config(&mut self, gap_lo: f64, gap_hi: f64, sigma_lo: f64, sigma_hi: f64) -> MomentPair1D {
        let mag = self.uniform(gap_lo, gap_hi);
        let a = if self.coin(0.5) { mag } else { -mag };
        let mq = self.uniform(-5.0, 5.0);
        let sp = self.uniform(sigma_lo, sigma_hi);
        let sq = self.uniform(sigma_lo, sigma_hi);
        pair(mq + a, sp, mq, sq)
    }
}
