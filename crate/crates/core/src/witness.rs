//! Explicit distribution pairs inside a moment constraint set.
//!
//! Each constructor computes probabilities first and support points second,
//! then re-derives the TV distance and both marginals' moments from the
//! finished distributions. A pair that fails that round trip is reported as
//! [`Error::InternalConsistency`] instead of being returned.
//!
//! Probabilities of the form `1 - p` are evaluated from cancellation-free
//! closed forms rather than by subtraction, so that small `p` still gives
//! support points accurate enough for the moment round trip.

use serde::Serialize;

use crate::discrete::{check_moments, merge_tolerance, tv_distance, DiscreteDist};
use crate::error::{Error, Result, Side};
use crate::moments::{gap, radical_v, tv_lower_bound_1d, MomentPair1D, Moments1D};

/// Tolerance on `|tv_distance(P, Q) - claimed_tv|`.
pub const TV_ROUND_TRIP_TOL: f64 = 1e-12;
/// Relative tolerance for marginal moment round trips (see [`check_moments`]).
pub const MOMENT_ROUND_TRIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    ThreePoint,
    TwoPointSigmaQZero,
    TwoPointSigmaPZero,
    BothPointMasses,
    TwoPointShared,
    CaseCAnchored,
    VanishingSequenceElement,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessPair {
    pub kind: WitnessKind,
    #[serde(rename = "p")]
    pub p_dist: DiscreteDist,
    #[serde(rename = "q")]
    pub q_dist: DiscreteDist,
    #[serde(rename = "tv")]
    pub claimed_tv: f64,
}

impl WitnessPair {
    fn verified(
        kind: WitnessKind,
        p_dist: DiscreteDist,
        q_dist: DiscreteDist,
        claimed_tv: f64,
        targets: &MomentPair1D,
    ) -> Result<Self> {
        let tv = tv_distance(&p_dist, &q_dist);
        if (tv - claimed_tv).abs() > TV_ROUND_TRIP_TOL {
            return Err(Error::InternalConsistency(format!(
                "{kind:?}: recomputed TV {tv} differs from claimed {claimed_tv}"
            )));
        }
        for (side, dist) in [(Side::P, &p_dist), (Side::Q, &q_dist)] {
            if !check_moments(dist, targets.side(side), MOMENT_ROUND_TRIP_TOL) {
                let m = dist.moments();
                return Err(Error::InternalConsistency(format!(
                    "{kind:?}: {side} moments (mean {}, variance {}) miss target {:?}",
                    m.mean,
                    m.variance,
                    targets.side(side)
                )));
            }
        }
        Ok(Self { kind, p_dist, q_dist, claimed_tv })
    }

    /// Exchange the roles of P and Q.
    fn mirrored(self, kind: WitnessKind) -> Self {
        Self { kind, p_dist: self.q_dist, q_dist: self.p_dist, claimed_tv: self.claimed_tv }
    }
}

fn dist(atoms: &[(f64, f64)]) -> Result<DiscreteDist> {
    let (support, probs) = atoms.iter().copied().unzip();
    DiscreteDist::new(support, probs)
}

/// The minimizing pair whose TV equals the tight bound.
///
/// Both deviations positive gives a three-point pair sharing its first atom;
/// one zero deviation gives a point mass against a two-point law; both zero
/// gives two point masses.
pub fn construct_tight_witness(pair: &MomentPair1D) -> Result<WitnessPair> {
    let a = gap(pair);
    if a == 0.0 {
        return Err(Error::GapZero);
    }
    let (sp, sq) = (pair.p_side().stddev(), pair.q_side().stddev());
    match (sp > 0.0, sq > 0.0) {
        (true, true) => three_point(pair, a),
        (true, false) => point_mass_anchor(pair, a),
        (false, true) => Ok(point_mass_anchor(&pair.swapped(), -a)?
            .mirrored(WitnessKind::TwoPointSigmaPZero)),
        (false, false) => {
            let (mp, mq) = (pair.p_side().mean(), pair.q_side().mean());
            WitnessPair::verified(
                WitnessKind::BothPointMasses,
                dist(&[(mp, 1.0), (mq, 0.0)])?,
                dist(&[(mp, 0.0), (mq, 1.0)])?,
                1.0,
                pair,
            )
        }
    }
}

fn three_point(pair: &MomentPair1D, a: f64) -> Result<WitnessPair> {
    let (mp, sp) = (pair.p_side().mean(), pair.p_side().stddev());
    let (mq, sq) = (pair.q_side().mean(), pair.q_side().stddev());
    let sum = sp + sq;
    let denom = sum * sum + a * a;
    let p = tv_lower_bound_1d(pair);
    let p_rest = sum * sum / denom;

    let s = a.signum();
    let t = a.abs() / sum;
    let x1 = mp - s * sp * t;
    let x2 = mp + s * sp / t;
    let x3 = mq - s * sq / t;

    WitnessPair::verified(
        WitnessKind::ThreePoint,
        dist(&[(x1, p_rest), (x2, p), (x3, 0.0)])?,
        dist(&[(x1, p_rest), (x2, 0.0), (x3, p)])?,
        p,
        pair,
    )
}

/// sigma_P > 0, sigma_Q = 0: Q is a point mass at m_Q and P puts its
/// remaining mass at m_Q + a/p.
fn point_mass_anchor(pair: &MomentPair1D, a: f64) -> Result<WitnessPair> {
    let mq = pair.q_side().mean();
    let var_p = pair.p_side().variance();
    let denom = var_p + a * a;
    let p = tv_lower_bound_1d(pair);
    let p_rest = var_p / denom;
    let x2 = mq + a / p;
    WitnessPair::verified(
        WitnessKind::TwoPointSigmaQZero,
        dist(&[(mq, p_rest), (x2, p)])?,
        dist(&[(mq, 1.0), (x2, 0.0)])?,
        p,
        pair,
    )
}

/// Splits `(v + c) / (2v)` and its complement `(v - c) / (2v)` without
/// cancellation, given `v^2 - c^2 = cross` (non-negative).
fn complementary_pair(v: f64, c: f64, cross: f64) -> (f64, f64) {
    // when one side is a point mass, |c| equals v up to rounding
    let big = ((v + c.abs()) / (2.0 * v)).min(1.0);
    let small = cross / (2.0 * v * (v + c.abs()));
    if c >= 0.0 {
        (big, small)
    } else {
        (small, big)
    }
}

/// The unique pair on a common two-point support, TV = a^2 / v.
///
/// Canonicalized so that `x1 > x2`, with `p = P(x2)` and `q = Q(x2)`. When
/// sigma_P = 0 the pair is built with the roles of P and Q exchanged.
pub fn construct_two_point(pair: &MomentPair1D) -> Result<WitnessPair> {
    let a = gap(pair);
    if a == 0.0 {
        return Err(Error::GapZero);
    }
    let (mp, sp) = (pair.p_side().mean(), pair.p_side().stddev());
    let sq = pair.q_side().stddev();
    if sp == 0.0 {
        if sq == 0.0 {
            let mq = pair.q_side().mean();
            return WitnessPair::verified(
                WitnessKind::TwoPointShared,
                dist(&[(mp, 1.0), (mq, 0.0)])?,
                dist(&[(mp, 0.0), (mq, 1.0)])?,
                1.0,
                pair,
            );
        }
        return Ok(construct_two_point(&pair.swapped())?.mirrored(WitnessKind::TwoPointShared));
    }

    let v = radical_v(pair);
    let a2 = a * a;
    let (vp, vq) = (sp * sp, sq * sq);
    let s = a.signum();
    // p = 1/2 + s (vp - vq - a^2) / (2v),  q = p + a|a| / v
    let (p, p_rest) = complementary_pair(v, s * (vp - vq - a2), 4.0 * a2 * vp);
    let (q, q_rest) = complementary_pair(v, s * (vp - vq + a2), 4.0 * a2 * vq);

    let x1 = mp + sp * (p / p_rest).sqrt();
    let x2 = mp - sp * (p_rest / p).sqrt();
    WitnessPair::verified(
        WitnessKind::TwoPointShared,
        dist(&[(x1, p_rest), (x2, p)])?,
        dist(&[(x1, q_rest), (x2, q)])?,
        a2 / v,
        pair,
    )
}

/// Anchored three-point pair: Q is two-point on `{x1, x2}`, P is a mixture
/// `(1 - p) Q + p * delta(x3)`. TV equals `p = 2a^2 / (v + sigma_P^2 -
/// sigma_Q^2 + a^2)`.
///
/// `q_param` is Q's mass at `x2`; the family is one-dimensional in it.
pub fn construct_case_c_witness(pair: &MomentPair1D, q_param: f64) -> Result<WitnessPair> {
    let a = gap(pair);
    if a == 0.0 {
        return Err(Error::GapZero);
    }
    let (sp, sq) = (pair.p_side().stddev(), pair.q_side().stddev());
    if sp == 0.0 {
        return Err(Error::DegenerateVariance(Side::P));
    }
    if sq == 0.0 {
        return Err(Error::DegenerateVariance(Side::Q));
    }
    if !(q_param > 0.0 && q_param < 1.0) {
        return Err(Error::BadParameter(format!("q_param must lie in (0, 1), got {q_param}")));
    }
    let mq = pair.q_side().mean();
    let v = radical_v(pair);
    let a2 = a * a;
    let (vp, vq) = (sp * sp, sq * sq);

    // p is the non-negative root of vq p^2 + (vp - vq + a^2) p - a^2 = 0,
    // 1 - p the smaller root of vq r^2 - (vp + vq + a^2) r + vp = 0.
    let lin = vp - vq + a2;
    let p = if lin >= 0.0 { 2.0 * a2 / (v + lin) } else { (v - lin) / (2.0 * vq) };
    let p_rest = 2.0 * vp / (vp + vq + a2 + v);

    let q = q_param;
    let q_rest = 1.0 - q;
    let x1 = mq + sq * (q / q_rest).sqrt();
    let x2 = mq - sq * (q_rest / q).sqrt();
    let x3 = mq + a / p;

    let tol = merge_tolerance(x1.abs().max(x2.abs()).max(x3.abs()));
    if (x3 - x1).abs() <= tol || (x3 - x2).abs() <= tol {
        return Err(Error::BadParameter(format!(
            "q_param = {q_param} places a two-point atom on the exclusive atom {x3}"
        )));
    }

    WitnessPair::verified(
        WitnessKind::CaseCAnchored,
        dist(&[(x1, p_rest * q_rest), (x2, p_rest * q), (x3, p)])?,
        dist(&[(x1, q_rest), (x2, q), (x3, 0.0)])?,
        p,
        pair,
    )
}

/// Element `k` of the equal-means family with TV = 1/k.
///
/// Both laws put mass near `m +/- sigma_small`; the wider one moves mass
/// `1/(2k)` to each of `m +/- sqrt((sigma_big^2 - sigma_small^2) k +
/// sigma_small^2)`.
pub fn construct_vanishing_sequence(
    m: f64,
    sigma_p: f64,
    sigma_q: f64,
    k: u64,
) -> Result<WitnessPair> {
    if k < 2 {
        return Err(Error::BadParameter(format!("k must be at least 2, got {k}")));
    }
    let targets = MomentPair1D::new(Moments1D::new(m, sigma_p)?, Moments1D::new(m, sigma_q)?);
    let kind = WitnessKind::VanishingSequenceElement;

    if sigma_p == sigma_q {
        let d = dist(&[(m - sigma_p, 0.5), (m + sigma_p, 0.5)])?;
        return WitnessPair::verified(kind, d.clone(), d, 0.0, &targets);
    }

    let (big, small) = if sigma_p > sigma_q { (sigma_p, sigma_q) } else { (sigma_q, sigma_p) };
    let kf = k as f64;
    let outer_mass = 1.0 / (2.0 * kf);
    let inner_mass = 0.5 - outer_mass;
    let reach = ((big * big - small * small) * kf + small * small).sqrt();

    let wide = dist(&[
        (m - reach, outer_mass),
        (m - small, inner_mass),
        (m + small, inner_mass),
        (m + reach, outer_mass),
    ])?;
    let narrow = dist(&[
        (m - reach, 0.0),
        (m - small, 0.5),
        (m + small, 0.5),
        (m + reach, 0.0),
    ])?;
    let (p_dist, q_dist) = if sigma_p > sigma_q { (wide, narrow) } else { (narrow, wide) };
    WitnessPair::verified(kind, p_dist, q_dist, 1.0 / kf, &targets)
}
