//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so that timings are not disturbed by concurrently running tests.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{gaussian_tv_quadrature, pair, ConfigStream};
use tvbound::{
    anchored_tv, check_moments, check_nd_bound_random, construct_tight_witness,
    construct_vanishing_sequence, minimize_tv_batch, minimize_tv_on_grid, sibling_branch_tv,
    tv_distance, tv_lower_bound_1d, tv_lower_bound_nd, two_point_tv, Anchor, Execution, GridSpec,
    MomentPair1D, MomentPairND, Moments1D, MomentsND, OracleStatus,
};

struct Outcome {
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new(), detail: String::new() }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

type Check = fn() -> (Outcome, Duration);

fn timed<F: FnOnce(&mut Outcome)>(f: F) -> (Outcome, Duration) {
    let mut out = Outcome::new();
    let start = Instant::now();
    f(&mut out);
    (out, start.elapsed())
}

fn witness_round_trip(out: &mut Outcome, pr: &MomentPair1D) -> f64 {
    let bound = tv_lower_bound_1d(pr);
    match construct_tight_witness(pr) {
        Ok(w) => {
            let tv = tv_distance(&w.p_dist, &w.q_dist);
            out.require((tv - bound).abs() <= 1e-12, || format!("{pr:?}: tv {tv} vs bound {bound}"));
            out.require(check_moments(&w.p_dist, pr.p_side(), 1e-9), || format!("{pr:?}: P moments"));
            out.require(check_moments(&w.q_dist, pr.q_side(), 1e-9), || format!("{pr:?}: Q moments"));
            (tv - bound).abs()
        }
        Err(e) => {
            out.require(false, || format!("{pr:?}: {e}"));
            f64::NAN
        }
    }
}

fn criterion_1() -> (Outcome, Duration) {
    let pr = pair(1.0, 1.0, 0.0, 1.0);
    let (mut out, elapsed) = timed(|out| {
        let bound = tv_lower_bound_1d(&pr);
        out.require(bound == 0.2, || format!("bound {bound}"));
        let w = construct_tight_witness(&pr).expect("witness");
        let (p, q) = (w.p_dist.compact(), w.q_dist.compact());
        out.require(p.support() == [0.5, 3.0] && p.probs() == [0.8, 0.2], || format!("P = {p:?}"));
        out.require(q.support() == [-2.0, 0.5] && q.probs() == [0.2, 0.8], || format!("Q = {q:?}"));
        witness_round_trip(out, &pr);
    });
    out.require(elapsed < Duration::from_millis(1), || format!("took {elapsed:?}"));
    // LP cross-check, outside the timed section
    let lp = minimize_tv_on_grid(&pr, &GridSpec::new(-6.0, 6.0, 121), true).expect("grid");
    let tv = lp.tv_min.unwrap_or(f64::NAN);
    out.require((tv - 0.2).abs() <= 1e-6, || format!("LP optimum {tv}"));
    out.detail = format!("LP cross-check {tv:.12}");
    (out, elapsed)
}

fn criterion_2() -> (Outcome, Duration) {
    let mut stream = ConfigStream::new(2);
    let configs: Vec<MomentPair1D> = (0..200)
        .map(|_| {
            let pr = stream.config(0.1, 5.0, 0.0, 3.0);
            // exercise the point-mass branches too
            let sp = if stream.coin(0.1) { 0.0 } else { pr.p_side().stddev() };
            let sq = if stream.coin(0.1) { 0.0 } else { pr.q_side().stddev() };
            pair(pr.p_side().mean(), sp, pr.q_side().mean(), sq)
        })
        .collect();
    let (mut out, elapsed) = timed(|out| {
        let worst = configs.iter().map(|pr| witness_round_trip(out, pr)).fold(0.0, f64::max);
        out.detail = format!("max |tv - bound| {worst:.1e}");
    });
    out.require(elapsed < Duration::from_millis(100), || format!("took {elapsed:?}"));
    (out, elapsed)
}

/// Deviations stay well above the default grid spacing so that every plain
/// grid is feasible.
fn lp_configs() -> Vec<MomentPair1D> {
    let mut stream = ConfigStream::new(3);
    (0..10).map(|_| stream.config(0.1, 5.0, 0.5, 3.0)).collect()
}

fn lp_criterion(include_witness_points: bool) -> (Outcome, Duration) {
    let jobs: Vec<_> = lp_configs().into_iter().map(|pr| (pr, GridSpec::default_for(&pr))).collect();
    let (mut out, elapsed) = timed(|out| {
        let results = minimize_tv_batch(&jobs, include_witness_points, Execution::default());
        let mut worst = 0.0f64;
        for ((pr, _), r) in jobs.iter().zip(results) {
            let bound = tv_lower_bound_1d(pr);
            let r = match r {
                Ok(r) if r.status == OracleStatus::Optimal => r,
                other => {
                    out.require(false, || format!("{pr:?}: {other:?}"));
                    continue;
                }
            };
            let tv = r.tv_min.expect("optimal carries a value");
            if include_witness_points {
                worst = worst.max((tv - bound).abs());
                out.require((tv - bound).abs() <= 1e-6, || format!("{pr:?}: {tv} vs {bound}"));
            } else {
                worst = worst.max(bound - tv);
                out.require(tv >= bound - 1e-8, || format!("{pr:?}: {tv} below {bound}"));
            }
        }
        out.detail = if include_witness_points {
            format!("max |tv_min - bound| {worst:.1e}")
        } else {
            format!("max (bound - tv_min) {worst:.1e}")
        };
    });
    out.require(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"));
    (out, elapsed)
}

fn criterion_5() -> (Outcome, Duration) {
    let mut stream = ConfigStream::new(5);
    let configs: Vec<_> = (0..1000).map(|_| stream.config(0.1, 5.0, 0.05, 3.0)).collect();
    let (mut out, elapsed) = timed(|out| {
        for pr in &configs {
            let bound = tv_lower_bound_1d(pr);
            let two = two_point_tv(pr).expect("distinct means");
            let ap = anchored_tv(pr, Anchor::PAnchored).expect("positive deviations");
            let aq = anchored_tv(pr, Anchor::QAnchored).expect("positive deviations");
            let sib = sibling_branch_tv(pr).expect("distinct means").value;
            out.require(two > bound, || format!("{pr:?}: two-point {two} <= {bound}"));
            out.require(ap > bound, || format!("{pr:?}: P-anchored {ap} <= {bound}"));
            out.require(aq > bound, || format!("{pr:?}: Q-anchored {aq} <= {bound}"));
            out.require(sib >= bound, || format!("{pr:?}: sibling {sib} < {bound}"));
        }
        out.detail = format!("{} configs", configs.len());
    });
    out.require(elapsed < Duration::from_millis(100), || format!("took {elapsed:?}"));
    (out, elapsed)
}

fn criterion_6() -> (Outcome, Duration) {
    let mut stream = ConfigStream::new(6);
    let configs: Vec<_> = (0..1000)
        .map(|_| {
            let pr = stream.config(0.0, 5.0, 0.0, 3.0);
            if stream.coin(0.05) {
                pair(pr.q_side().mean(), pr.p_side().stddev(), pr.q_side().mean(), pr.q_side().stddev())
            } else {
                pr
            }
        })
        .collect();
    let (mut out, elapsed) = timed(|out| {
        let mut worst = f64::NEG_INFINITY;
        for pr in &configs {
            let nd = MomentPairND::new(MomentsND::from_1d(pr.p_side()), MomentsND::from_1d(pr.q_side()))
                .expect("same dimension");
            let (lhs, rhs) = (tv_lower_bound_nd(&nd), tv_lower_bound_1d(pr));
            worst = worst.max(lhs - rhs);
            out.require(lhs <= rhs + 1e-12, || format!("{pr:?}: {lhs} > {rhs}"));
        }
        out.detail = format!("max (nd - 1d) {worst:.1e}");
    });
    out.require(elapsed < Duration::from_millis(100), || format!("took {elapsed:?}"));
    (out, elapsed)
}

fn criterion_7() -> (Outcome, Duration) {
    let (mut out, elapsed) = timed(|out| {
        let mut counts = Vec::new();
        for (d, atoms, seed) in [(2, 6, 42), (3, 8, 43)] {
            match check_nd_bound_random(d, atoms, 10_000, seed) {
                Ok(v) => {
                    out.require(v == 0, || format!("d={d}: {v} violations"));
                    counts.push(format!("d={d}: {v}"));
                }
                Err(e) => out.require(false, || format!("d={d}: {e}")),
            }
        }
        out.detail = format!("violations {}", counts.join(", "));
    });
    out.require(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"));
    (out, elapsed)
}

fn criterion_8() -> (Outcome, Duration) {
    let targets = (Moments1D::new(0.0, 2.0).unwrap(), Moments1D::new(0.0, 1.0).unwrap());
    let (mut out, elapsed) = timed(|out| {
        for k in [2u64, 10, 100, 1_000_000] {
            let w = match construct_vanishing_sequence(0.0, 2.0, 1.0, k) {
                Ok(w) => w,
                Err(e) => {
                    out.require(false, || format!("k={k}: {e}"));
                    continue;
                }
            };
            let tv = tv_distance(&w.p_dist, &w.q_dist);
            out.require(w.claimed_tv == 1.0 / k as f64, || format!("k={k}: claimed {}", w.claimed_tv));
            out.require((tv - w.claimed_tv).abs() <= 1e-15, || format!("k={k}: tv {tv}"));
            out.require(check_moments(&w.p_dist, targets.0, 1e-9), || format!("k={k}: P moments"));
            out.require(check_moments(&w.q_dist, targets.1, 1e-9), || format!("k={k}: Q moments"));
        }
        out.detail = "k = 2, 10, 100, 1e6".into();
    });
    out.require(elapsed < Duration::from_millis(10), || format!("took {elapsed:?}"));
    (out, elapsed)
}

fn criterion_9() -> (Outcome, Duration) {
    let mut stream = ConfigStream::new(9);
    let configs: Vec<_> = (0..100).map(|_| stream.config(0.0, 5.0, 0.1, 3.0)).collect();
    let (mut out, elapsed) = timed(|out| {
        let mut margin = f64::INFINITY;
        for pr in &configs {
            let (p, q) = (pr.p_side(), pr.q_side());
            let tv = gaussian_tv_quadrature(p.mean(), p.stddev(), q.mean(), q.stddev(), 1e-10);
            let bound = tv_lower_bound_1d(pr);
            margin = margin.min(tv - bound);
            out.require(tv >= bound - 1e-8, || format!("{pr:?}: gaussian tv {tv} < {bound}"));
        }
        let tv = gaussian_tv_quadrature(1.0, 1.0, 0.0, 1.0, 1e-10);
        out.require((tv - 0.382_924_9).abs() < 5e-8, || format!("reference gaussian tv {tv}"));
        out.require(tv >= 0.2, || format!("reference gaussian tv {tv} below 0.2"));
        out.detail = format!("reference {tv:.10}, min margin {margin:.3e}");
    });
    out.require(elapsed < Duration::from_secs(2), || format!("took {elapsed:?}"));
    (out, elapsed)
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("tightness at the reference pair", criterion_1),
        ("randomized tightness sweep", criterion_2),
        ("LP attainment with witness points", || lp_criterion(true)),
        ("LP soundness floor on plain grids", || lp_criterion(false)),
        ("ordering of candidate values", criterion_5),
        ("dimension-1 dominance", criterion_6),
        ("multivariate bound property check", criterion_7),
        ("vanishing sequence", criterion_8),
        ("gaussian sanity", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (out, elapsed) = run();
        let verdict = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict}: {name} ({}; {elapsed:.3?})", i + 1, out.detail);
        for f in out.failures.iter().take(5) {
            println!("    {f}");
        }
        failed += usize::from(!out.failures.is_empty());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
