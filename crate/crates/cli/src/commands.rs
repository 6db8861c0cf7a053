use std::path::Path;

use serde::{Deserialize, Serialize};
use tvbound::{
    check_nd_bound_random, construct_case_c_witness, construct_tight_witness, construct_two_point,
    construct_vanishing_sequence, minimize_tv_on_grid, tv_lower_bound_1d, tv_lower_bound_nd,
    BoundReport1D, Error, Execution, GridSpec, MomentPair1D, MomentPairND, MomentsND,
    OracleResult, OracleStatus, WitnessPair,
};

use crate::output::{csv, csv_row, json, witness_csv};
use crate::{Format, GridArgs, MomentArgs, SweepArgs, SweepParam};

/// LP optimum below the closed form by more than this fails verification.
const SOUNDNESS_TOL: f64 = 1e-8;
/// LP optimum within this of the closed form is reported as tight.
const TIGHTNESS_TOL: f64 = 1e-6;
const MAX_SWEEP_ROWS: usize = 1_000_000;

#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Verification { message: String, report: String },
    Numeric { message: String, report: String },
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Verification { .. } => 2,
            Failure::Numeric { .. } => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) => m,
            Failure::Verification { message, .. } | Failure::Numeric { message, .. } => message,
        }
    }

    pub fn report(&self) -> Option<&str> {
        match self {
            Failure::Invalid(_) => None,
            Failure::Verification { report, .. } | Failure::Numeric { report, .. } => Some(report),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn pair_of(m: MomentArgs) -> Result<MomentPair1D, Failure> {
    Ok(MomentPair1D::from_scalars(m.mp, m.sp, m.mq, m.sq)?)
}

pub fn bound(m: MomentArgs, format: Format) -> Outcome {
    let r = BoundReport1D::compute(&pair_of(m)?);
    Ok(match format {
        Format::Json => json(&r),
        Format::Csv => csv(
            &[
                "gap_a",
                "radical_v",
                "tight_bound",
                "attained",
                "two_point_tv",
                "sibling_branch_tv",
                "sibling_branch_valid",
                "anchored_p_tv",
                "anchored_q_tv",
            ],
            [csv_row(&[
                &r.gap_a,
                &r.radical_v,
                &r.tight_bound,
                &r.attained,
                &r.two_point_tv,
                &r.sibling_branch_tv,
                &r.sibling_branch_valid,
                &r.anchored_p_tv,
                &r.anchored_q_tv,
            ])],
        ),
    })
}

fn emit_witness(w: &WitnessPair, format: Format) -> String {
    match format {
        Format::Json => json(w),
        Format::Csv => witness_csv(w),
    }
}

pub fn witness(m: MomentArgs, format: Format) -> Outcome {
    Ok(emit_witness(&construct_tight_witness(&pair_of(m)?)?, format))
}

pub fn two_point(m: MomentArgs, format: Format) -> Outcome {
    Ok(emit_witness(&construct_two_point(&pair_of(m)?)?, format))
}

pub fn case_c(m: MomentArgs, q_param: f64, format: Format) -> Outcome {
    Ok(emit_witness(&construct_case_c_witness(&pair_of(m)?, q_param)?, format))
}

pub fn sequence(mp: f64, sp: f64, mq: Option<f64>, sq: f64, k: u64, format: Format) -> Outcome {
    if let Some(mq) = mq {
        if mq != mp {
            return Err(Failure::Invalid(format!(
                "the sequence has equal means; --mq {mq} differs from --mp {mp}"
            )));
        }
    }
    Ok(emit_witness(&construct_vanishing_sequence(mp, sp, sq, k)?, format))
}

#[derive(Serialize)]
struct GridSummary {
    lo: f64,
    hi: f64,
    count: usize,
    include_witness: bool,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    oracle: &'a OracleResult,
    grid: GridSummary,
    bound: f64,
    difference: Option<f64>,
    verdict: &'static str,
}

fn grid_spec(pair: &MomentPair1D, g: &GridArgs) -> Result<GridSpec, Failure> {
    let default = GridSpec::default_for(pair);
    let spec = GridSpec::new(
        g.grid_lo.unwrap_or(default.lo),
        g.grid_hi.unwrap_or(default.hi),
        g.grid_n.unwrap_or(default.count),
    );
    if spec.count < 2 {
        return Err(Failure::Invalid(format!("--grid-n must be at least 2, got {}", spec.count)));
    }
    Ok(spec)
}

pub fn verify(m: MomentArgs, g: &GridArgs, format: Format) -> Outcome {
    let pair = pair_of(m)?;
    let spec = grid_spec(&pair, g)?;
    let result = minimize_tv_on_grid(&pair, &spec, g.include_witness)?;
    let bound = tv_lower_bound_1d(&pair);
    let difference = result.tv_min.map(|tv| tv - bound);
    let verdict = match (result.status, difference) {
        (OracleStatus::Optimal, Some(d)) if d < -SOUNDNESS_TOL => "fail",
        (OracleStatus::Optimal, Some(d)) if d <= TIGHTNESS_TOL => "tight",
        (OracleStatus::Optimal, _) => "sound",
        (OracleStatus::Infeasible, _) => "infeasible",
        (OracleStatus::NumericFailure, _) => "numeric_failure",
    };
    let report = VerifyReport {
        oracle: &result,
        grid: GridSummary { lo: spec.lo, hi: spec.hi, count: spec.count, include_witness: g.include_witness },
        bound,
        difference,
        verdict,
    };
    let text = match format {
        Format::Json => json(&report),
        Format::Csv => csv(
            &["status", "tv_min", "bound", "difference", "verdict", "iterations"],
            [csv_row(&[
                &format!("{:?}", result.status).as_str(),
                &result.tv_min,
                &bound,
                &difference,
                &verdict,
                &result.iterations,
            ])],
        ),
    };
    match verdict {
        "fail" => Err(Failure::Verification {
            message: format!("LP optimum {:?} is below the bound {bound}", result.tv_min),
            report: text,
        }),
        "infeasible" => Err(Failure::Invalid(
            "the grid cannot realize the requested moments; widen or refine it".into(),
        )),
        "numeric_failure" => Err(Failure::Numeric {
            message: format!("LP solver failed after {} iterations", result.iterations),
            report: text,
        }),
        _ => Ok(text),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NdInput {
    mean_p: Vec<f64>,
    cov_p: Vec<Vec<f64>>,
    mean_q: Vec<f64>,
    cov_q: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct NdBoundReport {
    dim: usize,
    gap_norm_sq: f64,
    trace_p: f64,
    trace_q: f64,
    bound: f64,
}

pub fn nd_bound(path: &Path, format: Format) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let input: NdInput = serde_json::from_str(&text)
        .map_err(|e| Failure::Invalid(format!("malformed moments file {}: {e}", path.display())))?;
    let pair = MomentPairND::new(
        MomentsND::new(input.mean_p, input.cov_p)?,
        MomentsND::new(input.mean_q, input.cov_q)?,
    )?;
    let r = NdBoundReport {
        dim: pair.dim(),
        gap_norm_sq: pair.gap_norm_sq(),
        trace_p: pair.p_side().trace(),
        trace_q: pair.q_side().trace(),
        bound: tv_lower_bound_nd(&pair),
    };
    Ok(match format {
        Format::Json => json(&r),
        Format::Csv => csv(
            &["dim", "gap_norm_sq", "trace_p", "trace_q", "bound"],
            [csv_row(&[&r.dim, &r.gap_norm_sq, &r.trace_p, &r.trace_q, &r.bound])],
        ),
    })
}

#[derive(Serialize)]
struct NdCheckReport {
    dims: usize,
    atoms: usize,
    trials: usize,
    seed: u64,
    violations: usize,
}

pub fn nd_check(dims: usize, atoms: Option<usize>, trials: usize, seed: u64, format: Format) -> Outcome {
    let atoms = atoms.unwrap_or(2 * dims + 2);
    let violations = check_nd_bound_random(dims, atoms, trials, seed)?;
    let r = NdCheckReport { dims, atoms, trials, seed, violations };
    let text = match format {
        Format::Json => json(&r),
        Format::Csv => csv(
            &["dims", "atoms", "trials", "seed", "violations"],
            [csv_row(&[&dims, &atoms, &trials, &seed, &violations])],
        ),
    };
    if violations > 0 {
        return Err(Failure::Verification {
            message: format!("{violations} of {trials} trials violate the bound"),
            report: text,
        });
    }
    Ok(text)
}

impl SweepParam {
    fn name(self) -> &'static str {
        match self {
            SweepParam::Mp => "mp",
            SweepParam::Sp => "sp",
            SweepParam::Mq => "mq",
            SweepParam::Sq => "sq",
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    param: &'static str,
    value: f64,
    a: f64,
    v: f64,
    tight_bound: f64,
    two_point_tv: Option<f64>,
    anchored_p_tv: Option<f64>,
    anchored_q_tv: Option<f64>,
}

fn sweep_values(from: f64, to: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) || step <= 0.0 || to < from {
        return Err(Failure::Invalid(format!(
            "sweep needs finite --from <= --to and --step > 0, got {from}..{to} by {step}"
        )));
    }
    // tolerate round-off so that the endpoint is included
    let steps = ((to - from) / step * (1.0 + 1e-12)).floor();
    if steps >= MAX_SWEEP_ROWS as f64 {
        return Err(Failure::Invalid(format!("sweep would produce more than {MAX_SWEEP_ROWS} rows")));
    }
    Ok((0..=steps as usize).map(|i| from + i as f64 * step).collect())
}

pub fn sweep(args: SweepArgs, format: Format) -> Outcome {
    let values = sweep_values(args.from, args.to, args.step)?;
    let base = |flag: &str, given: Option<f64>, swept: bool| -> Result<f64, Failure> {
        match (given, swept) {
            (_, true) => Ok(f64::NAN),
            (Some(v), false) => Ok(v),
            (None, false) => Err(Failure::Invalid(format!("sweep needs --{flag}"))),
        }
    };
    let p = args.param;
    let fixed = MomentArgs {
        mp: base("mp", args.mp, p == SweepParam::Mp)?,
        sp: base("sp", args.sp, p == SweepParam::Sp)?,
        mq: base("mq", args.mq, p == SweepParam::Mq)?,
        sq: base("sq", args.sq, p == SweepParam::Sq)?,
    };
    let rows = Execution::default().map_slice(&values, |&x| {
        let mut m = fixed;
        match p {
            SweepParam::Mp => m.mp = x,
            SweepParam::Sp => m.sp = x,
            SweepParam::Mq => m.mq = x,
            SweepParam::Sq => m.sq = x,
        }
        let r = BoundReport1D::compute(&pair_of(m)?);
        Ok::<_, Failure>(SweepRow {
            param: p.name(),
            value: x,
            a: r.gap_a,
            v: r.radical_v,
            tight_bound: r.tight_bound,
            two_point_tv: r.two_point_tv,
            anchored_p_tv: r.anchored_p_tv,
            anchored_q_tv: r.anchored_q_tv,
        })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(match format {
        Format::Json => json(&rows),
        Format::Csv => csv(
            &[p.name(), "a", "v", "tight_bound", "two_point_tv", "anchored_p_tv", "anchored_q_tv"],
            rows.iter().map(|r| {
                csv_row(&[&r.value, &r.a, &r.v, &r.tight_bound, &r.two_point_tv, &r.anchored_p_tv, &r.anchored_q_tv])
            }),
        ),
    })
}
