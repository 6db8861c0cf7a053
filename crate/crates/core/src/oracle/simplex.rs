//! Dense two-phase tableau simplex for `min c^T x  s.t.  A x = b, x >= 0`.
//!
//! Bland's rule picks the entering column; the leaving row comes from a
//! two-pass ratio test that prefers large pivot elements. Rows whose right-hand side is negative are
//! negated; rows that already contain a `+1` unit column start with it in
//! the basis, and every other row gets an artificial variable. After Phase 1
//! the basic solution is recomputed from the original data by a direct
//! solve, so the returned point does not carry the accumulated round-off of
//! the tableau updates.

pub const PIVOT_TOL: f64 = 1e-11;
pub const REDUCED_COST_TOL: f64 = 1e-9;
pub const PHASE1_TOL: f64 = 1e-9;
/// Primal slack allowed by the ratio test.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Iteration cap is `ITERATION_FACTOR * (rows + columns)`.
pub const ITERATION_FACTOR: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    /// The final basis could not be re-solved against the original data.
    SingularBasis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSolution {
    pub status: SimplexStatus,
    /// Primal point, present only when `status == Optimal`.
    pub x: Option<Vec<f64>>,
    pub iterations: usize,
}

struct Tableau {
    /// `rows + 1` rows (last is the cost row) of `cols + 1` entries (last is
    /// the right-hand side).
    data: Vec<f64>,
    rows: usize,
    width: usize,
    basis: Vec<usize>,
    active: Vec<bool>,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    #[inline]
    fn rhs(&self, r: usize) -> f64 {
        self.data[r * self.width + self.width - 1]
    }

    fn cost_row(&mut self) -> &mut [f64] {
        let start = self.rows * self.width;
        &mut self.data[start..start + self.width]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let inv = 1.0 / self.at(pr, pc);
        for v in &mut self.data[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        let (before, rest) = self.data.split_at_mut(pr * w);
        let (pivot_row, after) = rest.split_at_mut(w);
        let eliminate = |row: &mut [f64]| {
            let f = row[pc];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * p;
                }
                row[pc] = 0.0;
            }
        };
        before.chunks_exact_mut(w).for_each(eliminate);
        after.chunks_exact_mut(w).for_each(eliminate);
        self.basis[pr] = pc;
    }

    /// Bland: lowest-index column with negative reduced cost among
    /// `0..limit`.
    fn entering(&self, limit: usize) -> Option<usize> {
        let base = self.rows * self.width;
        (0..limit).find(|&j| self.data[base + j] < -REDUCED_COST_TOL)
    }

    /// Two-pass ratio test. The first pass bounds the step with every basic
    /// variable allowed to dip `FEASIBILITY_TOL` below zero; the second picks,
    /// among rows within that bound, the largest pivot element (ties to the
    /// lowest basic index). Degenerate rows with tiny entries therefore never
    /// become pivots.
    fn leaving(&self, col: usize) -> Option<usize> {
        let candidates = || {
            (0..self.rows)
                .filter(|&r| self.active[r])
                .map(move |r| (r, self.at(r, col)))
                .filter(|&(_, a)| a > PIVOT_TOL)
        };
        let bound = candidates()
            .map(|(r, a)| (self.rhs(r).max(0.0) + FEASIBILITY_TOL) / a)
            .min_by(f64::total_cmp)?;
        let mut best: Option<(usize, f64)> = None;
        for (r, a) in candidates() {
            if self.rhs(r).max(0.0) / a > bound {
                continue;
            }
            best = match best {
                Some((br, ba)) if ba > a || (ba == a && self.basis[br] < self.basis[r]) => Some((br, ba)),
                _ => Some((r, a)),
            };
        }
        best.map(|(r, _)| r)
    }

    /// Runs simplex iterations until optimal, unbounded, or out of budget.
    fn run(&mut self, limit: usize, iterations: &mut usize, cap: usize) -> SimplexStatus {
        loop {
            let Some(col) = self.entering(limit) else {
                return SimplexStatus::Optimal;
            };
            let Some(row) = self.leaving(col) else {
                return SimplexStatus::Unbounded;
            };
            if *iterations >= cap {
                return SimplexStatus::IterationLimit;
            }
            self.pivot(row, col);
            *iterations += 1;
        }
    }
}

/// Solves `min c^T x` subject to `A x = b`, `x >= 0`.
///
/// `a` is row-major with one `Vec` per constraint.
pub fn solve_standard_form(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> SimplexSolution {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "rhs length must match row count");
    assert!(a.iter().all(|row| row.len() == n), "every row needs one entry per column");

    // Equilibrate: each row scaled by its largest coefficient, sign chosen
    // so the right-hand side is non-negative.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (row, &bi) in a.iter().zip(b) {
        let scale = row.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let scale = if scale > 0.0 { scale } else { 1.0 };
        let sign = if bi < 0.0 { -1.0 } else { 1.0 };
        rows.push(row.iter().map(|v| sign * v / scale).collect());
        rhs.push(sign * bi / scale);
    }

    // Unit columns give a starting basis for free.
    let mut basis = vec![usize::MAX; m];
    for j in 0..n {
        let mut hit = None;
        let mut unit = true;
        for (r, row) in rows.iter().enumerate() {
            let v = row[j];
            if v == 0.0 {
                continue;
            }
            if v == 1.0 && hit.is_none() {
                hit = Some(r);
            } else {
                unit = false;
                break;
            }
        }
        if let (true, Some(r)) = (unit, hit) {
            if basis[r] == usize::MAX {
                basis[r] = j;
            }
        }
    }
    let artificial_rows: Vec<usize> = (0..m).filter(|&r| basis[r] == usize::MAX).collect();
    let n_art = artificial_rows.len();
    let total = n + n_art;
    let width = total + 1;

    let mut data = vec![0.0; (m + 1) * width];
    for r in 0..m {
        data[r * width..r * width + n].copy_from_slice(&rows[r]);
        data[r * width + total] = rhs[r];
    }
    for (k, &r) in artificial_rows.iter().enumerate() {
        data[r * width + n + k] = 1.0;
        basis[r] = n + k;
    }
    let mut t = Tableau { data, rows: m, width, basis, active: vec![true; m] };

    let cap = ITERATION_FACTOR * (m + n);
    let mut iterations = 0;

    // Phase 1: minimize the sum of artificials.
    if n_art > 0 {
        {
            let cost = t.cost_row();
            cost.iter_mut().for_each(|v| *v = 0.0);
        }
        for &r in &artificial_rows {
            for j in 0..width {
                let v = t.data[r * width + j];
                t.data[m * width + j] -= v;
            }
        }
        for k in 0..n_art {
            t.data[m * width + n + k] = 0.0;
        }
        match t.run(n, &mut iterations, cap) {
            SimplexStatus::Optimal => {}
            other => return SimplexSolution { status: other, x: None, iterations },
        }
        let infeasibility = -t.data[m * width + total];
        if infeasibility > PHASE1_TOL {
            return SimplexSolution { status: SimplexStatus::Infeasible, x: None, iterations };
        }
        // Drive remaining artificials out of the basis; a row with no usable
        // pivot is redundant.
        for r in 0..m {
            if t.basis[r] < n {
                continue;
            }
            let best = (0..n).max_by(|&i, &j| t.at(r, i).abs().total_cmp(&t.at(r, j).abs()));
            match best.filter(|&j| t.at(r, j).abs() > 1e-9) {
                Some(j) => {
                    t.pivot(r, j);
                    iterations += 1;
                }
                None => t.active[r] = false,
            }
        }
    }

    // Phase 2 cost row: reduced costs of the original objective.
    {
        let cost = t.cost_row();
        cost.iter_mut().for_each(|v| *v = 0.0);
        cost[..n].copy_from_slice(c);
    }
    for r in 0..m {
        if !t.active[r] {
            continue;
        }
        let cb = c[t.basis[r]];
        if cb != 0.0 {
            for j in 0..width {
                let v = t.data[r * width + j];
                t.data[m * width + j] -= cb * v;
            }
        }
    }
    match t.run(n, &mut iterations, cap) {
        SimplexStatus::Optimal => {}
        other => return SimplexSolution { status: other, x: None, iterations },
    }

    let kept: Vec<usize> = (0..m).filter(|&r| t.active[r]).collect();
    let cols: Vec<usize> = kept.iter().map(|&r| t.basis[r]).collect();
    let x = match refine_basic_solution(&rows, &rhs, &kept, &cols, n) {
        Some(x) => x,
        None => {
            return SimplexSolution { status: SimplexStatus::SingularBasis, x: None, iterations }
        }
    };
    SimplexSolution { status: SimplexStatus::Optimal, x: Some(x), iterations }
}

/// Solves `B x_B = b` for the basis columns using the (scaled) original rows,
/// with partial pivoting. Non-basic entries are zero; tiny negatives are
/// clamped.
fn refine_basic_solution(
    rows: &[Vec<f64>],
    rhs: &[f64],
    kept: &[usize],
    cols: &[usize],
    n: usize,
) -> Option<Vec<f64>> {
    let k = kept.len();
    let mut mat: Vec<Vec<f64>> = kept
        .iter()
        .map(|&r| {
            let mut row: Vec<f64> = cols.iter().map(|&j| rows[r][j]).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| mat[i][col].abs().total_cmp(&mat[j][col].abs()))?;
        if mat[piv][col].abs() < 1e-14 {
            return None;
        }
        mat.swap(col, piv);
        let pivot_row = mat[col].clone();
        for row in mat.iter_mut().skip(col + 1) {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *v -= f * p;
                }
            }
        }
    }
    let mut xb = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = mat[i][k];
        for j in (i + 1)..k {
            s -= mat[i][j] * xb[j];
        }
        xb[i] = s / mat[i][i];
    }
    let mut x = vec![0.0; n];
    for (&j, &v) in cols.iter().zip(&xb) {
        x[j] = v.max(0.0);
    }
    Some(x)
}
