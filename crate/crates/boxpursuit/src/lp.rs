//! Dense linear programming engine.
//!
//! A two-phase primal simplex over the standard form `min c·y, Ey = d,
//! y >= 0`. General problems (equalities, inequalities, one- or two-sided
//! or absent variable bounds) are reduced to standard form by shifting,
//! mirroring and splitting variables; rows are equilibrated before the
//! solve. Dantzig pricing switches to Bland's rule after `5(m+n)`
//! iterations so cycling cannot occur. Infeasibility is only reported
//! after the phase-one Farkas certificate re-verifies against the
//! original (scaled) data.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Feasibility tolerance on row-equilibrated data.
pub const FEAS_TOL: f64 = 1e-9;
/// Objective tolerance on row-equilibrated data.
pub const OBJ_TOL: f64 = 1e-8;

const PIVOT_EPS: f64 = 1e-11;
const PRICE_EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid bounds for variable {var}: lower {lower} > upper {upper}")]
    InvalidBounds { var: usize, lower: f64, upper: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("optimal-face query is infeasible at value {v}")]
    EmptyFace { v: f64 },
}

/// `min c·x` subject to `A_eq x = b_eq`, `A_ineq x <= b_ineq` and
/// componentwise bounds (`None` = that side unbounded).
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: DVector<f64>,
    pub a_eq: DMatrix<f64>,
    pub b_eq: DVector<f64>,
    pub a_ineq: DMatrix<f64>,
    pub b_ineq: DVector<f64>,
    pub bounds: Vec<(Option<f64>, Option<f64>)>,
}

impl LpProblem {
    /// A problem with the given objective, no constraints and free variables.
    pub fn new(objective: DVector<f64>) -> Self {
        let n = objective.len();
        LpProblem {
            objective,
            a_eq: DMatrix::zeros(0, n),
            b_eq: DVector::zeros(0),
            a_ineq: DMatrix::zeros(0, n),
            b_ineq: DVector::zeros(0),
            bounds: vec![(None, None); n],
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_equalities(&mut self, a: DMatrix<f64>, b: DVector<f64>) {
        self.a_eq = a;
        self.b_eq = b;
    }

    pub fn push_inequality(&mut self, row: DVector<f64>, rhs: f64) {
        let n = self.n_vars();
        let mut a = DMatrix::zeros(self.a_ineq.nrows() + 1, n);
        a.view_mut((0, 0), (self.a_ineq.nrows(), n))
            .copy_from(&self.a_ineq);
        a.row_mut(self.a_ineq.nrows()).copy_from(&row.transpose());
        let mut b = DVector::zeros(self.b_ineq.len() + 1);
        b.rows_mut(0, self.b_ineq.len()).copy_from(&self.b_ineq);
        b[self.b_ineq.len()] = rhs;
        self.a_ineq = a;
        self.b_ineq = b;
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.n_vars();
        if self.a_eq.nrows() != self.b_eq.len() || (self.a_eq.nrows() > 0 && self.a_eq.ncols() != n)
        {
            return Err(LpError::DimensionMismatch(format!(
                "equalities are {}x{} with rhs length {}, objective has {} variables",
                self.a_eq.nrows(),
                self.a_eq.ncols(),
                self.b_eq.len(),
                n
            )));
        }
        if self.a_ineq.nrows() != self.b_ineq.len()
            || (self.a_ineq.nrows() > 0 && self.a_ineq.ncols() != n)
        {
            return Err(LpError::DimensionMismatch(format!(
                "inequalities are {}x{} with rhs length {}, objective has {} variables",
                self.a_ineq.nrows(),
                self.a_ineq.ncols(),
                self.b_ineq.len(),
                n
            )));
        }
        if self.bounds.len() != n {
            return Err(LpError::DimensionMismatch(format!(
                "{} bound pairs for {} variables",
                self.bounds.len(),
                n
            )));
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if let (Some(l), Some(u)) = (lo, hi) {
                if l > u {
                    return Err(LpError::InvalidBounds {
                        var: j,
                        lower: l,
                        upper: u,
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    /// Feasible point (Optimal and Unbounded); zeros when Infeasible.
    pub x: DVector<f64>,
    pub objective: f64,
    /// Feasible direction with negative objective slope when Unbounded.
    pub ray: Option<DVector<f64>>,
}

pub fn lp_solve(p: &LpProblem) -> Result<LpResult, LpError> {
    p.validate()?;
    match solve_once(p, false) {
        Err(LpError::NumericalFailure(_)) => solve_once(p, true),
        other => other,
    }
}

/// Phase one only: is any point feasible within `FEAS_TOL`?
pub fn lp_feasible(p: &LpProblem) -> Result<bool, LpError> {
    p.validate()?;
    let mut q = p.clone();
    q.objective.fill(0.0);
    Ok(lp_solve(&q)?.status != LpStatus::Infeasible)
}

/// Min and max of `w·x` over the near-optimal face
/// `{x feasible : c·x <= v_opt + OBJ_TOL}`. An unbounded side is +-inf.
pub fn functional_range_on_optimal_face(
    p: &LpProblem,
    v_opt: f64,
    w: &DVector<f64>,
) -> Result<(f64, f64), LpError> {
    if w.len() != p.n_vars() {
        return Err(LpError::DimensionMismatch(format!(
            "functional has {} entries, problem has {} variables",
            w.len(),
            p.n_vars()
        )));
    }
    let mut face = p.clone();
    face.push_inequality(p.objective.clone(), v_opt + OBJ_TOL);

    let mut solve_direction = |obj: DVector<f64>| -> Result<Option<f64>, LpError> {
        face.objective = obj;
        let r = lp_solve(&face)?;
        match r.status {
            LpStatus::Optimal => Ok(Some(r.objective)),
            LpStatus::Unbounded => Ok(None),
            LpStatus::Infeasible => Err(LpError::EmptyFace { v: v_opt }),
        }
    };

    let lo = solve_direction(w.clone())?.unwrap_or(f64::NEG_INFINITY);
    let hi = match solve_direction(-w)? {
        Some(v) => -v,
        None => f64::INFINITY,
    };
    Ok((lo, hi))
}

/// Range of the single coordinate `x_j` over the near-optimal face.
pub fn coordinate_range_on_optimal_face(
    p: &LpProblem,
    v_opt: f64,
    j: usize,
) -> Result<(f64, f64), LpError> {
    let n = p.n_vars();
    if j >= n {
        return Err(LpError::DimensionMismatch(format!(
            "coordinate {j} out of range for {n} variables"
        )));
    }
    let mut w = DVector::zeros(n);
    w[j] = 1.0;
    functional_range_on_optimal_face(p, v_opt, &w)
}

// ---------------------------------------------------------------------------
// standard form

#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = offset + y[col]
    Shift { col: usize, offset: f64 },
    /// x = offset - y[col]
    Mirror { col: usize, offset: f64 },
    /// x = y[pos] - y[neg]
    Split { pos: usize, neg: usize },
}

struct Standard {
    /// scaled rows over the real columns (vars then slacks)
    rows: Vec<Vec<f64>>,
    d: Vec<f64>,
    c: Vec<f64>,
    ncols: usize,
    /// per row: Some(col) if that slack can start basic, None -> artificial
    natural_basis: Vec<Option<usize>>,
    var_map: Vec<VarMap>,
}

enum Build {
    Ready(Standard),
    /// a zero row with nonzero rhs makes the problem trivially infeasible
    TriviallyInfeasible,
}

fn to_standard(p: &LpProblem, perturb: bool) -> Build {
    let n = p.n_vars();
    let mut var_map = Vec::with_capacity(n);
    let mut ncols = 0usize;
    // (col, upper-lower) pairs needing an upper-bound row
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for &(lo, hi) in &p.bounds {
        match (lo, hi) {
            (Some(l), Some(u)) => {
                var_map.push(VarMap::Shift {
                    col: ncols,
                    offset: l,
                });
                bound_rows.push((ncols, u - l));
                ncols += 1;
            }
            (Some(l), None) => {
                var_map.push(VarMap::Shift {
                    col: ncols,
                    offset: l,
                });
                ncols += 1;
            }
            (None, Some(u)) => {
                var_map.push(VarMap::Mirror {
                    col: ncols,
                    offset: u,
                });
                ncols += 1;
            }
            (None, None) => {
                var_map.push(VarMap::Split {
                    pos: ncols,
                    neg: ncols + 1,
                });
                ncols += 2;
            }
        }
    }
    let n_y = ncols;
    let n_slacks = p.a_ineq.nrows() + bound_rows.len();
    ncols += n_slacks;

    let mut c = vec![0.0; ncols];
    for j in 0..n {
        let cj = p.objective[j];
        match var_map[j] {
            VarMap::Shift { col, .. } => c[col] += cj,
            VarMap::Mirror { col, .. } => c[col] -= cj,
            VarMap::Split { pos, neg } => {
                c[pos] += cj;
                c[neg] -= cj;
            }
        }
    }

    // translate one original row into y-coordinates
    let row_to_y = |coeffs: &dyn Fn(usize) -> f64, rhs: f64| -> (Vec<f64>, f64) {
        let mut row = vec![0.0; n_y];
        let mut d = rhs;
        for j in 0..n {
            let a = coeffs(j);
            if a == 0.0 {
                continue;
            }
            match var_map[j] {
                VarMap::Shift { col, offset } => {
                    row[col] += a;
                    d -= a * offset;
                }
                VarMap::Mirror { col, offset } => {
                    row[col] -= a;
                    d -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] += a;
                    row[neg] -= a;
                }
            }
        }
        (row, d)
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut d_vec: Vec<f64> = Vec::new();
    let mut natural_basis: Vec<Option<usize>> = Vec::new();
    let mut slack_cursor = n_y;

    // equality rows: equilibrate, force d >= 0, always need an artificial
    for i in 0..p.a_eq.nrows() {
        let (mut row, mut d) = row_to_y(&|j| p.a_eq[(i, j)], p.b_eq[i]);
        let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale <= 0.0 {
            if d.abs() > FEAS_TOL * (1.0 + d.abs()) {
                return Build::TriviallyInfeasible;
            }
            continue; // 0 = 0 row
        }
        row.iter_mut().for_each(|v| *v /= scale);
        d /= scale;
        let mut full = vec![0.0; ncols];
        full[..n_y].copy_from_slice(&row);
        if d < 0.0 {
            full.iter_mut().for_each(|v| *v = -*v);
            d = -d;
        }
        rows.push(full);
        d_vec.push(d);
        natural_basis.push(None);
    }

    // inequality rows: slack gets +1 when the scaled rhs is nonnegative,
    // otherwise the row is flipped and an artificial is used
    for i in 0..p.a_ineq.nrows() {
        let (mut row, mut d) = row_to_y(&|j| p.a_ineq[(i, j)], p.b_ineq[i]);
        let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let slack = slack_cursor;
        slack_cursor += 1;
        if scale <= 0.0 {
            if d < -FEAS_TOL * (1.0 + d.abs()) {
                return Build::TriviallyInfeasible;
            }
            continue; // 0 <= d row
        }
        row.iter_mut().for_each(|v| *v /= scale);
        d /= scale;
        let mut full = vec![0.0; ncols];
        full[..n_y].copy_from_slice(&row);
        if d >= 0.0 {
            full[slack] = 1.0;
            rows.push(full);
            d_vec.push(d);
            natural_basis.push(Some(slack));
        } else {
            full.iter_mut().for_each(|v| *v = -*v);
            full[slack] = -1.0;
            rows.push(full);
            d_vec.push(-d);
            natural_basis.push(None);
        }
    }

    // upper-bound rows y + s = u - l, rhs nonnegative by construction
    for &(col, width) in &bound_rows {
        let slack = slack_cursor;
        slack_cursor += 1;
        let mut full = vec![0.0; ncols];
        full[col] = 1.0;
        full[slack] = 1.0;
        rows.push(full);
        d_vec.push(width);
        natural_basis.push(Some(slack));
    }

    if perturb {
        for (i, d) in d_vec.iter_mut().enumerate() {
            let h = (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 40;
            *d += 1e-10 * (1.0 + d.abs()) * (0.5 + (h % 1024) as f64 / 1024.0);
        }
    }

    Build::Ready(Standard {
        rows,
        d: d_vec,
        c,
        ncols,
        natural_basis,
        var_map,
    })
}

fn recover_x(var_map: &[VarMap], y: &[f64]) -> DVector<f64> {
    DVector::from_iterator(
        var_map.len(),
        var_map.iter().map(|m| match *m {
            VarMap::Shift { col, offset } => offset + y[col],
            VarMap::Mirror { col, offset } => offset - y[col],
            VarMap::Split { pos, neg } => y[pos] - y[neg],
        }),
    )
}

fn recover_direction(var_map: &[VarMap], dy: &[f64]) -> DVector<f64> {
    DVector::from_iterator(
        var_map.len(),
        var_map.iter().map(|m| match *m {
            VarMap::Shift { col, .. } => dy[col],
            VarMap::Mirror { col, .. } => -dy[col],
            VarMap::Split { pos, neg } => dy[pos] - dy[neg],
        }),
    )
}

// ---------------------------------------------------------------------------
// simplex

struct Tableau {
    rows: Vec<Vec<f64>>, // real columns + artificial columns
    d: Vec<f64>,
    basis: Vec<usize>,
    ncols: usize,
    total: usize,
    /// per row, the column whose initial tableau column was e_i (for the
    /// phase-one price readout)
    readout: Vec<usize>,
    r1: Vec<f64>,
    r2: Vec<f64>,
    c1: Vec<f64>,
    c2: Vec<f64>,
}

enum PhaseEnd {
    Converged,
    Unbounded { entering: usize },
    IterationLimit,
}

impl Tableau {
    fn new(std: &Standard) -> Tableau {
        let m = std.rows.len();
        let n_art = std
            .natural_basis
            .iter()
            .filter(|b| b.is_none())
            .count();
        let total = std.ncols + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut readout = Vec::with_capacity(m);
        let mut art = std.ncols;
        for (i, row) in std.rows.iter().enumerate() {
            let mut full = vec![0.0; total];
            full[..std.ncols].copy_from_slice(row);
            match std.natural_basis[i] {
                Some(col) => {
                    basis.push(col);
                    readout.push(col);
                }
                None => {
                    full[art] = 1.0;
                    basis.push(art);
                    readout.push(art);
                    art += 1;
                }
            }
            rows.push(full);
        }
        let mut c1 = vec![0.0; total];
        for j in std.ncols..total {
            c1[j] = 1.0;
        }
        let mut c2 = vec![0.0; total];
        c2[..std.ncols].copy_from_slice(&std.c);
        let mut t = Tableau {
            rows,
            d: std.d.clone(),
            basis,
            ncols: std.ncols,
            total,
            readout,
            r1: vec![0.0; total],
            r2: vec![0.0; total],
            c1,
            c2,
        };
        t.refresh_reduced_costs();
        t
    }

    fn refresh_reduced_costs(&mut self) {
        for j in 0..self.total {
            let mut v1 = self.c1[j];
            let mut v2 = self.c2[j];
            for (i, row) in self.rows.iter().enumerate() {
                let cb1 = self.c1[self.basis[i]];
                let cb2 = self.c2[self.basis[i]];
                if cb1 != 0.0 {
                    v1 -= cb1 * row[j];
                }
                if cb2 != 0.0 {
                    v2 -= cb2 * row[j];
                }
            }
            self.r1[j] = v1;
            self.r2[j] = v2;
        }
    }

    fn phase_objective(&self, phase1: bool) -> f64 {
        let c = if phase1 { &self.c1 } else { &self.c2 };
        self.basis
            .iter()
            .zip(&self.d)
            .map(|(&b, &d)| c[b] * d)
            .sum()
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let piv = self.rows[p][q];
        let inv = 1.0 / piv;
        for v in self.rows[p].iter_mut() {
            *v *= inv;
        }
        self.d[p] *= inv;
        self.rows[p][q] = 1.0;
        let prow = std::mem::take(&mut self.rows[p]);
        let dp = self.d[p];
        for i in 0..self.rows.len() {
            if i == p || self.rows[i].is_empty() {
                continue;
            }
            let f = self.rows[i][q];
            if f != 0.0 {
                let row = &mut self.rows[i];
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
                row[q] = 0.0;
                self.d[i] -= f * dp;
            }
        }
        let f1 = self.r1[q];
        if f1 != 0.0 {
            for (v, pv) in self.r1.iter_mut().zip(&prow) {
                *v -= f1 * pv;
            }
            self.r1[q] = 0.0;
        }
        let f2 = self.r2[q];
        if f2 != 0.0 {
            for (v, pv) in self.r2.iter_mut().zip(&prow) {
                *v -= f2 * pv;
            }
            self.r2[q] = 0.0;
        }
        self.rows[p] = prow;
        self.basis[p] = q;
    }

    /// One simplex phase. Artificial columns never enter the basis.
    fn run(&mut self, phase1: bool) -> PhaseEnd {
        let m = self.rows.len();
        let bland_after = 5 * (m + self.total);
        let max_iter = 50 * (m + self.total) + 10_000;
        for iter in 0..max_iter {
            if iter > 0 && iter % 128 == 0 {
                self.refresh_reduced_costs();
            }
            let bland = iter >= bland_after;
            let r = if phase1 { &self.r1 } else { &self.r2 };
            let mut entering: Option<usize> = None;
            let mut best = -PRICE_EPS;
            for j in 0..self.ncols {
                let rj = r[j];
                if rj < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = rj;
                }
            }
            let q = match entering {
                Some(q) => q,
                None => return PhaseEnd::Converged,
            };
            // ratio test
            let mut leave: Option<usize> = None;
            let mut theta = f64::INFINITY;
            for i in 0..m {
                let t = self.rows[i][q];
                if t > PIVOT_EPS {
                    let ratio = self.d[i] / t;
                    let tie = (ratio - theta).abs() <= 1e-9 * (1.0 + theta.abs());
                    let better = ratio < theta - 1e-9 * (1.0 + theta.abs());
                    if leave.is_none() || better {
                        leave = Some(i);
                        theta = ratio;
                    } else if tie {
                        let cur = leave.unwrap();
                        let replace = if bland {
                            self.basis[i] < self.basis[cur]
                        } else {
                            // drive artificials out first, then larger pivots
                            let art_i = self.basis[i] >= self.ncols;
                            let art_c = self.basis[cur] >= self.ncols;
                            art_i && !art_c
                                || (art_i == art_c && self.rows[i][q] > self.rows[cur][q])
                        };
                        if replace {
                            leave = Some(i);
                            theta = theta.min(ratio);
                        }
                    }
                }
            }
            match leave {
                Some(p) => self.pivot(p, q),
                None => return PhaseEnd::Unbounded { entering: q },
            }
        }
        PhaseEnd::IterationLimit
    }

    /// After phase one: pivot zero-valued artificials out of the basis,
    /// dropping rows that are redundant combinations of earlier rows.
    fn evict_artificials(&mut self) {
        let m = self.rows.len();
        let mut dead: Vec<usize> = Vec::new();
        for i in 0..m {
            if self.basis[i] < self.ncols {
                continue;
            }
            let mut best_col = None;
            let mut best_mag = 1e-7;
            for j in 0..self.ncols {
                let mag = self.rows[i][j].abs();
                if mag > best_mag {
                    best_mag = mag;
                    best_col = Some(j);
                }
            }
            match best_col {
                Some(q) => self.pivot(i, q),
                None => dead.push(i),
            }
        }
        if !dead.is_empty() {
            for &i in dead.iter().rev() {
                self.rows.remove(i);
                self.d.remove(i);
                self.basis.remove(i);
                self.readout.remove(i);
            }
            self.refresh_reduced_costs();
        }
    }

    fn solution_y(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.ncols {
                y[b] = self.d[i].max(0.0);
            }
        }
        y
    }

    fn ray_y(&self, entering: usize) -> Vec<f64> {
        let mut dy = vec![0.0; self.ncols];
        dy[entering] = 1.0;
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.ncols {
                dy[b] = -self.rows[i][entering];
            }
        }
        dy
    }

    /// Phase-one price vector, read off the initial identity columns.
    fn phase1_prices(&self) -> Vec<f64> {
        self.readout
            .iter()
            .map(|&col| self.c1[col] - self.r1[col])
            .collect()
    }
}

fn solve_once(p: &LpProblem, perturb: bool) -> Result<LpResult, LpError> {
    let std_form = match to_standard(p, perturb) {
        Build::Ready(s) => s,
        Build::TriviallyInfeasible => {
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                x: DVector::zeros(p.n_vars()),
                objective: f64::INFINITY,
                ray: None,
            })
        }
    };
    let mut tab = Tableau::new(&std_form);

    let needs_phase1 = tab.basis.iter().any(|&b| b >= tab.ncols);
    if needs_phase1 {
        match tab.run(true) {
            PhaseEnd::Converged => {}
            PhaseEnd::Unbounded { .. } => {
                return Err(LpError::NumericalFailure(
                    "phase one reported unbounded".into(),
                ))
            }
            PhaseEnd::IterationLimit => {
                return Err(LpError::NumericalFailure(
                    "phase one iteration limit".into(),
                ))
            }
        }
        let d_scale = 1.0 + tab.d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let w1 = tab.phase_objective(true);
        if w1 > FEAS_TOL * d_scale * 10.0 {
            verify_farkas(&std_form, &tab, w1)?;
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                x: DVector::zeros(p.n_vars()),
                objective: f64::INFINITY,
                ray: None,
            });
        }
        tab.evict_artificials();
    }

    match tab.run(false) {
        PhaseEnd::Converged => {
            let y = tab.solution_y();
            let x = recover_x(&std_form.var_map, &y);
            let objective = p.objective.dot(&x);
            Ok(LpResult {
                status: LpStatus::Optimal,
                x,
                objective,
                ray: None,
            })
        }
        PhaseEnd::Unbounded { entering } => {
            let y = tab.solution_y();
            let x = recover_x(&std_form.var_map, &y);
            let dy = tab.ray_y(entering);
            let ray = recover_direction(&std_form.var_map, &dy);
            let objective = p.objective.dot(&x);
            Ok(LpResult {
                status: LpStatus::Unbounded,
                x,
                objective,
                ray: Some(ray),
            })
        }
        PhaseEnd::IterationLimit => Err(LpError::NumericalFailure(
            "phase two iteration limit".into(),
        )),
    }
}

/// Re-derives the Farkas vector from the phase-one prices and checks it
/// against the scaled standard-form data: pi'E <= 0 and pi'd > 0 certify
/// that `Ey = d, y >= 0` has no solution.
fn verify_farkas(std_form: &Standard, tab: &Tableau, w1: f64) -> Result<(), LpError> {
    let pi = tab.phase1_prices();
    // readout indices refer to pre-eviction rows; phase one never removes
    // rows, so lengths agree here
    debug_assert_eq!(pi.len(), std_form.rows.len());
    let pi_scale = 1.0 + pi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-6 * pi_scale;
    for j in 0..std_form.ncols {
        let mut v = 0.0;
        for (i, row) in std_form.rows.iter().enumerate() {
            v += pi[i] * row[j];
        }
        if v > tol {
            return Err(LpError::NumericalFailure(format!(
                "infeasibility certificate violated on column {j}: {v:e}"
            )));
        }
    }
    let pd: f64 = pi
        .iter()
        .zip(&std_form.d)
        .map(|(&pi_i, &d_i)| pi_i * d_i)
        .sum();
    if pd < w1 * 0.5 - tol {
        return Err(LpError::NumericalFailure(format!(
            "infeasibility certificate value {pd:e} inconsistent with phase-one objective {w1:e}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(v)
    }

    #[test]
    fn minimize_over_unit_interval() {
        let mut p = LpProblem::new(dv(&[1.0]));
        p.bounds = vec![(Some(0.0), Some(1.0))];
        let r = lp_solve(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 0.0).abs() <= OBJ_TOL);
        assert!((r.x[0]).abs() <= FEAS_TOL);
    }

    #[test]
    fn degenerate_optimum_on_simplex_facet() {
        let mut p = LpProblem::new(dv(&[1.0, 1.0]));
        p.set_equalities(DMatrix::from_row_slice(1, 2, &[1.0, 1.0]), dv(&[1.0]));
        p.bounds = vec![(Some(0.0), None), (Some(0.0), None)];
        let r = lp_solve(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 1.0).abs() <= OBJ_TOL);
    }

    #[test]
    fn contradictory_equalities_are_infeasible() {
        let mut p = LpProblem::new(dv(&[0.0]));
        p.set_equalities(DMatrix::from_row_slice(2, 1, &[1.0, 1.0]), dv(&[1.0, 2.0]));
        let r = lp_solve(&p).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
    }

    #[test]
    fn free_variable_unbounded_below() {
        let p = LpProblem::new(dv(&[1.0]));
        let r = lp_solve(&p).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
        let ray = r.ray.unwrap();
        assert!(p.objective.dot(&ray) < 0.0);
    }

    #[test]
    fn mirrored_variable_only_upper_bound() {
        // min -x s.t. x <= 3  -> unbounded below in -x? no: min -x == max x -> x = 3
        let mut p = LpProblem::new(dv(&[-1.0]));
        p.bounds = vec![(None, Some(3.0))];
        let r = lp_solve(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.x[0] - 3.0).abs() <= 1e-9);
    }

    #[test]
    fn feasibility_answers() {
        let mut p = LpProblem::new(dv(&[0.0]));
        p.bounds = vec![(Some(1.0), Some(0.0))];
        assert!(matches!(lp_solve(&p), Err(LpError::InvalidBounds { .. })));

        let mut p = LpProblem::new(dv(&[0.0]));
        p.push_inequality(dv(&[-1.0]), -1.0); // x >= 1
        p.push_inequality(dv(&[1.0]), 0.0); // x <= 0
        assert!(!lp_feasible(&p).unwrap());

        let mut p = LpProblem::new(dv(&[0.0]));
        p.push_inequality(dv(&[-1.0]), 0.0); // x >= 0
        p.push_inequality(dv(&[1.0]), 0.0); // x <= 0
        assert!(lp_feasible(&p).unwrap());
    }

    #[test]
    fn coordinate_ranges_on_faces() {
        // min x1 s.t. x1 + x2 = 1, 0 <= x <= 1: face pins x2 = 1
        let mut p = LpProblem::new(dv(&[1.0, 0.0]));
        p.set_equalities(DMatrix::from_row_slice(1, 2, &[1.0, 1.0]), dv(&[1.0]));
        p.bounds = vec![(Some(0.0), Some(1.0)); 2];
        let r = lp_solve(&p).unwrap();
        assert!((r.objective - 0.0).abs() <= OBJ_TOL);
        let (lo, hi) = coordinate_range_on_optimal_face(&p, r.objective, 1).unwrap();
        assert!((lo - 1.0).abs() <= 1e-6 && (hi - 1.0).abs() <= 1e-6);

        // min x1 + x2 on the same simplex: whole segment is optimal
        let mut p = LpProblem::new(dv(&[1.0, 1.0]));
        p.set_equalities(DMatrix::from_row_slice(1, 2, &[1.0, 1.0]), dv(&[1.0]));
        p.bounds = vec![(Some(0.0), None); 2];
        let r = lp_solve(&p).unwrap();
        let (lo, hi) = coordinate_range_on_optimal_face(&p, r.objective, 0).unwrap();
        assert!(lo.abs() <= 1e-6 && (hi - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn empty_face_is_reported() {
        let mut p = LpProblem::new(dv(&[1.0]));
        p.bounds = vec![(Some(0.0), Some(1.0))];
        let err = coordinate_range_on_optimal_face(&p, -1.0, 0).unwrap_err();
        assert!(matches!(err, LpError::EmptyFace { .. }));
    }
}
