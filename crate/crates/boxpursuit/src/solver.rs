//! Box-constrained basis pursuit and its variants.
//!
//! `solve_box_bp` minimizes the l1 norm over an affine slice of a box; it
//! covers plain basis pursuit (no box), its nonnegative variant and every
//! finite-alphabet box by choosing the bounds. The noisy variant replaces
//! the equality constraint with an l2 ball and is solved by operator
//! splitting. `check_unique` certifies whether a claimed solution is the
//! program's unique minimizer by measuring coordinate ranges over the
//! optimal face.

use crate::alphabet::{Alphabet, Signal};
use crate::lp::{
    self, functional_range_on_optimal_face, lp_solve, LpError, LpProblem, LpStatus,
};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coordinate ranges on the optimal face wider than this flag non-uniqueness.
pub const UNIQUE_TOL: f64 = 1e-7;

const ADMM_TOL: f64 = 1e-8;
const ADMM_MAX_ITER: usize = 100_000;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("noise radius must be nonnegative, got {0}")]
    NegativeEta(f64),
    #[error("l1 minimization reported unbounded; inputs are inconsistent")]
    UnexpectedUnbounded,
}

/// Componentwise box `lower <= x <= upper`; `None` leaves a side open.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBounds {
    lower: Vec<Option<f64>>,
    upper: Vec<Option<f64>>,
}

impl BoxBounds {
    pub fn new(lower: Vec<Option<f64>>, upper: Vec<Option<f64>>) -> Result<Self, SolveError> {
        if lower.len() != upper.len() {
            return Err(SolveError::DimensionMismatch(format!(
                "lower has {} entries, upper has {}",
                lower.len(),
                upper.len()
            )));
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if let (Some(l), Some(u)) = (lo, hi) {
                if l > u {
                    return Err(SolveError::DimensionMismatch(format!(
                        "bounds for coordinate {j} are inverted: {l} > {u}"
                    )));
                }
            }
        }
        Ok(BoxBounds { lower, upper })
    }

    pub fn uniform(n: usize, lo: Option<f64>, hi: Option<f64>) -> Self {
        BoxBounds::new(vec![lo; n], vec![hi; n]).expect("uniform bounds are ordered")
    }

    /// The convex hull of the alphabet, replicated over n coordinates.
    pub fn from_alphabet(alphabet: &Alphabet, n: usize) -> Self {
        let (lo, hi) = alphabet.hull();
        BoxBounds::uniform(n, Some(lo), Some(hi))
    }

    /// No box at all, i.e. plain basis pursuit.
    pub fn free(n: usize) -> Self {
        BoxBounds::uniform(n, None, None)
    }

    /// The nonnegative orthant.
    pub fn nonnegative(n: usize) -> Self {
        BoxBounds::uniform(n, Some(0.0), None)
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self, j: usize) -> Option<f64> {
        self.lower[j]
    }

    pub fn upper(&self, j: usize) -> Option<f64> {
        self.upper[j]
    }

    /// The box scaled by `beta > 0`.
    pub fn scaled(&self, beta: f64) -> Self {
        assert!(beta > 0.0, "box scaling requires beta > 0");
        BoxBounds {
            lower: self.lower.iter().map(|b| b.map(|v| beta * v)).collect(),
            upper: self.upper.iter().map(|b| b.map(|v| beta * v)).collect(),
        }
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        x.iter().enumerate().all(|(j, &v)| {
            self.lower[j].map_or(true, |l| v >= l - tol)
                && self.upper[j].map_or(true, |u| v <= u + tol)
        })
    }

    fn clip(&self, x: &mut DVector<f64>) {
        for j in 0..x.len() {
            if let Some(l) = self.lower[j] {
                if x[j] < l {
                    x[j] = l;
                }
            }
            if let Some(u) = self.upper[j] {
                if x[j] > u {
                    x[j] = u;
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    ToleranceNotMet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Uniqueness {
    Unique,
    NonUnique,
    NotChecked,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveResult {
    pub x: Vec<f64>,
    pub objective: f64,
    pub equality_residual: f64,
    pub status: SolveStatus,
    pub unique: Uniqueness,
}

impl SolveResult {
    pub fn vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.x)
    }

    fn infeasible(n: usize) -> Self {
        SolveResult {
            x: vec![0.0; n],
            objective: f64::INFINITY,
            equality_residual: f64::INFINITY,
            status: SolveStatus::Infeasible,
            unique: Uniqueness::NotChecked,
        }
    }
}

/// The recovery program to run; carries its box where one applies.
#[derive(Debug, Clone)]
pub enum ProgramKind {
    /// min ||x||_1 s.t. Ax = b
    P1,
    /// min ||x||_1 s.t. Ax = b, x >= 0
    Pplus,
    /// min ||x||_1 s.t. Ax = b, x in box
    BoxEq(BoxBounds),
    /// min ||x||_1 s.t. ||Ax - b|| <= eta, x in box
    BoxDenoise { bounds: BoxBounds, eta: f64 },
    /// binary program run against the complemented right-hand side
    MirroredBinary,
}

impl ProgramKind {
    pub fn solve(&self, a: &DMatrix<f64>, b: &DVector<f64>) -> Result<SolveResult, SolveError> {
        let n = a.ncols();
        match self {
            ProgramKind::P1 => solve_box_bp(a, b, &BoxBounds::free(n)),
            ProgramKind::Pplus => solve_box_bp(a, b, &BoxBounds::nonnegative(n)),
            ProgramKind::BoxEq(bounds) => solve_box_bp(a, b, bounds),
            ProgramKind::BoxDenoise { bounds, eta } => solve_box_bp_denoise(a, b, *eta, bounds),
            ProgramKind::MirroredBinary => solve_mirrored_binary(a, b),
        }
    }
}

// mapping from original coordinates to LP variables
#[derive(Debug, Clone, Copy)]
enum CompVar {
    /// x_j is LP variable `col`; `sign` is its objective coefficient
    Direct { col: usize, sign: f64 },
    /// x_j = y[pos] - y[neg]
    Split { pos: usize, neg: usize },
}

fn build_bp_lp(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    bounds: &BoxBounds,
) -> Result<(LpProblem, Vec<CompVar>), SolveError> {
    let (m, n) = (a.nrows(), a.ncols());
    if b.len() != m {
        return Err(SolveError::DimensionMismatch(format!(
            "matrix is {m}x{n} but rhs has {} entries",
            b.len()
        )));
    }
    if bounds.len() != n {
        return Err(SolveError::DimensionMismatch(format!(
            "matrix has {n} columns but box has {} entries",
            bounds.len()
        )));
    }

    let mut comp = Vec::with_capacity(n);
    let mut ncols = 0usize;
    for j in 0..n {
        match (bounds.lower(j), bounds.upper(j)) {
            // sign of x_j is fixed by the box: |x_j| is linear
            (Some(l), _) if l >= 0.0 => {
                comp.push(CompVar::Direct { col: ncols, sign: 1.0 });
                ncols += 1;
            }
            (_, Some(u)) if u <= 0.0 => {
                comp.push(CompVar::Direct {
                    col: ncols,
                    sign: -1.0,
                });
                ncols += 1;
            }
            _ => {
                comp.push(CompVar::Split {
                    pos: ncols,
                    neg: ncols + 1,
                });
                ncols += 2;
            }
        }
    }

    let mut objective = DVector::zeros(ncols);
    let mut lp_bounds = vec![(Some(0.0), None); ncols];
    let mut a_lp = DMatrix::zeros(m, ncols);
    for j in 0..n {
        match comp[j] {
            CompVar::Direct { col, sign } => {
                objective[col] = sign;
                lp_bounds[col] = (bounds.lower(j), bounds.upper(j));
                for i in 0..m {
                    a_lp[(i, col)] = a[(i, j)];
                }
            }
            CompVar::Split { pos, neg } => {
                objective[pos] = 1.0;
                objective[neg] = 1.0;
                lp_bounds[pos] = (Some(0.0), bounds.upper(j));
                lp_bounds[neg] = (Some(0.0), bounds.lower(j).map(|l| -l));
                for i in 0..m {
                    a_lp[(i, pos)] = a[(i, j)];
                    a_lp[(i, neg)] = -a[(i, j)];
                }
            }
        }
    }

    let mut p = LpProblem::new(objective);
    p.set_equalities(a_lp, b.clone());
    p.bounds = lp_bounds;
    Ok((p, comp))
}

fn recover_bp_x(comp: &[CompVar], y: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(
        comp.len(),
        comp.iter().map(|c| match *c {
            CompVar::Direct { col, .. } => y[col],
            CompVar::Split { pos, neg } => y[pos] - y[neg],
        }),
    )
}

/// `min ||x||_1` subject to `Ax = b` and `x` in the box.
///
/// Coordinates whose box fixes their sign enter the LP directly; the rest
/// are split into positive and negative parts.
pub fn solve_box_bp(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    bounds: &BoxBounds,
) -> Result<SolveResult, SolveError> {
    let (p, comp) = build_bp_lp(a, b, bounds)?;
    let r = lp_solve(&p)?;
    match r.status {
        LpStatus::Optimal => {
            let x = recover_bp_x(&comp, &r.x);
            Ok(finish(a, b, x))
        }
        LpStatus::Infeasible => Ok(SolveResult::infeasible(a.ncols())),
        LpStatus::Unbounded => Err(SolveError::UnexpectedUnbounded),
    }
}

fn finish(a: &DMatrix<f64>, b: &DVector<f64>, x: DVector<f64>) -> SolveResult {
    let objective = x.iter().map(|v| v.abs()).sum();
    let equality_residual = (a * &x - b).norm();
    SolveResult {
        x: x.as_slice().to_vec(),
        objective,
        equality_residual,
        status: SolveStatus::Optimal,
        unique: Uniqueness::NotChecked,
    }
}

/// Does the program `min ||x||_1, Ax = b, x in box` have `x_claim` as its
/// unique solution?
///
/// Every coordinate's range over the face `{feasible, ||x||_1 <=
/// ||x_claim||_1 + tol}` is measured with the LP engine; any width above
/// [`UNIQUE_TOL`] means some other point does at least as well. A claimed
/// point that is not even optimal comes back `NonUnique` for the same
/// reason: the face then contains the true optimum.
pub fn check_unique(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    bounds: &BoxBounds,
    x_claim: &DVector<f64>,
) -> Result<Uniqueness, SolveError> {
    if x_claim.len() != a.ncols() {
        return Err(SolveError::DimensionMismatch(format!(
            "claimed solution has {} entries, matrix has {} columns",
            x_claim.len(),
            a.ncols()
        )));
    }
    let (p, comp) = build_bp_lp(a, b, bounds)?;
    let v = x_claim.iter().map(|t| t.abs()).sum::<f64>();
    let ncols = p.n_vars();
    for c in &comp {
        let mut w = DVector::zeros(ncols);
        match *c {
            CompVar::Direct { col, .. } => w[col] = 1.0,
            CompVar::Split { pos, neg } => {
                w[pos] = 1.0;
                w[neg] = -1.0;
            }
        }
        let (lo, hi) = functional_range_on_optimal_face(&p, v, &w)?;
        if hi - lo > UNIQUE_TOL {
            return Ok(Uniqueness::NonUnique);
        }
    }
    Ok(Uniqueness::Unique)
}

/// Componentwise nearest alphabet level; exact halves round toward the
/// level of smaller magnitude.
pub fn round_to_alphabet(x: &DVector<f64>, alphabet: &Alphabet) -> Signal {
    let (lo, hi) = (alphabet.lower(), alphabet.upper());
    let levels = x
        .iter()
        .map(|&v| {
            let t = v.clamp(f64::from(lo), f64::from(hi));
            let below = t.floor().clamp(f64::from(lo), f64::from(hi));
            let above = (below + 1.0).min(f64::from(hi));
            let d_below = t - below;
            let d_above = above - t;
            let level = if d_below < d_above {
                below
            } else if d_above < d_below {
                above
            } else if below.abs() <= above.abs() {
                below
            } else {
                above
            };
            level as i32
        })
        .collect();
    Signal::new(levels)
}

/// Runs the binary program against the complemented measurements
/// `A x = A 1 - b` and maps the solution back. Dense binary signals
/// become sparse in the complement, which is where this wins.
pub fn solve_mirrored_binary(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
) -> Result<SolveResult, SolveError> {
    let n = a.ncols();
    let ones = DVector::from_element(n, 1.0);
    let b_mirror = a * &ones - b;
    let bounds = BoxBounds::uniform(n, Some(0.0), Some(1.0));
    let r = solve_box_bp(a, &b_mirror, &bounds)?;
    match r.status {
        SolveStatus::Optimal => {
            let x = &ones - r.vector();
            Ok(finish(a, b, x))
        }
        _ => Ok(SolveResult::infeasible(n)),
    }
}

/// Solves both the direct and the mirrored binary program and keeps the
/// candidate closest to being a 0/1 vector (smallest l1 distance to its
/// own rounding; the direct branch wins ties).
pub fn recover_binary_auto(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
) -> Result<SolveResult, SolveError> {
    let n = a.ncols();
    let bounds = BoxBounds::uniform(n, Some(0.0), Some(1.0));
    let binary = Alphabet::new(0, 1).expect("static alphabet");
    let direct = solve_box_bp(a, b, &bounds)?;
    let mirrored = solve_mirrored_binary(a, b)?;

    let metric = |r: &SolveResult| -> f64 {
        let x = r.vector();
        let rounded = round_to_alphabet(&x, &binary).values();
        (x - rounded).abs().sum()
    };

    match (direct.status, mirrored.status) {
        (SolveStatus::Optimal, SolveStatus::Optimal) => {
            if metric(&direct) <= metric(&mirrored) {
                Ok(direct)
            } else {
                Ok(mirrored)
            }
        }
        (SolveStatus::Optimal, _) => Ok(direct),
        (_, SolveStatus::Optimal) => Ok(mirrored),
        _ => Ok(SolveResult::infeasible(n)),
    }
}

/// `min ||x||_1` subject to `||Ax - b||_2 <= eta` and `x` in the box.
///
/// ADMM splitting: the x-update is a componentwise soft-threshold clipped
/// to the box, the z-update projects onto the measurement ball through a
/// cached spectral factorization of AA', and `eta = 0` falls back to the
/// exact equality solver.
pub fn solve_box_bp_denoise(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    eta: f64,
    bounds: &BoxBounds,
) -> Result<SolveResult, SolveError> {
    if eta < 0.0 {
        return Err(SolveError::NegativeEta(eta));
    }
    if eta == 0.0 {
        return solve_box_bp(a, b, bounds);
    }
    let (m, n) = (a.nrows(), a.ncols());
    if b.len() != m || bounds.len() != n {
        return Err(SolveError::DimensionMismatch(format!(
            "matrix is {m}x{n}, rhs has {} entries, box has {}",
            b.len(),
            bounds.len()
        )));
    }

    let ball = BallProjector::new(a, b, eta);
    if ball.unreachable() {
        return Ok(SolveResult::infeasible(n));
    }

    let mut x = DVector::zeros(n);
    bounds.clip(&mut x);
    let mut z = x.clone();
    let mut u: DVector<f64> = DVector::zeros(n);
    let mut rho = 1.0;
    let mut best_primal = f64::INFINITY;
    let mut last_best = f64::INFINITY;

    let mut converged = false;
    for iter in 0..ADMM_MAX_ITER {
        // prox of ||.||_1 + box indicator
        let kappa = 1.0 / rho;
        for j in 0..n {
            let v = z[j] - u[j];
            x[j] = v.signum() * (v.abs() - kappa).max(0.0);
        }
        bounds.clip(&mut x);

        let w = &x + &u;
        let z_prev = z.clone();
        z = ball.project(&w);
        u += &x - &z;

        let r_primal = (&x - &z).norm();
        let r_dual = rho * (&z - &z_prev).norm();
        best_primal = best_primal.min(r_primal);
        if r_primal < ADMM_TOL && r_dual < ADMM_TOL {
            converged = true;
            break;
        }
        if iter % 50 == 49 {
            if r_primal > 10.0 * r_dual {
                rho *= 2.0;
                u /= 2.0;
            } else if r_dual > 10.0 * r_primal {
                rho /= 2.0;
                u *= 2.0;
            }
        }
        if iter % 2000 == 1999 {
            // no meaningful progress: either the ball misses the box or
            // we are grinding against the tolerance
            if best_primal > 0.99 * last_best && best_primal > 1e-6 {
                break;
            }
            last_best = best_primal;
        }
    }

    let residual = (a * &x - b).norm();
    let status = if converged && residual <= eta + 1e-6 * (1.0 + eta) {
        SolveStatus::Optimal
    } else if residual > eta + 1e-5 * (1.0 + b.norm()) {
        return Ok(SolveResult::infeasible(n));
    } else {
        SolveStatus::ToleranceNotMet
    };
    Ok(SolveResult {
        objective: x.iter().map(|v| v.abs()).sum(),
        equality_residual: residual,
        x: x.as_slice().to_vec(),
        status,
        unique: Uniqueness::NotChecked,
    })
}

/// Euclidean projection onto `{z : ||Az - b|| <= eta}` via the spectral
/// decomposition of AA', computed once per solve.
struct BallProjector {
    a: DMatrix<f64>,
    b: DVector<f64>,
    eta: f64,
    q: DMatrix<f64>,
    d: DVector<f64>,
    /// norm of the component of b orthogonal to range(A)
    perp: f64,
}

impl BallProjector {
    fn new(a: &DMatrix<f64>, b: &DVector<f64>, eta: f64) -> Self {
        let aat = a * a.transpose();
        let eig = aat.symmetric_eigen();
        let d = eig.eigenvalues.map(|v| v.max(0.0));
        let q = eig.eigenvectors;
        let d_tol = 1e-12 * d.max().max(1e-300);
        let bh = q.transpose() * b;
        let perp2: f64 = bh
            .iter()
            .zip(d.iter())
            .filter(|(_, &di)| di <= d_tol)
            .map(|(v, _)| v * v)
            .sum();
        BallProjector {
            a: a.clone(),
            b: b.clone(),
            eta,
            q,
            d,
            perp: perp2.sqrt(),
        }
    }

    fn unreachable(&self) -> bool {
        self.perp > self.eta * (1.0 + 1e-12) + lp::FEAS_TOL
    }

    fn project(&self, w: &DVector<f64>) -> DVector<f64> {
        let r0 = &self.a * w - &self.b;
        let norm = r0.norm();
        if norm <= self.eta {
            return w.clone();
        }
        let rh = self.q.transpose() * &r0;
        let g = |lambda: f64| -> f64 {
            rh.iter()
                .zip(self.d.iter())
                .map(|(r, &di)| {
                    let s = r / (1.0 + lambda * di);
                    s * s
                })
                .sum::<f64>()
        };
        let target = self.eta * self.eta;
        // bracket the multiplier, then safeguarded Newton
        let mut hi = 1.0 / self.d.max().max(1e-300);
        let mut guard = 0;
        while g(hi) > target && guard < 200 {
            hi *= 2.0;
            guard += 1;
        }
        let mut lo = 0.0;
        let mut lambda = hi / 2.0;
        for _ in 0..200 {
            let val = g(lambda);
            if (val.sqrt() - self.eta).abs() <= 1e-13 * (1.0 + self.eta) {
                break;
            }
            if val > target {
                lo = lambda;
            } else {
                hi = lambda;
            }
            let grad: f64 = rh
                .iter()
                .zip(self.d.iter())
                .map(|(r, &di)| {
                    let denom = 1.0 + lambda * di;
                    -2.0 * r * r * di / (denom * denom * denom)
                })
                .sum();
            let newton = if grad.abs() > 1e-300 {
                lambda - (val - target) / grad
            } else {
                f64::NAN
            };
            lambda = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        let scaled = DVector::from_iterator(
            rh.len(),
            rh.iter()
                .zip(self.d.iter())
                .map(|(r, &di)| r / (1.0 + lambda * di)),
        );
        let correction = self.a.transpose() * (&self.q * scaled);
        w - lambda * correction
    }
}
