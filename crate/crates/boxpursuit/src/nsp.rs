//! Exact null space property certificates.
//!
//! Each property asks whether the kernel of a measurement matrix meets a
//! polyhedral cone only at the origin. The checker parametrizes kernel
//! vectors in an orthonormal kernel basis, fixes coordinate signs as the
//! cone dictates, moves absolute values on the "small side" of the l1
//! inequality into auxiliary variables, and rules out the zero vector by
//! pinning one coordinate to +-1 at a time. Each pinned system is a plain
//! LP feasibility problem; any feasible point is a witness that the
//! property fails.

use crate::alphabet::{Alphabet, SupportProfile};
use crate::lp::{lp_solve, LpError, LpProblem, LpStatus};
use crate::rng::Streams;
use crate::sampling::sample_gaussian_matrix;
use crate::solver::{check_unique, BoxBounds, SolveError, Uniqueness};
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Hard cap on sign-pattern enumeration for the general bipolar check.
pub const MAX_SIGN_ENUM: usize = 20;

#[derive(Debug, Error)]
pub enum NspError {
    #[error("index {index} out of range for {n} columns")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("sets must be disjoint / nested as the property requires: {0}")]
    MalformedSets(String),
    #[error("{count} free-signed support coordinates exceed the enumeration cap {max}")]
    ComplexityRefused { count: usize, max: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Which property to check, with its index sets (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NspQuery {
    /// binary: kernel avoids `N_K \cap H_K`
    BNsp { k: Vec<usize> },
    /// uniform positive: kernel avoids `N^+ \cap H^+_K`
    NspPlus { k: Vec<usize> },
    /// bipolar ternary, disjoint positive/negative supports
    BtNsp {
        k_pos: Vec<usize>,
        k_neg: Vec<usize>,
    },
    /// unipolar finite: `k_top` (entries at the extreme level) inside `k`
    UfNsp { k_top: Vec<usize>, k: Vec<usize> },
    /// bipolar finite: extreme-level sets inside `k`
    FNsp {
        k_bottom: Vec<usize>,
        k_top: Vec<usize>,
        k: Vec<usize>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct NspVerdict {
    pub holds: bool,
    /// A nonzero kernel vector inside the cone, sup-normalized; present
    /// exactly when the property fails.
    pub witness: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CoordSign {
    NonPos,
    NonNeg,
    Free,
}

/// The cone, reduced to data the LP assembler consumes.
struct ConeShape {
    sign: Vec<CoordSign>,
    /// coefficient of w_i in the signed linear part of the l1 inequality
    lin: Vec<f64>,
    /// coordinates whose |w_i| enters through an auxiliary t_i
    abs_coords: Vec<usize>,
    /// coordinates with free sign on the large side (enumerated)
    enum_coords: Vec<usize>,
}

fn sorted_unique(v: &[usize]) -> Vec<usize> {
    let mut out = v.to_vec();
    out.sort_unstable();
    out.dedup();
    out
}

impl NspQuery {
    fn validate(&self, n: usize) -> Result<(), NspError> {
        let check_range = |set: &[usize]| -> Result<(), NspError> {
            for &i in set {
                if i >= n {
                    return Err(NspError::IndexOutOfRange { index: i, n });
                }
            }
            Ok(())
        };
        let subset = |inner: &[usize], outer: &[usize]| inner.iter().all(|i| outer.contains(i));
        let disjoint =
            |a: &[usize], b: &[usize]| a.iter().all(|i| !b.contains(i));
        match self {
            NspQuery::BNsp { k } | NspQuery::NspPlus { k } => check_range(k),
            NspQuery::BtNsp { k_pos, k_neg } => {
                check_range(k_pos)?;
                check_range(k_neg)?;
                if !disjoint(k_pos, k_neg) {
                    return Err(NspError::MalformedSets(
                        "positive and negative supports intersect".into(),
                    ));
                }
                Ok(())
            }
            NspQuery::UfNsp { k_top, k } => {
                check_range(k)?;
                check_range(k_top)?;
                if !subset(k_top, k) {
                    return Err(NspError::MalformedSets(
                        "extreme-level set is not contained in the support".into(),
                    ));
                }
                Ok(())
            }
            NspQuery::FNsp { k_bottom, k_top, k } => {
                check_range(k)?;
                check_range(k_bottom)?;
                check_range(k_top)?;
                if !disjoint(k_bottom, k_top) {
                    return Err(NspError::MalformedSets(
                        "extreme-level sets intersect".into(),
                    ));
                }
                if !subset(k_bottom, k) || !subset(k_top, k) {
                    return Err(NspError::MalformedSets(
                        "extreme-level sets are not contained in the support".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    fn shape(&self, n: usize) -> ConeShape {
        let mut sign = vec![CoordSign::Free; n];
        let mut lin = vec![0.0; n];
        let mut abs_coords = Vec::new();
        let mut enum_coords = Vec::new();
        match self {
            NspQuery::BNsp { k } => {
                // H fixes every sign, so the l1 inequality is fully linear
                let k = sorted_unique(k);
                for i in 0..n {
                    if k.binary_search(&i).is_ok() {
                        sign[i] = CoordSign::NonPos;
                    } else {
                        sign[i] = CoordSign::NonNeg;
                    }
                    lin[i] = -1.0;
                }
            }
            NspQuery::NspPlus { k } => {
                let k = sorted_unique(k);
                for i in 0..n {
                    if k.binary_search(&i).is_err() {
                        sign[i] = CoordSign::NonNeg;
                    }
                    lin[i] = -1.0;
                }
            }
            NspQuery::BtNsp { k_pos, k_neg } => {
                let k_pos = sorted_unique(k_pos);
                let k_neg = sorted_unique(k_neg);
                for i in 0..n {
                    if k_pos.binary_search(&i).is_ok() {
                        sign[i] = CoordSign::NonPos;
                        lin[i] = -1.0;
                    } else if k_neg.binary_search(&i).is_ok() {
                        sign[i] = CoordSign::NonNeg;
                        lin[i] = 1.0;
                    } else {
                        abs_coords.push(i);
                    }
                }
            }
            NspQuery::UfNsp { k_top, k } => {
                let k = sorted_unique(k);
                let k_top = sorted_unique(k_top);
                for i in 0..n {
                    if k_top.binary_search(&i).is_ok() {
                        sign[i] = CoordSign::NonPos;
                    } else if k.binary_search(&i).is_err() {
                        sign[i] = CoordSign::NonNeg;
                    }
                    lin[i] = -1.0;
                }
            }
            NspQuery::FNsp { k_bottom, k_top, k } => {
                let k = sorted_unique(k);
                let k_bottom = sorted_unique(k_bottom);
                let k_top = sorted_unique(k_top);
                for i in 0..n {
                    if k_top.binary_search(&i).is_ok() {
                        sign[i] = CoordSign::NonPos;
                        lin[i] = -1.0;
                    } else if k_bottom.binary_search(&i).is_ok() {
                        sign[i] = CoordSign::NonNeg;
                        lin[i] = 1.0;
                    } else if k.binary_search(&i).is_ok() {
                        enum_coords.push(i); // sign enumerated per pattern
                    } else {
                        abs_coords.push(i);
                    }
                }
            }
        }
        ConeShape {
            sign,
            lin,
            abs_coords,
            enum_coords,
        }
    }

    /// The union of the support sets, for witness verification.
    fn support(&self) -> Vec<usize> {
        match self {
            NspQuery::BNsp { k } | NspQuery::NspPlus { k } | NspQuery::UfNsp { k, .. } => {
                sorted_unique(k)
            }
            NspQuery::BtNsp { k_pos, k_neg } => {
                let mut v = k_pos.clone();
                v.extend_from_slice(k_neg);
                sorted_unique(&v)
            }
            NspQuery::FNsp { k, .. } => sorted_unique(k),
        }
    }

    fn uses_sum_inequality(&self) -> bool {
        matches!(self, NspQuery::NspPlus { .. } | NspQuery::UfNsp { .. })
    }
}

/// Orthonormal basis of ker(A), one column per basis vector.
///
/// Rank is decided by thresholding singular values at
/// `1e-12 * max(m, N) * sigma_max`. When m < N the thin SVD only spans the
/// row space, so the kernel is completed by pivoted Gram-Schmidt over the
/// identity columns.
pub fn kernel_basis(a: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return DMatrix::identity(n, n);
    }
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("SVD with v_t requested");
    let smax = svd.singular_values.iter().fold(0.0f64, |acc, &s| acc.max(s));
    if smax == 0.0 {
        return DMatrix::identity(n, n);
    }
    let tol = 1e-12 * m.max(n) as f64 * smax;

    let mut orthonormal: Vec<DVector<f64>> = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > tol {
            orthonormal.push(v_t.row(i).transpose());
        }
    }
    let rank = orthonormal.len();
    let nullity = n - rank;

    let mut kernel: Vec<DVector<f64>> = Vec::new();
    if m >= n {
        // full set of right singular vectors is available
        for (i, &s) in svd.singular_values.iter().enumerate() {
            if s <= tol {
                kernel.push(v_t.row(i).transpose());
            }
        }
    } else {
        // complete the row space to an orthonormal basis of R^n
        let project = |v: &DVector<f64>, basis: &[DVector<f64>]| -> DVector<f64> {
            let mut r = v.clone();
            for _ in 0..2 {
                for b in basis {
                    let c = b.dot(&r);
                    r -= b * c;
                }
            }
            r
        };
        while kernel.len() < nullity {
            let mut best: Option<(f64, DVector<f64>)> = None;
            for j in 0..n {
                let mut e = DVector::zeros(n);
                e[j] = 1.0;
                let mut r = project(&e, &orthonormal);
                r = project(&r, &kernel);
                let norm = r.norm();
                if best.as_ref().map_or(true, |(bn, _)| norm > *bn) {
                    best = Some((norm, r));
                }
            }
            let (norm, r) = best.expect("n > 0");
            if norm < 1e-10 {
                break; // numerically exhausted; should not happen
            }
            kernel.push(r / norm);
        }
    }

    let d = kernel.len();
    let mut out = DMatrix::zeros(n, d);
    for (j, v) in kernel.iter().enumerate() {
        out.column_mut(j).copy_from(v);
    }
    out
}

/// Does A satisfy the property? If not, the verdict carries an explicit
/// kernel vector inside the cone.
pub fn check_nsp(a: &DMatrix<f64>, query: &NspQuery) -> Result<NspVerdict, NspError> {
    let n = a.ncols();
    query.validate(n)?;
    let shape = query.shape(n);
    if shape.enum_coords.len() > MAX_SIGN_ENUM {
        return Err(NspError::ComplexityRefused {
            count: shape.enum_coords.len(),
            max: MAX_SIGN_ENUM,
        });
    }
    let kernel = kernel_basis(a);
    let d = kernel.ncols();
    if d == 0 {
        return Ok(NspVerdict {
            holds: true,
            witness: None,
        });
    }

    let patterns = 1usize << shape.enum_coords.len();
    for pattern in 0..patterns {
        let mut signs = shape.sign.clone();
        let mut lin = shape.lin.clone();
        // on the support side |w_i| = sigma_i w_i once the pattern fixes
        // the sign: NonNeg coordinates enter the inequality with +1,
        // NonPos with -1
        for (bit, &i) in shape.enum_coords.iter().enumerate() {
            if pattern >> bit & 1 == 0 {
                signs[i] = CoordSign::NonNeg;
                lin[i] = 1.0;
            } else {
                signs[i] = CoordSign::NonPos;
                lin[i] = -1.0;
            }
        }
        if let Some(witness) = nontrivial_point(&kernel, &signs, &lin, &shape.abs_coords, query)? {
            return Ok(NspVerdict {
                holds: false,
                witness: Some(witness),
            });
        }
    }
    Ok(NspVerdict {
        holds: true,
        witness: None,
    })
}

/// Searches for a nonzero cone point by pinning `s * w_j = 1` for every
/// coordinate and every sign consistent with the cone. Scale invariance
/// makes the sweep exhaustive.
fn nontrivial_point(
    kernel: &DMatrix<f64>,
    signs: &[CoordSign],
    lin: &[f64],
    abs_coords: &[usize],
    query: &NspQuery,
) -> Result<Option<Vec<f64>>, NspError> {
    let n = kernel.nrows();
    let d = kernel.ncols();
    let n_aux = abs_coords.len();
    let vars = d + n_aux;

    // static rows shared by every pinned LP
    let mut ineq_rows: Vec<(DVector<f64>, f64)> = Vec::new();
    for i in 0..n {
        let krow = kernel.row(i);
        match signs[i] {
            CoordSign::NonPos => {
                let mut row = DVector::zeros(vars);
                for c in 0..d {
                    row[c] = krow[c];
                }
                ineq_rows.push((row, 0.0)); // w_i <= 0
            }
            CoordSign::NonNeg => {
                let mut row = DVector::zeros(vars);
                for c in 0..d {
                    row[c] = -krow[c];
                }
                ineq_rows.push((row, 0.0)); // -w_i <= 0
            }
            CoordSign::Free => {}
        }
    }
    for (t_idx, &i) in abs_coords.iter().enumerate() {
        let krow = kernel.row(i);
        // t_i >= w_i and t_i >= -w_i
        let mut row = DVector::zeros(vars);
        for c in 0..d {
            row[c] = krow[c];
        }
        row[d + t_idx] = -1.0;
        ineq_rows.push((row, 0.0));
        let mut row = DVector::zeros(vars);
        for c in 0..d {
            row[c] = -krow[c];
        }
        row[d + t_idx] = -1.0;
        ineq_rows.push((row, 0.0));
    }
    // main inequality: sum_i lin_i w_i - sum_t t >= 0, stored as <=
    {
        let mut row = DVector::zeros(vars);
        for i in 0..n {
            if lin[i] != 0.0 {
                let krow = kernel.row(i);
                for c in 0..d {
                    row[c] -= lin[i] * krow[c];
                }
            }
        }
        for t_idx in 0..n_aux {
            row[d + t_idx] += 1.0;
        }
        ineq_rows.push((row, 0.0));
    }

    let mut bounds = vec![(None, None); vars];
    for b in bounds.iter_mut().skip(d) {
        *b = (Some(0.0), None); // aux t >= 0
    }

    for j in 0..n {
        let allowed: &[f64] = match signs[j] {
            CoordSign::NonPos => &[-1.0],
            CoordSign::NonNeg => &[1.0],
            CoordSign::Free => &[1.0, -1.0],
        };
        for &s in allowed {
            let mut p = LpProblem::new(DVector::zeros(vars));
            p.bounds = bounds.clone();
            let mut pin = DVector::zeros(vars);
            let krow = kernel.row(j);
            for c in 0..d {
                pin[c] = s * krow[c];
            }
            p.set_equalities(
                DMatrix::from_rows(&[pin.transpose()]),
                DVector::from_element(1, 1.0),
            );
            for (row, rhs) in &ineq_rows {
                p.push_inequality(row.clone(), *rhs);
            }
            let r = lp_solve(&p)?;
            if r.status == LpStatus::Optimal {
                let alpha = r.x.rows(0, d).into_owned();
                let mut w = kernel * alpha;
                let sup = w.amax();
                if sup > 0.0 {
                    w /= sup;
                }
                debug_assert!(verify_witness(kernel, query, &w));
                return Ok(Some(w.as_slice().to_vec()));
            }
        }
    }
    Ok(None)
}

/// Re-checks a claimed witness directly against the cone definition:
/// kernel membership, the sign pattern, the l1 (or sum) inequality, and
/// sup-norm one.
pub fn verify_witness(kernel: &DMatrix<f64>, query: &NspQuery, w: &DVector<f64>) -> bool {
    const TOL: f64 = 1e-9;
    let n = kernel.nrows();
    if w.len() != n {
        return false;
    }
    if (w.amax() - 1.0).abs() > TOL {
        return false;
    }
    // kernel membership: w equals its projection onto the kernel basis
    let proj = kernel * (kernel.transpose() * w);
    if (w - proj).norm() > TOL * (1.0 + w.norm()) {
        return false;
    }
    let shape = query.shape(n);
    for i in 0..n {
        match shape.sign[i] {
            CoordSign::NonPos => {
                if w[i] > TOL {
                    return false;
                }
            }
            CoordSign::NonNeg => {
                if w[i] < -TOL {
                    return false;
                }
            }
            CoordSign::Free => {}
        }
    }
    if query.uses_sum_inequality() {
        w.sum() <= TOL
    } else {
        let support = query.support();
        let on: f64 = support.iter().map(|&i| w[i].abs()).sum();
        let off: f64 = (0..n)
            .filter(|i| support.binary_search(i).is_err())
            .map(|i| w[i].abs())
            .sum();
        on >= off - TOL
    }
}

// ---------------------------------------------------------------------------
// NSP <-> uniqueness crosscheck

#[derive(Debug, Clone, Serialize)]
pub struct Disagreement {
    pub trial: u64,
    pub nsp_holds: bool,
    pub recovery_unique: bool,
    pub detail: String,
    /// matrix reproduced verbatim, row-major
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub agreements: usize,
    pub trials: usize,
    pub disagreements: Vec<Disagreement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub suites: Vec<SuiteReport>,
}

impl CrosscheckReport {
    pub fn all_agree(&self) -> bool {
        self.suites.iter().all(|s| s.agreements == s.trials)
    }
}

fn random_subset<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut out: Vec<usize> = idx.into_iter().take(k).collect();
    out.sort_unstable();
    out
}

fn signal_from_sets(n: usize, level_sets: &[(i32, &[usize])]) -> DVector<f64> {
    let mut x = DVector::zeros(n);
    for &(level, set) in level_sets {
        for &i in set {
            x[i] = f64::from(level);
        }
    }
    x
}

fn unique_for(
    a: &DMatrix<f64>,
    x0: &DVector<f64>,
    bounds: &BoxBounds,
) -> Result<bool, NspError> {
    let b = a * x0;
    Ok(check_unique(a, &b, bounds, x0)? == Uniqueness::Unique)
}

/// For random Gaussian instances, checks that every NSP verdict agrees
/// with the LP uniqueness certificate of the matching recovery program,
/// and that the uniform/positive equivalences hold across their probe
/// families. Any disagreement falsifies the implementation, not the
/// theorems, and is reported with the offending matrix.
pub fn nsp_recovery_crosscheck(
    streams: &Streams,
    trials: usize,
    dims: (usize, usize, usize),
) -> Result<CrosscheckReport, NspError> {
    let (m, n, k) = dims;
    assert!(k >= 1 && k <= n && n <= 10, "exhaustive regime wants small n");

    struct Suite {
        name: &'static str,
        id: u64,
        run: fn(&DMatrix<f64>, &mut rand_chacha::ChaCha8Rng, usize) -> Result<(bool, bool, String), NspError>,
    }

    // each returns (nsp_holds, recovery_unique, detail)
    let suites: Vec<Suite> = vec![
        Suite {
            name: "binary",
            id: 1,
            run: |a, rng, k| {
                let n = a.ncols();
                let set = random_subset(rng, n, k);
                let holds = check_nsp(a, &NspQuery::BNsp { k: set.clone() })?.holds;
                let x0 = signal_from_sets(n, &[(1, &set)]);
                let uniq = unique_for(a, &x0, &BoxBounds::uniform(n, Some(0.0), Some(1.0)))?;
                Ok((holds, uniq, format!("K={set:?}")))
            },
        },
        Suite {
            name: "bipolar_ternary",
            id: 2,
            run: |a, rng, k| {
                let n = a.ncols();
                let set = random_subset(rng, n, k);
                let (mut pos, mut neg) = (Vec::new(), Vec::new());
                for &i in &set {
                    if rng.gen_bool(0.5) {
                        pos.push(i)
                    } else {
                        neg.push(i)
                    }
                }
                let holds = check_nsp(
                    a,
                    &NspQuery::BtNsp {
                        k_pos: pos.clone(),
                        k_neg: neg.clone(),
                    },
                )?
                .holds;
                let x0 = signal_from_sets(n, &[(1, &pos), (-1, &neg)]);
                let uniq = unique_for(a, &x0, &BoxBounds::uniform(n, Some(-1.0), Some(1.0)))?;
                Ok((holds, uniq, format!("K1={pos:?} K-1={neg:?}")))
            },
        },
        Suite {
            name: "unipolar_finite",
            id: 3,
            run: |a, rng, k| {
                let n = a.ncols();
                let set = random_subset(rng, n, k);
                let (mut top, mut mid) = (Vec::new(), Vec::new());
                for &i in &set {
                    if rng.gen_bool(0.5) {
                        top.push(i)
                    } else {
                        mid.push(i)
                    }
                }
                let holds = check_nsp(
                    a,
                    &NspQuery::UfNsp {
                        k_top: top.clone(),
                        k: set.clone(),
                    },
                )?
                .holds;
                let x0 = signal_from_sets(n, &[(1, &mid), (2, &top)]);
                let uniq = unique_for(a, &x0, &BoxBounds::uniform(n, Some(0.0), Some(2.0)))?;
                Ok((holds, uniq, format!("K={set:?} K_L={top:?}")))
            },
        },
        Suite {
            name: "bipolar_finite",
            id: 4,
            run: |a, rng, k| {
                let n = a.ncols();
                let set = random_subset(rng, n, k);
                let mut groups: [Vec<usize>; 4] = Default::default();
                for &i in &set {
                    groups[rng.gen_range(0..4)].push(i);
                }
                let [bottom, mid_neg, mid_pos, top] = groups;
                let holds = check_nsp(
                    a,
                    &NspQuery::FNsp {
                        k_bottom: bottom.clone(),
                        k_top: top.clone(),
                        k: set.clone(),
                    },
                )?
                .holds;
                let x0 = signal_from_sets(
                    n,
                    &[(-2, &bottom), (-1, &mid_neg), (1, &mid_pos), (2, &top)],
                );
                let uniq = unique_for(a, &x0, &BoxBounds::uniform(n, Some(-2.0), Some(2.0)))?;
                Ok((
                    holds,
                    uniq,
                    format!("K={set:?} K-L1={bottom:?} KL2={top:?}"),
                ))
            },
        },
        Suite {
            name: "uniform_positive",
            id: 5,
            run: |a, rng, k| {
                let n = a.ncols();
                let set = random_subset(rng, n, k);
                let holds = check_nsp(a, &NspQuery::NspPlus { k: set.clone() })?.holds;
                let bounds01 = BoxBounds::uniform(n, Some(0.0), Some(1.0));
                // every binary signal supported inside K
                let mut subsets_ok = true;
                for mask in 0..(1u32 << set.len()) {
                    let chosen: Vec<usize> = set
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> b & 1 == 1)
                        .map(|(_, &i)| i)
                        .collect();
                    let x0 = signal_from_sets(n, &[(1, &chosen)]);
                    if !unique_for(a, &x0, &bounds01)? {
                        subsets_ok = false;
                        break;
                    }
                }
                // box-valued probes on K
                let mut probes_ok = true;
                for _ in 0..20 {
                    let mut x0 = DVector::zeros(n);
                    for &i in &set {
                        x0[i] = rng.gen_range(0.05..0.95);
                    }
                    if !unique_for(a, &x0, &bounds01)? {
                        probes_ok = false;
                        break;
                    }
                }
                let agree_inner = subsets_ok == probes_ok;
                let detail = format!(
                    "K={set:?} subsets_ok={subsets_ok} probes_ok={probes_ok}"
                );
                // three-way equivalence: fold the probe families together
                Ok((holds, subsets_ok && agree_inner, detail))
            },
        },
        Suite {
            name: "positive_l1",
            id: 6,
            run: |a, rng, k| {
                let n = a.ncols();
                let set = random_subset(rng, n, k);
                let nonneg = BoxBounds::nonnegative(n);
                let x_ind = signal_from_sets(n, &[(1, &set)]);
                let indicator_unique = unique_for(a, &x_ind, &nonneg)?;
                let mut probes_ok = true;
                for _ in 0..20 {
                    let mut x0 = DVector::zeros(n);
                    for &i in &set {
                        x0[i] = rng.gen_range(0.1..2.0);
                    }
                    if !unique_for(a, &x0, &nonneg)? {
                        probes_ok = false;
                        break;
                    }
                }
                Ok((indicator_unique, probes_ok, format!("K={set:?}")))
            },
        },
    ];

    let suite_reports: Result<Vec<SuiteReport>, NspError> = suites
        .iter()
        .map(|suite| {
            let results: Result<Vec<_>, NspError> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = streams.derive(&[suite.id, t as u64]);
                    let a = sample_gaussian_matrix(&mut rng, m, n);
                    let (nsp_holds, unique, detail) = (suite.run)(&a, &mut rng, k)?;
                    Ok((t as u64, nsp_holds, unique, detail, a))
                })
                .collect();
            let results = results?;
            let mut agreements = 0;
            let mut disagreements = Vec::new();
            for (trial, nsp_holds, unique, detail, a) in results {
                if nsp_holds == unique {
                    agreements += 1;
                } else {
                    let matrix = (0..a.nrows())
                        .map(|i| a.row(i).iter().copied().collect())
                        .collect();
                    disagreements.push(Disagreement {
                        trial,
                        nsp_holds,
                        recovery_unique: unique,
                        detail,
                        matrix,
                    });
                }
            }
            Ok(SuiteReport {
                suite: suite.name.to_string(),
                agreements,
                trials,
                disagreements,
            })
        })
        .collect();

    Ok(CrosscheckReport {
        m,
        n,
        k,
        trials,
        suites: suite_reports?,
    })
}

/// Convenience: the box and curve-facing profile for a sampled signal.
pub fn profile_of(alphabet: &Alphabet, signal: &crate::alphabet::Signal) -> SupportProfile {
    let counts: Vec<(i32, usize)> = alphabet
        .levels()
        .filter(|&l| l != 0)
        .map(|l| (l, signal.levels.iter().filter(|&&s| s == l).count()))
        .collect();
    SupportProfile::new(alphabet, signal.len(), &counts).expect("signal levels fit its alphabet")
}

#[cfg(test)]
mod tests {
    use super::*;


    #[test]
    fn kernel_of_identity_is_empty() {
        let a = DMatrix::<f64>::identity(3, 3);
        assert_eq!(kernel_basis(&a).ncols(), 0);
    }

    #[test]
    fn kernel_of_ones_row() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let k = kernel_basis(&a);
        assert_eq!(k.ncols(), 2);
        for j in 0..2 {
            let v = k.column(j);
            assert!(v.sum().abs() < 1e-10);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let mut rng = Streams::new(77).root();
        for _ in 0..10 {
            let a = sample_gaussian_matrix(&mut rng, 4, 9);
            let k = kernel_basis(&a);
            assert_eq!(k.ncols(), 5);
            let norm_a = a.norm();
            for j in 0..k.ncols() {
                assert!((&a * k.column(j)).norm() <= 1e-10 * norm_a.max(1.0));
            }
            // orthonormality
            let gram = k.transpose() * &k;
            assert!((gram - DMatrix::identity(5, 5)).norm() < 1e-10);
        }
    }

    #[test]
    fn ones_row_binary_nsp_fails_with_witness() {
        let a = DMatrix::from_row_slice(1, 4, &[1.0, 1.0, 1.0, 1.0]);
        let v = check_nsp(&a, &NspQuery::BNsp { k: vec![0] }).unwrap();
        assert!(!v.holds);
        let w = DVector::from_column_slice(&v.witness.unwrap());
        let kernel = kernel_basis(&a);
        assert!(verify_witness(&kernel, &NspQuery::BNsp { k: vec![0] }, &w));
        assert!(w[0] <= 1e-9);
    }

    #[test]
    fn trivial_kernel_always_holds() {
        let a = DMatrix::<f64>::identity(4, 4);
        for q in [
            NspQuery::BNsp { k: vec![0, 1] },
            NspQuery::NspPlus { k: vec![0, 1] },
            NspQuery::BtNsp {
                k_pos: vec![0],
                k_neg: vec![1],
            },
        ] {
            assert!(check_nsp(&a, &q).unwrap().holds);
        }
    }

    #[test]
    fn malformed_sets_are_rejected() {
        let a = DMatrix::<f64>::identity(4, 4);
        assert!(matches!(
            check_nsp(
                &a,
                &NspQuery::BtNsp {
                    k_pos: vec![1],
                    k_neg: vec![1]
                }
            ),
            Err(NspError::MalformedSets(_))
        ));
        assert!(matches!(
            check_nsp(
                &a,
                &NspQuery::UfNsp {
                    k_top: vec![3],
                    k: vec![0, 1]
                }
            ),
            Err(NspError::MalformedSets(_))
        ));
        assert!(matches!(
            check_nsp(&a, &NspQuery::BNsp { k: vec![9] }),
            Err(NspError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let n = MAX_SIGN_ENUM + 3;
        let a = DMatrix::from_row_slice(1, n, &vec![1.0; n]);
        let k: Vec<usize> = (0..MAX_SIGN_ENUM + 1).collect();
        let q = NspQuery::FNsp {
            k_bottom: vec![],
            k_top: vec![],
            k,
        };
        assert!(matches!(
            check_nsp(&a, &q),
            Err(NspError::ComplexityRefused { .. })
        ));
    }
}
