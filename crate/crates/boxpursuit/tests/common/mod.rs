//! Shared test oracles, deliberately independent of the library's own
//! computation paths: an adaptive Gauss-Kronrod integrator for the
//! Gaussian moment formulas, and a brute-force vertex enumerator for the
//! LP engine.

#![allow(dead_code)]

use boxpursuit::lp::LpProblem;
use nalgebra::{DMatrix, DVector};

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = WGK[7] * f(c);
    let mut gauss = WG[3] * f(c);
    for i in 0..7 {
        let x = h * XGK[i];
        let fsum = f(c - x) + f(c + x);
        kron += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    (kron * h, (kron - gauss).abs() * h)
}

/// Adaptive bisection with a 15-point Kronrod rule per panel.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
        let (val, err) = gk15(f, a, b);
        if err <= tol || depth >= 48 {
            return val;
        }
        let c = 0.5 * (a + b);
        recurse(f, a, c, tol / 2.0, depth + 1) + recurse(f, c, b, tol / 2.0, depth + 1)
    }
    recurse(f, a, b, tol, 0)
}

pub fn normal_pdf(u: f64) -> f64 {
    (-(u * u) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Quadrature version of the lower Gaussian moment.
pub fn ml_quadrature(tau: f64) -> f64 {
    let f = |u: f64| (u - tau) * (u - tau) * normal_pdf(u);
    integrate(&f, -40.0, tau, 1e-13)
}

/// Quadrature version of the upper Gaussian moment.
pub fn mu_quadrature(tau: f64) -> f64 {
    let f = |u: f64| (u - tau) * (u - tau) * normal_pdf(u);
    integrate(&f, tau, 40.0, 1e-13)
}

// ---------------------------------------------------------------------------
// brute-force LP oracle

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleOutcome {
    Optimal(f64),
    Infeasible,
}

/// Exhaustive vertex enumeration for problems whose variables are all
/// boxed (so the feasible set is a polytope and, if nonempty, has a
/// vertex attaining the optimum). Each vertex is the solution of n tight
/// constraints drawn from equalities (always tight), inequalities and
/// bound facets.
pub fn oracle_solve(p: &LpProblem) -> OracleOutcome {
    let n = p.n_vars();
    let n_eq = p.a_eq.nrows();
    assert!(
        p.bounds
            .iter()
            .all(|&(lo, hi)| lo.is_some() && hi.is_some()),
        "oracle needs fully boxed variables"
    );
    assert!(n_eq <= n, "more equalities than variables");

    // candidate tight rows beyond the equalities: (coefficients, rhs)
    let mut facets: Vec<(DVector<f64>, f64)> = Vec::new();
    for i in 0..p.a_ineq.nrows() {
        facets.push((p.a_ineq.row(i).transpose(), p.b_ineq[i]));
    }
    for j in 0..n {
        let mut e = DVector::zeros(n);
        e[j] = 1.0;
        facets.push((e.clone(), p.bounds[j].1.unwrap()));
        e[j] = -1.0;
        facets.push((e, -p.bounds[j].0.unwrap()));
    }

    let feasible = |x: &DVector<f64>| -> bool {
        const TOL: f64 = 1e-7;
        for i in 0..p.a_eq.nrows() {
            if (p.a_eq.row(i).transpose().dot(x) - p.b_eq[i]).abs() > TOL {
                return false;
            }
        }
        for i in 0..p.a_ineq.nrows() {
            if p.a_ineq.row(i).transpose().dot(x) - p.b_ineq[i] > TOL {
                return false;
            }
        }
        for j in 0..n {
            if x[j] < p.bounds[j].0.unwrap() - TOL || x[j] > p.bounds[j].1.unwrap() + TOL {
                return false;
            }
        }
        true
    };

    let need = n - n_eq;
    let mut best: Option<f64> = None;
    let mut chosen = vec![0usize; need];
    enumerate_subsets(facets.len(), need, &mut chosen, 0, 0, &mut |subset| {
        let mut m = DMatrix::zeros(n, n);
        let mut rhs = DVector::zeros(n);
        for i in 0..n_eq {
            m.row_mut(i).copy_from(&p.a_eq.row(i));
            rhs[i] = p.b_eq[i];
        }
        for (r, &fi) in subset.iter().enumerate() {
            m.row_mut(n_eq + r).copy_from(&facets[fi].0.transpose());
            rhs[n_eq + r] = facets[fi].1;
        }
        let lu = m.clone().lu();
        if let Some(x) = lu.solve(&rhs) {
            // discard ill-conditioned intersections
            if (&m * &x - &rhs).norm() <= 1e-8 * (1.0 + rhs.norm()) && feasible(&x) {
                let obj = p.objective.dot(&x);
                best = Some(best.map_or(obj, |b: f64| b.min(obj)));
            }
        }
    });

    match best {
        Some(v) => OracleOutcome::Optimal(v),
        None => OracleOutcome::Infeasible,
    }
}

fn enumerate_subsets(
    total: usize,
    need: usize,
    chosen: &mut Vec<usize>,
    start: usize,
    depth: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == need {
        visit(chosen);
        return;
    }
    for i in start..total {
        chosen[depth] = i;
        enumerate_subsets(total, need, chosen, i + 1, depth + 1, visit);
    }
}

/// Random boxed LP in the family the oracle covers. Half the instances
/// are built around a known interior point so both feasible and
/// infeasible cases occur.
pub fn random_bounded_lp<R: rand::Rng>(rng: &mut R) -> LpProblem {
    use rand_distr::StandardNormal;
    let n = rng.gen_range(1..=6);
    let n_eq = rng.gen_range(0..=2usize.min(n));
    let n_ineq = rng.gen_range(0..=4);

    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for _ in 0..n {
        lower.push(-(rng.gen_range(0.5..3.0)));
        upper.push(rng.gen_range(0.5..3.0));
    }
    let objective =
        DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
    let a_eq = DMatrix::from_fn(n_eq, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let a_ineq = DMatrix::from_fn(n_ineq, n, |_, _| rng.sample::<f64, _>(StandardNormal));

    let (b_eq, b_ineq) = if rng.gen_bool(0.5) {
        // anchored at a random interior point -> feasible
        let x = DVector::from_iterator(
            n,
            (0..n).map(|j| rng.gen_range(lower[j] * 0.8..upper[j] * 0.8)),
        );
        let slack = DVector::from_iterator(n_ineq, (0..n_ineq).map(|_| rng.gen_range(0.0..1.0)));
        (&a_eq * &x, &a_ineq * &x + slack)
    } else {
        (
            DVector::from_iterator(n_eq, (0..n_eq).map(|_| rng.sample::<f64, _>(StandardNormal))),
            DVector::from_iterator(
                n_ineq,
                (0..n_ineq).map(|_| rng.sample::<f64, _>(StandardNormal)),
            ),
        )
    };

    let mut p = LpProblem::new(objective);
    p.set_equalities(a_eq, b_eq);
    p.a_ineq = a_ineq;
    p.b_ineq = b_ineq;
    p.bounds = lower
        .into_iter()
        .zip(upper)
        .map(|(l, u)| (Some(l), Some(u)))
        .collect();
    p
}

/// Spearman rank correlation with average ranks on ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut ranks = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                ranks[k] = avg;
            }
            i = j + 1;
        }
        ranks
    };
    let rx = rank(xs);
    let ry = rank(ys);
    let n = xs.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for i in 0..xs.len() {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx).powi(2);
        vy += (ry[i] - my).powi(2);
    }
    if vx == 0.0 || vy == 0.0 {
        return 1.0; // constant sequences: treat as perfectly concordant
    }
    cov / (vx * vy).sqrt()
}
