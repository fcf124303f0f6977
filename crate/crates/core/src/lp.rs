//! Small dense linear programs `maximize cᵀx subject to Ax = b, x ≥ 0`.
//!
//! Two interchangeable methods: a two-phase tableau simplex with Bland's rule
//! and exhaustive enumeration of basic solutions. Enumeration is exact up to
//! the linear solves and is used for tiny instances; the simplex covers the
//! rest.

use nalgebra::{DMatrix, DVector};

const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 50_000;
/// Upper bound on the number of bases [`Method::Auto`] will enumerate.
pub const ENUMERATION_CAP: u64 = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Simplex,
    Enumeration,
    /// Enumeration when at most [`ENUMERATION_CAP`] bases exist, simplex otherwise.
    Auto,
}

/// Equality-form LP.
#[derive(Clone, Debug, PartialEq)]
pub struct Lp {
    pub c: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl Lp {
    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn solve(&self, method: Method) -> LpOutcome {
        match method {
            Method::Simplex => simplex(self),
            Method::Enumeration => enumerate(self),
            Method::Auto => {
                let m = independent_rows(self).map(|(a, _)| a.len()).unwrap_or(0);
                if binomial(self.num_vars() as u64, m as u64) <= ENUMERATION_CAP {
                    enumerate(self)
                } else {
                    simplex(self)
                }
            }
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u64::MAX,
        };
    }
    acc
}

fn simplex(lp: &Lp) -> LpOutcome {
    let m = lp.a.len();
    let n = lp.num_vars();
    let width = n + m + 1;
    let mut t = vec![vec![0.0; width]; m];
    for i in 0..m {
        let sign = if lp.b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = sign * lp.a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][width - 1] = sign * lp.b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut phase1 = vec![0.0; n + m];
    phase1[n..].iter_mut().for_each(|c| *c = 1.0);
    if optimize(&mut t, &mut basis, &phase1, n + m).is_err() {
        return LpOutcome::Infeasible;
    }
    let infeas: f64 = basis.iter().zip(&t).filter(|(&j, _)| j >= n).map(|(_, row)| row[width - 1]).sum();
    let scale = 1.0 + lp.b.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if infeas > FEAS_TOL * scale {
        return LpOutcome::Infeasible;
    }
    // Pivot remaining artificials out where an original column allows it.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[i][j].abs() > 1e-9) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }

    let mut phase2 = vec![0.0; n + m];
    for j in 0..n {
        phase2[j] = -lp.c[j];
    }
    if optimize(&mut t, &mut basis, &phase2, n).is_err() {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![0.0; n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][width - 1].max(0.0);
        }
    }
    let value = lp.c.iter().zip(&x).map(|(c, x)| c * x).sum();
    LpOutcome::Optimal { x, value }
}

/// Minimize `cost·x` over the tableau, letting only columns `< allowed` enter.
fn optimize(t: &mut [Vec<f64>], basis: &mut [usize], cost: &[f64], allowed: usize) -> Result<(), ()> {
    let rhs = t.first().map_or(0, |r| r.len() - 1);
    for _ in 0..MAX_PIVOTS {
        let entering = (0..allowed).filter(|j| !basis.contains(j)).find(|&j| {
            let reduced = cost[j] - basis.iter().zip(t.iter()).map(|(&bi, row)| cost[bi] * row[j]).sum::<f64>();
            reduced < -PIVOT_TOL
        });
        let Some(j) = entering else { return Ok(()) };
        let mut leave: Option<(usize, f64)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[j] > PIVOT_TOL {
                let ratio = row[rhs] / row[j];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, r)) if ratio < r - 1e-14 || (ratio <= r + 1e-14 && basis[i] < basis[k]) => Some((i, ratio)),
                    keep => keep,
                };
            }
        }
        let Some((i, _)) = leave else { return Err(()) };
        pivot(t, basis, i, j);
    }
    Ok(())
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], i: usize, j: usize) {
    let p = t[i][j];
    t[i].iter_mut().for_each(|v| *v /= p);
    let pivot_row = t[i].clone();
    for (k, row) in t.iter_mut().enumerate() {
        if k != i && row[j] != 0.0 {
            let f = row[j];
            row.iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= f * pv);
        }
    }
    basis[i] = j;
}

/// Drop linearly dependent rows of `[A | b]`; `None` if the system is inconsistent.
fn independent_rows(lp: &Lp) -> Option<(Vec<Vec<f64>>, Vec<f64>)> {
    let n = lp.num_vars();
    let mut rows: Vec<Vec<f64>> = lp.a.iter().zip(&lp.b).map(|(r, b)| r.iter().copied().chain([*b]).collect()).collect();
    let scale = rows.iter().flatten().fold(1.0f64, |a, v| a.max(v.abs()));
    let mut keep = Vec::new();
    let mut reduced: Vec<Vec<f64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for (idx, row) in rows.iter_mut().enumerate() {
        for (r, &pc) in reduced.iter().zip(&pivots) {
            let f = row[pc] / r[pc];
            row.iter_mut().zip(r).for_each(|(v, rv)| *v -= f * rv);
        }
        match (0..n).max_by(|&a, &b| row[a].abs().total_cmp(&row[b].abs())) {
            Some(pc) if row[pc].abs() > 1e-10 * scale => {
                pivots.push(pc);
                reduced.push(row.clone());
                keep.push(idx);
            }
            _ => {
                if row[n].abs() > 1e-9 * scale {
                    return None;
                }
            }
        }
    }
    Some((keep.iter().map(|&i| lp.a[i].clone()).collect(), keep.iter().map(|&i| lp.b[i]).collect()))
}

fn enumerate(lp: &Lp) -> LpOutcome {
    let n = lp.num_vars();
    let Some((a, b)) = independent_rows(lp) else { return LpOutcome::Infeasible };
    let m = a.len();
    if m == 0 {
        // Only x ≥ 0 remains.
        return if lp.c.iter().any(|c| *c > 0.0) {
            LpOutcome::Unbounded
        } else {
            LpOutcome::Optimal { x: vec![0.0; n], value: 0.0 }
        };
    }
    let full = DMatrix::from_fn(m, n, |i, j| a[i][j]);
    let rhs = DVector::from_column_slice(&b);
    let scale = 1.0 + b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let mut best: Option<(Vec<f64>, f64, Vec<usize>)> = None;
    let mut cols: Vec<usize> = (0..m).collect();
    loop {
        let sub = full.select_columns(&cols);
        if let Some(xb) = sub.clone().lu().solve(&rhs) {
            let residual = (&sub * &xb - &rhs).amax();
            if residual <= 1e-9 * scale && xb.iter().all(|v| *v >= -FEAS_TOL * scale) {
                let mut x = vec![0.0; n];
                for (k, &j) in cols.iter().enumerate() {
                    x[j] = xb[k].max(0.0);
                }
                let value: f64 = lp.c.iter().zip(&x).map(|(c, x)| c * x).sum();
                if best.as_ref().is_none_or(|(_, v, _)| value > *v + 1e-12) {
                    best = Some((x, value, cols.clone()));
                }
            }
        }
        if !next_combination(&mut cols, n) {
            break;
        }
    }
    let Some((x, value, basis)) = best else { return LpOutcome::Infeasible };
    // The best vertex is optimal unless some edge direction improves without bound.
    if unbounded_ray(&full, &basis, &lp.c) {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal { x, value }
}

/// Reduced-cost test at the optimal basis: an improving nonbasic column whose
/// direction `−B⁻¹A_j` is nonnegative is an unbounded ray.
fn unbounded_ray(a: &DMatrix<f64>, basis: &[usize], c: &[f64]) -> bool {
    let bmat = a.select_columns(basis);
    let Some(inv) = bmat.try_inverse() else { return false };
    let cb = DVector::from_iterator(basis.len(), basis.iter().map(|&j| c[j]));
    (0..a.ncols()).filter(|j| !basis.contains(j)).any(|j| {
        let d = &inv * a.column(j);
        let reduced = c[j] - cb.dot(&d);
        reduced > PIVOT_TOL && d.iter().all(|v| *v <= PIVOT_TOL)
    })
}

fn next_combination(cols: &mut [usize], n: usize) -> bool {
    let k = cols.len();
    for i in (0..k).rev() {
        if cols[i] < n - k + i {
            cols[i] += 1;
            for j in i + 1..k {
                cols[j] = cols[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn value(o: &LpOutcome) -> f64 {
        match o {
            LpOutcome::Optimal { value, .. } => *value,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn textbook() {
        // max 3x + 2y, x + y + s1 = 4, x + 3y + s2 = 6, x ≤ 3 (slack s3).
        let lp = Lp {
            c: vec![3.0, 2.0, 0.0, 0.0, 0.0],
            a: vec![vec![1.0, 1.0, 1.0, 0.0, 0.0], vec![1.0, 3.0, 0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0, 0.0, 1.0]],
            b: vec![4.0, 6.0, 3.0],
        };
        for m in [Method::Simplex, Method::Enumeration] {
            assert!((value(&lp.solve(m)) - 11.0).abs() < 1e-12);
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let inf = Lp { c: vec![1.0, 0.0], a: vec![vec![1.0, 1.0]], b: vec![-1.0] };
        assert_eq!(inf.solve(Method::Simplex), LpOutcome::Infeasible);
        assert_eq!(inf.solve(Method::Enumeration), LpOutcome::Infeasible);
        let unb = Lp { c: vec![1.0, 0.0], a: vec![vec![1.0, -1.0]], b: vec![1.0] };
        assert_eq!(unb.solve(Method::Simplex), LpOutcome::Unbounded);
        assert_eq!(unb.solve(Method::Enumeration), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let lp = Lp {
            c: vec![1.0, 1.0],
            a: vec![vec![1.0, 1.0], vec![2.0, 2.0]],
            b: vec![1.0, 2.0],
        };
        assert!((value(&lp.solve(Method::Simplex)) - 1.0).abs() < 1e-12);
        assert!((value(&lp.solve(Method::Enumeration)) - 1.0).abs() < 1e-12);
        let bad = Lp { b: vec![1.0, 3.0], ..lp };
        assert_eq!(bad.solve(Method::Enumeration), LpOutcome::Infeasible);
        assert_eq!(bad.solve(Method::Simplex), LpOutcome::Infeasible);
    }

    #[test]
    fn methods_agree_on_random_bounded_lps() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m = rng.random_range(1..=3);
            let n = rng.random_range(m + 1..=7);
            let mut a: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            // A positive row keeps the feasible set bounded.
            a[0] = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
            let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            let b: Vec<f64> = a.iter().map(|r| r.iter().zip(&x0).map(|(p, q)| p * q).sum()).collect();
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let lp = Lp { c, a, b };
            let (s, e) = (value(&lp.solve(Method::Simplex)), value(&lp.solve(Method::Enumeration)));
            assert!((s - e).abs() < 1e-8 * (1.0 + s.abs()), "{s} vs {e} on {lp:?}");
        }
    }

    #[test]
    fn combinations() {
        let mut c = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut c, 4) {
            count += 1;
        }
        assert_eq!(count, binomial(4, 2));
        assert_eq!(binomial(20, 5), 15504);
    }
}
