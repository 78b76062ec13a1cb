//! Independent oracles shared by the integration tests. Nothing here calls the
//! library's PSD test, enumerators or solver.

#![allow(dead_code)]

use std::collections::BTreeSet;

use cpsd::exact::{rat, Rational};
use cpsd::SymMatrix;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// Every rational in `[lo, hi]` whose reduced denominator is at most `r`.
pub fn fractions(r: i64, lo: i64, hi: i64) -> Vec<Rational> {
    let mut s = BTreeSet::new();
    for q in 1..=r {
        for p in lo * q..=hi * q {
            s.insert(rat(p, q));
        }
    }
    s.into_iter().collect()
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn det(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let v = &f * &a[c][j];
                a[i][j] -= v;
            }
        }
    }
    d
}

/// PSD iff every principal minor is nonnegative.
pub fn psd_by_minors(m: &SymMatrix) -> bool {
    let n = m.dim();
    let rows = m.rows();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<Rational>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| rows[i][j].clone()).collect())
            .collect();
        if det(&sub).is_negative() {
            return false;
        }
    }
    true
}

/// All admissible `r×r` matrices of trace at most one, by brute force over
/// every symmetric filling.
pub fn naive_psd_catalog(r: usize) -> Vec<SymMatrix> {
    let diag = fractions(r as i64, 0, 1);
    let off = fractions(r as i64, -1, 1);
    let cells: Vec<(usize, usize)> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; cells.len()];
    loop {
        let mut m = SymMatrix::zeros(r);
        for (c, &(i, j)) in cells.iter().enumerate() {
            let pool = if i == j { &diag } else { &off };
            m.set(i, j, pool[choice[c]].clone());
        }
        let tr: Rational = (0..r).map(|i| m.get(i, i).clone()).sum();
        if tr <= Rational::one() && psd_by_minors(&m) {
            out.push(m);
        }
        let mut c = 0;
        loop {
            if c == cells.len() {
                return out;
            }
            let (i, j) = cells[c];
            let len = if i == j { diag.len() } else { off.len() };
            choice[c] += 1;
            if choice[c] < len {
                break;
            }
            choice[c] = 0;
            c += 1;
        }
    }
}

/// Number of `n`-tuples from the naive catalog whose traces sum to one.
pub fn naive_tuple_count(n: usize, catalog: &[SymMatrix]) -> u64 {
    let traces: Vec<Rational> = catalog
        .iter()
        .map(|m| (0..m.dim()).map(|i| m.get(i, i).clone()).sum())
        .collect();
    fn go(depth: usize, n: usize, acc: Rational, traces: &[Rational]) -> u64 {
        if depth == n {
            return u64::from(acc.is_one());
        }
        traces
            .iter()
            .filter(|t| &acc + *t <= Rational::one())
            .map(|t| go(depth + 1, n, &acc + t, traces))
            .sum()
    }
    go(0, n, Rational::zero(), &traces)
}

/// `Σ_ij a_ij b_ij`, computed from full rows.
pub fn frobenius(a: &SymMatrix, b: &SymMatrix) -> Rational {
    let (ra, rb) = (a.rows(), b.rows());
    let mut s = Rational::zero();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            s += &ra[i][j] * &rb[i][j];
        }
    }
    s
}

pub fn small_rational(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Rational {
    rat(
        rng.gen_range(-max_num..=max_num),
        rng.gen_range(1..=max_den),
    )
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, max_num: i64, max_den: i64) -> SymMatrix {
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, small_rational(rng, max_num, max_den));
        }
    }
    m
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}
