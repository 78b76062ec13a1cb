//! Rational grids: the scalar simplex grid and the matrix grid of PSD tuples.
//!
//! Tuples are streamed in a canonical order (matrices ordered by trace, then
//! lexicographically by entries; tuples lexicographically by component) and
//! never materialized in bulk.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CpsdError, Result};
use crate::exact::{self, is_psd_exact, DenominatorRule, PsdTuple, Rational, SymMatrix};

/// A point of the scalar grid: nonnegative rationals summing to one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ScalarGridPoint {
    #[serde(with = "exact::rational_vec_serde")]
    pub coords: Vec<Rational>,
}

/// All points `x ≥ 0, Σx = 1` with `s·x` integral for some `s ≤ r`,
/// deduplicated and in lexicographic order.
pub fn enum_scalar_grid(n: usize, r: usize) -> Vec<ScalarGridPoint> {
    assert!(n >= 1 && r >= 1, "n and r must be positive");
    let mut out = BTreeSet::new();
    let mut parts = vec![0usize; n];
    for s in 1..=r {
        compositions(s, 0, &mut parts, &mut |c| {
            let coords = c
                .iter()
                .map(|&p| Rational::new(BigInt::from(p), BigInt::from(s)))
                .collect();
            out.insert(ScalarGridPoint { coords });
        });
    }
    out.into_iter().collect()
}

fn compositions(rem: usize, k: usize, parts: &mut [usize], f: &mut impl FnMut(&[usize])) {
    if k + 1 == parts.len() {
        parts[k] = rem;
        f(parts);
        return;
    }
    for p in 0..=rem {
        parts[k] = p;
        compositions(rem - p, k + 1, parts, f);
    }
}

/// Rationals `p/q` with `1 ≤ q ≤ r` and `lo ≤ p/q ≤ hi`, ascending.
fn admissible_values(r: usize, lo: &Rational, hi: &Rational) -> Vec<Rational> {
    let mut set = BTreeSet::new();
    for q in 1..=r {
        let qb = BigInt::from(q);
        let pmin = (lo * Rational::from_integer(qb.clone()))
            .ceil()
            .to_integer();
        let pmax = (hi * Rational::from_integer(qb.clone()))
            .floor()
            .to_integer();
        let mut p = pmin;
        while p <= pmax {
            set.insert(Rational::new(p.clone(), qb.clone()));
            p += 1;
        }
    }
    set.into_iter().collect()
}

pub fn matrix_order(a: &SymMatrix, b: &SymMatrix) -> std::cmp::Ordering {
    exact::trace(a)
        .cmp(&exact::trace(b))
        .then_with(|| a.upper().cmp(b.upper()))
}

/// All `r×r` PSD matrices whose entries have denominator at most `r` and
/// whose trace is at most `trace_cap`, in canonical order.
pub fn enum_psd_matrices(r: usize, trace_cap: &Rational) -> Vec<SymMatrix> {
    enum_psd_matrices_with(r, trace_cap, DenominatorRule::PerEntry)
}

pub fn enum_psd_matrices_with(
    r: usize,
    trace_cap: &Rational,
    rule: DenominatorRule,
) -> Vec<SymMatrix> {
    assert!(r >= 1, "r must be positive");
    if trace_cap.is_negative() {
        return Vec::new();
    }
    let diag_values = admissible_values(r, &Rational::zero(), trace_cap);
    let mut diags = Vec::new();
    let mut cur = Vec::with_capacity(r);
    diagonals(&diag_values, r, trace_cap, &mut cur, &mut diags);

    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| ((i + 1)..r).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for d in diags {
        // |x_ij| ≤ sqrt(d_i d_j) ≤ (d_i + d_j)/2 is necessary for PSD
        let choices: Vec<Vec<Rational>> = pairs
            .iter()
            .map(|&(i, j)| {
                let bound = (&d[i] + &d[j]) / exact::int(2);
                let prod = &d[i] * &d[j];
                admissible_values(r, &-bound.clone(), &bound)
                    .into_iter()
                    .filter(|x| x * x <= prod)
                    .collect()
            })
            .collect();
        let mut pick = vec![0usize; pairs.len()];
        loop {
            let mut m = SymMatrix::diag(&d);
            for (k, &(i, j)) in pairs.iter().enumerate() {
                m.set(i, j, choices[k][pick[k]].clone());
            }
            if rule.admits(&m, r) && is_psd_exact(&m) {
                out.push(m);
            }
            // odometer over off-diagonal choices
            let mut k = pairs.len();
            let mut wrapped = true;
            while k > 0 {
                k -= 1;
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    wrapped = false;
                    break;
                }
                pick[k] = 0;
            }
            if wrapped {
                break;
            }
        }
    }
    out.sort_by(matrix_order);
    out
}

fn diagonals(
    values: &[Rational],
    r: usize,
    cap: &Rational,
    cur: &mut Vec<Rational>,
    out: &mut Vec<Vec<Rational>>,
) {
    if cur.len() == r {
        out.push(cur.clone());
        return;
    }
    let used: Rational = cur.iter().sum();
    for v in values {
        if &used + v > *cap {
            break;
        }
        cur.push(v.clone());
        diagonals(values, r, cap, cur, out);
        cur.pop();
    }
}

/// `γ_r`: the number of admissible `r×r` PSD matrices of trace at most one.
pub fn gamma(r: usize) -> usize {
    enum_psd_matrices(r, &Rational::one()).len()
}

/// Upper bound on the number of tuples: `γ^r` if `n ≤ r`, else `C(n, r)·γ^r`.
pub fn tuple_count_bound(n: usize, r: usize, gamma: usize) -> BigUint {
    let g = num_traits::pow(BigUint::from(gamma), r);
    if n <= r {
        g
    } else {
        binomial(n, r) * g
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Catalogs up to this size keep a dense table of pairwise inner products.
const INNER_TABLE_MAX: usize = 2048;

/// The sorted list of admissible matrices with trace at most one, plus
/// pairwise trace inner products (tabulated for small catalogs).
#[derive(Debug)]
pub struct MatrixCatalog {
    r: usize,
    rule: DenominatorRule,
    mats: Vec<SymMatrix>,
    traces: Vec<Rational>,
    inner: Vec<Rational>,
}

impl MatrixCatalog {
    pub fn new(r: usize, rule: DenominatorRule) -> Self {
        let mats = enum_psd_matrices_with(r, &Rational::one(), rule);
        let traces = mats.iter().map(exact::trace).collect();
        let k = mats.len();
        let mut inner = Vec::new();
        if k <= INNER_TABLE_MAX {
            inner.reserve(k * k);
            for a in &mats {
                for b in &mats {
                    inner.push(exact::trace_inner_unchecked(a, b));
                }
            }
        }
        Self {
            r,
            rule,
            mats,
            traces,
            inner,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rule(&self) -> DenominatorRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn matrix(&self, a: usize) -> &SymMatrix {
        &self.mats[a]
    }

    pub fn trace_of(&self, a: usize) -> &Rational {
        &self.traces[a]
    }

    /// `⟨X_a, X_b⟩`
    #[inline]
    pub fn inner(&self, a: usize, b: usize) -> Cow<'_, Rational> {
        if self.inner.is_empty() {
            Cow::Owned(exact::trace_inner_unchecked(&self.mats[a], &self.mats[b]))
        } else {
            Cow::Borrowed(&self.inner[a * self.mats.len() + b])
        }
    }

    /// Distinct traces in ascending order.
    pub fn distinct_traces(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.traces.clone();
        v.dedup();
        v
    }

    pub fn tuple(&self, idx: &[usize]) -> PsdTuple {
        PsdTuple::new_unchecked(self.r, idx.iter().map(|&a| self.mats[a].clone()).collect())
    }

    /// Gram matrix of the tuple given by catalog indices.
    pub fn gram(&self, idx: &[usize]) -> SymMatrix {
        let n = idx.len();
        let mut g = SymMatrix::zeros(n);
        let nz: Vec<usize> = (0..n).filter(|&i| !self.traces[idx[i]].is_zero()).collect();
        for (p, &i) in nz.iter().enumerate() {
            for &j in &nz[p..] {
                let v = self.inner(idx[i], idx[j]);
                if !v.is_zero() {
                    g.set(i, j, v.into_owned());
                }
            }
        }
        g
    }
}

/// Streaming enumeration of all tuples of the matrix grid for `(n, r)`.
pub struct GridEnumeration {
    catalog: Arc<MatrixCatalog>,
    n: usize,
    first_trace: Option<Rational>,
    // reachable[m]: traces sums attainable with m matrices, capped at one
    reachable: Vec<BTreeSet<Rational>>,
    idx: Vec<usize>,
    rem: Vec<Rational>,
    state: IterState,
    emitted: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

/// Streams every tuple for `(n, r)` under the default denominator rule.
pub fn enum_tuples(n: usize, r: usize) -> GridEnumeration {
    GridEnumeration::new(
        Arc::new(MatrixCatalog::new(r, DenominatorRule::PerEntry)),
        n,
    )
}

impl GridEnumeration {
    pub fn new(catalog: Arc<MatrixCatalog>, n: usize) -> Self {
        assert!(n >= 1, "n must be positive");
        let mut reachable = vec![BTreeSet::from([Rational::zero()])];
        let singles: BTreeSet<Rational> = catalog.distinct_traces().into_iter().collect();
        for m in 1..=n {
            let prev = &reachable[m - 1];
            let mut next = BTreeSet::new();
            for a in prev {
                for b in &singles {
                    let s = a + b;
                    if s <= Rational::one() {
                        next.insert(s);
                    }
                }
            }
            let stable = next == *prev;
            reachable.push(next);
            if stable {
                // every further level equals this one
                for _ in (m + 1)..=n {
                    let last = reachable.last().unwrap().clone();
                    reachable.push(last);
                }
                break;
            }
        }
        Self {
            catalog,
            n,
            first_trace: None,
            reachable,
            idx: vec![0; n],
            rem: vec![Rational::zero(); n + 1],
            state: IterState::Fresh,
            emitted: 0,
        }
    }

    /// Restricts the stream to tuples whose first matrix has the given trace.
    pub fn with_first_trace(mut self, trace: Rational) -> Self {
        self.first_trace = Some(trace);
        self
    }

    pub fn catalog(&self) -> &Arc<MatrixCatalog> {
        &self.catalog
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of tuples emitted so far; the total once exhausted.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    fn valid(&self, p: usize, a: usize) -> bool {
        let t = self.catalog.trace_of(a);
        if let (0, Some(ft)) = (p, &self.first_trace) {
            if t != ft {
                return false;
            }
        }
        if t > &self.rem[p] {
            return false;
        }
        let after = &self.rem[p] - t;
        self.reachable[self.n - p - 1].contains(&after)
    }

    fn first_from(&self, p: usize, start: usize) -> Option<usize> {
        (start..self.catalog.len())
            .take_while(|&a| self.catalog.trace_of(a) <= &self.rem[p])
            .find(|&a| self.valid(p, a))
    }

    fn descend(&mut self, from: usize) -> bool {
        for p in from..self.n {
            match self.first_from(p, 0) {
                Some(a) => {
                    self.idx[p] = a;
                    self.rem[p + 1] = &self.rem[p] - self.catalog.trace_of(a);
                }
                None => return false,
            }
        }
        true
    }

    /// Advances and returns the catalog indices of the next tuple.
    pub fn next_indices(&mut self) -> Option<&[usize]> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                self.state = IterState::Running;
                self.rem[0] = Rational::one();
                if !self.reachable[self.n].contains(&Rational::one()) || !self.descend(0) {
                    self.state = IterState::Done;
                    return None;
                }
            }
            IterState::Running => {
                let mut p = self.n;
                loop {
                    if p == 0 {
                        self.state = IterState::Done;
                        return None;
                    }
                    p -= 1;
                    if let Some(a) = self.first_from(p, self.idx[p] + 1) {
                        self.idx[p] = a;
                        self.rem[p + 1] = &self.rem[p] - self.catalog.trace_of(a);
                        // `valid` guarantees the suffix can be completed
                        let completed = self.descend(p + 1);
                        debug_assert!(completed);
                        break;
                    }
                }
            }
        }
        self.emitted += 1;
        Some(&self.idx)
    }

    /// Visits every remaining tuple, aborting once more than `limit` tuples
    /// have been produced.
    pub fn try_for_each(
        &mut self,
        limit: u64,
        mut f: impl FnMut(&MatrixCatalog, &[usize]),
    ) -> Result<u64> {
        let catalog = Arc::clone(&self.catalog);
        let n = self.n;
        loop {
            let count = self.emitted + 1;
            let Some(idx) = self.next_indices() else {
                break;
            };
            if count > limit {
                return Err(CpsdError::ResourceCap {
                    what: format!("tuple enumeration for n={n}, r={}", catalog.r()),
                    limit,
                });
            }
            f(&catalog, idx);
        }
        Ok(self.emitted)
    }
}

impl Iterator for GridEnumeration {
    type Item = PsdTuple;

    fn next(&mut self) -> Option<PsdTuple> {
        let catalog = Arc::clone(&self.catalog);
        self.next_indices().map(|idx| catalog.tuple(idx))
    }
}

/// Counts the tuples for `(n, r)` without enumerating them, by convolving the
/// per-trace matrix counts.
pub fn count_tuples(n: usize, r: usize, rule: DenominatorRule) -> BigUint {
    let catalog = MatrixCatalog::new(r, rule);
    count_tuples_in(&catalog, n)
}

pub fn count_tuples_in(catalog: &MatrixCatalog, n: usize) -> BigUint {
    use std::collections::BTreeMap;
    let mut per_trace: BTreeMap<Rational, BigUint> = BTreeMap::new();
    for a in 0..catalog.len() {
        *per_trace.entry(catalog.trace_of(a).clone()).or_default() += 1u32;
    }
    let mut dist: BTreeMap<Rational, BigUint> =
        BTreeMap::from([(Rational::zero(), BigUint::one())]);
    for _ in 0..n {
        let mut next: BTreeMap<Rational, BigUint> = BTreeMap::new();
        for (s, c) in &dist {
            for (t, k) in &per_trace {
                let sum = s + t;
                if sum <= Rational::one() {
                    *next.entry(sum).or_default() += c * k;
                }
            }
        }
        dist = next;
    }
    dist.remove(&Rational::one()).unwrap_or_default()
}

/// Partitioned enumeration: one stream per distinct first-matrix trace, in
/// canonical order. Concatenating the streams reproduces [`enum_tuples`].
pub fn partitions(catalog: &Arc<MatrixCatalog>, n: usize) -> Vec<GridEnumeration> {
    catalog
        .distinct_traces()
        .into_iter()
        .map(|t| GridEnumeration::new(Arc::clone(catalog), n).with_first_trace(t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn scalar_grid_examples() {
        let g = enum_scalar_grid(2, 1);
        assert_eq!(g.len(), 2);
        let g = enum_scalar_grid(2, 2);
        let pts: Vec<Vec<Rational>> = g.into_iter().map(|p| p.coords).collect();
        assert_eq!(
            pts,
            vec![
                vec![int(0), int(1)],
                vec![rat(1, 2), rat(1, 2)],
                vec![int(1), int(0)],
            ]
        );
        assert_eq!(enum_scalar_grid(3, 2).len(), 6);
    }

    #[test]
    fn psd_matrix_examples() {
        assert_eq!(
            enum_psd_matrices(1, &int(1)),
            vec![SymMatrix::diag(&[int(0)]), SymMatrix::diag(&[int(1)])]
        );
        assert_eq!(enum_psd_matrices(1, &int(2)).len(), 3);
        assert_eq!(gamma(1), 2);
        // diagonals (0,0),(1/2,0),(0,1/2),(1,0),(0,1) plus (1/2,1/2) with x ∈ {0, ±1/2}
        assert_eq!(gamma(2), 8);
    }

    #[test]
    fn canonical_matrix_order() {
        let ms = enum_psd_matrices(2, &int(1));
        for w in ms.windows(2) {
            assert_eq!(matrix_order(&w[0], &w[1]), std::cmp::Ordering::Less);
        }
        assert!(ms[0].is_zero());
    }

    #[test]
    fn tuple_examples() {
        let t: Vec<_> = enum_tuples(1, 1).collect();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].mats()[0], SymMatrix::diag(&[int(1)]));
        assert_eq!(enum_tuples(2, 1).count(), 2);
        assert_eq!(enum_tuples(2, 2).count(), 14);
    }

    #[test]
    fn counting_matches_streaming() {
        for (n, r) in [
            (1, 1),
            (2, 1),
            (3, 1),
            (2, 2),
            (3, 2),
            (4, 2),
            (2, 3),
            (3, 3),
        ] {
            let streamed = enum_tuples(n, r).count();
            assert_eq!(
                count_tuples(n, r, DenominatorRule::PerEntry),
                BigUint::from(streamed),
                "n={n} r={r}"
            );
        }
    }

    #[test]
    fn partitions_concatenate_to_full_stream() {
        let cat = Arc::new(MatrixCatalog::new(2, DenominatorRule::PerEntry));
        let full: Vec<Vec<usize>> = {
            let mut e = GridEnumeration::new(Arc::clone(&cat), 3);
            let mut v = Vec::new();
            while let Some(ix) = e.next_indices() {
                v.push(ix.to_vec());
            }
            v
        };
        let mut parts = Vec::new();
        for mut p in partitions(&cat, 3) {
            while let Some(ix) = p.next_indices() {
                parts.push(ix.to_vec());
            }
        }
        assert_eq!(full, parts);
    }

    #[test]
    fn cap_aborts_enumeration() {
        let mut e = enum_tuples(3, 2);
        let err = e.try_for_each(5, |_, _| {}).unwrap_err();
        assert!(err.is_resource_cap());
    }

    #[test]
    fn common_denominator_rule_is_stricter() {
        let per = MatrixCatalog::new(3, DenominatorRule::PerEntry);
        let common = MatrixCatalog::new(3, DenominatorRule::CommonPerMatrix);
        assert!(common.len() < per.len());
        for a in 0..common.len() {
            assert!(DenominatorRule::PerEntry.admits(common.matrix(a), 3));
        }
    }
}
