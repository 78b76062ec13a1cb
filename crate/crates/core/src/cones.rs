//! Membership and separation for the polyhedral cones.
//!
//! - `C_r^n`: conic hull of Gram matrices of tuples from the matrix grid.
//! - `D_r^n`: its dual, checked tuple by tuple.
//! - `O_r^n` / `O_r^{n*}`: the scalar analogues over the simplex grid.

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CpsdError, Result};
use crate::exact::{
    self, int, is_psd_exact, trace_inner_unchecked, BlockIndex, DenominatorRule, PsdTuple,
    Rational, SymMatrix,
};
use crate::gridgen::{self, GridEnumeration, MatrixCatalog, ScalarGridPoint};
use crate::lp::{self, LpProblem, Relation};
use crate::Limits;

/// Exact Gram matrix `(⟨X_i, X_j⟩)_{ij}` of a tuple.
pub fn gram(t: &PsdTuple) -> SymMatrix {
    let mats = t.mats();
    let n = mats.len();
    SymMatrix::from_fn(n, |i, j| trace_inner_unchecked(&mats[i], &mats[j]))
}

/// Deduplicated Gram images of the matrix grid for `(n, r)`, in order of
/// first appearance in the canonical tuple stream.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub n: usize,
    pub r: usize,
    pub rule: DenominatorRule,
    pub grams: Vec<SymMatrix>,
    /// One generating tuple per gram.
    pub provenance: Vec<PsdTuple>,
    /// Tuples visited before deduplication.
    pub tuples_seen: u64,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.grams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grams.is_empty()
    }
}

/// Generator set for `C_r^n` under the default denominator rule.
pub fn build_generators(n: usize, r: usize, limits: &Limits) -> Result<GeneratorSet> {
    build_generators_with(n, r, DenominatorRule::PerEntry, limits, 1)
}

/// Generator construction with an explicit denominator rule. With
/// `threads > 1` the first-trace partitions are scanned concurrently and
/// merged in canonical order, giving the same result as a single stream.
pub fn build_generators_with(
    n: usize,
    r: usize,
    rule: DenominatorRule,
    limits: &Limits,
    threads: usize,
) -> Result<GeneratorSet> {
    if n == 0 || r == 0 {
        return Err(CpsdError::InvalidArgument(
            "n and r must be positive".into(),
        ));
    }
    let catalog = Arc::new(MatrixCatalog::new(r, rule));
    let chunks: Vec<(Vec<(SymMatrix, Vec<usize>)>, u64)> = if threads <= 1 {
        let mut e = GridEnumeration::new(Arc::clone(&catalog), n);
        vec![collect_unique(&mut e, limits.max_tuples)?]
    } else {
        let parts = gridgen::partitions(&catalog, n);
        let slots: Vec<std::sync::Mutex<Option<GridEnumeration>>> = parts
            .into_iter()
            .map(|p| std::sync::Mutex::new(Some(p)))
            .collect();
        let next = std::sync::atomic::AtomicUsize::new(0);
        let results: Vec<std::sync::Mutex<Option<Result<_>>>> = (0..slots.len())
            .map(|_| std::sync::Mutex::new(None))
            .collect();
        std::thread::scope(|s| {
            for _ in 0..threads.min(slots.len()) {
                s.spawn(|| loop {
                    let k = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if k >= slots.len() {
                        break;
                    }
                    let mut e = slots[k].lock().unwrap().take().unwrap();
                    let out = collect_unique(&mut e, limits.max_tuples);
                    *results[k].lock().unwrap() = Some(out);
                });
            }
        });
        results
            .into_iter()
            .map(|m| m.into_inner().unwrap().expect("partition scanned"))
            .collect::<Result<Vec<_>>>()?
    };

    let mut seen = HashSet::new();
    let mut grams = Vec::new();
    let mut provenance = Vec::new();
    let mut tuples_seen = 0u64;
    for (chunk, count) in chunks {
        tuples_seen += count;
        for (g, idx) in chunk {
            if seen.insert(g.clone()) {
                provenance.push(catalog.tuple(&idx));
                grams.push(g);
            }
        }
    }
    if tuples_seen > limits.max_tuples {
        return Err(CpsdError::ResourceCap {
            what: format!("tuple enumeration for n={n}, r={r}"),
            limit: limits.max_tuples,
        });
    }
    Ok(GeneratorSet {
        n,
        r,
        rule,
        grams,
        provenance,
        tuples_seen,
    })
}

fn collect_unique(
    e: &mut GridEnumeration,
    limit: u64,
) -> Result<(Vec<(SymMatrix, Vec<usize>)>, u64)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let count = e.try_for_each(limit, |cat, idx| {
        let g = cat.gram(idx);
        if !seen.contains(&g) {
            seen.insert(g.clone());
            out.push((g, idx.to_vec()));
        }
    })?;
    Ok((out, count))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MembershipStatus {
    Member,
    Separated,
}

/// One term `weight · gram` of a conic decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedGenerator {
    #[serde(with = "exact::rational_serde")]
    pub weight: Rational,
    pub gram: SymMatrix,
    /// Grid tuple generating `gram`, when the generator came from the matrix grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<PsdTuple>,
    /// Grid point `v` with `gram = v vᵀ`, for the scalar cone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<ScalarGridPoint>,
}

/// Outcome of a conic membership test.
///
/// `Member`: the terms reconstruct `A` exactly with nonnegative weights.
/// `Separated`: `⟨M, G⟩ ≥ 0` on every generator and `⟨M, A⟩ < 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationResult {
    pub status: MembershipStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightedGenerator>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separator: Option<SymMatrix>,
}

impl SeparationResult {
    pub fn is_member(&self) -> bool {
        self.status == MembershipStatus::Member
    }
}

/// Solves `A = Σ w_g G_g, w ≥ 0`. On infeasibility the Farkas multipliers
/// are turned into a separator scaled to unit sup-norm.
pub fn conic_membership(
    a: &SymMatrix,
    generators: &[SymMatrix],
    max_pivots: u64,
) -> Result<ConicAnswer> {
    let n = a.dim();
    for g in generators {
        if g.dim() != n {
            return Err(CpsdError::DimensionMismatch {
                expected: n,
                found: g.dim(),
            });
        }
    }
    let mut p = LpProblem::nonnegative(generators.len());
    for (k, (i, j, v)) in a.upper_entries().enumerate() {
        let _ = (i, j);
        let coeffs = generators.iter().map(|g| g.upper()[k].clone()).collect();
        p.push(coeffs, Relation::Eq, v.clone());
    }
    let cert = lp::solve_feasibility(&p, max_pivots)?;
    if cert.is_feasible() {
        return Ok(ConicAnswer::Member(
            cert.primal.expect("feasible has primal"),
        ));
    }
    let y = cert.farkas.expect("infeasible has farkas");
    // ⟨M, X⟩ = Σ_i M_ii X_ii + 2 Σ_{i<j} M_ij X_ij, so M = -y on the diagonal, -y/2 off it
    let half = exact::rat(1, 2);
    let mut m = SymMatrix::zeros(n);
    for (k, (i, j, _)) in a.upper_entries().enumerate() {
        let v = if i == j {
            -y[k].clone()
        } else {
            -&y[k] * &half
        };
        m.set(i, j, v);
    }
    let scale = m.max_abs();
    if scale.is_zero() {
        return Err(CpsdError::Certificate("zero separator".into()));
    }
    let m = m.scaled(&(Rational::one() / scale));
    debug_assert!(trace_inner_unchecked(&m, a).is_negative());
    Ok(ConicAnswer::Separated(m))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConicAnswer {
    Member(Vec<Rational>),
    Separated(SymMatrix),
}

/// Membership of `A` in `C_r^n`, `n = dim A`.
pub fn member_c(a: &SymMatrix, r: usize, limits: &Limits) -> Result<SeparationResult> {
    let gens = build_generators(a.dim(), r, limits)?;
    member_c_with(a, &gens, limits)
}

/// Membership against a prebuilt generator set.
pub fn member_c_with(
    a: &SymMatrix,
    gens: &GeneratorSet,
    limits: &Limits,
) -> Result<SeparationResult> {
    if a.dim() != gens.n {
        return Err(CpsdError::DimensionMismatch {
            expected: gens.n,
            found: a.dim(),
        });
    }
    let a = a.clone().without_index();
    Ok(
        match conic_membership(&a, &gens.grams, limits.max_pivots)? {
            ConicAnswer::Member(w) => SeparationResult {
                status: MembershipStatus::Member,
                weights: Some(
                    w.into_iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(k, weight)| WeightedGenerator {
                            weight,
                            gram: gens.grams[k].clone(),
                            tuple: Some(gens.provenance[k].clone()),
                            point: None,
                        })
                        .collect(),
                ),
                separator: None,
            },
            ConicAnswer::Separated(m) => SeparationResult {
                status: MembershipStatus::Separated,
                weights: None,
                separator: Some(m),
            },
        },
    )
}

/// Outcome of a dual-cone check: either no grid point violates the
/// inequality, or the first violating point in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum DualMembership<W> {
    Member,
    Violated {
        witness: W,
        #[serde(with = "exact::rational_serde")]
        value: Rational,
    },
}

impl<W> DualMembership<W> {
    pub fn is_member(&self) -> bool {
        matches!(self, DualMembership::Member)
    }
}

/// `Σ_ij M_ij ⟨X_i, X_j⟩` for the tuple given by catalog indices.
fn trace_form(m: &SymMatrix, cat: &MatrixCatalog, idx: &[usize]) -> Rational {
    let nz: Vec<usize> = (0..idx.len())
        .filter(|&i| !cat.trace_of(idx[i]).is_zero())
        .collect();
    let two = int(2);
    let mut v = Rational::zero();
    for (p, &i) in nz.iter().enumerate() {
        for &j in &nz[p..] {
            let mij = m.get(i, j);
            if mij.is_zero() {
                continue;
            }
            let ip = cat.inner(idx[i], idx[j]);
            if ip.is_zero() {
                continue;
            }
            if i == j {
                v += mij * &*ip;
            } else {
                v += &two * mij * &*ip;
            }
        }
    }
    v
}

/// Membership of `M` in `D_r^n`: `Tr(p_M(X)) = Σ M_ij ⟨X_i, X_j⟩ ≥ 0` on the
/// whole matrix grid. Stops at the first violation in canonical order.
pub fn member_d(m: &SymMatrix, r: usize, limits: &Limits) -> Result<DualMembership<PsdTuple>> {
    member_d_with(m, r, DenominatorRule::PerEntry, limits, 1)
}

pub fn member_d_with(
    m: &SymMatrix,
    r: usize,
    rule: DenominatorRule,
    limits: &Limits,
    threads: usize,
) -> Result<DualMembership<PsdTuple>> {
    let n = m.dim();
    if n == 0 || r == 0 {
        return Err(CpsdError::InvalidArgument(
            "n and r must be positive".into(),
        ));
    }
    let catalog = Arc::new(MatrixCatalog::new(r, rule));
    let scan = |mut e: GridEnumeration| -> Result<Option<(Vec<usize>, Rational)>> {
        let mut count = 0u64;
        while let Some(idx) = e.next_indices() {
            count += 1;
            if count > limits.max_tuples {
                return Err(CpsdError::ResourceCap {
                    what: format!("tuple enumeration for n={n}, r={r}"),
                    limit: limits.max_tuples,
                });
            }
            let v = trace_form(m, &catalog, idx);
            if v.is_negative() {
                return Ok(Some((idx.to_vec(), v)));
            }
        }
        Ok(None)
    };
    let found = if threads <= 1 {
        scan(GridEnumeration::new(Arc::clone(&catalog), n))?
    } else {
        let parts = gridgen::partitions(&catalog, n);
        let results: Vec<Result<Option<(Vec<usize>, Rational)>>> = std::thread::scope(|s| {
            let handles: Vec<_> = parts
                .into_iter()
                .map(|p| {
                    let scan = &scan;
                    s.spawn(move || scan(p))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut first = None;
        for res in results {
            if let Some(hit) = res? {
                first = Some(hit);
                break;
            }
        }
        first
    };
    Ok(match found {
        None => DualMembership::Member,
        Some((idx, value)) => DualMembership::Violated {
            witness: catalog.tuple(&idx),
            value,
        },
    })
}

/// Minimum of `Σ M_ij ⟨X_i, X_j⟩` over the matrix grid and the first tuple
/// attaining it.
pub fn min_trace_form(m: &SymMatrix, r: usize, limits: &Limits) -> Result<(Rational, PsdTuple)> {
    let n = m.dim();
    let catalog = Arc::new(MatrixCatalog::new(r, DenominatorRule::PerEntry));
    let mut e = GridEnumeration::new(Arc::clone(&catalog), n);
    let mut best: Option<(Rational, Vec<usize>)> = None;
    e.try_for_each(limits.max_tuples, |cat, idx| {
        let v = trace_form(m, cat, idx);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, idx.to_vec()));
        }
    })?;
    let (v, idx) = best.expect("grid is never empty");
    Ok((v, catalog.tuple(&idx)))
}

/// Membership of `M` in `O_r^n`: `xᵀMx ≥ 0` on the scalar grid.
pub fn member_o(m: &SymMatrix, r: usize) -> Result<DualMembership<ScalarGridPoint>> {
    for x in gridgen::enum_scalar_grid(m.dim(), r) {
        let v = m.quad_form(&x.coords)?;
        if v.is_negative() {
            return Ok(DualMembership::Violated {
                witness: x,
                value: v,
            });
        }
    }
    Ok(DualMembership::Member)
}

/// Membership of `A` in `O_r^{n*}`, the conic hull of `vvᵀ` over the scalar grid.
pub fn member_ostar(a: &SymMatrix, r: usize, limits: &Limits) -> Result<SeparationResult> {
    let points = gridgen::enum_scalar_grid(a.dim(), r);
    let gens: Vec<SymMatrix> = points.iter().map(|v| SymMatrix::outer(&v.coords)).collect();
    let a = a.clone().without_index();
    Ok(match conic_membership(&a, &gens, limits.max_pivots)? {
        ConicAnswer::Member(w) => SeparationResult {
            status: MembershipStatus::Member,
            weights: Some(
                w.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, weight)| WeightedGenerator {
                        weight,
                        gram: gens[k].clone(),
                        tuple: None,
                        point: Some(points[k].clone()),
                    })
                    .collect(),
            ),
            separator: None,
        },
        ConicAnswer::Separated(m) => SeparationResult {
            status: MembershipStatus::Separated,
            weights: None,
            separator: Some(m),
        },
    })
}

/// Which boundary condition a matrix is claimed to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryKind {
    /// `A_ij = 0`.
    ZeroEntry { i: usize, j: usize },
    /// `A` has all `t×t` vertex-block sums equal to one; `u ≠ v` are vertices.
    AffineAt { u: usize, v: usize, t: usize },
    /// `A` is a `2nt` correlation matrix with all block sums equal to one;
    /// `p ≠ q` index the `2n` inputs (Alice's first, then Bob's).
    AffineBt { p: usize, q: usize, t: usize },
}

/// A nonzero `M` in the dual cone with `⟨A, M⟩ = 0`, proving `A` lies on the
/// boundary. For the affine cases `M = F ⊗ J_t` where `F` is `+1` on the two
/// chosen diagonal blocks and `-1` between them.
pub fn boundary_witness(a: &SymMatrix, kind: BoundaryKind) -> Result<SymMatrix> {
    let m = match kind {
        BoundaryKind::ZeroEntry { i, j } => {
            if i >= a.dim() || j >= a.dim() {
                return Err(CpsdError::Precondition(format!(
                    "entry ({i}, {j}) outside a {0}x{0} matrix",
                    a.dim()
                )));
            }
            if !a.get(i, j).is_zero() {
                return Err(CpsdError::Precondition(format!(
                    "entry ({i}, {j}) is {}, not zero",
                    a.get(i, j)
                )));
            }
            let mut e = SymMatrix::zeros(a.dim());
            e.set(i, j, Rational::one());
            e
        }
        BoundaryKind::AffineAt { u, v, t } | BoundaryKind::AffineBt { p: u, q: v, t } => {
            if t == 0 || !a.dim().is_multiple_of(t) {
                return Err(CpsdError::Precondition(format!(
                    "dimension {} is not a multiple of t = {t}",
                    a.dim()
                )));
            }
            let blocks = a.dim() / t;
            if let BoundaryKind::AffineBt { .. } = kind {
                if !blocks.is_multiple_of(2) {
                    return Err(CpsdError::Precondition(
                        "correlation matrices have an even number of input blocks".into(),
                    ));
                }
            }
            if u == v || u >= blocks || v >= blocks {
                return Err(CpsdError::Precondition(format!(
                    "blocks {u} and {v} must be distinct and below {blocks}"
                )));
            }
            let ix = BlockIndex::new(blocks, t);
            for p in 0..blocks {
                for q in p..blocks {
                    let s = ix.block_sum(a, p, q);
                    if !s.is_one() {
                        return Err(CpsdError::Precondition(format!(
                            "block sum ({p}, {q}) is {s}, not 1"
                        )));
                    }
                }
            }
            let mut f = SymMatrix::zeros(blocks);
            f.set(u, u, Rational::one());
            f.set(v, v, Rational::one());
            f.set(u, v, -Rational::one());
            f.kron(&SymMatrix::ones(t)).with_index(ix)?
        }
    };
    let ip = trace_inner_unchecked(a, &m);
    if !ip.is_zero() {
        return Err(CpsdError::Certificate(format!(
            "boundary witness has ⟨A, M⟩ = {ip}"
        )));
    }
    Ok(m)
}

/// Checks the dual-cone sufficient condition used for witnesses: `M` is PSD or
/// entrywise nonnegative.
pub fn obviously_dual(m: &SymMatrix) -> bool {
    m.is_nonnegative() || is_psd_exact(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn lim() -> Limits {
        Limits::default()
    }

    fn m(rows: &[&[i64]]) -> SymMatrix {
        SymMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn gram_examples() {
        let t = PsdTuple::new(
            1,
            vec![SymMatrix::diag(&[int(1)])],
            DenominatorRule::PerEntry,
        )
        .unwrap();
        assert_eq!(gram(&t), SymMatrix::diag(&[int(1)]));
        let t = PsdTuple::new(
            2,
            vec![
                SymMatrix::diag(&[rat(1, 2), int(0)]),
                SymMatrix::diag(&[int(0), rat(1, 2)]),
            ],
            DenominatorRule::PerEntry,
        )
        .unwrap();
        assert_eq!(gram(&t), SymMatrix::diag(&[rat(1, 4), rat(1, 4)]));
    }

    #[test]
    fn catalog_gram_matches_direct_gram() {
        let cat = Arc::new(MatrixCatalog::new(2, DenominatorRule::PerEntry));
        let mut e = GridEnumeration::new(Arc::clone(&cat), 3);
        while let Some(idx) = e.next_indices() {
            assert_eq!(cat.gram(idx), gram(&cat.tuple(idx)));
        }
    }

    #[test]
    fn generator_examples() {
        let g = build_generators(1, 1, &lim()).unwrap();
        assert_eq!(g.grams, vec![SymMatrix::diag(&[int(1)])]);
        let g = build_generators(2, 1, &lim()).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.grams.contains(&SymMatrix::diag(&[int(1), int(0)])));
        assert!(g.grams.contains(&SymMatrix::diag(&[int(0), int(1)])));
        let g = build_generators(2, 2, &lim()).unwrap();
        assert!(g.grams.contains(&SymMatrix::ones(2).scaled(&rat(1, 4))));
    }

    #[test]
    fn parallel_generators_match_serial() {
        let serial = build_generators_with(3, 2, DenominatorRule::PerEntry, &lim(), 1).unwrap();
        let par = build_generators_with(3, 2, DenominatorRule::PerEntry, &lim(), 4).unwrap();
        assert_eq!(serial.grams, par.grams);
        assert_eq!(serial.provenance, par.provenance);
        assert_eq!(serial.tuples_seen, par.tuples_seen);
    }

    #[test]
    fn member_c_examples() {
        assert!(member_c(&SymMatrix::diag(&[int(1), int(2)]), 1, &lim())
            .unwrap()
            .is_member());
        assert!(member_c(&SymMatrix::ones(2), 2, &lim())
            .unwrap()
            .is_member());
        let res = member_c(&SymMatrix::ones(2), 1, &lim()).unwrap();
        assert_eq!(res.status, MembershipStatus::Separated);
        let sep = res.separator.unwrap();
        assert_eq!(sep.max_abs(), int(1));
        assert!(trace_inner_unchecked(&sep, &SymMatrix::ones(2)).is_negative());
    }

    #[test]
    fn member_d_examples() {
        assert!(member_d(&SymMatrix::identity(2), 2, &lim())
            .unwrap()
            .is_member());
        assert!(member_d(&SymMatrix::ones(2), 3, &lim())
            .unwrap()
            .is_member());
        let neg = m(&[&[0, -1], &[-1, 0]]);
        assert!(member_d(&neg, 1, &lim()).unwrap().is_member());
        match member_d(&neg, 2, &lim()).unwrap() {
            DualMembership::Violated { witness, value } => {
                assert_eq!(value, rat(-1, 2));
                assert_eq!(exact::trace(&witness.mats()[0]), rat(1, 2));
                assert!(witness.mats()[0].is_diagonal());
                assert_eq!(witness.mats()[0], witness.mats()[1]);
            }
            DualMembership::Member => panic!("expected violation"),
        }
    }

    #[test]
    fn member_d_parallel_picks_canonical_first() {
        let neg = m(&[&[1, -2, 0], &[-2, 1, 0], &[0, 0, 0]]);
        let serial = member_d_with(&neg, 2, DenominatorRule::PerEntry, &lim(), 1).unwrap();
        let par = member_d_with(&neg, 2, DenominatorRule::PerEntry, &lim(), 3).unwrap();
        assert_eq!(serial, par);
        assert!(!serial.is_member());
    }

    #[test]
    fn member_o_examples() {
        assert!(member_o(&m(&[&[1, -1], &[-1, 1]]), 5).unwrap().is_member());
        match member_o(&m(&[&[0, -1], &[-1, 0]]), 2).unwrap() {
            DualMembership::Violated { witness, value } => {
                assert_eq!(witness.coords, vec![rat(1, 2), rat(1, 2)]);
                assert_eq!(value, rat(-1, 2));
            }
            DualMembership::Member => panic!(),
        }
    }

    #[test]
    fn member_ostar_examples() {
        assert!(member_ostar(&SymMatrix::identity(2), 1, &lim())
            .unwrap()
            .is_member());
        assert!(!member_ostar(&SymMatrix::ones(2), 1, &lim())
            .unwrap()
            .is_member());
        let res = member_ostar(&SymMatrix::ones(2), 2, &lim()).unwrap();
        assert!(res.is_member());
        let w = res.weights.unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].weight, int(4));
        for r in 1..=4 {
            assert!(!member_ostar(&m(&[&[2, -1], &[-1, 2]]), r, &lim())
                .unwrap()
                .is_member());
        }
    }

    #[test]
    fn boundary_zero_entry() {
        let a = SymMatrix::diag(&[int(1), int(1)]);
        let w = boundary_witness(&a, BoundaryKind::ZeroEntry { i: 0, j: 1 }).unwrap();
        assert_eq!(w, m(&[&[0, 1], &[1, 0]]));
        assert!(
            boundary_witness(&SymMatrix::ones(2), BoundaryKind::ZeroEntry { i: 0, j: 1 }).is_err()
        );
    }

    #[test]
    fn boundary_affine_requires_block_sums() {
        let err = boundary_witness(
            &SymMatrix::zeros(4),
            BoundaryKind::AffineAt { u: 0, v: 1, t: 2 },
        );
        assert!(matches!(err, Err(CpsdError::Precondition(_))));
        // J/4 on 2 vertices x 2 colors has every block sum equal to 1
        let a = SymMatrix::ones(4).scaled(&rat(1, 4));
        let w = boundary_witness(&a, BoundaryKind::AffineAt { u: 0, v: 1, t: 2 }).unwrap();
        assert!(is_psd_exact(&w));
        assert!(trace_inner_unchecked(&a, &w).is_zero());
    }
}
