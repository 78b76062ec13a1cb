//! Coloring-game feasibility programs over the inner cones.
//!
//! Game matrices are indexed vertex-major: `(u, i) ↦ u·t + i`. Correlation
//! matrices have `2n` blocks, Alice's inputs `0..n` followed by Bob's.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cones::{self, GeneratorSet, WeightedGenerator};
use crate::error::{CpsdError, Result};
use crate::exact::{self, int, rat, BlockIndex, DenominatorRule, PsdTuple, Rational, SymMatrix};
use crate::graph::Graph;
use crate::lp::{self, LpProblem, Relation};
use crate::Limits;

/// Which program to solve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `λ_k^r`: Gram matrices indexed by `V × [t]`.
    #[default]
    Q,
    /// `Λ_k^r`: correlation matrices indexed by `(X × A) ∪ (Y × B)`.
    Qa,
}

impl std::str::FromStr for Variant {
    type Err = CpsdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(Variant::Q),
            "qa" => Ok(Variant::Qa),
            _ => Err(CpsdError::InvalidArgument(format!(
                "unknown variant '{s}' (expected q or qa)"
            ))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Q => "q",
            Variant::Qa => "qa",
        })
    }
}

impl Variant {
    /// Number of index blocks for a graph on `n` vertices.
    pub fn blocks(self, n: usize) -> usize {
        match self {
            Variant::Q => n,
            Variant::Qa => 2 * n,
        }
    }

    pub fn index(self, n: usize, t: usize) -> BlockIndex {
        BlockIndex::new(self.blocks(n), t)
    }
}

/// Parameters of a single feasibility problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSpec {
    pub graph: Graph,
    pub t: usize,
    pub k: usize,
    pub r: usize,
    #[serde(default)]
    pub variant: Variant,
}

impl GameSpec {
    pub fn validate(&self) -> Result<()> {
        if self.t == 0 || self.k == 0 || self.r == 0 {
            return Err(CpsdError::InvalidArgument(
                "t, k and r must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn index(&self) -> BlockIndex {
        self.variant.index(self.graph.n(), self.t)
    }
}

fn check_index(a: &SymMatrix, blocks: usize, t: usize) -> Result<BlockIndex> {
    let ix = BlockIndex::new(blocks, t);
    if a.dim() != ix.dim() {
        return Err(CpsdError::DimensionMismatch {
            expected: ix.dim(),
            found: a.dim(),
        });
    }
    if let Some(own) = a.index() {
        if own != ix {
            return Err(CpsdError::InvalidArgument(format!(
                "matrix carries index {}x{}, expected {blocks}x{t}",
                own.blocks, own.block_size
            )));
        }
    }
    Ok(ix)
}

/// `L_{G,t}(A) = Σ_u Σ_{i≠j} A_{ui,uj} + Σ_{uv∈E} Σ_i A_{ui,vi}`, each edge once.
pub fn l_gt(a: &SymMatrix, g: &Graph, t: usize) -> Result<Rational> {
    let ix = check_index(a, g.n(), t)?;
    Ok(penalty_q(a, g, ix))
}

fn penalty_q(a: &SymMatrix, g: &Graph, ix: BlockIndex) -> Rational {
    let t = ix.block_size;
    let two = int(2);
    let mut s = Rational::zero();
    for u in 0..g.n() {
        for i in 0..t {
            for j in i + 1..t {
                let v = a.get(ix.flat(u, i), ix.flat(u, j));
                if !v.is_zero() {
                    s += &two * v;
                }
            }
        }
    }
    for &(u, v) in g.edges() {
        for i in 0..t {
            s += a.get(ix.flat(u, i), ix.flat(v, i));
        }
    }
    s
}

/// `max_{u,v} |Σ_{i,j} A_{ui,vj} − 1|` over vertex blocks of size `t`.
pub fn affine_at_residual(a: &SymMatrix, t: usize) -> Result<Rational> {
    if t == 0 || !a.dim().is_multiple_of(t) {
        return Err(CpsdError::DimensionMismatch {
            expected: t * (a.dim() / t.max(1)).max(1),
            found: a.dim(),
        });
    }
    let ix = check_index(a, a.dim() / t, t)?;
    Ok(residual(a, ix))
}

fn residual(a: &SymMatrix, ix: BlockIndex) -> Rational {
    let mut worst = Rational::zero();
    for p in 0..ix.blocks {
        for q in p..ix.blocks {
            let d = (ix.block_sum(a, p, q) - Rational::one()).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// `Z = I + J` of size `nt`, carrying the vertex-major index.
pub fn build_z(n: usize, t: usize) -> Result<SymMatrix> {
    if n == 0 || t == 0 {
        return Err(CpsdError::InvalidArgument(
            "n and t must be positive".into(),
        ));
    }
    let d = n * t;
    SymMatrix::identity(d)
        .add(&SymMatrix::ones(d))?
        .with_index(BlockIndex::new(n, t))
}

/// A conditional distribution `P(a, b | x, y)` with `x, y ∈ [inputs]` and
/// `a, b ∈ [outputs]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correlation {
    pub inputs: usize,
    pub outputs: usize,
    #[serde(with = "exact::rational_vec_serde")]
    values: Vec<Rational>,
}

impl Correlation {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            outputs,
            values: vec![Rational::zero(); inputs * inputs * outputs * outputs],
        }
    }

    fn pos(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        ((x * self.inputs + y) * self.outputs + a) * self.outputs + b
    }

    pub fn get(&self, a: usize, b: usize, x: usize, y: usize) -> &Rational {
        &self.values[self.pos(a, b, x, y)]
    }

    pub fn set(&mut self, a: usize, b: usize, x: usize, y: usize, v: Rational) {
        let p = self.pos(a, b, x, y);
        self.values[p] = v;
    }

    /// `P(a, b | x, y) = 1/t²`.
    pub fn uniform(inputs: usize, t: usize) -> Self {
        let v = rat(1, (t * t) as i64);
        Self {
            inputs,
            outputs: t,
            values: vec![v; inputs * inputs * t * t],
        }
    }

    /// Both players answer with the shared coloring `c`.
    pub fn from_coloring(c: &[usize], t: usize) -> Self {
        let mut p = Self::zeros(c.len(), t);
        for x in 0..c.len() {
            for y in 0..c.len() {
                p.set(c[x], c[y], x, y, Rational::one());
            }
        }
        p
    }

    /// The off-diagonal block `P(a, b | x, y) = R_{(X,x,a),(Y,y,b)}`.
    pub fn project(r: &SymMatrix, n: usize, t: usize) -> Result<Self> {
        let ix = check_index(r, 2 * n, t)?;
        let mut p = Self::zeros(n, t);
        for x in 0..n {
            for y in 0..n {
                for a in 0..t {
                    for b in 0..t {
                        p.set(a, b, x, y, r.get(ix.flat(x, a), ix.flat(n + y, b)).clone());
                    }
                }
            }
        }
        Ok(p)
    }
}

/// `𝓛_{G,t}(P) = Σ_u Σ_{i≠j} P(i,j|u,u) + Σ_{uv∈E} Σ_i P(i,i|u,v)`, each edge once
/// with `u < v`.
pub fn script_l(p: &Correlation, g: &Graph, t: usize) -> Result<Rational> {
    if p.inputs != g.n() || p.outputs != t {
        return Err(CpsdError::DimensionMismatch {
            expected: g.n() * t,
            found: p.inputs * p.outputs,
        });
    }
    let mut s = Rational::zero();
    for u in 0..g.n() {
        for i in 0..t {
            for j in 0..t {
                if i != j {
                    s += p.get(i, j, u, u);
                }
            }
        }
    }
    for &(u, v) in g.edges() {
        for i in 0..t {
            s += p.get(i, i, u, v);
        }
    }
    Ok(s)
}

fn penalty_qa(r: &SymMatrix, g: &Graph, ix: BlockIndex) -> Rational {
    let n = g.n();
    let t = ix.block_size;
    let mut s = Rational::zero();
    for u in 0..n {
        for i in 0..t {
            for j in 0..t {
                if i != j {
                    s += r.get(ix.flat(u, i), ix.flat(n + u, j));
                }
            }
        }
    }
    for &(u, v) in g.edges() {
        for i in 0..t {
            s += r.get(ix.flat(u, i), ix.flat(n + v, i));
        }
    }
    s
}

/// `𝓛_{G,t}` applied to the off-diagonal block of a `2nt` correlation matrix.
pub fn script_l_matrix(r: &SymMatrix, g: &Graph, t: usize) -> Result<Rational> {
    let ix = check_index(r, 2 * g.n(), t)?;
    Ok(penalty_qa(r, g, ix))
}

/// A linear functional on game matrices appearing as an LP row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RowKind {
    /// Sum of block `(p, q)`.
    BlockSum { p: usize, q: usize },
    /// `L_{G,t}` or `𝓛_{G,t}∘π`, depending on the variant.
    Penalty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRow {
    #[serde(flatten)]
    pub kind: RowKind,
    pub relation: Relation,
    #[serde(with = "exact::rational_serde")]
    pub rhs: Rational,
}

/// Rows of the feasibility program for one `t`: for each unordered block pair
/// `1 − 1/k ≤ sum ≤ 1 + 1/k`, then `penalty ≤ 1/k`.
pub fn game_rows(spec: &GameSpec) -> Vec<GameRow> {
    let blocks = spec.variant.blocks(spec.graph.n());
    let slack = rat(1, spec.k as i64);
    let mut rows = Vec::new();
    for p in 0..blocks {
        for q in p..blocks {
            let kind = RowKind::BlockSum { p, q };
            rows.push(GameRow {
                kind,
                relation: Relation::Le,
                rhs: Rational::one() + &slack,
            });
            rows.push(GameRow {
                kind,
                relation: Relation::Ge,
                rhs: Rational::one() - &slack,
            });
        }
    }
    rows.push(GameRow {
        kind: RowKind::Penalty,
        relation: Relation::Le,
        rhs: slack,
    });
    rows
}

/// Value of a row functional on `a` (dimension checked by the caller).
pub fn row_value(kind: RowKind, a: &SymMatrix, spec: &GameSpec) -> Rational {
    let ix = spec.index();
    match kind {
        RowKind::BlockSum { p, q } => ix.block_sum(a, p, q),
        RowKind::Penalty => match spec.variant {
            Variant::Q => penalty_q(a, &spec.graph, ix),
            Variant::Qa => penalty_qa(a, &spec.graph, ix),
        },
    }
}

/// True when `a` meets every row of the program exactly.
pub fn satisfies_rows(a: &SymMatrix, spec: &GameSpec) -> bool {
    a.dim() == spec.index().dim()
        && game_rows(spec).iter().all(|row| {
            let v = row_value(row.kind, a, spec);
            match row.relation {
                Relation::Le => v <= row.rhs,
                Relation::Ge => v >= row.rhs,
                Relation::Eq => v == row.rhs,
            }
        })
}

/// Outcome for one value of `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TStep {
    pub t: usize,
    pub feasible: bool,
    /// Generators after Gram deduplication.
    pub generators: usize,
    /// Distinct LP columns.
    pub columns: usize,
    /// Multipliers for the rows of [`game_rows`] proving infeasibility.
    #[serde(
        default,
        with = "exact::rational_opt_vec_serde",
        skip_serializing_if = "Option::is_none"
    )]
    pub farkas: Option<Vec<Rational>>,
}

/// A feasible matrix with its decomposition into grid Gram matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSolution {
    pub t: usize,
    pub matrix: SymMatrix,
    pub weights: Vec<WeightedGenerator>,
    #[serde(with = "exact::rational_serde")]
    pub residual: Rational,
    #[serde(with = "exact::rational_serde")]
    pub penalty: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameStatus {
    Feasible,
    NoneUpTo,
}

/// Result of the search over `t = 1, …, t_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameResult {
    pub graph: Graph,
    pub variant: Variant,
    pub k: usize,
    pub r: usize,
    pub t_max: usize,
    pub status: GameStatus,
    /// Smallest feasible `t`.
    pub t: Option<usize>,
    pub steps: Vec<TStep>,
    pub solution: Option<GameSolution>,
}

/// Shares generator sets across solves with the same `(dim, r)`.
#[derive(Default)]
pub struct GeneratorCache {
    slots: Mutex<HashMap<(usize, usize), Arc<Mutex<Option<Arc<GeneratorSet>>>>>>,
}

impl GeneratorCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(
        &self,
        dim: usize,
        r: usize,
        limits: &Limits,
        threads: usize,
    ) -> Result<Arc<GeneratorSet>> {
        let slot = Arc::clone(self.slots.lock().unwrap().entry((dim, r)).or_default());
        let mut guard = slot.lock().unwrap();
        if let Some(g) = guard.as_ref() {
            return Ok(Arc::clone(g));
        }
        let g = Arc::new(cones::build_generators_with(
            dim,
            r,
            DenominatorRule::PerEntry,
            limits,
            threads,
        )?);
        *guard = Some(Arc::clone(&g));
        Ok(g)
    }
}

/// Solves the program for a single `t`.
pub fn solve_step(
    spec: &GameSpec,
    gens: &GeneratorSet,
    limits: &Limits,
) -> Result<(TStep, Option<GameSolution>)> {
    spec.validate()?;
    let dim = spec.index().dim();
    if gens.n != dim || gens.r != spec.r {
        return Err(CpsdError::DimensionMismatch {
            expected: dim,
            found: gens.n,
        });
    }
    let rows = game_rows(spec);
    // identical columns are redundant; keep the first generator producing each
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for (gi, g) in gens.grams.iter().enumerate() {
        let col: Vec<Rational> = rows
            .iter()
            .map(|row| row_value(row.kind, g, spec))
            .collect();
        if seen.insert(col.clone()) {
            reps.push(gi);
            columns.push(col);
        }
    }
    let mut p = LpProblem::nonnegative(columns.len());
    for (ri, row) in rows.iter().enumerate() {
        p.push(
            columns.iter().map(|c| c[ri].clone()).collect(),
            row.relation,
            row.rhs.clone(),
        );
    }
    log::debug!(
        "t={} r={} k={}: {} generators, {} columns, {} rows",
        spec.t,
        spec.r,
        spec.k,
        gens.len(),
        columns.len(),
        rows.len()
    );
    let cert = lp::solve_feasibility(&p, limits.max_pivots)?;
    let mut step = TStep {
        t: spec.t,
        feasible: cert.is_feasible(),
        generators: gens.len(),
        columns: columns.len(),
        farkas: None,
    };
    if !cert.is_feasible() {
        step.farkas = cert.farkas;
        return Ok((step, None));
    }
    let x = cert.primal.expect("feasible has primal");
    let ix = spec.index();
    let mut a = SymMatrix::zeros(dim);
    let mut weights = Vec::new();
    for (c, w) in x.into_iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let gi = reps[c];
        a.add_scaled(&w, &gens.grams[gi])?;
        weights.push(WeightedGenerator {
            weight: w,
            gram: gens.grams[gi].clone(),
            tuple: Some(gens.provenance[gi].clone()),
            point: None,
        });
    }
    let a = a.with_index(ix)?;
    if !satisfies_rows(&a, spec) {
        return Err(CpsdError::Certificate(
            "reconstructed matrix violates the game constraints".into(),
        ));
    }
    let residual = residual(&a, ix);
    let penalty = row_value(RowKind::Penalty, &a, spec);
    Ok((
        step,
        Some(GameSolution {
            t: spec.t,
            matrix: a,
            weights,
            residual,
            penalty,
        }),
    ))
}

/// Smallest `t ≤ t_max` for which the program is feasible.
pub fn solve_game(
    g: &Graph,
    variant: Variant,
    k: usize,
    r: usize,
    t_max: usize,
    limits: &Limits,
    cache: &GeneratorCache,
    threads: usize,
) -> Result<GameResult> {
    if k == 0 || r == 0 || t_max == 0 {
        return Err(CpsdError::InvalidArgument(
            "k, r and t_max must be positive".into(),
        ));
    }
    if g.n() == 0 {
        return Err(CpsdError::InvalidArgument("graph has no vertices".into()));
    }
    let mut steps = Vec::new();
    for t in 1..=t_max {
        let spec = GameSpec {
            graph: g.clone(),
            t,
            k,
            r,
            variant,
        };
        let gens = cache.get(spec.index().dim(), r, limits, threads)?;
        let (step, sol) = solve_step(&spec, &gens, limits)?;
        steps.push(step);
        if let Some(sol) = sol {
            return Ok(GameResult {
                graph: g.clone(),
                variant,
                k,
                r,
                t_max,
                status: GameStatus::Feasible,
                t: Some(t),
                steps,
                solution: Some(sol),
            });
        }
    }
    Ok(GameResult {
        graph: g.clone(),
        variant,
        k,
        r,
        t_max,
        status: GameStatus::NoneUpTo,
        t: None,
        steps,
        solution: None,
    })
}

/// `λ_k^r(G)` searched over `t ≤ t_max`.
pub fn lambda_kr(
    g: &Graph,
    k: usize,
    r: usize,
    t_max: usize,
    limits: &Limits,
) -> Result<GameResult> {
    solve_game(
        g,
        Variant::Q,
        k,
        r,
        t_max,
        limits,
        &GeneratorCache::new(),
        1,
    )
}

/// `Λ_k^r(G)` searched over `t ≤ t_max`.
pub fn big_lambda_kr(
    g: &Graph,
    k: usize,
    r: usize,
    t_max: usize,
    limits: &Limits,
) -> Result<GameResult> {
    solve_game(
        g,
        Variant::Qa,
        k,
        r,
        t_max,
        limits,
        &GeneratorCache::new(),
        1,
    )
}

/// How to pick `ε` in [`perturb_interior`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpsilonChoice {
    /// `min{1/(k(t²+t−1)), 1/(k·L(Z))}` with `L(Z) = nt² − nt + mt`: the
    /// largest `ε` meeting both bounds.
    #[default]
    Tight,
    /// Uses `nt² − nt + 2mt` in the second term, counting each edge in both
    /// orientations.
    Conservative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perturbation {
    #[serde(with = "exact::rational_serde")]
    pub epsilon: Rational,
    pub matrix: SymMatrix,
}

/// `ε` for a graph with `n` vertices and `m` edges.
pub fn perturbation_epsilon(
    n: usize,
    m: usize,
    t: usize,
    k: usize,
    choice: EpsilonChoice,
) -> Rational {
    let (n, m, t, k) = (n as i64, m as i64, t as i64, k as i64);
    let first = rat(1, k * (t * t + t - 1));
    let edge_weight = match choice {
        EpsilonChoice::Tight => m * t,
        EpsilonChoice::Conservative => 2 * m * t,
    };
    let denom = n * t * t - n * t + edge_weight;
    if denom == 0 {
        first
    } else {
        first.min(rat(1, k * denom))
    }
}

/// `Z_ε = (1−ε)A + εZ` for a winning strategy `A` (`A ∈ 𝒜^t`, `L_{G,t}(A) = 0`).
/// Both relaxed bounds are re-checked exactly on the output.
pub fn perturb_interior(
    a: &SymMatrix,
    g: &Graph,
    t: usize,
    k: usize,
    choice: EpsilonChoice,
) -> Result<Perturbation> {
    if k == 0 {
        return Err(CpsdError::InvalidArgument("k must be positive".into()));
    }
    let ix = check_index(a, g.n(), t)?;
    let res = residual(a, ix);
    if !res.is_zero() {
        return Err(CpsdError::Precondition(format!(
            "block-sum residual is {res}, not 0"
        )));
    }
    let l = penalty_q(a, g, ix);
    if !l.is_zero() {
        return Err(CpsdError::Precondition(format!("L_G,t(A) is {l}, not 0")));
    }
    let eps = perturbation_epsilon(g.n(), g.m(), t, k, choice);
    let z = build_z(g.n(), t)?;
    let mut out = a.clone().without_index().scaled(&(Rational::one() - &eps));
    out.add_scaled(&eps, &z.without_index())?;
    let out = out.with_index(ix)?;
    let bound = rat(1, k as i64);
    if residual(&out, ix) > bound || penalty_q(&out, g, ix) > bound {
        return Err(CpsdError::Certificate(format!(
            "perturbation with ε = {eps} leaves the relaxed set"
        )));
    }
    Ok(Perturbation {
        epsilon: eps,
        matrix: out,
    })
}

/// `R = [[A, A], [A, A]]` with the `2n`-block correlation index.
pub fn doubling_embedding(a: &SymMatrix, t: usize) -> Result<SymMatrix> {
    if t == 0 || !a.dim().is_multiple_of(t) {
        return Err(CpsdError::InvalidArgument(format!(
            "dimension {} is not a multiple of t = {t}",
            a.dim()
        )));
    }
    let d = a.dim();
    let r = SymMatrix::from_fn(2 * d, |i, j| a.get(i % d, j % d).clone());
    r.with_index(BlockIndex::new(2 * (d / t), t))
}

/// The tuple `(X/2, X/2)` padded to `2r × 2r`. Its Gram matrix is
/// `[[G, G], [G, G]] / 4` for `G` the Gram matrix of `X`, and halving keeps
/// denominators within `2r`.
pub fn doubling_tuple(x: &PsdTuple) -> Result<PsdTuple> {
    let half = rat(1, 2);
    let r2 = 2 * x.r();
    let halves: Vec<SymMatrix> = x
        .mats()
        .iter()
        .map(|m| m.scaled(&half).padded(r2))
        .collect();
    let mats = halves.iter().chain(halves.iter()).cloned().collect();
    PsdTuple::new(r2, mats, DenominatorRule::PerEntry)
}

/// Lifts a `λ`-feasible solution to a `Λ`-feasible one at level `2r`, with
/// weights `4w` on the doubled tuples.
pub fn double_solution(sol: &GameSolution) -> Result<GameSolution> {
    let matrix = doubling_embedding(&sol.matrix, sol.t)?;
    let four = int(4);
    let weights = sol
        .weights
        .iter()
        .map(|w| {
            let tuple = w
                .tuple
                .as_ref()
                .ok_or_else(|| CpsdError::InvalidArgument("weight without tuple".into()))?;
            let doubled = doubling_tuple(tuple)?;
            Ok(WeightedGenerator {
                weight: &w.weight * &four,
                gram: cones::gram(&doubled),
                tuple: Some(doubled),
                point: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ix = matrix.index().expect("index attached");
    Ok(GameSolution {
        t: sol.t,
        residual: residual(&matrix, ix),
        // the off-diagonal block of R is A, so 𝓛(π(R)) = L(A)
        penalty: sol.penalty.clone(),
        matrix,
        weights,
    })
}

/// Exact check that `sol` is feasible for `spec`: tuples admissible at level
/// `spec.r`, Gram matrices recomputed, nonnegative weights summing to the
/// matrix, and all rows satisfied.
pub fn verify_solution(spec: &GameSpec, sol: &GameSolution) -> Result<bool> {
    spec.validate()?;
    let ix = spec.index();
    if sol.t != spec.t || sol.matrix.dim() != ix.dim() {
        return Ok(false);
    }
    let mut acc = SymMatrix::zeros(ix.dim());
    for w in &sol.weights {
        if w.weight.is_negative() {
            return Ok(false);
        }
        let Some(tuple) = &w.tuple else {
            return Ok(false);
        };
        if tuple.r() > spec.r
            || tuple.n() != ix.dim()
            || tuple.validate(DenominatorRule::PerEntry).is_err()
        {
            return Ok(false);
        }
        let g = cones::gram(tuple);
        if g != w.gram.clone().without_index() {
            return Ok(false);
        }
        acc.add_scaled(&w.weight, &g)?;
    }
    if acc != sol.matrix.clone().without_index() {
        return Ok(false);
    }
    Ok(satisfies_rows(&acc, spec)
        && residual(&acc, ix) == sol.residual
        && row_value(RowKind::Penalty, &acc, spec) == sol.penalty)
}

/// Checks a Farkas vector for `spec` against every generator of the cone,
/// re-enumerating the grid. Independent of the deduplicated LP.
pub fn verify_infeasible(
    spec: &GameSpec,
    farkas: &[Rational],
    gens: &GeneratorSet,
) -> Result<bool> {
    spec.validate()?;
    let rows = game_rows(spec);
    if farkas.len() != rows.len() || gens.n != spec.index().dim() || gens.r != spec.r {
        return Ok(false);
    }
    for (y, row) in farkas.iter().zip(&rows) {
        let ok = match row.relation {
            Relation::Le => !y.is_positive(),
            Relation::Ge => !y.is_negative(),
            Relation::Eq => true,
        };
        if !ok {
            return Ok(false);
        }
    }
    let yb: Rational = farkas.iter().zip(&rows).map(|(y, row)| y * &row.rhs).sum();
    if !yb.is_positive() {
        return Ok(false);
    }
    for g in &gens.grams {
        let c: Rational = farkas
            .iter()
            .zip(&rows)
            .filter(|(y, _)| !y.is_zero())
            .map(|(y, row)| y * row_value(row.kind, g, spec))
            .sum();
        if c.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One cell of a parameter sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCell {
    pub k: usize,
    pub r: usize,
    pub result: GameResult,
}

/// Solves every `(k, r)` pair, running cells on up to `threads` workers.
/// Output order is `k` ascending, then `r` ascending, independent of
/// scheduling.
pub fn sweep(
    g: &Graph,
    variant: Variant,
    ks: &[usize],
    rs: &[usize],
    t_max: usize,
    limits: &Limits,
    threads: usize,
) -> Result<Vec<SweepCell>> {
    let cells: Vec<(usize, usize)> = ks
        .iter()
        .flat_map(|&k| rs.iter().map(move |&r| (k, r)))
        .collect();
    let cache = GeneratorCache::new();
    let run = |(k, r): (usize, usize)| -> Result<SweepCell> {
        let result = solve_game(g, variant, k, r, t_max, limits, &cache, 1)?;
        Ok(SweepCell { k, r, result })
    };
    if threads <= 1 {
        return cells.into_iter().map(run).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let out: Vec<Mutex<Option<Result<SweepCell>>>> =
        cells.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..threads.min(cells.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                *out[i].lock().unwrap() = Some(run(cells[i]));
            });
        }
    });
    out.into_iter()
        .map(|m| m.into_inner().unwrap().expect("cell solved"))
        .collect()
}
