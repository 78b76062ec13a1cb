//! Graphs: DIMACS ingestion, a brute-force chromatic number, and the matrices
//! realizing classical colorings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CpsdError, Result};
use crate::exact::{int, rat, BlockIndex, DenominatorRule, PsdTuple, Rational, SymMatrix};

/// Largest graph accepted by [`chromatic_number`].
pub const MAX_ORACLE_VERTICES: usize = 16;

/// Simple undirected graph on vertices `0..n`. Edges are stored as `(u, v)`
/// with `u < v`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph, normalizing edge orientation and collapsing duplicates.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(CpsdError::InvalidArgument(format!(
                    "edge ({u}, {v}) outside vertex range 0..{n}"
                )));
            }
            if u == v {
                return Err(CpsdError::InvalidArgument(format!(
                    "self-loop at vertex {u}"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(CpsdError::DimensionMismatch {
                expected: self.n,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == u || b == u)
            .count()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    /// Cycle on `n ≥ 3` vertices; smaller `n` gives the path (or a single vertex).
    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|u| (u, u + 1)).collect();
        if n >= 3 {
            edges.push((0, n - 1));
        }
        Self::new(n, edges).expect("cycle is simple")
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, []).expect("edgeless graph")
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Self::new(10, outer.chain(spokes).chain(inner)).expect("Petersen graph is simple")
    }

    /// True when `c` (colors `0..t`) gives adjacent vertices distinct colors.
    pub fn is_proper_coloring(&self, c: &[usize]) -> bool {
        c.len() == self.n && self.edges.iter().all(|&(u, v)| c[u] != c[v])
    }
}

/// Parses DIMACS `.col` text (`c` comments, `p edge n m`, `e u v` with
/// 1-based vertices). Duplicate edges are collapsed with a warning.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut declared_m = 0usize;
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let mut it = raw.split_whitespace();
        let Some(tag) = it.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if n.is_some() {
                    return Err(CpsdError::parse(line, "duplicate problem line"));
                }
                let fmt = it
                    .next()
                    .ok_or_else(|| CpsdError::parse(line, "missing format"))?;
                if fmt != "edge" && fmt != "col" {
                    return Err(CpsdError::parse(line, format!("unknown format '{fmt}'")));
                }
                let nv = parse_count(it.next(), line, "vertex count")?;
                declared_m = parse_count(it.next(), line, "edge count")?;
                if it.next().is_some() {
                    return Err(CpsdError::parse(line, "trailing tokens in problem line"));
                }
                n = Some(nv);
            }
            "e" => {
                let nv = n.ok_or_else(|| CpsdError::parse(line, "edge before problem line"))?;
                let u = parse_count(it.next(), line, "edge endpoint")?;
                let v = parse_count(it.next(), line, "edge endpoint")?;
                if it.next().is_some() {
                    return Err(CpsdError::parse(line, "trailing tokens in edge line"));
                }
                for w in [u, v] {
                    if w == 0 || w > nv {
                        return Err(CpsdError::parse(
                            line,
                            format!("vertex {w} out of range 1..={nv}"),
                        ));
                    }
                }
                if u == v {
                    return Err(CpsdError::parse(line, format!("self-loop at vertex {u}")));
                }
                let e = (u.min(v) - 1, u.max(v) - 1);
                if !seen.insert(e) {
                    log::warn!("line {line}: duplicate edge {u}-{v} ignored");
                    continue;
                }
                edges.push(e);
            }
            other => {
                return Err(CpsdError::parse(
                    line,
                    format!("unknown line type '{other}'"),
                ));
            }
        }
    }
    let n = n.ok_or_else(|| CpsdError::parse(0, "missing problem line"))?;
    if declared_m != edges.len() {
        log::warn!(
            "problem line declares {declared_m} edges, found {} distinct",
            edges.len()
        );
    }
    Graph::new(n, edges)
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| CpsdError::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| CpsdError::parse(line, format!("bad {what} '{tok}'")))
}

/// Canonical DIMACS text for `g`.
pub fn to_dimacs(g: &Graph) -> String {
    let mut s = format!("p edge {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "e {} {}", u + 1, v + 1);
    }
    s
}

/// Reads a graph from a `.col` file, or from the JSON form when the path ends
/// in `.json`.
pub fn read_graph(path: &std::path::Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let g: Graph = serde_json::from_str(&text)?;
        let checked = Graph::new(g.n, g.edges.iter().copied())?;
        if checked.edges.len() != g.edges.len() {
            log::warn!("duplicate edges collapsed");
        }
        return match g.labels {
            Some(l) => checked.with_labels(l),
            None => Ok(checked),
        };
    }
    parse_dimacs(&text)
}

/// Exact chromatic number by backtracking over `1..=t_max` colors. Returns
/// `None` when more than `t_max` colors are needed.
pub fn chromatic_number(g: &Graph, t_max: usize) -> Result<Option<usize>> {
    if g.n() > MAX_ORACLE_VERTICES {
        return Err(CpsdError::ResourceCap {
            what: format!("brute-force coloring of {} vertices", g.n()),
            limit: MAX_ORACLE_VERTICES as u64,
        });
    }
    if g.n() == 0 {
        return Ok(Some(0));
    }
    Ok((1..=t_max).find(|&t| find_coloring(g, t).is_some()))
}

/// A proper coloring with colors `0..t`, if one exists.
pub fn find_coloring(g: &Graph, t: usize) -> Option<Vec<usize>> {
    let adj = g.adjacency();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&u| std::cmp::Reverse(adj[u].len()));
    let mut c = vec![usize::MAX; g.n()];
    if assign(&adj, &order, 0, t, 0, &mut c) {
        Some(c)
    } else {
        None
    }
}

// `used` is the number of colors already in play; a fresh color is always
// the next unused one, which removes color permutations from the search.
fn assign(
    adj: &[Vec<usize>],
    order: &[usize],
    pos: usize,
    t: usize,
    used: usize,
    c: &mut [usize],
) -> bool {
    if pos == order.len() {
        return true;
    }
    let u = order[pos];
    for col in 0..t.min(used + 1) {
        if adj[u].iter().any(|&w| c[w] == col) {
            continue;
        }
        c[u] = col;
        if assign(adj, order, pos + 1, t, used.max(col + 1), c) {
            return true;
        }
    }
    c[u] = usize::MAX;
    false
}

/// The 0/1 matrix `A = x xᵀ` with `x_{ui} = [c(u) = i]`, indexed by
/// vertex-major `(u, i)`, and a tuple of `r×r` matrices whose Gram matrix is
/// `A / n²`. The tuple uses `X_{ui} = (x_{ui}/n) E_11`, which needs `r ≥ n`.
#[derive(Clone, Debug)]
pub struct ColoringMatrix {
    pub matrix: SymMatrix,
    pub witness: Option<PsdTuple>,
}

pub fn coloring_to_matrix(g: &Graph, c: &[usize], t: usize, r: usize) -> Result<ColoringMatrix> {
    if c.len() != g.n() {
        return Err(CpsdError::DimensionMismatch {
            expected: g.n(),
            found: c.len(),
        });
    }
    if let Some(u) = c.iter().position(|&col| col >= t) {
        return Err(CpsdError::ImproperColoring(format!(
            "vertex {u} has color {} but t = {t}",
            c[u]
        )));
    }
    if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| c[u] == c[v]) {
        return Err(CpsdError::ImproperColoring(format!(
            "edge ({u}, {v}) is monochromatic"
        )));
    }
    let n = g.n();
    let ix = BlockIndex::new(n, t);
    let x: Vec<Rational> = (0..n * t)
        .map(|f| {
            let (u, i) = ix.split(f);
            if c[u] == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let matrix = SymMatrix::outer(&x).with_index(ix)?;
    let witness = if r >= n && n > 0 {
        let scale = rat(1, n as i64);
        let mats = x
            .iter()
            .map(|xi| SymMatrix::diag(&[xi * &scale]).padded(r))
            .collect();
        Some(PsdTuple::new(r, mats, DenominatorRule::PerEntry)?)
    } else {
        None
    };
    Ok(ColoringMatrix { matrix, witness })
}

/// Scale factor `n²` relating a coloring matrix to its witness Gram matrix.
pub fn coloring_scale(g: &Graph) -> Rational {
    int((g.n() * g.n()) as i64)
}
